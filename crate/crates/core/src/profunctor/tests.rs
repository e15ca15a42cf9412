use super::*;
use crate::fincat::{FinFunctor, GroupTable, GroupoidSpec};
use proptest::prelude::*;

fn cyc(n: usize) -> Arc<FinCat> {
    GroupoidSpec::Cyclic(n).build().unwrap().cat().clone()
}

/// `M(b, a) = hom(Gb, Fa)` for functors `F: A → C`, `G: B → C`.
fn hom_module(f: &FinFunctor, g: &FinFunctor) -> Module {
    let c = f.cod.clone();
    Module::new(
        f.dom.clone(),
        g.dom.clone(),
        |b, a| c.hom(g.obj_map[b], f.obj_map[a]).len(),
        |beta, a, x| {
            let y = c.hom(g.obj_map[g.dom.tgt(beta)], f.obj_map[a])[x];
            c.hom_index(c.compose(y, g.mor_map[beta]))
        },
        |alpha, b, x| {
            let y = c.hom(g.obj_map[b], f.obj_map[f.dom.src(alpha)])[x];
            c.hom_index(c.compose(f.mor_map[alpha], y))
        },
    )
    .unwrap()
}

/// Homomorphism `C_n → C_k` sending the generator to `j`.
fn cyc_hom(n: usize, k: usize, j: usize) -> FinFunctor {
    FinFunctor::new(cyc(n), cyc(k), vec![0], (0..n).map(|i| i * j % k).collect()).unwrap()
}

/// Number of classes of the zig-zag relation, by breadth-first search.
fn brute_coend_size(m: &Module, n: &Module, c: usize, a: usize) -> usize {
    let b_cat = m.cod();
    let mut nodes = Vec::new();
    for b in 0..b_cat.n_obj() {
        for x in 0..m.size(b, a) {
            for y in 0..n.size(c, b) {
                nodes.push((b, x, y));
            }
        }
    }
    let mut seen = vec![false; nodes.len()];
    let mut classes = 0;
    for s in 0..nodes.len() {
        if seen[s] {
            continue;
        }
        classes += 1;
        seen[s] = true;
        let mut stack = vec![nodes[s]];
        while let Some((b, x, y)) = stack.pop() {
            let mut nbrs = Vec::new();
            for beta in 0..b_cat.n_mor() {
                let (b0, b1) = (b_cat.src(beta), b_cat.tgt(beta));
                if b1 == b {
                    nbrs.push((b0, m.left(beta, a, x), None));
                }
                if b0 == b {
                    let y1 = n.right(beta, c, y);
                    for x1 in 0..m.size(b1, a) {
                        if m.left(beta, a, x1) == x {
                            nbrs.push((b1, x1, Some(y1)));
                        }
                    }
                }
                if b1 == b {
                    for y0 in 0..n.size(c, b0) {
                        if n.right(beta, c, y0) == y {
                            nbrs.push((b0, m.left(beta, a, x), Some(y0)));
                        }
                    }
                }
            }
            for (b2, x2, y2) in nbrs {
                let Some(y2) = y2 else { continue };
                let i = nodes.iter().position(|&t| t == (b2, x2, y2)).unwrap();
                if !seen[i] {
                    seen[i] = true;
                    stack.push(nodes[i]);
                }
            }
        }
    }
    classes
}

#[test]
fn identity_module_sizes() {
    assert_eq!(identity_module(cyc(1)).size(0, 0), 1);
    let s3 = GroupoidSpec::Symmetric(3).build().unwrap();
    assert_eq!(identity_module(s3.cat().clone()).size(0, 0), 6);
    let cc = Arc::new(cyc(2).coproduct(&cyc(2)));
    let id = identity_module(cc);
    assert_eq!((id.size(0, 1), id.size(1, 0), id.size(1, 1)), (0, 0, 2));
}

#[test]
fn free_orbits_over_c2_compose_to_two() {
    let id = identity_module(cyc(2));
    let comp = compose_modules(&id, &id).unwrap();
    assert_eq!(comp.module.size(0, 0), 2);
    assert_eq!(brute_coend_size(&id, &id, 0, 0), 2);
}

#[test]
fn composite_with_empty_is_empty() {
    let c = cyc(3);
    let e = Module::empty(c.clone(), c.clone());
    let m = identity_module(c);
    assert!(compose_modules(&m, &e).unwrap().module.is_empty());
    assert!(compose_modules(&e, &m).unwrap().module.is_empty());
}

#[test]
fn mismatched_boundaries_are_rejected() {
    let m = identity_module(cyc(2));
    let n = identity_module(cyc(3));
    assert!(matches!(compose_modules(&m, &n), Err(Error::Mismatch(_))));
}

#[test]
fn unitors_are_isomorphisms() {
    let f = cyc_hom(4, 2, 1);
    let g = cyc_hom(6, 2, 1);
    let m = hom_module(&f, &g);
    let (lc, l) = left_unitor(&m).unwrap();
    let (rc, r) = right_unitor(&m).unwrap();
    assert!(l.is_iso() && r.is_iso());
    assert_eq!(lc.module.total_size(), m.total_size());
    assert_eq!(rc.module.total_size(), m.total_size());
}

#[test]
fn composition_matches_brute_force() {
    let cases = [(4, 2, 1, 6, 1), (6, 3, 1, 3, 1), (2, 4, 2, 4, 1), (3, 3, 1, 3, 2)];
    for (n1, k, j1, n2, j2) in cases {
        let m = hom_module(&cyc_hom(n1, k, j1), &cyc_hom(k, k, 1));
        let n = hom_module(&cyc_hom(k, k, 1), &cyc_hom(n2, k, j2));
        let comp = compose_modules(&m, &n).unwrap();
        assert_eq!(comp.module.size(0, 0), brute_coend_size(&m, &n, 0, 0));
    }
}

#[test]
fn identity_functor_gives_identity_module() {
    let s3 = GroupoidSpec::Symmetric(3).build().unwrap();
    let w = functor_to_modules(&FinFunctor::identity(s3.cat().clone())).unwrap();
    let id = identity_module(s3.cat().clone());
    assert_eq!(w.lower, id);
    assert_eq!(w.upper, id);
}

#[test]
fn functor_module_examples() {
    let to_trivial = FinFunctor::new(cyc(2), cyc(1), vec![0], vec![0, 0]).unwrap();
    let w = functor_to_modules(&to_trivial).unwrap();
    assert_eq!(w.lower.size(0, 0), 1);
    let c2 = cyc(2);
    let cc = Arc::new(c2.coproduct(&c2));
    let incl = FinFunctor::new(c2, cc, vec![0], vec![0, 1]).unwrap();
    let w = functor_to_modules(&incl).unwrap();
    assert_eq!((w.lower.size(0, 0), w.lower.size(1, 0)), (2, 0));
}

#[test]
fn triangle_identities_hold() {
    let s3 = GroupoidSpec::Symmetric(3).build().unwrap();
    let sign = GroupTable::sign_map(3);
    let sgn = FinFunctor::new(s3.cat().clone(), cyc(2), vec![0], sign).unwrap();
    for f in [cyc_hom(4, 2, 1), cyc_hom(2, 4, 2), cyc_hom(3, 6, 2), sgn] {
        functor_to_modules(&f).unwrap().check_triangles().unwrap();
    }
}

#[test]
fn associator_is_an_isomorphism() {
    let m = hom_module(&cyc_hom(4, 2, 1), &cyc_hom(2, 2, 1));
    let n = hom_module(&cyc_hom(2, 2, 1), &cyc_hom(6, 2, 1));
    let p = hom_module(&cyc_hom(6, 3, 1), &cyc_hom(3, 3, 2));
    let (l, r, iso) = associator(&m, &n, &p).unwrap();
    iso.verify_iso(&l.module, &r.module).unwrap();
}

#[test]
fn hcomp_is_functorial() {
    // Automorphisms of hom_{C4} by right translation are module maps.
    let c = cyc(4);
    let id = identity_module(c.clone());
    let shift = |k: usize| ModuleMorphism {
        components: vec![(0..4).map(|x| c.hom_index(c.compose(x, k))).collect()],
    };
    for k in 0..4 {
        shift(k).verify(&id, &id).unwrap();
    }
    let comp = compose_modules(&id, &id).unwrap();
    for (s, t, s1, t1) in [(1, 2, 3, 1), (2, 2, 1, 3), (0, 1, 1, 0)] {
        let lhs = hcomp(&shift(s).then(&shift(s1)), &shift(t).then(&shift(t1)), &comp, &comp).unwrap();
        let a = hcomp(&shift(s), &shift(t), &comp, &comp).unwrap();
        let b = hcomp(&shift(s1), &shift(t1), &comp, &comp).unwrap();
        assert_eq!(lhs, a.then(&b));
    }
}

#[test]
fn karoubi_examples() {
    let s3 = GroupoidSpec::Symmetric(3).build().unwrap();
    let k = karoubi(s3.cat()).unwrap();
    assert!(crate::fincat::check_equivalence(&k.qa, s3.cat()).is_equivalent());
    let monoid = Arc::new(FinCat::new(1, vec![0, 0], vec![0, 0], vec![0], |g, f| g.max(f)).unwrap());
    assert_eq!(karoubi(&monoid).unwrap().qa.n_obj(), 2);
    assert_eq!(karoubi(&Arc::new(FinCat::empty())).unwrap().qa.n_obj(), 0);
}

fn random_perm(seed: u64, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    v
}

proptest! {
    #[test]
    fn composition_commutes_with_relabelling(seed in any::<u64>(), j1 in 1usize..4, j2 in 0usize..4) {
        let m = hom_module(&cyc_hom(4, 4, j1), &cyc_hom(4, 4, 1));
        let n = hom_module(&cyc_hom(4, 4, 1), &cyc_hom(2, 4, 2 * (j2 % 2)));
        let pm: Vec<Vec<usize>> = vec![random_perm(seed, m.size(0, 0))];
        let pn: Vec<Vec<usize>> = vec![random_perm(seed ^ 0x5555, n.size(0, 0))];
        let (m1, n1) = (m.relabel(&pm), n.relabel(&pn));
        let c = compose_modules(&m, &n).unwrap();
        let c1 = compose_modules(&m1, &n1).unwrap();
        // Relabel each raw triple and compare classes.
        let iso = c.induced(&c1.module, |cc, a, b, x, y| {
            c1.class(cc, a, b, pm[0][x], pn[0][y])
        }).unwrap();
        prop_assert!(iso.verify_iso(&c.module, &c1.module).is_ok());
    }

    #[test]
    fn associator_exists_for_cyclic_homs(k in 1usize..5, j in 0usize..5) {
        let m = hom_module(&cyc_hom(k, k, 1), &cyc_hom(k, k, 1));
        let n = hom_module(&cyc_hom(k, k, j % k.max(1)), &cyc_hom(1, k, 0));
        let p = identity_module(cyc(1));
        let (l, r, iso) = associator(&m, &n, &p).unwrap();
        prop_assert!(iso.verify_iso(&l.module, &r.module).is_ok());
    }
}
