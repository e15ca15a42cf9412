use std::sync::Arc;

use super::*;
use crate::dayconv::{check_promonoidal, convolve};
use crate::fincat::{GroupTable, GroupoidSpec};

fn gpd(spec: GroupoidSpec) -> FinGroupoid {
    spec.build().unwrap()
}

/// Conjugacy classes and centralizer orders by direct enumeration on the
/// multiplication table.
fn conj_oracle(t: &GroupTable) -> (usize, Vec<usize>) {
    let n = t.order();
    let inv: Vec<usize> = (0..n).map(|g| (0..n).find(|&h| t.mul[g][h] == 0).unwrap()).collect();
    let mut seen = vec![false; n];
    let mut classes = 0;
    for a in 0..n {
        if !seen[a] {
            classes += 1;
            for g in 0..n {
                seen[t.mul[t.mul[g][a]][inv[g]]] = true;
            }
        }
    }
    let cent = (0..n).map(|a| (0..n).filter(|&g| t.mul[g][a] == t.mul[a][g]).count()).collect();
    (classes, cent)
}

#[test]
fn aut_groupoid_examples() {
    let t = aut_groupoid(&gpd(GroupoidSpec::Cyclic(1))).unwrap();
    assert_eq!((t.aut().n_obj(), t.aut().n_mor()), (1, 1));
    let s3 = aut_groupoid(&gpd(GroupoidSpec::Symmetric(3))).unwrap();
    assert_eq!((s3.aut().n_obj(), s3.aut().n_mor(), s3.component_count()), (6, 36, 3));
    let mut orders: Vec<usize> = (0..6).map(|o| s3.aut().hom(o, o).len()).collect();
    orders.sort();
    assert_eq!(orders, vec![2, 2, 2, 3, 3, 6]);
    let c2 = aut_groupoid(&gpd(GroupoidSpec::Cyclic(2))).unwrap();
    assert_eq!((c2.aut().n_obj(), c2.aut().n_mor(), c2.component_count()), (2, 4, 2));
}

#[test]
fn components_and_centralizers_match_oracle() {
    for t in [GroupTable::cyclic(4), GroupTable::symmetric(3), GroupTable::dihedral(4), GroupTable::klein()] {
        let (classes, cent) = conj_oracle(&t);
        let ag = aut_groupoid(&gpd(GroupoidSpec::Delooping(t.clone()))).unwrap();
        assert_eq!(ag.component_count(), classes);
        for (o, &(_, a)) in ag.conj.objects.iter().enumerate() {
            assert_eq!(ag.aut().hom(o, o).len(), cent[a]);
        }
    }
}

#[test]
fn q_is_a_discrete_fibration_with_section() {
    let g = gpd(GroupoidSpec::Action { group: GroupTable::symmetric(3), act: GroupTable::symmetric(3).mul.clone() });
    let ag = aut_groupoid(&g).unwrap();
    ag.check_unique_lifts().unwrap();
    assert!(ag.i.then(&ag.q).unwrap().is_identity());
    // Aut action is conjugation.
    for f in 0..g.n_mor() {
        let p = g.src(f);
        for (i, &a) in g.hom(p, p).iter().enumerate() {
            let q = g.tgt(f);
            assert_eq!(g.hom(q, q)[ag.aut_functor.act(f, i)], g.compose_all(&[f, a, g.inv(f)]));
        }
    }
}

#[test]
fn aut_promonoidal_sizes_and_braiding_inverse() {
    let g = gpd(GroupoidSpec::Symmetric(3));
    let ag = aut_groupoid(&g).unwrap();
    let (pr, table) = promonoidal_aut(&ag).unwrap();
    let e = ag.obj(0, g.idn(0));
    assert_eq!(pr.p_size(e, e, e), 36);
    for c in 0..6 {
        if c != e {
            assert_eq!(pr.p_size(e, e, c), 0);
        }
    }
    let braid = pr.braiding.as_ref().unwrap();
    for a in 0..6 {
        let x = ag.conj.objects[a].1;
        for b in 0..6 {
            for c in 0..6 {
                for (i, &(u, v)) in table.pairs(a, b, c).iter().enumerate() {
                    let (w1, w2) = table.pairs(b, a, c)[braid[pr.idx3(a, b, c)][i]];
                    // Inverse formula: u = w2, v = ʷ²x⁻¹ ∘ w1.
                    assert_eq!((w2, g.compose(g.conj(w2, g.inv(x)), w1)), (u, v));
                }
            }
        }
    }
}

#[test]
fn aut_promonoidal_coherence() {
    for spec in [GroupoidSpec::Cyclic(1), GroupoidSpec::Cyclic(4), GroupoidSpec::Symmetric(3)] {
        let ag = aut_groupoid(&gpd(spec)).unwrap();
        let (pr, _) = promonoidal_aut(&ag).unwrap();
        let r = check_promonoidal(&pr);
        assert!(r.all_pass(), "{}", r.to_text());
        assert_eq!(r.summary.skipped, 0);
    }
}

#[test]
fn balanced_star_autonomy() {
    for spec in [GroupoidSpec::Cyclic(1), GroupoidSpec::Cyclic(4), GroupoidSpec::Symmetric(3)] {
        let r = check_balanced_star_autonomy(&gpd(spec)).unwrap();
        assert!(r.all_pass(), "{}", r.to_text());
    }
}

#[test]
fn elements_equivalence_examples() {
    let g = gpd(GroupoidSpec::Symmetric(3));
    let ag = aut_groupoid(&g).unwrap();
    let aut = CrossedGSet::aut(&g).unwrap();
    let el = elements_functor(&ag, &aut).unwrap();
    assert!(el.sizes.iter().all(|&n| n == 1));
    let triv = CrossedGSet::trivially_graded(&g, SetFunctor::representable(g.cat().clone(), 0)).unwrap();
    let el = elements_functor(&ag, &triv).unwrap();
    for (o, &(p, a)) in ag.conj.objects.iter().enumerate() {
        assert_eq!(el.sizes[o] > 0, a == g.idn(p));
    }
    for c in [&aut, &triv, &aut.product(&triv).unwrap()] {
        roundtrip_crossed(&ag, c).unwrap();
        roundtrip_elements(&ag, &elements_functor(&ag, c).unwrap()).unwrap();
    }
}

#[test]
fn equivariance_failure_names_witness() {
    let g = gpd(GroupoidSpec::Symmetric(3));
    let x = SetFunctor::terminal(g.cat().clone());
    let bad = crate::fincat::NatTrans { components: vec![vec![1]] };
    let err = CrossedGSet::new(g, x, bad).unwrap_err();
    assert!(matches!(err, Error::Equivariance { .. }), "{err}");
}

#[test]
fn to_centre_examples() {
    let c2 = gpd(GroupoidSpec::Cyclic(2));
    let fam = Arc::new(TestFamily::standard(&c2).unwrap());
    let aut = CrossedGSet::aut(&c2).unwrap();
    let hb = to_centre(&aut, &fam).unwrap();
    // u_{Y,*}(a, y) = (Y(a) y, a) verbatim.
    for (yi, y) in fam.functors.iter().enumerate() {
        for a in 0..2 {
            for e in 0..y.sizes[0] {
                assert_eq!(hb.u[yi][0][a * y.sizes[0] + e], y.act(a, e) * 2 + a);
            }
        }
    }
    let triv = CrossedGSet::trivially_graded(&c2, SetFunctor::constant(c2.cat().clone(), 3)).unwrap();
    let hb = to_centre(&triv, &fam).unwrap();
    for (yi, y) in fam.functors.iter().enumerate() {
        for i in 0..3 * y.sizes[0] {
            assert_eq!(hb.u[yi][0][i], (i % y.sizes[0]) * 3 + i / y.sizes[0]);
        }
    }
    assert_eq!(from_centre(&hb).unwrap(), triv);
}

#[test]
fn centre_round_trip_and_corruption() {
    let g = gpd(GroupoidSpec::Symmetric(3));
    let fam = Arc::new(TestFamily::standard(&g).unwrap());
    let c = CrossedGSet::aut(&g).unwrap().product(&CrossedGSet::aut(&g).unwrap()).unwrap();
    let mut hb = to_centre(&c, &fam).unwrap();
    assert_eq!(from_centre(&hb).unwrap(), c);
    let r = fam.representable[0];
    hb.u[r][0].swap(0, 1);
    assert!(matches!(from_centre(&hb), Err(Error::NotHalfBraiding(_))));
}

#[test]
fn universal_centre_piece_examples() {
    let g = gpd(GroupoidSpec::Symmetric(3));
    let ag = aut_groupoid(&g).unwrap();
    let (pr, table) = promonoidal_aut(&ag).unwrap();
    let fam = Arc::new(TestFamily::standard(&g).unwrap());
    let (hat, hb) = universal_centre_piece(&ag, &pr.j, &fam).unwrap();
    assert_eq!(hat.x.sizes, vec![1]);
    for (yi, y) in fam.functors.iter().enumerate() {
        for e in 0..y.sizes[0] {
            assert_eq!(hb.u[yi][0][e], e);
        }
    }
    for o in 0..6 {
        let rep = SetFunctor::representable(ag.aut().cat().clone(), o);
        let (hat, _) = universal_centre_piece(&ag, &rep, &fam).unwrap();
        assert_eq!(hat.x.sizes[0], g.hom(0, 0).len());
    }
    let s = SetFunctor::representable(ag.aut().cat().clone(), 3);
    let t = SetFunctor::representable(ag.aut().cat().clone(), 5);
    for (a, b) in [(&s, &t), (&pr.j, &s), (&t, &t)] {
        let conv = convolve(&pr, a, b).unwrap();
        hat_product_iso(&ag, &table, a, b, &conv).unwrap();
    }
}
