use super::*;
use crate::fincat::{GroupoidSpec, NatTrans};
use crate::report::Status;
use proptest::prelude::*;

fn gpd(spec: GroupoidSpec) -> FinGroupoid {
    spec.build().unwrap()
}

#[test]
fn cartesian_sizes() {
    let c2 = cartesian_promonoidal(&gpd(GroupoidSpec::Cyclic(2))).unwrap();
    assert_eq!(c2.p_size(0, 0, 0), 4);
    let triv = cartesian_promonoidal(&gpd(GroupoidSpec::Cyclic(1))).unwrap();
    assert_eq!(triv.p_size(0, 0, 0), 1);
    let disc = FinGroupoid::from_cat(FinCat::discrete(2)).unwrap();
    let d = cartesian_promonoidal(&disc).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                assert_eq!(d.p_size(a, b, c), usize::from(a == b && b == c));
            }
        }
    }
}

#[test]
fn cartesian_coherence_passes() {
    for spec in [GroupoidSpec::Cyclic(1), GroupoidSpec::Cyclic(2), GroupoidSpec::Symmetric(3)] {
        let pr = cartesian_promonoidal(&gpd(spec)).unwrap();
        let r = check_promonoidal(&pr);
        assert!(r.all_pass(), "{}", r.to_text());
        assert_eq!(r.summary.skipped, 0);
    }
}

#[test]
fn coherence_on_two_object_groupoid() {
    let g = gpd(GroupoidSpec::Action { group: crate::fincat::GroupTable::cyclic(2), act: vec![vec![0, 1], vec![1, 0]] });
    let r = check_promonoidal(&cartesian_promonoidal(&g).unwrap());
    assert!(r.all_pass(), "{}", r.to_text());
}

#[test]
fn perturbed_associator_breaks_pentagon() {
    let mut pr = cartesian_promonoidal(&gpd(GroupoidSpec::Symmetric(3))).unwrap();
    pr.assoc[0].swap(0, 1);
    let r = check_promonoidal(&pr);
    assert_eq!(r.status_of("pentagon"), Some(Status::Fail));
    assert!(r.entries.iter().any(|e| e.check_id == "pentagon" && e.witness.as_deref().unwrap().contains("element")));
}

#[test]
fn convolution_examples() {
    let g = gpd(GroupoidSpec::Cyclic(2));
    let pr = cartesian_promonoidal(&g).unwrap();
    let c = g.cat().clone();
    let f = SetFunctor::new(c.clone(), vec![2], vec![vec![0, 1], vec![1, 0]]).unwrap();
    let h = SetFunctor::new(c.clone(), vec![3], vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
    let conv = convolve(&pr, &f, &h).unwrap();
    assert_eq!(conv.functor.sizes, vec![6]);
    pointwise_iso(&pr, &f, &h, &conv).unwrap();
    let unit = convolve(&pr, &pr.j, &h).unwrap();
    left_unit_iso(&pr, &h, &unit).unwrap();
    let empty = SetFunctor::constant(c.clone(), 0);
    assert_eq!(convolve(&pr, &empty, &h).unwrap().functor.total_size(), 0);
}

#[test]
fn convolution_rejects_foreign_functor() {
    let pr = cartesian_promonoidal(&gpd(GroupoidSpec::Cyclic(2))).unwrap();
    let other = SetFunctor::terminal(gpd(GroupoidSpec::Cyclic(3)).cat().clone());
    assert!(matches!(convolve(&pr, &other, &other), Err(Error::Mismatch(_))));
}

/// Brute-force oracle: orbit count of `∐_{a,b} P(a,b;c) × Fa × Gb` under
/// the generating relations, by repeated relaxation of labels.
fn brute_size(pr: &Promonoidal, f: &SetFunctor, g: &SetFunctor) -> usize {
    let c = &pr.base;
    let mut elems = Vec::new();
    for x in 0..pr.p_size(0, 0, 0) {
        for y in 0..f.sizes[0] {
            for z in 0..g.sizes[0] {
                elems.push((x, y, z));
            }
        }
    }
    let mut label: Vec<usize> = (0..elems.len()).collect();
    let idx = |t: (usize, usize, usize)| elems.iter().position(|&e| e == t).unwrap();
    loop {
        let mut changed = false;
        for &(x, y, z) in &elems {
            for s in 0..c.n_mor() {
                for t in 0..c.n_mor() {
                    // (P(s,t;1)x, y, z) ~ (x, F s y, G t z)
                    let j = idx((pr.p_left(s, t, 0, x), y, z));
                    let k = idx((x, f.act(s, y), g.act(t, z)));
                    let m = label[j].min(label[k]);
                    if label[j] != m || label[k] != m {
                        label[j] = m;
                        label[k] = m;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut l = label;
    l.sort();
    l.dedup();
    l.len()
}

fn random_functor(c: &Arc<FinCat>, size: usize, seed: u64) -> SetFunctor {
    // A sum of orbits: each element's generator image chosen as a permutation.
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let order = c.n_mor();
    // Cyclic group: pick a permutation of order dividing `order`.
    loop {
        let mut p: Vec<usize> = (0..size).collect();
        p.shuffle(&mut rng);
        let mut pow = vec![(0..size).collect::<Vec<_>>()];
        for _ in 1..order {
            let last = pow.last().unwrap();
            pow.push(last.iter().map(|&x| p[x]).collect());
        }
        let back: Vec<usize> = pow.last().unwrap().iter().map(|&x| p[x]).collect();
        if back.iter().enumerate().all(|(i, &x)| i == x) {
            return SetFunctor::new(c.clone(), vec![size], pow).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn convolution_matches_brute_force_and_pointwise(seed in any::<u64>(), m in 0usize..4, k in 0usize..4) {
        let g = gpd(GroupoidSpec::Cyclic(2));
        let pr = cartesian_promonoidal(&g).unwrap();
        let f = random_functor(g.cat(), m, seed);
        let h = random_functor(g.cat(), k, seed.wrapping_add(1));
        let conv = convolve(&pr, &f, &h).unwrap();
        prop_assert_eq!(conv.functor.sizes[0], brute_size(&pr, &f, &h));
        let iso: NatTrans = pointwise_iso(&pr, &f, &h, &conv).unwrap();
        prop_assert!(iso.is_iso());
    }
}
