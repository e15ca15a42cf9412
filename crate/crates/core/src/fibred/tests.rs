use proptest::prelude::*;

use super::*;
use crate::fincat::{GroupTable, GroupoidSpec};

fn gpd(spec: GroupoidSpec) -> FinGroupoid {
    spec.build().unwrap()
}

fn c4_to_c2() -> GroupoidFibration {
    let (c4, c2) = (gpd(GroupoidSpec::Cyclic(4)), gpd(GroupoidSpec::Cyclic(2)));
    analyze_fibration(&group_map(&c4, &c2, vec![0, 1, 0, 1]).unwrap()).unwrap()
}

fn s3_to_c2() -> GroupoidFibration {
    let (s3, c2) = (gpd(GroupoidSpec::Symmetric(3)), gpd(GroupoidSpec::Cyclic(2)));
    analyze_fibration(&group_map(&s3, &c2, GroupTable::sign_map(3)).unwrap()).unwrap()
}

/// Two points swapped by `C2`, lying over the one-object `C2`.
fn action_over_c2() -> GroupoidFibration {
    let t = GroupTable::cyclic(2);
    let act = vec![vec![0, 1], vec![1, 0]];
    let total = gpd(GroupoidSpec::Action { group: t, act });
    let c2 = gpd(GroupoidSpec::Cyclic(2));
    let mor_map = (0..total.n_mor()).map(|m| m / 2).collect();
    analyze_fibration(&FinFunctor::new(total.cat().clone(), c2.cat().clone(), vec![0, 0], mor_map).unwrap()).unwrap()
}

fn squares(t: &GroupTable) -> Vec<usize> {
    let mut v: Vec<usize> = (0..t.order()).map(|g| t.mul[g][g]).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[test]
fn fibration_examples() {
    let f = c4_to_c2();
    assert_eq!(f.fibre(0).objects.len(), 1);
    assert_eq!(f.fibre(0).incl, vec![0, 2]);
    assert_eq!(f.lift(0, 0), 0);
    assert_eq!(f.lift(1, 0), 1);

    let f = s3_to_c2();
    // In S3 the even permutations are exactly the squares.
    assert_eq!(f.fibre(0).incl, squares(&GroupTable::symmetric(3)));
    assert_eq!(f.fibre(0).gpd.n_mor(), 3);

    let (c2, c4) = (gpd(GroupoidSpec::Cyclic(2)), gpd(GroupoidSpec::Cyclic(4)));
    let err = analyze_fibration(&group_map(&c2, &c4, vec![0, 2]).unwrap()).unwrap_err();
    assert_eq!(err, Error::NotFibration { morphism: 1, target: 0 });
}

#[test]
fn fibre_pseudofunctor_examples() {
    let f = c4_to_c2();
    let ps = fibre_pseudofunctor(&f).unwrap();
    assert_eq!(ps.trans[1].size(0, 0), 2);
    assert_eq!(f.over(1, 0, 0), vec![1, 3]);
    assert_eq!(ps.trans[0], crate::profunctor::identity_module(ps.fibres[0].clone()));
    assert!(ps.unit[0].is_identity());
    ps.check_coherence().unwrap();

    for f in [s3_to_c2(), action_over_c2()] {
        let ps = fibre_pseudofunctor(&f).unwrap();
        for (&(a, b), (c, phi)) in &ps.comp {
            assert!(phi.is_iso());
            assert_eq!(c.module.total_size(), ps.trans[f.base.compose(b, a)].total_size());
        }
        ps.check_coherence().unwrap();
        let cf = cleavage_form(&f).unwrap();
        forms_equivalence(&f, &ps, &cf).unwrap();
    }
}

#[test]
fn comp_constraint_sizes_on_s3() {
    let f = s3_to_c2();
    let ps = fibre_pseudofunctor(&f).unwrap();
    // Each composite is a coend over a one-object fibre with |A3| = 3
    // identifications per class, and |S3| / 2 = 3 elements per grading.
    for ((a, b), (c, _)) in &ps.comp {
        assert_eq!(c.module.size(0, 0), 3, "({a}, {b})");
        assert_eq!(c.first.size(0, 0) * c.second.size(0, 0), 9);
    }
}

#[test]
fn cleavage_conjugation_convention() {
    let f = s3_to_c2();
    let cf = cleavage_form(&f).unwrap();
    let h = &f.total;
    let sigma = f.lift(1, 0);
    for (y_local, &y) in f.fibre(0).incl.iter().enumerate() {
        let expect = h.compose_all(&[h.inv(sigma), y, sigma]);
        assert_eq!(f.fibre(0).incl[cf.pullback[1].mor_map[y_local]], expect);
    }
    // φ(1̄, 1̄) = σ(0)⁻¹ σ(1̄) σ(1̄) = σ(1̄)².
    assert_eq!(f.fibre(0).incl[cf.constraint[&(1, 1)][0]], h.compose(sigma, sigma));
}

#[test]
fn corrupted_data_is_rejected() {
    let f = s3_to_c2();
    let mut cf = cleavage_form(&f).unwrap();
    let fb = &cf.fibres[0];
    let k = cf.constraint[&(1, 1)][0];
    let other = fb.hom(0, 0).iter().copied().find(|&m| m != k).unwrap();
    cf.constraint.insert((1, 1), vec![other]);
    assert!(cf.verify().is_err());

    let mut ps = fibre_pseudofunctor(&f).unwrap();
    let phi = &mut ps.comp.get_mut(&(1, 1)).unwrap().1;
    phi.components[0].rotate_left(1);
    assert!(ps.check_coherence().is_err());
}

#[test]
fn grothendieck_round_trip() {
    for f in [c4_to_c2(), s3_to_c2(), action_over_c2()] {
        let gr = grothendieck(&cleavage_form(&f).unwrap()).unwrap();
        let phi = grothendieck_comparison(&f, &gr).unwrap();
        assert_eq!(phi.obj_map.len(), f.total.n_obj());
        for p in 0..f.base.n_obj() {
            let (a, b) = (gr.fibration.fibre(p).cat(), f.fibre(p).cat());
            assert!(crate::fincat::check_equivalence(a, b).is_equivalent());
        }
    }
}

#[test]
fn grothendieck_of_constants() {
    let c3 = gpd(GroupoidSpec::Cyclic(3));
    let gr = grothendieck(&constant_cleavage(&c3, &FinGroupoid::terminal()).unwrap()).unwrap();
    assert_eq!((gr.fibration.total.n_obj(), gr.fibration.total.n_mor()), (1, 3));
    assert!(gr.fibration.proj.is_fully_faithful());

    let c2 = gpd(GroupoidSpec::Cyclic(2));
    let gr = grothendieck(&constant_cleavage(&FinGroupoid::terminal(), &c2).unwrap()).unwrap();
    assert_eq!((gr.fibration.total.n_obj(), gr.fibration.total.n_mor()), (1, 2));
    assert!(crate::fincat::check_equivalence(gr.fibration.total.cat(), c2.cat()).is_equivalent());
}

#[test]
fn grothendieck_rejects_non_equivalence() {
    let c2 = gpd(GroupoidSpec::Cyclic(2));
    let two = FinGroupoid::from_cat(FinCat::discrete(2)).unwrap();
    let mut cf = constant_cleavage(&c2, &two).unwrap();
    let d = two.cat().clone();
    cf.pullback[1] = FinFunctor::new(d.clone(), d.clone(), vec![0, 0], vec![d.idn(0), d.idn(0)]).unwrap();
    assert!(grothendieck(&cf).is_err());
}

#[test]
fn aut_fibration_examples() {
    let af = aut_fibration(&c4_to_c2()).unwrap();
    let zero = af.base_aut.obj(0, 0);
    let fb = af.fibration.fibre(zero);
    let objs: Vec<(usize, usize)> = fb.objects.iter().map(|&i| af.total_aut.conj.objects[i]).collect();
    assert_eq!(objs, vec![(0, 0), (0, 2)]);
    let c = fb.cat();
    for i in 0..2 {
        let und: Vec<usize> = c.hom(i, i).iter().map(|&k| af.total_aut.conj.underlying[fb.incl[k]]).collect();
        assert_eq!(und, vec![0, 2]);
        assert!(c.hom(i, 1 - i).is_empty());
    }
    af.haut.check_coherence().unwrap();

    let f = s3_to_c2();
    let t = GroupTable::symmetric(3);
    let af = aut_fibration(&f).unwrap();
    let fb = af.fibration.fibre(af.base_aut.obj(0, 1));
    let objs: Vec<usize> = fb.objects.iter().map(|&i| af.total_aut.conj.objects[i].1).collect();
    let involutions: Vec<usize> = (1..6).filter(|&g| t.mul[g][g] == 0).collect();
    assert_eq!(objs, involutions);
    let even = squares(&t);
    let inv = |g: usize| (0..6).find(|&h| t.mul[g][h] == 0).unwrap();
    for (i, &x) in objs.iter().enumerate() {
        for (j, &x1) in objs.iter().enumerate() {
            let oracle = even.iter().filter(|&&k| t.mul[t.mul[k][x]][inv(k)] == x1).count();
            assert_eq!(fb.cat().hom(i, j).len(), oracle);
        }
    }
}

#[test]
fn trivial_fibration_aut() {
    let c3 = gpd(GroupoidSpec::Cyclic(3));
    let f = analyze_fibration(&FinFunctor::identity(c3.cat().clone())).unwrap();
    let af = aut_fibration(&f).unwrap();
    for fb in af.fibration.fibres() {
        assert_eq!((fb.objects.len(), fb.gpd.n_mor()), (1, 1));
    }
}

#[test]
fn h_monoidale_examples() {
    let m = h_monoidale(&c4_to_c2()).unwrap();
    assert_eq!(m.tensor[0].p_size(0, 0, 0), 4);
    assert!(m.report.all_pass(), "{}", m.report.to_text());
    let m = h_monoidale(&s3_to_c2()).unwrap();
    assert!(m.report.all_pass(), "{}", m.report.to_text());
    let m = h_monoidale(&action_over_c2()).unwrap();
    assert!(m.report.all_pass(), "{}", m.report.to_text());
}

#[test]
fn haut_monoidale_examples() {
    let f = c4_to_c2();
    let af = aut_fibration(&f).unwrap();
    let m = haut_monoidale(&f, &af).unwrap();
    assert!(m.report.all_pass(), "{}", m.report.to_text());
    let (c, _, table) = &m.tensor[0];
    let o = c.obj(0, 0).unwrap();
    assert_eq!(table.pairs(o, o, o).len(), 4);
    let odd = c.obj(0, 1).unwrap();
    assert!(table.pairs(o, o, odd).is_empty());

    let f = s3_to_c2();
    let af = aut_fibration(&f).unwrap();
    let m = haut_monoidale(&f, &af).unwrap();
    assert!(m.report.all_pass(), "{}", m.report.to_text());
}

#[test]
fn z_component_examples() {
    let f = c4_to_c2();
    let af = aut_fibration(&f).unwrap();
    let z = z_component(&f, &af).unwrap();
    assert_eq!(af.hat.fibre(0).objects.len(), 4);
    let i = af.hat.fibre(0).local_obj(af.total_aut.obj(0, 0));
    assert_eq!(z.components[0].size(i, 0), 2);
    assert!(z.squares.iter().all(|s| s.is_iso()));

    let one = gpd(GroupoidSpec::Cyclic(1));
    let f = analyze_fibration(&FinFunctor::identity(one.cat().clone())).unwrap();
    let z = z_component(&f, &aut_fibration(&f).unwrap()).unwrap();
    assert_eq!(z.components[0].size(0, 0), 1);

    let e = FinGroupoid::empty();
    let f = analyze_fibration(&FinFunctor::identity(e.cat().clone())).unwrap();
    let z = z_component(&f, &aut_fibration(&f).unwrap()).unwrap();
    assert!(z.components.is_empty() && z.squares.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lifting_iff_surjective(n in 1usize..9, m in 1usize..7, d in 0usize..7) {
        let d = d % m;
        prop_assume!((n * d) % m == 0);
        let (cn, cm) = (gpd(GroupoidSpec::Cyclic(n)), gpd(GroupoidSpec::Cyclic(m)));
        let map: Vec<usize> = (0..n).map(|k| k * d % m).collect();
        let mut image = map.clone();
        image.sort_unstable();
        image.dedup();
        let res = analyze_fibration(&group_map(&cn, &cm, map).unwrap());
        prop_assert_eq!(res.is_ok(), image.len() == m);
    }
}
