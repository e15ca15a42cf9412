use super::*;
use crate::autgpd::aut_groupoid;
use crate::fibred::{analyze_fibration, aut_fibration, group_map};
use crate::fincat::{GroupTable, GroupoidSpec};

fn gpd(spec: GroupoidSpec) -> FinGroupoid {
    spec.build().unwrap()
}

pub(super) fn c4_to_c2() -> GroupoidFibration {
    let (c4, c2) = (gpd(GroupoidSpec::Cyclic(4)), gpd(GroupoidSpec::Cyclic(2)));
    analyze_fibration(&group_map(&c4, &c2, vec![0, 1, 0, 1]).unwrap()).unwrap()
}

pub(super) fn s3_to_c2() -> GroupoidFibration {
    let (s3, c2) = (gpd(GroupoidSpec::Symmetric(3)), gpd(GroupoidSpec::Cyclic(2)));
    analyze_fibration(&group_map(&s3, &c2, GroupTable::sign_map(3)).unwrap()).unwrap()
}

fn identity_graded(f: CatPs) -> CentreObjectDelta {
    let g = f.base.clone();
    let delta = (0..g.n_obj()).map(|p| vec![g.idn(p); f.fibres[p].n_obj()]).collect();
    CentreObjectDelta { f, delta }
}

#[test]
fn identity_grading_braids_by_swap() {
    let f = c4_to_c2();
    let c = identity_graded(CatPs::fibres_of(&f).unwrap());
    let family = TestFamily::standard(&f.base).unwrap();
    let out = check_centre_object(&c, &family);
    assert!(out.report.all_pass(), "{}", out.report.to_text());
    for (k, per) in family.functors.iter().zip(&out.u) {
        let n = c.f.fibres[0].n_obj();
        for e in 0..k.sizes[0] {
            for x in 0..n {
                assert_eq!(per[0][e * n + x], x * k.sizes[0] + e);
            }
        }
    }
    let ag = aut_groupoid(&f.base).unwrap();
    let aut = to_aut_form(&c, &ag).unwrap();
    for (j, &(p, a)) in ag.conj.objects.iter().enumerate() {
        let want = if a == f.base.idn(p) { c.f.fibres[p].n_obj() } else { 0 };
        assert_eq!(aut.fibres[j].n_obj(), want);
    }
}

#[test]
fn hat_of_haut_is_a_centre_object() {
    let f = c4_to_c2();
    let af = aut_fibration(&f).unwrap();
    let ag = &af.base_aut;
    let c = hat_of_ps(&CatPs::haut(&af).unwrap(), ag).unwrap();
    assert_eq!(c.f.fibres[0].n_obj(), 4);
    let mut grades = c.delta[0].clone();
    grades.sort_unstable();
    assert_eq!(grades, vec![0, 0, 1, 1]);
    let out = check_centre_object(&c, &TestFamily::standard(&f.base).unwrap());
    assert!(out.report.all_pass(), "{}", out.report.to_text());
}

#[test]
fn perturbed_grading_fails_dinaturality() {
    let s3 = gpd(GroupoidSpec::Symmetric(3));
    let f = CatPs::constant(&s3, Arc::new(FinCat::terminal())).unwrap();
    let mut c = identity_graded(f);
    let t = (0..s3.n_mor()).find(|&m| !s3.is_identity(m) && s3.compose(m, m) == s3.idn(0)).unwrap();
    c.delta[0][0] = t;
    let out = check_centre_object(&c, &TestFamily::standard(&s3).unwrap());
    assert_eq!(out.report.status_of("dinatural"), Some(crate::report::Status::Fail));
    assert_eq!(out.report.status_of("grade.constant"), Some(crate::report::Status::Pass));
}

#[test]
fn both_round_trips_on_haut() {
    for f in [c4_to_c2(), s3_to_c2()] {
        let af = aut_fibration(&f).unwrap();
        let ag = &af.base_aut;
        let s = CatPs::haut(&af).unwrap();
        let r = aut_roundtrip(&s, ag).unwrap();
        assert!(r.all_pass(), "{}", r.to_text());
        let r = delta_roundtrip(&hat_of_ps(&s, ag).unwrap(), ag).unwrap();
        assert!(r.all_pass(), "{}", r.to_text());
        let r = delta_roundtrip(&identity_graded(CatPs::fibres_of(&f).unwrap()), ag).unwrap();
        assert!(r.all_pass(), "{}", r.to_text());
    }
}

#[test]
fn unit_is_terminal_at_identity_grades() {
    let f = s3_to_c2();
    let ag = aut_groupoid(&f.base).unwrap();
    let j = ps_unit(&ag).unwrap();
    let c = hat_of_ps(&j, &ag).unwrap();
    assert_eq!(*c.f.fibres[0], FinCat::terminal());
    assert_eq!(c.delta, vec![vec![f.base.idn(0)]]);
}

#[test]
fn convolution_unit_laws_and_counts() {
    let f = c4_to_c2();
    let af = aut_fibration(&f).unwrap();
    let ag = &af.base_aut;
    let h = CatPs::haut(&af).unwrap();
    let j = ps_unit(ag).unwrap();
    assert_eq!(ps_convolution(&h, &j, ag).unwrap().result, h);
    assert_eq!(ps_convolution(&j, &h, ag).unwrap().result, h);
    let hh = ps_convolution(&h, &h, ag).unwrap();
    assert_eq!(hh.result.fibres[ag.obj(0, 0)].n_obj(), 8);
    let empty = CatPs::constant(ag.aut(), Arc::new(FinCat::empty())).unwrap();
    assert!(ps_convolution(&empty, &h, ag).unwrap().result.is_empty());
}

#[test]
fn bidual_is_an_involution_and_comparison_is_iso() {
    for f in [c4_to_c2(), s3_to_c2()] {
        let af = aut_fibration(&f).unwrap();
        let ag = &af.base_aut;
        let h = CatPs::haut(&af).unwrap();
        let j = ps_unit(ag).unwrap();
        assert_eq!(bidual(&bidual(&h, ag).unwrap(), ag).unwrap(), h);
        assert_eq!(bidual(&j, ag).unwrap(), j);
        for (s, t) in [(&h, &h), (&h, &j), (&j, &h), (&j, &j)] {
            let (maps, r) = comparison(s, t, ag).unwrap();
            assert!(r.all_pass(), "{}", r.to_text());
            let ih = internal_hom(t, s, ag).unwrap();
            for (m, fib) in maps.iter().zip(&ih.result.fibres) {
                assert_eq!(m.obj_map.len(), fib.n_obj());
            }
        }
    }
}

#[test]
fn braiding_and_twist() {
    let f = s3_to_c2();
    let af = aut_fibration(&f).unwrap();
    let ag = &af.base_aut;
    let h = CatPs::haut(&af).unwrap();
    let j = ps_unit(ag).unwrap();
    let b = ps_braiding_twist(&h, &h, ag).unwrap();
    assert!(b.report.all_pass(), "{}", b.report.to_text());
    let bj = ps_braiding_twist(&j, &j, ag).unwrap();
    assert!(bj.theta.iter().all(|t| t.is_identity()));
    let bu = ps_braiding_twist(&h, &j, ag).unwrap();
    assert!(bu.gamma.iter().all(|g| g.obj_map.iter().enumerate().all(|(i, &x)| i == x)));
}

#[test]
fn full_centre_of_identity_on_c4() {
    let f = c4_to_c2();
    let af = aut_fibration(&f).unwrap();
    let h = identity_transform(&CatPs::haut(&af).unwrap()).unwrap();
    let cp = full_centre_hat(&h, &f, &af).unwrap();
    // ℍ(*) = C2 with one object; grade 0̄ has two summand objects.
    let a0 = f.base.idn(0);
    let sh = cp.source.delta[0].iter().position(|&a| a == a0).unwrap();
    assert_eq!(cp.k.components[0].size(sh, 0), 2);
    let r = centre_piece_validate(&cp);
    assert!(r.all_pass(), "{}", r.to_text());
    let z = z_agreement(&cp, &h, &f, &af).unwrap();
    assert!(z.all_pass(), "{}", z.to_text());
}

#[test]
fn full_centre_round_trips_are_exact() {
    for f in [c4_to_c2(), s3_to_c2()] {
        let af = aut_fibration(&f).unwrap();
        let haut = CatPs::haut(&af).unwrap();
        for copies in [vec![1], vec![2], vec![1, 0, 3]] {
            let h = multiplicity_transform(&haut, &copies).unwrap();
            let r = hat_roundtrip(&h, &f, &af).unwrap();
            assert!(r.all_pass(), "{copies:?}\n{}", r.to_text());
        }
    }
}

#[test]
fn perturbed_kappa_breaks_multiplicativity() {
    let f = s3_to_c2();
    let af = aut_fibration(&f).unwrap();
    let h = identity_transform(&CatPs::haut(&af).unwrap()).unwrap();
    let mut cp = full_centre_hat(&h, &f, &af).unwrap();
    let c = f.fibre(0).cat().clone();
    let row = cp.kappa[0].iter_mut().flatten().next().unwrap();
    let z = row.iter().position(|&v| v != usize::MAX && !c.is_identity(v)).unwrap();
    let w = (0..c.n_mor()).find(|&w| w != row[z] && c.src(w) == c.src(row[z])).unwrap();
    row[z] = w;
    let r = centre_piece_validate(&cp);
    assert!(!r.all_pass());
    assert_eq!(r.status_of("kappa.composition"), Some(crate::report::Status::Fail));
}

#[test]
fn empty_source_is_vacuous() {
    let f = c4_to_c2();
    let af = aut_fibration(&f).unwrap();
    let h = multiplicity_transform(&CatPs::haut(&af).unwrap(), &[0]).unwrap();
    let cp = full_centre_hat(&h, &f, &af).unwrap();
    assert!(cp.k.components.iter().all(|k| (0..k.cod().n_obj()).all(|s| (0..k.dom().n_obj()).all(|t| k.size(s, t) == 0))));
    assert!(hat_roundtrip(&h, &f, &af).unwrap().all_pass());
}

fn cp_instance(g: FinGroupoid, u: FinCat, terms: Vec<(usize, usize, Vec<usize>)>) -> CpModInstance {
    let u = Arc::new(u);
    let h = crate::seeded::RankOneSum { terms }.module(g.cat(), &u).unwrap();
    CpModInstance { u, g, h }
}

#[test]
fn cp_modcat_counts_match_centralisers() {
    // Free C3-orbit: δ is constant on the orbit, three choices.
    let c3 = gpd(GroupoidSpec::Cyclic(3));
    let r = cp_modcat_instance(&cp_instance(c3, FinCat::terminal(), vec![(0, 0, vec![0])])).unwrap();
    assert!(r.all_pass(), "{}", r.to_text());
    assert_eq!(module_side(&cp_instance(gpd(GroupoidSpec::Cyclic(3)), FinCat::terminal(), vec![(0, 0, vec![0])])).len(), 3);
    // S3/⟨t⟩: δ at the base coset lies in the centraliser of t.
    let s3 = gpd(GroupoidSpec::Symmetric(3));
    let t = (0..6).find(|&x| x != 0 && s3.compose(x, x) == 0).unwrap();
    let mut h = vec![0, t];
    h.sort_unstable();
    let inst = cp_instance(s3, FinCat::terminal(), vec![(0, 0, h)]);
    assert_eq!(functor_side(&inst).len(), 2);
    let r = cp_modcat_instance(&inst).unwrap();
    assert!(r.all_pass(), "{}", r.to_text());
}

#[test]
fn cp_modcat_naturality_in_u_couples_objects() {
    // U = {0 → 1}; h = U(-, 1) × C2: δ is shared along the arrow, two choices.
    let c2 = gpd(GroupoidSpec::Cyclic(2));
    let u = FinCat::from_table(2, vec![0, 1, 0], vec![0, 1, 1], &[(0, 0, 0), (1, 1, 1), (2, 0, 2), (1, 2, 2)]).unwrap();
    let inst = cp_instance(c2, u, vec![(1, 0, vec![0])]);
    assert_eq!(module_side(&inst).len(), 2);
    assert!(cp_modcat_instance(&inst).unwrap().all_pass());
}
