//! Verification suites shared by the command line and the acceptance tests.

use std::sync::Arc;

use rand::Rng;

use crate::autgpd::{
    aut_groupoid, check_balanced_star_autonomy, from_centre, from_elements, promonoidal_aut, roundtrip_crossed,
    roundtrip_elements, to_centre, TestFamily,
};
use crate::centre::{
    aut_roundtrip, bidual, comparison, cp_modcat_instance, delta_roundtrip, hat_of_ps, hat_roundtrip,
    identity_transform, multiplicity_transform, ps_braiding_twist, ps_unit, z_agreement, CatPs, CpModInstance,
};
use crate::dayconv::{cartesian_promonoidal, check_promonoidal, convolve, pointwise_iso};
use crate::error::Result;
use crate::fibred::{
    aut_fibration, cleavage_form, fibre_pseudofunctor, forms_equivalence, grothendieck, grothendieck_comparison,
    h_monoidale, haut_monoidale, GroupoidFibration,
};
use crate::fincat::{check_equivalence, FinGroupoid, GroupoidSpec};
use crate::profunctor::{associator, compose_modules, hcomp, left_unitor, right_unitor, ModuleMorphism};
use crate::report::Report;
use crate::seeded::{
    random_category, random_copies, random_discrete_ps, random_module, random_perm, random_set_functor, rng,
    RankOneSum,
};

/// First failing entry of a report as a witness.
fn verdict(r: &Report) -> std::result::Result<(), String> {
    match r.first_failure() {
        Some(e) => Err(format!("{}: {}", e.check_id, e.witness.clone().unwrap_or_default())),
        None => Ok(()),
    }
}

fn ok<T>(r: Result<T>) -> std::result::Result<(), String> {
    r.map(|_| ()).map_err(|e| e.to_string())
}

/// Components of `𝒢^aut` against conjugacy classes and object automorphism
/// groups against centralizers, both enumerated directly on `𝒢`.
pub fn aut_structure(g: &FinGroupoid) -> Result<Report> {
    let ag = aut_groupoid(g)?;
    let aut = ag.aut();
    let mut r = Report::new("aut");
    r.fact("objects", aut.n_obj());
    r.fact("morphisms", aut.n_mor());
    r.fact("components", ag.component_count());
    let mut seen = std::collections::BTreeSet::new();
    let mut classes = 0;
    for p in 0..g.n_obj() {
        for &a in g.hom(p, p) {
            if seen.insert(a) {
                classes += 1;
                for f in g.out_of(p) {
                    seen.insert(g.conj(f, a));
                }
            }
        }
    }
    r.check(
        "components.conjugacy_classes",
        if classes == ag.component_count() {
            Ok(())
        } else {
            Err(format!("{} components, {classes} classes", ag.component_count()))
        },
    );
    r.check(
        "automorphisms.centralizers",
        (0..aut.n_obj()).try_for_each(|o| {
            let (p, a) = ag.conj.objects[o];
            let mut mine: Vec<usize> = aut.hom(o, o).iter().map(|&m| ag.conj.underlying[m]).collect();
            mine.sort_unstable();
            let cent: Vec<usize> = g.hom(p, p).iter().copied().filter(|&f| g.compose(f, a) == g.compose(a, f)).collect();
            if mine == cent {
                Ok(())
            } else {
                Err(format!("object ({p}, {a}): {mine:?} vs centralizer {cent:?}"))
            }
        }),
    );
    r.check("q.unique_lifts", ok(ag.check_unique_lifts()));
    r.check(
        "q.section",
        match ag.i.then(&ag.q) {
            Ok(f) if f.is_identity() => Ok(()),
            Ok(_) => Err("q ∘ i is not the identity".into()),
            Err(e) => Err(e.to_string()),
        },
    );
    Ok(r)
}

/// Promonoidal coherence on `𝒢^aut` plus twist and `*`-autonomy.
pub fn balanced_autonomy(g: &FinGroupoid) -> Result<Report> {
    let ag = aut_groupoid(g)?;
    let (pr, _) = promonoidal_aut(&ag)?;
    let mut r = Report::new("promonoidal");
    r.absorb("aut", check_promonoidal(&pr));
    r.absorb("balanced", check_balanced_star_autonomy(g)?);
    Ok(r)
}

/// Seeded crossed `𝒢`-sets through the centre and the elements functor.
pub fn crossed_roundtrip(g: &FinGroupoid, seed: u64, count: usize, max_size: usize) -> Result<Report> {
    let ag = aut_groupoid(g)?;
    let family = Arc::new(TestFamily::standard(g)?);
    let mut r = Report::new("centre-roundtrip");
    for i in 0..count {
        let s = random_set_functor(&mut rng(seed.wrapping_add(i as u64)), ag.aut(), max_size)?;
        let c = from_elements(&ag, &s)?;
        r.check(
            format!("sample{i}"),
            (|| {
                if c.x.sizes.iter().any(|&n| n > max_size) {
                    return Err(format!("sample exceeds size {max_size}"));
                }
                let hb = to_centre(&c, &family).map_err(|e| e.to_string())?;
                hb.verify().map_err(|e| e.to_string())?;
                if from_centre(&hb).map_err(|e| e.to_string())? != c {
                    return Err("from_centre ∘ to_centre differs".into());
                }
                roundtrip_crossed(&ag, &c).map_err(|e| e.to_string())?;
                roundtrip_elements(&ag, &s).map_err(|e| e.to_string())?;
                Ok(())
            })(),
        );
    }
    Ok(r)
}

/// Unit laws, associator naturality along relabelling isomorphisms, and
/// relabelling invariance of composites, on seeded module triples.
pub fn coend_engine(seed: u64, count: usize, perms: usize) -> Result<Report> {
    let mut r = Report::new("coend");
    for i in 0..count {
        let mut rg = rng(seed.wrapping_add(i as u64));
        let cats: Vec<_> = (0..4).map(|_| Arc::new(random_category(&mut rg, 4, 24))).collect();
        let m = random_module(&mut rg, &cats[0], &cats[1], 2)?;
        let n = random_module(&mut rg, &cats[1], &cats[2], 2)?;
        let p = random_module(&mut rg, &cats[2], &cats[3], 2)?;
        r.check(
            format!("triple{i}.units"),
            [&m, &n, &p].iter().try_for_each(|x| {
                let (lc, li) = left_unitor(x).map_err(|e| e.to_string())?;
                let (rc, ri) = right_unitor(x).map_err(|e| e.to_string())?;
                li.verify_iso(&lc.module, x).map_err(|e| e.to_string())?;
                ri.verify_iso(&rc.module, x).map_err(|e| e.to_string())
            }),
        );
        let (left, right, iso) = associator(&m, &n, &p)?;
        r.check(format!("triple{i}.associator"), ok(iso.verify_iso(&left.module, &right.module)));
        let mut outcome = Ok(());
        for _ in 0..perms {
            let relabel = |x: &crate::profunctor::Module, rg: &mut rand_chacha::ChaCha8Rng| {
                let nb = x.cod().n_obj();
                let na = x.dom().n_obj();
                let perm: Vec<Vec<usize>> = (0..nb * na).map(|k| random_perm(rg, x.size(k / na, k % na))).collect();
                (x.relabel(&perm), ModuleMorphism { components: perm })
            };
            let ((m1, phi_m), (n1, phi_n), (p1, phi_p)) = (relabel(&m, &mut rg), relabel(&n, &mut rg), relabel(&p, &mut rg));
            outcome = (|| {
                let (left1, right1, iso1) = associator(&m1, &n1, &p1).map_err(|e| e.to_string())?;
                let nm = compose_modules(&m, &n).map_err(|e| e.to_string())?;
                let nm1 = compose_modules(&m1, &n1).map_err(|e| e.to_string())?;
                let pn = compose_modules(&n, &p).map_err(|e| e.to_string())?;
                let pn1 = compose_modules(&n1, &p1).map_err(|e| e.to_string())?;
                let on_nm = hcomp(&phi_m, &phi_n, &nm, &nm1).map_err(|e| e.to_string())?;
                on_nm.verify_iso(&nm.module, &nm1.module).map_err(|e| format!("composite relabelling: {e}"))?;
                let on_pn = hcomp(&phi_n, &phi_p, &pn, &pn1).map_err(|e| e.to_string())?;
                let on_left = hcomp(&phi_m, &on_pn, &left, &left1).map_err(|e| e.to_string())?;
                let on_right = hcomp(&on_nm, &phi_p, &right, &right1).map_err(|e| e.to_string())?;
                if iso.then(&on_right) != on_left.then(&iso1) {
                    return Err("associator is not natural".into());
                }
                Ok(())
            })();
            if outcome.is_err() {
                break;
            }
        }
        r.check(format!("triple{i}.relabelling"), outcome);
    }
    Ok(r)
}

/// Cartesian Day convolution against the pointwise product on seeded pairs.
pub fn day_pointwise(g: &FinGroupoid, seed: u64, count: usize, max_size: usize) -> Result<Report> {
    let pr = cartesian_promonoidal(g)?;
    let mut r = Report::new("day-pointwise");
    r.absorb("cartesian", check_promonoidal(&pr));
    for i in 0..count {
        let mut rg = rng(seed.wrapping_add(i as u64));
        let f = random_set_functor(&mut rg, g, max_size)?;
        let h = random_set_functor(&mut rg, g, max_size)?;
        r.check(
            format!("pair{i}"),
            (|| {
                let conv = convolve(&pr, &f, &h).map_err(|e| e.to_string())?;
                let iso = pointwise_iso(&pr, &f, &h, &conv).map_err(|e| e.to_string())?;
                if !iso.is_iso() {
                    return Err("comparison is not invertible".into());
                }
                let expect: Vec<usize> = f.sizes.iter().zip(&h.sizes).map(|(a, b)| a * b).collect();
                if conv.functor.sizes != expect {
                    return Err(format!("sizes {:?} vs pointwise {expect:?}", conv.functor.sizes));
                }
                Ok(())
            })(),
        );
    }
    Ok(r)
}

/// Module and cleavage forms, the Grothendieck round trip and both
/// monoidales.
pub fn fibration_pipeline(f: &GroupoidFibration) -> Result<Report> {
    let mut r = Report::new("fibration");
    let cf = cleavage_form(f)?;
    r.check("cleavage.valid", ok(cf.verify()));
    let ps = fibre_pseudofunctor(f)?;
    r.check("module_form.coherent", ok(ps.check_coherence()));
    r.check("forms.equivalent", ok(forms_equivalence(f, &ps, &cf)));
    r.check(
        "grothendieck.roundtrip",
        (|| {
            let gr = grothendieck(&cf).map_err(|e| e.to_string())?;
            let phi = grothendieck_comparison(f, &gr).map_err(|e| e.to_string())?;
            if !phi.is_fully_faithful() {
                return Err("comparison is not fully faithful".into());
            }
            if !check_equivalence(&phi.dom, &phi.cod).is_equivalent() {
                return Err("comparison is not an equivalence".into());
            }
            (0..f.base.n_obj()).try_for_each(|p| {
                if check_equivalence(gr.fibration.fibre(p).cat(), f.fibre(p).cat()).is_equivalent() {
                    Ok(())
                } else {
                    Err(format!("fibre over {p} differs"))
                }
            })
        })(),
    );
    r.absorb("h", h_monoidale(f)?.report);
    let af = aut_fibration(f)?;
    r.check("haut.coherent", ok(af.haut.check_coherence()));
    r.absorb("haut", haut_monoidale(f, &af)?.report);
    Ok(r)
}

/// `to_aut_form ∘ hat_of_ps` and `hat_of_ps ∘ to_aut_form` on `ℍ^aut`,
/// seeded discrete `S` and their sums with `ℍ^aut`.
pub fn biequivalence(f: &GroupoidFibration, seed: u64, count: usize, max_size: usize) -> Result<Report> {
    let af = aut_fibration(f)?;
    let ag = &af.base_aut;
    let haut = CatPs::haut(&af)?;
    let mut inputs = vec![("haut".to_string(), haut.clone())];
    for i in 0..count {
        let mut rg = rng(seed.wrapping_add(i as u64));
        let s = random_discrete_ps(&mut rg, ag, max_size)?;
        let s = if rg.gen_bool(0.5) { CatPs::coproduct(&[&s, &haut])? } else { s };
        inputs.push((format!("sample{i}"), s));
    }
    let mut r = Report::new("biequivalence");
    for (name, s) in inputs {
        r.check(
            name,
            (|| {
                verdict(&aut_roundtrip(&s, ag).map_err(|e| e.to_string())?)?;
                let hat = hat_of_ps(&s, ag).map_err(|e| e.to_string())?;
                verdict(&delta_roundtrip(&hat, ag).map_err(|e| e.to_string())?)
            })(),
        );
    }
    Ok(r)
}

/// The bidual as an exact involution and `S ⋆ T^∨ → [T, S]` per object,
/// for `S, T ∈ {𝕁, ℍ^aut}`; also the braiding and twist on `ℍ^aut`.
pub fn biduals(f: &GroupoidFibration) -> Result<Report> {
    let af = aut_fibration(f)?;
    let ag = &af.base_aut;
    let (h, j) = (CatPs::haut(&af)?, ps_unit(ag)?);
    let mut r = Report::new("biduals");
    for (name, x) in [("haut", &h), ("unit", &j)] {
        r.check(
            format!("bidual.{name}"),
            match bidual(&bidual(x, ag)?, ag) {
                Ok(b) if b == *x => Ok(()),
                Ok(_) => Err("bidual is not the identity".into()),
                Err(e) => Err(e.to_string()),
            },
        );
    }
    for (sn, s) in [("haut", &h), ("unit", &j)] {
        for (tn, t) in [("haut", &h), ("unit", &j)] {
            let (_, rep) = comparison(s, t, ag)?;
            r.check(format!("comparison.{sn}.{tn}"), verdict(&rep));
        }
    }
    Ok(r)
}

/// Braiding, twist, hexagons and balance of `ℍ^aut ⋆ ℍ^aut`.
pub fn braiding(f: &GroupoidFibration) -> Result<Report> {
    let af = aut_fibration(f)?;
    let h = CatPs::haut(&af)?;
    let mut r = Report::new("braiding");
    r.absorb("haut", ps_braiding_twist(&h, &h, &af.base_aut)?.report);
    Ok(r)
}

/// Full-centre round trips for the identity on `ℍ^aut` and seeded
/// multiplicity transforms, with agreement against `z_ℍ`.
pub fn full_centre(f: &GroupoidFibration, seed: u64, count: usize) -> Result<Report> {
    let af = aut_fibration(f)?;
    let haut = CatPs::haut(&af)?;
    let id = identity_transform(&haut)?;
    let mut r = Report::new("full-centre");
    r.absorb("identity", hat_roundtrip(&id, f, &af)?);
    let cp = crate::centre::full_centre_hat(&id, f, &af)?;
    r.absorb("identity", z_agreement(&cp, &id, f, &af)?);
    for i in 0..count {
        let copies = random_copies(&mut rng(seed.wrapping_add(i as u64)));
        let h = multiplicity_transform(&haut, &copies)?;
        r.check(format!("transform{i}"), verdict(&hat_roundtrip(&h, f, &af)?));
    }
    Ok(r)
}

/// Module-side and functor-side centre pieces on seeded `(U, 𝒢)`.
pub fn cp_modcat(seed: u64, count: usize) -> Result<Report> {
    let groups = [GroupoidSpec::Cyclic(2), GroupoidSpec::Cyclic(3), GroupoidSpec::Symmetric(3)];
    let mut r = Report::new("cp-modcat");
    for i in 0..count {
        let mut rg = rng(seed.wrapping_add(i as u64));
        let g = groups[i % groups.len()].build()?;
        let u = Arc::new(random_category(&mut rg, 3, 8));
        let terms = rg.gen_range(1..=2);
        let h = RankOneSum::random(&mut rg, g.cat(), &u, terms, true).module(g.cat(), &u)?;
        let rep = cp_modcat_instance(&CpModInstance { u, g, h })?;
        r.check(format!("instance{i}"), verdict(&rep));
        for (k, v) in rep.facts {
            r.fact(format!("instance{i}.{k}"), v);
        }
    }
    Ok(r)
}
