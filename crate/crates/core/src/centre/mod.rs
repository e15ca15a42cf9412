//! Centre objects of pseudofunctors `𝒢 → Mod^op`, their `𝒢^aut` form,
//! convolution, internal homs and the full centre of `ℍ`.
//!
//! Pseudofunctors here have functor transitions: a category per object,
//! `a*: X(q) → X(p)` per morphism `a: p → q` and invertible constraints
//! `φ_(a,b): a* b* ⇒ (b a)*`.

mod convolution;
mod cpmod;
mod full;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use convolution::{
    bidual, comparison, internal_hom, ps_braiding_twist, ps_convolution, ps_unit, Braiding,
    PsConvolution, Summand,
};
pub use cpmod::{cp_modcat_instance, functor_side, module_side, CpModInstance};
pub use full::{
    centre_piece_validate, full_centre_check, full_centre_hat, hat_roundtrip, identity_transform,
    multiplicity_transform, z_agreement, CentrePiece, ModTransform,
};

#[cfg(test)]
mod tests;

use crate::autgpd::{AutGroupoid, TestFamily};
use crate::error::{Error, Result};
use crate::fibred::{check_haut_monoidale, cleavage_form, AutFibration, CleavageForm, GroupoidFibration, HautMonoidale};
use crate::fincat::{check_equivalence, FinCat, FinFunctor, FinGroupoid};
use crate::report::Report;

/// A pseudofunctor into categories, contravariant on morphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatPs {
    pub base: FinGroupoid,
    pub fibres: Vec<Arc<FinCat>>,
    pub pullback: Vec<FinFunctor>,
    pub constraint: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CatPs {
    pub fn verify(&self) -> Result<()> {
        let fibres: Vec<&FinCat> = self.fibres.iter().map(|f| &**f).collect();
        crate::fibred::verify_pseudo(&self.base, &fibres, &self.pullback, &self.constraint)
    }

    pub fn from_cleavage(cf: &CleavageForm) -> Self {
        CatPs {
            base: cf.base.clone(),
            fibres: cf.fibres.iter().map(|f| f.cat().clone()).collect(),
            pullback: cf.pullback.clone(),
            constraint: cf.constraint.clone(),
        }
    }

    /// Constant at `k` with identity transitions.
    pub fn constant(base: &FinGroupoid, k: Arc<FinCat>) -> Result<Self> {
        Self::strict(base, |_| k.clone(), |_, src, _| Ok(FinFunctor::identity(src.clone())))
    }

    /// Pseudofunctor with identity constraints; transitions must compose on
    /// the nose. `pull(a, X(q), X(p))` gives `a*`.
    pub fn strict(
        base: &FinGroupoid,
        fibre: impl Fn(usize) -> Arc<FinCat>,
        pull: impl Fn(usize, &Arc<FinCat>, &Arc<FinCat>) -> Result<FinFunctor>,
    ) -> Result<Self> {
        let fibres: Vec<Arc<FinCat>> = (0..base.n_obj()).map(fibre).collect();
        let pullback = (0..base.n_mor())
            .map(|a| pull(a, &fibres[base.tgt(a)], &fibres[base.src(a)]))
            .collect::<Result<Vec<_>>>()?;
        let mut constraint = BTreeMap::new();
        for a in 0..base.n_mor() {
            for b in base.out_of(base.tgt(a)) {
                let fp = &fibres[base.src(a)];
                let comps = (0..fibres[base.tgt(b)].n_obj())
                    .map(|t| fp.idn(pullback[a].obj_map[pullback[b].obj_map[t]]))
                    .collect();
                constraint.insert((a, b), comps);
            }
        }
        let ps = CatPs { base: base.clone(), fibres, pullback, constraint };
        ps.verify()?;
        Ok(ps)
    }

    /// The covariant action `(f⁻¹)*: X(src f) → X(tgt f)`.
    pub fn act(&self, f: usize) -> &FinFunctor {
        &self.pullback[self.base.inv(f)]
    }

    /// The canonical iso `act(g) act(f) x → act(g f) x`.
    pub fn act_constraint(&self, f: usize, g: usize, x: usize) -> usize {
        let b = &self.base;
        self.constraint[&(b.inv(g), b.inv(f))][x]
    }

    /// `ℍ^aut` through the cleavage of `π^aut`.
    pub fn haut(af: &AutFibration) -> Result<Self> {
        Ok(Self::from_cleavage(&cleavage_form(&af.fibration)?))
    }

    /// `ℍ` through the cleavage of `f`.
    pub fn fibres_of(f: &GroupoidFibration) -> Result<Self> {
        Ok(Self::from_cleavage(&cleavage_form(f)?))
    }

    /// Fibrewise coproduct with offset transitions and constraints.
    pub fn coproduct(parts: &[&CatPs]) -> Result<Self> {
        let base = parts.first().ok_or_else(|| Error::Mismatch("empty coproduct".into()))?.base.clone();
        if parts.iter().any(|x| x.base != base) {
            return Err(Error::Mismatch("coproduct over different bases".into()));
        }
        let mut fibres = Vec::with_capacity(base.n_obj());
        let mut offsets = Vec::with_capacity(base.n_obj());
        for p in 0..base.n_obj() {
            let (cat, oo, mo) = FinCat::coproduct_all(&parts.iter().map(|x| &*x.fibres[p]).collect::<Vec<_>>());
            fibres.push(Arc::new(cat));
            offsets.push((oo, mo));
        }
        let pullback = (0..base.n_mor())
            .map(|a| {
                let (p, q) = (base.src(a), base.tgt(a));
                let (mut obj_map, mut mor_map) = (Vec::new(), Vec::new());
                for (i, x) in parts.iter().enumerate() {
                    obj_map.extend(x.pullback[a].obj_map.iter().map(|&o| offsets[p].0[i] + o));
                    mor_map.extend(x.pullback[a].mor_map.iter().map(|&m| offsets[p].1[i] + m));
                }
                FinFunctor::new(fibres[q].clone(), fibres[p].clone(), obj_map, mor_map)
            })
            .collect::<Result<Vec<_>>>()?;
        let constraint = parts[0]
            .constraint
            .keys()
            .map(|&(a, b)| {
                let p = base.src(a);
                let comps = parts
                    .iter()
                    .enumerate()
                    .flat_map(|(i, x)| x.constraint[&(a, b)].iter().map(move |&k| (i, k)))
                    .map(|(i, k)| offsets[p].1[i] + k)
                    .collect();
                ((a, b), comps)
            })
            .collect();
        let out = CatPs { base, fibres, pullback, constraint };
        out.verify()?;
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.fibres.iter().all(|f| f.n_obj() == 0)
    }
}

/// All checks of the balanced monoidale `ℍ^aut` re-run on `m`.
pub fn check_ps_monoidale(f: &GroupoidFibration, af: &AutFibration, m: &HautMonoidale) -> Result<Report> {
    check_haut_monoidale(f, af, m)
}

/// A pseudofunctor on `𝒢` with a grading `δ_p: obj X(p) → 𝒢(p, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentreObjectDelta {
    pub f: CatPs,
    pub delta: Vec<Vec<usize>>,
}

/// Outcome of [`check_centre_object`]. `u[k][p][e * |X p| + x]` is
/// `x * |K p| + e'` where `u_(K,p)(e, x) = (x, e')`.
#[derive(Clone, Debug)]
pub struct CentreCheck {
    pub report: Report,
    pub u: Vec<Vec<Vec<usize>>>,
}

fn first_failure<I: IntoIterator<Item = Option<String>>>(it: I) -> std::result::Result<(), String> {
    it.into_iter().flatten().next().map_or(Ok(()), Err)
}

/// Grade constancy, dinaturality `δ_p(g* y) = g⁻¹ δ_q(y) g`, graded
/// constraints, and the braiding `u_(K,p)(e, x) = (x, K(δ_p x) e)` with its
/// pseudonaturality against every functor of `family`.
pub fn check_centre_object(c: &CentreObjectDelta, family: &TestFamily) -> CentreCheck {
    let (ps, g) = (&c.f, &c.f.base);
    let mut report = Report::new("centre-object");
    let shape = c.delta.len() == g.n_obj()
        && (0..g.n_obj()).all(|p| c.delta[p].len() == ps.fibres[p].n_obj() && c.delta[p].iter().all(|&a| a < g.n_mor()));
    let endo = report.check(
        "grade.endomorphism",
        first_failure((0..g.n_obj()).flat_map(|p| {
            (0..ps.fibres[p].n_obj()).map(move |x| match shape && g.src(c.delta[p][x]) == p && g.tgt(c.delta[p][x]) == p {
                true => None,
                false => Some(format!("δ at ({p}, {x}) is not an endomorphism of {p}")),
            })
        })),
    );
    if !endo {
        return CentreCheck { report, u: Vec::new() };
    }
    let d = |p: usize, x: usize| c.delta[p][x];
    report.check(
        "grade.constant",
        first_failure((0..g.n_obj()).flat_map(|p| {
            let fp = &ps.fibres[p];
            (0..fp.n_mor()).map(move |m| match d(p, fp.src(m)) == d(p, fp.tgt(m)) {
                true => None,
                false => Some(format!("morphism {m} of fibre {p} joins grades {} and {}", d(p, fp.src(m)), d(p, fp.tgt(m)))),
            })
        })),
    );
    report.check(
        "dinatural",
        first_failure((0..g.n_mor()).flat_map(|a| {
            let (p, q) = (g.src(a), g.tgt(a));
            (0..ps.fibres[q].n_obj()).map(move |y| {
                let lhs = d(p, ps.pullback[a].obj_map[y]);
                let rhs = g.conj(g.inv(a), d(q, y));
                (lhs != rhs).then(|| format!("g = {a}, y = {y}: δ(g* y) = {lhs} but g⁻¹ δ(y) g = {rhs}"))
            })
        })),
    );
    report.check(
        "constraints.graded",
        first_failure(ps.constraint.iter().flat_map(|(&(a, _), comps)| {
            let (p, fp) = (g.src(a), &ps.fibres[g.src(a)]);
            comps.iter().map(move |&k| {
                (d(p, fp.src(k)) != d(p, fp.tgt(k))).then(|| format!("constraint component {k} in fibre {p}"))
            })
        })),
    );
    let u: Vec<Vec<Vec<usize>>> = family
        .functors
        .iter()
        .map(|k| {
            (0..g.n_obj())
                .map(|p| {
                    let n = ps.fibres[p].n_obj();
                    let mut v = vec![0; k.sizes[p] * n];
                    for e in 0..k.sizes[p] {
                        for x in 0..n {
                            v[e * n + x] = x * k.sizes[p] + k.act(d(p, x), e);
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let second = |i: usize, p: usize, e: usize, x: usize| u[i][p][e * ps.fibres[p].n_obj() + x] % family.functors[i].sizes[p];
    report.check(
        "u.bijective",
        first_failure(u.iter().enumerate().flat_map(|(i, per)| {
            per.iter().enumerate().map(move |(p, v)| {
                (!crate::fincat::functor_is_bijection(v, v.len())).then(|| format!("u for functor {i} at {p}"))
            })
        })),
    );
    report.check(
        "u.pseudonatural",
        first_failure(family.functors.iter().enumerate().flat_map(|(i, k)| {
            (0..g.n_mor()).flat_map(move |a| {
                let (p, q) = (g.src(a), g.tgt(a));
                (0..k.sizes[p]).flat_map(move |e| {
                    (0..ps.fibres[q].n_obj()).map(move |y| {
                        let lhs = k.act(a, second(i, p, e, ps.pullback[a].obj_map[y]));
                        let rhs = second(i, q, k.act(a, e), y);
                        (lhs != rhs).then(|| format!("functor {i}, g = {a}, e = {e}, y = {y}"))
                    })
                })
            })
        })),
    );
    report.check(
        "u.products",
        first_failure(family.products.iter().flat_map(|&(i, j, l)| {
            let (ki, kj) = (&family.functors[i], &family.functors[j]);
            (0..g.n_obj()).flat_map(move |p| {
                (0..ki.sizes[p] * kj.sizes[p]).flat_map(move |e| {
                    (0..ps.fibres[p].n_obj()).map(move |x| {
                        let (ei, ej) = (e / kj.sizes[p], e % kj.sizes[p]);
                        let want = second(i, p, ei, x) * kj.sizes[p] + second(j, p, ej, x);
                        (second(l, p, e, x) != want).then(|| format!("product {l} at ({p}, {e}, {x})"))
                    })
                })
            })
        })),
    );
    report.check(
        "u.terminal",
        first_failure((0..g.n_obj()).map(|p| {
            let n = ps.fibres[p].n_obj();
            let swap: Vec<usize> = (0..n).collect();
            (u[family.terminal][p] != swap).then(|| format!("u for the terminal functor at {p} is not the swap"))
        })),
    );
    CentreCheck { report, u }
}

/// Objects of `X(p)` of each grade and the full subcategories they span.
struct Graded {
    objs: Vec<Vec<usize>>,
    subs: Vec<(Arc<FinCat>, Vec<usize>)>,
}

fn graded(c: &CentreObjectDelta, ag: &AutGroupoid) -> Graded {
    let objs: Vec<Vec<usize>> = ag
        .conj
        .objects
        .iter()
        .map(|&(p, a)| (0..c.f.fibres[p].n_obj()).filter(|&x| c.delta[p][x] == a).collect())
        .collect();
    let subs = ag
        .conj
        .objects
        .iter()
        .zip(&objs)
        .map(|(&(p, _), o)| {
            let (cat, mors) = c.f.fibres[p].full_subcategory(o);
            (Arc::new(cat), mors)
        })
        .collect();
    Graded { objs, subs }
}

/// `X̌(p, a)`: the full subcategory of `X(p)` on grade `a`, with
/// restricted transitions and constraints.
pub fn to_aut_form(c: &CentreObjectDelta, ag: &AutGroupoid) -> Result<CatPs> {
    let (aut, conj) = (ag.aut(), &ag.conj);
    if c.f.base != ag.base {
        return Err(Error::Mismatch("centre object and automorphism groupoid have different bases".into()));
    }
    let gr = graded(c, ag);
    let local_obj = |j: usize, x: usize| gr.objs[j].binary_search(&x).ok();
    let local_mor = |j: usize, m: usize| gr.subs[j].1.binary_search(&m).ok();
    let escape = |m: usize| Error::Centre(format!("restriction along {m} escapes its graded fibre"));
    let mut pullback = Vec::with_capacity(aut.n_mor());
    for m in 0..aut.n_mor() {
        let (j, j1) = (aut.src(m), aut.tgt(m));
        let fun = &c.f.pullback[conj.underlying[m]];
        let obj_map = gr.objs[j1].iter().map(|&y| local_obj(j, fun.obj_map[y]).ok_or_else(|| escape(m))).collect::<Result<_>>()?;
        let mor_map = gr.subs[j1].1.iter().map(|&y| local_mor(j, fun.mor_map[y]).ok_or_else(|| escape(m))).collect::<Result<_>>()?;
        pullback.push(FinFunctor::new(gr.subs[j1].0.clone(), gr.subs[j].0.clone(), obj_map, mor_map)?);
    }
    let mut constraint = BTreeMap::new();
    for m1 in 0..aut.n_mor() {
        for m2 in aut.out_of(aut.tgt(m1)) {
            let (j, j2) = (aut.src(m1), aut.tgt(m2));
            let full = &c.f.constraint[&(conj.underlying[m1], conj.underlying[m2])];
            let comps =
                gr.objs[j2].iter().map(|&t| local_mor(j, full[t]).ok_or_else(|| escape(m1))).collect::<Result<_>>()?;
            constraint.insert((m1, m2), comps);
        }
    }
    let ps = CatPs {
        base: aut.clone(),
        fibres: gr.subs.iter().map(|(cat, _)| cat.clone()).collect(),
        pullback,
        constraint,
    };
    ps.verify()?;
    Ok(ps)
}

/// `Ŝ(p) = Σ_a S(p, a)` over `a ∈ 𝒢(p, p)` in hom-set order, graded by
/// summand.
pub fn hat_of_ps(s: &CatPs, ag: &AutGroupoid) -> Result<CentreObjectDelta> {
    let (g, conj) = (&ag.base, &ag.conj);
    if s.base != *ag.aut() {
        return Err(Error::Mismatch("pseudofunctor is not over the automorphism groupoid".into()));
    }
    let mut fibres = Vec::with_capacity(g.n_obj());
    let mut offsets = Vec::with_capacity(g.n_obj());
    let mut delta = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let parts: Vec<&FinCat> = g.hom(p, p).iter().map(|&a| &*s.fibres[ag.obj(p, a)]).collect();
        let (cat, oo, mo) = FinCat::coproduct_all(&parts);
        delta.push(g.hom(p, p).iter().zip(&parts).flat_map(|(&a, part)| std::iter::repeat_n(a, part.n_obj())).collect());
        fibres.push(Arc::new(cat));
        offsets.push((oo, mo));
    }
    // The G^aut morphism over `f: p → q` into `(q, b)`.
    let over = |f: usize, b: usize| {
        let (p, q) = (g.src(f), g.tgt(f));
        let a = g.conj(g.inv(f), b);
        (a, conj.mor(ag.obj(p, a), ag.obj(q, b), f).expect("conjugation is a morphism of G^aut"))
    };
    let mut pullback = Vec::with_capacity(g.n_mor());
    for f in 0..g.n_mor() {
        let (p, q) = (g.src(f), g.tgt(f));
        let (mut obj_map, mut mor_map) = (Vec::new(), Vec::new());
        for &b in g.hom(q, q) {
            let (a, m) = over(f, b);
            let (ia, pf) = (g.hom_index(a), &s.pullback[m]);
            obj_map.extend(pf.obj_map.iter().map(|&y| offsets[p].0[ia] + y));
            mor_map.extend(pf.mor_map.iter().map(|&y| offsets[p].1[ia] + y));
        }
        pullback.push(FinFunctor::new(fibres[q].clone(), fibres[p].clone(), obj_map, mor_map)?);
    }
    let mut constraint = BTreeMap::new();
    for f1 in 0..g.n_mor() {
        for f2 in g.out_of(g.tgt(f1)) {
            let (p, r) = (g.src(f1), g.tgt(f2));
            let mut comps = Vec::with_capacity(fibres[r].n_obj());
            for &c in g.hom(r, r) {
                let (b, m2) = over(f2, c);
                let (a, m1) = over(f1, b);
                let ia = g.hom_index(a);
                comps.extend(s.constraint[&(m1, m2)].iter().map(|&k| offsets[p].1[ia] + k));
            }
            constraint.insert((f1, f2), comps);
        }
    }
    let f = CatPs { base: g.clone(), fibres, pullback, constraint };
    f.verify()?;
    Ok(CentreObjectDelta { f, delta })
}

/// `to_aut_form ∘ hat_of_ps` against the identity: table equality plus a
/// verified equivalence witness per object.
pub fn aut_roundtrip(s: &CatPs, ag: &AutGroupoid) -> Result<Report> {
    let back = to_aut_form(&hat_of_ps(s, ag)?, ag)?;
    let mut report = Report::new("centre-roundtrip");
    report.check("aut.table", if back == *s { Ok(()) } else { Err("tables differ".into()) });
    for (j, (x, y)) in back.fibres.iter().zip(&s.fibres).enumerate() {
        report.check(format!("aut.object{j}"), equivalence_witness(x, y));
    }
    Ok(report)
}

fn equivalence_witness(x: &Arc<FinCat>, y: &Arc<FinCat>) -> std::result::Result<(), String> {
    match check_equivalence(x, y).witness() {
        Some(w) if w.verify() => Ok(()),
        Some(_) => Err("equivalence witness fails verification".into()),
        None => Err("no equivalence".into()),
    }
}

/// `hat_of_ps ∘ to_aut_form` against the identity: the regrouping
/// `Σ_a X̌(p, a) → X(p)` is an isomorphism of categories preserving grades
/// and commuting with transitions and constraints.
pub fn delta_roundtrip(c: &CentreObjectDelta, ag: &AutGroupoid) -> Result<Report> {
    let back = hat_of_ps(&to_aut_form(c, ag)?, ag)?;
    let gr = graded(c, ag);
    let g = &c.f.base;
    let mut report = Report::new("centre-roundtrip");
    let mut iso = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let (mut obj_map, mut mor_map) = (Vec::new(), Vec::new());
        for &a in g.hom(p, p) {
            let j = ag.obj(p, a);
            obj_map.extend_from_slice(&gr.objs[j]);
            mor_map.extend_from_slice(&gr.subs[j].1);
        }
        let phi = FinFunctor::new(back.f.fibres[p].clone(), c.f.fibres[p].clone(), obj_map, mor_map)?;
        let bij = crate::fincat::functor_is_bijection;
        report.check(
            format!("delta.object{p}.iso"),
            match bij(&phi.obj_map, c.f.fibres[p].n_obj()) && bij(&phi.mor_map, c.f.fibres[p].n_mor()) {
                true => Ok(()),
                false => Err("regrouping is not bijective".into()),
            },
        );
        report.check(
            format!("delta.object{p}.grade"),
            match (0..phi.obj_map.len()).all(|x| back.delta[p][x] == c.delta[p][phi.obj_map[x]]) {
                true => Ok(()),
                false => Err("regrouping changes grades".into()),
            },
        );
        report.check(format!("delta.object{p}.equivalence"), equivalence_witness(&back.f.fibres[p], &c.f.fibres[p]));
        iso.push(phi);
    }
    report.check(
        "delta.transitions",
        first_failure((0..g.n_mor()).map(|f| {
            let (p, q) = (g.src(f), g.tgt(f));
            match (back.f.pullback[f].then(&iso[p]), iso[q].then(&c.f.pullback[f])) {
                (Ok(lhs), Ok(rhs)) if lhs == rhs => None,
                _ => Some(format!("transition along {f} does not commute with the regrouping")),
            }
        })),
    );
    report.check(
        "delta.constraints",
        first_failure(back.f.constraint.iter().map(|(&(a, b), comps)| {
            let (p, r) = (g.src(a), g.tgt(b));
            let ok = comps.iter().enumerate().all(|(t, &k)| iso[p].mor_map[k] == c.f.constraint[&(a, b)][iso[r].obj_map[t]]);
            (!ok).then(|| format!("constraint ({a}, {b}) does not match"))
        })),
    );
    Ok(report)
}
