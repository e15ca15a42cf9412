//! `ℍ` as a normal pseudofunctor into modules and in cleavage form.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::GroupoidFibration;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor, FinGroupoid};
use crate::profunctor::{
    associator, compose_modules, hcomp, identity_module, left_unitor, right_unitor, Composite, Module, ModuleMorphism,
};

/// A pseudofunctor `𝒢 → Mod^op`: for `a: p → q` a module
/// `trans(a): fibre(q) → fibre(p)`, with explicit constraints.
#[derive(Clone, Debug)]
pub struct PsFunctorModOp {
    pub base: FinGroupoid,
    pub fibres: Vec<Arc<FinCat>>,
    pub trans: Vec<Module>,
    /// `trans(1_p) ≅ hom` for each object `p`.
    pub unit: Vec<ModuleMorphism>,
    /// For `a: p → q`, `b: q → r`, keyed `(a, b)`: the composite
    /// `trans(a) ∘ trans(b)` and its iso onto `trans(b ∘ a)`.
    pub comp: BTreeMap<(usize, usize), (Composite, ModuleMorphism)>,
}

impl PsFunctorModOp {
    /// Constraint coherence over every composable triple and both unit laws.
    pub fn check_coherence(&self) -> Result<()> {
        let g = &self.base;
        for p in 0..g.n_obj() {
            let id = identity_module(self.fibres[p].clone());
            self.unit[p].verify_iso(&self.trans[g.idn(p)], &id)?;
        }
        for a in 0..g.n_mor() {
            let (p, q) = (g.src(a), g.tgt(a));
            let m = &self.trans[a];
            let (_, ru) = right_unitor(m)?;
            let (_, lu) = left_unitor(m)?;
            let via_q = hcomp(&self.unit[q], &ModuleMorphism::identity(m), &self.comp[&(a, g.idn(q))].0, &ru_source(m)?)?;
            if via_q.then(&ru) != self.comp[&(a, g.idn(q))].1 {
                return Err(Error::Internal(format!("right unit coherence fails at {a}")));
            }
            let via_p = hcomp(&ModuleMorphism::identity(m), &self.unit[p], &self.comp[&(g.idn(p), a)].0, &lu_source(m)?)?;
            if via_p.then(&lu) != self.comp[&(g.idn(p), a)].1 {
                return Err(Error::Internal(format!("left unit coherence fails at {a}")));
            }
        }
        for a in 0..g.n_mor() {
            for b in g.out_of(g.tgt(a)) {
                for c in g.out_of(g.tgt(b)) {
                    self.check_triple(a, b, c)?;
                }
            }
        }
        Ok(())
    }

    fn check_triple(&self, a: usize, b: usize, c: usize) -> Result<()> {
        let g = &self.base;
        let (ba, cb) = (g.compose(b, a), g.compose(c, b));
        let (m, n, p) = (&self.trans[c], &self.trans[b], &self.trans[a]);
        let (left, right, assoc) = associator(m, n, p)?;
        let (ab, phi_ab) = &self.comp[&(a, b)];
        let (bc, phi_bc) = &self.comp[&(b, c)];
        debug_assert!(left.second == ab.module && right.first == bc.module);
        let (l_tgt, l_phi) = &self.comp[&(ba, c)];
        let (r_tgt, r_phi) = &self.comp[&(a, cb)];
        let one = hcomp(&ModuleMorphism::identity(m), phi_ab, &left, l_tgt)?.then(l_phi);
        let two = assoc.then(&hcomp(phi_bc, &ModuleMorphism::identity(p), &right, r_tgt)?.then(r_phi));
        if one != two {
            return Err(Error::Internal(format!("constraint coherence fails at ({a}, {b}, {c})")));
        }
        Ok(())
    }
}

fn ru_source(m: &Module) -> Result<Composite> {
    compose_modules(&identity_module(m.dom().clone()), m)
}

fn lu_source(m: &Module) -> Result<Composite> {
    compose_modules(m, &identity_module(m.cod().clone()))
}

/// `trans(a)(s, t) = {x: s → t : π x = a}`, ordered by total index.
fn trans_module(f: &GroupoidFibration, a: usize) -> Result<Module> {
    let h = &f.total;
    let (fp, fq) = (f.fibre(f.base.src(a)), f.fibre(f.base.tgt(a)));
    Module::new(
        fq.cat().clone(),
        fp.cat().clone(),
        |s, t| f.over(a, fp.objects[s], fq.objects[t]).len(),
        |beta, t, x| {
            let y = f.over(a, fp.objects[fp.cat().tgt(beta)], fq.objects[t])[x];
            f.rank(h.compose(y, fp.incl[beta]))
        },
        |alpha, s, x| {
            let t0 = fq.cat().src(alpha);
            let y = f.over(a, fp.objects[s], fq.objects[t0])[x];
            f.rank(h.compose(fq.incl[alpha], y))
        },
    )
}

/// The module form of `ℍ` with `[y, x] ↦ y ∘ x` as composition constraint.
pub fn fibre_pseudofunctor(f: &GroupoidFibration) -> Result<PsFunctorModOp> {
    let (g, h) = (&f.base, &f.total);
    let fibres: Vec<Arc<FinCat>> = f.fibres().iter().map(|fb| fb.cat().clone()).collect();
    let trans = (0..g.n_mor()).map(|a| trans_module(f, a)).collect::<Result<Vec<_>>>()?;
    let unit = (0..g.n_obj())
        .map(|p| {
            let fb = f.fibre(p);
            let id = identity_module(fibres[p].clone());
            let m = &trans[g.idn(p)];
            let nq = fb.objects.len();
            let components = (0..nq * nq)
                .map(|i| {
                    let (s, t) = (i / nq, i % nq);
                    f.over(g.idn(p), fb.objects[s], fb.objects[t])
                        .iter()
                        .map(|&x| fb.cat().hom_index(fb.local_mor(x)))
                        .collect()
                })
                .collect();
            let mm = ModuleMorphism { components };
            mm.verify_iso(m, &id)?;
            Ok(mm)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut comp = BTreeMap::new();
    for a in 0..g.n_mor() {
        for b in g.out_of(g.tgt(a)) {
            let ba = g.compose(b, a);
            let c = compose_modules(&trans[b], &trans[a])?;
            let (fp, fr) = (f.fibre(g.src(a)), f.fibre(g.tgt(b)));
            let fq = f.fibre(g.tgt(a));
            let phi = c.induced(&trans[ba], |s, u, t, m, n| {
                let y = f.over(b, fq.objects[t], fr.objects[u])[m];
                let x = f.over(a, fp.objects[s], fq.objects[t])[n];
                f.rank(h.compose(y, x))
            })?;
            phi.verify_iso(&c.module, &trans[ba])?;
            comp.insert((a, b), (c, phi));
        }
    }
    Ok(PsFunctorModOp { base: g.clone(), fibres, trans, unit, comp })
}

/// `ℍ` through a cleavage: functors `a*: fibre(q) → fibre(p)` and
/// constraints `φ_(a,b): a* b* ⇒ (b a)*`.
#[derive(Clone, Debug)]
pub struct CleavageForm {
    pub base: FinGroupoid,
    pub fibres: Vec<FinGroupoid>,
    pub pullback: Vec<FinFunctor>,
    /// Component at each object of `fibre(r)` for `a: p → q`, `b: q → r`.
    pub constraint: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CleavageForm {
    /// Normality, naturality of the constraints and the cocycle condition.
    pub fn verify(&self) -> Result<()> {
        let fibres: Vec<&FinCat> = self.fibres.iter().map(|f| &**f.cat()).collect();
        verify_pseudo(&self.base, &fibres, &self.pullback, &self.constraint)
    }
}

/// Checks functor-form pseudofunctor data `a* : fibre(q) → fibre(p)` with
/// invertible constraints `φ_(a,b): a* b* ⇒ (b a)*`.
pub(crate) fn verify_pseudo(
    g: &FinGroupoid,
    fibres: &[&FinCat],
    pullback: &[FinFunctor],
    constraint: &BTreeMap<(usize, usize), Vec<usize>>,
) -> Result<()> {
    if fibres.len() != g.n_obj() || pullback.len() != g.n_mor() {
        return Err(Error::Mismatch("pseudofunctor data has the wrong length".into()));
    }
    for a in 0..g.n_mor() {
        if g.out_of(g.tgt(a)).any(|b| !constraint.contains_key(&(a, b))) {
            return Err(Error::Mismatch(format!("constraint missing for a pair starting at {a}")));
        }
        let (p, q) = (g.src(a), g.tgt(a));
        let pb = &pullback[a];
        if *pb.dom != *fibres[q] || *pb.cod != *fibres[p] {
            return Err(Error::Mismatch(format!("pullback along {a} has the wrong fibres")));
        }
        if g.is_identity(a) && !pb.is_identity() {
            return Err(Error::InvalidFunctor(format!("pullback along identity {a} is not the identity")));
        }
    }
    for (&(a, b), phi) in constraint {
        let fp = &fibres[g.src(a)];
        let fr = &fibres[g.tgt(b)];
        let (pa, pb, pba) = (&pullback[a], &pullback[b], &pullback[g.compose(b, a)]);
        if phi.len() != fr.n_obj() {
            return Err(Error::Mismatch(format!("constraint ({a}, {b}) has the wrong length")));
        }
        for (t, &k) in phi.iter().enumerate() {
            if fp.src(k) != pa.obj_map[pb.obj_map[t]] || fp.tgt(k) != pba.obj_map[t] {
                return Err(Error::InvalidMorphism(format!("constraint ({a}, {b}) at {t} has wrong endpoints")));
            }
            if fp.inverse_of(k).is_none() {
                return Err(Error::InvalidMorphism(format!("constraint ({a}, {b}) at {t} is not invertible")));
            }
            if (g.is_identity(a) || g.is_identity(b)) && !fp.is_identity(k) {
                return Err(Error::InvalidMorphism(format!("constraint ({a}, {b}) at {t} is not an identity")));
            }
        }
        for y in 0..fr.n_mor() {
            let lhs = fp.compose(phi[fr.tgt(y)], pa.mor_map[pb.mor_map[y]]);
            let rhs = fp.compose(pba.mor_map[y], phi[fr.src(y)]);
            if lhs != rhs {
                return Err(Error::InvalidMorphism(format!("constraint ({a}, {b}) not natural at {y}")));
            }
        }
    }
    for a in 0..g.n_mor() {
        for b in g.out_of(g.tgt(a)) {
            for c in g.out_of(g.tgt(b)) {
                let (ba, cb) = (g.compose(b, a), g.compose(c, b));
                let fp = &fibres[g.src(a)];
                let phi = |x: usize, y: usize| &constraint[&(x, y)];
                for t in 0..fibres[g.tgt(c)].n_obj() {
                    let ct = pullback[c].obj_map[t];
                    let one = fp.compose(phi(a, cb)[t], pullback[a].mor_map[phi(b, c)[t]]);
                    let two = fp.compose(phi(ba, c)[t], phi(a, b)[ct]);
                    if one != two {
                        return Err(Error::InvalidMorphism(format!(
                            "cocycle condition fails at ({a}, {b}, {c}) on {t}"
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `a*(t) = src σ(a, t)`, `a*(y) = σ(a, t')⁻¹ ∘ y ∘ σ(a, t)` and
/// `φ_(a,b) = σ(ba)⁻¹ ∘ σ(b) ∘ σ(a)`.
pub fn cleavage_form(f: &GroupoidFibration) -> Result<CleavageForm> {
    let (g, h) = (&f.base, &f.total);
    let fibres: Vec<FinGroupoid> = f.fibres().iter().map(|fb| fb.gpd.clone()).collect();
    let mut pullback = Vec::with_capacity(g.n_mor());
    for a in 0..g.n_mor() {
        let (fp, fq) = (f.fibre(g.src(a)), f.fibre(g.tgt(a)));
        let obj_map = fq.objects.iter().map(|&t| fp.local_obj(f.pull(a, t))).collect();
        let mor_map = fq
            .incl
            .iter()
            .map(|&y| {
                let (t, t1) = (h.src(y), h.tgt(y));
                fp.local_mor(h.compose_all(&[h.inv(f.lift(a, t1)), y, f.lift(a, t)]))
            })
            .collect();
        pullback.push(FinFunctor::new(fq.cat().clone(), fp.cat().clone(), obj_map, mor_map)?);
    }
    let mut constraint = BTreeMap::new();
    for a in 0..g.n_mor() {
        for b in g.out_of(g.tgt(a)) {
            let ba = g.compose(b, a);
            let (fp, fr) = (f.fibre(g.src(a)), f.fibre(g.tgt(b)));
            let comps = fr
                .objects
                .iter()
                .map(|&u| {
                    let bu = f.pull(b, u);
                    fp.local_mor(h.compose_all(&[h.inv(f.lift(ba, u)), f.lift(b, u), f.lift(a, bu)]))
                })
                .collect();
            constraint.insert((a, b), comps);
        }
    }
    let cf = CleavageForm { base: g.clone(), fibres, pullback, constraint };
    cf.verify()?;
    Ok(cf)
}

/// Isos `trans(a)(s, t) ≅ fibre(p)(s, a* t)`, `x ↦ σ(a, t)⁻¹ ∘ x`, checked
/// against both constraint families. Returns the represented modules and
/// the isos.
pub fn forms_equivalence(
    f: &GroupoidFibration,
    ps: &PsFunctorModOp,
    cf: &CleavageForm,
) -> Result<Vec<(Module, ModuleMorphism)>> {
    let (g, h) = (&f.base, &f.total);
    let mut out = Vec::with_capacity(g.n_mor());
    for a in 0..g.n_mor() {
        let (fp, fq) = (f.fibre(g.src(a)), f.fibre(g.tgt(a)));
        if *ps.fibres[g.src(a)] != **fp.cat() || **cf.fibres[g.tgt(a)].cat() != **fq.cat() {
            return Err(Error::Mismatch(format!("fibres over the ends of {a} differ between forms")));
        }
        let pb = &cf.pullback[a];
        let cp = fp.cat();
        let rep = Module::new(
            fq.cat().clone(),
            cp.clone(),
            |s, t| cp.hom(s, pb.obj_map[t]).len(),
            |beta, t, x| {
                let y = cp.hom(cp.tgt(beta), pb.obj_map[t])[x];
                cp.hom_index(cp.compose(y, beta))
            },
            |alpha, s, x| {
                let y = cp.hom(s, pb.obj_map[fq.cat().src(alpha)])[x];
                cp.hom_index(cp.compose(pb.mor_map[alpha], y))
            },
        )?;
        let nq = fq.objects.len();
        let components = (0..fp.objects.len() * nq)
            .map(|i| {
                let (s, t) = (i / nq, i % nq);
                f.over(a, fp.objects[s], fq.objects[t])
                    .iter()
                    .map(|&x| cp.hom_index(fp.local_mor(h.compose(h.inv(f.lift(a, fq.objects[t])), x))))
                    .collect()
            })
            .collect();
        let iso = ModuleMorphism { components };
        iso.verify_iso(&ps.trans[a], &rep)?;
        out.push((rep, iso));
    }
    for a in 0..g.n_mor() {
        for b in g.out_of(g.tgt(a)) {
            let ba = g.compose(b, a);
            let (fp, fq, fr) = (f.fibre(g.src(a)), f.fibre(g.tgt(a)), f.fibre(g.tgt(b)));
            let phi = &cf.constraint[&(a, b)];
            let cp = fp.cat();
            // Image of a total morphism `x` over `k` in `fibre(src k)(s, k* t)`.
            let to_local = |k: usize, x: usize| {
                let (fs, ft) = (f.fibre(g.src(k)), f.fibre(g.tgt(k)));
                let (s, t) = (fs.local_obj(h.src(x)), ft.local_obj(h.tgt(x)));
                let y = out[k].1.apply(&ps.trans[k], s, t, f.rank(x));
                fs.cat().hom(s, cf.pullback[k].obj_map[t])[y]
            };
            for &s in &fp.objects {
                for &t in &fq.objects {
                    for &u in &fr.objects {
                        for m in f.over(b, t, u) {
                            for n in f.over(a, s, t) {
                                let lhs = to_local(ba, h.compose(m, n));
                                let rhs = cp.compose_all(&[
                                    phi[fr.local_obj(u)],
                                    cf.pullback[a].mor_map[to_local(b, m)],
                                    to_local(a, n),
                                ]);
                                if lhs != rhs {
                                    return Err(Error::Internal(format!(
                                        "forms disagree on constraint ({a}, {b}) at ({m}, {n})"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
