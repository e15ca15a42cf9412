//! The Grothendieck construction of a cleavage-form pseudofunctor.

use std::collections::{BTreeMap, HashMap};

use super::{analyze_fibration, CleavageForm, GroupoidFibration};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor, FinGroupoid};

/// The total groupoid with objects `(p, s)` and morphisms `(a, t, f)` for
/// `a: p → q`, `t ∈ fibre(q)` and `f: s → a* t` in `fibre(p)`.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub fibration: GroupoidFibration,
    pub objects: Vec<(usize, usize)>,
    pub morphisms: Vec<(usize, usize, usize)>,
}

fn is_equivalence(f: &FinFunctor) -> bool {
    let d = &f.cod;
    let reached = |o: usize| f.obj_map.iter().any(|&x| !d.hom(x, o).is_empty());
    f.is_fully_faithful() && (0..d.n_obj()).all(reached)
}

pub fn grothendieck(cf: &CleavageForm) -> Result<Grothendieck> {
    cf.verify()?;
    let g = &cf.base;
    for a in 0..g.n_mor() {
        if !is_equivalence(&cf.pullback[a]) {
            return Err(Error::InvalidFunctor(format!("transition along {a} is not an equivalence")));
        }
    }
    let mut offsets = Vec::with_capacity(g.n_obj());
    let mut objects = Vec::new();
    for (p, fb) in cf.fibres.iter().enumerate() {
        offsets.push(objects.len());
        objects.extend((0..fb.n_obj()).map(|s| (p, s)));
    }
    let mut morphisms = Vec::new();
    let mut lookup = HashMap::new();
    for a in 0..g.n_mor() {
        let (fp, fq) = (&cf.fibres[g.src(a)], &cf.fibres[g.tgt(a)]);
        for t in 0..fq.n_obj() {
            let at = cf.pullback[a].obj_map[t];
            for s in 0..fp.n_obj() {
                for &f in fp.hom(s, at) {
                    lookup.insert((a, t, f), morphisms.len());
                    morphisms.push((a, t, f));
                }
            }
        }
    }
    let src: Vec<usize> = morphisms.iter().map(|&(a, _, f)| offsets[g.src(a)] + cf.fibres[g.src(a)].src(f)).collect();
    let tgt: Vec<usize> = morphisms.iter().map(|&(a, t, _)| offsets[g.tgt(a)] + t).collect();
    let idn = objects.iter().map(|&(p, s)| lookup[&(g.idn(p), s, cf.fibres[p].idn(s))]).collect();
    let cat = FinCat::new(objects.len(), src, tgt, idn, |m2, m1| {
        let (b, u, k) = morphisms[m2];
        let (a, _, f) = morphisms[m1];
        let fp = &cf.fibres[g.src(a)];
        let phi = cf.constraint[&(a, b)][u];
        lookup[&(g.compose(b, a), u, fp.compose_all(&[phi, cf.pullback[a].mor_map[k], f]))]
    })?;
    let total = FinGroupoid::from_cat(cat)?;
    let proj = FinFunctor::new(
        total.cat().clone(),
        g.cat().clone(),
        objects.iter().map(|&(p, _)| p).collect(),
        morphisms.iter().map(|&(a, _, _)| a).collect(),
    )?;
    Ok(Grothendieck { fibration: analyze_fibration(&proj)?, objects, morphisms })
}

/// The comparison `(a, t, f) ↦ σ(a, t) ∘ f` from the Grothendieck
/// construction on the cleavage form of `f` back to `f`, checked to be an
/// isomorphism over the base.
pub fn grothendieck_comparison(f: &GroupoidFibration, gr: &Grothendieck) -> Result<FinFunctor> {
    let h = &f.total;
    let obj_map: Vec<usize> = gr.objects.iter().map(|&(p, s)| f.fibre(p).objects[s]).collect();
    let mor_map: Vec<usize> = gr
        .morphisms
        .iter()
        .map(|&(a, t, k)| {
            let fp = f.fibre(f.base.src(a));
            let t_total = f.fibre(f.base.tgt(a)).objects[t];
            h.compose(f.lift(a, t_total), fp.incl[k])
        })
        .collect();
    let phi = FinFunctor::new(gr.fibration.total.cat().clone(), h.cat().clone(), obj_map, mor_map)?;
    if phi.then(&f.proj)?.mor_map != gr.fibration.proj.mor_map {
        return Err(Error::Mismatch("comparison does not commute with the projections".into()));
    }
    let bijective = crate::fincat::functor_is_bijection;
    if !bijective(&phi.obj_map, h.n_obj()) || !bijective(&phi.mor_map, h.n_mor()) {
        return Err(Error::Internal("comparison is not an isomorphism".into()));
    }
    Ok(phi)
}

/// The pseudofunctor constant at `k` with identity transitions.
pub fn constant_cleavage(base: &FinGroupoid, k: &FinGroupoid) -> Result<CleavageForm> {
    let id = FinFunctor::identity(k.cat().clone());
    let mut constraint = BTreeMap::new();
    for a in 0..base.n_mor() {
        for b in base.out_of(base.tgt(a)) {
            constraint.insert((a, b), (0..k.n_obj()).map(|t| k.idn(t)).collect());
        }
    }
    let cf = CleavageForm {
        base: base.clone(),
        fibres: vec![k.clone(); base.n_obj()],
        pullback: vec![id; base.n_mor()],
        constraint,
    };
    cf.verify()?;
    Ok(cf)
}
