//! The induced fibration `π^aut: ℋ^aut → 𝒢^aut` and `ℍ^aut`.

use super::{analyze_with, fibre_pseudofunctor, GroupoidFibration, PsFunctorModOp};
use crate::autgpd::{aut_groupoid, AutGroupoid};
use crate::error::{Error, Result};
use crate::fincat::FinFunctor;

#[derive(Clone, Debug)]
pub struct AutFibration {
    pub total_aut: AutGroupoid,
    pub base_aut: AutGroupoid,
    pub fibration: GroupoidFibration,
    pub haut: PsFunctorModOp,
    /// `π ∘ q_ℋ: ℋ^aut → 𝒢`, whose fibre over `p` is `Σ_a ℍ^aut(p, a)`.
    pub hat: GroupoidFibration,
}

/// `(s, x) ↦ (π s, π x)`, `k ↦ π k`, with the cleavage
/// `σ^aut(f, (t, y)) = σ(f, t): (f* t, y^σ(f)) → (t, y)`.
pub fn aut_fibration(f: &GroupoidFibration) -> Result<AutFibration> {
    let total_aut = aut_groupoid(&f.total)?;
    let base_aut = aut_groupoid(&f.base)?;
    let (hc, gc) = (&total_aut.conj, &base_aut.conj);
    let obj_map: Vec<usize> =
        hc.objects.iter().map(|&(s, x)| base_aut.obj(f.proj.obj_map[s], f.proj.mor_map[x])).collect();
    let mor_map = (0..hc.gpd.n_mor())
        .map(|m| {
            let (i, j) = (hc.gpd.src(m), hc.gpd.tgt(m));
            gc.mor(obj_map[i], obj_map[j], f.proj.mor_map[hc.underlying[m]])
                .ok_or_else(|| Error::Internal(format!("image of aut morphism {m} is not a morphism")))
        })
        .collect::<Result<Vec<_>>>()?;
    let proj = FinFunctor::new(hc.cat().clone(), gc.cat().clone(), obj_map, mor_map)?;
    let h = &f.total;
    let fibration = analyze_with(&proj, |g, j| {
        let (t, y) = hc.objects[j];
        let k = f.lift(gc.underlying[g], t);
        let s = h.src(k);
        hc.mor(hc.obj(s, h.compose_all(&[h.inv(k), y, k]))?, j, k)
    })
    .map_err(|e| match e {
        Error::NotFibration { morphism, target } => {
            Error::Internal(format!("induced map is not a fibration at ({morphism}, {target})"))
        }
        other => other,
    })?;
    let haut = fibre_pseudofunctor(&fibration)?;
    let hat = hat_fibration(f, &total_aut)?;
    Ok(AutFibration { total_aut, base_aut, fibration, haut, hat })
}

fn hat_fibration(f: &GroupoidFibration, total_aut: &AutGroupoid) -> Result<GroupoidFibration> {
    let (h, hc) = (&f.total, &total_aut.conj);
    let proj = total_aut.q.then(&f.proj)?;
    analyze_with(&proj, |g, j| {
        let (t, y) = hc.objects[j];
        let k = f.lift(g, t);
        hc.mor(hc.obj(h.src(k), h.compose_all(&[h.inv(k), y, k]))?, j, k)
    })
    .map_err(|e| Error::Internal(format!("hat projection: {e}")))
}
