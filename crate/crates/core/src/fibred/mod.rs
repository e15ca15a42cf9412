//! Groupoid fibrations, the fibre pseudofunctor `ℍ` in module and cleavage
//! form, the Grothendieck construction, `π^aut` with `ℍ^aut`, and the
//! monoidale structures carried by `ℍ` and `ℍ^aut`.

mod aut;
mod grothendieck;
mod monoidale;
mod pseudo;

pub use aut::{aut_fibration, AutFibration};
pub use grothendieck::{constant_cleavage, grothendieck, grothendieck_comparison, Grothendieck};
pub use monoidale::{check_haut_monoidale, h_monoidale, haut_monoidale, z_component, HautMonoidale, PsMonoidale, PsTransform};
pub(crate) use pseudo::verify_pseudo;
pub use pseudo::{cleavage_form, fibre_pseudofunctor, forms_equivalence, CleavageForm, PsFunctorModOp};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor, FinGroupoid};

/// The fibre `π⁻¹(p)`: objects over `p` and morphisms over `1_p`.
#[derive(Clone, Debug)]
pub struct Fibre {
    pub gpd: FinGroupoid,
    /// Total object of each fibre object, increasing.
    pub objects: Vec<usize>,
    /// Total morphism of each fibre morphism, increasing.
    pub incl: Vec<usize>,
    obj_local: Vec<usize>,
    mor_local: Vec<usize>,
}

impl Fibre {
    fn new(total: &FinGroupoid, proj: &FinFunctor, base: &FinGroupoid, p: usize) -> Result<Self> {
        let objects: Vec<usize> = (0..total.n_obj()).filter(|&s| proj.obj_map[s] == p).collect();
        let incl: Vec<usize> = if base.n_obj() == 0 {
            Vec::new()
        } else {
            (0..total.n_mor()).filter(|&f| proj.mor_map[f] == base.idn(p)).collect()
        };
        let mut obj_local = vec![usize::MAX; total.n_obj()];
        for (i, &s) in objects.iter().enumerate() {
            obj_local[s] = i;
        }
        let mut mor_local = vec![usize::MAX; total.n_mor()];
        for (i, &f) in incl.iter().enumerate() {
            mor_local[f] = i;
        }
        let cat = FinCat::new(
            objects.len(),
            incl.iter().map(|&f| obj_local[total.src(f)]).collect(),
            incl.iter().map(|&f| obj_local[total.tgt(f)]).collect(),
            objects.iter().map(|&s| mor_local[total.idn(s)]).collect(),
            |g, f| mor_local[total.compose(incl[g], incl[f])],
        )?;
        Ok(Fibre { gpd: FinGroupoid::from_cat(cat)?, objects, incl, obj_local, mor_local })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        self.gpd.cat()
    }

    /// Fibre index of a total object over this fibre's base object.
    pub fn local_obj(&self, s: usize) -> usize {
        self.obj_local[s]
    }

    /// Fibre index of a total morphism over the identity.
    pub fn local_mor(&self, f: usize) -> usize {
        self.mor_local[f]
    }
}

/// A fibration `π: ℋ → 𝒢` of groupoids with its canonical cleavage.
#[derive(Clone, Debug)]
pub struct GroupoidFibration {
    pub total: FinGroupoid,
    pub base: FinGroupoid,
    pub proj: FinFunctor,
    /// `σ(g, t)` at `g * n_obj(ℋ) + t` for `tgt g = π t`; unused slots hold
    /// `usize::MAX`.
    lifts: Vec<usize>,
    /// Position of each total morphism among those with its source, target
    /// and image.
    rank: Vec<usize>,
    fibres: Vec<Fibre>,
}

impl GroupoidFibration {
    /// The chosen lift `σ(g, t): g*(t) → t`.
    pub fn lift(&self, g: usize, t: usize) -> usize {
        let l = self.lifts[g * self.total.n_obj() + t];
        debug_assert!(l != usize::MAX, "no lift slot for ({g}, {t})");
        l
    }

    /// `g*(t) = src σ(g, t)`.
    pub fn pull(&self, g: usize, t: usize) -> usize {
        self.total.src(self.lift(g, t))
    }

    pub fn fibre(&self, p: usize) -> &Fibre {
        &self.fibres[p]
    }

    pub fn fibres(&self) -> &[Fibre] {
        &self.fibres
    }

    /// Position of `x` in `over(π x, src x, tgt x)`.
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// Total morphisms `s → t` over `g`, increasing.
    pub fn over(&self, g: usize, s: usize, t: usize) -> Vec<usize> {
        self.total.hom(s, t).iter().copied().filter(|&x| self.proj.mor_map[x] == g).collect()
    }
}

/// Verifies the lifting condition and builds the cleavage choosing the
/// least-index lift, with `σ(1, t) = 1_t`.
pub fn analyze_fibration(proj: &FinFunctor) -> Result<GroupoidFibration> {
    analyze_with(proj, |_, _| None)
}

/// As [`analyze_fibration`], but `choose(g, t)` may prescribe the lift for
/// non-identity `g`.
pub(crate) fn analyze_with(
    proj: &FinFunctor,
    choose: impl Fn(usize, usize) -> Option<usize>,
) -> Result<GroupoidFibration> {
    let total = FinGroupoid::from_cat((*proj.dom).clone())?;
    let base = FinGroupoid::from_cat((*proj.cod).clone())?;
    let (nt, nm) = (total.n_obj(), base.n_mor());
    let mut lifts = vec![usize::MAX; nm * nt];
    for t in 0..nt {
        let q = proj.obj_map[t];
        for p in 0..base.n_obj() {
            for &g in base.hom(p, q) {
                let chosen = if base.is_identity(g) {
                    Some(total.idn(t))
                } else if let Some(x) = choose(g, t) {
                    if total.tgt(x) != t || proj.mor_map[x] != g {
                        return Err(Error::Internal(format!("prescribed lift of ({g}, {t}) is not a lift")));
                    }
                    Some(x)
                } else {
                    (0..total.n_mor()).find(|&x| total.tgt(x) == t && proj.mor_map[x] == g)
                };
                lifts[g * nt + t] = chosen.ok_or(Error::NotFibration { morphism: g, target: t })?;
            }
        }
    }
    if total.n_obj() == 1 && base.n_obj() == 1 {
        let mut hit = vec![false; nm];
        for &g in &proj.mor_map {
            hit[g] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(Error::Internal("non-surjective group map passed the lifting test".into()));
        }
    }
    let mut seen = std::collections::HashMap::new();
    let rank = (0..total.n_mor())
        .map(|x| {
            let c = seen.entry((total.src(x), total.tgt(x), proj.mor_map[x])).or_insert(0);
            *c += 1;
            *c - 1
        })
        .collect();
    let fibres = (0..base.n_obj()).map(|p| Fibre::new(&total, proj, &base, p)).collect::<Result<Vec<_>>>()?;
    Ok(GroupoidFibration { total, base, proj: proj.clone(), lifts, rank, fibres })
}

/// The functor between one-object groupoids induced by a group map.
pub fn group_map(dom: &FinGroupoid, cod: &FinGroupoid, map: Vec<usize>) -> Result<FinFunctor> {
    FinFunctor::new(dom.cat().clone(), cod.cat().clone(), vec![0; dom.n_obj()], map)
}

#[cfg(test)]
mod tests;
