//! The automorphism groupoid `𝒢^aut`, its braided promonoidal structure,
//! crossed `𝒢`-sets and the centre of `[𝒢, Set]`.

mod crossed;
mod promonoidal;

pub use crossed::{
    elements_functor, from_centre, from_elements, hat_product_iso, roundtrip_crossed, roundtrip_elements, to_centre,
    universal_centre_piece, CrossedGSet, HalfBraiding, TestFamily,
};
pub use promonoidal::{check_balanced_star_autonomy, conjugation_promonoidal, promonoidal_aut, PairTable};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor, FinGroupoid, SetFunctor};

/// Objects `(s, x)` with `s` an object of a subgroupoid `K ⊆ H` and
/// `x ∈ H(s, s)`; morphisms `(s, x) → (t, y)` are `k ∈ K(s, t)` with
/// `k ∘ x = y ∘ k`.
#[derive(Clone, Debug)]
pub struct ConjCategory {
    pub ambient: FinGroupoid,
    pub in_sub: Vec<bool>,
    pub objects: Vec<(usize, usize)>,
    pub gpd: FinGroupoid,
    /// Underlying morphism of `H` for each morphism.
    pub underlying: Vec<usize>,
    obj_lookup: BTreeMap<(usize, usize), usize>,
    mor_lookup: BTreeMap<(usize, usize, usize), usize>,
}

impl ConjCategory {
    /// `sub_objects` lists the objects of `K`; `in_sub` marks its morphisms.
    pub fn new(ambient: &FinGroupoid, sub_objects: &[usize], in_sub: Vec<bool>) -> Result<Self> {
        let h = ambient;
        if in_sub.len() != h.n_mor() {
            return Err(Error::InvalidCategory("subgroupoid mask has the wrong length".into()));
        }
        let mut objs = sub_objects.to_vec();
        objs.sort_unstable();
        objs.dedup();
        let is_obj: Vec<bool> = (0..h.n_obj()).map(|o| objs.binary_search(&o).is_ok()).collect();
        for f in 0..h.n_mor() {
            if !in_sub[f] {
                continue;
            }
            if !is_obj[h.src(f)] || !is_obj[h.tgt(f)] {
                return Err(Error::InvalidCategory(format!("subgroupoid morphism {f} leaves its objects")));
            }
            if !in_sub[h.inv(f)] {
                return Err(Error::InvalidCategory(format!("subgroupoid not closed under inverse at {f}")));
            }
            for g in h.out_of(h.tgt(f)) {
                if in_sub[g] && !in_sub[h.compose(g, f)] {
                    return Err(Error::InvalidCategory(format!("subgroupoid not closed at ({g}, {f})")));
                }
            }
        }
        if let Some(&o) = objs.iter().find(|&&o| !in_sub[h.idn(o)]) {
            return Err(Error::InvalidCategory(format!("subgroupoid lacks identity of {o}")));
        }
        let mut objects = Vec::new();
        let mut obj_lookup = BTreeMap::new();
        for &s in &objs {
            for &x in h.hom(s, s) {
                obj_lookup.insert((s, x), objects.len());
                objects.push((s, x));
            }
        }
        let (mut src, mut tgt, mut underlying) = (Vec::new(), Vec::new(), Vec::new());
        let mut mor_lookup = BTreeMap::new();
        for (i, &(s, x)) in objects.iter().enumerate() {
            for (j, &(t, y)) in objects.iter().enumerate() {
                for &k in h.hom(s, t) {
                    if in_sub[k] && h.compose(k, x) == h.compose(y, k) {
                        mor_lookup.insert((i, j, k), src.len());
                        src.push(i);
                        tgt.push(j);
                        underlying.push(k);
                    }
                }
            }
        }
        let idn = objects.iter().enumerate().map(|(i, &(s, _))| mor_lookup[&(i, i, h.idn(s))]).collect();
        let cat = FinCat::new(objects.len(), src.clone(), tgt.clone(), idn, |g, f| {
            mor_lookup[&(src[f], tgt[g], h.compose(underlying[g], underlying[f]))]
        })?;
        Ok(ConjCategory {
            ambient: h.clone(),
            in_sub,
            objects,
            gpd: FinGroupoid::from_cat(cat)?,
            underlying,
            obj_lookup,
            mor_lookup,
        })
    }

    /// `K = H`.
    pub fn full(h: &FinGroupoid) -> Result<Self> {
        let objs: Vec<usize> = (0..h.n_obj()).collect();
        Self::new(h, &objs, vec![true; h.n_mor()])
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        self.gpd.cat()
    }

    pub fn obj(&self, s: usize, x: usize) -> Option<usize> {
        self.obj_lookup.get(&(s, x)).copied()
    }

    /// The morphism `i → j` with underlying `k`, if `k` is one.
    pub fn mor(&self, i: usize, j: usize, k: usize) -> Option<usize> {
        self.mor_lookup.get(&(i, j, k)).copied()
    }

    /// Connected components as sorted lists of objects.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::unionfind::UnionFind::new(self.gpd.n_obj());
        for f in 0..self.gpd.n_mor() {
            uf.union(self.gpd.src(f), self.gpd.tgt(f));
        }
        let (label, reps) = uf.classes();
        let mut comps = vec![Vec::new(); reps.len()];
        for (o, &l) in label.iter().enumerate() {
            comps[l].push(o);
        }
        comps
    }
}

/// `𝒢^aut` with `q: 𝒢^aut → 𝒢`, `i: 𝒢 → 𝒢^aut` and `Aut_𝒢`.
#[derive(Clone, Debug)]
pub struct AutGroupoid {
    pub base: FinGroupoid,
    pub conj: ConjCategory,
    pub q: FinFunctor,
    pub i: FinFunctor,
    /// `Aut_𝒢 p = 𝒢(p, p)` (elements are hom-set positions), acting by
    /// conjugation.
    pub aut_functor: SetFunctor,
}

impl AutGroupoid {
    pub fn aut(&self) -> &FinGroupoid {
        &self.conj.gpd
    }

    pub fn obj(&self, p: usize, a: usize) -> usize {
        self.conj.obj(p, a).expect("endomorphism indexes an object")
    }

    /// Components of `𝒢^aut`.
    pub fn component_count(&self) -> usize {
        self.conj.components().len()
    }

    /// Every `f: p → q` has exactly one lift with target `(q, b)`.
    pub fn check_unique_lifts(&self) -> Result<()> {
        let g = &self.base;
        let aut = self.aut();
        for (j, &(q, _)) in self.conj.objects.iter().enumerate() {
            for p in 0..g.n_obj() {
                for &f in g.hom(p, q) {
                    let lifts = (0..aut.n_mor()).filter(|&m| aut.tgt(m) == j && self.q.mor_map[m] == f).count();
                    if lifts != 1 {
                        return Err(Error::NotFibration { morphism: f, target: j });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn aut_functor(g: &FinGroupoid) -> Result<SetFunctor> {
    SetFunctor::new(
        g.cat().clone(),
        (0..g.n_obj()).map(|p| g.hom(p, p).len()).collect(),
        (0..g.n_mor())
            .map(|f| {
                let p = g.src(f);
                g.hom(p, p).iter().map(|&a| g.hom_index(g.conj(f, a))).collect()
            })
            .collect(),
    )
}

pub fn aut_groupoid(g: &FinGroupoid) -> Result<AutGroupoid> {
    let conj = ConjCategory::full(g)?;
    let aut = conj.cat().clone();
    let q = FinFunctor::new(
        aut.clone(),
        g.cat().clone(),
        conj.objects.iter().map(|&(p, _)| p).collect(),
        conj.underlying.clone(),
    )?;
    let obj_map: Vec<usize> = (0..g.n_obj()).map(|p| conj.obj(p, g.idn(p)).expect("identity object")).collect();
    let mor_map = (0..g.n_mor())
        .map(|f| conj.mor(obj_map[g.src(f)], obj_map[g.tgt(f)], f).expect("identity objects are conjugate"))
        .collect();
    let i = FinFunctor::new(g.cat().clone(), aut, obj_map, mor_map)?;
    let ag = AutGroupoid { base: g.clone(), conj, q, i, aut_functor: aut_functor(g)? };
    ag.check_unique_lifts()?;
    if !ag.i.then(&ag.q)?.is_identity() {
        return Err(Error::Internal("q ∘ i is not the identity".into()));
    }
    Ok(ag)
}

#[cfg(test)]
mod tests;
