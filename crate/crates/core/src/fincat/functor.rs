use std::sync::Arc;

use super::FinCat;
use crate::error::{Error, Result};

/// A functor between finite categories given by object and morphism tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFunctor {
    pub dom: Arc<FinCat>,
    pub cod: Arc<FinCat>,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl FinFunctor {
    pub fn new(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self> {
        let f = FinFunctor { dom, cod, obj_map, mor_map };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        let (d, c) = (&self.dom, &self.cod);
        if self.obj_map.len() != d.n_obj() || self.mor_map.len() != d.n_mor() {
            return Err(Error::InvalidFunctor("table lengths disagree with domain".into()));
        }
        if self.obj_map.iter().any(|&o| o >= c.n_obj()) || self.mor_map.iter().any(|&m| m >= c.n_mor()) {
            return Err(Error::InvalidFunctor("image index out of range".into()));
        }
        for f in 0..d.n_mor() {
            let ff = self.mor_map[f];
            if c.src(ff) != self.obj_map[d.src(f)] || c.tgt(ff) != self.obj_map[d.tgt(f)] {
                return Err(Error::InvalidFunctor(format!("morphism {f} mapped with wrong endpoints")));
            }
        }
        for a in 0..d.n_obj() {
            if self.mor_map[d.idn(a)] != c.idn(self.obj_map[a]) {
                return Err(Error::InvalidFunctor(format!("identity of {a} not preserved")));
            }
        }
        for f in 0..d.n_mor() {
            for g in d.out_of(d.tgt(f)) {
                if self.mor_map[d.compose(g, f)] != c.compose(self.mor_map[g], self.mor_map[f]) {
                    return Err(Error::InvalidFunctor(format!("composite of ({g}, {f}) not preserved")));
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: Arc<FinCat>) -> Self {
        FinFunctor {
            obj_map: (0..c.n_obj()).collect(),
            mor_map: (0..c.n_mor()).collect(),
            dom: c.clone(),
            cod: c,
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if *self.cod != *other.dom {
            return Err(Error::Mismatch("functor composite boundary".into()));
        }
        Ok(FinFunctor {
            dom: self.dom.clone(),
            cod: other.cod.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj_map[o]).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor_map[m]).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        *self.dom == *self.cod
            && self.obj_map.iter().enumerate().all(|(i, &o)| i == o)
            && self.mor_map.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// Whether every hom-set map `hom(a, b) → hom(Fa, Fb)` is a bijection.
    pub fn is_fully_faithful(&self) -> bool {
        let (d, c) = (&self.dom, &self.cod);
        (0..d.n_obj()).all(|a| {
            (0..d.n_obj()).all(|b| {
                let target = c.hom(self.obj_map[a], self.obj_map[b]);
                let mut image: Vec<usize> = d.hom(a, b).iter().map(|&f| self.mor_map[f]).collect();
                image.sort_unstable();
                image.dedup();
                image.len() == d.hom(a, b).len() && image.len() == target.len()
            })
        })
    }
}

/// A natural isomorphism `F ⇒ G` between parallel functors, by components in
/// the codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorIso {
    pub components: Vec<usize>,
}

impl FunctorIso {
    /// Checks naturality `G(f) ∘ θ_a = θ_b ∘ F(f)` and invertibility.
    pub fn verify(&self, f: &FinFunctor, g: &FinFunctor) -> Result<()> {
        let c = &f.cod;
        if self.components.len() != f.dom.n_obj() {
            return Err(Error::InvalidMorphism("component count".into()));
        }
        for (a, &t) in self.components.iter().enumerate() {
            if c.src(t) != f.obj_map[a] || c.tgt(t) != g.obj_map[a] || c.inverse_of(t).is_none() {
                return Err(Error::InvalidMorphism(format!("component at {a} is not an iso F a → G a")));
            }
        }
        for m in 0..f.dom.n_mor() {
            let (a, b) = (f.dom.src(m), f.dom.tgt(m));
            if c.compose(g.mor_map[m], self.components[a]) != c.compose(self.components[b], f.mor_map[m]) {
                return Err(Error::InvalidMorphism(format!("naturality fails at morphism {m}")));
            }
        }
        Ok(())
    }
}

/// A functor into finite sets: a size per object and a function per morphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor {
    pub dom: Arc<FinCat>,
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(dom: Arc<FinCat>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let s = SetFunctor { dom, sizes, action };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let d = &self.dom;
        if self.sizes.len() != d.n_obj() || self.action.len() != d.n_mor() {
            return Err(Error::InvalidSetFunctor("table lengths disagree".into()));
        }
        for f in 0..d.n_mor() {
            let (a, b) = (d.src(f), d.tgt(f));
            if self.action[f].len() != self.sizes[a] || self.action[f].iter().any(|&y| y >= self.sizes[b]) {
                return Err(Error::InvalidSetFunctor(format!("action of {f} has wrong shape")));
            }
        }
        for a in 0..d.n_obj() {
            if self.action[d.idn(a)].iter().enumerate().any(|(i, &y)| i != y) {
                return Err(Error::InvalidSetFunctor(format!("identity at {a} acts non-trivially")));
            }
        }
        for f in 0..d.n_mor() {
            for g in d.out_of(d.tgt(f)) {
                let gf = d.compose(g, f);
                for x in 0..self.sizes[d.src(f)] {
                    if self.action[gf][x] != self.action[g][self.action[f][x]] {
                        return Err(Error::InvalidSetFunctor(format!(
                            "functoriality fails at ({g}, {f}), element {x}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn act(&self, f: usize, x: usize) -> usize {
        self.action[f][x]
    }

    /// Constant functor at a set of size `n` with identity actions.
    pub fn constant(dom: Arc<FinCat>, n: usize) -> Self {
        let sizes = vec![n; dom.n_obj()];
        let action = (0..dom.n_mor()).map(|_| (0..n).collect()).collect();
        SetFunctor { dom, sizes, action }
    }

    pub fn terminal(dom: Arc<FinCat>) -> Self {
        Self::constant(dom, 1)
    }

    /// Covariant representable `hom(p, -)`; element index = hom-set position.
    pub fn representable(dom: Arc<FinCat>, p: usize) -> Self {
        let d = dom.clone();
        let sizes = (0..d.n_obj()).map(|b| d.hom(p, b).len()).collect();
        let action = (0..d.n_mor())
            .map(|f| {
                d.hom(p, d.src(f))
                    .iter()
                    .map(|&x| d.hom_index(d.compose(f, x)))
                    .collect()
            })
            .collect();
        SetFunctor { dom, sizes, action }
    }

    /// Pointwise product; element `(x, y)` is `x * |G b| + y`.
    pub fn product(&self, other: &SetFunctor) -> Result<SetFunctor> {
        if *self.dom != *other.dom {
            return Err(Error::Mismatch("pointwise product over different categories".into()));
        }
        let d = self.dom.clone();
        let sizes = (0..d.n_obj()).map(|a| self.sizes[a] * other.sizes[a]).collect();
        let action = (0..d.n_mor())
            .map(|f| {
                let (a, b) = (d.src(f), d.tgt(f));
                (0..self.sizes[a] * other.sizes[a])
                    .map(|xy| {
                        let (x, y) = (xy / other.sizes[a], xy % other.sizes[a]);
                        self.act(f, x) * other.sizes[b] + other.act(f, y)
                    })
                    .collect()
            })
            .collect();
        Ok(SetFunctor { dom: d, sizes, action })
    }

    /// Relabels the elements at each object by the given permutations
    /// (`perm[a][old] = new`).
    pub fn relabel(&self, perm: &[Vec<usize>]) -> SetFunctor {
        let d = &self.dom;
        let mut action = vec![Vec::new(); d.n_mor()];
        for f in 0..d.n_mor() {
            let (a, b) = (d.src(f), d.tgt(f));
            let mut row = vec![0; self.sizes[a]];
            for x in 0..self.sizes[a] {
                row[perm[a][x]] = perm[b][self.act(f, x)];
            }
            action[f] = row;
        }
        SetFunctor { dom: self.dom.clone(), sizes: self.sizes.clone(), action }
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// A natural transformation between set-valued functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    pub components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn identity(f: &SetFunctor) -> Self {
        NatTrans { components: f.sizes.iter().map(|&n| (0..n).collect()).collect() }
    }

    /// Checks shape and every naturality square.
    pub fn verify(&self, source: &SetFunctor, target: &SetFunctor) -> Result<()> {
        let d = &source.dom;
        if *d != target.dom || self.components.len() != d.n_obj() {
            return Err(Error::InvalidMorphism("natural transformation boundary".into()));
        }
        for a in 0..d.n_obj() {
            if self.components[a].len() != source.sizes[a]
                || self.components[a].iter().any(|&y| y >= target.sizes[a])
            {
                return Err(Error::InvalidMorphism(format!("component at {a} has wrong shape")));
            }
        }
        for f in 0..d.n_mor() {
            let (a, b) = (d.src(f), d.tgt(f));
            for x in 0..source.sizes[a] {
                if self.components[b][source.act(f, x)] != target.act(f, self.components[a][x]) {
                    return Err(Error::InvalidMorphism(format!(
                        "naturality fails at morphism {f}, element {x}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|c| is_bijection(c, c.len()))
    }

    pub fn inverse(&self) -> Option<NatTrans> {
        if !self.is_iso() {
            return None;
        }
        Some(NatTrans {
            components: self.components.iter().map(|c| invert(c)).collect(),
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &NatTrans) -> NatTrans {
        NatTrans {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(c, d)| c.iter().map(|&x| d[x]).collect())
                .collect(),
        }
    }
}

pub(crate) fn is_bijection(map: &[usize], target_len: usize) -> bool {
    if map.len() != target_len {
        return false;
    }
    let mut seen = vec![false; target_len];
    for &y in map {
        if y >= target_len || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

pub(crate) fn invert(map: &[usize]) -> Vec<usize> {
    let mut out = vec![0; map.len()];
    for (x, &y) in map.iter().enumerate() {
        out[y] = x;
    }
    out
}
