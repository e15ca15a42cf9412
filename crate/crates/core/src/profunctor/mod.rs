//! Two-sided modules (profunctors) between finite categories.
//!
//! A module `M: A → B` assigns a finite set `M(b, a)` to each `b ∈ B`,
//! `a ∈ A`; it is contravariant in `b` and covariant in `a`.

mod adjunction;
mod compose;
mod karoubi;

pub use adjunction::{functor_to_modules, AdjunctionWitness};
pub use compose::{associator, compose_modules, hcomp, left_unitor, right_unitor, Composite};
pub use karoubi::{karoubi, Karoubi};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, SetFunctor};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Module {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    sizes: Vec<usize>,
    /// `left[β][a]` maps `M(tgt β, a) → M(src β, a)`.
    left: Vec<Vec<Vec<usize>>>,
    /// `right[α][b]` maps `M(b, src α) → M(b, tgt α)`.
    right: Vec<Vec<Vec<usize>>>,
}

impl Module {
    /// Builds and validates a module from its sizes and action functions.
    pub fn new(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        size: impl Fn(usize, usize) -> usize,
        left: impl Fn(usize, usize, usize) -> usize,
        right: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let m = Self::new_unchecked(dom, cod, size, left, right);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        size: impl Fn(usize, usize) -> usize,
        left: impl Fn(usize, usize, usize) -> usize,
        right: impl Fn(usize, usize, usize) -> usize,
    ) -> Self {
        let (na, nb) = (dom.n_obj(), cod.n_obj());
        let sizes: Vec<usize> = (0..nb * na).map(|i| size(i / na, i % na)).collect();
        let left = (0..cod.n_mor())
            .map(|beta| {
                let b = cod.tgt(beta);
                (0..na)
                    .map(|a| (0..sizes[b * na + a]).map(|x| left(beta, a, x)).collect())
                    .collect()
            })
            .collect();
        let right = (0..dom.n_mor())
            .map(|alpha| {
                let a = dom.src(alpha);
                (0..nb)
                    .map(|b| (0..sizes[b * na + a]).map(|x| right(alpha, b, x)).collect())
                    .collect()
            })
            .collect();
        Module { dom, cod, sizes, left, right }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let (a_cat, b_cat) = (&self.dom, &self.cod);
        let bad = |msg: String| Err(Error::InvalidModule(msg));
        for beta in 0..b_cat.n_mor() {
            let b0 = b_cat.src(beta);
            for a in 0..a_cat.n_obj() {
                if self.left[beta][a].iter().any(|&y| y >= self.size(b0, a)) {
                    return bad(format!("left action of {beta} leaves M({b0}, {a})"));
                }
                if b_cat.is_identity(beta) && self.left[beta][a].iter().enumerate().any(|(i, &y)| i != y) {
                    return bad(format!("identity {beta} acts non-trivially on the left"));
                }
            }
        }
        for alpha in 0..a_cat.n_mor() {
            let a1 = a_cat.tgt(alpha);
            for b in 0..b_cat.n_obj() {
                if self.right[alpha][b].iter().any(|&y| y >= self.size(b, a1)) {
                    return bad(format!("right action of {alpha} leaves M({b}, {a1})"));
                }
                if a_cat.is_identity(alpha) && self.right[alpha][b].iter().enumerate().any(|(i, &y)| i != y) {
                    return bad(format!("identity {alpha} acts non-trivially on the right"));
                }
            }
        }
        // Functoriality of both actions.
        for beta in 0..b_cat.n_mor() {
            for gamma in (0..b_cat.n_mor()).filter(|&g| b_cat.tgt(g) == b_cat.src(beta)) {
                let bg = b_cat.compose(beta, gamma);
                for a in 0..a_cat.n_obj() {
                    for x in 0..self.size(b_cat.tgt(beta), a) {
                        if self.left(bg, a, x) != self.left(gamma, a, self.left(beta, a, x)) {
                            return bad(format!("left action not functorial at ({beta}, {gamma})"));
                        }
                    }
                }
            }
        }
        for alpha in 0..a_cat.n_mor() {
            for delta in a_cat.out_of(a_cat.tgt(alpha)) {
                let da = a_cat.compose(delta, alpha);
                for b in 0..b_cat.n_obj() {
                    for x in 0..self.size(b, a_cat.src(alpha)) {
                        if self.right(da, b, x) != self.right(delta, b, self.right(alpha, b, x)) {
                            return bad(format!("right action not functorial at ({delta}, {alpha})"));
                        }
                    }
                }
            }
        }
        for beta in 0..b_cat.n_mor() {
            for alpha in 0..a_cat.n_mor() {
                let (b0, b1, a0) = (b_cat.src(beta), b_cat.tgt(beta), a_cat.src(alpha));
                for x in 0..self.size(b1, a0) {
                    let lr = self.left(beta, a_cat.tgt(alpha), self.right(alpha, b1, x));
                    let rl = self.right(alpha, b0, self.left(beta, a0, x));
                    if lr != rl {
                        return bad(format!("actions of {beta} and {alpha} do not commute"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn size(&self, b: usize, a: usize) -> usize {
        self.sizes[b * self.dom.n_obj() + a]
    }

    pub fn left(&self, beta: usize, a: usize, x: usize) -> usize {
        self.left[beta][a][x]
    }

    pub fn right(&self, alpha: usize, b: usize, x: usize) -> usize {
        self.right[alpha][b][x]
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total_size() == 0
    }

    pub(crate) fn pair_index(&self, b: usize, a: usize) -> usize {
        b * self.dom.n_obj() + a
    }

    /// The module with every set empty.
    pub fn empty(dom: Arc<FinCat>, cod: Arc<FinCat>) -> Self {
        Self::new_unchecked(dom, cod, |_, _| 0, |_, _, x| x, |_, _, x| x)
    }

    /// Relabels elements by `perm[b * n_a + a][old] = new`.
    pub fn relabel(&self, perm: &[Vec<usize>]) -> Module {
        let na = self.dom.n_obj();
        let inv: Vec<Vec<usize>> = perm.iter().map(|p| crate::fincat::functor_invert(p)).collect();
        Module::new_unchecked(
            self.dom.clone(),
            self.cod.clone(),
            |b, a| self.size(b, a),
            |beta, a, x| {
                let (b0, b1) = (self.cod.src(beta), self.cod.tgt(beta));
                perm[b0 * na + a][self.left(beta, a, inv[b1 * na + a][x])]
            },
            |alpha, b, x| {
                let (a0, a1) = (self.dom.src(alpha), self.dom.tgt(alpha));
                perm[b * na + a1][self.right(alpha, b, inv[b * na + a0][x])]
            },
        )
    }

    /// Reads a module into the terminal category as a set-valued functor.
    pub fn to_set_functor(&self) -> Result<SetFunctor> {
        if self.cod.n_obj() != 1 || self.cod.n_mor() != 1 {
            return Err(Error::Mismatch("module codomain is not the terminal category".into()));
        }
        SetFunctor::new(
            self.dom.clone(),
            (0..self.dom.n_obj()).map(|a| self.size(0, a)).collect(),
            (0..self.dom.n_mor()).map(|f| self.right[f][0].clone()).collect(),
        )
    }

    pub fn from_set_functor(f: &SetFunctor) -> Module {
        Module::new_unchecked(
            f.dom.clone(),
            Arc::new(FinCat::terminal()),
            |_, a| f.sizes[a],
            |_, _, x| x,
            |alpha, _, x| f.act(alpha, x),
        )
    }

    /// Module `A → A` given by the hom functor.
    pub fn identity(a: Arc<FinCat>) -> Module {
        identity_module(a)
    }
}

/// The hom functor `hom(b, a)`, elements indexed by hom-set position.
pub fn identity_module(c: Arc<FinCat>) -> Module {
    let cc = c.clone();
    Module::new_unchecked(
        c.clone(),
        c,
        |b, a| cc.hom(b, a).len(),
        |beta, a, x| {
            let f = cc.hom(cc.tgt(beta), a)[x];
            cc.hom_index(cc.compose(f, beta))
        },
        |alpha, b, x| {
            let f = cc.hom(b, cc.src(alpha))[x];
            cc.hom_index(cc.compose(alpha, f))
        },
    )
}

/// A family of functions `M(b, a) → N(b, a)` indexed like module sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMorphism {
    pub components: Vec<Vec<usize>>,
}

impl ModuleMorphism {
    pub fn identity(m: &Module) -> Self {
        ModuleMorphism { components: m.sizes.iter().map(|&n| (0..n).collect()).collect() }
    }

    pub fn apply(&self, m: &Module, b: usize, a: usize, x: usize) -> usize {
        self.components[m.pair_index(b, a)][x]
    }

    /// Checks shape and compatibility with both actions.
    pub fn verify(&self, src: &Module, tgt: &Module) -> Result<()> {
        if src.dom != tgt.dom || src.cod != tgt.cod {
            return Err(Error::Mismatch("module morphism between non-parallel modules".into()));
        }
        let (na, nb) = (src.dom.n_obj(), src.cod.n_obj());
        if self.components.len() != na * nb {
            return Err(Error::InvalidMorphism("component count".into()));
        }
        for b in 0..nb {
            for a in 0..na {
                let c = &self.components[b * na + a];
                if c.len() != src.size(b, a) || c.iter().any(|&y| y >= tgt.size(b, a)) {
                    return Err(Error::InvalidMorphism(format!("component ({b}, {a}) has wrong shape")));
                }
            }
        }
        for beta in 0..src.cod.n_mor() {
            let (b0, b1) = (src.cod.src(beta), src.cod.tgt(beta));
            for a in 0..na {
                for x in 0..src.size(b1, a) {
                    if self.apply(src, b0, a, src.left(beta, a, x)) != tgt.left(beta, a, self.apply(src, b1, a, x)) {
                        return Err(Error::InvalidMorphism(format!(
                            "not natural for left action of {beta} at element {x} of ({b1}, {a})"
                        )));
                    }
                }
            }
        }
        for alpha in 0..src.dom.n_mor() {
            let (a0, a1) = (src.dom.src(alpha), src.dom.tgt(alpha));
            for b in 0..nb {
                for x in 0..src.size(b, a0) {
                    if self.apply(src, b, a1, src.right(alpha, b, x)) != tgt.right(alpha, b, self.apply(src, b, a0, x)) {
                        return Err(Error::InvalidMorphism(format!(
                            "not natural for right action of {alpha} at element {x} of ({b}, {a0})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_iso(&self) -> bool {
        self.components.iter().all(|c| crate::fincat::functor_is_bijection(c, c.len()))
    }

    /// Verifies naturality and bijectivity.
    pub fn verify_iso(&self, src: &Module, tgt: &Module) -> Result<()> {
        self.verify(src, tgt)?;
        for (i, c) in self.components.iter().enumerate() {
            if !crate::fincat::functor_is_bijection(c, tgt.sizes[i]) {
                return Err(Error::InvalidMorphism(format!("component {i} is not a bijection")));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Option<ModuleMorphism> {
        self.is_iso().then(|| ModuleMorphism {
            components: self.components.iter().map(|c| crate::fincat::functor_invert(c)).collect(),
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ModuleMorphism) -> ModuleMorphism {
        ModuleMorphism {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(c, d)| c.iter().map(|&x| d[x]).collect())
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(|c| c.iter().enumerate().all(|(i, &y)| i == y))
    }
}

#[cfg(test)]
mod tests;
