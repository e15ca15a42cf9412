//! Finite categories and groupoids as validated integer tables.

mod builders;
mod equivalence;
mod functor;

pub use builders::{GroupoidSpec, GroupTable};
pub use equivalence::{check_equivalence, iso_classes, Equivalence, EquivalenceWitness};
pub use functor::{FinFunctor, FunctorIso, NatTrans, SetFunctor};
pub(crate) use functor::{invert as functor_invert, is_bijection as functor_is_bijection};

use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite category. Objects and morphisms are dense indices.
///
/// `comp[g * n_mor + f]` holds `g ∘ f` whenever `tgt(f) == src(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCat {
    n_obj: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    idn: Vec<usize>,
    comp: Vec<Option<usize>>,
    homs: Vec<Vec<usize>>,
}

impl FinCat {
    /// Builds and validates a category from a composition function, which is
    /// only consulted on composable pairs.
    pub fn new(
        n_obj: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        idn: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        let n_mor = src.len();
        if tgt.len() != n_mor || idn.len() != n_obj {
            return Err(Error::InvalidCategory("table lengths disagree".into()));
        }
        let mut comp = vec![None; n_mor * n_mor];
        for g in 0..n_mor {
            for f in 0..n_mor {
                if tgt[f] == src[g] {
                    comp[g * n_mor + f] = Some(compose(g, f));
                }
            }
        }
        Self::from_parts(n_obj, src, tgt, idn, comp)
    }

    /// Builds a category from explicit `(g, f, g∘f)` entries; identities are
    /// inferred.
    pub fn from_table(
        n_obj: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        entries: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n_mor = src.len();
        if tgt.len() != n_mor {
            return Err(Error::InvalidCategory("src/tgt lengths disagree".into()));
        }
        if let Some(&m) = src.iter().chain(tgt.iter()).find(|&&o| o >= n_obj) {
            return Err(Error::InvalidCategory(format!("object index {m} out of range")));
        }
        let mut comp = vec![None; n_mor * n_mor];
        for &(g, f, gf) in entries {
            if g >= n_mor || f >= n_mor || gf >= n_mor {
                return Err(Error::InvalidCategory(format!(
                    "composition entry ({g}, {f}, {gf}) out of range"
                )));
            }
            if tgt[f] != src[g] {
                return Err(Error::InvalidCategory(format!(
                    "composition entry ({g}, {f}) is not a composable pair"
                )));
            }
            if let Some(prev) = comp[g * n_mor + f] {
                if prev != gf {
                    return Err(Error::InvalidCategory(format!(
                        "composite of ({g}, {f}) given twice"
                    )));
                }
            }
            comp[g * n_mor + f] = Some(gf);
        }
        for g in 0..n_mor {
            for f in 0..n_mor {
                if tgt[f] == src[g] && comp[g * n_mor + f].is_none() {
                    return Err(Error::InvalidCategory(format!(
                        "composite of composable pair ({g}, {f}) missing"
                    )));
                }
            }
        }
        let mut idn = Vec::with_capacity(n_obj);
        for a in 0..n_obj {
            let found = (0..n_mor).find(|&e| {
                src[e] == a
                    && tgt[e] == a
                    && (0..n_mor).all(|f| {
                        (tgt[f] != a || comp[e * n_mor + f] == Some(f))
                            && (src[f] != a || comp[f * n_mor + e] == Some(f))
                    })
            });
            match found {
                Some(e) => idn.push(e),
                None => {
                    return Err(Error::InvalidCategory(format!("object {a} has no identity")))
                }
            }
        }
        Self::from_parts(n_obj, src, tgt, idn, comp)
    }

    fn from_parts(
        n_obj: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        idn: Vec<usize>,
        comp: Vec<Option<usize>>,
    ) -> Result<Self> {
        let n_mor = src.len();
        let mut homs = vec![Vec::new(); n_obj * n_obj];
        for f in 0..n_mor {
            if src[f] >= n_obj || tgt[f] >= n_obj {
                return Err(Error::InvalidCategory(format!("morphism {f} has bad endpoints")));
            }
            homs[src[f] * n_obj + tgt[f]].push(f);
        }
        let cat = FinCat { n_obj, src, tgt, idn, comp, homs };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        let n = self.n_mor();
        for (a, &e) in self.idn.iter().enumerate() {
            if e >= n || self.src[e] != a || self.tgt[e] != a {
                return Err(Error::InvalidCategory(format!("identity of {a} is not an endomorphism of {a}")));
            }
        }
        for g in 0..n {
            for f in 0..n {
                if let Some(gf) = self.comp[g * n + f] {
                    if gf >= n || self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] {
                        return Err(Error::InvalidCategory(format!(
                            "composite of ({g}, {f}) has wrong endpoints"
                        )));
                    }
                }
            }
        }
        for f in 0..n {
            if self.compose(self.idn[self.tgt[f]], f) != f || self.compose(f, self.idn[self.src[f]]) != f {
                return Err(Error::InvalidCategory(format!("identity law fails at morphism {f}")));
            }
        }
        for f in 0..n {
            for g in self.out_of(self.tgt[f]) {
                let gf = self.compose(g, f);
                for h in self.out_of(self.tgt[g]) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        return Err(Error::NotAssociative { h, g, f });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty() -> Self {
        FinCat { n_obj: 0, src: vec![], tgt: vec![], idn: vec![], comp: vec![], homs: vec![] }
    }

    /// The terminal category: one object, one morphism.
    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn discrete(n: usize) -> Self {
        let ids: Vec<usize> = (0..n).collect();
        Self::new(n, ids.clone(), ids.clone(), ids, |g, _| g).expect("discrete category")
    }

    pub fn n_obj(&self) -> usize {
        self.n_obj
    }

    pub fn n_mor(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn idn(&self, a: usize) -> usize {
        self.idn[a]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.idn[self.src[f]] == f
    }

    /// `g ∘ f`; panics on a non-composable pair.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.n_mor() + f]
    }

    /// Composes a path given in diagrammatic-reverse order: `compose_all(&[h, g, f]) = h∘g∘f`.
    pub fn compose_all(&self, path: &[usize]) -> usize {
        let mut it = path.iter().rev();
        let first = *it.next().expect("non-empty path");
        it.fold(first, |acc, &g| self.compose(g, acc))
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.n_obj + b]
    }

    /// Morphisms with source `a`.
    pub fn out_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_obj).flat_map(move |b| self.hom(a, b).iter().copied())
    }

    /// Position of `f` inside its hom-set.
    pub fn hom_index(&self, f: usize) -> usize {
        self.hom(self.src[f], self.tgt[f])
            .iter()
            .position(|&x| x == f)
            .expect("morphism lies in its hom-set")
    }

    /// A two-sided inverse of `f`, if any.
    pub fn inverse_of(&self, f: usize) -> Option<usize> {
        let (a, b) = (self.src[f], self.tgt[f]);
        self.hom(b, a)
            .iter()
            .copied()
            .find(|&g| self.compose(g, f) == self.idn[a] && self.compose(f, g) == self.idn[b])
    }

    pub fn opposite(&self) -> FinCat {
        let n = self.n_mor();
        FinCat::new(self.n_obj, self.tgt.clone(), self.src.clone(), self.idn.clone(), |g, f| {
            self.comp[f * n + g].expect("opposite composable")
        })
        .expect("opposite of a valid category")
    }

    /// Row-major product: object `(a, b)` has index `a * other.n_obj + b`.
    pub fn product(&self, other: &FinCat) -> FinCat {
        let (no, m2) = (other.n_obj, other.n_mor());
        let n_mor = self.n_mor() * m2;
        let mut src = Vec::with_capacity(n_mor);
        let mut tgt = Vec::with_capacity(n_mor);
        for f in 0..self.n_mor() {
            for g in 0..m2 {
                src.push(self.src[f] * no + other.src[g]);
                tgt.push(self.tgt[f] * no + other.tgt[g]);
            }
        }
        let idn = (0..self.n_obj * no)
            .map(|o| self.idn[o / no] * m2 + other.idn[o % no])
            .collect();
        FinCat::new(self.n_obj * no, src, tgt, idn, |x, y| {
            self.compose(x / m2, y / m2) * m2 + other.compose(x % m2, y % m2)
        })
        .expect("product of valid categories")
    }

    /// Disjoint union; objects and morphisms of `other` are shifted.
    pub fn coproduct(&self, other: &FinCat) -> FinCat {
        let (no, nm) = (self.n_obj, self.n_mor());
        let src = self.src.iter().copied().chain(other.src.iter().map(|s| s + no)).collect();
        let tgt = self.tgt.iter().copied().chain(other.tgt.iter().map(|s| s + no)).collect();
        let idn = self.idn.iter().copied().chain(other.idn.iter().map(|e| e + nm)).collect();
        FinCat::new(no + other.n_obj, src, tgt, idn, |g, f| {
            if g < nm {
                self.compose(g, f)
            } else {
                other.compose(g - nm, f - nm) + nm
            }
        })
        .expect("coproduct of valid categories")
    }

    /// Coproduct of a list of categories together with each summand's object
    /// and morphism offsets.
    pub fn coproduct_all(parts: &[&FinCat]) -> (FinCat, Vec<usize>, Vec<usize>) {
        let mut acc = FinCat::empty();
        let mut obj_off = Vec::with_capacity(parts.len());
        let mut mor_off = Vec::with_capacity(parts.len());
        for p in parts {
            obj_off.push(acc.n_obj);
            mor_off.push(acc.n_mor());
            acc = acc.coproduct(p);
        }
        (acc, obj_off, mor_off)
    }

    /// Full subcategory on `objs` (in the given order) and the morphism
    /// embedding into `self`.
    pub fn full_subcategory(&self, objs: &[usize]) -> (FinCat, Vec<usize>) {
        let pos = |o: usize| objs.iter().position(|&x| x == o);
        let mut mors = Vec::new();
        for &a in objs {
            for &b in objs {
                mors.extend_from_slice(self.hom(a, b));
            }
        }
        mors.sort_unstable();
        let src = mors.iter().map(|&f| pos(self.src[f]).unwrap()).collect();
        let tgt = mors.iter().map(|&f| pos(self.tgt[f]).unwrap()).collect();
        let idn = objs
            .iter()
            .map(|&a| mors.binary_search(&self.idn[a]).unwrap())
            .collect();
        let sub = FinCat::new(objs.len(), src, tgt, idn, |g, f| {
            mors.binary_search(&self.compose(mors[g], mors[f])).unwrap()
        })
        .expect("full subcategory of a valid category");
        (sub, mors)
    }
}

/// A finite groupoid: a category whose every morphism has an inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinGroupoid {
    cat: Arc<FinCat>,
    inv: Vec<usize>,
}

impl Deref for FinGroupoid {
    type Target = FinCat;

    fn deref(&self) -> &FinCat {
        &self.cat
    }
}

impl FinGroupoid {
    pub fn from_cat(cat: FinCat) -> Result<Self> {
        let inv = (0..cat.n_mor())
            .map(|f| {
                cat.inverse_of(f).ok_or_else(|| {
                    Error::InvalidCategory(format!("morphism {f} is not invertible"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FinGroupoid { cat: Arc::new(cat), inv })
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn inv(&self, f: usize) -> usize {
        self.inv[f]
    }

    /// Conjugation `ᶠa = f ∘ a ∘ f⁻¹` of an endomorphism `a` of `src(f)`.
    pub fn conj(&self, f: usize, a: usize) -> usize {
        self.compose_all(&[f, a, self.inv[f]])
    }

    pub fn opposite(&self) -> FinGroupoid {
        FinGroupoid::from_cat(self.cat.opposite()).expect("opposite groupoid")
    }

    pub fn product(&self, other: &FinGroupoid) -> FinGroupoid {
        FinGroupoid::from_cat(self.cat.product(&other.cat)).expect("product groupoid")
    }

    pub fn coproduct(&self, other: &FinGroupoid) -> FinGroupoid {
        FinGroupoid::from_cat(self.cat.coproduct(&other.cat)).expect("coproduct groupoid")
    }

    pub fn empty() -> FinGroupoid {
        FinGroupoid::from_cat(FinCat::empty()).unwrap()
    }

    pub fn terminal() -> FinGroupoid {
        FinGroupoid::from_cat(FinCat::terminal()).unwrap()
    }
}

/// Exhaustive check of the category axioms on an arbitrary table; used by
/// tests that want to assert validity of derived categories independently.
pub fn axioms_hold(c: &FinCat) -> bool {
    c.validate().is_ok()
}

#[cfg(test)]
mod tests;
