//! Composition of modules by coends, with associator and unitors.

use std::sync::Arc;

use super::{Module, ModuleMorphism};
use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::unionfind::UnionFind;

/// Quotient of the raw triples `(b, m, n)` over one pair `(c, a)`.
#[derive(Clone, Debug)]
struct CoendTable {
    /// Start of the block for each middle object `b`.
    offsets: Vec<usize>,
    label: Vec<usize>,
    reps: Vec<usize>,
}

/// `N ∘ M` for `M: A → B`, `N: B → C`, together with its presentation.
///
/// Each element is a class `[b, m, n]` with `m ∈ M(b, a)`, `n ∈ N(c, b)`;
/// the representative is the class member with the least raw index.
#[derive(Clone, Debug)]
pub struct Composite {
    pub module: Module,
    pub first: Module,
    pub second: Module,
    tables: Vec<CoendTable>,
}

impl Composite {
    fn table(&self, c: usize, a: usize) -> &CoendTable {
        &self.tables[c * self.first.dom.n_obj() + a]
    }

    fn raw_index(&self, c: usize, a: usize, b: usize, m: usize, n: usize) -> usize {
        self.table(c, a).offsets[b] + m * self.second.size(c, b) + n
    }

    /// The class of `[b, m, n]` in `(N ∘ M)(c, a)`.
    pub fn class(&self, c: usize, a: usize, b: usize, m: usize, n: usize) -> usize {
        let t = self.table(c, a);
        t.label[self.raw_index(c, a, b, m, n)]
    }

    fn decode(&self, c: usize, a: usize, raw: usize) -> (usize, usize, usize) {
        let t = self.table(c, a);
        let b = t.offsets.partition_point(|&o| o <= raw) - 1;
        let r = raw - t.offsets[b];
        let w = self.second.size(c, b);
        (b, r / w, r % w)
    }

    /// The canonical representative `(b, m, n)` of a class.
    pub fn rep(&self, c: usize, a: usize, class: usize) -> (usize, usize, usize) {
        self.decode(c, a, self.table(c, a).reps[class])
    }

    /// All raw triples `(b, m, n)` over `(c, a)` with their classes.
    pub fn raw(&self, c: usize, a: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        let t = self.table(c, a);
        (0..t.label.len()).map(move |r| {
            let (b, m, n) = self.decode(c, a, r);
            (b, m, n, t.label[r])
        })
    }

    /// Builds the morphism out of the composite induced by a function on
    /// raw triples, checking that it is constant on classes.
    pub fn induced(
        &self,
        target: &Module,
        f: impl Fn(usize, usize, usize, usize, usize) -> usize,
    ) -> Result<ModuleMorphism> {
        let (na, nc) = (self.first.dom.n_obj(), self.second.cod.n_obj());
        let mut components = Vec::with_capacity(na * nc);
        for c in 0..nc {
            for a in 0..na {
                let mut comp = vec![usize::MAX; self.module.size(c, a)];
                for (b, m, n, k) in self.raw(c, a) {
                    let y = f(c, a, b, m, n);
                    if comp[k] == usize::MAX {
                        comp[k] = y;
                    } else if comp[k] != y {
                        return Err(Error::InvalidMorphism(format!(
                            "map out of composite is not constant on class {k} over ({c}, {a})"
                        )));
                    }
                }
                components.push(comp);
            }
        }
        let mm = ModuleMorphism { components };
        mm.verify(&self.module, target)?;
        Ok(mm)
    }
}

/// The composite `N ∘ M` of `M: A → B` and `N: B → C`.
pub fn compose_modules(m: &Module, n: &Module) -> Result<Composite> {
    if m.cod != n.dom {
        return Err(Error::Mismatch("modules are not composable".into()));
    }
    let b_cat: &Arc<FinCat> = &m.cod;
    let (na, nb, nc) = (m.dom.n_obj(), b_cat.n_obj(), n.cod.n_obj());
    let mut tables = Vec::with_capacity(na * nc);
    for c in 0..nc {
        for a in 0..na {
            let mut offsets = Vec::with_capacity(nb + 1);
            let mut total = 0;
            for b in 0..nb {
                offsets.push(total);
                total += m.size(b, a) * n.size(c, b);
            }
            offsets.push(total);
            let idx = |b: usize, x: usize, y: usize| offsets[b] + x * n.size(c, b) + y;
            let mut uf = UnionFind::new(total);
            for beta in 0..b_cat.n_mor() {
                let (b0, b1) = (b_cat.src(beta), b_cat.tgt(beta));
                for x1 in 0..m.size(b1, a) {
                    let x0 = m.left(beta, a, x1);
                    for y0 in 0..n.size(c, b0) {
                        let y1 = n.right(beta, c, y0);
                        uf.union(idx(b0, x0, y0), idx(b1, x1, y1));
                    }
                }
            }
            let (label, reps) = uf.classes();
            tables.push(CoendTable { offsets, label, reps });
        }
    }
    let mut comp = Composite {
        module: Module::empty(m.dom.clone(), n.cod.clone()),
        first: m.clone(),
        second: n.clone(),
        tables,
    };
    let c_cat = n.cod.clone();
    let a_cat = m.dom.clone();
    let module = {
        let cr = &comp;
        Module::new_unchecked(
            a_cat.clone(),
            c_cat.clone(),
            |c, a| cr.table(c, a).reps.len(),
            |gamma, a, k| {
                let (c0, c1) = (c_cat.src(gamma), c_cat.tgt(gamma));
                let (b, x, y) = cr.rep(c1, a, k);
                cr.class(c0, a, b, x, n.left(gamma, b, y))
            },
            |alpha, c, k| {
                let (a0, a1) = (a_cat.src(alpha), a_cat.tgt(alpha));
                let (b, x, y) = cr.rep(c, a0, k);
                cr.class(c, a1, b, m.right(alpha, b, x), y)
            },
        )
    };
    comp.module = module;
    Ok(comp)
}

/// Horizontal composite `τ ∘ σ : N ∘ M → N' ∘ M'`.
pub fn hcomp(
    sigma: &ModuleMorphism,
    tau: &ModuleMorphism,
    src: &Composite,
    tgt: &Composite,
) -> Result<ModuleMorphism> {
    src.induced(&tgt.module, |c, a, b, x, y| {
        tgt.class(c, a, b, sigma.apply(&src.first, b, a, x), tau.apply(&src.second, c, b, y))
    })
}

/// The associator `(P ∘ N) ∘ M → P ∘ (N ∘ M)`.
///
/// Returns `(left, right, iso)` where `left = compose(M, P∘N)` and
/// `right = compose(N∘M, P)`.
pub fn associator(m: &Module, n: &Module, p: &Module) -> Result<(Composite, Composite, ModuleMorphism)> {
    let nm = compose_modules(m, n)?;
    let pn = compose_modules(n, p)?;
    let left = compose_modules(m, &pn.module)?;
    let right = compose_modules(&nm.module, p)?;
    let (na, nd) = (m.dom.n_obj(), p.cod.n_obj());
    let (nb, nc) = (m.cod.n_obj(), n.cod.n_obj());
    let mut components = Vec::with_capacity(na * nd);
    for d in 0..nd {
        for a in 0..na {
            let mut fwd = vec![usize::MAX; left.module.size(d, a)];
            let mut bwd = vec![usize::MAX; right.module.size(d, a)];
            for b in 0..nb {
                for c in 0..nc {
                    for x in 0..m.size(b, a) {
                        for y in 0..n.size(c, b) {
                            for z in 0..p.size(d, c) {
                                let l = left.class(d, a, b, x, pn.class(d, b, c, y, z));
                                let r = right.class(d, a, c, nm.class(c, a, b, x, y), z);
                                if (fwd[l] != usize::MAX && fwd[l] != r) || (bwd[r] != usize::MAX && bwd[r] != l) {
                                    return Err(Error::Internal("associator is not well defined".into()));
                                }
                                fwd[l] = r;
                                bwd[r] = l;
                            }
                        }
                    }
                }
            }
            components.push(fwd);
        }
    }
    let iso = ModuleMorphism { components };
    iso.verify_iso(&left.module, &right.module)?;
    Ok((left, right, iso))
}

/// `M ∘ hom_A → M`, `[a', i, x] ↦ x · i`. Returns the composite and the iso.
pub fn right_unitor(m: &Module) -> Result<(Composite, ModuleMorphism)> {
    let comp = compose_modules(&Module::identity(m.dom.clone()), m)?;
    let a_cat = m.dom.clone();
    let iso = comp.induced(m, |b, a, a1, i, x| m.right(a_cat.hom(a1, a)[i], b, x))?;
    iso.verify_iso(&comp.module, m)?;
    Ok((comp, iso))
}

/// `hom_B ∘ M → M`, `[b', x, j] ↦ j · x`. Returns the composite and the iso.
pub fn left_unitor(m: &Module) -> Result<(Composite, ModuleMorphism)> {
    let comp = compose_modules(m, &Module::identity(m.cod.clone()))?;
    let b_cat = m.cod.clone();
    let iso = comp.induced(m, |c, a, b, x, j| m.left(b_cat.hom(c, b)[j], a, x))?;
    iso.verify_iso(&comp.module, m)?;
    Ok((comp, iso))
}
