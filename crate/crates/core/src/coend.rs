//! Coends of products of multi-variable functors over finite categories.
//!
//! An integrand is a list of [`Term`]s. Each term is a [`Multi`] (a functor
//! of several variables, each co- or contravariant) with its slots bound to
//! free or bound variables. For fixed values of the free variables the coend
//! is the quotient of the disjoint union over bound objects by the relation
//! generated, for each bound variable and each morphism `β: x → x'`, by
//! `(contravariant action of β) ~ (covariant action of β)`.

use std::sync::Arc;

use crate::fincat::{FinCat, SetFunctor};
use crate::profunctor::Module;
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    Co,
    Contra,
}

/// A finite-set-valued functor of several variables.
///
/// `act(slot, f, objs, x)` moves `x` along `f` in one slot: for a covariant
/// slot `objs[slot] = src f` and the result lies over `tgt f`; for a
/// contravariant slot `objs[slot] = tgt f` and the result lies over `src f`.
pub trait Multi {
    fn variances(&self) -> Vec<Variance>;
    fn size(&self, objs: &[usize]) -> usize;
    fn act(&self, slot: usize, f: usize, objs: &[usize], x: usize) -> usize;
}

impl Multi for Module {
    fn variances(&self) -> Vec<Variance> {
        vec![Variance::Contra, Variance::Co]
    }

    fn size(&self, objs: &[usize]) -> usize {
        Module::size(self, objs[0], objs[1])
    }

    fn act(&self, slot: usize, f: usize, objs: &[usize], x: usize) -> usize {
        match slot {
            0 => self.left(f, objs[1], x),
            _ => self.right(f, objs[0], x),
        }
    }
}

impl Multi for SetFunctor {
    fn variances(&self) -> Vec<Variance> {
        vec![Variance::Co]
    }

    fn size(&self, objs: &[usize]) -> usize {
        self.sizes[objs[0]]
    }

    fn act(&self, _: usize, f: usize, _: &[usize], x: usize) -> usize {
        SetFunctor::act(self, f, x)
    }
}

/// A module `A → A × A` read as `P(a, b; c)`.
pub struct Ternary<'a>(pub &'a Module);

impl Multi for Ternary<'_> {
    fn variances(&self) -> Vec<Variance> {
        vec![Variance::Contra, Variance::Contra, Variance::Co]
    }

    fn size(&self, objs: &[usize]) -> usize {
        let n = self.0.dom().n_obj();
        self.0.size(objs[0] * n + objs[1], objs[2])
    }

    fn act(&self, slot: usize, f: usize, objs: &[usize], x: usize) -> usize {
        let a = self.0.dom();
        let (n, nm) = (a.n_obj(), a.n_mor());
        match slot {
            0 => self.0.left(f * nm + a.idn(objs[1]), objs[2], x),
            1 => self.0.left(a.idn(objs[0]) * nm + f, objs[2], x),
            _ => self.0.right(f, objs[0] * n + objs[1], x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Free(usize),
    Bound(usize),
}

pub struct Term<'a> {
    pub factor: &'a dyn Multi,
    pub slots: Vec<Var>,
}

impl<'a> Term<'a> {
    pub fn new(factor: &'a dyn Multi, slots: Vec<Var>) -> Self {
        debug_assert_eq!(factor.variances().len(), slots.len());
        Term { factor, slots }
    }
}

/// A coend expression: categories of the bound variables and the integrand.
pub struct CoendSpec<'a> {
    pub bound: Vec<Arc<FinCat>>,
    pub terms: Vec<Term<'a>>,
}

/// The coend at one assignment of the free variables.
#[derive(Clone, Debug)]
pub struct CoendTable {
    free: Vec<usize>,
    radix: Vec<usize>,
    offsets: Vec<usize>,
    block_sizes: Vec<Vec<usize>>,
    label: Vec<usize>,
    reps: Vec<usize>,
}

impl CoendTable {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn raw_len(&self) -> usize {
        self.label.len()
    }

    fn block_of(&self, bound: &[usize]) -> usize {
        bound.iter().zip(&self.radix).fold(0, |acc, (&x, &r)| acc * r + x)
    }

    fn raw_index(&self, bound: &[usize], elts: &[usize]) -> usize {
        let blk = self.block_of(bound);
        let sizes = &self.block_sizes[blk];
        debug_assert!(elts.iter().zip(sizes).all(|(e, s)| e < s));
        self.offsets[blk] + elts.iter().zip(sizes).fold(0, |acc, (&e, &s)| acc * s + e)
    }

    /// Class of the raw element with bound objects `bound` and term
    /// elements `elts`.
    pub fn class(&self, bound: &[usize], elts: &[usize]) -> usize {
        self.label[self.raw_index(bound, elts)]
    }

    /// Decodes a raw index into bound objects and term elements.
    pub fn decode(&self, raw: usize) -> (Vec<usize>, Vec<usize>) {
        let blk = self.offsets.partition_point(|&o| o <= raw) - 1;
        let mut bound = vec![0; self.radix.len()];
        let mut r = blk;
        for i in (0..self.radix.len()).rev() {
            bound[i] = r % self.radix[i];
            r /= self.radix[i];
        }
        let sizes = &self.block_sizes[blk];
        let mut elts = vec![0; sizes.len()];
        let mut r = raw - self.offsets[blk];
        for i in (0..sizes.len()).rev() {
            elts[i] = r % sizes[i];
            r /= sizes[i];
        }
        (bound, elts)
    }

    /// Canonical representative: the least raw element of the class.
    pub fn rep(&self, class: usize) -> (Vec<usize>, Vec<usize>) {
        self.decode(self.reps[class])
    }

    /// Representative of a class in a table with one bound variable and two
    /// terms, as `(x, e0, e1)`.
    pub fn rep2(&self, class: usize) -> (usize, usize, usize) {
        debug_assert!(self.radix.len() == 1);
        let raw = self.reps[class];
        let blk = self.offsets.partition_point(|&o| o <= raw) - 1;
        let w = self.block_sizes[blk][1];
        let r = raw - self.offsets[blk];
        (blk, r / w, r % w)
    }

    /// Class of `(x, e0, e1)` in a table with one bound variable and two terms.
    pub fn class2(&self, x: usize, e0: usize, e1: usize) -> usize {
        let w = self.block_sizes[x][1];
        self.label[self.offsets[x] + e0 * w + e1]
    }

    /// Every raw element with its class.
    pub fn raw(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>, usize)> + '_ {
        (0..self.label.len()).map(move |r| {
            let (b, e) = self.decode(r);
            (b, e, self.label[r])
        })
    }
}

fn term_objs(term: &Term, free: &[usize], bound: &[usize]) -> Vec<usize> {
    term.slots
        .iter()
        .map(|v| match *v {
            Var::Free(i) => free[i],
            Var::Bound(i) => bound[i],
        })
        .collect()
}

fn for_each_assignment(radix: &[usize], mut f: impl FnMut(&[usize])) {
    if radix.contains(&0) {
        return;
    }
    let mut cur = vec![0; radix.len()];
    loop {
        f(&cur);
        let mut i = radix.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < radix[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn for_each_tuple(sizes: &[usize], f: impl FnMut(&[usize])) {
    for_each_assignment(sizes, f)
}

impl CoendSpec<'_> {
    /// Evaluates the coend at the given free objects.
    pub fn eval(&self, free: &[usize]) -> CoendTable {
        let radix: Vec<usize> = self.bound.iter().map(|c| c.n_obj()).collect();
        let n_blocks: usize = radix.iter().product();
        let mut offsets = Vec::with_capacity(n_blocks + 1);
        let mut block_sizes = Vec::with_capacity(n_blocks);
        let mut total = 0;
        for_each_assignment(&radix, |bound| {
            let sizes: Vec<usize> =
                self.terms.iter().map(|t| t.factor.size(&term_objs(t, free, bound))).collect();
            offsets.push(total);
            total += sizes.iter().product::<usize>();
            block_sizes.push(sizes);
        });
        offsets.push(total);
        let mut table = CoendTable {
            free: free.to_vec(),
            radix: radix.clone(),
            offsets,
            block_sizes,
            label: Vec::new(),
            reps: Vec::new(),
        };
        let mut uf = UnionFind::new(total);
        let variances: Vec<Vec<Variance>> = self.terms.iter().map(|t| t.factor.variances()).collect();
        let nt = self.terms.len();
        let (mut to0, mut to1) = (vec![0; nt], vec![0; nt]);
        let mut mixed: Vec<Vec<usize>> = self.terms.iter().map(|t| vec![0; t.slots.len()]).collect();
        let mut sizes = vec![0; nt];
        for (v, cat) in self.bound.iter().enumerate() {
            // Slots of v per term, split by variance.
            let slots_of = |which: Variance| -> Vec<Vec<usize>> {
                self.terms
                    .iter()
                    .zip(&variances)
                    .map(|(t, vars)| {
                        (0..t.slots.len()).filter(|&s| t.slots[s] == Var::Bound(v) && vars[s] == which).collect()
                    })
                    .collect()
            };
            let (contra_slots, co_slots) = (slots_of(Variance::Contra), slots_of(Variance::Co));
            let others: Vec<usize> = radix.iter().enumerate().map(|(i, &r)| if i == v { 1 } else { r }).collect();
            for beta in 0..cat.n_mor() {
                if cat.is_identity(beta) {
                    continue;
                }
                let (x, x1) = (cat.src(beta), cat.tgt(beta));
                for_each_assignment(&others, |rest| {
                    let mut diag0 = rest.to_vec();
                    diag0[v] = x;
                    let mut diag1 = rest.to_vec();
                    diag1[v] = x1;
                    // Mixed objects: contravariant slots of v at x', covariant at x.
                    for (ti, t) in self.terms.iter().enumerate() {
                        for (si, s) in t.slots.iter().enumerate() {
                            mixed[ti][si] = match (*s, variances[ti][si]) {
                                (Var::Bound(i), Variance::Contra) if i == v => x1,
                                (Var::Bound(i), Variance::Co) if i == v => x,
                                (Var::Bound(i), _) => rest[i],
                                (Var::Free(i), _) => free[i],
                            };
                        }
                        sizes[ti] = t.factor.size(&mixed[ti]);
                    }
                    for_each_tuple(&sizes, |elts| {
                        for ti in 0..nt {
                            let t = &self.terms[ti];
                            to0[ti] = move_slots(t, &mixed[ti], &contra_slots[ti], beta, x, elts[ti]);
                            to1[ti] = move_slots(t, &mixed[ti], &co_slots[ti], beta, x1, elts[ti]);
                        }
                        uf.union(table.raw_index(&diag0, &to0), table.raw_index(&diag1, &to1));
                    });
                });
            }
        }
        let (label, reps) = uf.classes();
        table.label = label;
        table.reps = reps;
        table
    }

    /// Moves a class along a morphism `f` of a free variable. The variable
    /// must occur with a single variance; covariant occurrences move from
    /// `src f` to `tgt f`, contravariant ones from `tgt f` to `src f`.
    pub fn act_free(&self, var: usize, f: usize, src: &CoendTable, tgt: &CoendTable, class: usize) -> usize {
        let (bound, elts) = src.rep(class);
        let moved: Vec<usize> = self
            .terms
            .iter()
            .zip(&elts)
            .map(|(t, &e)| {
                let mut objs = term_objs(t, &src.free, &bound);
                let mut e = e;
                for (slot, s) in t.slots.iter().enumerate() {
                    if *s == Var::Free(var) {
                        e = t.factor.act(slot, f, &objs, e);
                        objs[slot] = tgt.free[var];
                    }
                }
                e
            })
            .collect();
        tgt.class(&bound, &moved)
    }

    /// The variance with which a free variable occurs, if it occurs.
    pub fn free_variance(&self, var: usize) -> Option<Variance> {
        self.terms.iter().find_map(|t| {
            let vars = t.factor.variances();
            t.slots.iter().zip(vars).find(|(s, _)| **s == Var::Free(var)).map(|(_, v)| v)
        })
    }
}

/// Acts by `beta` on the given slots of a term, starting from the mixed
/// objects `objs`; each moved slot lands on `to`.
fn move_slots(t: &Term, objs: &[usize], slots: &[usize], beta: usize, to: usize, e: usize) -> usize {
    match slots {
        [] => e,
        [s] => t.factor.act(*s, beta, objs, e),
        _ => {
            let mut objs = objs.to_vec();
            let mut e = e;
            for &s in slots {
                e = t.factor.act(s, beta, &objs, e);
                objs[s] = to;
            }
            e
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{FinFunctor, GroupoidSpec};
    use crate::profunctor::{compose_modules, functor_to_modules, identity_module};

    fn cyc(n: usize) -> Arc<FinCat> {
        GroupoidSpec::Cyclic(n).build().unwrap().cat().clone()
    }

    #[test]
    fn agrees_with_module_composition() {
        let c6 = cyc(6);
        let c2 = cyc(2);
        let f = FinFunctor::new(c6.clone(), c2.clone(), vec![0], (0..6).map(|i| i % 2).collect()).unwrap();
        let w = functor_to_modules(&f).unwrap();
        for (m, n) in [(&w.lower, &w.upper), (&w.upper, &w.lower)] {
            let comp = compose_modules(m, n).unwrap();
            let spec = CoendSpec {
                bound: vec![m.cod().clone()],
                terms: vec![
                    Term::new(m, vec![Var::Bound(0), Var::Free(1)]),
                    Term::new(n, vec![Var::Free(0), Var::Bound(0)]),
                ],
            };
            let t = spec.eval(&[0, 0]);
            assert_eq!(t.len(), comp.module.size(0, 0));
            // Same partition of raw triples.
            let mut pairs: Vec<(usize, usize)> =
                t.raw().map(|(b, e, k)| (k, comp.class(0, 0, b[0], e[0], e[1]))).collect();
            pairs.sort();
            pairs.dedup();
            assert_eq!(pairs.len(), t.len());
        }
    }

    #[test]
    fn classes_match_composite_labels() {
        let s3 = GroupoidSpec::Symmetric(3).build().unwrap();
        let id = identity_module(s3.cat().clone());
        let comp = compose_modules(&id, &id).unwrap();
        let spec = CoendSpec {
            bound: vec![s3.cat().clone()],
            terms: vec![
                Term::new(&id, vec![Var::Bound(0), Var::Free(1)]),
                Term::new(&id, vec![Var::Free(0), Var::Bound(0)]),
            ],
        };
        let t = spec.eval(&[0, 0]);
        for (b, e, k) in t.raw() {
            assert_eq!(comp.class(0, 0, b[0], e[0], e[1]), k);
        }
        // Free action agrees with the induced module action.
        for f in 0..6 {
            for k in 0..t.len() {
                assert_eq!(spec.act_free(1, f, &t, &t, k), comp.module.right(f, 0, k));
                assert_eq!(spec.act_free(0, f, &t, &t, k), comp.module.left(f, 0, k));
            }
        }
        for k in 0..t.len() {
            let (b, e) = t.rep(k);
            assert_eq!(t.rep2(k), (b[0], e[0], e[1]));
        }
    }

    #[test]
    fn no_bound_variables_is_a_product() {
        let f = SetFunctor::constant(cyc(3), 2);
        let g = SetFunctor::constant(cyc(3), 5);
        let spec = CoendSpec {
            bound: vec![],
            terms: vec![Term::new(&f, vec![Var::Free(0)]), Term::new(&g, vec![Var::Free(0)])],
        };
        assert_eq!(spec.eval(&[0]).len(), 10);
        assert_eq!(spec.free_variance(0), Some(Variance::Co));
    }
}
