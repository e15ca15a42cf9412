//! Deterministic generators for small test instances.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::autgpd::AutGroupoid;
use crate::centre::CatPs;
use crate::error::Result;
use crate::fincat::{FinCat, FinFunctor, FinGroupoid, SetFunctor};
use crate::profunctor::Module;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One-object categories used as product factors: trivial, `C2`, `C3`
/// and the idempotent monoid `{1, e}`.
fn monoid(kind: usize) -> FinCat {
    let table: Vec<Vec<usize>> = match kind {
        1 => vec![vec![0, 1], vec![1, 0]],
        2 => vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]],
        3 => vec![vec![0, 1], vec![1, 1]],
        _ => vec![vec![0]],
    };
    let k = table.len();
    FinCat::new(1, vec![0; k], vec![0; k], vec![0], |g, f| table[g][f]).expect("monoid table")
}

/// A random poset on at most `max_obj` objects, times a small
/// monoid, with at most `max_mor` morphisms.
pub fn random_category(rng: &mut ChaCha8Rng, max_obj: usize, max_mor: usize) -> FinCat {
    let n = rng.gen_range(1..=max_obj.max(1));
    let mut le = vec![vec![false; n]; n];
    for (i, row) in le.iter_mut().enumerate() {
        row[i] = true;
        for cell in row.iter_mut().skip(i + 1) {
            *cell = rng.gen_bool(0.5);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i][k] && le[k][j] {
                    le[i][j] = true;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if le[i][j] {
                pairs.push((order[i], order[j]));
            }
        }
    }
    let index = |s: usize, t: usize| pairs.iter().position(|&p| p == (s, t)).expect("closed");
    let idn = (0..n).map(|o| index(o, o)).collect();
    let thin = FinCat::new(
        n,
        pairs.iter().map(|p| p.0).collect(),
        pairs.iter().map(|p| p.1).collect(),
        idn,
        |g, f| index(pairs[f].0, pairs[g].1),
    )
    .expect("poset");
    let kinds: Vec<usize> = (0..4).filter(|&k| thin.n_mor() * monoid(k).n_mor() <= max_mor).collect();
    thin.product(&monoid(*kinds.choose(rng).expect("trivial factor fits")))
}

/// A random cyclic subgroup of `c(x, x)`; only the identity unless every
/// endomorphism is invertible.
fn random_subgroup(rng: &mut ChaCha8Rng, c: &FinCat, x: usize) -> Vec<usize> {
    let ends = c.hom(x, x);
    if ends.iter().any(|&e| c.inverse_of(e).is_none()) {
        return vec![c.idn(x)];
    }
    let g = ends[rng.gen_range(0..ends.len())];
    let mut h = vec![c.idn(x)];
    let mut k = g;
    while k != c.idn(x) {
        h.push(k);
        k = c.compose(g, k);
    }
    h.sort_unstable();
    h
}

/// The classes `c(x, a) / H` under `k ~ k h`, each named by its least member.
fn classes(c: &FinCat, h: &[usize], x: usize, a: usize) -> Vec<usize> {
    let mut v: Vec<usize> = c.hom(x, a).iter().map(|&k| canon(c, h, k)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn canon(c: &FinCat, h: &[usize], k: usize) -> usize {
    h.iter().map(|&e| c.compose(k, e)).min().expect("non-empty subgroup")
}

/// `Σ_i B(-, y_i) × A(x_i, -)/H_i` as a module `A ⇸ B`.
#[derive(Clone, Debug)]
pub struct RankOneSum {
    pub terms: Vec<(usize, usize, Vec<usize>)>,
}

impl RankOneSum {
    pub fn random(rng: &mut ChaCha8Rng, a: &FinCat, b: &FinCat, terms: usize, quotients: bool) -> Self {
        let terms = (0..terms)
            .map(|_| {
                let (y, x) = (rng.gen_range(0..b.n_obj()), rng.gen_range(0..a.n_obj()));
                let h = if quotients { random_subgroup(rng, a, x) } else { vec![a.idn(x)] };
                (y, x, h)
            })
            .collect();
        RankOneSum { terms }
    }

    pub fn module(&self, a: &Arc<FinCat>, b: &Arc<FinCat>) -> Result<Module> {
        let cls = |i: usize, o: usize| {
            let (_, x, h) = &self.terms[i];
            classes(a, h, *x, o)
        };
        let size_of = |i: usize, bb: usize, aa: usize| b.hom(bb, self.terms[i].0).len() * cls(i, aa).len();
        let offset = |bb: usize, aa: usize, e: usize| {
            let mut e = e;
            for i in 0..self.terms.len() {
                let n = size_of(i, bb, aa);
                if e < n {
                    return (i, e);
                }
                e -= n;
            }
            unreachable!("element in range")
        };
        let start = |i: usize, bb: usize, aa: usize| (0..i).map(|j| size_of(j, bb, aa)).sum::<usize>();
        Module::new(
            a.clone(),
            b.clone(),
            |bb, aa| (0..self.terms.len()).map(|i| size_of(i, bb, aa)).sum(),
            |beta, aa, e| {
                let (b0, b1) = (b.src(beta), b.tgt(beta));
                let (i, r) = offset(b1, aa, e);
                let (y, nc) = (self.terms[i].0, cls(i, aa).len());
                let p = b.hom(b1, y)[r / nc];
                start(i, b0, aa) + b.hom_index(b.compose(p, beta)) * nc + r % nc
            },
            |alpha, bb, e| {
                let (a0, a1) = (a.src(alpha), a.tgt(alpha));
                let (i, r) = offset(bb, a0, e);
                let (c0, c1) = (cls(i, a0), cls(i, a1));
                let h = &self.terms[i].2;
                let k = canon(a, h, a.compose(alpha, c0[r % c0.len()]));
                let q = c1.binary_search(&k).expect("class");
                start(i, bb, a1) + (r / c0.len()) * c1.len() + q
            },
        )
    }
}

/// A random module `A ⇸ B` with at most `max_terms` rank-one summands.
pub fn random_module(rng: &mut ChaCha8Rng, a: &Arc<FinCat>, b: &Arc<FinCat>, max_terms: usize) -> Result<Module> {
    let n = rng.gen_range(1..=max_terms.max(1));
    RankOneSum::random(rng, a, b, n, false).module(a, b)
}

/// A random sum of orbits `𝒢(x, -)/H` with total size at most `max_size`.
pub fn random_set_functor(rng: &mut ChaCha8Rng, g: &FinGroupoid, max_size: usize) -> Result<SetFunctor> {
    let c = g.cat().clone();
    let one = FinCat::terminal();
    let mut sum = RankOneSum { terms: Vec::new() };
    for _ in 0..4 {
        let x = rng.gen_range(0..c.n_obj());
        let h = random_subgroup(rng, &c, x);
        let added: usize = (0..c.n_obj()).map(|o| classes(&c, &h, x, o).len()).sum();
        let have: usize = sum.terms.iter().map(|(_, x, h)| (0..c.n_obj()).map(|o| classes(&c, h, *x, o).len()).sum::<usize>()).sum();
        if have + added <= max_size {
            sum.terms.push((0, x, h));
        }
    }
    let m = sum.module(&c, &Arc::new(one))?;
    let sizes = (0..c.n_obj()).map(|o| m.size(0, o)).collect();
    let action = (0..c.n_mor()).map(|f| (0..m.size(0, c.src(f))).map(|e| m.right(f, 0, e)).collect()).collect();
    SetFunctor::new(c, sizes, action)
}

/// A discrete strict pseudofunctor on `𝒢^aut` from a random set functor.
pub fn random_discrete_ps(rng: &mut ChaCha8Rng, ag: &AutGroupoid, max_size: usize) -> Result<CatPs> {
    let aut = ag.aut();
    let x = random_set_functor(rng, aut, max_size)?;
    CatPs::strict(
        aut,
        |j| Arc::new(FinCat::discrete(x.sizes[j])),
        |m, q, p| {
            let obj = x.action[aut.inv(m)].clone();
            FinFunctor::new(q.clone(), p.clone(), obj.clone(), obj)
        },
    )
}

/// Multiplicities for a seeded transform: one to three copies of sizes 0 to 2.
pub fn random_copies(rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = rng.gen_range(1..=3);
    (0..n).map(|_| rng.gen_range(0..=2)).collect()
}

/// A uniformly random permutation of `0..n`.
pub fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{axioms_hold, GroupoidSpec};

    #[test]
    fn categories_respect_bounds() {
        for seed in 0..40 {
            let c = random_category(&mut rng(seed), 4, 24);
            assert!(c.n_obj() <= 4 && c.n_mor() <= 24 && axioms_hold(&c));
        }
    }

    #[test]
    fn modules_and_functors_validate() {
        let g = GroupoidSpec::Symmetric(3).build().unwrap();
        for seed in 0..20 {
            let mut r = rng(seed);
            let f = random_set_functor(&mut r, &g, 5).unwrap();
            assert!(f.sizes.iter().sum::<usize>() <= 5);
            let a = Arc::new(random_category(&mut r, 3, 24));
            random_module(&mut r, &a, g.cat(), 3).unwrap();
            let m = RankOneSum::random(&mut r, g.cat(), &a, 2, true).module(g.cat(), &a).unwrap();
            assert_eq!(m.dom().n_obj(), 1);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        let a = random_category(&mut rng(9), 4, 24);
        let b = random_category(&mut rng(9), 4, 24);
        assert_eq!(a, b);
    }
}
