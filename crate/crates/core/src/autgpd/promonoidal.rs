//! `P((s,x),(t,y);(u,z)) = {(m, n) : ᵐx ∘ ⁿy = z}` on conjugation categories.

use std::sync::Arc;

use super::{AutGroupoid, ConjCategory};
use crate::dayconv::{Keys, Promonoidal};
use crate::error::{Error, Result};
use crate::fincat::{FinGroupoid, SetFunctor};
use crate::profunctor::Module;
use crate::report::Report;

/// The sets `P(i, j; k)` as sorted lists of pairs of ambient morphisms.
#[derive(Clone, Debug)]
pub struct PairTable {
    n: usize,
    pairs: Vec<Vec<(usize, usize)>>,
}

impl PairTable {
    fn build(c: &ConjCategory) -> Self {
        let h = &c.ambient;
        let n = c.objects.len();
        let mut pairs = Vec::with_capacity(n * n * n);
        for &(s, x) in &c.objects {
            for &(t, y) in &c.objects {
                for &(u, z) in &c.objects {
                    let mut v = Vec::new();
                    for &m in h.hom(s, u).iter().filter(|&&m| c.in_sub[m]) {
                        let mx = h.conj(m, x);
                        for &k in h.hom(t, u).iter().filter(|&&k| c.in_sub[k]) {
                            if h.compose(mx, h.conj(k, y)) == z {
                                v.push((m, k));
                            }
                        }
                    }
                    pairs.push(v);
                }
            }
        }
        PairTable { n, pairs }
    }

    pub fn pairs(&self, i: usize, j: usize, k: usize) -> &[(usize, usize)] {
        &self.pairs[(i * self.n + j) * self.n + k]
    }

    pub fn index(&self, i: usize, j: usize, k: usize, pair: (usize, usize)) -> Option<usize> {
        self.pairs(i, j, k).binary_search(&pair).ok()
    }

    fn at(&self, i: usize, j: usize, k: usize, pair: (usize, usize)) -> usize {
        self.index(i, j, k, pair).expect("pair lies in the table")
    }
}

/// The promonoidal structure on a conjugation category. With `braided`,
/// also installs `γ(m, n) = (ᵐx ∘ n, m)` and the twist `τ_(s,x) = x`, which
/// requires every `x` to lie in the subgroupoid.
pub fn conjugation_promonoidal(c: &ConjCategory, braided: bool) -> Result<(Promonoidal, PairTable)> {
    let h = &c.ambient;
    let cat = c.cat().clone();
    let n = cat.n_obj();
    let nm = cat.n_mor();
    let table = PairTable::build(c);
    let und = &c.underlying;
    let p = Module::new_unchecked(
        cat.clone(),
        Arc::new(cat.product(&cat)),
        |ab, k| table.pairs(ab / n, ab % n, k).len(),
        |fg, k, e| {
            let (f, g) = (fg / nm, fg % nm);
            let (m, l) = table.pairs(cat.tgt(f), cat.tgt(g), k)[e];
            table.at(cat.src(f), cat.src(g), k, (h.compose(m, und[f]), h.compose(l, und[g])))
        },
        |r, ab, e| {
            let (m, l) = table.pairs(ab / n, ab % n, cat.src(r))[e];
            table.at(ab / n, ab % n, cat.tgt(r), (h.compose(und[r], m), h.compose(und[r], l)))
        },
    );
    p.validate()?;
    let j = SetFunctor::new(
        cat.clone(),
        c.objects.iter().map(|&(s, x)| usize::from(x == h.idn(s))).collect(),
        (0..nm)
            .map(|f| {
                let (s, x) = c.objects[cat.src(f)];
                if x == h.idn(s) {
                    vec![0]
                } else {
                    vec![]
                }
            })
            .collect(),
    )?;
    let l3_key = |f: &[usize], x: usize, p1: usize, p2: usize| {
        let (m1, m2) = table.pairs(f[0], f[1], x)[p1];
        let (k, n3) = table.pairs(x, f[2], f[3])[p2];
        vec![h.compose(k, m1), h.compose(k, m2), n3]
    };
    let r3_key = |f: &[usize], x: usize, q1: usize, q2: usize| {
        let (m2, m3) = table.pairs(f[1], f[2], x)[q1];
        let (n1, k) = table.pairs(f[0], x, f[3])[q2];
        vec![n1, h.compose(k, m2), h.compose(k, m3)]
    };
    let lu = |a: usize, b: usize, x: usize, _j: usize, pe: usize| {
        let (_, l) = table.pairs(x, a, b)[pe];
        c.mor(a, b, l).expect("unit element is a morphism")
    };
    let ru = |a: usize, b: usize, x: usize, _j: usize, pe: usize| {
        let (l, _) = table.pairs(a, x, b)[pe];
        c.mor(a, b, l).expect("unit element is a morphism")
    };
    let keys = Keys { l3_key: &l3_key, r3_key: &r3_key, left_unit: &lu, right_unit: &ru };
    let mut pr = Promonoidal::from_keys(cat.clone(), p, j, &keys)?;
    if braided {
        let mut braid = Vec::with_capacity(n * n * n);
        for a in 0..n {
            let x = c.objects[a].1;
            for b in 0..n {
                for k in 0..n {
                    let mut row = Vec::new();
                    for &(m, l) in table.pairs(a, b, k) {
                        let first = h.compose(h.conj(m, x), l);
                        if !c.in_sub[first] {
                            return Err(Error::InvalidMorphism(format!(
                                "braiding leaves the subgroupoid at ({a}, {b}; {k})"
                            )));
                        }
                        row.push(table.at(b, a, k, (first, m)));
                    }
                    braid.push(row);
                }
            }
        }
        let twist = c
            .objects
            .iter()
            .enumerate()
            .map(|(i, &(_, x))| {
                c.mor(i, i, x).ok_or_else(|| Error::InvalidMorphism(format!("twist at {i} leaves the subgroupoid")))
            })
            .collect::<Result<Vec<_>>>()?;
        pr.braiding = Some(braid);
        pr.twist = Some(twist);
    }
    Ok((pr, table))
}

/// The braided promonoidal structure on `𝒢^aut`.
pub fn promonoidal_aut(ag: &AutGroupoid) -> Result<(Promonoidal, PairTable)> {
    conjugation_promonoidal(&ag.conj, true)
}

/// Twist square and the two `*`-autonomy bijections
/// `(u, v) ↦ (u⁻¹v, u⁻¹)` and `(u, v) ↦ (v, u)`, with naturality.
pub fn check_balanced_star_autonomy(g: &FinGroupoid) -> Result<Report> {
    let ag = super::aut_groupoid(g)?;
    let (pr, table) = promonoidal_aut(&ag)?;
    let mut r = Report::new("balanced-star-autonomy");
    let (braid, twist) = (pr.braiding.as_ref().expect("braided"), pr.twist.as_ref().expect("twisted"));
    r.check("twist.natural", crate::dayconv::checks::twist_natural(&pr, twist));
    r.check("twist.square", crate::dayconv::checks::twist_square(&pr, braid, twist));
    let star = StarData::new(&ag, &pr, &table);
    r.check("star.first.bijective", star.bijective(Star::First));
    r.check("star.first.natural", star.natural(Star::First));
    r.check("star.second.bijective", star.bijective(Star::Second));
    r.check("star.second.natural", star.natural(Star::Second));
    Ok(r)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Star {
    First,
    Second,
}

struct StarData<'a> {
    c: &'a ConjCategory,
    pr: &'a Promonoidal,
    table: &'a PairTable,
    neg: Vec<usize>,
}

impl<'a> StarData<'a> {
    fn new(ag: &'a AutGroupoid, pr: &'a Promonoidal, table: &'a PairTable) -> Self {
        let c = &ag.conj;
        let h = &c.ambient;
        let neg = c.objects.iter().map(|&(s, x)| c.obj(s, h.inv(x)).expect("inverse grade")).collect();
        StarData { c, pr, table, neg }
    }

    fn neg_mor(&self, f: usize) -> usize {
        let g = &self.c.gpd;
        self.c.mor(self.neg[g.src(f)], self.neg[g.tgt(f)], self.c.underlying[f]).expect("same conjugation")
    }

    /// Source triple `(A, B, C⁻)` and target triple for `(A, B, C)`.
    fn triples(&self, which: Star, a: usize, b: usize, c: usize) -> ([usize; 3], [usize; 3]) {
        let src = [a, b, self.neg[c]];
        let tgt = match which {
            Star::First => [b, c, self.neg[a]],
            Star::Second => [self.neg[b], self.neg[a], c],
        };
        (src, tgt)
    }

    fn apply(&self, which: Star, a: usize, b: usize, c: usize, e: usize) -> Option<usize> {
        let h = &self.c.ambient;
        let (s, t) = self.triples(which, a, b, c);
        let (u, v) = self.table.pairs(s[0], s[1], s[2])[e];
        let out = match which {
            Star::First => (h.compose(h.inv(u), v), h.inv(u)),
            Star::Second => (v, u),
        };
        self.table.index(t[0], t[1], t[2], out)
    }

    fn bijective(&self, which: Star) -> std::result::Result<(), String> {
        let n = self.c.objects.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (s, t) = self.triples(which, a, b, c);
                    let (ns, nt) = (self.pr.p_size(s[0], s[1], s[2]), self.pr.p_size(t[0], t[1], t[2]));
                    let mut img = Vec::with_capacity(ns);
                    for e in 0..ns {
                        match self.apply(which, a, b, c, e) {
                            Some(y) => img.push(y),
                            None => return Err(format!("image of element {e} over ({a}, {b}, {c}) is not in the target")),
                        }
                    }
                    if !crate::fincat::functor_is_bijection(&img, nt) {
                        return Err(format!("not a bijection over ({a}, {b}, {c})"));
                    }
                }
            }
        }
        Ok(())
    }

    fn natural(&self, which: Star) -> std::result::Result<(), String> {
        let g = &self.c.gpd;
        let pr = self.pr;
        let n = self.c.objects.len();
        let id = |o: usize| g.idn(o);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (s, t) = self.triples(which, a, b, c);
                    for e in 0..pr.p_size(s[0], s[1], s[2]) {
                        let y = self.apply(which, a, b, c, e).ok_or("not well defined")?;
                        for f in (0..g.n_mor()).filter(|&f| g.tgt(f) == a) {
                            let a1 = g.src(f);
                            let lhs = self.apply(which, a1, b, c, pr.p_left(f, id(b), s[2], e));
                            let rhs = match which {
                                Star::First => pr.p_right(g.inv(self.neg_mor(f)), t[0], t[1], y),
                                Star::Second => pr.p_left(id(t[0]), self.neg_mor(f), c, y),
                            };
                            if lhs != Some(rhs) {
                                return Err(format!("not natural in the first variable at {f} over ({a}, {b}, {c})"));
                            }
                        }
                        for f in (0..g.n_mor()).filter(|&f| g.tgt(f) == b) {
                            let b1 = g.src(f);
                            let lhs = self.apply(which, a, b1, c, pr.p_left(id(a), f, s[2], e));
                            let rhs = match which {
                                Star::First => pr.p_left(f, id(c), t[2], y),
                                Star::Second => pr.p_left(self.neg_mor(f), id(t[1]), c, y),
                            };
                            if lhs != Some(rhs) {
                                return Err(format!("not natural in the second variable at {f} over ({a}, {b}, {c})"));
                            }
                        }
                        for f in g.out_of(c) {
                            let c1 = g.tgt(f);
                            let lhs = self.apply(which, a, b, c1, pr.p_right(self.neg_mor(f), a, b, e));
                            let rhs = match which {
                                Star::First => pr.p_left(id(b), g.inv(f), t[2], y),
                                Star::Second => pr.p_right(f, t[0], t[1], y),
                            };
                            if lhs != Some(rhs) {
                                return Err(format!("not natural in the third variable at {f} over ({a}, {b}, {c})"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
