//! Promonoidal categories and Day convolution of finite set-valued functors.
//!
//! For a promonoidal `(P, J)` on `A` the associativity constraint is stored
//! as a bijection of coends
//! `L3(a,b,c;d) = ∫^x P(a,b;x)×P(x,c;d) → R3(a,b,c;d) = ∫^x P(b,c;x)×P(a,x;d)`
//! and the unit constraints as bijections
//! `∫^x J(x)×P(x,a;b) → A(a,b)` and `∫^x J(x)×P(a,x;b) → A(a,b)`.

use std::sync::Arc;

use crate::coend::{CoendSpec, CoendTable, Term, Ternary, Var};
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinGroupoid, NatTrans, SetFunctor};
use crate::profunctor::Module;

use Var::{Bound as B, Free as F};

#[derive(Clone, Debug)]
pub struct Promonoidal {
    pub base: Arc<FinCat>,
    /// `P(a, b; c)` as a module `A → A × A`.
    pub p: Module,
    pub j: SetFunctor,
    /// Indexed by `idx4(a, b, c, d)`: class of `L3` to class of `R3`.
    pub assoc: Vec<Vec<usize>>,
    /// Indexed by `a * n + b`: class to position in `A(a, b)`.
    pub left_unit: Vec<Vec<usize>>,
    pub right_unit: Vec<Vec<usize>>,
    /// Indexed by `idx3(a, b, c)`: `P(a, b; c) → P(b, a; c)`.
    pub braiding: Option<Vec<Vec<usize>>>,
    /// One endomorphism per object.
    pub twist: Option<Vec<usize>>,
    l3: Vec<CoendTable>,
    r3: Vec<CoendTable>,
    lu: Vec<CoendTable>,
    ru: Vec<CoendTable>,
}

fn l3_spec<'a>(t: &'a Ternary<'a>, a: &Arc<FinCat>) -> CoendSpec<'a> {
    CoendSpec {
        bound: vec![a.clone()],
        terms: vec![Term::new(t, vec![F(0), F(1), B(0)]), Term::new(t, vec![B(0), F(2), F(3)])],
    }
}

fn r3_spec<'a>(t: &'a Ternary<'a>, a: &Arc<FinCat>) -> CoendSpec<'a> {
    CoendSpec {
        bound: vec![a.clone()],
        terms: vec![Term::new(t, vec![F(1), F(2), B(0)]), Term::new(t, vec![F(0), B(0), F(3)])],
    }
}

fn lu_spec<'a>(t: &'a Ternary<'a>, j: &'a SetFunctor, a: &Arc<FinCat>) -> CoendSpec<'a> {
    CoendSpec {
        bound: vec![a.clone()],
        terms: vec![Term::new(j, vec![B(0)]), Term::new(t, vec![B(0), F(0), F(1)])],
    }
}

fn ru_spec<'a>(t: &'a Ternary<'a>, j: &'a SetFunctor, a: &Arc<FinCat>) -> CoendSpec<'a> {
    CoendSpec {
        bound: vec![a.clone()],
        terms: vec![Term::new(j, vec![B(0)]), Term::new(t, vec![F(0), B(0), F(1)])],
    }
}

/// Calls `f` on every tuple in `0..n` of length `k`, lexicographically.
fn tuples(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut cur = vec![0; k];
    loop {
        f(&cur);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < n {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Canonical keys used to build the constraints of a promonoidal structure.
///
/// `l3_key(free, x, p1, p2)` and `r3_key(free, x, q1, q2)` must agree exactly
/// on elements that the associativity constraint identifies. The unit maps
/// send `(x, j, p)` to a morphism `a → b` of the base.
pub struct Keys<'a> {
    pub l3_key: &'a dyn Fn(&[usize], usize, usize, usize) -> Vec<usize>,
    pub r3_key: &'a dyn Fn(&[usize], usize, usize, usize) -> Vec<usize>,
    pub left_unit: &'a dyn Fn(usize, usize, usize, usize, usize) -> usize,
    pub right_unit: &'a dyn Fn(usize, usize, usize, usize, usize) -> usize,
}

/// Map from classes to keys, checking that the key is constant on classes.
fn keyed_classes(table: &CoendTable, key: impl Fn(&[usize], &[usize]) -> Vec<usize>) -> Result<Vec<Vec<usize>>> {
    let mut out: Vec<Option<Vec<usize>>> = vec![None; table.len()];
    for (b, e, k) in table.raw() {
        let v = key(&b, &e);
        match &out[k] {
            None => out[k] = Some(v),
            Some(w) if *w == v => {}
            Some(w) => {
                return Err(Error::InvalidMorphism(format!(
                    "key not constant on a coend class over {:?}: {w:?} vs {v:?}",
                    table.free()
                )))
            }
        }
    }
    Ok(out.into_iter().map(|o| o.expect("class has a member")).collect())
}

impl Promonoidal {
    pub fn n(&self) -> usize {
        self.base.n_obj()
    }

    pub fn idx3(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.n() + b) * self.n() + c
    }

    pub fn idx4(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n() + b) * self.n() + c) * self.n() + d
    }

    /// Size of `P(a, b; c)`.
    pub fn p_size(&self, a: usize, b: usize, c: usize) -> usize {
        self.p.size(a * self.n() + b, c)
    }

    /// `P(f, g; 1)` for `f: a' → a`, `g: b' → b`.
    pub fn p_left(&self, f: usize, g: usize, c: usize, x: usize) -> usize {
        self.p.left(f * self.base.n_mor() + g, c, x)
    }

    /// `P(1, 1; h)`.
    pub fn p_right(&self, h: usize, a: usize, b: usize, x: usize) -> usize {
        self.p.right(h, a * self.n() + b, x)
    }

    pub fn l3(&self, a: usize, b: usize, c: usize, d: usize) -> &CoendTable {
        &self.l3[self.idx4(a, b, c, d)]
    }

    pub fn r3(&self, a: usize, b: usize, c: usize, d: usize) -> &CoendTable {
        &self.r3[self.idx4(a, b, c, d)]
    }

    /// Builds a promonoidal structure, deriving the constraints from keys and
    /// verifying that they are well defined bijections.
    pub fn from_keys(base: Arc<FinCat>, p: Module, j: SetFunctor, keys: &Keys) -> Result<Self> {
        let mut pr = Self::with_tables(base, p, j);
        let n = pr.n();
        let mut assoc = Vec::with_capacity(pr.l3.len());
        for (i, (lt, rt)) in pr.l3.iter().zip(&pr.r3).enumerate() {
            let free = lt.free().to_vec();
            let lk = keyed_classes(lt, |b, e| (keys.l3_key)(&free, b[0], e[0], e[1]))?;
            let rk = keyed_classes(rt, |b, e| (keys.r3_key)(&free, b[0], e[0], e[1]))?;
            let lookup: std::collections::BTreeMap<&Vec<usize>, usize> =
                rk.iter().enumerate().map(|(k, v)| (v, k)).collect();
            if lookup.len() != rk.len() || lk.len() != rk.len() {
                return Err(Error::InvalidMorphism(format!("associativity keys not bijective at {i}")));
            }
            let mut map = Vec::with_capacity(lk.len());
            for v in &lk {
                map.push(*lookup.get(v).ok_or_else(|| {
                    Error::InvalidMorphism(format!("associativity key {v:?} has no partner over {free:?}"))
                })?);
            }
            assoc.push(map);
        }
        let base = pr.base.clone();
        let unit_map = |tables: &[CoendTable], f: &dyn Fn(usize, usize, usize, usize, usize) -> usize| {
            let mut out = Vec::with_capacity(n * n);
            for t in tables {
                let (a, b) = (t.free()[0], t.free()[1]);
                let keyed = keyed_classes(t, |bd, e| vec![f(a, b, bd[0], e[0], e[1])])?;
                let map: Vec<usize> = keyed.iter().map(|k| base.hom_index(k[0])).collect();
                if !crate::fincat::functor_is_bijection(&map, base.hom(a, b).len()) {
                    return Err(Error::InvalidMorphism(format!("unit constraint not bijective at ({a}, {b})")));
                }
                out.push(map);
            }
            Ok(out)
        };
        pr.left_unit = unit_map(&pr.lu, keys.left_unit)?;
        pr.right_unit = unit_map(&pr.ru, keys.right_unit)?;
        pr.assoc = assoc;
        Ok(pr)
    }

    fn with_tables(base: Arc<FinCat>, p: Module, j: SetFunctor) -> Self {
        let n = base.n_obj();
        let (mut l3, mut r3, mut lu, mut ru) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        {
            let t = Ternary(&p);
            let (ls, rs) = (l3_spec(&t, &base), r3_spec(&t, &base));
            tuples(n, 4, |f| {
                l3.push(ls.eval(f));
                r3.push(rs.eval(f));
            });
            let (lus, rus) = (lu_spec(&t, &j, &base), ru_spec(&t, &j, &base));
            tuples(n, 2, |f| {
                lu.push(lus.eval(f));
                ru.push(rus.eval(f));
            });
        }
        Promonoidal {
            base,
            p,
            j,
            assoc: Vec::new(),
            left_unit: Vec::new(),
            right_unit: Vec::new(),
            braiding: None,
            twist: None,
            l3,
            r3,
            lu,
            ru,
        }
    }
}

fn cartesian_p(g: &Arc<FinCat>) -> Module {
    let n = g.n_obj();
    let nm = g.n_mor();
    let gp = g.product(g);
    Module::new_unchecked(
        g.clone(),
        Arc::new(gp),
        |ab, c| g.hom(ab / n, c).len() * g.hom(ab % n, c).len(),
        |fg, c, x| {
            let (f, h) = (fg / nm, fg % nm);
            let (a, b) = (g.tgt(f), g.tgt(h));
            let w = g.hom(b, c).len();
            let (u, v) = (g.hom(a, c)[x / w], g.hom(b, c)[x % w]);
            let (u1, v1) = (g.compose(u, f), g.compose(v, h));
            g.hom_index(u1) * g.hom(g.src(h), c).len() + g.hom_index(v1)
        },
        |h, ab, x| {
            let (a, b, c) = (ab / n, ab % n, g.src(h));
            let w = g.hom(b, c).len();
            let (u, v) = (g.hom(a, c)[x / w], g.hom(b, c)[x % w]);
            let c1 = g.tgt(h);
            g.hom_index(g.compose(h, u)) * g.hom(b, c1).len() + g.hom_index(g.compose(h, v))
        },
    )
}

/// `P(p, q; r) = G(p, r) × G(q, r)` with `J` constant at a point, symmetric
/// braiding and identity twist.
pub fn cartesian_promonoidal(g: &FinGroupoid) -> Result<Promonoidal> {
    let c = g.cat().clone();
    let p = cartesian_p(&c);
    p.validate()?;
    let pair = |a: usize, b: usize, c2: usize, x: usize| {
        let w = c.hom(b, c2).len();
        (c.hom(a, c2)[x / w], c.hom(b, c2)[x % w])
    };
    let l3_key = |f: &[usize], x: usize, p1: usize, p2: usize| {
        let (u, v) = pair(f[0], f[1], x, p1);
        let (s, w) = pair(x, f[2], f[3], p2);
        vec![c.compose(s, u), c.compose(s, v), w]
    };
    let r3_key = |f: &[usize], x: usize, q1: usize, q2: usize| {
        let (u, v) = pair(f[1], f[2], x, q1);
        let (s, t) = pair(f[0], x, f[3], q2);
        vec![s, c.compose(t, u), c.compose(t, v)]
    };
    let lu = |a: usize, b: usize, x: usize, _j: usize, pe: usize| pair(x, a, b, pe).1;
    let ru = |a: usize, b: usize, x: usize, _j: usize, pe: usize| pair(a, x, b, pe).0;
    let keys = Keys { l3_key: &l3_key, r3_key: &r3_key, left_unit: &lu, right_unit: &ru };
    let mut pr = Promonoidal::from_keys(c.clone(), p, SetFunctor::terminal(c.clone()), &keys)?;
    let n = c.n_obj();
    let mut braid = Vec::with_capacity(n * n * n);
    tuples(n, 3, |t| {
        let (a, b, cc) = (t[0], t[1], t[2]);
        let (wa, wb) = (c.hom(a, cc).len(), c.hom(b, cc).len());
        braid.push((0..wa * wb).map(|x| (x % wb) * wa + x / wb).collect());
    });
    pr.braiding = Some(braid);
    pr.twist = Some((0..n).map(|a| c.idn(a)).collect());
    Ok(pr)
}

/// `F ⋆ G` together with the coend tables used to present it.
#[derive(Clone, Debug)]
pub struct Convolution {
    pub functor: SetFunctor,
    /// One table per object `c`, free variable `c`, bound `(a, b)`,
    /// terms `P(a, b; c)`, `F a`, `G b`.
    pub tables: Vec<CoendTable>,
}

/// `(F ⋆ G) c = ∫^{a,b} P(a, b; c) × F a × G b`.
pub fn convolve(pr: &Promonoidal, f: &SetFunctor, g: &SetFunctor) -> Result<Convolution> {
    if f.dom != pr.base || g.dom != pr.base {
        return Err(Error::Mismatch("functor domain differs from promonoidal base".into()));
    }
    let t = Ternary(&pr.p);
    let spec = CoendSpec {
        bound: vec![pr.base.clone(), pr.base.clone()],
        terms: vec![
            Term::new(&t, vec![B(0), B(1), F(0)]),
            Term::new(f, vec![B(0)]),
            Term::new(g, vec![B(1)]),
        ],
    };
    let tables: Vec<CoendTable> = (0..pr.n()).map(|c| spec.eval(&[c])).collect();
    let action = (0..pr.base.n_mor())
        .map(|h| {
            let (s, d) = (&tables[pr.base.src(h)], &tables[pr.base.tgt(h)]);
            (0..s.len()).map(|k| spec.act_free(0, h, s, d, k)).collect()
        })
        .collect();
    let functor = SetFunctor::new(pr.base.clone(), tables.iter().map(|t| t.len()).collect(), action)?;
    Ok(Convolution { functor, tables })
}

/// For the cartesian promonoidal structure, `F ⋆ G ≅ F × G` by
/// `[a, b, (u, v), x, y] ↦ (F u x, G v y)`.
pub fn pointwise_iso(pr: &Promonoidal, f: &SetFunctor, g: &SetFunctor, conv: &Convolution) -> Result<NatTrans> {
    let c = &pr.base;
    let prod = f.product(g)?;
    let mut components = Vec::with_capacity(pr.n());
    for (cc, t) in conv.tables.iter().enumerate() {
        let mut comp = vec![usize::MAX; t.len()];
        for (b, e, k) in t.raw() {
            let w = c.hom(b[1], cc).len();
            let (u, v) = (c.hom(b[0], cc)[e[0] / w], c.hom(b[1], cc)[e[0] % w]);
            let y = f.act(u, e[1]) * g.sizes[cc] + g.act(v, e[2]);
            if comp[k] != usize::MAX && comp[k] != y {
                return Err(Error::InvalidMorphism(format!("pointwise comparison not constant on class {k} at {cc}")));
            }
            comp[k] = y;
        }
        components.push(comp);
    }
    let nt = NatTrans { components };
    nt.verify(&conv.functor, &prod)?;
    if !nt.is_iso() {
        return Err(Error::InvalidMorphism("pointwise comparison is not invertible".into()));
    }
    Ok(nt)
}

/// `J ⋆ G ≅ G` by `[a, b, p, j, y] ↦ G(λ[a, j, p]) y`.
pub fn left_unit_iso(pr: &Promonoidal, g: &SetFunctor, conv: &Convolution) -> Result<NatTrans> {
    let c = &pr.base;
    let n = pr.n();
    let mut components = Vec::with_capacity(n);
    for (cc, t) in conv.tables.iter().enumerate() {
        let mut comp = vec![usize::MAX; t.len()];
        for (bd, e, k) in t.raw() {
            let (a, b) = (bd[0], bd[1]);
            let lt = &pr.lu[b * n + cc];
            let h = c.hom(b, cc)[pr.left_unit[b * n + cc][lt.class(&[a], &[e[1], e[0]])]];
            let y = g.act(h, e[2]);
            if comp[k] != usize::MAX && comp[k] != y {
                return Err(Error::InvalidMorphism(format!("unit comparison not constant on class {k} at {cc}")));
            }
            comp[k] = y;
        }
        components.push(comp);
    }
    let nt = NatTrans { components };
    nt.verify(&conv.functor, g)?;
    if !nt.is_iso() {
        return Err(Error::InvalidMorphism("unit comparison is not invertible".into()));
    }
    Ok(nt)
}

pub(crate) mod checks;
pub use checks::check_promonoidal;

#[cfg(test)]
mod tests;
