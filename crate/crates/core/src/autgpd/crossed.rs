//! Crossed `𝒢`-sets, the category-of-elements equivalence and half-braidings.

use std::sync::Arc;

use super::{AutGroupoid, PairTable};
use crate::dayconv::Convolution;
use crate::error::{Error, Result};
use crate::fincat::{FinGroupoid, NatTrans, SetFunctor};

/// A functor `X: 𝒢 → Set` with an equivariant grading `φ: X → Aut_𝒢`.
/// Grades are stored as hom-set positions in `𝒢(p, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedGSet {
    pub base: FinGroupoid,
    pub x: SetFunctor,
    pub grading: NatTrans,
}

impl CrossedGSet {
    pub fn new(base: FinGroupoid, x: SetFunctor, grading: NatTrans) -> Result<Self> {
        let g = &base;
        if x.dom != *g.cat() || grading.components.len() != g.n_obj() {
            return Err(Error::Mismatch("crossed set over a different groupoid".into()));
        }
        for p in 0..g.n_obj() {
            let c = &grading.components[p];
            if c.len() != x.sizes[p] || c.iter().any(|&a| a >= g.hom(p, p).len()) {
                return Err(Error::InvalidSetFunctor(format!("grading at {p} has the wrong shape")));
            }
        }
        for f in 0..g.n_mor() {
            let (p, q) = (g.src(f), g.tgt(f));
            for e in 0..x.sizes[p] {
                let lhs = g.hom(q, q)[grading.components[q][x.act(f, e)]];
                let rhs = g.conj(f, g.hom(p, p)[grading.components[p][e]]);
                if lhs != rhs {
                    return Err(Error::Equivariance { morphism: f, element: e });
                }
            }
        }
        Ok(CrossedGSet { base, x, grading })
    }

    /// The grade of `e ∈ Xp` as a morphism `p → p`.
    pub fn grade(&self, p: usize, e: usize) -> usize {
        self.base.hom(p, p)[self.grading.components[p][e]]
    }

    /// `X` graded constantly at identities.
    pub fn trivially_graded(base: &FinGroupoid, x: SetFunctor) -> Result<Self> {
        let comps = (0..base.n_obj())
            .map(|p| vec![base.hom_index(base.idn(p)); x.sizes[p]])
            .collect();
        CrossedGSet::new(base.clone(), x, NatTrans { components: comps })
    }

    /// `Aut_𝒢` graded by the identity.
    pub fn aut(base: &FinGroupoid) -> Result<Self> {
        let x = super::aut_functor(base)?;
        let comps = x.sizes.iter().map(|&n| (0..n).collect()).collect();
        CrossedGSet::new(base.clone(), x, NatTrans { components: comps })
    }

    /// Pointwise product graded by `φ(s, t) = φ s ∘ φ t`.
    pub fn product(&self, other: &CrossedGSet) -> Result<Self> {
        let g = &self.base;
        let x = self.x.product(&other.x)?;
        let comps = (0..g.n_obj())
            .map(|p| {
                let w = other.x.sizes[p];
                (0..x.sizes[p])
                    .map(|e| g.hom_index(g.compose(self.grade(p, e / w), other.grade(p, e % w))))
                    .collect()
            })
            .collect();
        CrossedGSet::new(g.clone(), x, NatTrans { components: comps })
    }

    /// Fibre of `φ_p` over `a`, in increasing order.
    pub fn fibre(&self, p: usize, a: usize) -> Vec<usize> {
        (0..self.x.sizes[p]).filter(|&e| self.grade(p, e) == a).collect()
    }

    /// Morphisms of crossed sets are grading-preserving natural maps.
    pub fn verify_morphism(&self, other: &CrossedGSet, t: &NatTrans) -> Result<()> {
        t.verify(&self.x, &other.x)?;
        for p in 0..self.base.n_obj() {
            for e in 0..self.x.sizes[p] {
                if other.grade(p, t.components[p][e]) != self.grade(p, e) {
                    return Err(Error::InvalidMorphism(format!("grading not preserved at ({p}, {e})")));
                }
            }
        }
        Ok(())
    }
}

/// The functor on `𝒢^aut` sending `(p, a)` to the fibre of `φ_p` over `a`.
pub fn elements_functor(ag: &AutGroupoid, c: &CrossedGSet) -> Result<SetFunctor> {
    let aut = ag.aut();
    let fibres: Vec<Vec<usize>> = ag.conj.objects.iter().map(|&(p, a)| c.fibre(p, a)).collect();
    let action = (0..aut.n_mor())
        .map(|m| {
            let f = ag.conj.underlying[m];
            let tgt = &fibres[aut.tgt(m)];
            fibres[aut.src(m)]
                .iter()
                .map(|&e| tgt.binary_search(&c.x.act(f, e)).expect("equivariance keeps fibres"))
                .collect()
        })
        .collect();
    SetFunctor::new(aut.cat().clone(), fibres.iter().map(Vec::len).collect(), action)
}

/// `Xp = Σ_{a ∈ 𝒢(p,p)} S(p, a)` graded by the summand.
pub fn from_elements(ag: &AutGroupoid, s: &SetFunctor) -> Result<CrossedGSet> {
    let g = &ag.base;
    if s.dom != *ag.aut().cat() {
        return Err(Error::Mismatch("functor is not on the automorphism groupoid".into()));
    }
    let mut sizes = Vec::with_capacity(g.n_obj());
    let mut offsets: Vec<Vec<usize>> = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let mut off = Vec::new();
        let mut total = 0;
        for &a in g.hom(p, p) {
            off.push(total);
            total += s.sizes[ag.obj(p, a)];
        }
        offsets.push(off);
        sizes.push(total);
    }
    let decode = |p: usize, e: usize| {
        let i = offsets[p].partition_point(|&o| o <= e) - 1;
        (i, e - offsets[p][i])
    };
    let action = (0..g.n_mor())
        .map(|f| {
            let (p, q) = (g.src(f), g.tgt(f));
            (0..sizes[p])
                .map(|e| {
                    let (i, y) = decode(p, e);
                    let a = g.hom(p, p)[i];
                    let fa = g.conj(f, a);
                    let m = ag.conj.mor(ag.obj(p, a), ag.obj(q, fa), f).expect("conjugation lift");
                    offsets[q][g.hom_index(fa)] + s.act(m, y)
                })
                .collect()
        })
        .collect();
    let x = SetFunctor::new(g.cat().clone(), sizes.clone(), action)?;
    let comps = (0..g.n_obj()).map(|p| (0..sizes[p]).map(|e| decode(p, e).0).collect()).collect();
    CrossedGSet::new(g.clone(), x, NatTrans { components: comps })
}

/// The comparison `X → from_elements(elements_functor(X))`, verified.
pub fn roundtrip_crossed(ag: &AutGroupoid, c: &CrossedGSet) -> Result<NatTrans> {
    let back = from_elements(ag, &elements_functor(ag, c)?)?;
    let g = &ag.base;
    let comps = (0..g.n_obj())
        .map(|p| {
            let mut offset = 0;
            let mut out = vec![0; c.x.sizes[p]];
            for &a in g.hom(p, p) {
                for (i, e) in c.fibre(p, a).into_iter().enumerate() {
                    out[e] = offset + i;
                }
                offset += c.fibre(p, a).len();
            }
            out
        })
        .collect();
    let t = NatTrans { components: comps };
    c.verify_morphism(&back, &t)?;
    if !t.is_iso() {
        return Err(Error::Internal("elements round trip is not invertible".into()));
    }
    Ok(t)
}

/// The comparison `S → elements_functor(from_elements(S))`, verified.
pub fn roundtrip_elements(ag: &AutGroupoid, s: &SetFunctor) -> Result<NatTrans> {
    let back = elements_functor(ag, &from_elements(ag, s)?)?;
    let t = NatTrans::identity(s);
    t.verify(s, &back)?;
    Ok(t)
}

/// Functors against which half-braidings are tested, with the structure
/// needed for the checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFamily {
    pub functors: Vec<SetFunctor>,
    pub terminal: usize,
    /// `representable[p]` is the index of `𝒢(p, -)`.
    pub representable: Vec<usize>,
    /// `(i, j, k)` with `functors[k] = functors[i] × functors[j]`.
    pub products: Vec<(usize, usize, usize)>,
}

impl TestFamily {
    /// Terminal, all representables, `Aut_𝒢` and products of pairs of
    /// representables.
    pub fn standard(g: &FinGroupoid) -> Result<Self> {
        let c = g.cat().clone();
        let mut functors = vec![SetFunctor::terminal(c.clone())];
        let representable: Vec<usize> = (0..g.n_obj())
            .map(|p| {
                functors.push(SetFunctor::representable(c.clone(), p));
                functors.len() - 1
            })
            .collect();
        functors.push(super::aut_functor(g)?);
        let mut products = Vec::new();
        for &i in &representable {
            for &j in &representable {
                let prod = functors[i].product(&functors[j])?;
                functors.push(prod);
                products.push((i, j, functors.len() - 1));
            }
        }
        Ok(TestFamily { functors, terminal: 0, representable, products })
    }

    /// Adds user-supplied functors.
    pub fn with(mut self, extra: impl IntoIterator<Item = SetFunctor>) -> Self {
        self.functors.extend(extra);
        self
    }
}

/// Bijections `u_{Y,p}: Xp × Yp → Yp × Xp` for `Y` in a test family.
/// `u[y][p][x * |Yp| + e] = e' * |Xp| + x'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfBraiding {
    pub base: FinGroupoid,
    pub x: SetFunctor,
    pub family: Arc<TestFamily>,
    pub u: Vec<Vec<Vec<usize>>>,
}

impl HalfBraiding {
    fn pair(&self, y: usize, p: usize, x: usize, e: usize) -> (usize, usize) {
        let fam = &self.family;
        let v = self.u[y][p][x * fam.functors[y].sizes[p] + e];
        (v / self.x.sizes[p], v % self.x.sizes[p])
    }

    /// Checks bijectivity, naturality in `p` and in `Y` (along Yoneda maps
    /// between representables), the terminal case and multiplicativity.
    pub fn verify(&self) -> Result<()> {
        let g = &self.base;
        let fam = &self.family;
        let bad = |w: String| Err(Error::NotHalfBraiding(w));
        for (yi, y) in fam.functors.iter().enumerate() {
            for p in 0..g.n_obj() {
                let n = self.x.sizes[p] * y.sizes[p];
                if self.u[yi][p].len() != n || !crate::fincat::functor_is_bijection(&self.u[yi][p], n) {
                    return bad(format!("u at family member {yi}, object {p} is not a bijection"));
                }
            }
            for f in 0..g.n_mor() {
                let (p, q) = (g.src(f), g.tgt(f));
                for x in 0..self.x.sizes[p] {
                    for e in 0..y.sizes[p] {
                        let (e1, x1) = self.pair(yi, p, x, e);
                        let lhs = self.pair(yi, q, self.x.act(f, x), y.act(f, e));
                        if lhs != (y.act(f, e1), self.x.act(f, x1)) {
                            return bad(format!("not natural at morphism {f} for member {yi}, element ({x}, {e})"));
                        }
                    }
                }
            }
        }
        for p in 0..g.n_obj() {
            for x in 0..self.x.sizes[p] {
                if self.pair(fam.terminal, p, x, 0) != (0, x) {
                    return bad(format!("not canonical at the terminal functor, object {p}, element {x}"));
                }
            }
        }
        for (p, &rp) in fam.representable.iter().enumerate() {
            for (q, &rq) in fam.representable.iter().enumerate() {
                for &k in g.hom(q, p) {
                    // Yoneda map 𝒢(p, -) → 𝒢(q, -), h ↦ h ∘ k.
                    let eta = |r: usize, e: usize| g.hom_index(g.compose(g.hom(p, r)[e], k));
                    for r in 0..g.n_obj() {
                        for x in 0..self.x.sizes[r] {
                            for e in 0..g.hom(p, r).len() {
                                let (e1, x1) = self.pair(rp, r, x, e);
                                if self.pair(rq, r, x, eta(r, e)) != (eta(r, e1), x1) {
                                    return bad(format!(
                                        "not natural in Y along {k}: {q} → {p} at object {r}, element ({x}, {e})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        for &(i, j, k) in &fam.products {
            let wj = |p: usize| fam.functors[j].sizes[p];
            for p in 0..g.n_obj() {
                for x in 0..self.x.sizes[p] {
                    for e in 0..fam.functors[k].sizes[p] {
                        let (y, y1) = (e / wj(p), e % wj(p));
                        let (ya, xa) = self.pair(i, p, x, y);
                        let (yb, xb) = self.pair(j, p, xa, y1);
                        if self.pair(k, p, x, e) != (ya * wj(p) + yb, xb) {
                            return bad(format!("not multiplicative on members ({i}, {j}) at object {p}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `u_{Y,p}(x, y) = (Y(φ_p x) y, x)`.
pub fn to_centre(c: &CrossedGSet, family: &Arc<TestFamily>) -> Result<HalfBraiding> {
    let g = &c.base;
    let u = family
        .functors
        .iter()
        .map(|y| {
            (0..g.n_obj())
                .map(|p| {
                    let (nx, ny) = (c.x.sizes[p], y.sizes[p]);
                    (0..nx * ny)
                        .map(|i| {
                            let (x, e) = (i / ny, i % ny);
                            y.act(c.grade(p, x), e) * nx + x
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let hb = HalfBraiding { base: g.clone(), x: c.x.clone(), family: family.clone(), u };
    hb.verify().map_err(|e| Error::Internal(format!("constructed half-braiding fails: {e}")))?;
    Ok(hb)
}

/// Reads `φ_p x` off `u` at `𝒢(p, -)` applied to `(x, 1_p)`.
pub fn from_centre(u: &HalfBraiding) -> Result<CrossedGSet> {
    u.verify()?;
    let g = &u.base;
    let fam = &u.family;
    let mut comps = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let rp = fam.representable[p];
        let id = g.hom_index(g.idn(p));
        let mut row = Vec::with_capacity(u.x.sizes[p]);
        for x in 0..u.x.sizes[p] {
            let (e, x1) = u.pair(rp, p, x, id);
            if x1 != x {
                return Err(Error::NotHalfBraiding(format!("u moves element {x} at object {p}")));
            }
            row.push(e);
        }
        comps.push(row);
    }
    let c = CrossedGSet::new(g.clone(), u.x.clone(), NatTrans { components: comps })?;
    let again = to_centre(&c, &u.family)?;
    if again.u != u.u {
        return Err(Error::NotHalfBraiding("extracted grading does not reproduce u".into()));
    }
    Ok(c)
}

/// `Ŝ` with its half-braiding `γ(x ∈ S(p,a), y) = (Y(a) y, x)`.
pub fn universal_centre_piece(
    ag: &AutGroupoid,
    s: &SetFunctor,
    family: &Arc<TestFamily>,
) -> Result<(CrossedGSet, HalfBraiding)> {
    let hat = from_elements(ag, s)?;
    let hb = to_centre(&hat, family)?;
    Ok((hat, hb))
}

/// `(S ⋆ T)^ ≅ Ŝ × T̂` as crossed sets, by `[A, B, (u, v), s, t] ↦ (Ŝu s, T̂v t)`.
pub fn hat_product_iso(
    ag: &AutGroupoid,
    table: &PairTable,
    s: &SetFunctor,
    t: &SetFunctor,
    conv: &Convolution,
) -> Result<NatTrans> {
    let g = &ag.base;
    let (hs, ht) = (from_elements(ag, s)?, from_elements(ag, t)?);
    let hst = from_elements(ag, &conv.functor)?;
    let prod = hs.product(&ht)?;
    // Offsets of summands in Ŝ and T̂ to embed S(p,a) into Ŝp.
    let embed = |h: &CrossedGSet, p: usize, a: usize, y: usize| h.fibre(p, a)[y];
    let mut comps = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let mut row = Vec::with_capacity(hst.x.sizes[p]);
        let mut offset = 0;
        for &c in g.hom(p, p) {
            let obj = ag.obj(p, c);
            let tb = &conv.tables[obj];
            for k in 0..tb.len() {
                let (bd, e) = tb.rep(k);
                let (oa, ob) = (bd[0], bd[1]);
                let (u, v) = table.pairs(oa, ob, obj)[e[0]];
                let (pa, a) = ag.conj.objects[oa];
                let (pb, b) = ag.conj.objects[ob];
                let xs = hs.x.act(u, embed(&hs, pa, a, e[1]));
                let xt = ht.x.act(v, embed(&ht, pb, b, e[2]));
                row.push(xs * ht.x.sizes[p] + xt);
            }
            offset += tb.len();
        }
        debug_assert_eq!(offset, hst.x.sizes[p]);
        comps.push(row);
    }
    let nt = NatTrans { components: comps };
    hst.verify_morphism(&prod, &nt)?;
    if !nt.is_iso() {
        return Err(Error::InvalidMorphism("hat of convolution is not the product".into()));
    }
    Ok(nt)
}
