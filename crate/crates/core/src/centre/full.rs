//! Transformations into `ℍ^aut`, centre pieces on `ℍ` and the full-centre
//! correspondence between them.

use std::sync::Arc;

use super::convolution::lift;
use super::{first_failure, graded, hat_of_ps, to_aut_form, CatPs, CentreObjectDelta};
use crate::error::{Error, Result};
use crate::fibred::{z_component, AutFibration, GroupoidFibration};
use crate::fincat::FinCat;
use crate::profunctor::Module;
use crate::report::Report;

/// A transformation of functor-form pseudofunctors. `components[j]` is a
/// module `target(j) ⇸ source(j)` with elements `h(σ, t)`, and
/// `squares[m][pair(σ, t)][e]` is the image in `h_j(m* σ, m* t)` of
/// `e ∈ h_j'(σ, t)` for `m: j → j'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModTransform {
    pub source: CatPs,
    pub target: CatPs,
    pub components: Vec<Module>,
    pub squares: Vec<Vec<Vec<usize>>>,
}

impl ModTransform {
    /// Shapes, equivariance of every square, identity squares and
    /// compatibility with both families of constraints.
    pub fn verify(&self) -> Result<()> {
        let (s, t, g) = (&self.source, &self.target, &self.source.base);
        let bad = |msg: String| Err(Error::InvalidMorphism(msg));
        if t.base != *g || self.components.len() != g.n_obj() || self.squares.len() != g.n_mor() {
            return Err(Error::Mismatch("transform lengths do not match the base".into()));
        }
        for (j, h) in self.components.iter().enumerate() {
            if **h.dom() != *t.fibres[j] || **h.cod() != *s.fibres[j] {
                return Err(Error::Mismatch(format!("component {j} has the wrong boundary")));
            }
        }
        for m in 0..g.n_mor() {
            let (j, j1) = (g.src(m), g.tgt(m));
            let (h, h1) = (&self.components[j], &self.components[j1]);
            let (ps, pt) = (&s.pullback[m], &t.pullback[m]);
            let sq = &self.squares[m];
            if sq.len() != s.fibres[j1].n_obj() * t.fibres[j1].n_obj() {
                return bad(format!("square {m} has the wrong shape"));
            }
            for sig in 0..s.fibres[j1].n_obj() {
                for tt in 0..t.fibres[j1].n_obj() {
                    let v = &sq[h1.pair_index(sig, tt)];
                    let n = h.size(ps.obj_map[sig], pt.obj_map[tt]);
                    if v.len() != h1.size(sig, tt) || v.iter().any(|&e| e >= n) {
                        return bad(format!("square {m} at ({sig}, {tt}) leaves its target"));
                    }
                    if g.is_identity(m) && v.iter().enumerate().any(|(i, &e)| i != e) {
                        return bad(format!("identity square {m} moves ({sig}, {tt})"));
                    }
                }
            }
            let image = |sig: usize, tt: usize, e: usize| sq[h1.pair_index(sig, tt)][e];
            let fs = &s.fibres[j1];
            for beta in 0..fs.n_mor() {
                let (s0, s1) = (fs.src(beta), fs.tgt(beta));
                for tt in 0..t.fibres[j1].n_obj() {
                    for e in 0..h1.size(s1, tt) {
                        let lhs = image(s0, tt, h1.left(beta, tt, e));
                        let rhs = h.left(ps.mor_map[beta], pt.obj_map[tt], image(s1, tt, e));
                        if lhs != rhs {
                            return Err(Error::Equivariance { morphism: m, element: e });
                        }
                    }
                }
            }
            let ft = &t.fibres[j1];
            for alpha in 0..ft.n_mor() {
                let (t0, t1) = (ft.src(alpha), ft.tgt(alpha));
                for sig in 0..fs.n_obj() {
                    for e in 0..h1.size(sig, t0) {
                        let lhs = image(sig, t1, h1.right(alpha, sig, e));
                        let rhs = h.right(pt.mor_map[alpha], ps.obj_map[sig], image(sig, t0, e));
                        if lhs != rhs {
                            return Err(Error::Equivariance { morphism: m, element: e });
                        }
                    }
                }
            }
        }
        for m1 in 0..g.n_mor() {
            for m2 in g.out_of(g.tgt(m1)) {
                let m21 = g.compose(m2, m1);
                let (j, j1, j2) = (g.src(m1), g.tgt(m1), g.tgt(m2));
                let (h, h1, h2) = (&self.components[j], &self.components[j1], &self.components[j2]);
                let (cs, ct) = (&s.constraint[&(m1, m2)], &t.constraint[&(m1, m2)]);
                for sig in 0..s.fibres[j2].n_obj() {
                    for tt in 0..t.fibres[j2].n_obj() {
                        let (sig1, tt1) = (s.pullback[m2].obj_map[sig], t.pullback[m2].obj_map[tt]);
                        let sig0 = s.pullback[m1].obj_map[sig1];
                        for e in 0..h2.size(sig, tt) {
                            let mid = self.squares[m2][h2.pair_index(sig, tt)][e];
                            let via = self.squares[m1][h1.pair_index(sig1, tt1)][mid];
                            let direct = self.squares[m21][h2.pair_index(sig, tt)][e];
                            let lhs = h.left(cs[sig], t.pullback[m21].obj_map[tt], direct);
                            let rhs = h.right(ct[tt], sig0, via);
                            if lhs != rhs {
                                return bad(format!("constraints ({m1}, {m2}) disagree at ({sig}, {tt}, {e})"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The transform `Σ_i S_i → T` with `S_i = T` and `h(σ_i, t) = T(σ, t) × [m_i]`.
pub fn multiplicity_transform(target: &CatPs, copies: &[usize]) -> Result<ModTransform> {
    let parts: Vec<&CatPs> = copies.iter().map(|_| target).collect();
    let source = CatPs::coproduct(&parts)?;
    let g = &target.base;
    let components = (0..g.n_obj())
        .map(|j| {
            let (tc, sc) = (&target.fibres[j], &source.fibres[j]);
            let (no, nm) = (tc.n_obj(), tc.n_mor());
            let m_of = |sig: usize| copies[sig / no];
            Module::new(
                tc.clone(),
                sc.clone(),
                |sig, t| tc.hom(sig % no, t).len() * m_of(sig),
                |beta, t, x| {
                    let (mi, b0) = (copies[beta / nm], beta % nm);
                    let z = tc.hom(tc.tgt(b0), t)[x / mi];
                    tc.hom_index(tc.compose(z, b0)) * mi + x % mi
                },
                |alpha, sig, x| {
                    let mi = m_of(sig);
                    let z = tc.hom(sig % no, tc.src(alpha))[x / mi];
                    tc.hom_index(tc.compose(alpha, z)) * mi + x % mi
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let squares = (0..g.n_mor())
        .map(|m| {
            let j1 = g.tgt(m);
            let (tc, pf) = (&target.fibres[j1], &target.pullback[m]);
            let no = tc.n_obj();
            (0..source.fibres[j1].n_obj() * no)
                .map(|i| {
                    let (sig, t) = (i / no, i % no);
                    let mi = copies[sig / no];
                    let hom = tc.hom(sig % no, t);
                    (0..hom.len() * mi)
                        .map(|x| target.fibres[g.src(m)].hom_index(pf.mor_map[hom[x / mi]]) * mi + x % mi)
                        .collect()
                })
                .collect()
        })
        .collect();
    let out = ModTransform { source, target: target.clone(), components, squares };
    out.verify()?;
    Ok(out)
}

/// The identity transform on `target`, with `h(σ, t) = T(σ, t)`.
pub fn identity_transform(target: &CatPs) -> Result<ModTransform> {
    multiplicity_transform(target, &[1])
}

/// A transform `k: Ŝ → ℍ` with multiplicative descent data
/// `κ(α, z) ∈ ℍp(src z, s)` for `α ∈ k_p(ŝ, s)` and `z: · → δ(ŝ)* s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentrePiece {
    pub source: CentreObjectDelta,
    pub k: ModTransform,
    /// `kappa[p][pair(ŝ, s)][α][z]`, `usize::MAX` off `hom(·, δ(ŝ)* s)`.
    pub kappa: Vec<Vec<Vec<Vec<usize>>>>,
}

/// Position of `(x, e)` in a concatenation of blocks `(x, start)`.
fn decode(blocks: &[(usize, usize)], idx: usize) -> (usize, usize) {
    let b = blocks.partition_point(|&(_, start)| start <= idx) - 1;
    (blocks[b].0, idx - blocks[b].1)
}

fn encode(blocks: &[(usize, usize)], x: usize, e: usize) -> usize {
    blocks.iter().find(|&&(y, _)| y == x).expect("block exists").1 + e
}

/// `ĥ_p(ŝ, s) = Σ_{x ∈ ℋ(s, s), π x = δ(ŝ)} h_(p, δ ŝ)(σ, (s, x))` with
/// `κ((x, e), z) = x⁻¹ ∘ σ(δ ŝ, s) ∘ z`.
pub fn full_centre_hat(h: &ModTransform, f: &GroupoidFibration, af: &AutFibration) -> Result<CentrePiece> {
    let (g, hh) = (&f.base, &f.total);
    let (ag, fib, hc) = (&af.base_aut, &af.fibration, &af.total_aut.conj);
    if h.target != CatPs::haut(af)? {
        return Err(Error::Mismatch("transform does not land in ℍ^aut".into()));
    }
    let source = hat_of_ps(&h.source, ag)?;
    let target = CatPs::fibres_of(f)?;
    let gr = graded(&source, ag);
    let sig_of = |p: usize, sh: usize| {
        let j = ag.obj(p, source.delta[p][sh]);
        (j, gr.objs[j].binary_search(&sh).expect("graded object"))
    };
    let loc = |j: usize, s_tot: usize, x: usize| fib.fibre(j).local_obj(af.total_aut.obj(s_tot, x));
    // blocks[p][pair(ŝ, s)] lists `(x, start)`; sizes[p][pair] is the total.
    let mut blocks = Vec::with_capacity(g.n_obj());
    let mut sizes = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let fp = f.fibre(p);
        let ns = fp.objects.len();
        let (mut bp, mut sp) = (Vec::new(), Vec::new());
        for sh in 0..source.f.fibres[p].n_obj() {
            let a = source.delta[p][sh];
            let (j, sig) = sig_of(p, sh);
            for s in 0..ns {
                let st = fp.objects[s];
                let mut acc = 0;
                let mut list = Vec::new();
                for &x in hh.hom(st, st).iter().filter(|&&x| f.proj.mor_map[x] == a) {
                    list.push((x, acc));
                    acc += h.components[j].size(sig, loc(j, st, x));
                }
                bp.push(list);
                sp.push(acc);
            }
        }
        blocks.push(bp);
        sizes.push(sp);
    }
    let mut components = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let fp = f.fibre(p);
        let ns = fp.objects.len();
        let sc = &source.f.fibres[p];
        let (bp, sp) = (&blocks[p], &sizes[p]);
        components.push(Module::new(
            target.fibres[p].clone(),
            sc.clone(),
            |sh, s| sp[sh * ns + s],
            |beta, s, idx| {
                let (sh0, sh1) = (sc.src(beta), sc.tgt(beta));
                let j = sig_of(p, sh1).0;
                let b_loc = gr.subs[j].1.binary_search(&beta).expect("graded morphism");
                let (x, e) = decode(&bp[sh1 * ns + s], idx);
                let e1 = h.components[j].left(b_loc, loc(j, fp.objects[s], x), e);
                encode(&bp[sh0 * ns + s], x, e1)
            },
            |y, sh, idx| {
                let (j, sig) = sig_of(p, sh);
                let (s0, s1) = (fp.cat().src(y), fp.cat().tgt(y));
                let (x, e) = decode(&bp[sh * ns + s0], idx);
                let yt = fp.incl[y];
                let x1 = hh.conj(yt, x);
                let (i0, i1) = (af.total_aut.obj(fp.objects[s0], x), af.total_aut.obj(fp.objects[s1], x1));
                let mu = fib.fibre(j).local_mor(hc.mor(i0, i1, yt).expect("conjugation"));
                encode(&bp[sh * ns + s1], x1, h.components[j].right(mu, sig, e))
            },
        )?);
    }
    let mut squares = Vec::with_capacity(g.n_mor());
    for gm in 0..g.n_mor() {
        let (p, q) = (g.src(gm), g.tgt(gm));
        let (fp, fq) = (f.fibre(p), f.fibre(q));
        let nq = fq.objects.len();
        let np = fp.objects.len();
        let mut sq = Vec::with_capacity(source.f.fibres[q].n_obj() * nq);
        for sh in 0..source.f.fibres[q].n_obj() {
            let (j1, sig) = sig_of(q, sh);
            let mg = lift(ag, gm, j1);
            let sh0 = source.f.pullback[gm].obj_map[sh];
            for s in 0..nq {
                let s0 = target.pullback[gm].obj_map[s];
                let st = fq.objects[s];
                let mut v = Vec::with_capacity(sizes[q][sh * nq + s]);
                for idx in 0..sizes[q][sh * nq + s] {
                    let (x, e) = decode(&blocks[q][sh * nq + s], idx);
                    let i = af.total_aut.obj(st, x);
                    let li = fib.lift(mg, i);
                    let (s2, x2) = hc.objects[hc.gpd.src(li)];
                    if s2 != fp.objects[s0] {
                        return Err(Error::Internal(format!("lift along {gm} leaves the cleavage at {s}")));
                    }
                    let t1 = fib.fibre(j1).local_obj(i);
                    let e1 = h.squares[mg][h.components[j1].pair_index(sig, t1)][e];
                    v.push(encode(&blocks[p][sh0 * np + s0], x2, e1));
                }
                sq.push(v);
            }
        }
        squares.push(sq);
    }
    let k = ModTransform { source: source.f.clone(), target: target.clone(), components, squares };
    k.verify()?;
    let mut kappa = Vec::with_capacity(g.n_obj());
    for p in 0..g.n_obj() {
        let fp = f.fibre(p);
        let (cp, ns) = (fp.cat(), fp.objects.len());
        let mut kp = Vec::with_capacity(blocks[p].len());
        for sh in 0..source.f.fibres[p].n_obj() {
            let a = source.delta[p][sh];
            for s in 0..ns {
                let st = fp.objects[s];
                let la = f.lift(a, st);
                let as_ = target.pullback[a].obj_map[s];
                let rows = (0..sizes[p][sh * ns + s])
                    .map(|idx| {
                        let (x, _) = decode(&blocks[p][sh * ns + s], idx);
                        (0..cp.n_mor())
                            .map(|z| {
                                if cp.tgt(z) != as_ {
                                    return usize::MAX;
                                }
                                fp.local_mor(hh.compose_all(&[hh.inv(x), la, fp.incl[z]]))
                            })
                            .collect()
                    })
                    .collect();
                kp.push(rows);
            }
        }
        kappa.push(kp);
    }
    Ok(CentrePiece { source, k, kappa })
}

/// Transform axioms for `k`, plus range, bijectivity, multiplicativity,
/// unit and transition compatibility of `κ`.
pub fn centre_piece_validate(cp: &CentrePiece) -> Report {
    let mut report = Report::new("full-centre");
    report.check("k.transform", cp.k.verify().map_err(|e| e.to_string()));
    let (hc, src, g) = (&cp.k.target, &cp.source, &cp.k.target.base);
    let shape = cp.kappa.len() == g.n_obj()
        && (0..g.n_obj()).all(|p| {
            let k = &cp.k.components[p];
            let (nh, ns) = (src.f.fibres[p].n_obj(), hc.fibres[p].n_obj());
            cp.kappa[p].len() == nh * ns
                && (0..nh * ns).all(|i| {
                    cp.kappa[p][i].len() == k.size(i / ns, i % ns)
                        && cp.kappa[p][i].iter().all(|r| r.len() == hc.fibres[p].n_mor())
                })
        });
    if !report.check("kappa.shape", if shape { Ok(()) } else { Err("κ tables have the wrong shape".into()) }) {
        return report;
    }
    let kap = |p: usize, sh: usize, s: usize, al: usize, z: usize| {
        cp.kappa[p][cp.k.components[p].pair_index(sh, s)][al][z]
    };
    let elems = || {
        (0..g.n_obj()).flat_map(move |p| {
            let ns = hc.fibres[p].n_obj();
            (0..src.f.fibres[p].n_obj()).flat_map(move |sh| {
                (0..ns).flat_map(move |s| (0..cp.k.components[p].size(sh, s)).map(move |al| (p, sh, s, al)))
            })
        })
    };
    let into = |p: usize, t: usize| {
        let c = &hc.fibres[p];
        (0..c.n_mor()).filter(move |&z| c.tgt(z) == t)
    };
    report.check(
        "kappa.range",
        first_failure(elems().map(|(p, sh, s, al)| {
            let c = &hc.fibres[p];
            let as_ = hc.pullback[src.delta[p][sh]].obj_map[s];
            (0..c.n_mor())
                .find(|&z| {
                    let v = kap(p, sh, s, al, z);
                    if c.tgt(z) == as_ {
                        v >= c.n_mor() || c.src(v) != c.src(z) || c.tgt(v) != s
                    } else {
                        v != usize::MAX
                    }
                })
                .map(|z| format!("κ at p={p} ŝ={sh} s={s} α={al} z={z}"))
        })),
    );
    report.check(
        "k_pa.bijective",
        first_failure(elems().map(|(p, sh, s, al)| {
            let c = &hc.fibres[p];
            let as_ = hc.pullback[src.delta[p][sh]].obj_map[s];
            (0..c.n_obj())
                .find(|&s1| {
                    let mut img: Vec<usize> = c.hom(s1, as_).iter().map(|&z| kap(p, sh, s, al, z)).collect();
                    img.sort_unstable();
                    img != c.hom(s1, s)
                })
                .map(|s1| format!("z ↦ κ(α, z) not bijective at p={p} ŝ={sh} s={s} α={al} from {s1}"))
        })),
    );
    report.check(
        "kappa.composition",
        first_failure(elems().map(|(p, sh, s, al)| {
            let (c, k, sc) = (&hc.fibres[p], &cp.k.components[p], &src.f.fibres[p]);
            let a = src.delta[p][sh];
            let as_ = hc.pullback[a].obj_map[s];
            for z in into(p, as_) {
                let kz = kap(p, sh, s, al, z);
                for w in into(p, c.src(z)) {
                    if kap(p, sh, s, al, c.compose(z, w)) != c.compose(kz, w) {
                        return Some(format!("κ(α, z w) ≠ κ(α, z) w at p={p} ŝ={sh} α={al} z={z} w={w}"));
                    }
                }
                for y in c.out_of(s) {
                    let al1 = k.right(y, sh, al);
                    let z1 = c.compose(hc.pullback[a].mor_map[y], z);
                    if kap(p, sh, c.tgt(y), al1, z1) != c.compose(y, kz) {
                        return Some(format!("κ(α y, a*(y) z) ≠ y κ(α, z) at p={p} ŝ={sh} α={al} y={y}"));
                    }
                }
                for beta in (0..sc.n_mor()).filter(|&b| sc.tgt(b) == sh) {
                    if kap(p, sc.src(beta), s, k.left(beta, s, al), z) != kz {
                        return Some(format!("κ(β α, z) ≠ κ(α, z) at p={p} ŝ={sh} α={al} β={beta}"));
                    }
                }
            }
            None
        })),
    );
    report.check(
        "kappa.unit",
        first_failure(elems().map(|(p, sh, s, al)| {
            let c = &hc.fibres[p];
            let as_ = hc.pullback[src.delta[p][sh]].obj_map[s];
            let k1 = kap(p, sh, s, al, c.idn(as_));
            into(p, as_)
                .find(|&z| kap(p, sh, s, al, z) != c.compose(k1, z))
                .map(|z| format!("κ(α, z) ≠ κ(α, 1) z at p={p} ŝ={sh} α={al} z={z}"))
        })),
    );
    report.check(
        "kappa.transition",
        first_failure(elems().map(|(p, sh, s, al)| {
            let a = src.delta[p][sh];
            let as_ = hc.pullback[a].obj_map[s];
            for gm in (0..g.n_mor()).filter(|&m| g.tgt(m) == p) {
                let q = g.src(gm);
                let b = g.conj(g.inv(gm), a);
                let (cq, pg) = (&hc.fibres[q], &hc.pullback[gm]);
                let psi = cp.k.squares[gm][cp.k.components[p].pair_index(sh, s)][al];
                let (shq, sq) = (src.f.pullback[gm].obj_map[sh], pg.obj_map[s]);
                let fa = hc.constraint[&(gm, a)][s];
                let fb = hc.constraint[&(b, gm)][s];
                let c = cq.compose(cq.inverse_of(fb).expect("constraint is invertible"), fa);
                for z in into(p, as_) {
                    let z1 = cq.compose(c, pg.mor_map[z]);
                    if kap(q, shq, sq, psi, z1) != pg.mor_map[kap(p, sh, s, al, z)] {
                        return Some(format!("κ not compatible with {gm} at p={p} ŝ={sh} α={al} z={z}"));
                    }
                }
            }
            None
        })),
    );
    report
}

/// `ǩ_(p, a)(σ, (s, x)) = {α ∈ k_p(σ, s) : κ(α, 1) = x⁻¹ σ(a, s)}`, ordered by `α`.
pub fn full_centre_check(cp: &CentrePiece, f: &GroupoidFibration, af: &AutFibration) -> Result<ModTransform> {
    let hh = &f.total;
    let (ag, fib, hc) = (&af.base_aut, &af.fibration, &af.total_aut.conj);
    let aut = ag.aut();
    let source = to_aut_form(&cp.source, ag)?;
    let target = CatPs::haut(af)?;
    let gr = graded(&cp.source, ag);
    let kp = &cp.k.components;
    let kap = |p: usize, sh: usize, s: usize, al: usize, z: usize| cp.kappa[p][kp[p].pair_index(sh, s)][al][z];
    // Underlying `(s, x)` of a local object of `ℍ^aut(j)`, with `s` local in `ℍp`.
    let point = |j: usize, t: usize| {
        let (st, x) = hc.objects[fib.fibre(j).objects[t]];
        (st, f.fibre(ag.conj.objects[j].0).local_obj(st), x)
    };
    let mut members: Vec<Vec<Vec<usize>>> = Vec::with_capacity(aut.n_obj());
    for j in 0..aut.n_obj() {
        let (p, a) = ag.conj.objects[j];
        let fp = f.fibre(p);
        let nt = target.fibres[j].n_obj();
        let mut mj = Vec::with_capacity(gr.objs[j].len() * nt);
        for &sh in &gr.objs[j] {
            for t in 0..nt {
                let (st, s, x) = point(j, t);
                let want = fp.local_mor(hh.compose(hh.inv(x), f.lift(a, st)));
                let as_ = cp.k.target.pullback[a].obj_map[s];
                let idn = fp.cat().idn(as_);
                mj.push((0..kp[p].size(sh, s)).filter(|&al| kap(p, sh, s, al, idn) == want).collect());
            }
        }
        members.push(mj);
    }
    let nt = |j: usize| target.fibres[j].n_obj();
    let pos = |j: usize, sig: usize, t: usize, al: usize| members[j][sig * nt(j) + t].binary_search(&al).ok();
    let leave = |what: &str, j: usize| Error::Centre(format!("{what} leaves the check subset at {j}"));
    for j in 0..aut.n_obj() {
        let p = ag.conj.objects[j].0;
        let (sc, tc) = (&source.fibres[j], &target.fibres[j]);
        for beta in 0..sc.n_mor() {
            let bg = gr.subs[j].1[beta];
            for t in 0..nt(j) {
                let s = point(j, t).1;
                for &al in &members[j][sc.tgt(beta) * nt(j) + t] {
                    pos(j, sc.src(beta), t, kp[p].left(bg, s, al)).ok_or_else(|| leave("left action", j))?;
                }
            }
        }
        for mu in 0..tc.n_mor() {
            let y = f.fibre(p).local_mor(hc.underlying[fib.fibre(j).incl[mu]]);
            for sig in 0..sc.n_obj() {
                for &al in &members[j][sig * nt(j) + tc.src(mu)] {
                    pos(j, sig, tc.tgt(mu), kp[p].right(y, gr.objs[j][sig], al)).ok_or_else(|| leave("right action", j))?;
                }
            }
        }
    }
    let components = (0..aut.n_obj())
        .map(|j| {
            let p = ag.conj.objects[j].0;
            let (sc, tc) = (&source.fibres[j], &target.fibres[j]);
            Module::new(
                tc.clone(),
                sc.clone(),
                |sig, t| members[j][sig * nt(j) + t].len(),
                |beta, t, i| {
                    let al = members[j][sc.tgt(beta) * nt(j) + t][i];
                    let al1 = kp[p].left(gr.subs[j].1[beta], point(j, t).1, al);
                    pos(j, sc.src(beta), t, al1).expect("closed")
                },
                |mu, sig, i| {
                    let al = members[j][sig * nt(j) + tc.src(mu)][i];
                    let y = f.fibre(p).local_mor(hc.underlying[fib.fibre(j).incl[mu]]);
                    pos(j, sig, tc.tgt(mu), kp[p].right(y, gr.objs[j][sig], al)).expect("closed")
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut squares = Vec::with_capacity(aut.n_mor());
    for m in 0..aut.n_mor() {
        let (j, j1) = (aut.src(m), aut.tgt(m));
        let gm = ag.conj.underlying[m];
        let p1 = ag.conj.objects[j1].0;
        let mut sq = Vec::with_capacity(members[j1].len());
        for sig in 0..source.fibres[j1].n_obj() {
            let sh = gr.objs[j1][sig];
            for t in 0..nt(j1) {
                let s = point(j1, t).1;
                let (sig0, t0) = (source.pullback[m].obj_map[sig], target.pullback[m].obj_map[t]);
                let v = members[j1][sig * nt(j1) + t]
                    .iter()
                    .map(|&al| {
                        let psi = cp.k.squares[gm][kp[p1].pair_index(sh, s)][al];
                        pos(j, sig0, t0, psi).ok_or_else(|| leave("square", j))
                    })
                    .collect::<Result<Vec<_>>>()?;
                sq.push(v);
            }
        }
        squares.push(sq);
    }
    let out = ModTransform { source, target, components, squares };
    out.verify()?;
    Ok(out)
}

/// `check ∘ hat = id` on `h` and `hat ∘ check = id` on `hat(h)`, both by
/// table equality, with the validation of `hat(h)`.
pub fn hat_roundtrip(h: &ModTransform, f: &GroupoidFibration, af: &AutFibration) -> Result<Report> {
    let cp = full_centre_hat(h, f, af)?;
    let mut report = Report::new("full-centre");
    report.absorb("hat", centre_piece_validate(&cp));
    let back = full_centre_check(&cp, f, af);
    report.check(
        "check_hat.exact",
        match &back {
            Ok(b) if b == h => Ok(()),
            Ok(_) => Err("check(hat(h)) differs from h".into()),
            Err(e) => Err(e.to_string()),
        },
    );
    if let Ok(b) = back {
        report.check(
            "hat_check.exact",
            match full_centre_hat(&b, f, af) {
                Ok(cp2) if cp2 == cp => Ok(()),
                Ok(_) => Err("hat(check(k)) differs from k".into()),
                Err(e) => Err(e.to_string()),
            },
        );
    }
    Ok(report)
}

/// Agreement of `hat(h)` for an identity transform `h` with `z_ℍ` through the explicit bijection
/// `(x, e) ↦ underlying(e)` onto `ℍp(q i, s)`.
pub fn z_agreement(cp: &CentrePiece, h: &ModTransform, f: &GroupoidFibration, af: &AutFibration) -> Result<Report> {
    let z = z_component(f, af)?;
    let (g, ag, fib, hc) = (&f.base, &af.base_aut, &af.fibration, &af.total_aut.conj);
    let gr = graded(&cp.source, ag);
    let mut report = Report::new("full-centre");
    for p in 0..g.n_obj() {
        let fp = f.fibre(p);
        let (cp_p, ns) = (fp.cat(), fp.objects.len());
        let (k, zp, hp) = (&cp.k.components[p], &z.components[p], af.hat.fibre(p));
        let sc = &cp.source.f.fibres[p];
        // ŝ ↦ object of the hat fibre, and element maps per pair.
        let obj = |sh: usize| {
            let j = ag.obj(p, cp.source.delta[p][sh]);
            let sig = gr.objs[j].binary_search(&sh).expect("graded");
            hp.local_obj(fib.fibre(j).objects[sig])
        };
        let elem = |sh: usize, s: usize| -> Vec<usize> {
            let a = cp.source.delta[p][sh];
            let j = ag.obj(p, a);
            let sig = gr.objs[j].binary_search(&sh).expect("graded");
            let st = fp.objects[s];
            let hj = &h.components[j];
            let ft: &Arc<FinCat> = &h.target.fibres[j];
            f.total
                .hom(st, st)
                .iter()
                .filter(|&&x| f.proj.mor_map[x] == a)
                .flat_map(|&x| {
                    let t = fib.fibre(j).local_obj(af.total_aut.obj(st, x));
                    (0..hj.size(sig, t)).map(move |e| (t, e))
                })
                .map(|(t, e)| {
                    let mor = ft.hom(sig, t)[e];
                    cp_p.hom_index(fp.local_mor(hc.underlying[fib.fibre(j).incl[mor]]))
                })
                .collect()
        };
        let sizes_ok = (0..sc.n_obj()).all(|sh| (0..ns).all(|s| k.size(sh, s) == zp.size(obj(sh), s)));
        report.check(
            format!("z.object{p}.sizes"),
            if sizes_ok { Ok(()) } else { Err(format!("sizes differ from z at {p}")) },
        );
        if !sizes_ok {
            continue;
        }
        let bij = (0..sc.n_obj()).all(|sh| {
            (0..ns).all(|s| {
                let mut v = elem(sh, s);
                v.sort_unstable();
                v == (0..zp.size(obj(sh), s)).collect::<Vec<_>>()
            })
        });
        report.check(format!("z.object{p}.bijection"), if bij { Ok(()) } else { Err(format!("element map at {p}")) });
        let right_ok = (0..cp_p.n_mor()).all(|y| {
            (0..sc.n_obj()).all(|sh| {
                let (e0, e1) = (elem(sh, cp_p.src(y)), elem(sh, cp_p.tgt(y)));
                (0..e0.len()).all(|i| e1[k.right(y, sh, i)] == zp.right(y, obj(sh), e0[i]))
            })
        });
        let left_ok = (0..sc.n_mor()).all(|beta| {
            let j = ag.obj(p, cp.source.delta[p][sc.tgt(beta)]);
            let bl = gr.subs[j].1.binary_search(&beta).expect("graded");
            let bh = hp.local_mor(fib.fibre(j).incl[bl]);
            (0..ns).all(|s| {
                let (e0, e1) = (elem(sc.src(beta), s), elem(sc.tgt(beta), s));
                (0..e1.len()).all(|i| e0[k.left(beta, s, i)] == zp.left(bh, s, e1[i]))
            })
        });
        report.check(
            format!("z.object{p}.equivariant"),
            if right_ok && left_ok { Ok(()) } else { Err(format!("actions differ from z at {p}")) },
        );
    }
    Ok(report)
}
