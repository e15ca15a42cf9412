//! The monoidale `ℍ`, the balanced monoidale `ℍ^aut` and `z_ℍ`.

use std::sync::Arc;

use super::{fibre_pseudofunctor, AutFibration, GroupoidFibration, PsFunctorModOp};
use crate::autgpd::{conjugation_promonoidal, promonoidal_aut, ConjCategory, PairTable};
use crate::coend::{CoendSpec, Term, Ternary, Var};
use crate::dayconv::{cartesian_promonoidal, check_promonoidal, Promonoidal};
use crate::error::{Error, Result};
use crate::fincat::FinCat;
use crate::profunctor::{compose_modules, identity_module, left_unitor, right_unitor, Module, ModuleMorphism};
use crate::report::Report;

/// A morphism of pseudofunctors `𝒢 → Mod^op` given by component modules
/// and invertible squares `component(p) ∘ source(a) ≅ target(a) ∘ component(q)`.
#[derive(Clone, Debug)]
pub struct PsTransform {
    pub source: PsFunctorModOp,
    pub target: PsFunctorModOp,
    pub components: Vec<Module>,
    pub squares: Vec<ModuleMorphism>,
}

/// A pseudofunctor with a promonoidal structure on each value.
#[derive(Clone, Debug)]
pub struct PsMonoidale {
    pub carrier: PsFunctorModOp,
    pub tensor: Vec<Promonoidal>,
    pub report: Report,
}

/// `ℍ^aut` summed over gradings at each `r`, with its braided structure.
#[derive(Clone, Debug)]
pub struct HautMonoidale {
    pub hat: PsFunctorModOp,
    pub tensor: Vec<(ConjCategory, Promonoidal, PairTable)>,
    pub balanced: Promonoidal,
    pub report: Report,
}

type PairFn<'a> = &'a dyn Fn(usize, usize, usize, usize) -> (usize, usize);

/// Data for the Yoneda collapse of both composites around a tensor square.
struct Square<'a> {
    cs: &'a Arc<FinCat>,
    ct: &'a Arc<FinCat>,
    ps: &'a Module,
    pt: &'a Module,
    trans: &'a Module,
    pair_s: PairFn<'a>,
    pair_t: PairFn<'a>,
    /// Underlying total morphism of a transition element `(s, t, e)`.
    und: &'a dyn Fn(usize, usize, usize) -> usize,
    compose: &'a dyn Fn(usize, usize) -> usize,
    /// Expected size of the common value at `(s1, s2, t)`.
    expect: &'a dyn Fn(usize, usize, usize) -> usize,
}

/// Maps `[m1, m2, h1, h2] ↦ (m1 h1, m2 h2)` and `[h, n1, n2] ↦ (h n1, h n2)`
/// and checks both are well defined, injective and have the same image of
/// the expected size.
fn collapse(sq: &Square) -> std::result::Result<(), String> {
    let (ts, tt) = (Ternary(sq.ps), Ternary(sq.pt));
    let left = CoendSpec {
        bound: vec![sq.ct.clone(), sq.ct.clone()],
        terms: vec![
            Term::new(&tt, vec![Var::Bound(0), Var::Bound(1), Var::Free(2)]),
            Term::new(sq.trans, vec![Var::Free(0), Var::Bound(0)]),
            Term::new(sq.trans, vec![Var::Free(1), Var::Bound(1)]),
        ],
    };
    let right = CoendSpec {
        bound: vec![sq.cs.clone()],
        terms: vec![
            Term::new(sq.trans, vec![Var::Bound(0), Var::Free(2)]),
            Term::new(&ts, vec![Var::Free(0), Var::Free(1), Var::Bound(0)]),
        ],
    };
    let n = sq.cs.n_obj();
    for s1 in 0..n {
        for s2 in 0..n {
            for t in 0..sq.ct.n_obj() {
                let free = [s1, s2, t];
                let image = |table: crate::coend::CoendTable,
                             key: &dyn Fn(&[usize], &[usize]) -> (usize, usize)|
                 -> std::result::Result<Vec<(usize, usize)>, String> {
                    let mut out = vec![None; table.len()];
                    for (b, e, k) in table.raw() {
                        let v = key(&b, &e);
                        match out[k] {
                            None => out[k] = Some(v),
                            Some(w) if w != v => return Err(format!("collapse not constant on class {k} at {free:?}")),
                            _ => {}
                        }
                    }
                    let mut keys: Vec<(usize, usize)> = out.into_iter().map(|v| v.expect("classes are inhabited")).collect();
                    keys.sort_unstable();
                    if keys.windows(2).any(|w| w[0] == w[1]) {
                        return Err(format!("collapse not injective at {free:?}"));
                    }
                    Ok(keys)
                };
                let l = image(left.eval(&free), &|b, e| {
                    let (m1, m2) = (sq.pair_t)(b[0], b[1], t, e[0]);
                    ((sq.compose)(m1, (sq.und)(s1, b[0], e[1])), (sq.compose)(m2, (sq.und)(s2, b[1], e[2])))
                })?;
                let r = image(right.eval(&free), &|b, e| {
                    let (n1, n2) = (sq.pair_s)(s1, s2, b[0], e[1]);
                    let h = (sq.und)(b[0], t, e[0]);
                    ((sq.compose)(h, n1), (sq.compose)(h, n2))
                })?;
                if l != r {
                    return Err(format!("the two composites collapse to different sets at {free:?}"));
                }
                if l.len() != (sq.expect)(s1, s2, t) {
                    return Err(format!("collapsed set at {free:?} has size {}, expected {}", l.len(), (sq.expect)(s1, s2, t)));
                }
            }
        }
    }
    Ok(())
}

/// `□_p(s, t; u) = ℍp(s, u) × ℍp(t, u)`, `I_p = !`, with pseudonaturality
/// squares checked by collapsing both composites onto `ℍa(s1, t) × ℍa(s2, t)`.
pub fn h_monoidale(f: &GroupoidFibration) -> Result<PsMonoidale> {
    let ps = fibre_pseudofunctor(f)?;
    let (g, h) = (&f.base, &f.total);
    let mut report = Report::new("monoidale-check");
    let tensor = f.fibres().iter().map(|fb| cartesian_promonoidal(&fb.gpd)).collect::<Result<Vec<_>>>()?;
    for (p, pr) in tensor.iter().enumerate() {
        report.absorb(&format!("fibre{p}"), check_promonoidal(pr));
        report.check(format!("fibre{p}.unit.terminal"), match pr.j.sizes.iter().all(|&n| n == 1) {
            true => Ok(()),
            false => Err("unit is not terminal".into()),
        });
    }
    for a in 0..g.n_mor() {
        let (fp, fq) = (f.fibre(g.src(a)), f.fibre(g.tgt(a)));
        let pair = |fb: &super::Fibre, s1: usize, s2: usize, s: usize, x: usize| {
            let c = fb.cat();
            let w = c.hom(s2, s).len();
            (fb.incl[c.hom(s1, s)[x / w]], fb.incl[c.hom(s2, s)[x % w]])
        };
        let sq = Square {
            cs: fp.cat(),
            ct: fq.cat(),
            ps: &tensor[g.src(a)].p,
            pt: &tensor[g.tgt(a)].p,
            trans: &ps.trans[a],
            pair_s: &|s1, s2, s, x| pair(fp, s1, s2, s, x),
            pair_t: &|s1, s2, s, x| pair(fq, s1, s2, s, x),
            und: &|s, t, e| f.over(a, fp.objects[s], fq.objects[t])[e],
            compose: &|y, x| h.compose(y, x),
            expect: &|s1, s2, t| {
                let t = fq.objects[t];
                f.over(a, fp.objects[s1], t).len() * f.over(a, fp.objects[s2], t).len()
            },
        };
        report.check(format!("pseudonatural.{a}"), collapse(&sq));
    }
    Ok(PsMonoidale { carrier: ps, tensor, report })
}

/// `□((s, x), (t, y); (u, z)) = {(m, n) : ᵐx ⁿy = z}` on `Σ_a ℍ^aut(r, a)`,
/// graded pseudonaturality squares, and the braiding and twist of the
/// conjugation structure on `ℋ^aut`.
pub fn haut_monoidale(f: &GroupoidFibration, af: &AutFibration) -> Result<HautMonoidale> {
    let (g, h) = (&f.base, &f.total);
    let hat = fibre_pseudofunctor(&af.hat)?;
    let mut tensor = Vec::with_capacity(g.n_obj());
    for r in 0..g.n_obj() {
        let mask = (0..h.n_mor()).map(|k| f.proj.mor_map[k] == g.idn(r)).collect();
        let c = ConjCategory::new(h, &f.fibre(r).objects, mask)?;
        if **c.cat() != *hat.fibres[r] {
            return Err(Error::Internal(format!("summed fibre over {r} differs from the conjugation category")));
        }
        let (pr, table) = conjugation_promonoidal(&c, false)?;
        tensor.push((c, pr, table));
    }
    let (balanced, _) = promonoidal_aut(&af.total_aut)?;
    let mut m = HautMonoidale { hat, tensor, balanced, report: Report::new("monoidale-check") };
    m.report = check_haut_monoidale(f, af, &m)?;
    Ok(m)
}

/// Re-runs every check of [`haut_monoidale`] on the data held in `m`.
pub fn check_haut_monoidale(f: &GroupoidFibration, af: &AutFibration, m: &HautMonoidale) -> Result<Report> {
    let (g, h) = (&f.base, &f.total);
    let hc = &af.total_aut.conj;
    let (hat, tensor) = (&m.hat, &m.tensor);
    let mut report = Report::new("monoidale-check");
    for (r, (c, pr, table)) in tensor.iter().enumerate() {
        report.absorb(&format!("r{r}"), check_promonoidal(pr));
        let n = c.objects.len();
        let mut grading = Ok(());
        'grade: for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let label = |o: usize| f.proj.mor_map[c.objects[o].1];
                    if !table.pairs(i, j, k).is_empty() && label(k) != g.compose(label(i), label(j)) {
                        grading = Err(format!("element of □({i}, {j}; {k}) with mismatched grading"));
                        break 'grade;
                    }
                }
            }
        }
        report.check(format!("r{r}.grading"), grading);
    }
    for a in 0..g.n_mor() {
        let (r, r1) = (g.src(a), g.tgt(a));
        let (fr, fr1) = (af.hat.fibre(r), af.hat.fibre(r1));
        let (cs, ct) = (&tensor[r], &tensor[r1]);
        let sq = Square {
            cs: cs.0.cat(),
            ct: ct.0.cat(),
            ps: &cs.1.p,
            pt: &ct.1.p,
            trans: &hat.trans[a],
            pair_s: &|i, j, k, e| cs.2.pairs(i, j, k)[e],
            pair_t: &|i, j, k, e| ct.2.pairs(i, j, k)[e],
            und: &|i, j, e| hc.underlying[af.hat.over(a, fr.objects[i], fr1.objects[j])[e]],
            compose: &|y, x| h.compose(y, x),
            expect: &|i1, i2, j| cs.2.pairs(i1, i2, fr.local_obj(af.hat.pull(a, fr1.objects[j]))).len(),
        };
        report.check(format!("pseudonatural.{a}"), collapse(&sq));
    }
    let (_, full) = promonoidal_aut(&af.total_aut)?;
    report.absorb("balanced", check_promonoidal(&m.balanced));
    let mut inverse = Ok(());
    'braid: for (c, _, table) in tensor {
        let n = c.objects.len();
        let global = |i: usize| hc.obj(c.objects[i].0, c.objects[i].1).expect("summed fibre object");
        for i in 0..n {
            let x = c.objects[i].1;
            for j in 0..n {
                for k in 0..n {
                    for &(m, l) in table.pairs(i, j, k) {
                        let (p, q) = (h.compose(h.conj(m, x), l), m);
                        if full.index(global(j), global(i), global(k), (p, q)).is_none() {
                            inverse = Err(format!("γ({m}, {l}) leaves □ at ({j}, {i}; {k})"));
                            break 'braid;
                        }
                        if (q, h.compose(h.inv(h.conj(q, x)), p)) != (m, l) {
                            inverse = Err(format!("stated inverse fails at ({m}, {l})"));
                            break 'braid;
                        }
                    }
                }
            }
        }
    }
    report.check("braiding.inverse", inverse);
    let mut lies_over = Ok(());
    for (i, &(s, x)) in hc.objects.iter().enumerate() {
        let gi = af.fibration.proj.obj_map[i];
        let over = af.base_aut.conj.mor(gi, gi, f.proj.mor_map[x]);
        let tw = hc.mor(i, i, x);
        if over.is_none() || tw.is_none() || af.fibration.proj.mor_map[tw.unwrap()] != over.unwrap() {
            lies_over = Err(format!("twist at ({s}, {x}) does not lie over its grading"));
            break;
        }
    }
    report.check("twist.over", lies_over);
    report.fact("objects.haut", hc.objects.len());
    Ok(report)
}

/// `z_ℍ: Σ_a ℍ^aut(-, a) → ℍ` with components the modules
/// `q*(i, s) = ℍp(q i, s)` and squares obtained by collapsing both
/// composites onto `{h: q i → t : π h = a}`.
pub fn z_component(f: &GroupoidFibration, af: &AutFibration) -> Result<PsTransform> {
    let (g, h) = (&f.base, &f.total);
    let hc = &af.total_aut.conj;
    let source = fibre_pseudofunctor(&af.hat)?;
    let target = fibre_pseudofunctor(f)?;
    let q_obj = |i: usize| hc.objects[i].0;
    let components = (0..g.n_obj())
        .map(|p| {
            let (fb, hb) = (f.fibre(p), af.hat.fibre(p));
            let (cf, ch) = (fb.cat(), hb.cat());
            let qi = |i: usize| fb.local_obj(q_obj(hb.objects[i]));
            Module::new(
                cf.clone(),
                ch.clone(),
                |i, s| cf.hom(qi(i), s).len(),
                |beta, s, x| {
                    let y = cf.hom(qi(ch.tgt(beta)), s)[x];
                    cf.hom_index(cf.compose(y, fb.local_mor(hc.underlying[hb.incl[beta]])))
                },
                |alpha, i, x| {
                    let y = cf.hom(qi(i), cf.src(alpha))[x];
                    cf.hom_index(cf.compose(alpha, y))
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut squares = Vec::with_capacity(g.n_mor());
    for a in 0..g.n_mor() {
        let (p, q) = (g.src(a), g.tgt(a));
        let (fp, fq, hp, hq) = (f.fibre(p), f.fibre(q), af.hat.fibre(p), af.hat.fibre(q));
        let w = Module::new(
            fq.cat().clone(),
            hp.cat().clone(),
            |i, t| f.over(a, q_obj(hp.objects[i]), fq.objects[t]).len(),
            |beta, t, x| {
                let y = f.over(a, q_obj(hp.objects[hp.cat().tgt(beta)]), fq.objects[t])[x];
                f.rank(h.compose(y, hc.underlying[hp.incl[beta]]))
            },
            |alpha, i, x| {
                let y = f.over(a, q_obj(hp.objects[i]), fq.objects[fq.cat().src(alpha)])[x];
                f.rank(h.compose(fq.incl[alpha], y))
            },
        )?;
        let around_source = compose_modules(&target.trans[a], &components[p])?;
        let e1 = around_source.induced(&w, |i, t, s, m, n| {
            let x = f.over(a, fp.objects[s], fq.objects[t])[m];
            let y = fp.incl[fp.cat().hom(fp.local_obj(q_obj(hp.objects[i])), s)[n]];
            f.rank(h.compose(x, y))
        })?;
        let around_target = compose_modules(&components[q], &source.trans[a])?;
        let e2 = around_target.induced(&w, |i, t, j, m, n| {
            let y = fq.incl[fq.cat().hom(fq.local_obj(q_obj(hq.objects[j])), t)[m]];
            let k = hc.underlying[af.hat.over(a, hp.objects[i], hq.objects[j])[n]];
            f.rank(h.compose(y, k))
        })?;
        e1.verify_iso(&around_source.module, &w)?;
        e2.verify_iso(&around_target.module, &w)?;
        squares.push(e1.then(&e2.inverse().expect("iso")));
    }
    let z = PsTransform { source, target, components, squares };
    z.check_units()?;
    Ok(z)
}

impl PsTransform {
    /// At identities the squares reduce to the unitors.
    pub fn check_units(&self) -> Result<()> {
        let g = &self.target.base;
        for p in 0..g.n_obj() {
            let i = g.idn(p);
            let m = &self.components[p];
            if self.target.trans[i] != identity_module(m.dom().clone())
                || self.source.trans[i] != identity_module(m.cod().clone())
            {
                return Err(Error::Internal(format!("transition at the identity of {p} is not the hom module")));
            }
            let (_, ru) = right_unitor(m)?;
            let (_, lu) = left_unitor(m)?;
            if self.squares[i] != ru.then(&lu.inverse().expect("iso")) {
                return Err(Error::Internal(format!("square at the identity of {p} is not the unitor composite")));
            }
        }
        Ok(())
    }
}
