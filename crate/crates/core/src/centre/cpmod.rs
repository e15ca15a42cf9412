//! Centre pieces `U → 𝒢` for the cartesian monoidale on a groupoid, computed
//! module-side on representables and functor-side on `[𝒢, FinSet]`.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::autgpd::TestFamily;
use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinGroupoid, SetFunctor};
use crate::profunctor::Module;
use crate::report::Report;

/// A module `h: 𝒢 ⇸ U`, read as a functor `U^op → [𝒢, FinSet]`.
#[derive(Clone, Debug)]
pub struct CpModInstance {
    pub u: Arc<FinCat>,
    pub g: FinGroupoid,
    pub h: Module,
}

/// Variables `(u, a, y)` with `y ∈ h(u, a)`.
struct Vars {
    start: Vec<usize>,
    list: Vec<(usize, usize, usize)>,
}

impl Vars {
    fn new(h: &Module) -> Self {
        let (nu, na) = (h.cod().n_obj(), h.dom().n_obj());
        let (mut start, mut list) = (Vec::new(), Vec::new());
        for u in 0..nu {
            for a in 0..na {
                start.push(list.len());
                list.extend((0..h.size(u, a)).map(|y| (u, a, y)));
            }
        }
        Vars { start, list }
    }

    fn of(&self, na: usize, u: usize, a: usize, y: usize) -> usize {
        self.start[u * na + a] + y
    }
}

type Check<'a, V> = Box<dyn Fn(&dyn Fn(usize) -> V) -> bool + 'a>;

/// Backtracking over `domains`; each check runs once every variable it
/// reads is assigned, as recorded by a dry run on `probe`.
fn search<V: Copy>(domains: &[Vec<V>], probe: &[V], checks: Vec<Check<'_, V>>) -> Vec<Vec<V>> {
    let n = domains.len();
    let mut buckets: Vec<Vec<Check<'_, V>>> = (0..n).map(|_| Vec::new()).collect();
    let mut always = Vec::new();
    for c in checks {
        let seen = RefCell::new(Vec::new());
        c(&|i| {
            seen.borrow_mut().push(i);
            probe[i]
        });
        match seen.into_inner().into_iter().max() {
            Some(i) => buckets[i].push(c),
            None => always.push(c),
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        let empty: Vec<V> = Vec::new();
        if always.iter().all(|c| c(&|i| empty[i])) {
            out.push(empty);
        }
        return out;
    }
    let mut tab: Vec<V> = probe.to_vec();
    let mut pos = vec![0usize; n];
    let mut i = 0;
    loop {
        if pos[i] == domains[i].len() {
            pos[i] = 0;
            if i == 0 {
                break;
            }
            i -= 1;
            pos[i] += 1;
            continue;
        }
        tab[i] = domains[i][pos[i]];
        let t = &tab;
        if buckets[i].iter().all(|c| c(&|k| t[k])) {
            if i + 1 == n {
                out.push(tab.clone());
                pos[i] += 1;
            } else {
                i += 1;
            }
        } else {
            pos[i] += 1;
        }
    }
    out
}

/// Module-side centre pieces: `γ_(u,a)(y, 1_a) = (m, y')` per variable,
/// extended to `γ_(u,a)(x, k) = (k m, h(k) y')` and subject to the unit,
/// naturality in `a` and `u`, invertibility and multiplicativity.
pub fn module_side(inst: &CpModInstance) -> Vec<Vec<(usize, usize)>> {
    let (g, h, u) = (&inst.g, &inst.h, &inst.u);
    let na = g.n_obj();
    let vars = Vars::new(h);
    let var = |uu: usize, a: usize, y: usize| vars.of(na, uu, a, y);
    let domains: Vec<Vec<(usize, usize)>> = vars
        .list
        .iter()
        .map(|&(uu, a, _)| g.hom(a, a).iter().flat_map(|&m| (0..h.size(uu, a)).map(move |y| (m, y))).collect())
        .collect();
    let probe: Vec<(usize, usize)> = vars.list.iter().map(|&(_, a, y)| (g.idn(a), y)).collect();
    // γ_(u,a)(x, k) for x ∈ h(u, c), k: a → c.
    let gamma = move |get: &dyn Fn(usize) -> (usize, usize), uu: usize, a: usize, x: usize, k: usize| {
        let y0 = h.right(g.inv(k), uu, x);
        let (m, y1) = get(var(uu, a, y0));
        (g.compose(k, m), h.right(k, uu, y1))
    };
    let mut checks: Vec<Check<'_, (usize, usize)>> = Vec::new();
    for (i, &(_, _, y)) in vars.list.iter().enumerate() {
        checks.push(Box::new(move |get| get(i).1 == y));
    }
    for uu in 0..u.n_obj() {
        for a in 0..na {
            for y in 0..h.size(uu, a) {
                for gm in (0..g.n_mor()).filter(|&m| g.tgt(m) == a) {
                    let a1 = g.src(gm);
                    checks.push(Box::new(move |get| {
                        let (m, y1) = gamma(get, uu, a, y, g.idn(a));
                        gamma(get, uu, a1, y, gm) == (g.compose(m, gm), y1)
                    }));
                }
                for beta in (0..u.n_mor()).filter(|&b| u.tgt(b) == uu) {
                    checks.push(Box::new(move |get| {
                        let (m, y1) = gamma(get, uu, a, y, g.idn(a));
                        gamma(get, u.src(beta), a, h.left(beta, a, y), g.idn(a)) == (m, h.left(beta, a, y1))
                    }));
                }
            }
            for c in 0..na {
                checks.push(Box::new(move |get| {
                    let mut seen = BTreeSet::new();
                    (0..h.size(uu, c)).all(|x| g.hom(a, c).iter().all(|&k| seen.insert(gamma(get, uu, a, x, k))))
                }));
            }
        }
        for c in 0..na {
            for c1 in 0..na {
                for x in 0..h.size(uu, c1) {
                    for &l in g.hom(c, c1) {
                        for a in 0..na {
                            for &k1 in g.hom(a, c) {
                                for b in 0..na {
                                    for &k2 in g.hom(b, c) {
                                        checks.push(Box::new(move |get| {
                                            let (v, x1) = gamma(get, uu, a, x, g.compose(l, k1));
                                            let (w, x2) = gamma(get, uu, b, x1, g.compose(l, k2));
                                            let (n, x3) = gamma(get, uu, c, x, l);
                                            (v, w, x2) == (g.compose(n, k1), g.compose(n, k2), x3)
                                        }));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    search(&domains, &probe, checks)
}

/// Functor-side gradings `δ_(u,c): h(u, c) → 𝒢(c, c)`, dinatural in `c` and
/// natural in `u`.
pub fn functor_side(inst: &CpModInstance) -> Vec<Vec<usize>> {
    let (g, h, u) = (&inst.g, &inst.h, &inst.u);
    let na = g.n_obj();
    let vars = Vars::new(h);
    let domains: Vec<Vec<usize>> = vars.list.iter().map(|&(_, c, _)| g.hom(c, c).to_vec()).collect();
    let probe: Vec<usize> = vars.list.iter().map(|&(_, c, _)| g.idn(c)).collect();
    let mut checks: Vec<Check<'_, usize>> = Vec::new();
    for &(uu, c, x) in &vars.list {
        let i = vars.of(na, uu, c, x);
        for gm in g.out_of(c) {
            let j = vars.of(na, uu, g.tgt(gm), h.right(gm, uu, x));
            checks.push(Box::new(move |get| get(j) == g.conj(gm, get(i))));
        }
        for beta in (0..u.n_mor()).filter(|&b| u.tgt(b) == uu) {
            let j = vars.of(na, u.src(beta), c, h.left(beta, c, x));
            checks.push(Box::new(move |get| get(j) == get(i)));
        }
    }
    search(&domains, &probe, checks)
}

/// `γ̂_(u,F)(x, v) = (F(δ x) v, x)` checked on every functor of `family`:
/// naturality in `c`, `u` and along Yoneda maps, unit, multiplicativity
/// and invertibility.
fn functor_axioms(inst: &CpModInstance, delta: &[usize], family: &TestFamily) -> std::result::Result<(), String> {
    let (g, h, u) = (&inst.g, &inst.h, &inst.u);
    let na = g.n_obj();
    let vars = Vars::new(h);
    let d = |uu: usize, c: usize, x: usize| delta[vars.of(na, uu, c, x)];
    let gh = |f: &SetFunctor, uu: usize, c: usize, x: usize, v: usize| (f.act(d(uu, c, x), v), x);
    for (fi, f) in family.functors.iter().enumerate() {
        for uu in 0..u.n_obj() {
            for c in 0..na {
                let mut seen = BTreeSet::new();
                for x in 0..h.size(uu, c) {
                    for v in 0..f.sizes[c] {
                        let (v1, x1) = gh(f, uu, c, x, v);
                        if !seen.insert((v1, x1)) {
                            return Err(format!("γ̂ not invertible at F={fi} u={uu} c={c}"));
                        }
                        for gm in g.out_of(c) {
                            let lhs = gh(f, uu, g.tgt(gm), h.right(gm, uu, x), f.act(gm, v));
                            if lhs != (f.act(gm, v1), h.right(gm, uu, x1)) {
                                return Err(format!("γ̂ not natural in c at F={fi} g={gm} x={x}"));
                            }
                        }
                        for beta in (0..u.n_mor()).filter(|&b| u.tgt(b) == uu) {
                            let lhs = gh(f, u.src(beta), c, h.left(beta, c, x), v);
                            if lhs != (v1, h.left(beta, c, x1)) {
                                return Err(format!("γ̂ not natural in u at F={fi} β={beta} x={x}"));
                            }
                        }
                        if fi == family.terminal && (v1, x1) != (v, x) {
                            return Err(format!("unit fails at u={uu} x={x}"));
                        }
                    }
                }
            }
        }
    }
    for (c0, &ri) in family.representable.iter().enumerate() {
        let r = &family.functors[ri];
        for f in &family.functors {
            for w in 0..f.sizes[c0] {
                for uu in 0..u.n_obj() {
                    for c in 0..na {
                        for x in 0..h.size(uu, c) {
                            for (ki, &k) in g.hom(c0, c).iter().enumerate() {
                                let (k1, x1) = gh(r, uu, c, x, ki);
                                let lhs = gh(f, uu, c, x, f.act(k, w));
                                if lhs != (f.act(g.hom(c0, c)[k1], w), x1) {
                                    return Err(format!("γ̂ not natural along the element {w} at {c0}"));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for &(i, j, k) in &family.products {
        let (fi, fj, fk) = (&family.functors[i], &family.functors[j], &family.functors[k]);
        for uu in 0..u.n_obj() {
            for c in 0..na {
                for x in 0..h.size(uu, c) {
                    for v in 0..fi.sizes[c] {
                        for w in 0..fj.sizes[c] {
                            let (v1, x1) = gh(fi, uu, c, x, v);
                            let (w1, x2) = gh(fj, uu, c, x1, w);
                            if gh(fk, uu, c, x, v * fj.sizes[c] + w) != (v1 * fj.sizes[c] + w1, x2) {
                                return Err(format!("multiplicativity fails at ({i}, {j}) x={x}"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Both enumerations, the functor-side axioms of every grading on the
/// standard family, and restriction `δ ↦ ((u, a, y) ↦ (δ y, y))` as a
/// bijection onto the module-side solutions.
pub fn cp_modcat_instance(inst: &CpModInstance) -> Result<Report> {
    if **inst.h.dom() != **inst.g.cat() || *inst.h.cod() != inst.u {
        return Err(Error::Mismatch("module is not 𝒢 ⇸ U".into()));
    }
    let family = TestFamily::standard(&inst.g)?;
    let ms = module_side(inst);
    let fs = functor_side(inst);
    let mut report = Report::new("cp-modcat");
    report.fact("module_side.count", ms.len());
    report.fact("functor_side.count", fs.len());
    report.check(
        "functor_side.axioms",
        fs.iter().try_for_each(|delta| functor_axioms(inst, delta, &family)),
    );
    let vars = Vars::new(&inst.h);
    let restricted: BTreeSet<Vec<(usize, usize)>> = fs
        .iter()
        .map(|delta| vars.list.iter().zip(delta).map(|(&(_, _, y), &m)| (m, y)).collect())
        .collect();
    let module: BTreeSet<Vec<(usize, usize)>> = ms.into_iter().collect();
    report.check(
        "restriction.bijective",
        if restricted.len() != fs.len() {
            Err("restriction is not injective".into())
        } else if restricted != module {
            let missing = module.symmetric_difference(&restricted).next().map(|t| format!("{t:?}"));
            Err(format!("restriction misses {}", missing.unwrap_or_default()))
        } else {
            Ok(())
        },
    );
    Ok(report)
}
