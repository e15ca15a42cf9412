//! Exhaustive coherence checks for promonoidal structures.

use super::{l3_spec, lu_spec, r3_spec, ru_spec, tuples, Promonoidal};
use crate::coend::{CoendSpec, Term, Ternary, Var};
use crate::fincat::SetFunctor;
use crate::report::Report;

use Var::{Bound as B, Free as F};

type Outcome = std::result::Result<(), String>;

fn bijective(maps: &[Vec<usize>], targets: impl Fn(usize) -> usize, what: &str) -> Outcome {
    for (i, m) in maps.iter().enumerate() {
        if !crate::fincat::functor_is_bijection(m, targets(i)) {
            return Err(format!("{what} at index {i} is not a bijection"));
        }
    }
    Ok(())
}

fn inverse(maps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    maps.iter().map(|m| crate::fincat::functor_invert(m)).collect()
}

/// Re-verifies a promonoidal structure and returns one entry per equation.
pub fn check_promonoidal(pr: &Promonoidal) -> Report {
    let mut r = Report::new("promonoidal");
    let n = pr.n();
    let base = &pr.base;
    let ok_shape = pr.assoc.len() == pr.l3.len()
        && pr.assoc.iter().zip(&pr.l3).all(|(m, t)| m.len() == t.len());
    let assoc_bij = ok_shape && r.check("assoc.bijective", bijective(&pr.assoc, |i| pr.r3[i].len(), "associator"));
    if !ok_shape {
        r.fail("assoc.bijective", "associator has the wrong shape");
    }
    let lu_bij = r.check(
        "unit.left.bijective",
        bijective(&pr.left_unit, |i| base.hom(i / n, i % n).len(), "left unit"),
    );
    let ru_bij = r.check(
        "unit.right.bijective",
        bijective(&pr.right_unit, |i| base.hom(i / n, i % n).len(), "right unit"),
    );
    let t = Ternary(&pr.p);
    let (ls, rs) = (l3_spec(&t, base), r3_spec(&t, base));
    if assoc_bij {
        let natural = r.check("assoc.natural", assoc_natural(pr, &ls, &rs));
        let reps = if natural { iso_representatives(base) } else { (0..n).collect() };
        r.check("pentagon", pentagon(pr, &rs, &reps));
    } else {
        r.skip("assoc.natural");
        r.skip("pentagon");
    }
    let (lus, rus) = (lu_spec(&t, &pr.j, base), ru_spec(&t, &pr.j, base));
    if lu_bij && ru_bij {
        r.check("unit.left.natural", unit_natural(pr, &lus, &pr.lu, &pr.left_unit));
        r.check("unit.right.natural", unit_natural(pr, &rus, &pr.ru, &pr.right_unit));
    } else {
        r.skip("unit.left.natural");
        r.skip("unit.right.natural");
    }
    if assoc_bij && lu_bij && ru_bij {
        r.check("triangle", triangle(pr));
    } else {
        r.skip("triangle");
    }
    if let Some(g) = &pr.braiding {
        let bij = r.check(
            "braiding.bijective",
            bijective(g, |i| pr.p_size((i / n) % n, i / (n * n), i % n), "braiding"),
        );
        r.check("braiding.natural", braiding_natural(pr, g));
        if bij && assoc_bij {
            r.check("hexagon.1", hexagon1(pr, g));
            r.check("hexagon.2", hexagon2(pr, g));
        } else {
            r.skip("hexagon.1");
            r.skip("hexagon.2");
        }
    }
    if let Some(tw) = &pr.twist {
        r.check("twist.natural", twist_natural(pr, tw));
        match &pr.braiding {
            Some(g) => {
                r.check("twist.square", twist_square(pr, g, tw));
            }
            None => r.skip("twist.square"),
        }
    }
    r
}

fn assoc_natural(pr: &Promonoidal, ls: &CoendSpec, rs: &CoendSpec) -> Outcome {
    let base = &pr.base;
    let mut out = Ok(());
    tuples(pr.n(), 4, |fr| {
        if out.is_err() {
            return;
        }
        let i = pr.idx4(fr[0], fr[1], fr[2], fr[3]);
        for v in 0..4 {
            for f in 0..base.n_mor() {
                let here = if v == 3 { base.src(f) } else { base.tgt(f) };
                if here != fr[v] || base.is_identity(f) {
                    continue;
                }
                let mut to = fr.to_vec();
                to[v] = if v == 3 { base.tgt(f) } else { base.src(f) };
                let j = pr.idx4(to[0], to[1], to[2], to[3]);
                for k in 0..pr.l3[i].len() {
                    let lhs = pr.assoc[j][ls.act_free(v, f, &pr.l3[i], &pr.l3[j], k)];
                    let rhs = rs.act_free(v, f, &pr.r3[i], &pr.r3[j], pr.assoc[i][k]);
                    if lhs != rhs {
                        out = Err(format!("associator not natural in variable {v} at {f} on class {k} over {fr:?}"));
                        return;
                    }
                }
            }
        }
    });
    out
}

fn unit_natural(pr: &Promonoidal, spec: &CoendSpec, tables: &[crate::coend::CoendTable], map: &[Vec<usize>]) -> Outcome {
    let base = &pr.base;
    let n = pr.n();
    for a in 0..n {
        for b in 0..n {
            let i = a * n + b;
            for f in 0..base.n_mor() {
                if base.is_identity(f) {
                    continue;
                }
                // Contravariant in a: f: a' → a.
                if base.tgt(f) == a {
                    let j = base.src(f) * n + b;
                    for k in 0..tables[i].len() {
                        let lhs = map[j][spec.act_free(0, f, &tables[i], &tables[j], k)];
                        let h = base.hom(a, b)[map[i][k]];
                        if base.hom(base.src(f), b)[lhs] != base.compose(h, f) {
                            return Err(format!("unit constraint not natural in first variable at {f} over ({a}, {b})"));
                        }
                    }
                }
                if base.src(f) == b {
                    let j = a * n + base.tgt(f);
                    for k in 0..tables[i].len() {
                        let lhs = map[j][spec.act_free(1, f, &tables[i], &tables[j], k)];
                        let h = base.hom(a, b)[map[i][k]];
                        if base.hom(a, base.tgt(f))[lhs] != base.compose(f, h) {
                            return Err(format!("unit constraint not natural in second variable at {f} over ({a}, {b})"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Applies the associator to a raw `L3` element, returning the `R3`
/// representative `(x', q1, q2)`.
fn alpha(pr: &Promonoidal, f: [usize; 4], x: usize, p1: usize, p2: usize) -> (usize, usize, usize) {
    let i = pr.idx4(f[0], f[1], f[2], f[3]);
    pr.r3[i].rep2(pr.assoc[i][pr.l3[i].class2(x, p1, p2)])
}

fn alpha_inv(pr: &Promonoidal, inv: &[Vec<usize>], f: [usize; 4], x: usize, q1: usize, q2: usize) -> (usize, usize, usize) {
    let i = pr.idx4(f[0], f[1], f[2], f[3]);
    pr.l3[i].rep2(inv[i][pr.r3[i].class2(x, q1, q2)])
}

/// `R3(b, c, d; -)` as a functor of its last variable.
fn r3_functor(pr: &Promonoidal, rs: &CoendSpec, b: usize, c: usize, d: usize) -> SetFunctor {
    let base = &pr.base;
    let sizes = (0..pr.n()).map(|z| pr.r3(b, c, d, z).len()).collect();
    let action = (0..base.n_mor())
        .map(|f| {
            let (s, t) = (pr.r3(b, c, d, base.src(f)), pr.r3(b, c, d, base.tgt(f)));
            (0..s.len()).map(|k| rs.act_free(3, f, s, t, k)).collect()
        })
        .collect();
    SetFunctor::new(base.clone(), sizes, action).expect("coend of functors is a functor")
}

/// One object from each isomorphism class.
fn iso_representatives(base: &crate::fincat::FinCat) -> Vec<usize> {
    (0..base.n_obj())
        .filter(|&o| (0..o).all(|p| base.hom(p, o).iter().all(|&f| base.inverse_of(f).is_none())))
        .collect()
}

/// Both composites `((ab)c)d → a(b(cd))` land in
/// `∫^z R3(b, c, d; z) × P(a, z; e)`, which is the four-fold coend by Fubini.
/// The starting elements run over representatives of `L3(a, b, c; y)`
/// classes; together with naturality of the associator this covers every
/// class. The outer objects run over `reps`.
fn pentagon(pr: &Promonoidal, rs: &CoendSpec, reps: &[usize]) -> Outcome {
    let n = pr.n();
    let t = Ternary(&pr.p);
    let mut out = Ok(());
    tuples(reps.len(), 3, |bcd| {
        if out.is_err() {
            return;
        }
        let (b, c, d) = (reps[bcd[0]], reps[bcd[1]], reps[bcd[2]]);
        let fam = r3_functor(pr, rs, b, c, d);
        let ff = CoendSpec {
            bound: vec![pr.base.clone()],
            terms: vec![Term::new(&fam, vec![B(0)]), Term::new(&t, vec![F(0), B(0), F(1)])],
        };
        for &a in reps {
            for &e in reps {
                let mut table = None;
                for y in 0..n {
                    let l3 = pr.l3(a, b, c, y);
                    for k in 0..l3.len() {
                        let (x, p1, p2) = l3.rep2(k);
                        for p3 in 0..pr.p_size(y, d, e) {
                            let tb = table.get_or_insert_with(|| ff.eval(&[a, e]));
                            let (x1, q1, q2) = alpha(pr, [a, b, c, y], x, p1, p2);
                            let (z, r1, r2) = alpha(pr, [a, x1, d, e], y, q2, p3);
                            let (w, s1, s2) = alpha(pr, [b, c, d, z], x1, q1, r1);
                            let one = tb.class2(z, pr.r3(b, c, d, z).class2(w, s1, s2), r2);
                            let (w2, t1, t2) = alpha(pr, [x, c, d, e], y, p2, p3);
                            let (z2, u1, u2) = alpha(pr, [a, b, w2, e], x, p1, t2);
                            let two = tb.class2(z2, pr.r3(b, c, d, z2).class2(w2, t1, u1), u2);
                            if one != two {
                                out = Err(format!(
                                    "pentagon fails over {:?} at element (x={x}, y={y}, {p1}, {p2}, {p3})",
                                    [a, b, c, d, e]
                                ));
                                return;
                            }
                        }
                    }
                }
            }
        }
    });
    out
}

fn triangle(pr: &Promonoidal) -> Outcome {
    let n = pr.n();
    let base = &pr.base;
    tuples_result(n, 3, |fr| {
        let (a, b, c) = (fr[0], fr[1], fr[2]);
        for x in 0..n {
            for y in 0..n {
                for jy in 0..pr.j.sizes[y] {
                    for p1 in 0..pr.p_size(a, y, x) {
                        for p2 in 0..pr.p_size(x, b, c) {
                            let (z, q1, q2) = alpha(pr, [a, y, b, c], x, p1, p2);
                            let lt = &pr.lu[b * n + z];
                            let h = base.hom(b, z)[pr.left_unit[b * n + z][lt.class(&[y], &[jy, q1])]];
                            let one = pr.p_left(base.idn(a), h, c, q2);
                            let rt = &pr.ru[a * n + x];
                            let g = base.hom(a, x)[pr.right_unit[a * n + x][rt.class(&[y], &[jy, p1])]];
                            let two = pr.p_left(g, base.idn(b), c, p2);
                            if one != two {
                                return Err(format!(
                                    "triangle fails over ({a}, {b}; {c}) at (x={x}, y={y}, {jy}, {p1}, {p2})"
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })
}

fn tuples_result(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> Outcome) -> Outcome {
    let mut out = Ok(());
    tuples(n, k, |t| {
        if out.is_ok() {
            out = f(t);
        }
    });
    out
}

fn braiding_natural(pr: &Promonoidal, g: &[Vec<usize>]) -> Outcome {
    let base = &pr.base;
    let nm = base.n_mor();
    tuples_result(pr.n(), 3, |fr| {
        let (a, b, c) = (fr[0], fr[1], fr[2]);
        let i = pr.idx3(a, b, c);
        for x in 0..pr.p_size(a, b, c) {
            for h in base.out_of(c) {
                let lhs = g[pr.idx3(a, b, base.tgt(h))][pr.p_right(h, a, b, x)];
                if lhs != pr.p_right(h, b, a, g[i][x]) {
                    return Err(format!("braiding not natural in output at {h} over ({a}, {b}; {c})"));
                }
            }
            for f in (0..nm).filter(|&f| base.tgt(f) == a) {
                for k in (0..nm).filter(|&k| base.tgt(k) == b) {
                    let lhs = g[pr.idx3(base.src(f), base.src(k), c)][pr.p_left(f, k, c, x)];
                    if lhs != pr.p_left(k, f, c, g[i][x]) {
                        return Err(format!("braiding not natural in inputs at ({f}, {k}) over ({a}, {b}; {c})"));
                    }
                }
            }
        }
        Ok(())
    })
}

fn hexagon1(pr: &Promonoidal, g: &[Vec<usize>]) -> Outcome {
    let n = pr.n();
    tuples_result(n, 4, |fr| {
        let (a, b, c, d) = (fr[0], fr[1], fr[2], fr[3]);
        let target = pr.r3(b, c, a, d);
        let ti = pr.idx4(b, c, a, d);
        for x in 0..n {
            for p1 in 0..pr.p_size(a, b, x) {
                for p2 in 0..pr.p_size(x, c, d) {
                    let (x1, q1, q2) = alpha(pr, [a, b, c, d], x, p1, p2);
                    let gq2 = g[pr.idx3(a, x1, d)][q2];
                    let one = pr.assoc[ti][pr.l3(b, c, a, d).class(&[x1], &[q1, gq2])];
                    let gp1 = g[pr.idx3(a, b, x)][p1];
                    let (y, s1, s2) = alpha(pr, [b, a, c, d], x, gp1, p2);
                    let two = target.class(&[y], &[g[pr.idx3(a, c, y)][s1], s2]);
                    if one != two {
                        return Err(format!("first hexagon fails over {fr:?} at (x={x}, {p1}, {p2})"));
                    }
                }
            }
        }
        Ok(())
    })
}

fn hexagon2(pr: &Promonoidal, g: &[Vec<usize>]) -> Outcome {
    let n = pr.n();
    let inv = inverse(&pr.assoc);
    tuples_result(n, 4, |fr| {
        let (a, b, c, d) = (fr[0], fr[1], fr[2], fr[3]);
        let ti = pr.idx4(c, a, b, d);
        let target = pr.l3(c, a, b, d);
        for x in 0..n {
            for q1 in 0..pr.p_size(b, c, x) {
                for q2 in 0..pr.p_size(a, x, d) {
                    let (y, p1, p2) = alpha_inv(pr, &inv, [a, b, c, d], x, q1, q2);
                    let gp2 = g[pr.idx3(y, c, d)][p2];
                    let one = inv[ti][pr.r3(c, a, b, d).class(&[y], &[p1, gp2])];
                    let gq1 = g[pr.idx3(b, c, x)][q1];
                    let (y2, s1, s2) = alpha_inv(pr, &inv, [a, c, b, d], x, gq1, q2);
                    let two = target.class(&[y2], &[g[pr.idx3(a, c, y2)][s1], s2]);
                    if one != two {
                        return Err(format!("second hexagon fails over {fr:?} at (x={x}, {q1}, {q2})"));
                    }
                }
            }
        }
        Ok(())
    })
}

pub(crate) fn twist_natural(pr: &Promonoidal, tw: &[usize]) -> Outcome {
    let base = &pr.base;
    for (a, &t) in tw.iter().enumerate() {
        if base.src(t) != a || base.tgt(t) != a {
            return Err(format!("twist at {a} is not an endomorphism"));
        }
    }
    for f in 0..base.n_mor() {
        if base.compose(f, tw[base.src(f)]) != base.compose(tw[base.tgt(f)], f) {
            return Err(format!("twist not natural at {f}"));
        }
    }
    Ok(())
}

pub(crate) fn twist_square(pr: &Promonoidal, g: &[Vec<usize>], tw: &[usize]) -> Outcome {
    tuples_result(pr.n(), 3, |fr| {
        let (a, b, c) = (fr[0], fr[1], fr[2]);
        for x in 0..pr.p_size(a, b, c) {
            let y = g[pr.idx3(a, b, c)][x];
            let y = pr.p_left(tw[b], tw[a], c, y);
            let lhs = g[pr.idx3(b, a, c)][y];
            if lhs != pr.p_right(tw[c], a, b, x) {
                return Err(format!("twist square fails over ({a}, {b}; {c}) at element {x}"));
            }
        }
        Ok(())
    })
}
