use std::sync::Arc;

use super::{FinCat, FinFunctor, FunctorIso};

/// Functors `F: C → D`, `G: D → C` with natural isomorphisms
/// `unit: id_C ⇒ G∘F` and `counit: F∘G ⇒ id_D`.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub forward: FinFunctor,
    pub backward: FinFunctor,
    pub unit: FunctorIso,
    pub counit: FunctorIso,
}

impl EquivalenceWitness {
    pub fn verify(&self) -> bool {
        let c = self.forward.dom.clone();
        let d = self.forward.cod.clone();
        let (Ok(gf), Ok(fg)) = (self.forward.then(&self.backward), self.backward.then(&self.forward)) else {
            return false;
        };
        self.unit.verify(&FinFunctor::identity(c), &gf).is_ok()
            && self.counit.verify(&fg, &FinFunctor::identity(d)).is_ok()
    }
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    Witness(Box<EquivalenceWitness>),
    /// No equivalence; the string names the distinguishing invariant.
    Distinct(String),
}

impl Equivalence {
    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            Equivalence::Witness(w) => Some(w),
            Equivalence::Distinct(_) => None,
        }
    }

    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Witness(_))
    }
}

/// For every object: its class representative (minimum isomorphic object),
/// an isomorphism into the representative and its inverse.
pub fn iso_classes(c: &FinCat) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let n = c.n_obj();
    let mut rep = vec![usize::MAX; n];
    let mut to_rep = vec![usize::MAX; n];
    let mut from_rep = vec![usize::MAX; n];
    for x in 0..n {
        for r in 0..=x {
            if r == x {
                (rep[x], to_rep[x], from_rep[x]) = (x, c.idn(x), c.idn(x));
                break;
            }
            if rep[r] != r {
                continue;
            }
            let found = c.hom(x, r).iter().find_map(|&f| c.inverse_of(f).map(|g| (f, g)));
            if let Some((f, g)) = found {
                rep[x] = r;
                to_rep[x] = f;
                from_rep[x] = g;
                break;
            }
        }
    }
    (rep, to_rep, from_rep)
}

fn skeleton(c: &FinCat) -> (Vec<usize>, FinCat, Vec<usize>) {
    let (rep, _, _) = iso_classes(c);
    let reps: Vec<usize> = (0..c.n_obj()).filter(|&x| rep[x] == x).collect();
    let (sk, emb) = c.full_subcategory(&reps);
    (reps, sk, emb)
}

fn hom_profile(c: &FinCat) -> Vec<usize> {
    let mut p: Vec<usize> = (0..c.n_obj())
        .flat_map(|a| (0..c.n_obj()).map(move |b| (a, b)))
        .map(|(a, b)| c.hom(a, b).len())
        .collect();
    p.sort_unstable();
    p
}

/// Period signature of an endomorphism: (tail length, cycle length) of its
/// powers.
fn power_signature(c: &FinCat, f: usize) -> (usize, usize) {
    let mut seen = vec![f];
    let mut cur = f;
    loop {
        cur = c.compose(f, cur);
        if let Some(i) = seen.iter().position(|&x| x == cur) {
            return (i, seen.len() - i);
        }
        seen.push(cur);
    }
}

struct IsoSearch<'a> {
    c: &'a FinCat,
    d: &'a FinCat,
    obj: Vec<usize>,
}

impl IsoSearch<'_> {
    fn objects(&mut self, i: usize, used: &mut [bool]) -> Option<Vec<usize>> {
        let n = self.c.n_obj();
        if i == n {
            let mut mor = vec![usize::MAX; self.c.n_mor()];
            let mut used_m = vec![false; self.d.n_mor()];
            return self.morphisms(0, &mut mor, &mut used_m);
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            self.obj[i] = cand;
            let ok = (0..=i).all(|j| {
                self.c.hom(i, j).len() == self.d.hom(cand, self.obj[j]).len()
                    && self.c.hom(j, i).len() == self.d.hom(self.obj[j], cand).len()
            });
            if ok {
                used[cand] = true;
                if let Some(m) = self.objects(i + 1, used) {
                    return Some(m);
                }
                used[cand] = false;
            }
        }
        None
    }

    /// Closes a partial morphism assignment under composition; false on conflict.
    fn close(&self, mor: &mut [usize], used: &mut [bool], trail: &mut Vec<usize>) -> bool {
        let (c, d) = (self.c, self.d);
        loop {
            let mut changed = false;
            for f in 0..c.n_mor() {
                if mor[f] == usize::MAX {
                    continue;
                }
                for g in c.out_of(c.tgt(f)) {
                    if mor[g] == usize::MAX {
                        continue;
                    }
                    let gf = c.compose(g, f);
                    let img = d.compose(mor[g], mor[f]);
                    if mor[gf] == usize::MAX {
                        if used[img] {
                            return false;
                        }
                        mor[gf] = img;
                        used[img] = true;
                        trail.push(gf);
                        changed = true;
                    } else if mor[gf] != img {
                        return false;
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn morphisms(&self, start: usize, mor: &mut Vec<usize>, used: &mut Vec<bool>) -> Option<Vec<usize>> {
        let (c, d) = (self.c, self.d);
        if start == 0 {
            for a in 0..c.n_obj() {
                let (e, img) = (c.idn(a), d.idn(self.obj[a]));
                mor[e] = img;
                used[img] = true;
            }
        }
        let Some(f) = (start..c.n_mor()).find(|&f| mor[f] == usize::MAX) else {
            return Some(mor.clone());
        };
        let (a, b) = (c.src(f), c.tgt(f));
        let endo_sig = (a == b).then(|| power_signature(c, f));
        for &cand in d.hom(self.obj[a], self.obj[b]) {
            if used[cand] || endo_sig.is_some_and(|s| s != power_signature(d, cand)) {
                continue;
            }
            let mut trail = vec![f];
            mor[f] = cand;
            used[cand] = true;
            if self.close(mor, used, &mut trail) {
                if let Some(m) = self.morphisms(f + 1, mor, used) {
                    return Some(m);
                }
            }
            for t in trail {
                used[mor[t]] = false;
                mor[t] = usize::MAX;
            }
        }
        None
    }
}

/// Searches for an equivalence `C ≃ D` through skeletons.
pub fn check_equivalence(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Equivalence {
    let (c_reps, c_sk, c_emb) = skeleton(c);
    let (d_reps, d_sk, d_emb) = skeleton(d);
    if c_reps.len() != d_reps.len() {
        return Equivalence::Distinct(format!(
            "iso-class count {} vs {}",
            c_reps.len(),
            d_reps.len()
        ));
    }
    let (pc, pd) = (hom_profile(&c_sk), hom_profile(&d_sk));
    if pc != pd {
        return Equivalence::Distinct(format!("hom-set cardinality profile {pc:?} vs {pd:?}"));
    }
    let mut search = IsoSearch { c: &c_sk, d: &d_sk, obj: vec![0; c_sk.n_obj()] };
    let Some(sk_mor) = search.objects(0, &mut vec![false; c_sk.n_obj()]) else {
        return Equivalence::Distinct("no isomorphism between skeletons".into());
    };
    let sk_obj = search.obj.clone();
    let inv_obj: Vec<usize> = {
        let mut v = vec![0; sk_obj.len()];
        for (i, &j) in sk_obj.iter().enumerate() {
            v[j] = i;
        }
        v
    };
    let inv_mor: Vec<usize> = {
        let mut v = vec![0; sk_mor.len()];
        for (i, &j) in sk_mor.iter().enumerate() {
            v[j] = i;
        }
        v
    };
    let forward = transfer(c, &c_reps, &c_emb, d, &d_reps, &d_emb, &sk_obj, &sk_mor);
    let backward = transfer(d, &d_reps, &d_emb, c, &c_reps, &c_emb, &inv_obj, &inv_mor);
    let (_, c_to, _) = iso_classes(c);
    let (_, _, d_from) = iso_classes(d);
    let w = EquivalenceWitness {
        forward,
        backward,
        unit: FunctorIso { components: c_to },
        counit: FunctorIso { components: d_from },
    };
    debug_assert!(w.verify());
    Equivalence::Witness(Box::new(w))
}

/// Builds `C → skel C ≅ skel D ↪ D`.
#[allow(clippy::too_many_arguments)]
fn transfer(
    c: &Arc<FinCat>,
    c_reps: &[usize],
    c_emb: &[usize],
    d: &Arc<FinCat>,
    d_reps: &[usize],
    d_emb: &[usize],
    sk_obj: &[usize],
    sk_mor: &[usize],
) -> FinFunctor {
    let (rep, to_rep, from_rep) = iso_classes(c);
    let rep_pos = |x: usize| c_reps.binary_search(&rep[x]).unwrap();
    let obj_map = (0..c.n_obj()).map(|x| d_reps[sk_obj[rep_pos(x)]]).collect();
    let mor_map = (0..c.n_mor())
        .map(|f| {
            let (x, y) = (c.src(f), c.tgt(f));
            let in_rep = c.compose_all(&[to_rep[y], f, from_rep[x]]);
            let sk = c_emb.binary_search(&in_rep).unwrap();
            d_emb[sk_mor[sk]]
        })
        .collect();
    FinFunctor::new(c.clone(), d.clone(), obj_map, mor_map).expect("transferred functor")
}
