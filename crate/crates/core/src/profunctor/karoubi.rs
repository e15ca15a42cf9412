//! The idempotent-splitting completion.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCat, FinFunctor};

/// `QA` together with the embedding `N: A → QA`.
#[derive(Clone, Debug)]
pub struct Karoubi {
    pub qa: Arc<FinCat>,
    pub embedding: FinFunctor,
    /// Object `i` of `QA` is `objects[i] = (a, e)`.
    pub objects: Vec<(usize, usize)>,
    /// Morphism `k` of `QA` is the underlying morphism `underlying[k]` of `A`.
    pub underlying: Vec<usize>,
}

pub fn karoubi(a: &Arc<FinCat>) -> Result<Karoubi> {
    let mut objects = Vec::new();
    // Identities first so that `N` is the prefix of objects with `e = idn`.
    for x in 0..a.n_obj() {
        objects.push((x, a.idn(x)));
    }
    for x in 0..a.n_obj() {
        for &e in a.hom(x, x) {
            if e != a.idn(x) && a.compose(e, e) == e {
                objects.push((x, e));
            }
        }
    }
    let (mut src, mut tgt, mut underlying) = (Vec::new(), Vec::new(), Vec::new());
    let mut lookup = std::collections::BTreeMap::new();
    for (i, &(x, e)) in objects.iter().enumerate() {
        for (j, &(y, e1)) in objects.iter().enumerate() {
            for &f in a.hom(x, y) {
                if a.compose_all(&[e1, f, e]) == f {
                    lookup.insert((i, j, f), src.len());
                    src.push(i);
                    tgt.push(j);
                    underlying.push(f);
                }
            }
        }
    }
    let idn: Vec<usize> = objects.iter().enumerate().map(|(i, &(_, e))| lookup[&(i, i, e)]).collect();
    let qa = FinCat::new(objects.len(), src.clone(), tgt.clone(), idn, |g, f| {
        lookup[&(src[f], tgt[g], a.compose(underlying[g], underlying[f]))]
    })?;
    let qa = Arc::new(qa);
    let obj_map: Vec<usize> = (0..a.n_obj()).collect();
    let mor_map: Vec<usize> = (0..a.n_mor()).map(|f| lookup[&(a.src(f), a.tgt(f), f)]).collect();
    let embedding = FinFunctor::new(a.clone(), qa.clone(), obj_map, mor_map)?;
    let k = Karoubi { qa, embedding, objects, underlying };
    k.verify()?;
    Ok(k)
}

impl Karoubi {
    /// Every idempotent splits and `N` is fully faithful.
    pub fn verify(&self) -> Result<()> {
        let q = &self.qa;
        for x in 0..q.n_obj() {
            for &e in q.hom(x, x) {
                if q.compose(e, e) != e {
                    continue;
                }
                let split = (0..q.n_obj()).any(|y| {
                    q.hom(x, y).iter().any(|&r| {
                        q.hom(y, x).iter().any(|&s| q.compose(r, s) == q.idn(y) && q.compose(s, r) == e)
                    })
                });
                if !split {
                    return Err(Error::InvalidCategory(format!("idempotent {e} on object {x} does not split")));
                }
            }
        }
        if !self.embedding.is_fully_faithful() {
            return Err(Error::InvalidFunctor("embedding into the completion is not fully faithful".into()));
        }
        Ok(())
    }
}
