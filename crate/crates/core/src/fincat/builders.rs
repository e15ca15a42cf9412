use super::{FinCat, FinGroupoid};
use crate::error::{Error, Result};

/// A finite group as a multiplication table, `mul[g][h] = g·h`, with
/// element 0 the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub mul: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order 0");
        GroupTable { mul: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
    }

    /// Permutations of `0..n` in lexicographic order; `g·h = g ∘ h`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.binary_search(p).expect("permutation listed");
        let mul = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index(&h.iter().map(|&i| g[i]).collect()))
                    .collect()
            })
            .collect();
        GroupTable { mul }
    }

    /// Dihedral group of order `2n`; element `e*n + k` is `r^k s^e`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n > 0, "dihedral group needs n ≥ 1");
        let enc = |k: usize, e: usize| e * n + k;
        let mul = (0..2 * n)
            .map(|x| {
                let (e1, k1) = (x / n, x % n);
                (0..2 * n)
                    .map(|y| {
                        let (e2, k2) = (y / n, y % n);
                        let k = if e1 == 0 { k1 + k2 } else { k1 + n - k2 };
                        enc(k % n, (e1 + e2) % 2)
                    })
                    .collect()
            })
            .collect();
        GroupTable { mul }
    }

    /// `C2 × C2`, element `2a + b`.
    pub fn klein() -> Self {
        GroupTable {
            mul: (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect(),
        }
    }

    /// Sign of each element of `symmetric(n)` as an element of `C2`.
    pub fn sign_map(n: usize) -> Vec<usize> {
        permutations(n)
            .iter()
            .map(|p| {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| p[i] > p[j])
                    .count();
                inversions % 2
            })
            .collect()
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Builder descriptions accepted by [`GroupoidSpec::build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupoidSpec {
    Table {
        n_obj: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        comp: Vec<(usize, usize, usize)>,
    },
    Cyclic(usize),
    Symmetric(usize),
    Dihedral(usize),
    Klein,
    Delooping(GroupTable),
    /// `act[g][x] = g·x`.
    Action { group: GroupTable, act: Vec<Vec<usize>> },
    DisjointGroups(Vec<GroupTable>),
}

impl GroupoidSpec {
    pub fn build(&self) -> Result<FinGroupoid> {
        match self {
            GroupoidSpec::Table { n_obj, src, tgt, comp } => {
                FinGroupoid::from_cat(FinCat::from_table(*n_obj, src.clone(), tgt.clone(), comp)?)
            }
            GroupoidSpec::Cyclic(n) => delooping(&GroupTable::cyclic(*n)),
            GroupoidSpec::Symmetric(n) => delooping(&GroupTable::symmetric(*n)),
            GroupoidSpec::Dihedral(n) => delooping(&GroupTable::dihedral(*n)),
            GroupoidSpec::Klein => delooping(&GroupTable::klein()),
            GroupoidSpec::Delooping(t) => delooping(t),
            GroupoidSpec::Action { group, act } => action_groupoid(group, act),
            GroupoidSpec::DisjointGroups(ts) => {
                let mut acc = FinGroupoid::empty();
                for t in ts {
                    acc = acc.coproduct(&delooping(t)?);
                }
                Ok(acc)
            }
        }
    }
}

/// One-object groupoid of a group; `g ∘ f = g·f`.
pub fn delooping(t: &GroupTable) -> Result<FinGroupoid> {
    let n = t.order();
    if n == 0 || t.mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
        return Err(Error::InvalidCategory("malformed group table".into()));
    }
    let cat = FinCat::from_table(
        1,
        vec![0; n],
        vec![0; n],
        &(0..n)
            .flat_map(|g| (0..n).map(move |f| (g, f)))
            .map(|(g, f)| (g, f, t.mul[g][f]))
            .collect::<Vec<_>>(),
    )?;
    if cat.idn(0) != 0 {
        return Err(Error::InvalidCategory("element 0 must be the identity".into()));
    }
    FinGroupoid::from_cat(cat)
}

/// Action groupoid: objects are points, morphism `g*n + x` goes `x → g·x`.
pub fn action_groupoid(t: &GroupTable, act: &[Vec<usize>]) -> Result<FinGroupoid> {
    let order = t.order();
    let n = act.first().map_or(0, |r| r.len());
    if act.len() != order || act.iter().any(|r| r.len() != n || r.iter().any(|&y| y >= n)) {
        return Err(Error::InvalidCategory("malformed action table".into()));
    }
    let mut src = Vec::with_capacity(order * n);
    let mut tgt = Vec::with_capacity(order * n);
    let mut comp = Vec::new();
    for g in 0..order {
        for x in 0..n {
            src.push(x);
            tgt.push(act[g][x]);
        }
    }
    for g in 0..order {
        for x in 0..n {
            let y = act[g][x];
            for h in 0..order {
                comp.push((h * n + y, g * n + x, t.mul[h][g] * n + x));
            }
        }
    }
    FinGroupoid::from_cat(FinCat::from_table(n, src, tgt, &comp)?)
}
