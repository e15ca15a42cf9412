/// Disjoint-set forest used for coend quotients.
///
/// Unions always keep the smaller index as root, so after all unions the root
/// of every class is its minimum member. Callers rely on this to pick
/// canonical representatives without a second pass.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        Self { parent: (0..len).collect() }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
    }

    /// Dense class labels ordered by minimum member, plus each class's minimum.
    pub fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut out = vec![0; n];
        for i in 0..n {
            let r = self.find(i);
            if label[r] == usize::MAX {
                label[r] = reps.len();
                reps.push(r);
            }
            out[i] = label[r];
        }
        (out, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_are_minimum_members() {
        let mut uf = UnionFind::new(6);
        uf.union(5, 3);
        uf.union(3, 4);
        uf.union(1, 2);
        let (label, reps) = uf.classes();
        assert_eq!(reps, vec![0, 1, 3]);
        assert_eq!(label, vec![0, 1, 1, 2, 2, 2]);
    }
}
