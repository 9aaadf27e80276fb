/// Disjoint-set forest with union by rank and path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            rank: vec![0; n],
            sets: n,
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Number of disjoint sets.
    pub fn set_count(&self) -> usize {
        self.sets
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            let grand = self.parent[self.parent[x]];
            self.parent[x] = grand;
            x = grand;
        }
        x
    }

    /// Merges the sets of `a` and `b` and returns the root of the result.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        self.link(ra, rb)
    }

    /// Links two distinct roots.
    pub(crate) fn link(&mut self, ra: usize, rb: usize) -> usize {
        debug_assert!(ra != rb && self.parent[ra] == ra && self.parent[rb] == rb);
        self.sets -= 1;
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => {
                self.parent[ra] = rb;
                rb
            }
            std::cmp::Ordering::Greater => {
                self.parent[rb] = ra;
                ra
            }
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
                ra
            }
        }
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn union_joins_and_find_is_idempotent(
            n in 1usize..40,
            ops in prop::collection::vec((0usize..40, 0usize..40), 0..60),
        ) {
            let mut uf = UnionFind::new(n);
            let mut naive: Vec<usize> = (0..n).collect();
            for (a, b) in ops {
                let (a, b) = (a % n, b % n);
                uf.union(a, b);
                prop_assert!(uf.same(a, b));
                let (la, lb) = (naive[a], naive[b]);
                for l in naive.iter_mut() {
                    if *l == lb { *l = la; }
                }
            }
            for x in 0..n {
                let r = uf.find(x);
                prop_assert_eq!(uf.find(r), r);
                for y in 0..n {
                    prop_assert_eq!(uf.same(x, y), naive[x] == naive[y]);
                }
            }
            let mut labels = naive.clone();
            labels.sort_unstable();
            labels.dedup();
            prop_assert_eq!(uf.set_count(), labels.len());
        }
    }
}
