use crate::graph::EdgeWeightedGraph;
use crate::image::GridImage;
use crate::union_find::UnionFind;
use crate::{Level, Result};

/// Labelling of vertices into disjoint components. The label of a
/// component is the smallest vertex id it contains.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    labels: Vec<usize>,
    component_count: usize,
}

impl Partition {
    /// Canonicalises an arbitrary per-vertex class id. `class_bound` must
    /// exceed every id in `classes`.
    pub fn from_classes(classes: impl IntoIterator<Item = usize>, class_bound: usize) -> Self {
        let mut first = vec![usize::MAX; class_bound];
        let mut component_count = 0;
        let labels = classes
            .into_iter()
            .enumerate()
            .map(|(v, c)| {
                if first[c] == usize::MAX {
                    first[c] = v;
                    component_count += 1;
                }
                first[c]
            })
            .collect();
        Self {
            labels,
            component_count,
        }
    }

    pub fn from_union_find(uf: &mut UnionFind) -> Self {
        let n = uf.len();
        let roots: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
        Self::from_classes(roots, n)
    }

    /// Builds a partition from per-vertex labels of any kind, checking nothing
    /// but relabelling canonically.
    pub fn from_labels(labels: &[usize]) -> Self {
        let bound = labels.iter().max().map_or(0, |m| m + 1);
        Self::from_classes(labels.iter().copied(), bound)
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            component_count: n,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut slot = vec![usize::MAX; self.labels.len()];
        let mut out: Vec<Vec<usize>> = Vec::with_capacity(self.component_count);
        for (v, &l) in self.labels.iter().enumerate() {
            if slot[l] == usize::MAX {
                slot[l] = out.len();
                out.push(Vec::new());
            }
            out[slot[l]].push(v);
        }
        out
    }

    /// Dense component index in `0..component_count`, ordered by smallest member.
    pub fn ranks(&self) -> Vec<usize> {
        let mut rank = vec![usize::MAX; self.labels.len()];
        let mut next = 0;
        self.labels
            .iter()
            .map(|&l| {
                if rank[l] == usize::MAX {
                    rank[l] = next;
                    next += 1;
                }
                rank[l]
            })
            .collect()
    }

    pub fn component_sizes(&self) -> Vec<usize> {
        let mut size = vec![0; self.labels.len()];
        for &l in &self.labels {
            size[l] += 1;
        }
        size
    }

    /// True when every component of `self` lies inside one component of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.labels.len() == coarser.labels.len()
            && self
                .labels
                .iter()
                .zip(&coarser.labels)
                .all(|(&l, &c)| coarser.labels[l] == c)
    }
}

/// Components of the subgraph keeping edges with weight `<= alpha`.
pub fn alpha_cc_partition(graph: &EdgeWeightedGraph, alpha: Level) -> Partition {
    let mut uf = UnionFind::new(graph.vertex_count());
    for e in graph.edges().iter().filter(|e| e.weight <= alpha) {
        uf.union(e.u, e.v);
    }
    Partition::from_union_find(&mut uf)
}

/// Maximal connected iso-intensity zones.
pub fn flat_zones(image: &GridImage) -> Result<Partition> {
    let graph = EdgeWeightedGraph::from_image(image)?;
    Ok(alpha_cc_partition(&graph, 0))
}
