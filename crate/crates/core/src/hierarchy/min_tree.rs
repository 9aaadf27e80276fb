use super::forest::{CanonicalForest, MergeForest};
use crate::graph::EdgeWeightedGraph;
use crate::union_find::UnionFind;
use crate::{Error, Level, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentNode {
    pub parent: Option<usize>,
    pub level: Level,
    pub area: usize,
}

/// Min-tree of a vertex-weighted graph: the connected components of every
/// lower level set `{v | f(v) <= t}`, one node per distinct component.
/// Leaves are the regional minima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentTree {
    nodes: Vec<ComponentNode>,
    node_of_vertex: Vec<usize>,
}

impl ComponentTree {
    /// Union-find construction over vertices sorted by (level, id).
    pub fn build_min_tree(graph: &EdgeWeightedGraph) -> Result<Self> {
        let f = graph.vertex_weights().ok_or(Error::MissingVertexWeights)?;
        let n = graph.vertex_count();
        if n == 0 {
            return Err(Error::InvalidInput("graph has no vertices".into()));
        }
        let adjacency = graph.adjacency();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| f[v]);

        let mut forest = MergeForest::new(f.to_vec());
        let mut uf = UnionFind::new(n);
        let mut top: Vec<u32> = (0..n as u32).collect();
        let mut done = vec![false; n];
        for &v in &order {
            done[v] = true;
            for &u in &adjacency[v] {
                if !done[u] {
                    continue;
                }
                let (ru, rv) = (uf.find(u), uf.find(v));
                if ru != rv {
                    let k = forest.merge(top[ru], top[rv], f[v]);
                    let r = uf.link(ru, rv);
                    top[r] = k;
                }
            }
        }
        if uf.set_count() != 1 {
            return Err(Error::Disconnected {
                components: uf.set_count(),
            });
        }

        let CanonicalForest {
            parent,
            level,
            node_of_element,
        } = forest.canonicalize();
        let mut nodes: Vec<ComponentNode> = parent
            .into_iter()
            .zip(level)
            .map(|(parent, level)| ComponentNode { parent, level, area: 0 })
            .collect();
        for &k in &node_of_element {
            nodes[k].area += 1;
        }
        for i in 0..nodes.len() {
            if let Some(p) = nodes[i].parent {
                nodes[p].area += nodes[i].area;
            }
        }
        Ok(Self {
            nodes,
            node_of_vertex: node_of_element,
        })
    }

    pub fn nodes(&self) -> &[ComponentNode] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Smallest node holding vertex `v` (the component of `v` at level `f(v)`).
    pub fn node_of_vertex(&self, v: usize) -> usize {
        self.node_of_vertex[v]
    }

    pub fn leaves(&self) -> Vec<usize> {
        let mut has_child = vec![false; self.nodes.len()];
        for node in &self.nodes {
            if let Some(p) = node.parent {
                has_child[p] = true;
            }
        }
        (0..self.nodes.len()).filter(|&i| !has_child[i]).collect()
    }

    /// Vertex set of every node, each sorted ascending.
    pub fn node_vertices(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.nodes.len()];
        for (v, &k) in self.node_of_vertex.iter().enumerate() {
            let mut n = Some(k);
            while let Some(i) = n {
                sets[i].push(v);
                n = self.nodes[i].parent;
            }
        }
        sets
    }
}
