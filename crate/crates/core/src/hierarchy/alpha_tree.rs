use serde::{Deserialize, Serialize};

use super::forest::{CanonicalForest, MergeForest};
use crate::graph::EdgeWeightedGraph;
use crate::partition::Partition;
use crate::union_find::UnionFind;
use crate::{Error, Level, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaNode {
    pub parent: Option<usize>,
    /// Level at which the node's children merge; 0 for flat zones.
    pub alpha: Level,
    pub area: usize,
    pub min_value: Level,
    pub max_value: Level,
}

impl AlphaNode {
    pub fn range(&self) -> Level {
        self.max_value - self.min_value
    }
}

/// Canonical single-linkage dendrogram of a connected edge-weighted graph.
///
/// Leaves are the flat zones (alpha 0). Alpha strictly increases from a
/// node to its parent. Nodes are stored ordered by (alpha, smallest
/// pixel), so every parent comes after its children and the root is last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaTree {
    nodes: Vec<AlphaNode>,
    leaf_of_pixel: Vec<usize>,
}

impl AlphaTree {
    /// Kruskal construction over edges sorted by (weight, index), one
    /// union-find pass; quasi-linear after the sort.
    pub fn build(graph: &EdgeWeightedGraph) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 {
            return Err(Error::InvalidInput("graph has no vertices".into()));
        }
        if n >= u32::MAX as usize / 2 {
            return Err(Error::InvalidInput("graph too large".into()));
        }
        let mut forest = MergeForest::new(vec![0; n]);
        let mut uf = UnionFind::new(n);
        let mut top: Vec<u32> = (0..n as u32).collect();
        for i in graph.sorted_edge_order() {
            let e = graph.edges()[i];
            let (ru, rv) = (uf.find(e.u), uf.find(e.v));
            if ru == rv {
                continue;
            }
            let k = forest.merge(top[ru], top[rv], e.weight);
            let r = uf.link(ru, rv);
            top[r] = k;
            if uf.set_count() == 1 {
                break;
            }
        }
        if uf.set_count() != 1 {
            return Err(Error::Disconnected {
                components: uf.set_count(),
            });
        }
        Ok(Self::from_forest(forest.canonicalize(), graph.vertex_weights()))
    }

    fn from_forest(forest: CanonicalForest, intensities: Option<&[Level]>) -> Self {
        let CanonicalForest {
            parent,
            level,
            node_of_element,
        } = forest;
        let mut nodes: Vec<AlphaNode> = parent
            .iter()
            .zip(&level)
            .map(|(&parent, &alpha)| AlphaNode {
                parent,
                alpha,
                area: 0,
                min_value: Level::MAX,
                max_value: 0,
            })
            .collect();
        for (p, &leaf) in node_of_element.iter().enumerate() {
            let f = intensities.map_or(0, |f| f[p]);
            let node = &mut nodes[leaf];
            node.area += 1;
            node.min_value = node.min_value.min(f);
            node.max_value = node.max_value.max(f);
        }
        for i in 0..nodes.len() {
            if let Some(p) = nodes[i].parent {
                let child = nodes[i];
                let node = &mut nodes[p];
                node.area += child.area;
                node.min_value = node.min_value.min(child.min_value);
                node.max_value = node.max_value.max(child.max_value);
            }
        }
        Self {
            nodes,
            leaf_of_pixel: node_of_element,
        }
    }

    /// Assembles a tree from raw parts, checking every structural invariant.
    pub fn from_parts(nodes: Vec<AlphaNode>, leaf_of_pixel: Vec<usize>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        let m = nodes.len();
        if m == 0 || leaf_of_pixel.is_empty() {
            return bad("empty tree".into());
        }
        let mut area = vec![0usize; m];
        let mut lo = vec![Level::MAX; m];
        let mut hi = vec![0; m];
        let mut has_child = vec![false; m];
        for (i, node) in nodes.iter().enumerate() {
            match node.parent {
                None if i + 1 != m => return bad(format!("node {i} has no parent but is not last")),
                Some(_) if i + 1 == m => return bad("last node must be the root".into()),
                Some(p) if p <= i || p >= m => return bad(format!("node {i} has invalid parent {p}")),
                Some(p) => {
                    if nodes[p].alpha <= node.alpha {
                        return bad(format!("alpha does not increase from node {i} to {p}"));
                    }
                    has_child[p] = true;
                }
                None => {}
            }
            if node.min_value > node.max_value {
                return bad(format!("node {i} has min > max"));
            }
        }
        for (p, &leaf) in leaf_of_pixel.iter().enumerate() {
            if leaf >= m || has_child[leaf] {
                return bad(format!("pixel {p} maps to non-leaf node {leaf}"));
            }
            area[leaf] += 1;
        }
        for i in 0..m {
            let node = &nodes[i];
            if !has_child[i] {
                if area[i] == 0 {
                    return bad(format!("leaf {i} holds no pixel"));
                }
                if node.alpha != 0 {
                    return bad(format!("leaf {i} has non-zero alpha"));
                }
                lo[i] = node.min_value;
                hi[i] = node.max_value;
            }
            if area[i] != node.area {
                return bad(format!("node {i} area {} != {}", node.area, area[i]));
            }
            if has_child[i] && (lo[i] != node.min_value || hi[i] != node.max_value) {
                return bad(format!("node {i} value range disagrees with its children"));
            }
            if let Some(p) = node.parent {
                area[p] += area[i];
                lo[p] = lo[p].min(lo[i]);
                hi[p] = hi[p].max(hi[i]);
            }
        }
        Ok(Self { nodes, leaf_of_pixel })
    }

    pub fn nodes(&self) -> &[AlphaNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &AlphaNode {
        &self.nodes[i]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn root_alpha(&self) -> Level {
        self.nodes[self.root()].alpha
    }

    pub fn pixel_count(&self) -> usize {
        self.leaf_of_pixel.len()
    }

    pub fn leaf_of_pixel(&self, p: usize) -> usize {
        self.leaf_of_pixel[p]
    }

    pub fn leaf_map(&self) -> &[usize] {
        &self.leaf_of_pixel
    }

    pub fn is_leaf(&self, i: usize) -> bool {
        self.nodes[i].alpha == 0
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.alpha == 0).count()
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            if let Some(p) = node.parent {
                children[p].push(i);
            }
        }
        children
    }

    /// Pixel set of every node, each sorted ascending.
    pub fn node_pixels(&self) -> Vec<Vec<usize>> {
        let mut sets = vec![Vec::new(); self.nodes.len()];
        for (p, &leaf) in self.leaf_of_pixel.iter().enumerate() {
            let mut n = Some(leaf);
            while let Some(i) = n {
                sets[i].push(p);
                n = self.nodes[i].parent;
            }
        }
        sets
    }

    /// Alpha of the node where the flat zone of `p` first merges with
    /// something else, or `None` when the zone is the whole image.
    pub fn first_merge_alpha(&self, p: usize) -> Option<Level> {
        self.nodes[self.leaf_of_pixel[p]].parent.map(|q| self.nodes[q].alpha)
    }

    /// Highest cut whose nodes all satisfy `keep`; `keep` must hold for
    /// every leaf and be inherited from parent to child.
    fn cut_where(&self, keep: impl Fn(&AlphaNode) -> bool) -> Partition {
        let m = self.nodes.len();
        let mut rep = vec![0usize; m];
        for i in (0..m).rev() {
            rep[i] = match self.nodes[i].parent {
                Some(p) if keep(&self.nodes[p]) => rep[p],
                _ => i,
            };
        }
        Partition::from_classes(self.leaf_of_pixel.iter().map(|&l| rep[l]), m)
    }

    /// The alpha-connected components at level `alpha`.
    pub fn cut(&self, alpha: Level) -> Partition {
        self.cut_where(|n| n.alpha <= alpha)
    }

    /// (alpha, omega)-connected components: for each pixel, the largest
    /// ancestor of its flat zone with alpha `<= alpha` and range `<= omega`.
    /// The flat zone itself always qualifies.
    pub fn constrained_cc(&self, alpha: Level, omega: Level) -> Partition {
        self.cut_where(|n| n.alpha <= alpha && n.range() <= omega)
    }

    /// (omega)-connected components: the local threshold plays no role.
    pub fn omega_cc(&self, omega: Level) -> Partition {
        self.cut_where(|n| n.range() <= omega)
    }

    fn check_pixel(&self, p: usize) -> Result<()> {
        if p < self.pixel_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: p,
                count: self.pixel_count(),
            })
        }
    }

    /// Lowest common ancestor of two nodes.
    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while a != b {
            if a < b {
                a = self.nodes[a].parent.expect("non-root node has a parent");
            } else {
                b = self.nodes[b].parent.expect("non-root node has a parent");
            }
        }
        a
    }

    fn pixel_lca(&self, p: usize, q: usize) -> Result<usize> {
        self.check_pixel(p)?;
        self.check_pixel(q)?;
        Ok(self.lca(self.leaf_of_pixel[p], self.leaf_of_pixel[q]))
    }

    /// Single-linkage ultrametric: alpha of the lowest common ancestor.
    pub fn d_alpha(&self, p: usize, q: usize) -> Result<Level> {
        let n = self.pixel_lca(p, q)?;
        Ok(if p == q { 0 } else { self.nodes[n].alpha })
    }

    /// Smallest range of an alpha-connected component holding both pixels.
    pub fn d_omega(&self, p: usize, q: usize) -> Result<Level> {
        let n = self.pixel_lca(p, q)?;
        Ok(if p == q { 0 } else { self.nodes[n].range() })
    }

    /// Direct area filtering. Internal nodes smaller than `min_area` are
    /// removed and their children attach to the nearest surviving ancestor.
    /// Flat zones and the root always survive, so a small flat zone stays
    /// a region of its own until the level of the ancestor that absorbs it.
    /// With `min_area` above the pixel count the result is a single node.
    pub fn area_filter(&self, min_area: usize) -> AlphaTree {
        let n = self.pixel_count();
        if min_area > n {
            let root = &self.nodes[self.root()];
            let node = AlphaNode {
                parent: None,
                alpha: 0,
                ..*root
            };
            return AlphaTree {
                nodes: vec![node],
                leaf_of_pixel: vec![0; n],
            };
        }
        let m = self.nodes.len();
        let keep: Vec<bool> = (0..m)
            .map(|i| {
                let node = &self.nodes[i];
                node.parent.is_none() || node.alpha == 0 || node.area >= min_area
            })
            .collect();
        let mut up = vec![None; m];
        for i in (0..m).rev() {
            if let Some(p) = self.nodes[i].parent {
                up[i] = if keep[p] { Some(p) } else { up[p] };
            }
        }
        let mut new_index = vec![usize::MAX; m];
        for (next, i) in (0..m).filter(|&i| keep[i]).enumerate() {
            new_index[i] = next;
        }
        let nodes = (0..m)
            .filter(|&i| keep[i])
            .map(|i| AlphaNode {
                parent: up[i].map(|p| new_index[p]),
                ..self.nodes[i]
            })
            .collect();
        let leaf_of_pixel = self.leaf_of_pixel.iter().map(|&l| new_index[l]).collect();
        AlphaTree { nodes, leaf_of_pixel }
    }
}
