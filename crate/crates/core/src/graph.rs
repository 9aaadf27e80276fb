//! Edge-weighted graphs over pixels and the constructions used to move
//! between edge and vertex weightings (doubling, line graph, MST).

use std::collections::HashSet;

use rayon::slice::ParallelSliceMut;

use crate::image::GridImage;
use crate::union_find::UnionFind;
use crate::{Error, Level, Result};

/// Edge weight rule between two adjacent intensities.
pub trait Dissimilarity {
    fn dissimilarity(&self, a: Level, b: Level) -> Level;
}

/// `|f(p) - f(q)|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbsoluteDifference;

impl Dissimilarity for AbsoluteDifference {
    fn dissimilarity(&self, a: Level, b: Level) -> Level {
        a.abs_diff(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Level,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: Level) -> Self {
        Self { u, v, weight }
    }
}

/// Dimensions of the raster a graph was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridShape {
    pub width: usize,
    pub height: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    vertex_weights: Option<Vec<Level>>,
    grid: Option<GridShape>,
}

/// Sizes above which edge sorting is handed to rayon.
const PARALLEL_SORT_THRESHOLD: usize = 1 << 16;

impl EdgeWeightedGraph {
    /// Validates and wraps an edge list: no self-loops, endpoints in
    /// range, no repeated unordered pair.
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for e in &edges {
            if e.u == e.v {
                return Err(Error::InvalidInput(format!("self-loop on vertex {}", e.u)));
            }
            for x in [e.u, e.v] {
                if x >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        count: vertex_count,
                    });
                }
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::InvalidInput(format!("duplicate edge {{{}, {}}}", e.u, e.v)));
            }
        }
        Ok(Self {
            vertex_count,
            edges,
            vertex_weights: None,
            grid: None,
        })
    }

    pub fn with_vertex_weights(mut self, weights: Vec<Level>) -> Result<Self> {
        if weights.len() != self.vertex_count {
            return Err(Error::InvalidInput(format!(
                "expected {} vertex weights, got {}",
                self.vertex_count,
                weights.len()
            )));
        }
        self.vertex_weights = Some(weights);
        Ok(self)
    }

    /// 4-adjacency graph of `image` weighted by absolute intensity difference.
    pub fn from_image(image: &GridImage) -> Result<Self> {
        build_pixel_graph(image, &AbsoluteDifference)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_weights(&self) -> Option<&[Level]> {
        self.vertex_weights.as_deref()
    }

    pub fn grid(&self) -> Option<GridShape> {
        self.grid
    }

    pub fn max_weight(&self) -> Level {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    /// Same vertices and vertex weights, edge weights replaced by `weights`.
    pub fn reweighted(&self, weights: &[Level]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} edge weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| Edge::new(e.u, e.v, w))
            .collect();
        Ok(Self { edges, ..self.clone() })
    }

    /// Same vertices, restricted to `edges` (which must come from this graph).
    pub fn with_edges(&self, edges: Vec<Edge>) -> Self {
        Self {
            vertex_count: self.vertex_count,
            edges,
            vertex_weights: self.vertex_weights.clone(),
            grid: None,
        }
    }

    /// Edge indices ordered by weight, ties broken by original index.
    pub fn sorted_edge_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        if order.len() >= PARALLEL_SORT_THRESHOLD {
            order.par_sort_by_key(|&i| self.edges[i].weight);
        } else {
            order.sort_by_key(|&i| self.edges[i].weight);
        }
        order
    }

    /// For each vertex, the indices of its incident edges.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[e.u].push(i);
            inc[e.v].push(i);
        }
        inc
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        adj
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count,
            })
        }
    }

    /// Number of connected components of the full graph.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        uf.set_count()
    }
}

/// Builds the 4-adjacency graph of `image`. Edges are enumerated row-major,
/// right neighbour before lower neighbour.
pub fn build_pixel_graph(image: &GridImage, rule: &impl Dissimilarity) -> Result<EdgeWeightedGraph> {
    if image.is_empty() {
        return Err(Error::InvalidInput("empty image".into()));
    }
    let (w, h) = (image.width(), image.height());
    let f = image.values();
    let mut edges = Vec::with_capacity(2 * w * h - w - h);
    for y in 0..h {
        for x in 0..w {
            let p = y * w + x;
            if x + 1 < w {
                edges.push(Edge::new(p, p + 1, rule.dissimilarity(f[p], f[p + 1])));
            }
            if y + 1 < h {
                edges.push(Edge::new(p, p + w, rule.dissimilarity(f[p], f[p + w])));
            }
        }
    }
    Ok(EdgeWeightedGraph {
        vertex_count: w * h,
        edges,
        vertex_weights: Some(f.to_vec()),
        grid: Some(GridShape { width: w, height: h }),
    })
}

/// Kruskal's algorithm with a stable (weight, index) edge order.
pub fn kruskal_mst(graph: &EdgeWeightedGraph) -> Result<Vec<Edge>> {
    let n = graph.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for i in graph.sorted_edge_order() {
        let e = graph.edges()[i];
        let (ru, rv) = (uf.find(e.u), uf.find(e.v));
        if ru != rv {
            uf.link(ru, rv);
            tree.push(e);
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    if n > 0 && uf.set_count() != 1 {
        return Err(Error::Disconnected {
            components: uf.set_count(),
        });
    }
    Ok(tree)
}

/// Adds a pendant copy `p'` of every vertex `p` (vertex `n + p`), joined
/// to it by one edge weighted with `rule(f(p), f(p))`.
pub fn double_graph(graph: &EdgeWeightedGraph) -> Result<EdgeWeightedGraph> {
    double_graph_with(graph, &AbsoluteDifference)
}

pub fn double_graph_with(graph: &EdgeWeightedGraph, rule: &impl Dissimilarity) -> Result<EdgeWeightedGraph> {
    let f = graph.vertex_weights().ok_or(Error::MissingVertexWeights)?;
    let n = graph.vertex_count();
    let mut edges = graph.edges().to_vec();
    edges.extend((0..n).map(|p| Edge::new(p, n + p, rule.dissimilarity(f[p], f[p]))));
    let mut weights = f.to_vec();
    weights.extend_from_slice(f);
    Ok(EdgeWeightedGraph {
        vertex_count: 2 * n,
        edges,
        vertex_weights: Some(weights),
        grid: None,
    })
}

/// Line graph: vertex `i` stands for edge `i` of `graph` and carries its
/// weight; two vertices are adjacent iff their edges share an endpoint.
/// Output edges carry weight 0.
pub fn line_graph(graph: &EdgeWeightedGraph) -> EdgeWeightedGraph {
    let mut edges = Vec::new();
    for incident in graph.incidence() {
        for (k, &a) in incident.iter().enumerate() {
            for &b in &incident[k + 1..] {
                edges.push(Edge::new(a.min(b), a.max(b), 0));
            }
        }
    }
    // Two distinct edges of a simple graph share at most one endpoint.
    edges.sort_unstable_by_key(|e| (e.u, e.v));
    EdgeWeightedGraph {
        vertex_count: graph.edge_count(),
        edges,
        vertex_weights: Some(graph.edges().iter().map(|e| e.weight).collect()),
        grid: None,
    }
}

/// Regional minima of a vertex-weighted graph: connected iso-level plateaus
/// with no strictly lower neighbour. Returns one flag per vertex.
pub fn regional_minima(graph: &EdgeWeightedGraph) -> Result<Vec<bool>> {
    plateau_extrema(graph, |a, b| a < b)
}

pub fn regional_maxima(graph: &EdgeWeightedGraph) -> Result<Vec<bool>> {
    plateau_extrema(graph, |a, b| a > b)
}

fn plateau_extrema(graph: &EdgeWeightedGraph, beats: impl Fn(Level, Level) -> bool) -> Result<Vec<bool>> {
    let f = graph.vertex_weights().ok_or(Error::MissingVertexWeights)?;
    let n = graph.vertex_count();
    let mut uf = UnionFind::new(n);
    for e in graph.edges() {
        if f[e.u] == f[e.v] {
            uf.union(e.u, e.v);
        }
    }
    let mut beaten = vec![false; n];
    for e in graph.edges() {
        if beats(f[e.v], f[e.u]) {
            let r = uf.find(e.u);
            beaten[r] = true;
        }
        if beats(f[e.u], f[e.v]) {
            let r = uf.find(e.v);
            beaten[r] = true;
        }
    }
    Ok((0..n).map(|v| !beaten[uf.find(v)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(values: &[u8]) -> EdgeWeightedGraph {
        EdgeWeightedGraph::from_image(&GridImage::from_u8(values.len(), 1, values).unwrap()).unwrap()
    }

    #[test]
    fn single_pixel_has_no_edges() {
        let g = line(&[5]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn weights_are_absolute_differences() {
        let g = line(&[0, 2, 3]);
        assert_eq!(g.edges(), &[Edge::new(0, 1, 2), Edge::new(1, 2, 1)]);
        assert_eq!(g.vertex_weights(), Some(&[0, 2, 3][..]));
    }

    #[test]
    fn edge_count_formula() {
        for (w, h) in [(1, 1), (7, 7), (3, 5), (16, 1), (1, 9)] {
            let img = GridImage::from_u8(w, h, &vec![0; w * h]).unwrap();
            let g = EdgeWeightedGraph::from_image(&img).unwrap();
            assert_eq!(g.edge_count(), 2 * w * h - w - h);
        }
    }

    #[test]
    fn new_rejects_malformed_edges() {
        assert!(EdgeWeightedGraph::new(2, vec![Edge::new(0, 0, 1)]).is_err());
        assert!(EdgeWeightedGraph::new(2, vec![Edge::new(0, 2, 1)]).is_err());
        assert!(EdgeWeightedGraph::new(2, vec![Edge::new(0, 1, 1), Edge::new(1, 0, 3)]).is_err());
    }

    #[test]
    fn mst_drops_heaviest_cycle_edge() {
        let g = EdgeWeightedGraph::new(3, vec![Edge::new(0, 1, 1), Edge::new(1, 2, 2), Edge::new(0, 2, 3)]).unwrap();
        let mst = kruskal_mst(&g).unwrap();
        assert_eq!(mst, vec![Edge::new(0, 1, 1), Edge::new(1, 2, 2)]);
        assert_eq!(mst.iter().map(|e| e.weight).sum::<u32>(), 3);
    }

    #[test]
    fn mst_of_a_tree_is_the_tree() {
        let g = line(&[4, 1, 9, 9, 2]);
        let mut mst = kruskal_mst(&g).unwrap();
        mst.sort_by_key(|e| e.u);
        assert_eq!(mst, g.edges());
    }

    #[test]
    fn mst_rejects_disconnected_graphs() {
        let g = EdgeWeightedGraph::new(3, vec![Edge::new(0, 1, 1)]).unwrap();
        assert!(matches!(kruskal_mst(&g), Err(Error::Disconnected { components: 2 })));
    }

    #[test]
    fn doubling() {
        let g = line(&[7]);
        let d = double_graph(&g).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edges(), &[Edge::new(0, 1, 0)]);

        let d = double_graph(&line(&[0, 2, 3])).unwrap();
        assert_eq!(d.vertex_count(), 6);
        assert_eq!(d.edge_count(), 5);
        assert_eq!(d.vertex_weights(), Some(&[0, 2, 3, 0, 2, 3][..]));

        let bare = EdgeWeightedGraph::new(2, vec![Edge::new(0, 1, 1)]).unwrap();
        assert!(matches!(double_graph(&bare), Err(Error::MissingVertexWeights)));
    }

    #[test]
    fn doubled_constant_image_has_only_zero_edges() {
        let img = GridImage::from_u8(4, 3, &[6; 12]).unwrap();
        let d = double_graph(&EdgeWeightedGraph::from_image(&img).unwrap()).unwrap();
        assert!(d.edges().iter().all(|e| e.weight == 0));
    }

    #[test]
    fn line_graph_of_path_and_star() {
        let path = line(&[0, 2, 3]);
        let l = line_graph(&path);
        assert_eq!(l.vertex_count(), 2);
        assert_eq!(l.edges(), &[Edge::new(0, 1, 0)]);
        assert_eq!(l.vertex_weights(), Some(&[2, 1][..]));

        let star = EdgeWeightedGraph::new(4, vec![Edge::new(0, 1, 5), Edge::new(0, 2, 6), Edge::new(0, 3, 7)]).unwrap();
        let l = line_graph(&star);
        assert_eq!(l.vertex_count(), 3);
        assert_eq!(l.edges(), &[Edge::new(0, 1, 0), Edge::new(0, 2, 0), Edge::new(1, 2, 0)]);
    }

    #[test]
    fn regional_extrema_of_a_path() {
        let g = EdgeWeightedGraph::new(3, vec![Edge::new(0, 1, 0), Edge::new(1, 2, 0)])
            .unwrap()
            .with_vertex_weights(vec![1, 5, 2])
            .unwrap();
        assert_eq!(regional_minima(&g).unwrap(), vec![true, false, true]);
        assert_eq!(regional_maxima(&g).unwrap(), vec![false, true, false]);
    }
}
