//! Saliency maps (ultrametric watersheds) and their correspondence with
//! hierarchies of connected partitions.

use crate::graph::{Edge, EdgeWeightedGraph};
use crate::hierarchy::AlphaTree;
use crate::partition::{alpha_cc_partition, Partition};
use crate::union_find::UnionFind;
use crate::{Error, Level, Result};

/// One value per edge of a pixel graph: the level at which the edge's
/// endpoints fall into the same region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaliencyMap {
    graph: EdgeWeightedGraph,
    values: Vec<Level>,
}

/// Why an edge map fails to be an ultrametric watershed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WatershedViolation {
    /// The edge's value exceeds the pass value between its endpoints, so
    /// lowering it would not change the connectivity of any level set.
    Destructible { edge: usize, value: Level, pass: Level },
    /// The edge lies on a minimum plateau whose value is not 0.
    NonZeroMinimum { edge: usize, value: Level },
}

impl WatershedViolation {
    pub fn edge(&self) -> usize {
        match *self {
            WatershedViolation::Destructible { edge, .. } | WatershedViolation::NonZeroMinimum { edge, .. } => edge,
        }
    }
}

impl std::fmt::Display for WatershedViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WatershedViolation::Destructible { edge, value, pass } => {
                write!(f, "edge {edge} has value {value} above its pass value {pass}")
            }
            WatershedViolation::NonZeroMinimum { edge, value } => {
                write!(f, "edge {edge} lies on a minimum of value {value}")
            }
        }
    }
}

impl SaliencyMap {
    pub fn new(graph: EdgeWeightedGraph, values: Vec<Level>) -> Result<Self> {
        if values.len() != graph.edge_count() {
            return Err(Error::InvalidInput(format!(
                "expected {} saliency values, got {}",
                graph.edge_count(),
                values.len()
            )));
        }
        Ok(Self { graph, values })
    }

    /// Each edge gets the alpha of the lowest common ancestor of its endpoints.
    pub fn from_tree(tree: &AlphaTree, graph: &EdgeWeightedGraph) -> Result<Self> {
        if tree.pixel_count() != graph.vertex_count() {
            return Err(Error::Mismatch(format!(
                "tree has {} pixels, graph has {} vertices",
                tree.pixel_count(),
                graph.vertex_count()
            )));
        }
        let values = graph
            .edges()
            .iter()
            .map(|e| {
                tree.node(tree.lca(tree.leaf_of_pixel(e.u), tree.leaf_of_pixel(e.v)))
                    .alpha
            })
            .collect();
        Ok(Self {
            graph: graph.clone(),
            values,
        })
    }

    /// Saliency of the alpha-tree of `graph`.
    pub fn of_graph(graph: &EdgeWeightedGraph) -> Result<Self> {
        Self::from_tree(&AlphaTree::build(graph)?, graph)
    }

    pub fn graph(&self) -> &EdgeWeightedGraph {
        &self.graph
    }

    pub fn values(&self) -> &[Level] {
        &self.values
    }

    pub fn max_value(&self) -> Level {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// The underlying graph with the saliency values as edge weights.
    pub fn as_graph(&self) -> EdgeWeightedGraph {
        self.graph.reweighted(&self.values).expect("one value per edge")
    }

    /// Alpha-tree of the edge map; the subdominant hierarchy when the map
    /// is not an ultrametric watershed.
    pub fn to_tree(&self) -> Result<AlphaTree> {
        AlphaTree::build(&self.as_graph())
    }

    /// Components of edges valued `<= lambda`.
    pub fn cut(&self, lambda: Level) -> Partition {
        alpha_cc_partition(&self.as_graph(), lambda)
    }

    pub fn pass_value(&self, p: usize, q: usize) -> Result<Level> {
        pass_value(&self.as_graph(), p, q)
    }

    /// Checks that every edge value equals the pass value between its
    /// endpoints and that every minimum plateau is valued 0. Reports the
    /// violation with the smallest edge index.
    pub fn check_ultrametric_watershed(&self) -> std::result::Result<(), WatershedViolation> {
        let first = [self.first_destructible(), self.first_nonzero_minimum()]
            .into_iter()
            .flatten()
            .min_by_key(|v| v.edge());
        match first {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }

    pub fn is_ultrametric_watershed(&self) -> bool {
        self.check_ultrametric_watershed().is_ok()
    }

    /// The same map on the doubled graph: vertex `n + p` hangs off `p`
    /// through an extra edge valued 0, so every region owns a 0-valued edge
    /// and single-pixel flat zones become minima.
    pub fn on_doubled_graph(&self) -> SaliencyMap {
        let n = self.graph.vertex_count();
        let mut edges = self.graph.edges().to_vec();
        edges.extend((0..n).map(|p| Edge::new(p, n + p, 0)));
        let mut graph = EdgeWeightedGraph::new(2 * n, edges).expect("pendant edges are new pairs");
        if let Some(f) = self.graph.vertex_weights() {
            graph = graph
                .with_vertex_weights([f, f].concat())
                .expect("one weight per vertex");
        }
        let mut values = self.values.clone();
        values.resize(values.len() + n, 0);
        Self { graph, values }
    }

    fn first_destructible(&self) -> Option<WatershedViolation> {
        let graph = self.as_graph();
        let order = graph.sorted_edge_order();
        let edges = graph.edges();
        let mut uf = UnionFind::new(graph.vertex_count());
        let mut worst: Option<usize> = None;
        let mut start = 0;
        while start < order.len() {
            let level = edges[order[start]].weight;
            let end = start + order[start..].iter().take_while(|&&i| edges[i].weight == level).count();
            // Endpoints already joined strictly below `level` mean pass < value.
            for &i in &order[start..end] {
                if uf.same(edges[i].u, edges[i].v) {
                    worst = Some(worst.map_or(i, |w| w.min(i)));
                }
            }
            for &i in &order[start..end] {
                uf.union(edges[i].u, edges[i].v);
            }
            start = end;
        }
        worst.map(|edge| WatershedViolation::Destructible {
            edge,
            value: self.values[edge],
            pass: pass_value(&graph, edges[edge].u, edges[edge].v).expect("endpoints in range"),
        })
    }

    fn first_nonzero_minimum(&self) -> Option<WatershedViolation> {
        let m = self.values.len();
        let incidence = self.graph.incidence();
        let mut plateaus = UnionFind::new(m);
        let mut lowest_incident = vec![Level::MAX; self.graph.vertex_count()];
        for (v, incident) in incidence.iter().enumerate() {
            for (k, &a) in incident.iter().enumerate() {
                lowest_incident[v] = lowest_incident[v].min(self.values[a]);
                for &b in &incident[k + 1..] {
                    if self.values[a] == self.values[b] {
                        plateaus.union(a, b);
                    }
                }
            }
        }
        let mut has_lower = vec![false; m];
        for (i, e) in self.graph.edges().iter().enumerate() {
            if lowest_incident[e.u] < self.values[i] || lowest_incident[e.v] < self.values[i] {
                let r = plateaus.find(i);
                has_lower[r] = true;
            }
        }
        (0..m)
            .find(|&i| self.values[i] > 0 && !has_lower[plateaus.find(i)])
            .map(|edge| WatershedViolation::NonZeroMinimum {
                edge,
                value: self.values[edge],
            })
    }

    /// Saliency of the (omega)-hierarchy: each edge gets the range of the
    /// smallest alpha-connected component holding both endpoints.
    pub fn omega_saliency(&self, vertex_weights: &[Level]) -> Result<Self> {
        let graph = self.as_graph().with_vertex_weights(vertex_weights.to_vec())?;
        let tree = AlphaTree::build(&graph)?;
        let values = self
            .graph
            .edges()
            .iter()
            .map(|e| {
                tree.node(tree.lca(tree.leaf_of_pixel(e.u), tree.leaf_of_pixel(e.v)))
                    .range()
            })
            .collect();
        Ok(Self {
            graph: self.graph.clone(),
            values,
        })
    }

    /// Range filtering as a flooding: the (omega)-saliency with every value
    /// `<= omega` lowered to 0, so its level-0 cut is the (omega)-partition.
    pub fn range_filter(&self, vertex_weights: &[Level], omega: Level) -> Result<Self> {
        let mut out = self.omega_saliency(vertex_weights)?;
        for v in &mut out.values {
            if *v <= omega {
                *v = 0;
            }
        }
        Ok(out)
    }

    /// Doubled-grid rendering: pixel sites at even coordinates hold 0, edge
    /// sites hold the saliency, junction sites the max of their edge sites.
    pub fn render_khalimsky(&self) -> Result<KhalimskyImage> {
        let shape = self.graph.grid().ok_or(Error::NotAGrid)?;
        let (w, h) = (shape.width, shape.height);
        let (kw, kh) = (2 * w - 1, 2 * h - 1);
        let mut values = vec![0; kw * kh];
        for (e, &s) in self.graph.edges().iter().zip(&self.values) {
            let (x, y) = (e.u % w, e.u / w);
            let site = if e.v == e.u + 1 && x + 1 < w {
                (2 * y) * kw + 2 * x + 1
            } else if e.v == e.u + w {
                (2 * y + 1) * kw + 2 * x
            } else {
                return Err(Error::NotAGrid);
            };
            values[site] = s;
        }
        for ky in (1..kh).step_by(2) {
            for kx in (1..kw).step_by(2) {
                let i = ky * kw + kx;
                values[i] = values[i - kw].max(values[i + kw]).max(values[i - 1]).max(values[i + 1]);
            }
        }
        Ok(KhalimskyImage {
            width: kw,
            height: kh,
            values,
        })
    }
}

/// Minimum over all paths from `p` to `q` of the largest edge weight.
pub fn pass_value(graph: &EdgeWeightedGraph, p: usize, q: usize) -> Result<Level> {
    graph.check_vertex(p)?;
    graph.check_vertex(q)?;
    if p == q {
        return Ok(0);
    }
    let mut uf = UnionFind::new(graph.vertex_count());
    for i in graph.sorted_edge_order() {
        let e = graph.edges()[i];
        uf.union(e.u, e.v);
        if uf.same(p, q) {
            return Ok(e.weight);
        }
    }
    Err(Error::Disconnected {
        components: uf.set_count(),
    })
}

/// Interpixel raster of a saliency map, `(2w - 1) x (2h - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhalimskyImage {
    pub width: usize,
    pub height: usize,
    pub values: Vec<Level>,
}

impl KhalimskyImage {
    pub fn get(&self, x: usize, y: usize) -> Level {
        self.values[y * self.width + x]
    }

    /// Logarithmic tone mapping onto `0..=65535` for display.
    pub fn log_scaled(&self) -> Vec<u16> {
        let max = self.values.iter().copied().max().unwrap_or(0);
        if max == 0 {
            return vec![0; self.values.len()];
        }
        let denom = (max as f64).ln_1p();
        self.values
            .iter()
            .map(|&v| ((v as f64).ln_1p() / denom * u16::MAX as f64).round() as u16)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Edge, GridImage};

    fn image_graph(width: usize, values: &[u8]) -> EdgeWeightedGraph {
        let img = GridImage::from_u8(width, values.len() / width, values).unwrap();
        EdgeWeightedGraph::from_image(&img).unwrap()
    }

    fn path_map(values: &[Level]) -> SaliencyMap {
        let n = values.len() + 1;
        let edges = (1..n).map(|i| Edge::new(i - 1, i, 1)).collect();
        SaliencyMap::new(EdgeWeightedGraph::new(n, edges).unwrap(), values.to_vec()).unwrap()
    }

    #[test]
    fn saliency_examples() {
        assert_eq!(
            SaliencyMap::of_graph(&image_graph(3, &[0, 2, 3])).unwrap().values(),
            &[2, 1]
        );
        assert_eq!(
            SaliencyMap::of_graph(&image_graph(4, &[0, 0, 2, 2])).unwrap().values(),
            &[0, 2, 0]
        );
        let constant = SaliencyMap::of_graph(&image_graph(3, &[5; 9])).unwrap();
        assert!(constant.values().iter().all(|&v| v == 0));
    }

    #[test]
    fn mismatched_tree_is_rejected() {
        let tree = AlphaTree::build(&image_graph(3, &[0, 2, 3])).unwrap();
        assert!(matches!(
            SaliencyMap::from_tree(&tree, &image_graph(2, &[0, 1])),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn pass_value_takes_the_detour() {
        let g = EdgeWeightedGraph::new(3, vec![Edge::new(0, 1, 3), Edge::new(1, 2, 1), Edge::new(0, 2, 1)]).unwrap();
        assert_eq!(pass_value(&g, 0, 1).unwrap(), 1);
        assert_eq!(pass_value(&g, 2, 2).unwrap(), 0);
        assert!(pass_value(&g, 0, 3).is_err());
    }

    #[test]
    fn watershed_check_on_paths() {
        assert_eq!(
            path_map(&[1, 2, 1]).check_ultrametric_watershed(),
            Err(WatershedViolation::NonZeroMinimum { edge: 0, value: 1 })
        );
        assert!(path_map(&[0, 2, 0]).is_ultrametric_watershed());
    }

    #[test]
    fn doubling_gives_single_pixel_zones_a_zero_edge() {
        let s = SaliencyMap::of_graph(&image_graph(4, &[0, 1, 3, 4])).unwrap();
        assert_eq!(s.values(), &[1, 2, 1]);
        assert!(!s.is_ultrametric_watershed());
        let lifted = s.on_doubled_graph();
        assert_eq!(lifted.values(), &[1, 2, 1, 0, 0, 0, 0]);
        assert!(lifted.is_ultrametric_watershed());
        assert!(path_map(&[2, 1]).on_doubled_graph().is_ultrametric_watershed());
        let triangle =
            EdgeWeightedGraph::new(3, vec![Edge::new(0, 1, 0), Edge::new(1, 2, 0), Edge::new(0, 2, 0)]).unwrap();
        let destructible = SaliencyMap::new(triangle, vec![1, 1, 4]).unwrap().on_doubled_graph();
        assert_eq!(
            destructible.check_ultrametric_watershed(),
            Err(WatershedViolation::Destructible {
                edge: 2,
                value: 4,
                pass: 1
            })
        );
    }

    #[test]
    fn watershed_check_finds_destructible_edges() {
        let g = EdgeWeightedGraph::new(3, vec![Edge::new(0, 1, 0), Edge::new(1, 2, 0), Edge::new(0, 2, 0)]).unwrap();
        let map = SaliencyMap::new(g, vec![0, 0, 4]).unwrap();
        assert_eq!(
            map.check_ultrametric_watershed(),
            Err(WatershedViolation::Destructible {
                edge: 2,
                value: 4,
                pass: 0
            })
        );
    }

    #[test]
    fn hierarchy_round_trip_on_a_path() {
        let map = path_map(&[2, 1]);
        let tree = map.to_tree().unwrap();
        assert_eq!(tree.root_alpha(), 2);
        assert_eq!(tree.cut(1).components(), vec![vec![0], vec![1, 2]]);
        assert_eq!(SaliencyMap::from_tree(&tree, map.graph()).unwrap(), map);
        assert_eq!(path_map(&[0, 0]).to_tree().unwrap().node_count(), 1);
    }

    #[test]
    fn range_filtering() {
        let g = image_graph(3, &[0, 2, 3]);
        let s = SaliencyMap::of_graph(&g).unwrap();
        let f = g.vertex_weights().unwrap();
        assert_eq!(s.omega_saliency(f).unwrap().values(), &[3, 1]);
        assert_eq!(s.range_filter(f, 0).unwrap().values(), &[3, 1]);
        assert_eq!(s.range_filter(f, 1).unwrap().values(), &[3, 0]);
        let constant = image_graph(2, &[4, 4, 4, 4]);
        let s = SaliencyMap::of_graph(&constant).unwrap();
        assert!(s
            .range_filter(constant.vertex_weights().unwrap(), 0)
            .unwrap()
            .values()
            .iter()
            .all(|&v| v == 0));
    }

    #[test]
    fn khalimsky_rendering() {
        let one = SaliencyMap::of_graph(&image_graph(1, &[9]))
            .unwrap()
            .render_khalimsky()
            .unwrap();
        assert_eq!((one.width, one.height, one.values.clone()), (1, 1, vec![0]));

        let two = SaliencyMap::of_graph(&image_graph(2, &[0, 3]))
            .unwrap()
            .render_khalimsky()
            .unwrap();
        assert_eq!((two.width, two.height, two.values.clone()), (3, 1, vec![0, 3, 0]));

        let flat = SaliencyMap::of_graph(&image_graph(2, &[1, 1, 1, 1]))
            .unwrap()
            .render_khalimsky()
            .unwrap();
        assert_eq!((flat.width, flat.height), (3, 3));
        assert!(flat.values.iter().all(|&v| v == 0));

        // 2x2 [0 5 / 5 5]: the top-left pixel is cut off at level 5
        let corner = SaliencyMap::of_graph(&image_graph(2, &[0, 5, 5, 5]))
            .unwrap()
            .render_khalimsky()
            .unwrap();
        assert_eq!(corner.values, vec![0, 5, 0, 5, 5, 0, 0, 0, 0]);

        assert!(matches!(path_map(&[1]).render_khalimsky(), Err(Error::NotAGrid)));
    }

    #[test]
    fn log_scaling() {
        let k = KhalimskyImage {
            width: 3,
            height: 1,
            values: vec![0, 3, 1],
        };
        let s = k.log_scaled();
        assert_eq!(s[0], 0);
        assert_eq!(s[1], u16::MAX);
        assert_eq!(s[2], ((2f64.ln() / 4f64.ln()) * 65535.0).round() as u16);
    }
}
