//! Fixtures and brute-force oracles shared by the integration tests. The
//! oracles only use breadth-first floods and exhaustive path relaxation, never
//! the union-find or tree code they are compared against.
#![allow(dead_code)]

use std::collections::VecDeque;

use hierseg::raster::decode_raster;
use hierseg::{EdgeWeightedGraph, GridImage, Level, Partition};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> GridImage {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    decode_raster(&bytes).unwrap()
}

pub fn rows(image: &GridImage) -> Vec<Vec<Level>> {
    image.values().chunks(image.width()).map(<[Level]>::to_vec).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize, levels: u32) -> GridImage {
    let values: Vec<Level> = (0..width * height).map(|_| rng.random_range(0..levels)).collect();
    GridImage::new(width, height, hierseg::BitDepth::Eight, values).unwrap()
}

/// 100 seeded 16x16 8-bit images.
pub fn suite_16x16() -> Vec<GridImage> {
    let mut r = rng(0x5eed_1616);
    (0..100).map(|_| random_image(&mut r, 16, 16, 256)).collect()
}

pub fn graph(image: &GridImage) -> EdgeWeightedGraph {
    EdgeWeightedGraph::from_image(image).unwrap()
}

fn weighted_adjacency(graph: &EdgeWeightedGraph) -> Vec<Vec<(usize, Level)>> {
    let mut adj = vec![Vec::new(); graph.vertex_count()];
    for e in graph.edges() {
        adj[e.u].push((e.v, e.weight));
        adj[e.v].push((e.u, e.weight));
    }
    adj
}

/// Vertices reachable from `start` through edges of weight `<= alpha`
/// whose endpoints both pass `allowed`. Sorted ascending.
pub fn flood(graph: &EdgeWeightedGraph, start: usize, alpha: Level, allowed: &dyn Fn(usize) -> bool) -> Vec<usize> {
    let adj = weighted_adjacency(graph);
    let mut seen = vec![false; graph.vertex_count()];
    let mut out = vec![start];
    seen[start] = true;
    if !allowed(start) {
        return out;
    }
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &(u, w) in &adj[v] {
            if !seen[u] && w <= alpha && allowed(u) {
                seen[u] = true;
                out.push(u);
                queue.push_back(u);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Builds a partition from one set per vertex (the set containing it),
/// asserting the sets are consistent.
pub fn partition_from_sets(sets: &[Vec<usize>]) -> Partition {
    let labels: Vec<usize> = sets.iter().map(|s| s[0]).collect();
    for (v, s) in sets.iter().enumerate() {
        assert!(s.contains(&v), "set of {v} misses it");
        for &u in s {
            assert_eq!(&sets[u], s, "sets of {u} and {v} disagree");
        }
    }
    Partition::from_labels(&labels)
}

pub fn oracle_alpha_cc(graph: &EdgeWeightedGraph, alpha: Level) -> Partition {
    let sets: Vec<Vec<usize>> = (0..graph.vertex_count())
        .map(|p| flood(graph, p, alpha, &|_| true))
        .collect();
    partition_from_sets(&sets)
}

fn range_of(values: &[Level], set: &[usize]) -> Level {
    let lo = set.iter().map(|&p| values[p]).min().unwrap();
    let hi = set.iter().map(|&p| values[p]).max().unwrap();
    hi - lo
}

/// Largest `a`-CC with `a <= alpha` and range `<= omega`, for every pixel.
pub fn oracle_constrained(graph: &EdgeWeightedGraph, alpha: Level, omega: Level) -> Partition {
    let f = graph.vertex_weights().unwrap();
    let top = alpha.min(graph.max_weight());
    let sets: Vec<Vec<usize>> = (0..graph.vertex_count())
        .map(|p| {
            let mut best = vec![p];
            for a in 0..=top {
                let cc = flood(graph, p, a, &|_| true);
                if range_of(f, &cc) <= omega && cc.len() > best.len() {
                    best = cc;
                }
            }
            best
        })
        .collect();
    partition_from_sets(&sets)
}

pub fn oracle_omega_cc(graph: &EdgeWeightedGraph, omega: Level) -> Partition {
    oracle_constrained(graph, graph.max_weight(), omega)
}

/// All-pairs minimax path values by exhaustive relaxation.
pub fn oracle_minimax(graph: &EdgeWeightedGraph) -> Vec<Vec<Level>> {
    let n = graph.vertex_count();
    let mut d = vec![vec![Level::MAX; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in graph.edges() {
        d[e.u][e.v] = d[e.u][e.v].min(e.weight);
        d[e.v][e.u] = d[e.v][e.u].min(e.weight);
    }
    for k in 0..n {
        let through = d[k].clone();
        for row in d.iter_mut() {
            let dik = row[k];
            if dik == Level::MAX {
                continue;
            }
            for (dij, &dkj) in row.iter_mut().zip(&through) {
                *dij = (*dij).min(dik.max(dkj));
            }
        }
    }
    d
}

/// Brute-force degree-constrained components.
pub fn oracle_alpha_n(image: &GridImage, alpha: Level, n: u32) -> Partition {
    let g = graph(image);
    let f = image.values();
    let degree: Vec<u32> = (0..image.len())
        .map(|p| image.neighbors(p).filter(|&q| f[q].abs_diff(f[p]) <= alpha).count() as u32)
        .collect();
    let sets: Vec<Vec<usize>> = (0..image.len())
        .map(|p| flood(&g, p, alpha, &|q| degree[q] >= n))
        .collect();
    partition_from_sets(&sets)
}

/// Distinct edge weights plus one level above the largest.
pub fn levels_of(graph: &EdgeWeightedGraph) -> Vec<Level> {
    let mut w: Vec<Level> = graph.edges().iter().map(|e| e.weight).collect();
    w.push(0);
    w.push(graph.max_weight() + 1);
    w.sort_unstable();
    w.dedup();
    w
}

/// Non-singleton 1_3 components as drawn: 1 = left core, 2 = right core,
/// 0 = singleton. Rows top to bottom.
const CORES: [[u8; 7]; 7] = [
    [0, 1, 0, 0, 2, 2, 0],
    [1, 1, 1, 2, 2, 2, 2],
    [1, 1, 1, 0, 2, 2, 2],
    [1, 1, 1, 0, 2, 2, 2],
    [1, 1, 1, 0, 2, 2, 2],
    [1, 1, 1, 1, 2, 2, 2],
    [0, 1, 1, 0, 0, 2, 0],
];

/// The drawn cores as a partition; every unmarked pixel is a singleton.
pub fn drawn_alphadeg_cores() -> Partition {
    let mut singleton = 49..;
    let labels: Vec<usize> = CORES
        .iter()
        .flatten()
        .map(|&c| if c == 0 { singleton.next().unwrap() } else { c as usize })
        .collect();
    Partition::from_labels(&labels)
}
