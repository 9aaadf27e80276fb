//! Degree-constrained alpha-connectivity.
//!
//! Pixels with few similar neighbours sit in transition regions between
//! homogeneous structures. Requiring every pixel of a linking path to have
//! at least `n` neighbours within `alpha` keeps those pixels apart.

use crate::image::GridImage;
use crate::partition::Partition;
use crate::separation::ScalarMap;
use crate::union_find::UnionFind;
use crate::Level;

/// Number of 4-neighbours `q` with `|f(q) - f(p)| <= alpha`.
pub fn alpha_degree_map(image: &GridImage, alpha: Level) -> ScalarMap {
    let f = image.values();
    ScalarMap {
        width: image.width(),
        height: image.height(),
        values: (0..image.len())
            .map(|p| image.neighbors(p).filter(|&q| f[q].abs_diff(f[p]) <= alpha).count() as Level)
            .collect(),
    }
}

/// Components linked by alpha-paths whose every pixel, endpoints included,
/// has alpha-degree `>= min_degree`. Other pixels are singletons.
pub fn alpha_n_partition(image: &GridImage, alpha: Level, min_degree: u32) -> Partition {
    let f = image.values();
    let degree = alpha_degree_map(image, alpha).values;
    let qualifies = |p: usize| degree[p] >= min_degree;
    let mut uf = UnionFind::new(image.len());
    let w = image.width();
    for p in 0..image.len() {
        if !qualifies(p) {
            continue;
        }
        let right = (p % w + 1 < w).then_some(p + 1);
        let down = (p + w < image.len()).then_some(p + w);
        for q in [right, down].into_iter().flatten() {
            if qualifies(q) && f[p].abs_diff(f[q]) <= alpha {
                uf.union(p, q);
            }
        }
    }
    Partition::from_union_find(&mut uf)
}
