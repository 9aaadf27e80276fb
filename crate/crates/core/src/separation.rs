//! Adaptive hit-or-miss transforms, transition pixels and separation maps.
//!
//! Neighbourhoods are the in-image 4-neighbours; border pixels are not padded.

use crate::image::{grid_neighbors, GridImage};
use crate::partition::flat_zones;
use crate::union_find::UnionFind;
use crate::{Level, Result};

/// Per-pixel values with the dimensions of a source image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMap {
    pub width: usize,
    pub height: usize,
    pub values: Vec<Level>,
}

impl ScalarMap {
    fn from_fn(image: &GridImage, f: impl Fn(usize) -> Level) -> Self {
        Self {
            width: image.width(),
            height: image.height(),
            values: (0..image.len()).map(f).collect(),
        }
    }

    pub fn get(&self, x: usize, y: usize) -> Level {
        self.values[y * self.width + x]
    }

    /// Rows listed top to bottom, for golden comparisons.
    pub fn rows(&self) -> Vec<Vec<Level>> {
        self.values.chunks(self.width).map(<[Level]>::to_vec).collect()
    }
}

/// `f(p)` minus its largest strictly lower neighbour, 0 without one.
pub fn hmt_lower(image: &GridImage) -> ScalarMap {
    let f = image.values();
    ScalarMap::from_fn(image, |p| {
        image
            .neighbors(p)
            .map(|q| f[q])
            .filter(|&v| v < f[p])
            .max()
            .map_or(0, |v| f[p] - v)
    })
}

/// Smallest strictly greater neighbour minus `f(p)`, 0 without one.
pub fn hmt_greater(image: &GridImage) -> ScalarMap {
    let f = image.values();
    ScalarMap::from_fn(image, |p| {
        image
            .neighbors(p)
            .map(|q| f[q])
            .filter(|&v| v > f[p])
            .min()
            .map_or(0, |v| v - f[p])
    })
}

/// 1 on pixels having both a strictly lower and a strictly greater neighbour.
pub fn transition_mask(image: &GridImage) -> ScalarMap {
    let lower = hmt_lower(image);
    let greater = hmt_greater(image);
    ScalarMap::from_fn(image, |p| (lower.values[p].min(greater.values[p]) > 0) as Level)
}

fn differing_neighbor_diffs(image: &GridImage, p: usize) -> impl Iterator<Item = Level> + '_ {
    let f = image.values();
    image.neighbors(p).map(move |q| f[q].abs_diff(f[p])).filter(|&d| d > 0)
}

/// Minimum absolute difference between a pixel and its differing
/// neighbours, 0 when every neighbour has the pixel's value.
pub fn min_separation_pixels(image: &GridImage) -> ScalarMap {
    ScalarMap::from_fn(image, |p| differing_neighbor_diffs(image, p).min().unwrap_or(0))
}

pub fn max_separation_pixels(image: &GridImage) -> ScalarMap {
    ScalarMap::from_fn(image, |p| differing_neighbor_diffs(image, p).max().unwrap_or(0))
}

/// Aggregates the non-zero values of `pixel_map` over each flat zone.
fn per_flat_zone(image: &GridImage, pixel_map: &ScalarMap, pick: fn(Level, Level) -> Level) -> Result<ScalarMap> {
    let zones = flat_zones(image)?;
    let mut acc: Vec<Option<Level>> = vec![None; image.len()];
    for (p, &v) in pixel_map.values.iter().enumerate() {
        if v != 0 {
            let slot = &mut acc[zones.label(p)];
            *slot = Some(slot.map_or(v, |a| pick(a, v)));
        }
    }
    Ok(ScalarMap::from_fn(image, |p| acc[zones.label(p)].unwrap_or(0)))
}

/// Each pixel gets the smallest non-zero pixel separation of its flat zone.
pub fn min_separation_flatzones(image: &GridImage) -> Result<ScalarMap> {
    per_flat_zone(image, &min_separation_pixels(image), Level::min)
}

pub fn max_separation_flatzones(image: &GridImage) -> Result<ScalarMap> {
    per_flat_zone(image, &max_separation_pixels(image), Level::max)
}

fn plateau_flags(map: &ScalarMap, beats: impl Fn(Level, Level) -> bool) -> ScalarMap {
    let v = &map.values;
    let neighbors = |p| grid_neighbors(map.width, map.height, p);
    let mut uf = UnionFind::new(v.len());
    for p in 0..v.len() {
        for q in neighbors(p) {
            if v[p] == v[q] {
                uf.union(p, q);
            }
        }
    }
    let mut beaten = vec![false; v.len()];
    for p in 0..v.len() {
        if neighbors(p).any(|q| beats(v[q], v[p])) {
            let r = uf.find(p);
            beaten[r] = true;
        }
    }
    ScalarMap {
        width: map.width,
        height: map.height,
        values: (0..v.len()).map(|p| !beaten[uf.find(p)] as Level).collect(),
    }
}

/// Binary mask of connected plateaus without a strictly lower neighbour.
pub fn regional_minima(map: &ScalarMap) -> ScalarMap {
    plateau_flags(map, |q, p| q < p)
}

/// Binary mask of connected plateaus without a strictly higher neighbour.
pub fn regional_maxima(map: &ScalarMap) -> ScalarMap {
    plateau_flags(map, |q, p| q > p)
}
