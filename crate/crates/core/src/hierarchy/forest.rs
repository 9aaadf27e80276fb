//! Binary merge forests as produced by union-find tree construction, and
//! their reduction to canonical component trees.

use crate::Level;

const NONE: u32 = u32::MAX;

/// Nodes `0..elements` are the elements themselves; every later node is a
/// merge created after its children, so `parent > child` always holds.
pub(crate) struct MergeForest {
    parent: Vec<u32>,
    level: Vec<Level>,
    elements: usize,
}

pub(crate) struct CanonicalForest {
    pub parent: Vec<Option<usize>>,
    pub level: Vec<Level>,
    pub node_of_element: Vec<usize>,
}

impl MergeForest {
    pub fn new(element_levels: Vec<Level>) -> Self {
        let elements = element_levels.len();
        let mut level = element_levels;
        level.reserve(elements.saturating_sub(1));
        let mut parent = Vec::with_capacity(2 * elements);
        parent.resize(elements, NONE);
        Self {
            parent,
            level,
            elements,
        }
    }

    /// Creates a merge node above `a` and `b`.
    pub fn merge(&mut self, a: u32, b: u32, level: Level) -> u32 {
        let k = self.parent.len() as u32;
        self.parent.push(NONE);
        self.level.push(level);
        self.parent[a as usize] = k;
        self.parent[b as usize] = k;
        k
    }

    /// Collapses every node into its parent when both share a level, then
    /// orders the survivors by (level, smallest element). The order is a
    /// function of the hierarchy alone, not of the merge sequence.
    pub fn canonicalize(self) -> CanonicalForest {
        let Self {
            parent,
            level,
            elements,
        } = self;
        let m = parent.len();

        let mut canon = vec![0u32; m];
        for i in (0..m).rev() {
            let p = parent[i];
            canon[i] = if p != NONE && level[p as usize] == level[i] {
                canon[p as usize]
            } else {
                i as u32
            };
        }

        let mut min_element = vec![u32::MAX; m];
        for (e, &c) in canon.iter().enumerate().take(elements) {
            let slot = &mut min_element[c as usize];
            *slot = (*slot).min(e as u32);
        }
        for i in 0..m {
            if canon[i] as usize == i && parent[i] != NONE {
                let cp = canon[parent[i] as usize] as usize;
                min_element[cp] = min_element[cp].min(min_element[i]);
            }
        }

        let mut kept: Vec<u32> = (0..m as u32).filter(|&i| canon[i as usize] == i).collect();
        kept.sort_unstable_by_key(|&i| ((level[i as usize] as u64) << 32) | min_element[i as usize] as u64);

        let mut new_index = vec![NONE; m];
        for (k, &i) in kept.iter().enumerate() {
            new_index[i as usize] = k as u32;
        }
        let new_parent = kept
            .iter()
            .map(|&i| {
                let p = parent[i as usize];
                (p != NONE).then(|| new_index[canon[p as usize] as usize] as usize)
            })
            .collect();
        let new_level = kept.iter().map(|&i| level[i as usize]).collect();
        let node_of_element = (0..elements).map(|e| new_index[canon[e] as usize] as usize).collect();

        CanonicalForest {
            parent: new_parent,
            level: new_level,
            node_of_element,
        }
    }
}
