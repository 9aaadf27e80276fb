//! JSON dendrogram documents.
//!
//! A document is the root node object. Every node carries
//! `{id, alpha, area, min, max, children}`; leaves additionally list their
//! `pixels`. Ids are the tree's node indices and children are sorted by id,
//! so the output is stable byte for byte.

use serde::{Deserialize, Serialize};

use super::alpha_tree::{AlphaNode, AlphaTree};
use crate::{Error, Level, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DendrogramNode {
    pub id: usize,
    pub alpha: Level,
    pub area: usize,
    pub min: Level,
    pub max: Level,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pixels: Vec<usize>,
    pub children: Vec<DendrogramNode>,
}

impl AlphaTree {
    pub fn to_dendrogram(&self) -> DendrogramNode {
        let children = self.children();
        let mut pixels = vec![Vec::new(); self.node_count()];
        for (p, &leaf) in self.leaf_map().iter().enumerate() {
            pixels[leaf].push(p);
        }
        // Children precede parents, so one forward sweep builds every subtree.
        let mut built: Vec<Option<DendrogramNode>> = vec![None; self.node_count()];
        for (i, node) in self.nodes().iter().enumerate() {
            let kids = children[i]
                .iter()
                .map(|&c| built[c].take().expect("child built before parent"))
                .collect();
            built[i] = Some(DendrogramNode {
                id: i,
                alpha: node.alpha,
                area: node.area,
                min: node.min_value,
                max: node.max_value,
                pixels: std::mem::take(&mut pixels[i]),
                children: kids,
            });
        }
        built[self.root()].take().expect("root")
    }

    pub fn from_dendrogram(doc: &DendrogramNode) -> Result<Self> {
        let mut nodes: Vec<Option<AlphaNode>> = Vec::new();
        let mut leaf_of_pixel: Vec<Option<usize>> = Vec::new();
        let mut stack = vec![(doc, None)];
        while let Some((d, parent)) = stack.pop() {
            if d.id >= nodes.len() {
                nodes.resize(d.id + 1, None);
            }
            if nodes[d.id].is_some() {
                return Err(Error::Dendrogram(format!("duplicate node id {}", d.id)));
            }
            nodes[d.id] = Some(AlphaNode {
                parent,
                alpha: d.alpha,
                area: d.area,
                min_value: d.min,
                max_value: d.max,
            });
            if !d.pixels.is_empty() && !d.children.is_empty() {
                return Err(Error::Dendrogram(format!("inner node {} lists pixels", d.id)));
            }
            for &p in &d.pixels {
                if p >= leaf_of_pixel.len() {
                    leaf_of_pixel.resize(p + 1, None);
                }
                if leaf_of_pixel[p].replace(d.id).is_some() {
                    return Err(Error::Dendrogram(format!("pixel {p} listed twice")));
                }
            }
            stack.extend(d.children.iter().map(|c| (c, Some(d.id))));
        }
        let nodes = nodes
            .into_iter()
            .enumerate()
            .map(|(i, n)| n.ok_or_else(|| Error::Dendrogram(format!("missing node id {i}"))))
            .collect::<Result<Vec<_>>>()?;
        let leaf_of_pixel = leaf_of_pixel
            .into_iter()
            .enumerate()
            .map(|(p, l)| l.ok_or_else(|| Error::Dendrogram(format!("pixel {p} not listed"))))
            .collect::<Result<Vec<_>>>()?;
        AlphaTree::from_parts(nodes, leaf_of_pixel).map_err(|e| Error::Dendrogram(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dendrogram()).expect("dendrogram serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let doc = DendrogramNode::deserialize(&mut de)?;
        de.end()?;
        Self::from_dendrogram(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{EdgeWeightedGraph, GridImage};

    fn tree_of(width: usize, values: &[u8]) -> AlphaTree {
        let img = GridImage::from_u8(width, values.len() / width, values).unwrap();
        AlphaTree::build(&EdgeWeightedGraph::from_image(&img).unwrap()).unwrap()
    }

    #[test]
    fn single_node_document() {
        let doc = tree_of(2, &[1, 1, 1, 1]).to_dendrogram();
        assert!(doc.children.is_empty());
        assert_eq!(doc.pixels, vec![0, 1, 2, 3]);
        let json: serde_json::Value = serde_json::from_str(&tree_of(2, &[1, 1, 1, 1]).to_json()).unwrap();
        assert_eq!(json["children"], serde_json::json!([]));
    }

    #[test]
    fn three_pixel_document() {
        let t = tree_of(3, &[0, 2, 3]);
        let doc = t.to_dendrogram();
        assert_eq!((doc.id, doc.alpha, doc.area, doc.min, doc.max), (4, 2, 3, 0, 3));
        assert_eq!(doc.children.len(), 2);
        assert_eq!(doc.children[1].alpha, 1);
        assert_eq!(doc.children[1].children.len(), 2);
        assert_eq!(AlphaTree::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn keys_come_out_in_schema_order() {
        let json = tree_of(1, &[5]).to_json();
        let order: Vec<usize> = [
            "\"id\"",
            "\"alpha\"",
            "\"area\"",
            "\"min\"",
            "\"max\"",
            "\"pixels\"",
            "\"children\"",
        ]
        .iter()
        .map(|k| json.find(k).unwrap())
        .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]), "{json}");
    }

    #[test]
    fn rejects_broken_documents() {
        let t = tree_of(3, &[0, 2, 3]);
        let mut doc = t.to_dendrogram();
        doc.children[0].pixels.push(1);
        assert!(AlphaTree::from_dendrogram(&doc).is_err());

        let mut doc = t.to_dendrogram();
        doc.area = 5;
        assert!(AlphaTree::from_dendrogram(&doc).is_err());

        assert!(AlphaTree::from_json("{\"id\": 0}").is_err());
    }
}
