//! Morphological hierarchical segmentation of greyscale rasters.
//!
//! The crate works on 4-connected pixel graphs weighted by intensity
//! dissimilarity. From such a graph it builds the alpha-tree (the
//! single-linkage dendrogram of quasi-flat zones), answers constrained
//! connectivity queries on it, and converts hierarchies to and from
//! saliency maps (ultrametric watersheds).
//!
//! ```
//! use hierseg::{AlphaTree, EdgeWeightedGraph, GridImage};
//!
//! let image = GridImage::from_u8(3, 1, &[0, 2, 3]).unwrap();
//! let graph = EdgeWeightedGraph::from_image(&image).unwrap();
//! let tree = AlphaTree::build(&graph).unwrap();
//!
//! assert_eq!(tree.root_alpha(), 2);
//! assert_eq!(tree.cut(1).component_count(), 2);
//! assert_eq!(tree.constrained_cc(2, 1).components(), vec![vec![0], vec![1, 2]]);
//! ```

pub mod alpha_n;
pub mod error;
pub mod graph;
pub mod hierarchy;
pub mod image;
pub mod partition;
pub mod raster;
pub mod separation;
pub mod ultrametric;
pub mod union_find;

pub use error::{Error, Result};
pub use graph::{AbsoluteDifference, Dissimilarity, Edge, EdgeWeightedGraph, GridShape};
pub use hierarchy::{AlphaNode, AlphaTree, ComponentNode, ComponentTree};
pub use image::{BitDepth, GridImage};
pub use partition::{alpha_cc_partition, flat_zones, Partition};
pub use separation::ScalarMap;
pub use ultrametric::{KhalimskyImage, SaliencyMap, WatershedViolation};
pub use union_find::UnionFind;

/// Intensity, edge weight and hierarchy level type.
pub type Level = u32;
