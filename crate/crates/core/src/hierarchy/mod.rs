//! Component trees: the alpha-tree of an edge-weighted graph and the
//! min-tree of a vertex-weighted one.

mod alpha_tree;
mod dendrogram;
mod forest;
mod min_tree;

pub use alpha_tree::{AlphaNode, AlphaTree};
pub use dendrogram::DendrogramNode;
pub use min_tree::{ComponentNode, ComponentTree};
