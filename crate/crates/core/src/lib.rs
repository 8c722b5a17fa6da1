//! Counting and listing pattern subgraphs of graphs embedded in orientable
//! surfaces, via surface split decompositions and a table-based dynamic
//! program over them.

pub mod error;
pub mod decomp;
pub mod engine;
pub mod dp;
pub mod generators;
pub mod graph;
pub mod iso;
pub mod layered;
pub mod map;
pub mod oracle;
pub mod ssd;

pub use error::{Error, Result};
pub use graph::{Graph, Subgraph};
pub use map::{Dart, EdgeKind, LayerStructure, Map};
