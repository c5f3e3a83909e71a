//! Crossings and nestings on arc annotated diagrams.
//!
//! Matchings, set partitions and permutations are all drawn as arc
//! diagrams. The crate computes their crossing/nesting statistics, decides
//! which diagrams admit the label-reversal involution, applies it, and
//! counts the admissible objects exactly, both through generating functions
//! and by exhaustive enumeration.

pub mod bijection;
pub mod diagram;
pub mod enumerate;
pub mod render;
pub mod stats;
pub mod structure;

pub use bijection::{ptr, ptr_coloured, ColourSemantics, Step4};
pub use diagram::{parse, serialize, Arc, ArcDiagram, ClassKind, ObjectClass};
pub use stats::{label_of, DiagramLabel, Label};
pub use structure::{is_admissible, AdmissibilityReport, BlockType};
