//! Procedural generator for graph-reasoning benchmarks.
//!
//! Graphs are sampled from random models, rendered in one of several textual
//! description languages, paired with a query, and solved by reference
//! algorithms that also emit step-by-step traces. The verifier judges free
//! text answers and the mask annotator decides which trace tokens are
//! supervised during fine-tuning.

pub mod answer;
pub mod dataset;
pub mod factory;
pub mod gdl;
pub mod generate;
pub mod graph;
pub mod mask;
pub mod oracle;
pub mod solvers;
pub mod task;
pub mod trace;
pub mod verifier;
