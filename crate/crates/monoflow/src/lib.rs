//! An interprocedural dataflow-analysis engine built around monotone
//! frameworks with call-string contexts.
//!
//! The engine is assembled from a minimal user specification: a lattice of
//! dataflow values, a set of start labels, a set of tagged flows (normal,
//! call, return), an initial value, and a single transfer function. From
//! that [`framework::ImplicitFramework`] it infers the full context-carrying
//! framework ([`framework::EmbellishedFramework`]) and solves it with a
//! worklist fixpoint algorithm ([`solver::solve`]).
//!
//! A reference frontend for the SimpleHal language lives in [`simplehal`],
//! and three ready-made analyses (reaching definitions, live variables,
//! constant propagation) in [`analyses`].

pub mod analyses;
pub mod flow;
pub mod framework;
pub mod lattice;
pub mod partial_map;
pub mod report;
pub mod simplehal;
pub mod solver;

pub use flow::{Direction, FlowKind, Label, LabelKind, TaggedFlow};
pub use lattice::{FlatLattice, FlatValue, Lattice, MapLattice, PowersetLattice};
pub use framework::{embellish, Context, CtxValue, EmbellishedFramework, ImplicitFramework, Transfer};
pub use partial_map::{EqUpClass, PartialMap};
pub use solver::{naive_fixpoint, solve, verify_df_residual, AnalysisResult};
