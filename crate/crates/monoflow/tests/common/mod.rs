//! Shared helpers for the integration and acceptance suites.
//!
//! Each test target compiles this module separately and uses a different
//! slice of it.
#![allow(dead_code)]

pub mod corpus;
pub mod interp;

use monoflow::framework::{embellish, EmbellishedFramework, Transfer};
use monoflow::lattice::Lattice;
use monoflow::simplehal::{build_tagged_flows, load, FlowGraph, LabeledProgram};
use monoflow::solver::{naive_fixpoint, solve, verify_df_residual, AnalysisResult};

/// Default context bound for corpus runs; deeper than any corpus call chain.
pub const K: usize = 16;

pub fn load_program(source: &str) -> (LabeledProgram, FlowGraph) {
    let lp = load(source).expect("corpus program parses");
    let g = build_tagged_flows(&lp, false).expect("corpus flows build");
    (lp, g)
}

/// Solve and require success (no context overflow on the corpus).
pub fn solved<L, T>(fw: &EmbellishedFramework<L, T>) -> AnalysisResult<L::Value>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    solve(fw).expect("corpus program solves")
}

/// solve ≡ naive_fixpoint: structural equality of entry and exit tables.
pub fn assert_solver_equivalence<L, T>(fw: &EmbellishedFramework<L, T>, what: &str)
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let a = solved(fw);
    let b = naive_fixpoint(fw).expect("reference solver succeeds");
    assert_eq!(a.entry, b.entry, "entry tables differ: {what}");
    assert_eq!(a.exit, b.exit, "exit tables differ: {what}");
}

/// The terminal invariant: the solved tables satisfy the residual check.
pub fn assert_residual_ok<L, T>(fw: &EmbellishedFramework<L, T>, what: &str)
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let r = solved(fw);
    let violations = verify_df_residual(fw, &r);
    assert!(violations.is_empty(), "residual violations in {what}: {violations:?}");
}

/// Embellish the three bundled analyses over a program and hand each to `f`.
/// (Frameworks have distinct types, so this is spelled out per analysis.)
pub fn embellished_rd(
    lp: &LabeledProgram,
    g: &FlowGraph,
) -> EmbellishedFramework<
    monoflow::lattice::PowersetLattice<monoflow::analyses::DefSite>,
    monoflow::analyses::RdTransfer,
> {
    embellish(monoflow::analyses::reaching_definitions(lp, g), K).unwrap()
}

pub fn embellished_lv(
    lp: &LabeledProgram,
    g: &FlowGraph,
) -> EmbellishedFramework<monoflow::lattice::PowersetLattice<String>, monoflow::analyses::LvTransfer>
{
    embellish(monoflow::analyses::live_variables(lp, g), K).unwrap()
}

pub fn embellished_cp(
    lp: &LabeledProgram,
    g: &FlowGraph,
) -> EmbellishedFramework<
    monoflow::lattice::MapLattice<String, monoflow::lattice::FlatLattice>,
    monoflow::analyses::CpTransfer,
> {
    embellish(monoflow::analyses::constant_propagation(lp, g), K).unwrap()
}
