//! Live variables: which variables may still be read before being
//! redefined. Backward, gen/kill over the powerset of program variables.

use std::collections::BTreeSet;

use crate::flow::{reverse_tagged, Direction, FlowKind};
use crate::framework::{ImplicitFramework, Transfer};
use crate::lattice::PowersetLattice;
use crate::simplehal::{Block, FlowGraph, LabeledProgram};

pub type LvValue = BTreeSet<String>;

/// Assignments kill their target and generate the free variables of their
/// right-hand side; reads kill; conditions generate their free variables.
pub struct LvTransfer;

impl Transfer for LvTransfer {
    type Block = Block;
    type Value = LvValue;

    fn apply(&self, _label: u32, block: &Block, kind: FlowKind, value: &LvValue) -> LvValue {
        if kind != FlowKind::Normal {
            return value.clone();
        }
        match block {
            Block::Assign { var, expr } => {
                let mut out: LvValue = value.iter().filter(|v| *v != var).cloned().collect();
                out.extend(expr.free_vars());
                out
            }
            Block::Read { var } => value.iter().filter(|v| *v != var).cloned().collect(),
            Block::Cond { expr } => {
                let mut out = value.clone();
                out.extend(expr.free_vars());
                out
            }
            _ => value.clone(),
        }
    }
}

/// The implicit framework for live variables: starts at the final labels
/// and runs on reversed flows (call and return roles swapped).
pub fn live_variables(
    p: &LabeledProgram,
    g: &FlowGraph,
) -> ImplicitFramework<PowersetLattice<String>, LvTransfer> {
    ImplicitFramework {
        lattice: PowersetLattice::new(p.variables.iter().cloned()),
        direction: Direction::Backward,
        start: g.finals.clone(),
        flows: reverse_tagged(&g.flows),
        initial: LvValue::new(),
        transfer: LvTransfer,
        blocks: p.blocks.clone(),
    }
}

/// Render as a sorted variable set.
pub fn render(v: &LvValue) -> String {
    let items: Vec<&str> = v.iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(","))
}
