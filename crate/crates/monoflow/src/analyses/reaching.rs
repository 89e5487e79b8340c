//! Reaching definitions: which definition sites may reach each program
//! point. Forward, gen/kill over a powerset of `(variable, site)` pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::flow::{Direction, FlowKind};
use crate::framework::{ImplicitFramework, Transfer};
use crate::lattice::PowersetLattice;
use crate::simplehal::{Block, FlowGraph, LabeledProgram, ProcInfo};

/// A definition site: a block label, or `?` for the uninitialized
/// definition assumed at program entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Def {
    Unknown,
    At(u32),
}

impl fmt::Display for Def {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Def::Unknown => write!(f, "?"),
            Def::At(l) => write!(f, "{l}"),
        }
    }
}

/// A `(variable, definition)` pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DefSite {
    pub var: String,
    pub def: Def,
}

impl DefSite {
    pub fn unknown(var: &str) -> Self {
        DefSite {
            var: var.to_string(),
            def: Def::Unknown,
        }
    }

    pub fn at(var: &str, label: u32) -> Self {
        DefSite {
            var: var.to_string(),
            def: Def::At(label),
        }
    }
}

pub type RdValue = BTreeSet<DefSite>;

/// Gen/kill transfer. Assignments and reads redefine their target; a call
/// binds the callee's value parameter at the procedure entry (call kind)
/// and redefines the result variable at the call block (return kind).
pub struct RdTransfer {
    procs: BTreeMap<String, ProcInfo>,
}

fn redefine(v: &RdValue, var: &str, def: Def) -> RdValue {
    let mut out: RdValue = v.iter().filter(|d| d.var != var).cloned().collect();
    out.insert(DefSite {
        var: var.to_string(),
        def,
    });
    out
}

impl Transfer for RdTransfer {
    type Block = Block;
    type Value = RdValue;

    fn apply(&self, label: u32, block: &Block, kind: FlowKind, value: &RdValue) -> RdValue {
        match (block, kind) {
            (Block::Assign { var, .. }, FlowKind::Normal)
            | (Block::Read { var }, FlowKind::Normal) => redefine(value, var, Def::At(label)),
            (Block::Call { proc, .. }, FlowKind::Call) => {
                let info = &self.procs[proc];
                redefine(value, &info.val_param, Def::At(info.entry_label))
            }
            (Block::Call { result, .. }, FlowKind::Return) => {
                redefine(value, result, Def::At(label))
            }
            _ => value.clone(),
        }
    }
}

/// The implicit framework for reaching definitions over a program.
pub fn reaching_definitions(
    p: &LabeledProgram,
    g: &FlowGraph,
) -> ImplicitFramework<PowersetLattice<DefSite>, RdTransfer> {
    let mut universe: BTreeSet<DefSite> = BTreeSet::new();
    for var in &p.variables {
        universe.insert(DefSite::unknown(var));
        for label in p.blocks.keys() {
            universe.insert(DefSite::at(var, *label));
        }
    }
    let initial: RdValue = p.variables.iter().map(|v| DefSite::unknown(v)).collect();
    ImplicitFramework {
        lattice: PowersetLattice::new(universe),
        direction: Direction::Forward,
        start: BTreeSet::from([g.init]),
        flows: g.flows.clone(),
        initial,
        transfer: RdTransfer {
            procs: p.procs.clone(),
        },
        blocks: p.blocks.clone(),
    }
}

/// Render as a sorted set of `(var,def)` pairs.
pub fn render(v: &RdValue) -> String {
    let items: Vec<String> = v.iter().map(|d| format!("({},{})", d.var, d.def)).collect();
    format!("{{{}}}", items.join(","))
}
