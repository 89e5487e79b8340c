//! Constant propagation: which variables hold a known constant at each
//! point. Forward, over total maps from variables into the flat constant
//! lattice. Interprocedurally precise thanks to call-string contexts: two
//! call sites passing different constants keep them apart.

use std::collections::{BTreeMap, BTreeSet};

use crate::flow::{Direction, FlowKind};
use crate::framework::{ImplicitFramework, Transfer};
use crate::lattice::{FlatLattice, FlatValue, MapLattice};
use crate::simplehal::{AExp, ArithOp, Block, FlowGraph, LabeledProgram, ProcInfo};

pub type CpValue = BTreeMap<String, FlatValue>;

/// Abstract evaluation of an arithmetic expression: strict in ⊥,
/// ⊤-absorbing, with division by the constant zero going to ⊤.
pub fn abstract_eval(e: &AExp, env: &CpValue) -> FlatValue {
    match e {
        AExp::Num(n) => FlatValue::Const(*n),
        AExp::Var(x) => env.get(x).copied().unwrap_or(FlatValue::Top),
        AExp::Neg(a) => match abstract_eval(a, env) {
            FlatValue::Bottom => FlatValue::Bottom,
            FlatValue::Const(n) => n.checked_neg().map_or(FlatValue::Top, FlatValue::Const),
            FlatValue::Top => FlatValue::Top,
        },
        AExp::Bin(op, a, b) => {
            let (va, vb) = (abstract_eval(a, env), abstract_eval(b, env));
            match (va, vb) {
                (FlatValue::Bottom, _) | (_, FlatValue::Bottom) => FlatValue::Bottom,
                (FlatValue::Top, _) | (_, FlatValue::Top) => FlatValue::Top,
                (FlatValue::Const(x), FlatValue::Const(y)) => {
                    let result = match op {
                        ArithOp::Add => x.checked_add(y),
                        ArithOp::Sub => x.checked_sub(y),
                        ArithOp::Mul => x.checked_mul(y),
                        ArithOp::Div => {
                            if y == 0 {
                                None
                            } else {
                                x.checked_div(y)
                            }
                        }
                    };
                    result.map_or(FlatValue::Top, FlatValue::Const)
                }
            }
        }
    }
}

/// Assignments bind the abstract value of their right-hand side; reads bind
/// ⊤. A call binds the callee's value parameter to the argument value and
/// resets its result parameter to ⊤ (call kind); returning binds the call's
/// result variable to the result parameter's value (return kind).
pub struct CpTransfer {
    procs: BTreeMap<String, ProcInfo>,
}

impl Transfer for CpTransfer {
    type Block = Block;
    type Value = CpValue;

    fn apply(&self, _label: u32, block: &Block, kind: FlowKind, value: &CpValue) -> CpValue {
        match (block, kind) {
            (Block::Assign { var, expr }, FlowKind::Normal) => {
                let mut out = value.clone();
                out.insert(var.clone(), abstract_eval(expr, value));
                out
            }
            (Block::Read { var }, FlowKind::Normal) => {
                let mut out = value.clone();
                out.insert(var.clone(), FlatValue::Top);
                out
            }
            (Block::Call { proc, arg, .. }, FlowKind::Call) => {
                let info = &self.procs[proc];
                let mut out = value.clone();
                out.insert(info.res_param.clone(), FlatValue::Top);
                out.insert(info.val_param.clone(), abstract_eval(arg, value));
                out
            }
            (Block::Call { proc, result, .. }, FlowKind::Return) => {
                let info = &self.procs[proc];
                let res = value
                    .get(&info.res_param)
                    .copied()
                    .unwrap_or(FlatValue::Top);
                let mut out = value.clone();
                out.insert(result.clone(), res);
                out
            }
            _ => value.clone(),
        }
    }
}

/// The implicit framework for constant propagation. The initial value binds
/// every program variable to ⊤ (nothing is known at entry).
pub fn constant_propagation(
    p: &LabeledProgram,
    g: &FlowGraph,
) -> ImplicitFramework<MapLattice<String, FlatLattice>, CpTransfer> {
    let lattice = MapLattice::new(p.variables.iter().cloned(), FlatLattice);
    let initial = lattice.constant(FlatValue::Top);
    ImplicitFramework {
        lattice,
        direction: Direction::Forward,
        start: BTreeSet::from([g.init]),
        flows: g.flows.clone(),
        initial,
        transfer: CpTransfer {
            procs: p.procs.clone(),
        },
        blocks: p.blocks.clone(),
    }
}

/// Render as a sorted `var↦value` map.
pub fn render(v: &CpValue) -> String {
    let items: Vec<String> = v.iter().map(|(k, val)| format!("{k}↦{val}")).collect();
    format!("{{{}}}", items.join(","))
}
