//! Flow construction: initial/final labels, intraprocedural flows, and the
//! tagged interprocedural flow graph with call/return label splitting.

use std::collections::BTreeSet;

use super::label::{Block, LabeledProgram, LComm};
use crate::flow::{Label, TaggedFlow};
use crate::simplehal::label::ProgramError;

/// The label where control enters a command.
pub fn init(c: &LComm) -> u32 {
    match c {
        LComm::Assign { label, .. }
        | LComm::Read { label, .. }
        | LComm::If { label, .. }
        | LComm::While { label, .. }
        | LComm::Call { label, .. } => *label,
        LComm::Seq(first, _) => init(first),
    }
}

/// The labels where control may leave a command.
pub fn final_labels(c: &LComm) -> BTreeSet<u32> {
    match c {
        LComm::Assign { label, .. } | LComm::Read { label, .. } | LComm::Call { label, .. } => {
            BTreeSet::from([*label])
        }
        LComm::Seq(_, second) => final_labels(second),
        LComm::If {
            then_branch,
            else_branch,
            ..
        } => {
            let mut out = final_labels(then_branch);
            out.extend(final_labels(else_branch));
            out
        }
        LComm::While { label, .. } => BTreeSet::from([*label]),
    }
}

/// The intraprocedural flow relation of a command (pre-split label ids).
pub fn flow(c: &LComm) -> BTreeSet<(u32, u32)> {
    match c {
        LComm::Assign { .. } | LComm::Read { .. } | LComm::Call { .. } => BTreeSet::new(),
        LComm::Seq(first, second) => {
            let mut out = flow(first);
            out.extend(flow(second));
            let entry = init(second);
            out.extend(final_labels(first).into_iter().map(|l| (l, entry)));
            out
        }
        LComm::If {
            label,
            then_branch,
            else_branch,
            ..
        } => {
            let mut out = flow(then_branch);
            out.extend(flow(else_branch));
            out.insert((*label, init(then_branch)));
            out.insert((*label, init(else_branch)));
            out
        }
        LComm::While { label, body, .. } => {
            let mut out = flow(body);
            out.insert((*label, init(body)));
            out.extend(final_labels(body).into_iter().map(|l| (l, *label)));
            out
        }
    }
}

/// A program's complete tagged flow graph, after call/return splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    /// All tagged flows, sorted.
    pub flows: Vec<TaggedFlow>,
    /// Where control enters the main command.
    pub init: Label,
    /// Where control leaves the main command.
    pub finals: BTreeSet<Label>,
}

/// Build the tagged flow graph of a labeled program.
///
/// Every call block's label `ℓ` is split into a call point `ℓ_c` and a
/// return point `ℓ_r`: edges into `ℓ` re-target `ℓ_c`, edges out of `ℓ`
/// re-source `ℓ_r`, and the interprocedural edges `(ℓ_c, ℓ_n)` (call) and
/// `(ℓ_x, ℓ_r)` (return) are added per call site. With
/// `call_to_return_edge`, a normal edge `(ℓ_c, ℓ_r)` carries the
/// before-call value directly to the return point.
pub fn build_tagged_flows(
    p: &LabeledProgram,
    call_to_return_edge: bool,
) -> Result<FlowGraph, ProgramError> {
    let resolve = |id: u32, entering: bool| -> Label {
        match &p.blocks[&id] {
            Block::Call { .. } => {
                if entering {
                    Label::call(id)
                } else {
                    Label::ret(id)
                }
            }
            Block::ProcEntry { .. } => Label::proc_entry(id),
            Block::ProcExit { .. } => Label::proc_exit(id),
            _ => Label::plain(id),
        }
    };
    let source = |id: u32| resolve(id, false);
    let target = |id: u32| resolve(id, true);

    let body_flows = |c: &LComm| {
        flow(c)
            .into_iter()
            .map(|(a, b)| TaggedFlow::normal(source(a), target(b)))
            .collect::<Vec<_>>()
    };

    let mut flows: BTreeSet<TaggedFlow> = BTreeSet::new();
    flows.extend(body_flows(&p.program.body));
    for proc in &p.program.procs {
        flows.extend(body_flows(&proc.body));
        flows.insert(TaggedFlow::normal(
            Label::proc_entry(proc.entry_label),
            target(init(&proc.body)),
        ));
        for l in final_labels(&proc.body) {
            flows.insert(TaggedFlow::normal(
                source(l),
                Label::proc_exit(proc.exit_label),
            ));
        }
    }

    for (id, block) in &p.blocks {
        if let Block::Call { proc, .. } = block {
            let info = p
                .procs
                .get(proc)
                .ok_or_else(|| ProgramError::UndeclaredProcedure(proc.clone()))?;
            flows.insert(TaggedFlow::call(
                Label::call(*id),
                Label::proc_entry(info.entry_label),
            ));
            flows.insert(TaggedFlow::ret(
                Label::proc_exit(info.exit_label),
                Label::ret(*id),
            ));
            if call_to_return_edge {
                flows.insert(TaggedFlow::normal(Label::call(*id), Label::ret(*id)));
            }
        }
    }

    Ok(FlowGraph {
        flows: flows.into_iter().collect(),
        init: target(init(&p.program.body)),
        finals: final_labels(&p.program.body)
            .into_iter()
            .map(source)
            .collect(),
    })
}

impl FlowGraph {
    /// All labels mentioned by the flow graph or its start/final sets.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        for f in &self.flows {
            out.insert(f.from);
            out.insert(f.to);
        }
        out.insert(self.init);
        out.extend(self.finals.iter().copied());
        out
    }

    /// The pre-split flow relation, recovered by contracting each split
    /// call/return pair back through ρ.
    pub fn contracted(&self) -> BTreeSet<(u32, u32)> {
        self.flows
            .iter()
            .filter(|f| f.kind == crate::flow::FlowKind::Normal)
            .filter(|f| f.from.original() != f.to.original())
            .map(|f| (f.from.original(), f.to.original()))
            .collect()
    }
}
