//! Program labels and tagged flows: the shared vocabulary between
//! language frontends and the analysis engine.

use std::collections::BTreeSet;
use std::fmt;

/// What role a label plays in the flow graph.
///
/// Call blocks are split into a call point and a return point that share the
/// original label id; `ρ` (see [`Label::original`]) maps both back to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelKind {
    Plain,
    /// `ℓ_c`: the call side of a split call block.
    CallSite,
    /// `ℓ_r`: the return side of a split call block.
    ReturnSite,
    /// `ℓ_n`: the no-op entry block of a procedure.
    ProcEntry,
    /// `ℓ_x`: the no-op exit block of a procedure.
    ProcExit,
}

/// A program point. Ordering is by id first, with the call side of a split
/// label sorting before its return side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub id: u32,
    pub kind: LabelKind,
}

impl Label {
    pub fn plain(id: u32) -> Self {
        Label {
            id,
            kind: LabelKind::Plain,
        }
    }

    pub fn call(id: u32) -> Self {
        Label {
            id,
            kind: LabelKind::CallSite,
        }
    }

    pub fn ret(id: u32) -> Self {
        Label {
            id,
            kind: LabelKind::ReturnSite,
        }
    }

    pub fn proc_entry(id: u32) -> Self {
        Label {
            id,
            kind: LabelKind::ProcEntry,
        }
    }

    pub fn proc_exit(id: u32) -> Self {
        Label {
            id,
            kind: LabelKind::ProcExit,
        }
    }

    /// ρ: the label of the block this point belongs to. For a split call
    /// label this is the original (pre-split) label; otherwise the identity.
    pub fn original(&self) -> u32 {
        self.id
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LabelKind::CallSite => write!(f, "{}c", self.id),
            LabelKind::ReturnSite => write!(f, "{}r", self.id),
            _ => write!(f, "{}", self.id),
        }
    }
}

/// Flow tag: normal, calling, or returning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlowKind {
    Normal,
    Call,
    Return,
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowKind::Normal => write!(f, "N"),
            FlowKind::Call => write!(f, "C"),
            FlowKind::Return => write!(f, "R"),
        }
    }
}

/// A directed flow `(from, to)` tagged with its kind. The tag set over all
/// flows of a program determines the Γ classification used by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedFlow {
    pub from: Label,
    pub to: Label,
    pub kind: FlowKind,
}

impl TaggedFlow {
    pub fn normal(from: Label, to: Label) -> Self {
        TaggedFlow {
            from,
            to,
            kind: FlowKind::Normal,
        }
    }

    pub fn call(from: Label, to: Label) -> Self {
        TaggedFlow {
            from,
            to,
            kind: FlowKind::Call,
        }
    }

    pub fn ret(from: Label, to: Label) -> Self {
        TaggedFlow {
            from,
            to,
            kind: FlowKind::Return,
        }
    }
}

impl fmt::Display for TaggedFlow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}):{}", self.from, self.to, self.kind)
    }
}

/// Analysis direction. Backward analyses run on reversed flows starting from
/// the final labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Reverse every edge of an untagged flow set.
pub fn flow_rev(flows: &BTreeSet<(Label, Label)>) -> BTreeSet<(Label, Label)> {
    flows.iter().map(|&(a, b)| (b, a)).collect()
}

/// Reverse tagged flows for a backward analysis: edges flip and the call and
/// return roles swap, so that context pushes happen when the backward walk
/// enters a procedure (through its exit) and pops when it leaves.
pub fn reverse_tagged(flows: &[TaggedFlow]) -> Vec<TaggedFlow> {
    let mut out: Vec<TaggedFlow> = flows
        .iter()
        .map(|f| TaggedFlow {
            from: f.to,
            to: f.from,
            kind: match f.kind {
                FlowKind::Normal => FlowKind::Normal,
                FlowKind::Call => FlowKind::Return,
                FlowKind::Return => FlowKind::Call,
            },
        })
        .collect();
    out.sort();
    out
}
