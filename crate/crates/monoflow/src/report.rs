//! Analysis output documents: run an analysis by name over a source file
//! and serialize the fixpoint tables as JSON or a text table.
//!
//! Documents are deterministic: labels ascend, contexts are lexicographic
//! over their call strings, and re-serializing a parsed JSON document is
//! byte-identical.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analyses::{constant_propagation, constprop, live_variables, liveness, reaching, reaching_definitions};
use crate::framework::{embellish, ContextDepthExceeded, EmbellishError, ImplicitFramework, Transfer};
use crate::lattice::Lattice;
use crate::simplehal::{annotated_source, build_tagged_flows, load, FlowGraph, LabeledProgram, LoadError};
use crate::solver::{solve, AnalysisResult};
use crate::{Label, TaggedFlow};

/// How a run is configured; mirrors the command-line flags.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub analysis: String,
    pub context_depth: usize,
    pub dump_flow: bool,
    pub call_to_return_edge: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            analysis: "rd".into(),
            context_depth: 16,
            dump_flow: false,
            call_to_return_edge: false,
        }
    }
}

/// One tagged flow in the dumped flow section.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowEntry {
    pub from: String,
    pub to: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub analysis: String,
    pub k: usize,
    pub iterations: usize,
}

/// `context → rendered value`.
pub type ContextTable = IndexMap<String, String>;

/// The serialized run result. `entry` maps each label to its per-context
/// values; `exit` additionally keys by successor label (or `end`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub program: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flows: Option<Vec<FlowEntry>>,
    pub entry: IndexMap<String, ContextTable>,
    pub exit: IndexMap<String, IndexMap<String, ContextTable>>,
    pub meta: Meta,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Frontend(#[from] LoadError),
    #[error("ill-formed tagged flows: call sites [{}] have no matching return flow", .0.iter().map(Label::to_string).collect::<Vec<_>>().join(", "))]
    WellFormedness(Vec<Label>),
    #[error("{0}")]
    ContextDepth(#[from] ContextDepthExceeded),
    #[error("unknown analysis `{0}` (expected one of rd, lv, cp)")]
    UnknownAnalysis(String),
    #[error("{0}")]
    Config(String),
}

impl RunError {
    /// Process exit status for this failure: 1 frontend, 2 well-formedness
    /// or configuration, 3 context depth.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Frontend(_) => 1,
            RunError::WellFormedness(_) => 2,
            RunError::ContextDepth(_) => 3,
            RunError::UnknownAnalysis(_) | RunError::Config(_) => 2,
        }
    }
}

impl From<EmbellishError> for RunError {
    fn from(e: EmbellishError) -> Self {
        match e {
            EmbellishError::IllFormed(sites) => RunError::WellFormedness(sites),
            other => RunError::Config(other.to_string()),
        }
    }
}

/// Parse, analyze, and serialize in one step.
pub fn run_analysis(source: &str, opts: &RunOptions) -> Result<OutputDocument, RunError> {
    let lp = load(source)?;
    let graph = build_tagged_flows(&lp, opts.call_to_return_edge).map_err(LoadError::Program)?;
    match opts.analysis.as_str() {
        "rd" => run_framework(reaching_definitions(&lp, &graph), &lp, &graph, opts, reaching::render),
        "lv" => run_framework(live_variables(&lp, &graph), &lp, &graph, opts, liveness::render),
        "cp" => run_framework(constant_propagation(&lp, &graph), &lp, &graph, opts, constprop::render),
        other => Err(RunError::UnknownAnalysis(other.to_string())),
    }
}

fn run_framework<L, T>(
    implicit: ImplicitFramework<L, T>,
    lp: &LabeledProgram,
    graph: &FlowGraph,
    opts: &RunOptions,
    render: impl Fn(&L::Value) -> String,
) -> Result<OutputDocument, RunError>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let fw = embellish(implicit, opts.context_depth)?;
    let result = solve(&fw)?;
    Ok(document(lp, graph, opts, &result, render))
}

fn document<V: Clone + Eq + std::fmt::Debug>(
    lp: &LabeledProgram,
    graph: &FlowGraph,
    opts: &RunOptions,
    result: &AnalysisResult<V>,
    render: impl Fn(&V) -> String,
) -> OutputDocument {
    let flows = opts.dump_flow.then(|| {
        graph
            .flows
            .iter()
            .map(|f: &TaggedFlow| FlowEntry {
                from: f.from.to_string(),
                to: f.to.to_string(),
                kind: f.kind.to_string(),
            })
            .collect()
    });

    let mut entry = IndexMap::new();
    for (label, value) in &result.entry {
        let mut contexts = ContextTable::new();
        for (ctx, v) in value.iter() {
            contexts.insert(ctx.to_string(), render(v));
        }
        entry.insert(label.to_string(), contexts);
    }

    let mut exit = IndexMap::new();
    for (label, outputs) in &result.exit {
        let mut succs = IndexMap::new();
        for (target, value) in outputs {
            let mut contexts = ContextTable::new();
            for (ctx, v) in value.iter() {
                contexts.insert(ctx.to_string(), render(v));
            }
            succs.insert(target.to_string(), contexts);
        }
        exit.insert(label.to_string(), succs);
    }

    OutputDocument {
        program: annotated_source(lp),
        flows,
        entry,
        exit,
        meta: Meta {
            analysis: opts.analysis.clone(),
            k: opts.context_depth,
            iterations: result.iterations,
        },
    }
}

/// Canonical JSON rendering (pretty, no trailing newline). Parsing this and
/// rendering again reproduces the bytes exactly.
pub fn render_json(doc: &OutputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serializes")
}

/// Text-table projection of the same entry/exit data.
pub fn render_table(doc: &OutputDocument) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "analysis: {}", doc.meta.analysis);
    let _ = writeln!(out, "context-depth: {}", doc.meta.k);
    let _ = writeln!(out, "iterations: {}", doc.meta.iterations);
    let _ = writeln!(out, "\nprogram:");
    for line in doc.program.lines() {
        let _ = writeln!(out, "  {line}");
    }
    if let Some(flows) = &doc.flows {
        let _ = writeln!(out, "\nflows:");
        for f in flows {
            let _ = writeln!(out, "  {} -> {} [{}]", f.from, f.to, f.kind);
        }
    }
    let _ = writeln!(out, "\nentry:");
    let _ = writeln!(out, "  label  context  value");
    for (label, contexts) in &doc.entry {
        for (ctx, value) in contexts {
            let _ = writeln!(out, "  {label}  {ctx}  {value}");
        }
    }
    let _ = writeln!(out, "\nexit:");
    let _ = writeln!(out, "  label  successor  context  value");
    for (label, succs) in &doc.exit {
        for (succ, contexts) in succs {
            for (ctx, value) in contexts {
                let _ = writeln!(out, "  {label}  {succ}  {ctx}  {value}");
            }
        }
    }
    out
}
