//! The modified MFP worklist solver, a chaotic-iteration reference solver,
//! and post-hoc verification of the dataflow equations.
//!
//! `solve` runs in three steps: seed the worklist with every flow and
//! initialize `Analysis` (the start labels get the initial value, everything
//! else bottom); drain the worklist LIFO, joining transferred values into
//! targets and re-enqueueing successors on strict growth; then read the
//! entry table off `Analysis` and apply each label's transfer once more per
//! successor for the exit table. Labels without successors get a single
//! output under the reserved `end` placeholder.

use std::collections::BTreeMap;
use std::fmt;

use crate::flow::{Label, TaggedFlow};
use crate::framework::{ContextDepthExceeded, CtxValue, EmbellishedFramework, Transfer};
use crate::lattice::Lattice;
use crate::partial_map::PartialMap;

/// Successor key in the exit table: a real flow target, or the `end`
/// placeholder for labels with no outgoing flows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExitTarget {
    Label(Label),
    End,
}

impl fmt::Display for ExitTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExitTarget::Label(l) => write!(f, "{l}"),
            ExitTarget::End => write!(f, "end"),
        }
    }
}

/// `MFP∘`: the value arriving at each label.
pub type EntryTable<V> = BTreeMap<Label, CtxValue<V>>;

/// `MFP•`: each label's output per successor (or `end`).
pub type ExitTable<V> = BTreeMap<Label, BTreeMap<ExitTarget, CtxValue<V>>>;

/// Fixpoint tables plus solver statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisResult<V: Clone + Eq + fmt::Debug> {
    pub entry: EntryTable<V>,
    pub exit: ExitTable<V>,
    /// Worklist pops (or chaotic-iteration sweeps for the reference solver).
    pub iterations: usize,
    /// Strict increases of an `Analysis` cell.
    pub increases: usize,
    /// Diagnostics, e.g. non-monotone transfer behavior observed mid-run.
    pub warnings: Vec<String>,
}

/// The worklist of pending flows, LIFO through cons/head/tail.
struct Worklist {
    items: Vec<TaggedFlow>,
}

impl Worklist {
    fn nil() -> Self {
        Worklist { items: Vec::new() }
    }

    fn cons(&mut self, flow: TaggedFlow) {
        self.items.push(flow);
    }

    /// Pop the head, leaving the tail.
    fn take_head(&mut self) -> Option<TaggedFlow> {
        self.items.pop()
    }
}

/// Solve the framework's dataflow equations with the worklist algorithm.
pub fn solve<L, T>(
    fw: &EmbellishedFramework<L, T>,
) -> Result<AnalysisResult<L::Value>, ContextDepthExceeded>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    solve_observed(fw, fw.flows(), |_| {})
}

/// Solve with an explicit worklist seeding order. The result never depends
/// on the order; tests exercise that.
pub fn solve_seeded<L, T>(
    fw: &EmbellishedFramework<L, T>,
    seed_order: &[TaggedFlow],
) -> Result<AnalysisResult<L::Value>, ContextDepthExceeded>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    solve_observed(fw, seed_order, |_| {})
}

/// Solve while reporting the `Analysis` table to `observe` after every
/// worklist iteration; used to check the solver's loop invariant.
pub fn solve_observed<L, T>(
    fw: &EmbellishedFramework<L, T>,
    seed_order: &[TaggedFlow],
    mut observe: impl FnMut(&EntryTable<L::Value>),
) -> Result<AnalysisResult<L::Value>, ContextDepthExceeded>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let lattice = fw.lattice();

    // Step 1: seed the worklist and initialize Analysis.
    let mut worklist = Worklist::nil();
    for f in seed_order {
        worklist.cons(*f);
    }
    let mut analysis: EntryTable<L::Value> = fw
        .labels()
        .iter()
        .map(|l| {
            let v = if fw.start().contains(l) {
                fw.initial().clone()
            } else {
                PartialMap::empty()
            };
            (*l, v)
        })
        .collect();

    // Step 2: drain the worklist.
    let mut iterations = 0usize;
    let mut increases = 0usize;
    let mut warnings = Vec::new();
    type InOut<V> = (CtxValue<V>, CtxValue<V>);
    let mut last_applied: BTreeMap<TaggedFlow, InOut<L::Value>> = BTreeMap::new();
    while let Some(flow) = worklist.take_head() {
        iterations += 1;
        let input = analysis[&flow.from].clone();
        let transferred = fw.apply_flow(&flow, &input)?;
        if let Some((prev_in, prev_out)) = last_applied.get(&flow) {
            if prev_in.leq_partial(&input, lattice) && !prev_out.leq_partial(&transferred, lattice)
            {
                warnings.push(format!(
                    "non-monotone transfer at flow {flow}: input grew but output shrank"
                ));
            }
        }
        last_applied.insert(flow, (input, transferred.clone()));

        if !transferred.leq_partial(&analysis[&flow.to], lattice) {
            let joined = analysis[&flow.to].join_partial(&transferred, lattice);
            analysis.insert(flow.to, joined);
            increases += 1;
            for succ in fw.successors(flow.to) {
                worklist.cons(*succ);
            }
        }
        observe(&analysis);
    }

    // Step 3: read off entry values and compute per-successor outputs.
    let exit = exit_tables(fw, &analysis)?;
    Ok(AnalysisResult {
        entry: analysis,
        exit,
        iterations,
        increases,
        warnings,
    })
}

fn exit_tables<L, T>(
    fw: &EmbellishedFramework<L, T>,
    entry: &EntryTable<L::Value>,
) -> Result<ExitTable<L::Value>, ContextDepthExceeded>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let mut exit = BTreeMap::new();
    for l in fw.labels() {
        let value = &entry[l];
        let succs = fw.successors(*l);
        let mut outputs = BTreeMap::new();
        if succs.is_empty() {
            outputs.insert(ExitTarget::End, fw.apply_normal(*l, value));
        } else {
            for f in succs {
                outputs.insert(ExitTarget::Label(f.to), fw.apply_flow(f, value)?);
            }
        }
        exit.insert(*l, outputs);
    }
    Ok(exit)
}

/// Reference solver: round-robin chaotic iteration of the dataflow
/// equations `DF∘(ℓ) = λ̂_S^ℓ ⊔ ⨆ DF•(ℓ′)(ℓ)` until nothing changes.
/// Produces the same tables as [`solve`]; the worklist solver is tested
/// against it.
pub fn naive_fixpoint<L, T>(
    fw: &EmbellishedFramework<L, T>,
) -> Result<AnalysisResult<L::Value>, ContextDepthExceeded>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let lattice = fw.lattice();
    let labels: Vec<Label> = fw.labels().iter().copied().collect();
    let mut incoming: BTreeMap<Label, Vec<TaggedFlow>> = BTreeMap::new();
    for f in fw.flows() {
        incoming.entry(f.to).or_default().push(*f);
    }

    let mut entry: EntryTable<L::Value> = labels
        .iter()
        .map(|l| (*l, PartialMap::empty()))
        .collect();

    let mut sweeps = 0usize;
    let mut increases = 0usize;
    loop {
        sweeps += 1;
        let mut changed = false;
        for l in &labels {
            let mut v = if fw.start().contains(l) {
                fw.initial().clone()
            } else {
                PartialMap::empty()
            };
            if let Some(flows) = incoming.get(l) {
                for f in flows {
                    let contributed = fw.apply_flow(f, &entry[&f.from])?;
                    v = v.join_partial(&contributed, lattice);
                }
            }
            if v != entry[l] {
                entry.insert(*l, v);
                changed = true;
                increases += 1;
            }
        }
        if !changed {
            break;
        }
    }

    let exit = exit_tables(fw, &entry)?;
    Ok(AnalysisResult {
        entry,
        exit,
        iterations: sweeps,
        increases,
        warnings: Vec::new(),
    })
}

/// A violated post-fixpoint condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualViolation {
    /// `f_ℓ^{Γ(ℓ,ℓ′)}(entry[ℓ]) ⋢ entry[ℓ′]` for this flow.
    Flow(TaggedFlow),
    /// `λ̂ ⋢ entry[ℓ]` for this start label.
    Start(Label),
}

/// Check the terminal invariants of a fixpoint: every flow's transferred
/// entry value is below its target's entry value, and the initial value is
/// below every start label's entry value. Empty result means ok.
pub fn verify_df_residual<L, T>(
    fw: &EmbellishedFramework<L, T>,
    result: &AnalysisResult<L::Value>,
) -> Vec<ResidualViolation>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let lattice = fw.lattice();
    let empty = PartialMap::empty();
    let entry_of = |l: &Label| result.entry.get(l).unwrap_or(&empty);

    let mut violations = Vec::new();
    for f in fw.flows() {
        let holds = match fw.apply_flow(f, entry_of(&f.from)) {
            Ok(v) => v.leq_partial(entry_of(&f.to), lattice),
            Err(_) => false,
        };
        if !holds {
            violations.push(ResidualViolation::Flow(*f));
        }
    }
    for s in fw.start() {
        if !fw.initial().leq_partial(entry_of(s), lattice) {
            violations.push(ResidualViolation::Start(*s));
        }
    }
    violations
}
