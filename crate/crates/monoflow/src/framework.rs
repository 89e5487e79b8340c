//! Implicit and embellished monotone frameworks.
//!
//! A user describes an analysis as an [`ImplicitFramework`]: a value lattice,
//! start labels, tagged flows, an initial value, and one transfer function
//! over `(block, flow kind, value)`. [`embellish`] infers from it the
//! context-carrying framework that the solver runs on: dataflow values
//! become partial maps from call-string [`Context`]s into the value lattice,
//! and the normal/call/return transfer functions are derived from the single
//! user function: call edges push their call site onto the context, return
//! edges pop it (screening out values that entered through other call
//! sites).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::flow::{Direction, FlowKind, Label, TaggedFlow};
use crate::lattice::Lattice;
use crate::partial_map::PartialMap;

/// A call-string context: the pending call sites, most recent last. The
/// empty string `Λ` is the context of code outside any call.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Context(Vec<Label>);

impl Context {
    pub fn empty() -> Self {
        Context(Vec::new())
    }

    pub fn from_sites(sites: impl IntoIterator<Item = Label>) -> Self {
        Context(sites.into_iter().collect())
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sites(&self) -> &[Label] {
        &self.0
    }

    /// `δ;ℓ_c`: this context extended with one more pending call.
    pub fn pushed(&self, site: Label) -> Context {
        let mut sites = self.0.clone();
        sites.push(site);
        Context(sites)
    }

    /// Remove the most recent pending call if it is `site`; `None` screens
    /// out contexts that entered through a different call site.
    pub fn popped(&self, site: Label) -> Option<Context> {
        match self.0.split_last() {
            Some((last, rest)) if *last == site => Some(Context(rest.to_vec())),
            _ => None,
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, site) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{site}")?;
        }
        write!(f, "]")
    }
}

/// A context-indexed dataflow value: a finite partial map from observed
/// contexts into the value lattice.
pub type CtxValue<V> = PartialMap<Context, V>;

/// The single user-supplied transfer function. Must be monotone in the
/// value argument for each fixed `(block, kind)`; see
/// [`check_transfer_monotone`]. Kinds a block never sees should return the
/// value unchanged.
pub trait Transfer {
    type Block;
    type Value: Clone + Eq + fmt::Debug;

    fn apply(
        &self,
        label: u32,
        block: &Self::Block,
        kind: FlowKind,
        value: &Self::Value,
    ) -> Self::Value;
}

/// The minimal user specification an analysis provides.
pub struct ImplicitFramework<L, T>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    pub lattice: L,
    pub direction: Direction,
    pub start: BTreeSet<Label>,
    pub flows: Vec<TaggedFlow>,
    pub initial: L::Value,
    pub transfer: T,
    pub blocks: BTreeMap<u32, T::Block>,
}

/// How call and return edges treat contexts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ContextPolicy {
    /// Bounded call strings: calls push their site, returns pop and screen.
    #[default]
    CallStrings,
    /// Contexts collapsed: calls and returns transfer values in place. Joins
    /// every caller's information together (the imprecise baseline).
    Insensitive,
}

/// Raised when a call would push past the configured context bound.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("context depth bound k={bound} exceeded at call site {site}: context {context} already has {} pending calls", context.depth())]
pub struct ContextDepthExceeded {
    pub site: Label,
    pub context: Context,
    pub bound: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbellishError {
    #[error("context bound must be at least 1, got {0}")]
    InvalidBound(usize),
    #[error("ill-formed tagged flows: call sites {} have no matching return flow", render_labels(.0))]
    IllFormed(Vec<Label>),
    #[error("label {0} appears in flows or start set but not in the labeling")]
    MissingBlock(Label),
}

fn render_labels(labels: &[Label]) -> String {
    labels
        .iter()
        .map(Label::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

/// Well-formedness of a tagged flow set: every call flow must have a return
/// flow back into the same block's return point, so that every call
/// eventually returns. Returns the offending call sources (empty = ok).
pub fn check_wellformed(flows: &[TaggedFlow]) -> Vec<Label> {
    let return_targets: BTreeSet<u32> = flows
        .iter()
        .filter(|f| f.kind == FlowKind::Return)
        .map(|f| f.to.original())
        .collect();
    flows
        .iter()
        .filter(|f| f.kind == FlowKind::Call && !return_targets.contains(&f.from.original()))
        .map(|f| f.from)
        .collect()
}

/// Infer the embellished framework from an implicit one, with call strings
/// bounded at `k`.
pub fn embellish<L, T>(
    implicit: ImplicitFramework<L, T>,
    k: usize,
) -> Result<EmbellishedFramework<L, T>, EmbellishError>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    if k < 1 {
        return Err(EmbellishError::InvalidBound(k));
    }
    let violations = check_wellformed(&implicit.flows);
    if !violations.is_empty() {
        return Err(EmbellishError::IllFormed(violations));
    }

    let mut labels: BTreeSet<Label> = implicit.start.iter().copied().collect();
    for f in &implicit.flows {
        labels.insert(f.from);
        labels.insert(f.to);
    }
    for l in &labels {
        if !implicit.blocks.contains_key(&l.original()) {
            return Err(EmbellishError::MissingBlock(*l));
        }
    }

    let mut successors: BTreeMap<Label, Vec<TaggedFlow>> = BTreeMap::new();
    for f in &implicit.flows {
        successors.entry(f.from).or_default().push(*f);
    }

    let initial = PartialMap::singleton(Context::empty(), implicit.initial);
    Ok(EmbellishedFramework {
        lattice: implicit.lattice,
        direction: implicit.direction,
        start: implicit.start,
        flows: implicit.flows,
        transfer: implicit.transfer,
        blocks: implicit.blocks,
        labels,
        successors,
        initial,
        context_bound: k,
        policy: ContextPolicy::CallStrings,
    })
}

/// The inferred framework the solver runs on: the context lattice is
/// `Context ⇀ L`, the initial value is defined only at `Λ`, and the three
/// transfer-function families are derived from the user's single function.
pub struct EmbellishedFramework<L, T>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    lattice: L,
    direction: Direction,
    start: BTreeSet<Label>,
    flows: Vec<TaggedFlow>,
    transfer: T,
    blocks: BTreeMap<u32, T::Block>,
    labels: BTreeSet<Label>,
    successors: BTreeMap<Label, Vec<TaggedFlow>>,
    initial: CtxValue<L::Value>,
    context_bound: usize,
    policy: ContextPolicy,
}

impl<L, T> EmbellishedFramework<L, T>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    pub fn lattice(&self) -> &L {
        &self.lattice
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn start(&self) -> &BTreeSet<Label> {
        &self.start
    }

    pub fn flows(&self) -> &[TaggedFlow] {
        &self.flows
    }

    /// Every label occurring in the flows or the start set.
    pub fn labels(&self) -> &BTreeSet<Label> {
        &self.labels
    }

    pub fn successors(&self, l: Label) -> &[TaggedFlow] {
        self.successors.get(&l).map_or(&[], Vec::as_slice)
    }

    /// `λ̂`: the initial value, defined only at the empty context.
    pub fn initial(&self) -> &CtxValue<L::Value> {
        &self.initial
    }

    pub fn context_bound(&self) -> usize {
        self.context_bound
    }

    pub fn policy(&self) -> ContextPolicy {
        self.policy
    }

    pub fn with_policy(mut self, policy: ContextPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn block(&self, id: u32) -> &T::Block {
        &self.blocks[&id]
    }

    pub fn blocks(&self) -> &BTreeMap<u32, T::Block> {
        &self.blocks
    }

    /// `f̂^N_ℓ`: apply the transfer per context; the domain is unchanged.
    pub fn apply_normal(&self, l: Label, v: &CtxValue<L::Value>) -> CtxValue<L::Value> {
        let id = l.original();
        let block = self.block(id);
        v.iter()
            .map(|(ctx, val)| {
                (
                    ctx.clone(),
                    self.transfer.apply(id, block, FlowKind::Normal, val),
                )
            })
            .collect()
    }

    /// `f̂^C_ℓc`: transfer each value and push the call site onto its
    /// context. Pushing past the bound is a hard error.
    pub fn apply_call(
        &self,
        site: Label,
        v: &CtxValue<L::Value>,
    ) -> Result<CtxValue<L::Value>, ContextDepthExceeded> {
        let id = site.original();
        let block = self.block(id);
        let pushed_site = Label::call(id);
        let mut out = PartialMap::empty();
        for (ctx, val) in v.iter() {
            let new_val = self.transfer.apply(id, block, FlowKind::Call, val);
            match self.policy {
                ContextPolicy::CallStrings => {
                    if ctx.depth() >= self.context_bound {
                        return Err(ContextDepthExceeded {
                            site,
                            context: ctx.clone(),
                            bound: self.context_bound,
                        });
                    }
                    out.insert(ctx.pushed(pushed_site), new_val);
                }
                ContextPolicy::Insensitive => out.insert(ctx.clone(), new_val),
            }
        }
        Ok(out)
    }

    /// `f̂^R_{ℓx,ℓr}`: pop the call site paired with `ret` from each
    /// context and transfer; contexts that entered through another call
    /// site contribute nothing.
    pub fn apply_return(
        &self,
        exit: Label,
        ret: Label,
        v: &CtxValue<L::Value>,
    ) -> CtxValue<L::Value> {
        debug_assert!(self.blocks.contains_key(&exit.original()));
        let id = ret.original();
        let block = self.block(id);
        let call_site = Label::call(id);
        let mut out = PartialMap::empty();
        for (ctx, val) in v.iter() {
            let popped = match self.policy {
                ContextPolicy::CallStrings => match ctx.popped(call_site) {
                    Some(popped) => popped,
                    None => continue,
                },
                ContextPolicy::Insensitive => ctx.clone(),
            };
            out.insert(
                popped,
                self.transfer.apply(id, block, FlowKind::Return, val),
            );
        }
        out
    }

    /// `f_ℓ^{Γ(ℓ,ℓ′)}`: dispatch on the flow's tag.
    pub fn apply_flow(
        &self,
        f: &TaggedFlow,
        v: &CtxValue<L::Value>,
    ) -> Result<CtxValue<L::Value>, ContextDepthExceeded> {
        match f.kind {
            FlowKind::Normal => Ok(self.apply_normal(f.from, v)),
            FlowKind::Call => self.apply_call(f.from, v),
            FlowKind::Return => Ok(self.apply_return(f.from, f.to, v)),
        }
    }
}

/// A sampled monotonicity failure of a user transfer function.
#[derive(Debug, Clone)]
pub struct MonotonicityViolation {
    pub label: u32,
    pub kind: FlowKind,
    pub smaller: String,
    pub larger: String,
}

/// Sample-check that a transfer function is monotone in its value argument
/// for every block and flow kind: for each ordered pair `a ⊑ b` among the
/// samples, `transfer(a) ⊑ transfer(b)` must hold.
pub fn check_transfer_monotone<L, T>(
    lattice: &L,
    blocks: &BTreeMap<u32, T::Block>,
    transfer: &T,
    samples: &[L::Value],
) -> Vec<MonotonicityViolation>
where
    L: Lattice,
    T: Transfer<Value = L::Value>,
{
    let mut violations = Vec::new();
    for (label, block) in blocks {
        for kind in [FlowKind::Normal, FlowKind::Call, FlowKind::Return] {
            for a in samples {
                for b in samples {
                    if !lattice.leq(a, b) {
                        continue;
                    }
                    let fa = transfer.apply(*label, block, kind, a);
                    let fb = transfer.apply(*label, block, kind, b);
                    if !lattice.leq(&fa, &fb) {
                        violations.push(MonotonicityViolation {
                            label: *label,
                            kind,
                            smaller: format!("{a:?}"),
                            larger: format!("{b:?}"),
                        });
                    }
                }
            }
        }
    }
    violations
}
