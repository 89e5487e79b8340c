//! A concrete SimpleHal interpreter used as a soundness oracle: it executes
//! a labeled program on fixed inputs and records, at every block it visits,
//! the actual definition site of every variable. A reaching-definitions
//! analysis must over-approximate these observations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use monoflow::analyses::{Def, DefSite};
use monoflow::simplehal::{AExp, ArithOp, BExp, CmpOp, LComm, LProcDecl, LabeledProgram};
use monoflow::Label;

const STEP_LIMIT: usize = 100_000;

/// Concrete reaching definitions observed at each visited label.
pub fn observed_reaching_defs(
    lp: &LabeledProgram,
    inputs: &[i64],
) -> BTreeMap<Label, BTreeSet<DefSite>> {
    let mut interp = Interp {
        lp,
        inputs: inputs.iter().copied().collect(),
        env: lp.variables.iter().map(|v| (v.clone(), 0)).collect(),
        defs: lp
            .variables
            .iter()
            .map(|v| (v.clone(), Def::Unknown))
            .collect(),
        observed: BTreeMap::new(),
        steps: 0,
    };
    interp.comm(&lp.program.body);
    interp.observed
}

struct Interp<'p> {
    lp: &'p LabeledProgram,
    inputs: VecDeque<i64>,
    env: BTreeMap<String, i64>,
    defs: BTreeMap<String, Def>,
    observed: BTreeMap<Label, BTreeSet<DefSite>>,
    steps: usize,
}

impl Interp<'_> {
    fn record(&mut self, label: Label) {
        self.steps += 1;
        assert!(self.steps < STEP_LIMIT, "interpreter ran away");
        let snapshot = self.defs.iter().map(|(var, def)| DefSite {
            var: var.clone(),
            def: *def,
        });
        self.observed.entry(label).or_default().extend(snapshot);
    }

    fn define(&mut self, var: &str, value: i64, def: Def) {
        self.env.insert(var.to_string(), value);
        self.defs.insert(var.to_string(), def);
    }

    fn eval(&self, e: &AExp) -> i64 {
        match e {
            AExp::Num(n) => *n,
            AExp::Var(x) => self.env[x],
            AExp::Neg(a) => -self.eval(a),
            AExp::Bin(op, a, b) => {
                let (x, y) = (self.eval(a), self.eval(b));
                match op {
                    ArithOp::Add => x + y,
                    ArithOp::Sub => x - y,
                    ArithOp::Mul => x * y,
                    ArithOp::Div => {
                        assert!(y != 0, "concrete division by zero");
                        x / y
                    }
                }
            }
        }
    }

    fn eval_bool(&self, b: &BExp) -> bool {
        match b {
            BExp::Not(inner) => !self.eval_bool(inner),
            BExp::And(a, b) => self.eval_bool(a) && self.eval_bool(b),
            BExp::Or(a, b) => self.eval_bool(a) || self.eval_bool(b),
            BExp::Cmp(op, a, b) => {
                let (x, y) = (self.eval(a), self.eval(b));
                match op {
                    CmpOp::Eq => x == y,
                    CmpOp::Gt => x > y,
                    CmpOp::Ge => x >= y,
                }
            }
        }
    }

    fn comm(&mut self, c: &LComm) {
        match c {
            LComm::Assign { label, var, expr } => {
                self.record(Label::plain(*label));
                let value = self.eval(expr);
                self.define(var, value, Def::At(*label));
            }
            LComm::Read { label, var } => {
                self.record(Label::plain(*label));
                let value = self.inputs.pop_front().unwrap_or(0);
                self.define(var, value, Def::At(*label));
            }
            LComm::Seq(a, b) => {
                self.comm(a);
                self.comm(b);
            }
            LComm::If {
                label,
                cond,
                then_branch,
                else_branch,
            } => {
                self.record(Label::plain(*label));
                if self.eval_bool(cond) {
                    self.comm(then_branch);
                } else {
                    self.comm(else_branch);
                }
            }
            LComm::While { label, cond, body } => loop {
                self.record(Label::plain(*label));
                if !self.eval_bool(cond) {
                    break;
                }
                self.comm(body);
            },
            LComm::Call {
                label,
                proc,
                arg,
                result,
            } => self.call(*label, proc, arg, result),
        }
    }

    fn call(&mut self, label: u32, proc: &str, arg: &AExp, result: &str) {
        self.record(Label::call(label));
        let argv = self.eval(arg);
        let decl: &LProcDecl = self
            .lp
            .program
            .procs
            .iter()
            .find(|p| p.name == proc)
            .expect("declared procedure");
        // Binding the value parameter is the definition made by the
        // procedure-entry block.
        self.define(&decl.val_param, argv, Def::At(decl.entry_label));
        self.record(Label::proc_entry(decl.entry_label));
        self.comm(&decl.body);
        self.record(Label::proc_exit(decl.exit_label));
        // Returning defines the result variable at the call block.
        let res = self.env[&decl.res_param];
        self.define(result, res, Def::At(label));
        self.record(Label::ret(label));
    }
}
