//! The SimpleHal frontend: parsing, labeling, and flow construction.
//!
//! SimpleHal is a small imperative language (assignments, `read`,
//! sequencing, `if`/`else`, `while`) extended with procedures of exactly one
//! value parameter and one result parameter:
//!
//! ```text
//! proc p(val x, res y) is c end
//! ...
//! call p(a, z)
//! ```
//!
//! Procedure declarations precede the main command. Elementary blocks are
//! labeled 1, 2, … in source order, main command first.

mod ast;
mod flows;
mod label;
mod parser;

pub use ast::{AExp, ArithOp, BExp, CmpOp, Comm, ProcDecl, Program};
pub use flows::{build_tagged_flows, final_labels, flow, init, FlowGraph};
pub use label::{
    label_program, Block, LComm, LProcDecl, LProgram, LabeledProgram, ProcInfo, ProgramError,
};
pub use parser::{parse, ParseError};

use std::fmt::Write;

/// Parse and label a source file in one step.
pub fn load(source: &str) -> Result<LabeledProgram, LoadError> {
    let program = parse(source)?;
    Ok(label_program(&program)?)
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Program(#[from] ProgramError),
}

/// Render a labeled program back to source text with `[block]^label`
/// annotations, one line per procedure plus one for the main command.
pub fn annotated_source(p: &LabeledProgram) -> String {
    let mut out = String::new();
    for proc in &p.program.procs {
        let _ = write!(
            out,
            "proc {}(val {}, res {}) is^{} ",
            proc.name, proc.val_param, proc.res_param, proc.entry_label
        );
        render_comm(&proc.body, &mut out);
        let _ = writeln!(out, " end^{}", proc.exit_label);
    }
    render_comm(&p.program.body, &mut out);
    out
}

fn render_comm(c: &LComm, out: &mut String) {
    match c {
        LComm::Assign { label, var, expr } => {
            let _ = write!(out, "[{var} := {expr}]^{label}");
        }
        LComm::Read { label, var } => {
            let _ = write!(out, "[read({var})]^{label}");
        }
        LComm::Seq(a, b) => {
            render_comm(a, out);
            out.push_str("; ");
            render_comm(b, out);
        }
        LComm::If {
            label,
            cond,
            then_branch,
            else_branch,
        } => {
            let _ = write!(out, "if [{cond}]^{label} then ");
            render_nested(then_branch, out);
            out.push_str(" else ");
            render_nested(else_branch, out);
        }
        LComm::While { label, cond, body } => {
            let _ = write!(out, "while [{cond}]^{label} do ");
            render_nested(body, out);
        }
        LComm::Call {
            label,
            proc,
            arg,
            result,
        } => {
            let _ = write!(out, "[call {proc}({arg}, {result})]^{label}");
        }
    }
}

fn render_nested(c: &LComm, out: &mut String) {
    if matches!(c, LComm::Seq(..)) {
        out.push('(');
        render_comm(c, out);
        out.push(')');
    } else {
        render_comm(c, out);
    }
}
