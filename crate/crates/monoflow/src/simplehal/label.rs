//! Labeling: attach a distinct positive label to every elementary block.
//!
//! Blocks are assignments, reads, conditions, calls, and the no-op
//! entry/exit points of procedures. The main command is labeled first
//! (starting at 1, in source order), then each procedure declaration in
//! order: its entry label, its body blocks, its exit label. This keeps the
//! main program's labels identical whether or not procedures are declared.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::ast::{AExp, BExp, Comm, Program};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("call to undeclared procedure `{0}`")]
    UndeclaredProcedure(String),
    #[error("procedure `{0}` is declared more than once")]
    DuplicateProcedure(String),
}

/// A labeled command: structurally the same shape as [`Comm`] with a label
/// on every elementary block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LComm {
    Assign {
        label: u32,
        var: String,
        expr: AExp,
    },
    Read {
        label: u32,
        var: String,
    },
    Seq(Box<LComm>, Box<LComm>),
    If {
        label: u32,
        cond: BExp,
        then_branch: Box<LComm>,
        else_branch: Box<LComm>,
    },
    While {
        label: u32,
        cond: BExp,
        body: Box<LComm>,
    },
    Call {
        label: u32,
        proc: String,
        arg: AExp,
        result: String,
    },
}

/// A labeled procedure declaration: `is` carries the entry label, `end` the
/// exit label; both are no-op blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LProcDecl {
    pub name: String,
    pub val_param: String,
    pub res_param: String,
    pub entry_label: u32,
    pub exit_label: u32,
    pub body: LComm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LProgram {
    pub procs: Vec<LProcDecl>,
    pub body: LComm,
}

/// An elementary block, the unit transfer functions operate on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Assign { var: String, expr: AExp },
    Read { var: String },
    Cond { expr: BExp },
    Call { proc: String, arg: AExp, result: String },
    ProcEntry { proc: String },
    ProcExit { proc: String },
}

/// Signature and flow endpoints of a declared procedure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcInfo {
    pub val_param: String,
    pub res_param: String,
    pub entry_label: u32,
    pub exit_label: u32,
}

/// A program together with its labeling (label → block), variable set, and
/// procedure table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledProgram {
    pub program: LProgram,
    pub blocks: BTreeMap<u32, Block>,
    pub variables: BTreeSet<String>,
    pub procs: BTreeMap<String, ProcInfo>,
}

struct Labeler {
    next: u32,
    blocks: BTreeMap<u32, Block>,
    variables: BTreeSet<String>,
}

impl Labeler {
    fn fresh(&mut self, block: Block) -> u32 {
        let label = self.next;
        self.next += 1;
        self.blocks.insert(label, block);
        label
    }

    fn comm(&mut self, c: &Comm) -> LComm {
        match c {
            Comm::Assign { var, expr } => {
                self.variables.insert(var.clone());
                expr.collect_vars(&mut self.variables);
                let label = self.fresh(Block::Assign {
                    var: var.clone(),
                    expr: expr.clone(),
                });
                LComm::Assign {
                    label,
                    var: var.clone(),
                    expr: expr.clone(),
                }
            }
            Comm::Read { var } => {
                self.variables.insert(var.clone());
                let label = self.fresh(Block::Read { var: var.clone() });
                LComm::Read {
                    label,
                    var: var.clone(),
                }
            }
            Comm::Seq(a, b) => {
                let la = self.comm(a);
                let lb = self.comm(b);
                LComm::Seq(Box::new(la), Box::new(lb))
            }
            Comm::If {
                cond,
                then_branch,
                else_branch,
            } => {
                cond.collect_vars(&mut self.variables);
                let label = self.fresh(Block::Cond { expr: cond.clone() });
                let lt = self.comm(then_branch);
                let le = self.comm(else_branch);
                LComm::If {
                    label,
                    cond: cond.clone(),
                    then_branch: Box::new(lt),
                    else_branch: Box::new(le),
                }
            }
            Comm::While { cond, body } => {
                cond.collect_vars(&mut self.variables);
                let label = self.fresh(Block::Cond { expr: cond.clone() });
                let lb = self.comm(body);
                LComm::While {
                    label,
                    cond: cond.clone(),
                    body: Box::new(lb),
                }
            }
            Comm::Call { proc, arg, result } => {
                arg.collect_vars(&mut self.variables);
                self.variables.insert(result.clone());
                let label = self.fresh(Block::Call {
                    proc: proc.clone(),
                    arg: arg.clone(),
                    result: result.clone(),
                });
                LComm::Call {
                    label,
                    proc: proc.clone(),
                    arg: arg.clone(),
                    result: result.clone(),
                }
            }
        }
    }
}

fn check_calls(c: &Comm, declared: &BTreeSet<&str>) -> Result<(), ProgramError> {
    match c {
        Comm::Call { proc, .. } if !declared.contains(proc.as_str()) => {
            Err(ProgramError::UndeclaredProcedure(proc.clone()))
        }
        Comm::Call { .. } | Comm::Assign { .. } | Comm::Read { .. } => Ok(()),
        Comm::Seq(a, b) => {
            check_calls(a, declared)?;
            check_calls(b, declared)
        }
        Comm::If {
            then_branch,
            else_branch,
            ..
        } => {
            check_calls(then_branch, declared)?;
            check_calls(else_branch, declared)
        }
        Comm::While { body, .. } => check_calls(body, declared),
    }
}

/// Label a program. Fails if a procedure is declared twice or a call names
/// an undeclared procedure.
pub fn label_program(program: &Program) -> Result<LabeledProgram, ProgramError> {
    let mut declared = BTreeSet::new();
    for p in &program.procs {
        if !declared.insert(p.name.as_str()) {
            return Err(ProgramError::DuplicateProcedure(p.name.clone()));
        }
    }
    check_calls(&program.body, &declared)?;
    for p in &program.procs {
        check_calls(&p.body, &declared)?;
    }

    let mut labeler = Labeler {
        next: 1,
        blocks: BTreeMap::new(),
        variables: BTreeSet::new(),
    };

    let body = labeler.comm(&program.body);

    let mut procs = Vec::new();
    let mut proc_table = BTreeMap::new();
    for p in &program.procs {
        labeler.variables.insert(p.val_param.clone());
        labeler.variables.insert(p.res_param.clone());
        let entry_label = labeler.fresh(Block::ProcEntry {
            proc: p.name.clone(),
        });
        let lbody = labeler.comm(&p.body);
        let exit_label = labeler.fresh(Block::ProcExit {
            proc: p.name.clone(),
        });
        proc_table.insert(
            p.name.clone(),
            ProcInfo {
                val_param: p.val_param.clone(),
                res_param: p.res_param.clone(),
                entry_label,
                exit_label,
            },
        );
        procs.push(LProcDecl {
            name: p.name.clone(),
            val_param: p.val_param.clone(),
            res_param: p.res_param.clone(),
            entry_label,
            exit_label,
            body: lbody,
        });
    }

    Ok(LabeledProgram {
        program: LProgram { procs, body },
        blocks: labeler.blocks,
        variables: labeler.variables,
        procs: proc_table,
    })
}
