//! Abstract syntax for SimpleHal, extended with single-value/single-result
//! procedures.

use std::collections::BTreeSet;
use std::fmt;

/// Arithmetic expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AExp {
    Num(i64),
    Var(String),
    Neg(Box<AExp>),
    Bin(ArithOp, Box<AExp>, Box<AExp>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Boolean expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BExp {
    Not(Box<BExp>),
    And(Box<BExp>, Box<BExp>),
    Or(Box<BExp>, Box<BExp>),
    Cmp(CmpOp, AExp, AExp),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Gt,
    Ge,
}

/// Commands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comm {
    Assign {
        var: String,
        expr: AExp,
    },
    Read {
        var: String,
    },
    Seq(Box<Comm>, Box<Comm>),
    If {
        cond: BExp,
        then_branch: Box<Comm>,
        else_branch: Box<Comm>,
    },
    While {
        cond: BExp,
        body: Box<Comm>,
    },
    /// `call p(a, z)`: pass `a` by value, receive the result in `z`.
    Call {
        proc: String,
        arg: AExp,
        result: String,
    },
}

/// `proc p(val x, res y) is c end`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcDecl {
    pub name: String,
    pub val_param: String,
    pub res_param: String,
    pub body: Comm,
}

/// A whole source file: procedure declarations followed by the main command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub procs: Vec<ProcDecl>,
    pub body: Comm,
}

impl AExp {
    /// Syntactic free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            AExp::Num(_) => {}
            AExp::Var(x) => {
                out.insert(x.clone());
            }
            AExp::Neg(a) => a.collect_vars(out),
            AExp::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl BExp {
    /// Syntactic free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BExp::Not(b) => b.collect_vars(out),
            BExp::And(a, b) | BExp::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            BExp::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }
}

impl fmt::Display for ArithOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithOp::Add => write!(f, "+"),
            ArithOp::Sub => write!(f, "-"),
            ArithOp::Mul => write!(f, "*"),
            ArithOp::Div => write!(f, "/"),
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmpOp::Eq => write!(f, "="),
            CmpOp::Gt => write!(f, ">"),
            CmpOp::Ge => write!(f, ">="),
        }
    }
}

impl AExp {
    fn precedence(&self) -> u8 {
        match self {
            AExp::Num(_) | AExp::Var(_) => 3,
            AExp::Neg(_) => 2,
            AExp::Bin(ArithOp::Mul | ArithOp::Div, _, _) => 1,
            AExp::Bin(ArithOp::Add | ArithOp::Sub, _, _) => 0,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            AExp::Num(n) => write!(f, "{n}")?,
            AExp::Var(x) => write!(f, "{x}")?,
            AExp::Neg(a) => {
                write!(f, "-")?;
                a.fmt_at(f, 2)?;
            }
            AExp::Bin(op, a, b) => {
                a.fmt_at(f, prec)?;
                write!(f, " {op} ")?;
                // Right operand needs strictly higher binding to re-parse
                // left-associatively.
                b.fmt_at(f, prec + 1)?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for AExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl BExp {
    fn precedence(&self) -> u8 {
        match self {
            BExp::Cmp(..) => 3,
            BExp::Not(_) => 2,
            BExp::And(..) => 1,
            BExp::Or(..) => 0,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            BExp::Not(b) => {
                // Operands of `!` are never atomic; parenthesize for clarity.
                write!(f, "!(")?;
                b.fmt_at(f, 0)?;
                write!(f, ")")?;
            }
            BExp::And(a, b) => {
                a.fmt_at(f, 1)?;
                write!(f, " && ")?;
                b.fmt_at(f, 2)?;
            }
            BExp::Or(a, b) => {
                a.fmt_at(f, 0)?;
                write!(f, " || ")?;
                b.fmt_at(f, 1)?;
            }
            BExp::Cmp(op, a, b) => {
                write!(f, "{a} {op} {b}")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(x: &str) -> AExp {
        AExp::Var(x.to_string())
    }

    #[test]
    fn free_vars_examples() {
        assert!(AExp::Num(3).free_vars().is_empty());
        let sub = AExp::Bin(ArithOp::Sub, Box::new(var("x")), Box::new(AExp::Num(1)));
        assert_eq!(sub.free_vars(), BTreeSet::from(["x".to_string()]));

        // x > y && !(z = 0)
        let b = BExp::And(
            Box::new(BExp::Cmp(CmpOp::Gt, var("x"), var("y"))),
            Box::new(BExp::Not(Box::new(BExp::Cmp(
                CmpOp::Eq,
                var("z"),
                AExp::Num(0),
            )))),
        );
        assert_eq!(
            b.free_vars(),
            ["x", "y", "z"].map(String::from).into_iter().collect()
        );
    }

    #[test]
    fn display_respects_precedence() {
        // (x + 1) * 2
        let e = AExp::Bin(
            ArithOp::Mul,
            Box::new(AExp::Bin(ArithOp::Add, Box::new(var("x")), Box::new(AExp::Num(1)))),
            Box::new(AExp::Num(2)),
        );
        assert_eq!(e.to_string(), "(x + 1) * 2");

        // x - 1 - y stays flat when left-associated
        let e2 = AExp::Bin(
            ArithOp::Sub,
            Box::new(AExp::Bin(ArithOp::Sub, Box::new(var("x")), Box::new(AExp::Num(1)))),
            Box::new(var("y")),
        );
        assert_eq!(e2.to_string(), "x - 1 - y");
    }
}
