//! Hand-rolled lexer and recursive-descent parser for SimpleHal.
//!
//! The grammar's ambiguity is resolved by conventional precedence (unary
//! minus over `*`/`/` over `+`/`-` over comparisons over `!` over `&&` over
//! `||`); `if`/`while` bodies that are sequences must be parenthesized.

use thiserror::Error;

use super::ast::{AExp, ArithOp, BExp, CmpOp, Comm, ProcDecl, Program};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at {line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i64),
    Ident(String),
    Assign, // :=
    Semi,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Gt,
    Ge,
    Not, // !
    And, // &&
    Or,  // ||
    If,
    Then,
    Else,
    While,
    Do,
    Read,
    Proc,
    Val,
    Res,
    Is,
    End,
    Call,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Assign => "`:=`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&&`".into(),
            Tok::Or => "`||`".into(),
            Tok::Eof => "end of input".into(),
            kw => format!("`{}`", format!("{kw:?}").to_lowercase()),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(source: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = source.chars().peekable();

    macro_rules! push {
        ($tok:expr, $len:expr) => {{
            tokens.push(Token {
                tok: $tok,
                line,
                col,
            });
            col += $len;
        }};
    }

    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let start_col = col;
                let mut n: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(digit) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(digit as i64))
                            .ok_or_else(|| ParseError {
                                line,
                                col: start_col,
                                message: "numeric literal overflows".into(),
                            })?;
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    tok: Tok::Num(n),
                    line,
                    col: start_col,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start_col = col;
                let mut word = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        word.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = match word.as_str() {
                    "if" => Tok::If,
                    "then" => Tok::Then,
                    "else" => Tok::Else,
                    "while" => Tok::While,
                    "do" => Tok::Do,
                    "read" => Tok::Read,
                    "proc" => Tok::Proc,
                    "val" => Tok::Val,
                    "res" => Tok::Res,
                    "is" => Tok::Is,
                    "end" => Tok::End,
                    "call" => Tok::Call,
                    _ => Tok::Ident(word),
                };
                tokens.push(Token {
                    tok,
                    line,
                    col: start_col,
                });
            }
            ':' => {
                chars.next();
                if chars.peek() == Some(&'=') {
                    chars.next();
                    push!(Tok::Assign, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        message: "expected `=` after `:`".into(),
                    });
                }
            }
            ';' => {
                chars.next();
                push!(Tok::Semi, 1);
            }
            '(' => {
                chars.next();
                push!(Tok::LParen, 1);
            }
            ')' => {
                chars.next();
                push!(Tok::RParen, 1);
            }
            ',' => {
                chars.next();
                push!(Tok::Comma, 1);
            }
            '+' => {
                chars.next();
                push!(Tok::Plus, 1);
            }
            '-' => {
                chars.next();
                push!(Tok::Minus, 1);
            }
            '*' => {
                chars.next();
                push!(Tok::Star, 1);
            }
            '/' => {
                chars.next();
                push!(Tok::Slash, 1);
            }
            '=' => {
                chars.next();
                push!(Tok::Eq, 1);
            }
            '>' => {
                chars.next();
                if chars.peek() == Some(&'=') {
                    chars.next();
                    push!(Tok::Ge, 2);
                } else {
                    push!(Tok::Gt, 1);
                }
            }
            '!' => {
                chars.next();
                push!(Tok::Not, 1);
            }
            '&' => {
                chars.next();
                if chars.peek() == Some(&'&') {
                    chars.next();
                    push!(Tok::And, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        message: "expected `&&`".into(),
                    });
                }
            }
            '|' => {
                chars.next();
                if chars.peek() == Some(&'|') {
                    chars.next();
                    push!(Tok::Or, 2);
                } else {
                    return Err(ParseError {
                        line,
                        col,
                        message: "expected `||`".into(),
                    });
                }
            }
            other => {
                return Err(ParseError {
                    line,
                    col,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn at(&self, tok: &Tok) -> bool {
        self.peek().tok == *tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.at(&tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.at(&tok) {
            Ok(self.bump())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                tok.describe(),
                self.peek().tok.describe()
            )))
        }
    }

    fn error(&self, message: String) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            message,
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Ident(name) => {
                let name = name.clone();
                self.bump();
                Ok(name)
            }
            other => Err(self.error(format!("expected identifier, found {}", other.describe()))),
        }
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut procs = Vec::new();
        while self.at(&Tok::Proc) {
            procs.push(self.proc_decl()?);
        }
        let body = self.comm()?;
        self.expect(Tok::Eof)?;
        Ok(Program { procs, body })
    }

    fn proc_decl(&mut self) -> Result<ProcDecl, ParseError> {
        self.expect(Tok::Proc)?;
        let name = self.ident()?;
        self.expect(Tok::LParen)?;
        self.expect(Tok::Val)?;
        let val_param = self.ident()?;
        self.expect(Tok::Comma)?;
        self.expect(Tok::Res)?;
        let res_param = self.ident()?;
        self.expect(Tok::RParen)?;
        self.expect(Tok::Is)?;
        let body = self.comm()?;
        self.expect(Tok::End)?;
        Ok(ProcDecl {
            name,
            val_param,
            res_param,
            body,
        })
    }

    /// `;` folds to the left; either association denotes the same flows.
    fn comm(&mut self) -> Result<Comm, ParseError> {
        let mut cmd = self.atom_comm()?;
        while self.eat(Tok::Semi) {
            let rhs = self.atom_comm()?;
            cmd = Comm::Seq(Box::new(cmd), Box::new(rhs));
        }
        Ok(cmd)
    }

    fn atom_comm(&mut self) -> Result<Comm, ParseError> {
        match &self.peek().tok {
            Tok::Ident(_) => {
                let var = self.ident()?;
                self.expect(Tok::Assign)?;
                let expr = self.aexp()?;
                Ok(Comm::Assign { var, expr })
            }
            Tok::Read => {
                self.bump();
                self.expect(Tok::LParen)?;
                let var = self.ident()?;
                self.expect(Tok::RParen)?;
                Ok(Comm::Read { var })
            }
            Tok::If => {
                self.bump();
                let cond = self.bexp()?;
                self.expect(Tok::Then)?;
                let then_branch = self.atom_comm()?;
                self.expect(Tok::Else)?;
                let else_branch = self.atom_comm()?;
                Ok(Comm::If {
                    cond,
                    then_branch: Box::new(then_branch),
                    else_branch: Box::new(else_branch),
                })
            }
            Tok::While => {
                self.bump();
                let cond = self.bexp()?;
                self.expect(Tok::Do)?;
                let body = self.atom_comm()?;
                Ok(Comm::While {
                    cond,
                    body: Box::new(body),
                })
            }
            Tok::Call => {
                self.bump();
                let proc = self.ident()?;
                self.expect(Tok::LParen)?;
                let arg = self.aexp()?;
                self.expect(Tok::Comma)?;
                let result = self.ident()?;
                self.expect(Tok::RParen)?;
                Ok(Comm::Call { proc, arg, result })
            }
            Tok::LParen => {
                self.bump();
                let inner = self.comm()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(self.error(format!("expected a command, found {}", other.describe()))),
        }
    }

    fn bexp(&mut self) -> Result<BExp, ParseError> {
        let mut lhs = self.band()?;
        while self.eat(Tok::Or) {
            let rhs = self.band()?;
            lhs = BExp::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn band(&mut self) -> Result<BExp, ParseError> {
        let mut lhs = self.bnot()?;
        while self.eat(Tok::And) {
            let rhs = self.bnot()?;
            lhs = BExp::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn bnot(&mut self) -> Result<BExp, ParseError> {
        if self.eat(Tok::Not) {
            Ok(BExp::Not(Box::new(self.bnot()?)))
        } else {
            self.bprimary()
        }
    }

    fn bprimary(&mut self) -> Result<BExp, ParseError> {
        // A leading `(` may open a parenthesized boolean or an arithmetic
        // operand of a comparison; try the comparison first and backtrack.
        let save = self.pos;
        match self.comparison() {
            Ok(cmp) => Ok(cmp),
            Err(cmp_err) => {
                self.pos = save;
                if self.eat(Tok::LParen) {
                    let inner = self.bexp()?;
                    self.expect(Tok::RParen)?;
                    Ok(inner)
                } else {
                    Err(cmp_err)
                }
            }
        }
    }

    fn comparison(&mut self) -> Result<BExp, ParseError> {
        let lhs = self.aexp()?;
        let op = match self.peek().tok {
            Tok::Eq => CmpOp::Eq,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => {
                return Err(self.error(format!(
                    "expected `=`, `>` or `>=`, found {}",
                    self.peek().tok.describe()
                )))
            }
        };
        self.bump();
        let rhs = self.aexp()?;
        Ok(BExp::Cmp(op, lhs, rhs))
    }

    fn aexp(&mut self) -> Result<AExp, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = AExp::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<AExp, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = AExp::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<AExp, ParseError> {
        match &self.peek().tok {
            Tok::Num(n) => {
                let n = *n;
                self.bump();
                Ok(AExp::Num(n))
            }
            Tok::Ident(_) => Ok(AExp::Var(self.ident()?)),
            Tok::Minus => {
                self.bump();
                Ok(AExp::Neg(Box::new(self.factor()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.aexp()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => {
                Err(self.error(format!("expected an expression, found {}", other.describe())))
            }
        }
    }
}

/// Parse a whole source file into a [`Program`].
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let tokens = lex(source)?;
    Parser { tokens, pos: 0 }.program()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_assignment() {
        let p = parse("x := 3").unwrap();
        assert!(p.procs.is_empty());
        assert_eq!(
            p.body,
            Comm::Assign {
                var: "x".into(),
                expr: AExp::Num(3)
            }
        );
    }

    #[test]
    fn conditional_with_two_assign_branches() {
        let p = parse("if x > y then x := x - 1 else y := y - 1").unwrap();
        match p.body {
            Comm::If {
                cond,
                then_branch,
                else_branch,
            } => {
                assert_eq!(cond.to_string(), "x > y");
                assert!(matches!(*then_branch, Comm::Assign { .. }));
                assert!(matches!(*else_branch, Comm::Assign { .. }));
            }
            other => panic!("expected if, got {other:?}"),
        }
    }

    #[test]
    fn five_block_example_program() {
        let p = parse("x := 3; read(y); if x > y then x := x - 1 else y := y - 1").unwrap();
        // Left-folded sequence: ((assign; read); if)
        match &p.body {
            Comm::Seq(first, second) => {
                assert!(matches!(**second, Comm::If { .. }));
                match &**first {
                    Comm::Seq(a, r) => {
                        assert!(matches!(**a, Comm::Assign { .. }));
                        assert!(matches!(**r, Comm::Read { .. }));
                    }
                    other => panic!("expected seq, got {other:?}"),
                }
            }
            other => panic!("expected seq, got {other:?}"),
        }
    }

    #[test]
    fn sequence_association_is_irrelevant() {
        let left = parse("(x := 1; y := 2); z := 3").unwrap();
        let right = parse("x := 1; (y := 2; z := 3)").unwrap();
        // Different trees, same commands in the same order.
        fn atoms(c: &Comm, out: &mut Vec<String>) {
            match c {
                Comm::Seq(a, b) => {
                    atoms(a, out);
                    atoms(b, out);
                }
                other => out.push(format!("{other:?}")),
            }
        }
        let (mut l, mut r) = (Vec::new(), Vec::new());
        atoms(&left.body, &mut l);
        atoms(&right.body, &mut r);
        assert_eq!(l, r);
    }

    #[test]
    fn procedures_and_calls() {
        let p = parse("proc id(val a, res b) is b := a end x := 1; call id(x, y)").unwrap();
        assert_eq!(p.procs.len(), 1);
        assert_eq!(p.procs[0].name, "id");
        assert_eq!(p.procs[0].val_param, "a");
        assert_eq!(p.procs[0].res_param, "b");
        match &p.body {
            Comm::Seq(_, call) => {
                assert_eq!(
                    **call,
                    Comm::Call {
                        proc: "id".into(),
                        arg: AExp::Var("x".into()),
                        result: "y".into()
                    }
                );
            }
            other => panic!("expected seq, got {other:?}"),
        }
    }

    #[test]
    fn precedence_in_expressions() {
        let p = parse("x := 1 + 2 * 3").unwrap();
        match p.body {
            Comm::Assign { expr, .. } => assert_eq!(expr.to_string(), "1 + 2 * 3"),
            _ => unreachable!(),
        }
        let p = parse("x := (1 + 2) * -3").unwrap();
        match p.body {
            Comm::Assign { expr, .. } => assert_eq!(expr.to_string(), "(1 + 2) * -3"),
            _ => unreachable!(),
        }
    }

    #[test]
    fn boolean_operators_and_parens() {
        let p = parse("while !(x = 0) && y > 1 || z >= 2 do x := 0").unwrap();
        match p.body {
            Comm::While { cond, .. } => {
                assert_eq!(cond.to_string(), "!(x = 0) && y > 1 || z >= 2");
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn parenthesized_loop_body() {
        let p = parse("x := 3; y := 4; while x > 1 do (x := x - 1; y := x * y)").unwrap();
        fn count_blocks(c: &Comm) -> usize {
            match c {
                Comm::Seq(a, b) => count_blocks(a) + count_blocks(b),
                Comm::If {
                    then_branch,
                    else_branch,
                    ..
                } => 1 + count_blocks(then_branch) + count_blocks(else_branch),
                Comm::While { body, .. } => 1 + count_blocks(body),
                _ => 1,
            }
        }
        assert_eq!(count_blocks(&p.body), 5);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse("x := ").unwrap_err();
        assert_eq!((err.line, err.col), (1, 6));

        let err = parse("x :=\n1 +\n* 2").unwrap_err();
        assert_eq!(err.line, 3);
        assert_eq!(err.col, 1);

        let err = parse("x : = 1").unwrap_err();
        assert!(err.message.contains("expected `=` after `:`"));
    }

    #[test]
    fn rejects_trailing_tokens() {
        assert!(parse("x := 1 end").is_err());
        assert!(parse("").is_err());
    }
}
