//! The shared test corpus: small SimpleHal programs covering straight-line
//! code, branching, loops, single and multiple call sites, nested call
//! chains, and a shared-callee topology (two procedures calling the same
//! callee). `inputs` feed the concrete interpreter's `read` commands.

pub struct CorpusProgram {
    pub name: &'static str,
    pub source: &'static str,
    pub inputs: &'static [i64],
}

pub const CORPUS: &[CorpusProgram] = &[
    CorpusProgram {
        name: "straight_line",
        source: "x := 1; y := x + 2; z := x * y",
        inputs: &[],
    },
    CorpusProgram {
        name: "branch",
        source: "x := 3; read(y); if x > y then x := x - 1 else y := y - 1",
        inputs: &[1],
    },
    CorpusProgram {
        name: "branch_other_arm",
        source: "x := 3; read(y); if x > y then x := x - 1 else y := y - 1",
        inputs: &[9],
    },
    CorpusProgram {
        name: "loop",
        source: "x := 3; y := 4; while x > 1 do (x := x - 1; y := x * y)",
        inputs: &[],
    },
    CorpusProgram {
        name: "nested_if_in_while",
        source: "read(n); s := 0; \
                 while n > 0 do (if n > 5 then s := s + 1 else s := s - 1; n := n - 1)",
        inputs: &[7],
    },
    CorpusProgram {
        name: "nested_while",
        source: "read(n); i := 0; \
                 while n > i do (j := 0; while i > j do j := j + 1; i := i + 1)",
        inputs: &[3],
    },
    CorpusProgram {
        name: "single_call",
        source: "proc id(val a, res b) is b := a end x := 1; call id(x, y)",
        inputs: &[],
    },
    CorpusProgram {
        name: "two_sites",
        source: "proc id(val a, res b) is b := a end \
                 x := 1; call id(x, y); x := 2; z := 0; call id(x, z)",
        inputs: &[],
    },
    CorpusProgram {
        name: "nested_calls",
        source: "proc g(val a, res b) is b := a + 1 end \
                 proc f(val c, res d) is call g(c, d) end \
                 x := 1; call f(x, y)",
        inputs: &[],
    },
    CorpusProgram {
        name: "call_chain_depth3",
        source: "proc h(val a, res b) is b := a * 2 end \
                 proc g(val c, res d) is call h(c, d) end \
                 proc f(val e, res q) is call g(e, q) end \
                 read(x); call f(x, y)",
        inputs: &[5],
    },
    CorpusProgram {
        name: "shared_callee",
        source: "proc g(val a, res b) is b := a + 1 end \
                 proc f(val c, res d) is (call g(c, d); d := d * 2) end \
                 x := 1; call f(x, y); call g(y, z)",
        inputs: &[],
    },
    CorpusProgram {
        name: "call_in_branch",
        source: "proc inc(val a, res b) is b := a + 1 end \
                 read(x); if x > 0 then call inc(x, y) else y := 0; z := y",
        inputs: &[2],
    },
    CorpusProgram {
        name: "call_in_loop",
        source: "proc dec(val a, res b) is b := a - 1 end \
                 read(n); while n > 0 do call dec(n, n); s := n",
        inputs: &[3],
    },
    CorpusProgram {
        name: "single_assign",
        source: "x := 42",
        inputs: &[],
    },
    CorpusProgram {
        name: "reads_then_sum",
        source: "read(x); read(y); z := x + y",
        inputs: &[4, 6],
    },
    CorpusProgram {
        name: "division_and_booleans",
        source: "x := 10; y := x / 2; \
                 if !(y = 0) && x > y then z := x / y else z := 0",
        inputs: &[],
    },
];

/// Self-recursive program: unbounded static call strings, so any finite
/// context bound is eventually exceeded.
pub const RECURSIVE: &str = "proc r(val a, res b) is \
                             (if a > 0 then call r(a - 1, b) else b := 0) end \
                             read(x); call r(x, y)";
