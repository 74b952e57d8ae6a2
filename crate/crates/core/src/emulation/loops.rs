//! Bounded loop programs and their compilation to CUFL.
//!
//! Numerals live in a fixed type `Unit + (Unit + ... + Unit)` with
//! `capacity` sums, holding `0 .. capacity - 1`. Successor saturates at a
//! top element, so every variable of the program has the same type and
//! `rec` can iterate over the tuple of all variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::bounds::BoundExpr;
use crate::checker::{CheckReport, Checker};
use crate::encoder::{decode_nat, encode_nat};
use crate::syntax::{fresh_name, Context, Term, Type};

use super::EmulationError;

pub const DEFAULT_CAPACITY: u64 = 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopExpr {
    Zero,
    Succ(String),
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopStmt {
    Assign(String, LoopExpr),
    /// Runs `body` as many times as `counter` held on entry.
    Loop {
        counter: String,
        body: Vec<LoopStmt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopProgram {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<LoopStmt>,
    pub ret: String,
}

fn ill(msg: impl Into<String>) -> EmulationError {
    EmulationError::IllFormedLoop(msg.into())
}

impl LoopProgram {
    /// Parameters first, then assigned variables in order of appearance.
    pub fn variables(&self) -> Vec<String> {
        fn walk(stmts: &[LoopStmt], out: &mut Vec<String>) {
            for s in stmts {
                match s {
                    LoopStmt::Assign(v, _) => {
                        if !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                    LoopStmt::Loop { body, .. } => walk(body, out),
                }
            }
        }
        let mut out = self.params.clone();
        walk(&self.body, &mut out);
        out
    }

    pub fn validate(&self) -> Result<(), EmulationError> {
        let mut seen = BTreeSet::new();
        for p in &self.params {
            if !seen.insert(p) {
                return Err(ill(format!("duplicate parameter `{p}`")));
            }
        }
        let vars: BTreeSet<String> = self.variables().into_iter().collect();
        let known = |v: &String| {
            if vars.contains(v) {
                Ok(())
            } else {
                Err(ill(format!("variable `{v}` is never defined")))
            }
        };
        fn assigned(stmts: &[LoopStmt], out: &mut BTreeSet<String>) {
            for s in stmts {
                match s {
                    LoopStmt::Assign(v, _) => {
                        out.insert(v.clone());
                    }
                    LoopStmt::Loop { body, .. } => assigned(body, out),
                }
            }
        }
        fn check(
            stmts: &[LoopStmt],
            known: &dyn Fn(&String) -> Result<(), EmulationError>,
        ) -> Result<(), EmulationError> {
            for s in stmts {
                match s {
                    LoopStmt::Assign(_, LoopExpr::Succ(w) | LoopExpr::Var(w)) => known(w)?,
                    LoopStmt::Assign(_, LoopExpr::Zero) => {}
                    LoopStmt::Loop { counter, body } => {
                        known(counter)?;
                        let mut inside = BTreeSet::new();
                        assigned(body, &mut inside);
                        if inside.contains(counter) {
                            return Err(ill(format!(
                                "loop counter `{counter}` is assigned inside its own loop"
                            )));
                        }
                        check(body, known)?;
                    }
                }
            }
            Ok(())
        }
        check(&self.body, &known)?;
        known(&self.ret)
    }
}

/// Reference interpreter over unbounded naturals. Variables start at 0.
pub fn run_loop_direct(p: &LoopProgram, args: &[u64]) -> Result<u64, EmulationError> {
    p.validate()?;
    if args.len() != p.params.len() {
        return Err(EmulationError::Arity {
            expected: p.params.len(),
            got: args.len(),
        });
    }
    let mut env: BTreeMap<String, u64> = p.variables().into_iter().map(|v| (v, 0)).collect();
    for (x, a) in p.params.iter().zip(args) {
        env.insert(x.clone(), *a);
    }
    fn exec(stmts: &[LoopStmt], env: &mut BTreeMap<String, u64>) {
        for s in stmts {
            match s {
                LoopStmt::Assign(v, e) => {
                    let value = match e {
                        LoopExpr::Zero => 0,
                        LoopExpr::Succ(w) => env[w].saturating_add(1),
                        LoopExpr::Var(w) => env[w],
                    };
                    env.insert(v.clone(), value);
                }
                LoopStmt::Loop { counter, body } => {
                    for _ in 0..env[counter] {
                        exec(body, env);
                    }
                }
            }
        }
    }
    exec(&p.body, &mut env);
    Ok(env[&p.ret])
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Sym(&'static str),
    Eof,
}

struct LoopParser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

const KEYWORDS: &[&str] = &["prog", "loop", "succ", "return"];

fn lex_loop(src: &str) -> Result<Vec<(Tok, usize, usize)>, EmulationError> {
    let mut out = Vec::new();
    for (ln, line) in src.lines().enumerate() {
        let line = line.split("--").next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                out.push((Tok::Ident(word), ln + 1, col));
            } else if c == '0' {
                out.push((Tok::Zero, ln + 1, col));
                i += 1;
            } else if c == ':' && chars.get(i + 1) == Some(&'=') {
                out.push((Tok::Sym(":="), ln + 1, col));
                i += 2;
            } else {
                let sym = match c {
                    '(' => "(",
                    ')' => ")",
                    '{' => "{",
                    '}' => "}",
                    ';' => ";",
                    ',' => ",",
                    _ => {
                        return Err(EmulationError::Parse {
                            line: ln + 1,
                            col,
                            message: format!("unexpected character `{c}`"),
                        })
                    }
                };
                out.push((Tok::Sym(sym), ln + 1, col));
                i += 1;
            }
        }
    }
    let last = src.lines().count().max(1);
    out.push((Tok::Eof, last, 1));
    Ok(out)
}

impl LoopParser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, EmulationError> {
        let (_, line, col) = self.toks[self.pos];
        Err(EmulationError::Parse {
            line,
            col,
            message: message.into(),
        })
    }

    fn sym(&mut self, s: &str) -> Result<(), EmulationError> {
        if matches!(self.peek(), Tok::Sym(t) if *t == s) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{s}`"))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), EmulationError> {
        if matches!(self.peek(), Tok::Ident(w) if w == kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`"))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == kw)
    }

    fn ident(&mut self) -> Result<String, EmulationError> {
        match self.peek().clone() {
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok(w)
            }
            _ => self.error("expected identifier"),
        }
    }

    fn program(&mut self) -> Result<LoopProgram, EmulationError> {
        self.keyword("prog")?;
        let name = self.ident()?;
        self.sym("(")?;
        let mut params = Vec::new();
        if *self.peek() != Tok::Sym(")") {
            params.push(self.ident()?);
            while *self.peek() == Tok::Sym(",") {
                self.bump();
                params.push(self.ident()?);
            }
        }
        self.sym(")")?;
        self.sym("{")?;
        let body = self.stmts()?;
        self.keyword("return")?;
        let ret = self.ident()?;
        if *self.peek() == Tok::Sym(";") {
            self.bump();
        }
        self.sym("}")?;
        if *self.peek() != Tok::Eof {
            return self.error("trailing input after program");
        }
        Ok(LoopProgram {
            name,
            params,
            body,
            ret,
        })
    }

    fn stmts(&mut self) -> Result<Vec<LoopStmt>, EmulationError> {
        let mut out = Vec::new();
        while !self.is_keyword("return") && *self.peek() != Tok::Sym("}") {
            out.push(self.stmt()?);
            if *self.peek() == Tok::Sym(";") {
                self.bump();
            }
        }
        Ok(out)
    }

    fn stmt(&mut self) -> Result<LoopStmt, EmulationError> {
        if self.is_keyword("loop") {
            self.bump();
            let counter = self.ident()?;
            self.sym("{")?;
            let body = self.stmts()?;
            self.sym("}")?;
            return Ok(LoopStmt::Loop { counter, body });
        }
        let v = self.ident()?;
        self.sym(":=")?;
        let e = match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                LoopExpr::Zero
            }
            Tok::Ident(w) if w == "succ" => {
                self.bump();
                LoopExpr::Succ(self.ident()?)
            }
            _ => LoopExpr::Var(self.ident()?),
        };
        Ok(LoopStmt::Assign(v, e))
    }
}

pub fn parse_loop_program(src: &str) -> Result<LoopProgram, EmulationError> {
    let mut p = LoopParser {
        toks: lex_loop(src)?,
        pos: 0,
    };
    let prog = p.program()?;
    prog.validate()?;
    Ok(prog)
}

/// A compiled program: `λx1. ... λxn. body` over numerals of the given
/// capacity. `alpha`/`beta` are the innermost arrow payload, i.e. the cost
/// and depth of a full application as functions of the parameters' depths.
#[derive(Clone, Debug)]
pub struct CompiledLoop {
    pub term: Term,
    pub capacity: u64,
    pub alpha: BoundExpr,
    pub beta: BoundExpr,
    pub report: CheckReport,
}

impl CompiledLoop {
    pub fn apply(&self, args: &[u64]) -> Result<Term, EmulationError> {
        let mut t = self.term.clone();
        for &a in args {
            if a >= self.capacity {
                return Err(EmulationError::CapacityExceeded(a, self.capacity));
            }
            t = Term::app(t, encode_nat(a));
        }
        Ok(t)
    }

    pub fn decode(&self, normal_form: &Term) -> Result<u64, EmulationError> {
        decode_nat(normal_form).map_err(|_| {
            if *normal_form == saturated(self.capacity) {
                EmulationError::CapacityExceeded(self.capacity, self.capacity)
            } else {
                EmulationError::Decode(normal_form.to_string())
            }
        })
    }
}

fn saturated(capacity: u64) -> Term {
    let mut t = Term::Unit;
    for _ in 0..capacity {
        t = Term::inr(t);
    }
    t
}

/// Saturating successor on numerals of the given capacity.
fn succ_term(e: Term, capacity: u64) -> Term {
    if capacity <= 1 {
        return Term::inr(Term::Unit);
    }
    Term::case(
        e,
        "z",
        Term::inr(encode_nat(0)),
        "y",
        Term::inr(succ_term(Term::var("y"), capacity - 1)),
    )
}

fn proj(s: &Term, i: usize) -> Term {
    let mut t = s.clone();
    for _ in 0..i {
        t = Term::prr(t);
    }
    Term::prl(t)
}

fn tuple(components: Vec<Term>) -> Term {
    components
        .into_iter()
        .rev()
        .fold(Term::Unit, |rest, c| Term::pair(c, rest))
}

struct Compiler {
    vars: Vec<String>,
    capacity: u64,
    used: BTreeSet<String>,
}

impl Compiler {
    fn fresh(&mut self) -> String {
        let name = fresh_name("s", &self.used);
        self.used.insert(name.clone());
        name
    }

    fn index(&self, v: &str) -> usize {
        self.vars.iter().position(|w| w == v).expect("validated")
    }

    fn lam(&self, x: &str, body: Term) -> Term {
        Term::lam(x, x, body)
    }

    fn stmts(&mut self, stmts: &[LoopStmt], mut state: Term) -> Term {
        for s in stmts {
            let x = self.fresh();
            let sv = Term::var(x.clone());
            let body = match s {
                LoopStmt::Assign(v, e) => {
                    let target = self.index(v);
                    let comps = (0..self.vars.len())
                        .map(|j| {
                            if j != target {
                                return proj(&sv, j);
                            }
                            match e {
                                LoopExpr::Zero => encode_nat(0),
                                LoopExpr::Var(w) => proj(&sv, self.index(w)),
                                LoopExpr::Succ(w) => {
                                    succ_term(proj(&sv, self.index(w)), self.capacity)
                                }
                            }
                        })
                        .collect();
                    tuple(comps)
                }
                LoopStmt::Loop { counter, body } => {
                    let t = self.fresh();
                    let inner = self.stmts(body, Term::var(t.clone()));
                    let f = self.lam(&t, inner);
                    Term::rec(f, proj(&sv, self.index(counter)), sv.clone())
                }
            };
            state = Term::app(self.lam(&x, body), state);
        }
        state
    }
}

pub fn compile_loop(p: &LoopProgram, capacity: u64) -> Result<CompiledLoop, EmulationError> {
    p.validate()?;
    let capacity = capacity.max(1);
    let vars = p.variables();
    let mut used: BTreeSet<String> = vars.iter().cloned().collect();
    used.insert("y".into());
    used.insert("z".into());
    let mut c = Compiler {
        vars: vars.clone(),
        capacity,
        used,
    };
    let init = tuple(
        vars.iter()
            .map(|v| {
                if p.params.contains(v) {
                    Term::var(v.clone())
                } else {
                    encode_nat(0)
                }
            })
            .collect(),
    );
    let last = c.stmts(&p.body, init);
    let mut term = proj(&last, c.index(&p.ret));
    for x in p.params.iter().rev() {
        term = Term::lam(x.clone(), x.clone(), term);
    }
    let report = Checker::new().infer(&Context::new(), &term)?;
    let (alpha, beta) = innermost_payload(report.ty(), p.params.len())
        .unwrap_or_else(|| (report.alpha().clone(), report.beta().clone()));
    Ok(CompiledLoop {
        term,
        capacity,
        alpha,
        beta,
        report,
    })
}

fn innermost_payload(ty: &Type, arity: usize) -> Option<(BoundExpr, BoundExpr)> {
    let mut cur = ty;
    let mut payload = None;
    for _ in 0..arity {
        let Type::Arrow {
            alpha,
            beta,
            codomain,
            ..
        } = cur
        else {
            return None;
        };
        payload = Some((alpha.clone(), beta.clone()));
        cur = codomain;
    }
    payload
}
