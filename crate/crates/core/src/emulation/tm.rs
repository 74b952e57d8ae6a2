//! Single-tape Turing machines: a reference simulator and a compiler to a
//! `rec` over a case-cascade step function.
//!
//! States and symbols are balanced binary sums of `Unit`. The tape has a
//! fixed number of cells `T`; a configuration is a balanced sum over head
//! positions `p` of `State * (List_p * List_(T-p))`, where the first list
//! holds the cells left of the head (nearest first) and the second the
//! current cell followed by the cells to its right.

use std::collections::{BTreeMap, BTreeSet};

use crate::bounds::BoundExpr;
use crate::checker::{CheckReport, Checker};
use crate::encoder::encode_nat;
use crate::syntax::{Context, Term};

use super::EmulationError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    L,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub next: String,
    pub write: String,
    pub mv: Move,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    pub states: Vec<String>,
    /// The first symbol is the blank.
    pub alphabet: Vec<String>,
    pub start: String,
    pub halt: BTreeSet<String>,
    pub transitions: BTreeMap<(String, String), Transition>,
}

/// Tape contents around the head. `left` lists the cells left of the head,
/// nearest first; `right` starts with the current cell. Trailing blanks of
/// `right` are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TapeConfig {
    pub state: String,
    pub left: Vec<String>,
    pub right: Vec<String>,
}

impl TapeConfig {
    fn new(state: String, tape: &[String], head: usize, blank: &str) -> Self {
        let left = tape[..head.min(tape.len())].iter().rev().cloned().collect();
        let mut right: Vec<String> = tape.get(head..).map(<[String]>::to_vec).unwrap_or_default();
        while right.last().is_some_and(|s| s == blank) {
            right.pop();
        }
        TapeConfig { state, left, right }
    }

    pub fn head(&self) -> usize {
        self.left.len()
    }

    /// Tape contents from cell 0, without trailing blanks.
    pub fn tape(&self) -> Vec<String> {
        let mut t: Vec<String> = self.left.iter().rev().cloned().collect();
        t.extend(self.right.iter().cloned());
        t
    }
}

impl TmSpec {
    pub fn blank(&self) -> &str {
        &self.alphabet[0]
    }

    /// A machine stops in a halting state or when no transition applies.
    pub fn halts(&self, state: &str, symbol: &str) -> bool {
        self.halt.contains(state)
            || !self
                .transitions
                .contains_key(&(state.to_string(), symbol.to_string()))
    }

    /// Splits an input string into one symbol per character.
    pub fn input_from_str(&self, s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn state_index(&self, s: &str) -> usize {
        self.states
            .iter()
            .position(|x| x == s)
            .expect("validated state")
    }

    fn symbol_index(&self, a: &str) -> usize {
        self.alphabet
            .iter()
            .position(|x| x == a)
            .expect("validated symbol")
    }

    fn check_input(&self, input: &[String]) -> Result<(), EmulationError> {
        for a in input {
            if !self.alphabet.contains(a) {
                return Err(EmulationError::Decode(format!(
                    "input symbol `{a}` is not in the alphabet"
                )));
            }
        }
        Ok(())
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> EmulationError {
    EmulationError::Parse {
        line,
        col: 1,
        message: message.into(),
    }
}

/// Line-oriented format: `states:`, `alphabet:` (blank first), `start:`,
/// `halt:` headers, then transitions `s a -> t b R`. `--` starts a comment.
pub fn parse_tm(src: &str) -> Result<TmSpec, EmulationError> {
    let mut states = None;
    let mut alphabet = None;
    let mut start = None;
    let mut halt = BTreeSet::new();
    let mut rows = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let ln = i + 1;
        let line = raw.split("--").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':') {
            let words: Vec<String> = rest.split_whitespace().map(String::from).collect();
            match key.trim() {
                "states" => states = Some(words),
                "alphabet" => alphabet = Some(words),
                "start" => {
                    let [s] = words.as_slice() else {
                        return Err(parse_error(ln, "`start:` takes exactly one state"));
                    };
                    start = Some(s.clone());
                }
                "halt" => halt = words.into_iter().collect(),
                other => return Err(parse_error(ln, format!("unknown header `{other}`"))),
            }
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let [s, a, "->", t, b, m] = words.as_slice() else {
            return Err(parse_error(
                ln,
                "expected `state symbol -> state symbol L|R`",
            ));
        };
        let mv = match *m {
            "L" => Move::L,
            "R" => Move::R,
            other => return Err(parse_error(ln, format!("unknown move `{other}`"))),
        };
        rows.push((
            ln,
            s.to_string(),
            a.to_string(),
            t.to_string(),
            b.to_string(),
            mv,
        ));
    }
    let states = states.ok_or_else(|| parse_error(1, "missing `states:`"))?;
    let alphabet = alphabet.ok_or_else(|| parse_error(1, "missing `alphabet:`"))?;
    let start = start.ok_or_else(|| parse_error(1, "missing `start:`"))?;
    if states.is_empty() || alphabet.is_empty() {
        return Err(EmulationError::AlphabetTooLarge);
    }
    let known_state = |s: &str, ln| {
        if states.iter().any(|x| x == s) {
            Ok(())
        } else {
            Err(parse_error(ln, format!("unknown state `{s}`")))
        }
    };
    let known_symbol = |a: &str, ln| {
        if alphabet.iter().any(|x| x == a) {
            Ok(())
        } else {
            Err(parse_error(ln, format!("unknown symbol `{a}`")))
        }
    };
    known_state(&start, 1)?;
    for h in &halt {
        known_state(h, 1)?;
    }
    let mut transitions = BTreeMap::new();
    for (ln, s, a, t, b, mv) in rows {
        known_state(&s, ln)?;
        known_state(&t, ln)?;
        known_symbol(&a, ln)?;
        known_symbol(&b, ln)?;
        let key = (s, a);
        if transitions.contains_key(&key) {
            return Err(parse_error(ln, "duplicate transition"));
        }
        transitions.insert(
            key,
            Transition {
                next: t,
                write: b,
                mv,
            },
        );
    }
    Ok(TmSpec {
        states,
        alphabet,
        start,
        halt,
        transitions,
    })
}

/// Reference simulation on a semi-infinite tape; moving left at cell 0
/// stays put. Returns the halting configuration and the number of steps.
pub fn run_tm_direct(
    tm: &TmSpec,
    input: &[String],
    max_steps: u64,
) -> Result<(TapeConfig, u64), EmulationError> {
    tm.check_input(input)?;
    let blank = tm.blank().to_string();
    let mut tape: Vec<String> = input.to_vec();
    if tape.is_empty() {
        tape.push(blank.clone());
    }
    let mut head = 0usize;
    let mut state = tm.start.clone();
    let mut steps = 0u64;
    loop {
        let symbol = tape[head].clone();
        if tm.halts(&state, &symbol) {
            return Ok((TapeConfig::new(state, &tape, head, &blank), steps));
        }
        if steps == max_steps {
            return Err(EmulationError::StepLimitExceeded(max_steps));
        }
        let tr = &tm.transitions[&(state.clone(), symbol)];
        tape[head] = tr.write.clone();
        state = tr.next.clone();
        match tr.mv {
            Move::L => head = head.saturating_sub(1),
            Move::R => {
                head += 1;
                if head == tape.len() {
                    tape.push(blank.clone());
                }
            }
        }
        steps += 1;
    }
}

fn split(n: usize) -> (usize, usize) {
    let l = n.div_ceil(2);
    (l, n - l)
}

/// Element `i` of a balanced sum of `n` summands.
fn inject(i: usize, n: usize, payload: Term) -> Term {
    if n == 1 {
        return payload;
    }
    let (l, r) = split(n);
    if i < l {
        Term::inl(inject(i, l, payload))
    } else {
        Term::inr(inject(i - l, r, payload))
    }
}

/// Inverse of [`inject`].
fn project(t: &Term, n: usize) -> Option<(usize, &Term)> {
    if n == 1 {
        return Some((0, t));
    }
    let (l, r) = split(n);
    match t {
        Term::Inl(e) => project(e, l),
        Term::Inr(e) => project(e, r).map(|(i, p)| (i + l, p)),
        _ => None,
    }
}

/// Nested case analysis on a balanced sum. Every binder is used exactly
/// once, as the scrutinee of the next level, so each level costs 1.
fn cascade(
    scrut: Term,
    n: usize,
    prefix: &str,
    depth: usize,
    offset: usize,
    leaf: &mut dyn FnMut(usize, Term) -> Term,
) -> Term {
    if n == 1 {
        return leaf(offset, scrut);
    }
    let (l, r) = split(n);
    let lx = format!("{prefix}{depth}l");
    let rx = format!("{prefix}{depth}r");
    let left = cascade(Term::var(lx.clone()), l, prefix, depth + 1, offset, leaf);
    let right = cascade(
        Term::var(rx.clone()),
        r,
        prefix,
        depth + 1,
        offset + l,
        leaf,
    );
    Term::case(scrut, lx, left, rx, right)
}

#[derive(Clone, Debug)]
pub struct CompiledTm {
    pub term: Term,
    /// Number of tape cells.
    pub cells: usize,
    pub step_bound: u64,
    pub alpha: BoundExpr,
    pub beta: BoundExpr,
    pub report: CheckReport,
}

fn list(cells: &[Term]) -> Term {
    cells
        .iter()
        .rev()
        .fold(Term::Unit, |rest, c| Term::pair(c.clone(), rest))
}

fn step_function(tm: &TmSpec, cells: usize) -> Term {
    let ns = tm.states.len();
    let na = tm.alphabet.len();
    let mut position_leaf = |p: usize, q: Term| -> Term {
        let left = Term::prl(Term::prr(q.clone()));
        let right = Term::prr(Term::prr(q.clone()));
        let mut state_leaf = |si: usize, _: Term| -> Term {
            let mut symbol_leaf = |ai: usize, _: Term| -> Term {
                let (s, a) = (&tm.states[si], &tm.alphabet[ai]);
                if tm.halts(s, a) {
                    return inject(p, cells, q.clone());
                }
                let tr = &tm.transitions[&(s.clone(), a.clone())];
                let st = inject(tm.state_index(&tr.next), ns, Term::Unit);
                let written = inject(tm.symbol_index(&tr.write), na, Term::Unit);
                let tail = Term::prr(right.clone());
                let config = |p: usize, l: Term, r: Term| {
                    inject(p, cells, Term::pair(st.clone(), Term::pair(l, r)))
                };
                match tr.mv {
                    Move::R if p + 1 < cells => {
                        config(p + 1, Term::pair(written, left.clone()), tail)
                    }
                    Move::L if p > 0 => config(
                        p - 1,
                        Term::prr(left.clone()),
                        Term::pair(Term::prl(left.clone()), Term::pair(written, tail)),
                    ),
                    _ => config(p, left.clone(), Term::pair(written, tail)),
                }
            };
            cascade(Term::prl(right.clone()), na, "a", 0, 0, &mut symbol_leaf)
        };
        cascade(Term::prl(q.clone()), ns, "b", 0, 0, &mut state_leaf)
    };
    let body = cascade(Term::var("c"), cells, "p", 0, 0, &mut position_leaf);
    Term::lam("c", "c", body)
}

fn initial_config(tm: &TmSpec, input: &[String], cells: usize) -> Term {
    let na = tm.alphabet.len();
    let mut tape: Vec<Term> = input
        .iter()
        .map(|a| inject(tm.symbol_index(a), na, Term::Unit))
        .collect();
    tape.resize(cells, inject(0, na, Term::Unit));
    let start = inject(tm.state_index(&tm.start), tm.states.len(), Term::Unit);
    inject(
        0,
        cells,
        Term::pair(start, Term::pair(Term::Unit, list(&tape))),
    )
}

/// `rec step (numeral step_bound) init`, with a tape long enough for
/// `step_bound` moves.
pub fn compile_tm(
    tm: &TmSpec,
    input: &[String],
    step_bound: u64,
) -> Result<CompiledTm, EmulationError> {
    if tm.states.is_empty() || tm.alphabet.is_empty() {
        return Err(EmulationError::AlphabetTooLarge);
    }
    tm.check_input(input)?;
    let cells = input.len().max(step_bound as usize + 1);
    let term = Term::rec(
        step_function(tm, cells),
        encode_nat(step_bound),
        initial_config(tm, input, cells),
    );
    let report = Checker::new().infer(&Context::new(), &term)?;
    Ok(CompiledTm {
        alpha: report.alpha().clone(),
        beta: report.beta().clone(),
        term,
        cells,
        step_bound,
        report,
    })
}

fn decode_list(t: &Term, len: usize) -> Option<Vec<&Term>> {
    let mut out = Vec::with_capacity(len);
    let mut cur = t;
    for _ in 0..len {
        let Term::Pair(h, rest) = cur else {
            return None;
        };
        out.push(&**h);
        cur = rest;
    }
    (*cur == Term::Unit).then_some(out)
}

pub fn decode_tm_config(
    tm: &TmSpec,
    compiled: &CompiledTm,
    normal_form: &Term,
) -> Result<TapeConfig, EmulationError> {
    let bad = || EmulationError::Decode(normal_form.to_string());
    let cells = compiled.cells;
    let (p, payload) = project(normal_form, cells).ok_or_else(bad)?;
    let Term::Pair(st, lists) = payload else {
        return Err(bad());
    };
    let Term::Pair(l, r) = &**lists else {
        return Err(bad());
    };
    let symbol = |t: &Term| -> Result<String, EmulationError> {
        match project(t, tm.alphabet.len()) {
            Some((i, Term::Unit)) => Ok(tm.alphabet[i].clone()),
            _ => Err(bad()),
        }
    };
    let (si, unit) = project(st, tm.states.len()).ok_or_else(bad)?;
    if *unit != Term::Unit {
        return Err(bad());
    }
    let left = decode_list(l, p).ok_or_else(bad)?;
    let right = decode_list(r, cells - p).ok_or_else(bad)?;
    let mut tape: Vec<String> = left
        .iter()
        .rev()
        .map(|t| symbol(t))
        .collect::<Result<_, _>>()?;
    for t in right {
        tape.push(symbol(t)?);
    }
    Ok(TapeConfig::new(tm.states[si].clone(), &tape, p, tm.blank()))
}
