//! Small-step, cost-accounted reduction and bound verification.
//!
//! The strategy is weak call-by-value: the function is reduced before its
//! argument, and a beta step fires once both are values. Case scrutinees,
//! projected terms and the three parts of `rec` are reduced to values
//! first. Nothing is reduced under a lambda or inside case branches.
//!
//! Costs: a beta step costs the number of occurrences of the bound variable
//! in the body, a case step the occurrences of the chosen binder in the
//! chosen branch, a projection 1, and unrolling `rec` 0.

use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

use crate::bounds::{eval_bound, simplify, BoundError, SimplifyMode, Valuation};
use crate::checker::CheckReport;
use crate::syntax::Term;

pub const DEFAULT_FUEL: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    /// Child indices from the root to the redex.
    pub path: Vec<u8>,
    pub rule: &'static str,
    pub cost: u64,
}

impl StepRecord {
    pub fn path_string(&self) -> String {
        if self.path.is_empty() {
            ".".to_string()
        } else {
            self.path
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalTrace {
    pub steps: Vec<StepRecord>,
    pub total_cost: u64,
    pub normal_form: Term,
    pub normal_depth: u64,
}

impl fmt::Display for EvalTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            writeln!(
                f,
                "#{} rule={} cost={} at={}",
                i + 1,
                s.rule,
                s.cost,
                s.path_string()
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("fuel exhausted after {} steps", .0.steps.len())]
    FuelExhausted(Box<EvalTrace>),
    #[error("stuck term: {0}")]
    StuckTerm(Term),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub term: Term,
    pub record: StepRecord,
}

/// One step of the strategy, or `None` when `t` is in normal form.
pub fn step(t: &Term) -> Result<Option<Reduced>, EvalError> {
    let mut path = Vec::new();
    Ok(step_at(t, &mut path)?.map(|(term, rule, cost)| Reduced {
        term,
        record: StepRecord { path, rule, cost },
    }))
}

type Contracted = (Term, &'static str, u64);

fn step_child(
    child: &Term,
    index: u8,
    path: &mut Vec<u8>,
    rebuild: impl FnOnce(Term) -> Term,
) -> Result<Option<Contracted>, EvalError> {
    path.push(index);
    match step_at(child, path)? {
        Some((t, rule, cost)) => Ok(Some((rebuild(t), rule, cost))),
        None => {
            path.pop();
            Ok(None)
        }
    }
}

fn step_at(t: &Term, path: &mut Vec<u8>) -> Result<Option<Contracted>, EvalError> {
    match t {
        Term::Var(_) | Term::Unit | Term::Lam { .. } => Ok(None),
        Term::Inl(e) => step_child(e, 0, path, Term::inl),
        Term::Inr(e) => step_child(e, 0, path, Term::inr),
        Term::Pair(a, b) => {
            if let Some(r) = step_child(a, 0, path, |x| Term::pair(x, (**b).clone()))? {
                return Ok(Some(r));
            }
            step_child(b, 1, path, |y| Term::pair((**a).clone(), y))
        }
        Term::Prl(e) | Term::Prr(e) => {
            let left = matches!(t, Term::Prl(_));
            let wrap = if left { Term::prl } else { Term::prr };
            if let Some(r) = step_child(e, 0, path, wrap)? {
                return Ok(Some(r));
            }
            match &**e {
                Term::Pair(a, b) if e.is_value() => {
                    let (picked, rule) = if left { (a, "prl") } else { (b, "prr") };
                    Ok(Some(((**picked).clone(), rule, 1)))
                }
                other if other.is_value() => Err(EvalError::StuckTerm(t.clone())),
                _ => Ok(None),
            }
        }
        Term::Case {
            scrutinee,
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let rebuild = |s: Term| Term::Case {
                scrutinee: Box::new(s),
                left_binder: left_binder.clone(),
                left: left.clone(),
                right_binder: right_binder.clone(),
                right: right.clone(),
            };
            if let Some(r) = step_child(scrutinee, 0, path, rebuild)? {
                return Ok(Some(r));
            }
            match &**scrutinee {
                Term::Inl(v) if v.is_value() => Ok(Some((
                    left.subst(left_binder, v),
                    "case-left",
                    left.occurs(left_binder),
                ))),
                Term::Inr(v) if v.is_value() => Ok(Some((
                    right.subst(right_binder, v),
                    "case-right",
                    right.occurs(right_binder),
                ))),
                other if other.is_value() => Err(EvalError::StuckTerm(t.clone())),
                _ => Ok(None),
            }
        }
        Term::App(f, a) => {
            if let Some(r) = step_child(f, 0, path, |g| Term::app(g, (**a).clone()))? {
                return Ok(Some(r));
            }
            if let Some(r) = step_child(a, 1, path, |b| Term::app((**f).clone(), b))? {
                return Ok(Some(r));
            }
            match &**f {
                Term::Lam { binder, body, .. } if a.is_value() => {
                    Ok(Some((body.subst(binder, a), "beta", body.occurs(binder))))
                }
                Term::Lam { .. } => Ok(None),
                other if other.is_value() => Err(EvalError::StuckTerm(t.clone())),
                _ => Ok(None),
            }
        }
        Term::Rec { f, k, a } => {
            let rebuild_f = |x: Term| Term::rec(x, (**k).clone(), (**a).clone());
            if let Some(r) = step_child(f, 0, path, rebuild_f)? {
                return Ok(Some(r));
            }
            let rebuild_k = |x: Term| Term::rec((**f).clone(), x, (**a).clone());
            if let Some(r) = step_child(k, 1, path, rebuild_k)? {
                return Ok(Some(r));
            }
            let rebuild_a = |x: Term| Term::rec((**f).clone(), (**k).clone(), x);
            if let Some(r) = step_child(a, 2, path, rebuild_a)? {
                return Ok(Some(r));
            }
            if !(f.is_value() && k.is_value() && a.is_value()) {
                return Ok(None);
            }
            if !matches!(**f, Term::Lam { .. }) {
                return Err(EvalError::StuckTerm(t.clone()));
            }
            let mut out = (**a).clone();
            for _ in 0..rec_count(k) {
                out = Term::app((**f).clone(), out);
            }
            Ok(Some((out, "rec", 0)))
        }
    }
}

/// Number of unrollings for a `rec` whose count argument normalised to
/// `k`: the depth of `k` minus two, so that the numeral for `n` gives `n`.
pub fn rec_count(k: &Term) -> u64 {
    k.depth().saturating_sub(2)
}

pub fn normalize(t: &Term, fuel: u64) -> Result<EvalTrace, EvalError> {
    let mut current = t.clone();
    let mut steps = Vec::new();
    let mut total_cost = 0u64;
    loop {
        let Some(r) = step(&current)? else {
            let normal_depth = current.depth();
            return Ok(EvalTrace {
                steps,
                total_cost,
                normal_form: current,
                normal_depth,
            });
        };
        if steps.len() as u64 >= fuel {
            let normal_depth = current.depth();
            return Err(EvalError::FuelExhausted(Box::new(EvalTrace {
                steps,
                total_cost,
                normal_form: current,
                normal_depth,
            })));
        }
        total_cost += r.record.cost;
        steps.push(r.record);
        current = r.term;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub alpha_bound: BigUint,
    pub beta_bound: BigUint,
    pub measured_cost: u64,
    pub measured_depth: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Normalises a closed term and compares cost and depth with the bounds of
/// `report`.
pub fn verify_bounds(
    t: &Term,
    report: &CheckReport,
    fuel: u64,
) -> Result<VerifyReport, VerifyError> {
    let closed = |e: &crate::bounds::BoundExpr| -> Result<BigUint, BoundError> {
        let s = simplify(e, SimplifyMode::Exact).unwrap_or_else(|_| e.clone());
        eval_bound(&s, &Valuation::new())
    };
    let alpha_bound = closed(report.alpha())?;
    let beta_bound = closed(report.beta())?;
    let trace = normalize(t, fuel)?;
    let ok = BigUint::from(trace.total_cost) <= alpha_bound
        && BigUint::from(trace.normal_depth) <= beta_bound;
    Ok(VerifyReport {
        alpha_bound,
        beta_bound,
        measured_cost: trace.total_cost,
        measured_depth: trace.normal_depth,
        ok,
    })
}
