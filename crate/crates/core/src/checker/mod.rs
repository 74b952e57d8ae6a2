//! Type and bound inference, and checking of claimed judgements.
//!
//! `infer` synthesises a type together with a cost bound `α` and a depth
//! bound `β` by structural recursion. `check` additionally compares the
//! result against a claimed judgement using the bound comparison procedure.

mod infer;
mod unify;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::bounds::{BoundError, BoundExpr, LeqVerdict, Valuation};
use crate::syntax::{Context, Judgement, Term, Type};

pub const DEFAULT_GRID: u64 = 4;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum CheckError {
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: Type, found: Type },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("applied a term of non-function type {0}")]
    NonArrowApplied(Type),
    #[error("rec expects a function of type A -> A, found {0}")]
    RecShapeError(Type),
    #[error("depth bound {0} cannot be peeled")]
    PeelError(BoundExpr),
    #[error("bound violation in {what}: {lhs} > {rhs} at {witness}")]
    BoundViolation {
        what: String,
        lhs: BoundExpr,
        rhs: BoundExpr,
        witness: Valuation,
    },
    #[error("claimed judgement is about a different term")]
    TermMismatch,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum CheckStatus {
    Valid,
    ValidWithUnknownLeq,
    Invalid(CheckError),
}

impl CheckStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CheckStatus::Valid => "Valid",
            CheckStatus::ValidWithUnknownLeq => "ValidWithUnknownLeq",
            CheckStatus::Invalid(_) => "Invalid",
        }
    }
}

/// One rule application. `premises` index earlier steps of the same trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleStep {
    pub rule: &'static str,
    pub alpha: BoundExpr,
    pub beta: BoundExpr,
    pub premises: Vec<usize>,
}

/// A subsumption inequality examined while checking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeqCheck {
    pub what: String,
    pub lhs: BoundExpr,
    pub rhs: BoundExpr,
    pub verdict: LeqVerdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub judgement: Judgement,
    pub status: CheckStatus,
    /// Post-order; the last step concludes the judgement.
    pub rule_trace: Vec<RuleStep>,
    pub leq_checks: Vec<LeqCheck>,
}

impl CheckReport {
    pub fn alpha(&self) -> &BoundExpr {
        &self.judgement.alpha
    }

    pub fn beta(&self) -> &BoundExpr {
        &self.judgement.beta
    }

    pub fn ty(&self) -> &Type {
        &self.judgement.ty
    }

    pub fn is_invalid(&self) -> bool {
        matches!(self.status, CheckStatus::Invalid(_))
    }

    pub fn has_unknown_leq(&self) -> bool {
        self.status == CheckStatus::ValidWithUnknownLeq
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  [{}]", self.judgement, self.status.label())?;
        if let CheckStatus::Invalid(e) = &self.status {
            write!(f, ": {e}")?;
        }
        Ok(())
    }
}

/// A checked top-level definition.
#[derive(Clone, Debug, PartialEq)]
pub struct DefEntry {
    pub ty: Type,
    pub alpha: BoundExpr,
    pub beta: BoundExpr,
    /// The definition body with references to earlier definitions inlined.
    pub term: Term,
}

#[derive(Clone, Debug)]
pub struct Checker {
    grid: u64,
    defs: BTreeMap<String, DefEntry>,
}

impl Default for Checker {
    fn default() -> Self {
        Checker::new()
    }
}

impl Checker {
    pub fn new() -> Self {
        Checker {
            grid: DEFAULT_GRID,
            defs: BTreeMap::new(),
        }
    }

    pub fn with_grid(grid: u64) -> Self {
        Checker {
            grid,
            defs: BTreeMap::new(),
        }
    }

    pub fn grid(&self) -> u64 {
        self.grid
    }

    pub fn def(&self, name: &str) -> Option<&DefEntry> {
        self.defs.get(name)
    }

    /// Replaces free references to known definitions by their bodies.
    pub fn expand_defs(&self, t: &Term) -> Term {
        let mut out = t.clone();
        for x in t.free_vars() {
            if let Some(d) = self.defs.get(&x) {
                out = out.subst(&x, &d.term);
            }
        }
        out
    }

    pub fn infer(&self, ctx: &Context, t: &Term) -> Result<CheckReport, CheckError> {
        let mut s = infer::Session::new(self);
        let out = s.infer(ctx, t)?;
        Ok(s.finish(ctx, t, out))
    }

    /// Infers `t` and compares the result with `claimed`.
    pub fn check(
        &self,
        ctx: &Context,
        t: &Term,
        claimed: &Judgement,
    ) -> Result<CheckReport, CheckError> {
        if !crate::syntax::alpha_eq(t, &claimed.term) {
            return Err(CheckError::TermMismatch);
        }
        let mut s = infer::Session::new(self);
        let out = s.infer(ctx, t)?;
        let mut leqs = Vec::new();
        s.subtype(&out.ty, &claimed.ty, &mut leqs)?;
        leqs.push(s.leq("alpha", &out.alpha, &claimed.alpha));
        leqs.push(s.leq("beta", &out.beta, &claimed.beta));
        let mut report = s.finish(ctx, t, out);
        report.status = summarize(&leqs);
        report.leq_checks = leqs;
        report.judgement = claimed.clone();
        Ok(report)
    }

    /// Checks a definition against its declared type and registers it.
    /// The definition is registered even when the check fails, so later
    /// definitions can still be examined.
    pub fn add_def(
        &mut self,
        name: &str,
        declared: &Type,
        term: &Term,
    ) -> Result<CheckReport, CheckError> {
        let ctx = Context::new();
        let mut s = infer::Session::new(self);
        let out = s.infer(&ctx, term)?;
        let mut leqs = Vec::new();
        s.subtype(&out.ty, declared, &mut leqs)?;
        let mut report = s.finish(&ctx, term, out);
        report.status = summarize(&leqs);
        report.leq_checks = leqs;
        report.judgement.ty = declared.clone();
        let entry = DefEntry {
            ty: declared.clone(),
            alpha: report.judgement.alpha.clone(),
            beta: report.judgement.beta.clone(),
            term: self.expand_defs(term),
        };
        self.defs.insert(name.to_string(), entry);
        Ok(report)
    }
}

fn summarize(leqs: &[LeqCheck]) -> CheckStatus {
    if let Some(bad) = leqs.iter().find(|c| c.verdict.is_refuted()) {
        let LeqVerdict::Refuted(witness) = &bad.verdict else {
            unreachable!()
        };
        return CheckStatus::Invalid(CheckError::BoundViolation {
            what: bad.what.clone(),
            lhs: bad.lhs.clone(),
            rhs: bad.rhs.clone(),
            witness: witness.clone(),
        });
    }
    if leqs
        .iter()
        .any(|c| matches!(c.verdict, LeqVerdict::Unknown { .. }))
    {
        CheckStatus::ValidWithUnknownLeq
    } else {
        CheckStatus::Valid
    }
}

pub fn infer(ctx: &Context, t: &Term) -> Result<CheckReport, CheckError> {
    Checker::new().infer(ctx, t)
}

pub fn check(
    ctx: &Context,
    t: &Term,
    claimed: &Judgement,
    grid: u64,
) -> Result<CheckReport, CheckError> {
    Checker::with_grid(grid).check(ctx, t, claimed)
}
