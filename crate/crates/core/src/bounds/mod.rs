//! Symbolic upper-bound expressions over size variables.
//!
//! A bound describes either the evaluation cost of a proof term or the
//! depth of its normal form, as a function of the depths of its inputs.
//! Every size variable ranges over the positive naturals.

mod eval;
mod leq;
mod poly;
mod simplify;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

pub use eval::{eval_bound, eval_bound_with, EvalLimits, Valuation};
pub use leq::{leq_bounds, witness_violates, LeqVerdict};
pub use poly::Polynomial;
pub use simplify::{simplify, SimplifyMode, DEFAULT_REWRITE_BUDGET};

/// Name of a size variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeVar(String);

impl SizeVar {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "size variable names are nonempty");
        SizeVar(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl From<&str> for SizeVar {
    fn from(s: &str) -> Self {
        SizeVar::new(s)
    }
}

impl From<String> for SizeVar {
    fn from(s: String) -> Self {
        SizeVar::new(s)
    }
}

impl fmt::Display for SizeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bound evaluated to a non-positive value")]
    NonPositive,
    #[error("size variable `{0}` has no value")]
    UnboundSizeVar(SizeVar),
    #[error("bound value exceeds the evaluation limit")]
    Overflow,
    #[error("rewriting did not reach a fixed point within {0} passes")]
    RewriteBudgetExceeded(usize),
}

/// A symbolic upper bound.
///
/// `Iter { body, count, var }` applies `x ↦ body[var := x]` `count` times,
/// starting from the value `var` has in the surrounding valuation.
/// `Subst` is a deferred substitution: `replacement` is evaluated first and
/// bound to `var` while evaluating `target`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundExpr {
    Var(SizeVar),
    Lit(BigUint),
    Add(Box<BoundExpr>, Box<BoundExpr>),
    Sub(Box<BoundExpr>, Box<BoundExpr>),
    Mul(Box<BoundExpr>, Box<BoundExpr>),
    Pow(Box<BoundExpr>, Box<BoundExpr>),
    Iter {
        body: Box<BoundExpr>,
        count: Box<BoundExpr>,
        var: SizeVar,
    },
    Subst {
        target: Box<BoundExpr>,
        var: SizeVar,
        replacement: Box<BoundExpr>,
    },
    Max(Box<BoundExpr>, Box<BoundExpr>),
}

impl BoundExpr {
    pub fn var(name: impl Into<String>) -> Self {
        BoundExpr::Var(SizeVar::new(name))
    }

    /// Literal bound. Panics on zero: literals are positive.
    pub fn lit(n: u64) -> Self {
        assert!(n >= 1, "bound literals are positive");
        BoundExpr::Lit(BigUint::from(n))
    }

    pub fn one() -> Self {
        BoundExpr::lit(1)
    }

    pub fn pow(base: BoundExpr, exp: BoundExpr) -> Self {
        BoundExpr::Pow(Box::new(base), Box::new(exp))
    }

    pub fn max(a: BoundExpr, b: BoundExpr) -> Self {
        BoundExpr::Max(Box::new(a), Box::new(b))
    }

    pub fn iter(body: BoundExpr, count: BoundExpr, var: impl Into<SizeVar>) -> Self {
        BoundExpr::Iter {
            body: Box::new(body),
            count: Box::new(count),
            var: var.into(),
        }
    }

    pub fn subst(target: BoundExpr, var: impl Into<SizeVar>, replacement: BoundExpr) -> Self {
        BoundExpr::Subst {
            target: Box::new(target),
            var: var.into(),
            replacement: Box::new(replacement),
        }
    }

    pub fn as_lit(&self) -> Option<&BigUint> {
        match self {
            BoundExpr::Lit(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.eval_vars().is_empty()
    }

    /// Free size variables. `Iter` and `Subst` bind their variable in
    /// the body/target.
    pub fn free_size_vars(&self) -> BTreeSet<SizeVar> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<SizeVar>) {
        match self {
            BoundExpr::Var(v) => {
                out.insert(v.clone());
            }
            BoundExpr::Lit(_) => {}
            BoundExpr::Add(a, b)
            | BoundExpr::Sub(a, b)
            | BoundExpr::Mul(a, b)
            | BoundExpr::Pow(a, b)
            | BoundExpr::Max(a, b) => {
                a.collect_free(out);
                b.collect_free(out);
            }
            BoundExpr::Iter { body, count, var } => {
                let mut inner = body.free_size_vars();
                inner.remove(var);
                out.extend(inner);
                count.collect_free(out);
            }
            BoundExpr::Subst {
                target,
                var,
                replacement,
            } => {
                let mut inner = target.free_size_vars();
                inner.remove(var);
                out.extend(inner);
                replacement.collect_free(out);
            }
        }
    }

    /// Variables a valuation must assign for evaluation to succeed. Unlike
    /// [`free_size_vars`](Self::free_size_vars) this includes the starting
    /// variable of an `Iter` that is not itself under a `Subst` for it.
    pub fn eval_vars(&self) -> BTreeSet<SizeVar> {
        let mut out = BTreeSet::new();
        self.collect_eval_vars(&mut out);
        out
    }

    fn collect_eval_vars(&self, out: &mut BTreeSet<SizeVar>) {
        match self {
            BoundExpr::Var(v) => {
                out.insert(v.clone());
            }
            BoundExpr::Lit(_) => {}
            BoundExpr::Add(a, b)
            | BoundExpr::Sub(a, b)
            | BoundExpr::Mul(a, b)
            | BoundExpr::Pow(a, b)
            | BoundExpr::Max(a, b) => {
                a.collect_eval_vars(out);
                b.collect_eval_vars(out);
            }
            BoundExpr::Iter { body, count, var } => {
                let mut inner = body.eval_vars();
                inner.remove(var);
                out.extend(inner);
                out.insert(var.clone());
                count.collect_eval_vars(out);
            }
            BoundExpr::Subst {
                target,
                var,
                replacement,
            } => {
                let mut inner = target.eval_vars();
                inner.remove(var);
                out.extend(inner);
                replacement.collect_eval_vars(out);
            }
        }
    }

    /// True if `var` is read by an `Iter` as its starting value somewhere
    /// not shadowed by an inner `Subst` for the same variable.
    fn reads_iter_start(&self, var: &SizeVar) -> bool {
        match self {
            BoundExpr::Var(_) | BoundExpr::Lit(_) => false,
            BoundExpr::Add(a, b)
            | BoundExpr::Sub(a, b)
            | BoundExpr::Mul(a, b)
            | BoundExpr::Pow(a, b)
            | BoundExpr::Max(a, b) => a.reads_iter_start(var) || b.reads_iter_start(var),
            BoundExpr::Iter {
                body,
                count,
                var: v,
            } => v == var || count.reads_iter_start(var) || body.reads_iter_start(var),
            BoundExpr::Subst {
                target,
                var: v,
                replacement,
            } => replacement.reads_iter_start(var) || (v != var && target.reads_iter_start(var)),
        }
    }

    /// Eager capture-avoiding substitution of `replacement` for the free
    /// occurrences of `var`.
    pub fn substitute(&self, var: &SizeVar, replacement: &BoundExpr) -> BoundExpr {
        let repl_free = replacement.eval_vars();
        self.substitute_inner(var, replacement, &repl_free)
    }

    fn substitute_inner(
        &self,
        var: &SizeVar,
        repl: &BoundExpr,
        repl_free: &BTreeSet<SizeVar>,
    ) -> BoundExpr {
        use BoundExpr::*;
        let go = |e: &BoundExpr| Box::new(e.substitute_inner(var, repl, repl_free));
        match self {
            Var(v) if v == var => repl.clone(),
            Var(_) | Lit(_) => self.clone(),
            Add(a, b) => Add(go(a), go(b)),
            Sub(a, b) => Sub(go(a), go(b)),
            Mul(a, b) => Mul(go(a), go(b)),
            Pow(a, b) => Pow(go(a), go(b)),
            Max(a, b) => Max(go(a), go(b)),
            Iter {
                body,
                count,
                var: v,
            } => {
                let count = go(count);
                if v == var || !body.free_size_vars().contains(var) {
                    return Iter {
                        body: body.clone(),
                        count,
                        var: v.clone(),
                    };
                }
                if repl_free.contains(v) {
                    // Rename the bound variable; the start value still comes
                    // from the old name through an explicit Subst.
                    let mut avoid = repl_free.clone();
                    avoid.extend(body.eval_vars());
                    avoid.insert(var.clone());
                    let fresh = fresh_size_var(v, &avoid);
                    let renamed = body.substitute(v, &Var(fresh.clone()));
                    let body = Box::new(renamed.substitute_inner(var, repl, repl_free));
                    return Subst {
                        target: Box::new(Iter {
                            body,
                            count,
                            var: fresh.clone(),
                        }),
                        var: fresh,
                        replacement: Box::new(Var(v.clone())),
                    };
                }
                Iter {
                    body: go(body),
                    count,
                    var: v.clone(),
                }
            }
            Subst {
                target,
                var: v,
                replacement,
            } => {
                let replacement = go(replacement);
                if v == var || !target.eval_vars().contains(var) {
                    return Subst {
                        target: target.clone(),
                        var: v.clone(),
                        replacement,
                    };
                }
                if repl_free.contains(v) {
                    let mut avoid = repl_free.clone();
                    avoid.extend(target.eval_vars());
                    avoid.insert(var.clone());
                    let fresh = fresh_size_var(v, &avoid);
                    let renamed = target.rename_dynamic(v, &fresh);
                    return Subst {
                        target: Box::new(renamed.substitute_inner(var, repl, repl_free)),
                        var: fresh,
                        replacement,
                    };
                }
                Subst {
                    target: go(target),
                    var: v.clone(),
                    replacement,
                }
            }
        }
    }

    /// Renames every occurrence of `from` that is governed by an enclosing
    /// binding, including `Iter` start reads.
    fn rename_dynamic(&self, from: &SizeVar, to: &SizeVar) -> BoundExpr {
        use BoundExpr::*;
        let go = |e: &BoundExpr| Box::new(e.rename_dynamic(from, to));
        match self {
            Var(v) if v == from => Var(to.clone()),
            Var(_) | Lit(_) => self.clone(),
            Add(a, b) => Add(go(a), go(b)),
            Sub(a, b) => Sub(go(a), go(b)),
            Mul(a, b) => Mul(go(a), go(b)),
            Pow(a, b) => Pow(go(a), go(b)),
            Max(a, b) => Max(go(a), go(b)),
            Iter { body, count, var } => {
                if var == from {
                    // The start value is read from `from`; the body's own
                    // binding is untouched.
                    Subst {
                        target: Box::new(self.clone()),
                        var: from.clone(),
                        replacement: Box::new(Var(to.clone())),
                    }
                } else {
                    Iter {
                        body: go(body),
                        count: go(count),
                        var: var.clone(),
                    }
                }
            }
            Subst {
                target,
                var,
                replacement,
            } => Subst {
                target: if var == from {
                    target.clone()
                } else {
                    go(target)
                },
                var: var.clone(),
                replacement: go(replacement),
            },
        }
    }

    /// Substitution that also respects `Iter` start reads: when `var` is
    /// read dynamically the result is a deferred `Subst` node, otherwise
    /// it is the eager [`substitute`](Self::substitute).
    pub fn instantiate(&self, var: &SizeVar, replacement: &BoundExpr) -> BoundExpr {
        if self.reads_iter_start(var) {
            BoundExpr::subst(self.clone(), var.clone(), replacement.clone())
        } else {
            self.substitute(var, replacement)
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            BoundExpr::Var(_) | BoundExpr::Lit(_) => 1,
            BoundExpr::Add(a, b)
            | BoundExpr::Sub(a, b)
            | BoundExpr::Mul(a, b)
            | BoundExpr::Pow(a, b)
            | BoundExpr::Max(a, b) => 1 + a.size() + b.size(),
            BoundExpr::Iter { body, count, .. } => 1 + body.size() + count.size(),
            BoundExpr::Subst {
                target,
                replacement,
                ..
            } => 1 + target.size() + replacement.size(),
        }
    }
}

/// First name of the form `base`, `base1`, `base2`, ... not in `avoid`.
pub fn fresh_size_var(base: &SizeVar, avoid: &BTreeSet<SizeVar>) -> SizeVar {
    let stem = base.name().trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "v" } else { stem };
    let candidate = SizeVar::new(stem);
    if !avoid.contains(&candidate) {
        return candidate;
    }
    (1..)
        .map(|i| SizeVar::new(format!("{stem}{i}")))
        .find(|v| !avoid.contains(v))
        .expect("infinite supply of names")
}

impl std::ops::Add for BoundExpr {
    type Output = BoundExpr;
    fn add(self, rhs: BoundExpr) -> BoundExpr {
        BoundExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Sub for BoundExpr {
    type Output = BoundExpr;
    fn sub(self, rhs: BoundExpr) -> BoundExpr {
        BoundExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl std::ops::Mul for BoundExpr {
    type Output = BoundExpr;
    fn mul(self, rhs: BoundExpr) -> BoundExpr {
        BoundExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl From<u64> for BoundExpr {
    fn from(n: u64) -> Self {
        BoundExpr::lit(n)
    }
}

// Precedence levels used by the printer: 1 additive, 2 multiplicative,
// 3 power, 4 postfix substitution, 5 atom.
fn prec(e: &BoundExpr) -> u8 {
    match e {
        BoundExpr::Add(..) | BoundExpr::Sub(..) => 1,
        BoundExpr::Mul(..) => 2,
        BoundExpr::Pow(..) => 3,
        BoundExpr::Subst { .. } => 4,
        _ => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &BoundExpr, min: u8) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for BoundExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundExpr::Var(v) => write!(f, "{v}"),
            BoundExpr::Lit(n) => write!(f, "{n}"),
            BoundExpr::Add(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" + ")?;
                write_at(f, b, 2)
            }
            BoundExpr::Sub(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" - ")?;
                write_at(f, b, 2)
            }
            BoundExpr::Mul(a, b) => {
                write_at(f, a, 2)?;
                f.write_str("*")?;
                write_at(f, b, 3)
            }
            BoundExpr::Pow(a, b) => {
                write_at(f, a, 4)?;
                f.write_str("^")?;
                write_at(f, b, 3)
            }
            BoundExpr::Iter { body, count, var } => write!(f, "iter({body}; {count}; {var})"),
            BoundExpr::Subst {
                target,
                var,
                replacement,
            } => {
                write_at(f, target, 4)?;
                write!(f, "[{var} := {replacement}]")
            }
            BoundExpr::Max(a, b) => write!(f, "max({a}, {b})"),
        }
    }
}
