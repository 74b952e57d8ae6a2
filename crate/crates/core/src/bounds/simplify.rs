//! Rewriting of bound expressions.
//!
//! `Exact` mode only applies value-preserving rewrites: literal folding,
//! polynomial normalisation, closed forms for three shapes of iterated
//! composition, and elimination of `max`/deferred substitutions where that
//! is exact. `Loosen` additionally applies the loosening rules, so the
//! result is pointwise ≥ the input.

use num_bigint::BigUint;
use num_traits::One;

use super::eval::{eval_bound_with, EvalLimits};
use super::poly::Polynomial;
use super::{BoundError, BoundExpr, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimplifyMode {
    Exact,
    Loosen,
}

pub const DEFAULT_REWRITE_BUDGET: usize = 64;

/// Literals folded from closed subexpressions are kept below this size.
const FOLD_MAX_BITS: u64 = 256;

pub fn simplify(e: &BoundExpr, mode: SimplifyMode) -> Result<BoundExpr, BoundError> {
    simplify_with_budget(e, mode, DEFAULT_REWRITE_BUDGET)
}

pub fn simplify_with_budget(
    e: &BoundExpr,
    mode: SimplifyMode,
    budget: usize,
) -> Result<BoundExpr, BoundError> {
    let mut current = e.clone();
    for _ in 0..budget {
        let next = pass(&current, mode);
        if next == current {
            return Ok(next);
        }
        current = next;
    }
    Err(BoundError::RewriteBudgetExceeded(budget))
}

fn fold_closed(e: &BoundExpr) -> Option<BoundExpr> {
    if matches!(e, BoundExpr::Lit(_)) || !e.is_closed() {
        return None;
    }
    let limits = EvalLimits {
        max_bits: FOLD_MAX_BITS,
        max_iterations: 1 << 12,
    };
    eval_bound_with(e, &Valuation::new(), limits)
        .ok()
        .map(BoundExpr::Lit)
}

fn mentions(e: &BoundExpr, var: &super::SizeVar) -> bool {
    e.eval_vars().contains(var)
}

fn canonical_poly(e: &BoundExpr, mode: SimplifyMode) -> Option<BoundExpr> {
    let mut p = Polynomial::from_bound(e);
    if mode == SimplifyMode::Loosen {
        p = p.loosen_to_single_term();
    }
    p.to_bound()
}

fn pass(e: &BoundExpr, mode: SimplifyMode) -> BoundExpr {
    use BoundExpr::*;
    let go = |x: &BoundExpr| Box::new(pass(x, mode));
    let rebuilt = match e {
        Var(_) | Lit(_) => return e.clone(),
        Add(a, b) => Add(go(a), go(b)),
        Sub(a, b) => Sub(go(a), go(b)),
        Mul(a, b) => Mul(go(a), go(b)),
        Pow(a, b) => Pow(go(a), go(b)),
        Max(a, b) => Max(go(a), go(b)),
        Iter { body, count, var } => Iter {
            body: go(body),
            count: go(count),
            var: var.clone(),
        },
        Subst {
            target,
            var,
            replacement,
        } => Subst {
            target: go(target),
            var: var.clone(),
            replacement: go(replacement),
        },
    };
    if let Some(folded) = fold_closed(&rebuilt) {
        return folded;
    }
    match rebuilt {
        Add(..) | Mul(..) | Pow(..) => canonical_poly(&rebuilt, mode).unwrap_or(rebuilt),
        Sub(ref a, ref b) => {
            // (p + c) - k  =  p + (c - k)  when c > k
            if let Some(k) = b.as_lit() {
                let p = Polynomial::from_bound(a);
                let c = p.constant_term();
                let k = num_bigint::BigInt::from(k.clone());
                if c > k {
                    let q = p.sub(&Polynomial::constant(k));
                    if let Some(r) = q.to_bound() {
                        return r;
                    }
                }
            }
            rebuilt
        }
        Max(ref a, ref b) => {
            if a == b {
                return (**a).clone();
            }
            let pa = Polynomial::from_bound(a);
            let pb = Polynomial::from_bound(b);
            if pb.sub(&pa).is_nonnegative() {
                return (**b).clone();
            }
            if pa.sub(&pb).is_nonnegative() {
                return (**a).clone();
            }
            rebuilt
        }
        Iter {
            ref body,
            ref count,
            ref var,
        } => iter_closed_form(body, count, var).unwrap_or(rebuilt),
        Subst {
            ref target,
            ref var,
            ref replacement,
        } => {
            if target.reads_iter_start(var) {
                rebuilt
            } else {
                target.substitute(var, replacement)
            }
        }
        other => other,
    }
}

/// Closed forms for `iter(a*x; e; x)`, `iter(x + a; e; x)` and
/// `iter(x^a; g; x)`.
fn iter_closed_form(
    body: &BoundExpr,
    count: &BoundExpr,
    var: &super::SizeVar,
) -> Option<BoundExpr> {
    use BoundExpr::*;
    let x = Var(var.clone());
    let is_x = |e: &BoundExpr| *e == x;
    match body {
        Mul(a, b) if is_x(b) && !mentions(a, var) => {
            Some(BoundExpr::pow((**a).clone(), count.clone()) * x)
        }
        Mul(a, b) if is_x(a) && !mentions(b, var) => {
            Some(BoundExpr::pow((**b).clone(), count.clone()) * x)
        }
        Add(a, b) if is_x(a) && !mentions(b, var) => Some(x + (**b).clone() * count.clone()),
        Add(a, b) if is_x(b) && !mentions(a, var) => Some(x + (**a).clone() * count.clone()),
        Pow(a, b) if is_x(a) && !mentions(b, var) => Some(BoundExpr::pow(
            x,
            BoundExpr::pow((**b).clone(), count.clone()),
        )),
        // Iterating the identity (or a function at its fixed point) is exact.
        _ if is_x(body) => Some(x),
        Lit(n) if n >= &BigUint::one() => Some(body.clone()),
        _ => None,
    }
}
