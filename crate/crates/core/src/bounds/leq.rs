//! Semi-decision procedure for `lhs ≤ rhs` over positive valuations.

use num_bigint::BigInt;

use super::eval::eval_bound;
use super::poly::Polynomial;
use super::simplify::{simplify, SimplifyMode};
use super::{BoundExpr, SizeVar, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeqVerdict {
    Proven,
    /// A valuation at which `lhs > rhs`.
    Refuted(Valuation),
    Unknown {
        samples_checked: usize,
    },
}

impl LeqVerdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, LeqVerdict::Proven)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, LeqVerdict::Refuted(_))
    }
}

/// Cap on the number of grid points visited while looking for a witness.
const MAX_SAMPLES: usize = 200_000;

pub fn leq_bounds(lhs: &BoundExpr, rhs: &BoundExpr, grid: u64) -> LeqVerdict {
    let l = simplify(lhs, SimplifyMode::Exact).unwrap_or_else(|_| lhs.clone());
    let r = simplify(rhs, SimplifyMode::Exact).unwrap_or_else(|_| rhs.clone());

    if l.is_closed() && r.is_closed() {
        let empty = Valuation::new();
        if let (Ok(a), Ok(b)) = (eval_bound(&l, &empty), eval_bound(&r, &empty)) {
            return if a <= b {
                LeqVerdict::Proven
            } else {
                LeqVerdict::Refuted(empty)
            };
        }
    }

    if prove(&l, &r) {
        return LeqVerdict::Proven;
    }
    if let Ok(loose) = simplify(&l, SimplifyMode::Loosen) {
        if loose == r || prove(&loose, &r) {
            return LeqVerdict::Proven;
        }
    }

    sample(&l, &r, grid)
}

fn prove(l: &BoundExpr, r: &BoundExpr) -> bool {
    if l == r {
        return true;
    }
    if let BoundExpr::Max(a, b) = l {
        return prove(a, r) && prove(b, r);
    }
    if let BoundExpr::Max(a, b) = r {
        if prove(l, a) || prove(l, b) {
            return true;
        }
    }
    if let (
        BoundExpr::Iter {
            body: bl,
            count: cl,
            var: vl,
        },
        BoundExpr::Iter {
            body: br,
            count: cr,
            var: vr,
        },
    ) = (l, r)
    {
        if vl == vr && prove(bl, br) && prove(cl, cr) {
            return true;
        }
    }
    let diff = Polynomial::from_bound(r).sub(&Polynomial::from_bound(l));
    diff.is_nonnegative()
}

/// Exhaustive search of `{1..grid}^k`. The reported witness is the point
/// of largest violation, earliest in lexicographic order on ties.
fn sample(l: &BoundExpr, r: &BoundExpr, grid: u64) -> LeqVerdict {
    let mut vars: Vec<SizeVar> = l.eval_vars().into_iter().collect();
    for v in r.eval_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    vars.sort();
    let grid = grid.max(1);
    let mut point = vec![1u64; vars.len()];
    let mut checked = 0usize;
    let mut best: Option<(BigInt, Valuation)> = None;
    loop {
        let val = Valuation::from_pairs(vars.iter().cloned().zip(point.iter().copied()));
        if let (Ok(a), Ok(b)) = (eval_bound(l, &val), eval_bound(r, &val)) {
            if a > b {
                let gap = BigInt::from(a) - BigInt::from(b);
                if best.as_ref().is_none_or(|(g, _)| gap > *g) {
                    best = Some((gap, val));
                }
            }
        }
        checked += 1;
        if checked >= MAX_SAMPLES || !advance(&mut point, grid) {
            break;
        }
    }
    match best {
        Some((_, witness)) => LeqVerdict::Refuted(witness),
        None => LeqVerdict::Unknown {
            samples_checked: checked,
        },
    }
}

fn advance(point: &mut [u64], grid: u64) -> bool {
    for slot in point.iter_mut().rev() {
        if *slot < grid {
            *slot += 1;
            return true;
        }
        *slot = 1;
    }
    false
}

/// Re-evaluates a refutation witness; used by tests and the checker to
/// double-check a reported violation.
pub fn witness_violates(lhs: &BoundExpr, rhs: &BoundExpr, witness: &Valuation) -> bool {
    matches!(
        (eval_bound(lhs, witness), eval_bound(rhs, witness)),
        (Ok(a), Ok(b)) if a > b
    )
}
