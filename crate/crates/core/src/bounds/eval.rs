use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{BoundError, BoundExpr, SizeVar};

/// Assignment of positive values to size variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Valuation {
    assignments: BTreeMap<SizeVar, BigUint>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I, K>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, u64)>,
        K: Into<SizeVar>,
    {
        let mut val = Valuation::new();
        for (k, n) in pairs {
            val.set(k.into(), BigUint::from(n));
        }
        val
    }

    /// Panics if `value` is zero: size variables denote nonempty data.
    pub fn set(&mut self, var: SizeVar, value: BigUint) {
        assert!(value >= BigUint::one(), "size variables are positive");
        self.assignments.insert(var, value);
    }

    pub fn get(&self, var: &SizeVar) -> Option<&BigUint> {
        self.assignments.get(var)
    }

    pub fn with(&self, var: &SizeVar, value: BigUint) -> Valuation {
        let mut v = self.clone();
        v.set(var.clone(), value);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SizeVar, &BigUint)> {
        self.assignments.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.assignments.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        f.write_str("}")
    }
}

/// Ceilings that turn runaway evaluation into [`BoundError::Overflow`].
#[derive(Clone, Copy, Debug)]
pub struct EvalLimits {
    pub max_bits: u64,
    pub max_iterations: u64,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            max_bits: 1 << 16,
            max_iterations: 1 << 20,
        }
    }
}

pub fn eval_bound(e: &BoundExpr, val: &Valuation) -> Result<BigUint, BoundError> {
    eval_bound_with(e, val, EvalLimits::default())
}

pub fn eval_bound_with(
    e: &BoundExpr,
    val: &Valuation,
    limits: EvalLimits,
) -> Result<BigUint, BoundError> {
    let n = eval_rec(e, val, &limits)?;
    debug_assert!(n >= BigUint::one());
    Ok(n)
}

fn check(n: BigUint, limits: &EvalLimits) -> Result<BigUint, BoundError> {
    if n.bits() > limits.max_bits {
        Err(BoundError::Overflow)
    } else {
        Ok(n)
    }
}

fn eval_rec(e: &BoundExpr, val: &Valuation, limits: &EvalLimits) -> Result<BigUint, BoundError> {
    match e {
        BoundExpr::Var(v) => val
            .get(v)
            .cloned()
            .ok_or_else(|| BoundError::UnboundSizeVar(v.clone())),
        BoundExpr::Lit(n) => {
            if n.bits() == 0 {
                Err(BoundError::NonPositive)
            } else {
                Ok(n.clone())
            }
        }
        BoundExpr::Add(a, b) => check(
            eval_rec(a, val, limits)? + eval_rec(b, val, limits)?,
            limits,
        ),
        BoundExpr::Sub(a, b) => {
            let a = eval_rec(a, val, limits)?;
            let b = eval_rec(b, val, limits)?;
            if a <= b {
                Err(BoundError::NonPositive)
            } else {
                Ok(a - b)
            }
        }
        BoundExpr::Mul(a, b) => check(
            eval_rec(a, val, limits)? * eval_rec(b, val, limits)?,
            limits,
        ),
        BoundExpr::Pow(a, b) => {
            let base = eval_rec(a, val, limits)?;
            let exp = eval_rec(b, val, limits)?;
            if base.is_one() {
                return Ok(base);
            }
            let exp = exp.to_u64().ok_or(BoundError::Overflow)?;
            if (base.bits() - 1).saturating_mul(exp) > limits.max_bits {
                return Err(BoundError::Overflow);
            }
            let exp = u32::try_from(exp).map_err(|_| BoundError::Overflow)?;
            check(base.pow(exp), limits)
        }
        BoundExpr::Iter { body, count, var } => {
            let n = eval_rec(count, val, limits)?;
            let mut x = val
                .get(var)
                .cloned()
                .ok_or_else(|| BoundError::UnboundSizeVar(var.clone()))?;
            let n = n.to_u64().ok_or(BoundError::Overflow)?;
            let mut local = val.clone();
            for i in 0..n {
                if i >= limits.max_iterations {
                    return Err(BoundError::Overflow);
                }
                local.set(var.clone(), x.clone());
                let next = eval_rec(body, &local, limits)?;
                if next == x {
                    // fixed point reached; further applications change nothing
                    break;
                }
                x = next;
            }
            Ok(x)
        }
        BoundExpr::Subst {
            target,
            var,
            replacement,
        } => {
            let r = eval_rec(replacement, val, limits)?;
            eval_rec(target, &val.with(var, r), limits)
        }
        BoundExpr::Max(a, b) => {
            let a = eval_rec(a, val, limits)?;
            let b = eval_rec(b, val, limits)?;
            Ok(a.max(b))
        }
    }
}
