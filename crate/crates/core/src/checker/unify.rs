use std::collections::BTreeSet;

use crate::bounds::{fresh_size_var, leq_bounds, simplify, BoundExpr, SimplifyMode, SizeVar};
use crate::syntax::Type;

use super::CheckError;

/// Solutions for unification variables.
#[derive(Default)]
pub(super) struct Metas {
    slots: Vec<Option<Type>>,
}

impl Metas {
    pub(super) fn fresh(&mut self) -> Type {
        self.slots.push(None);
        Type::Meta(self.slots.len() as u32 - 1)
    }

    /// Follows solved metas at the head of `t`.
    pub(super) fn resolve(&self, t: &Type) -> Type {
        let mut cur = t.clone();
        while let Type::Meta(m) = cur {
            match &self.slots[m as usize] {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    pub(super) fn zonk(&self, t: &Type) -> Type {
        match self.resolve(t) {
            Type::Sum(a, b) => Type::sum(self.zonk(&a), self.zonk(&b)),
            Type::Prod(a, b) => Type::prod(self.zonk(&a), self.zonk(&b)),
            Type::Arrow {
                domain,
                size_var,
                alpha,
                beta,
                codomain,
            } => Type::Arrow {
                domain: Box::new(self.zonk(&domain)),
                size_var,
                alpha,
                beta,
                codomain: Box::new(self.zonk(&codomain)),
            },
            other => other,
        }
    }

    fn occurs(&self, m: u32, t: &Type) -> bool {
        match self.resolve(t) {
            Type::Meta(n) => n == m,
            Type::Sum(a, b) | Type::Prod(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            Type::Arrow {
                domain, codomain, ..
            } => self.occurs(m, &domain) || self.occurs(m, &codomain),
            _ => false,
        }
    }

    fn mismatch(&self, expected: &Type, found: &Type) -> CheckError {
        CheckError::TypeMismatch {
            expected: self.zonk(expected),
            found: self.zonk(found),
        }
    }

    pub(super) fn unify(&mut self, expected: &Type, found: &Type) -> Result<(), CheckError> {
        let a = self.resolve(expected);
        let b = self.resolve(found);
        match (&a, &b) {
            (Type::Meta(m), Type::Meta(n)) if m == n => Ok(()),
            (Type::Meta(m), other) | (other, Type::Meta(m)) => {
                if self.occurs(*m, other) {
                    return Err(self.mismatch(&a, &b));
                }
                self.slots[*m as usize] = Some(other.clone());
                Ok(())
            }
            (Type::Sum(a1, b1), Type::Sum(a2, b2)) | (Type::Prod(a1, b1), Type::Prod(a2, b2)) => {
                self.unify(a1, a2).map_err(|_| self.mismatch(&a, &b))?;
                self.unify(b1, b2).map_err(|_| self.mismatch(&a, &b))
            }
            (Type::Arrow { .. }, Type::Arrow { .. }) => {
                let (d1, c1, p1, d2, c2, p2) = align_arrows(&a, &b);
                self.unify(&d1, &d2).map_err(|_| self.mismatch(&a, &b))?;
                if !bound_eq(&p1.0, &p2.0) || !bound_eq(&p1.1, &p2.1) {
                    return Err(self.mismatch(&a, &b));
                }
                self.unify(&c1, &c2).map_err(|_| self.mismatch(&a, &b))
            }
            _ if a == b => Ok(()),
            _ => Err(self.mismatch(&a, &b)),
        }
    }
}

type Payload = (BoundExpr, BoundExpr);

/// Renames the size binders of two arrows to a shared fresh variable and
/// returns (domain, codomain, payload) for each.
pub(super) fn align_arrows(a: &Type, b: &Type) -> (Type, Type, Payload, Type, Type, Payload) {
    let (
        Type::Arrow {
            domain: d1,
            size_var: v1,
            alpha: a1,
            beta: b1,
            codomain: c1,
        },
        Type::Arrow {
            domain: d2,
            size_var: v2,
            alpha: a2,
            beta: b2,
            codomain: c2,
        },
    ) = (a, b)
    else {
        panic!("align_arrows on non-arrow types");
    };
    let mut avoid: BTreeSet<SizeVar> = a.size_vars();
    avoid.extend(b.size_vars());
    let shared = if v1 == v2 {
        v1.clone()
    } else {
        fresh_size_var(v1, &avoid)
    };
    let to = BoundExpr::Var(shared.clone());
    let rename = |v: &SizeVar, alpha: &BoundExpr, beta: &BoundExpr, cod: &Type| {
        if *v == shared {
            (cod.clone(), (alpha.clone(), beta.clone()))
        } else {
            (
                cod.instantiate_bounds(v, &to),
                (alpha.instantiate(v, &to), beta.instantiate(v, &to)),
            )
        }
    };
    let (c1, p1) = rename(v1, a1, b1, c1);
    let (c2, p2) = rename(v2, a2, b2, c2);
    ((**d1).clone(), c1, p1, (**d2).clone(), c2, p2)
}

/// Equality after exact simplification, or provable inequality both ways.
pub(super) fn bound_eq(a: &BoundExpr, b: &BoundExpr) -> bool {
    let sa = simplify(a, SimplifyMode::Exact).unwrap_or_else(|_| a.clone());
    let sb = simplify(b, SimplifyMode::Exact).unwrap_or_else(|_| b.clone());
    if sa == sb {
        return true;
    }
    // grid 1: only a proof can answer Proven
    leq_bounds(&sa, &sb, 1).is_proven() && leq_bounds(&sb, &sa, 1).is_proven()
}
