//! Multivariate polynomials over positive atoms.
//!
//! Variables and any subexpression outside the `+ * ^literal` fragment are
//! treated as opaque atoms. Every atom is at least 1, which is what makes
//! the dominance test in [`Polynomial::is_nonnegative`] sound.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::BoundExpr;

pub type Monomial = BTreeMap<BoundExpr, u32>;

const MAX_EXPANDED_EXPONENT: u64 = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

fn degree(m: &Monomial) -> u32 {
    m.values().sum()
}

/// `a` divides-dominates `b`: every exponent in `a` is at least the one in
/// `b`, so `a ≥ b` whenever all atoms are ≥ 1.
fn dominates(a: &Monomial, b: &Monomial) -> bool {
    b.iter()
        .all(|(atom, e)| a.get(atom).is_some_and(|ea| ea >= e))
}

impl Polynomial {
    pub fn constant(c: BigInt) -> Self {
        let mut p = Polynomial::default();
        p.add_term(Monomial::new(), c);
        p
    }

    pub fn atom(e: BoundExpr) -> Self {
        let mut m = Monomial::new();
        m.insert(e, 1);
        let mut p = Polynomial::default();
        p.add_term(m, BigInt::one());
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&Monomial::new())
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                for (atom, e) in mb {
                    *m.entry(atom.clone()).or_insert(0) += e;
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    fn pow(&self, exp: u64) -> Polynomial {
        let mut out = Polynomial::constant(BigInt::one());
        for _ in 0..exp {
            out = out.mul(self);
        }
        out
    }

    /// Converts the polynomial fragment of `e`; everything else becomes an
    /// atom. Subtraction is kept atomic because its value is only defined
    /// when positive.
    pub fn from_bound(e: &BoundExpr) -> Polynomial {
        match e {
            BoundExpr::Lit(n) => Polynomial::constant(BigInt::from(n.clone())),
            BoundExpr::Add(a, b) => Self::from_bound(a).add(&Self::from_bound(b)),
            BoundExpr::Mul(a, b) => Self::from_bound(a).mul(&Self::from_bound(b)),
            BoundExpr::Pow(a, b) => match b.as_lit().and_then(|n| n.to_u64()) {
                Some(k) if k <= MAX_EXPANDED_EXPONENT => Self::from_bound(a).pow(k),
                _ => Polynomial::atom(e.clone()),
            },
            _ => Polynomial::atom(e.clone()),
        }
    }

    /// Rebuilds a bound expression in canonical order: higher-degree
    /// monomials first, constant last. `None` if a coefficient is not
    /// positive.
    pub fn to_bound(&self) -> Option<BoundExpr> {
        if self.terms.is_empty() || self.terms.values().any(|c| c.sign() != Sign::Plus) {
            return None;
        }
        let mut ordered: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        ordered.sort_by(|(ma, _), (mb, _)| {
            (Reverse(degree(ma)), *ma).cmp(&(Reverse(degree(mb)), *mb))
        });
        let mut acc: Option<BoundExpr> = None;
        for (m, c) in ordered {
            let c = c.to_biguint().expect("positive");
            let term = monomial_to_bound(m, c);
            acc = Some(match acc {
                None => term,
                Some(a) => a + term,
            });
        }
        acc
    }

    /// Sufficient test for `self ≥ 0` at every point where all atoms are
    /// ≥ 1: each negative term is paid for by positive terms whose
    /// monomials dominate it.
    pub fn is_nonnegative(&self) -> bool {
        let mut positive: Vec<(Monomial, BigInt)> = Vec::new();
        let mut negative: Vec<(Monomial, BigInt)> = Vec::new();
        for (m, c) in &self.terms {
            if c.is_positive() {
                positive.push((m.clone(), c.clone()));
            } else {
                negative.push((m.clone(), -c));
            }
        }
        // Most demanding monomials first; spend the smallest dominating
        // positive terms first so larger ones stay available.
        negative.sort_by_key(|(m, _)| Reverse(degree(m)));
        positive.sort_by_key(|(m, _)| degree(m));
        for (m, mut need) in negative {
            for (pm, avail) in positive.iter_mut() {
                if need.is_zero() {
                    break;
                }
                if avail.is_zero() || !dominates(pm, &m) {
                    continue;
                }
                let take = if *avail >= need {
                    need.clone()
                } else {
                    avail.clone()
                };
                *avail -= &take;
                need -= take;
            }
            if !need.is_zero() {
                return false;
            }
        }
        true
    }

    /// Merges all non-constant monomials into one whose coefficient is the
    /// sum of theirs and whose exponents are the pointwise maximum. The
    /// result is ≥ the input wherever atoms are ≥ 1.
    pub fn loosen_to_single_term(&self) -> Polynomial {
        if self.terms.values().any(|c| !c.is_positive()) {
            return self.clone();
        }
        let mut merged = Monomial::new();
        let mut coef = BigInt::zero();
        let mut count = 0;
        for (m, c) in &self.terms {
            if m.is_empty() {
                continue;
            }
            count += 1;
            coef += c;
            for (atom, e) in m {
                let slot = merged.entry(atom.clone()).or_insert(0);
                *slot = (*slot).max(*e);
            }
        }
        if count < 2 {
            return self.clone();
        }
        let mut out = Polynomial::constant(self.constant_term());
        out.add_term(merged, coef);
        out
    }
}

fn monomial_to_bound(m: &Monomial, c: BigUint) -> BoundExpr {
    let mut acc: Option<BoundExpr> = if c.is_one() && !m.is_empty() {
        None
    } else {
        Some(BoundExpr::Lit(c))
    };
    for (atom, e) in m {
        let factor = if *e == 1 {
            atom.clone()
        } else {
            BoundExpr::pow(atom.clone(), BoundExpr::lit(u64::from(*e)))
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a * factor,
        });
    }
    acc.expect("nonempty")
}
