//! Quotation of naturals, bounds, types and terms as CUFL terms.
//!
//! Every quotation is built from `unit`, injections and pairs only, so it
//! is a closed normal form of a sum-of-products type. Constructors are
//! told apart by a fixed path of injections:
//!
//! | bound        | path  | payload                  |
//! |--------------|-------|--------------------------|
//! | variable     | `lll` | index                    |
//! | literal      | `llr` | numeral                  |
//! | subtraction  | `lrl` | `inl (a, b)`             |
//! | max          | `lrl` | `inr (a, b)`             |
//! | addition     | `lrr` | `(a, b)`                 |
//! | product      | `rll` | `(a, b)`                 |
//! | power        | `rlr` | `(a, b)`                 |
//! | iteration    | `rrl` | `(body, (count, index))` |
//! | substitution | `rrr` | `(target, (repl, index))`|
//!
//! Types use `ll` sum, `lr` product, `rl` for arrows, bottom and type
//! variables, and `rr` unit. Terms use four-step paths; see [`quote_term`].
//! Binders are referred to by de Bruijn indices starting at 1.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::bounds::{BoundExpr, SizeVar};
use crate::syntax::{Term, Type};

/// Literals above this are not quoted; their numerals would be enormous.
pub const MAX_QUOTED_LITERAL: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("not a numeral: {0}")]
    MalformedNumeral(Term),
    #[error("unbound size variable `{0}`")]
    UnboundSizeVar(SizeVar),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("literal {0} is too large to quote")]
    LiteralTooLarge(BigUint),
}

pub fn encode_nat(n: u64) -> Term {
    let mut t = Term::inl(Term::Unit);
    for _ in 0..n {
        t = Term::inr(t);
    }
    t
}

pub fn decode_nat(t: &Term) -> Result<u64, EncodeError> {
    let mut n = 0u64;
    let mut cur = t;
    loop {
        match cur {
            Term::Inr(inner) => {
                n += 1;
                cur = inner;
            }
            Term::Inl(inner) if **inner == Term::Unit => return Ok(n),
            _ => return Err(EncodeError::MalformedNumeral(t.clone())),
        }
    }
}

/// `Unit + (Unit + (... + Unit))` with `beta` sums; holds the numerals
/// below `beta`.
pub fn unfold_nat_type(beta: u64) -> Type {
    assert!(beta >= 1, "unfold_nat_type needs beta >= 1");
    let mut t = Type::Unit;
    for _ in 0..beta {
        t = Type::sum(Type::Unit, t);
    }
    t
}

/// Binders in scope, outermost first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeBruijnMap {
    binders: Vec<String>,
}

impl DeBruijnMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        DeBruijnMap {
            binders: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>) {
        self.binders.push(name.into());
    }

    pub fn pop(&mut self) {
        self.binders.pop();
    }

    /// Innermost binding is 1.
    pub fn index(&self, name: &str) -> Option<u64> {
        self.binders
            .iter()
            .rev()
            .position(|b| b == name)
            .map(|i| i as u64 + 1)
    }
}

fn path(steps: &str, payload: Term) -> Term {
    steps.chars().rev().fold(payload, |t, c| match c {
        'l' => Term::inl(t),
        _ => Term::inr(t),
    })
}

fn pair(a: Term, b: Term) -> Term {
    Term::pair(a, b)
}

fn size_index(env: &DeBruijnMap, v: &SizeVar) -> Result<Term, EncodeError> {
    env.index(v.name())
        .map(encode_nat)
        .ok_or_else(|| EncodeError::UnboundSizeVar(v.clone()))
}

pub fn quote_bound(e: &BoundExpr, env: &DeBruijnMap) -> Result<Term, EncodeError> {
    let mut env = env.clone();
    quote_bound_in(e, &mut env)
}

fn quote_bound_in(e: &BoundExpr, env: &mut DeBruijnMap) -> Result<Term, EncodeError> {
    let two = |tag: &str, a: &BoundExpr, b: &BoundExpr, env: &mut DeBruijnMap| {
        let qa = quote_bound_in(a, env)?;
        let qb = quote_bound_in(b, env)?;
        Ok::<Term, EncodeError>(path(tag, pair(qa, qb)))
    };
    match e {
        BoundExpr::Var(v) => Ok(path("lll", size_index(env, v)?)),
        BoundExpr::Lit(n) => match n.to_u64() {
            Some(k) if k <= MAX_QUOTED_LITERAL => Ok(path("llr", encode_nat(k))),
            _ => Err(EncodeError::LiteralTooLarge(n.clone())),
        },
        BoundExpr::Sub(a, b) => two("lrll", a, b, env),
        BoundExpr::Max(a, b) => two("lrlr", a, b, env),
        BoundExpr::Add(a, b) => two("lrr", a, b, env),
        BoundExpr::Mul(a, b) => two("rll", a, b, env),
        BoundExpr::Pow(a, b) => two("rlr", a, b, env),
        BoundExpr::Iter { body, count, var } => {
            let qc = quote_bound_in(count, env)?;
            env.push(var.name());
            let qb = quote_bound_in(body, env);
            let idx = size_index(env, var);
            env.pop();
            Ok(path("rrl", pair(qb?, pair(qc, idx?))))
        }
        BoundExpr::Subst {
            target,
            var,
            replacement,
        } => {
            let qr = quote_bound_in(replacement, env)?;
            env.push(var.name());
            let qt = quote_bound_in(target, env);
            let idx = size_index(env, var);
            env.pop();
            Ok(path("rrr", pair(qt?, pair(qr, idx?))))
        }
    }
}

/// Encodes a name as a list of byte numerals: `inl unit` is the empty
/// list, `inr (byte, rest)` a cons cell.
fn quote_name(name: &str) -> Term {
    name.bytes().rev().fold(Term::inl(Term::Unit), |rest, b| {
        Term::inr(pair(encode_nat(u64::from(b)), rest))
    })
}

/// `env` holds the size variables in scope.
pub fn quote_type(t: &Type, env: &DeBruijnMap) -> Result<Term, EncodeError> {
    let mut env = env.clone();
    quote_type_in(t, &mut env)
}

fn quote_type_in(t: &Type, env: &mut DeBruijnMap) -> Result<Term, EncodeError> {
    match t {
        Type::Sum(a, b) => Ok(path(
            "ll",
            pair(quote_type_in(a, env)?, quote_type_in(b, env)?),
        )),
        Type::Prod(a, b) => Ok(path(
            "lr",
            pair(quote_type_in(a, env)?, quote_type_in(b, env)?),
        )),
        Type::Arrow {
            domain,
            size_var,
            alpha,
            beta,
            codomain,
        } => {
            let qd = quote_type_in(domain, env)?;
            env.push(size_var.name());
            let rest = (|| {
                let qc = quote_type_in(codomain, env)?;
                let qa = quote_bound_in(alpha, env)?;
                let qb = quote_bound_in(beta, env)?;
                Ok::<_, EncodeError>(pair(qc, pair(qa, qb)))
            })();
            env.pop();
            Ok(path("rll", pair(qd, rest?)))
        }
        Type::Bottom => Ok(path("rlrl", Term::Unit)),
        Type::TVar(name) => Ok(path("rlrr", quote_name(name))),
        Type::Meta(n) => Ok(path("rlrr", quote_name(&format!("?{n}")))),
        Type::Unit => Ok(path("rr", Term::Unit)),
    }
}

/// Term quotation paths: variable `llll` with `(index, size index)`,
/// unit `llrl`, inl `llrr`, inr `lrll`, prl `lrlr`, prr `lrrl`, pair
/// `lrrr`, application `rlll`, abstraction `rllr` with
/// `((index, size index), body)`, rec `rlrl` with `((f, k), a)` and case
/// `rlrr` with `(scrutinee, (left, right))`. A variable bound by a case
/// branch has size index 0.
pub fn quote_term(t: &Term, env: &DeBruijnMap) -> Result<Term, EncodeError> {
    let mut scope = Scope {
        vars: env.clone(),
        sizes: Vec::new(),
    };
    quote_term_in(t, &mut scope)
}

struct Scope {
    vars: DeBruijnMap,
    /// Size variable of each entry of `vars`, parallel to it for the
    /// binders pushed during quotation.
    sizes: Vec<Option<SizeVar>>,
}

impl Scope {
    fn push(&mut self, x: &str, v: Option<&SizeVar>) {
        self.vars.push(x);
        self.sizes.push(v.cloned());
    }

    fn pop(&mut self) {
        self.vars.pop();
        self.sizes.pop();
    }

    /// De Bruijn index of the size variable attached to the binder of `x`,
    /// counting only lambda binders; 0 when there is none.
    fn size_index_of(&self, x: &str) -> u64 {
        let Some(pos) = self.vars.index(x) else {
            return 0;
        };
        let n = self.sizes.len();
        if pos as usize > n {
            return 0;
        }
        let slot = n - pos as usize;
        if self.sizes[slot].is_none() {
            return 0;
        }
        self.sizes[slot..].iter().filter(|s| s.is_some()).count() as u64
    }
}

fn quote_term_in(t: &Term, s: &mut Scope) -> Result<Term, EncodeError> {
    let under = |x: &str, v: Option<&SizeVar>, body: &Term, s: &mut Scope| {
        s.push(x, v);
        let q = quote_term_in(body, s);
        s.pop();
        q
    };
    match t {
        Term::Var(x) => {
            let idx = s
                .vars
                .index(x)
                .ok_or_else(|| EncodeError::UnboundVariable(x.clone()))?;
            let size = s.size_index_of(x);
            Ok(path("llll", pair(encode_nat(idx), encode_nat(size))))
        }
        Term::Unit => Ok(path("llrl", Term::Unit)),
        Term::Inl(e) => Ok(path("llrr", quote_term_in(e, s)?)),
        Term::Inr(e) => Ok(path("lrll", quote_term_in(e, s)?)),
        Term::Prl(e) => Ok(path("lrlr", quote_term_in(e, s)?)),
        Term::Prr(e) => Ok(path("lrrl", quote_term_in(e, s)?)),
        Term::Pair(a, b) => Ok(path(
            "lrrr",
            pair(quote_term_in(a, s)?, quote_term_in(b, s)?),
        )),
        Term::App(a, b) => Ok(path(
            "rlll",
            pair(quote_term_in(a, s)?, quote_term_in(b, s)?),
        )),
        Term::Lam {
            binder,
            size_var,
            body,
        } => {
            let q = under(binder, Some(size_var), body, s)?;
            // the binder just pushed is innermost for both indices
            Ok(path("rllr", pair(pair(encode_nat(1), encode_nat(1)), q)))
        }
        Term::Rec { f, k, a } => {
            let qf = quote_term_in(f, s)?;
            let qk = quote_term_in(k, s)?;
            let qa = quote_term_in(a, s)?;
            Ok(path("rlrl", pair(pair(qf, qk), qa)))
        }
        Term::Case {
            scrutinee,
            left_binder,
            left,
            right_binder,
            right,
        } => {
            let qs = quote_term_in(scrutinee, s)?;
            let ql = under(left_binder, None, left, s)?;
            let qr = under(right_binder, None, right, s)?;
            Ok(path("rlrr", pair(qs, pair(ql, qr))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::infer;
    use crate::syntax::{parse_term, parse_type, Context};

    #[test]
    fn numerals() {
        assert_eq!(encode_nat(0), Term::inl(Term::Unit));
        assert_eq!(encode_nat(2), Term::inr(Term::inr(Term::inl(Term::Unit))));
        assert_eq!(decode_nat(&Term::inr(Term::inl(Term::Unit))).unwrap(), 1);
        assert!(decode_nat(&Term::Unit).is_err());
        for n in 0..20 {
            assert_eq!(encode_nat(n).depth(), n + 2);
            assert_eq!(decode_nat(&encode_nat(n)).unwrap(), n);
        }
    }

    #[test]
    fn unfolded_nat_types() {
        assert_eq!(unfold_nat_type(1), Type::sum(Type::Unit, Type::Unit));
        assert_eq!(
            unfold_nat_type(2),
            Type::sum(Type::Unit, Type::sum(Type::Unit, Type::Unit))
        );
    }

    #[test]
    fn bound_rows() {
        let env = DeBruijnMap::from_names(["v"]);
        let v = BoundExpr::var("v");
        assert_eq!(
            quote_bound(&v, &env).unwrap(),
            Term::inl(Term::inl(Term::inl(encode_nat(1))))
        );
        assert_eq!(
            quote_bound(&BoundExpr::lit(2), &env).unwrap(),
            Term::inl(Term::inl(Term::inr(encode_nat(2))))
        );
        let sum = v.clone() + BoundExpr::lit(1);
        assert_eq!(
            quote_bound(&sum, &env).unwrap(),
            Term::inl(Term::inr(Term::inr(Term::pair(
                quote_bound(&v, &env).unwrap(),
                quote_bound(&BoundExpr::lit(1), &env).unwrap()
            ))))
        );
        assert_eq!(
            quote_bound(&BoundExpr::var("w"), &env),
            Err(EncodeError::UnboundSizeVar(SizeVar::new("w")))
        );
    }

    #[test]
    fn type_rows() {
        let env = DeBruijnMap::new();
        assert_eq!(
            quote_type(&Type::Unit, &env).unwrap(),
            Term::inr(Term::inr(Term::Unit))
        );
        let u = quote_type(&Type::Unit, &env).unwrap();
        assert_eq!(
            quote_type(&Type::sum(Type::Unit, Type::Unit), &env).unwrap(),
            Term::inl(Term::inl(Term::pair(u.clone(), u)))
        );
        let arrow = parse_type("Unit ->[v; v; v + 1] Unit").unwrap();
        assert!(quote_type(&arrow, &env).is_ok());
    }

    #[test]
    fn term_rows() {
        let env = DeBruijnMap::new();
        assert_eq!(
            quote_term(&Term::Unit, &env).unwrap(),
            Term::inl(Term::inl(Term::inr(Term::inl(Term::Unit))))
        );
        let id = quote_term(&parse_term("\\x^v. x").unwrap(), &env).unwrap();
        let var = Term::inl(Term::inl(Term::inl(Term::inl(Term::pair(
            encode_nat(1),
            encode_nat(1),
        )))));
        assert_eq!(
            id,
            Term::inr(Term::inl(Term::inl(Term::inr(Term::pair(
                Term::pair(encode_nat(1), encode_nat(1)),
                var
            )))))
        );
        assert_eq!(
            quote_term(&Term::var("y"), &env),
            Err(EncodeError::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn size_indices_skip_case_binders() {
        let t = parse_term("\\x^v. case x of inl a => x | inr b => b").unwrap();
        let q = quote_term(&t, &DeBruijnMap::new()).unwrap();
        // in the left branch x is the second binder out, its size var the first
        let inner = Term::inl(Term::inl(Term::inl(Term::inl(Term::pair(
            encode_nat(2),
            encode_nat(1),
        )))));
        assert!(contains(&q, &inner));
        let b = Term::inl(Term::inl(Term::inl(Term::inl(Term::pair(
            encode_nat(1),
            encode_nat(0),
        )))));
        assert!(contains(&q, &b));
    }

    fn contains(hay: &Term, needle: &Term) -> bool {
        if hay == needle {
            return true;
        }
        match hay {
            Term::Inl(e) | Term::Inr(e) => contains(e, needle),
            Term::Pair(a, b) => contains(a, needle) || contains(b, needle),
            _ => false,
        }
    }

    #[test]
    fn alpha_equivalent_terms_quote_identically() {
        let a = parse_term("\\x^v. \\y^w. (x, y)").unwrap();
        let b = parse_term("\\p^s. \\q^t. (p, q)").unwrap();
        let env = DeBruijnMap::new();
        assert_eq!(quote_term(&a, &env).unwrap(), quote_term(&b, &env).unwrap());
        let c = parse_term("\\p^s. \\q^t. (q, p)").unwrap();
        assert_ne!(quote_term(&a, &env).unwrap(), quote_term(&c, &env).unwrap());
    }

    #[test]
    fn quotations_are_checkable() {
        let t = parse_term("rec (\\x^v. x) (inl unit) (prl (unit, unit))").unwrap();
        let q = quote_term(&t, &DeBruijnMap::new()).unwrap();
        let r = infer(&Context::new(), &q).unwrap();
        assert!(r.ty().is_first_order() || q.is_value());
    }
}
