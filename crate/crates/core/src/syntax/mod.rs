//! Terms, types, contexts and judgements, with their concrete syntax.

mod ops;
mod parse;
mod print;

use std::fmt;

use crate::bounds::{BoundExpr, SizeVar};

pub use ops::{alpha_eq, fresh_name};
pub use parse::{
    parse_bound, parse_file, parse_term, parse_type, Directive, Item, ParseError, SourceFile,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    /// Opaque atom; only equal to itself.
    TVar(String),
    Sum(Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
    /// `A ->[v; α; β] B`. `size_var` names the depth of the argument and
    /// scopes over `alpha` and `beta` (and the bounds inside `codomain`).
    Arrow {
        domain: Box<Type>,
        size_var: SizeVar,
        alpha: BoundExpr,
        beta: BoundExpr,
        codomain: Box<Type>,
    },
    Bottom,
    Unit,
    /// Unification variable used during inference. Never produced by the
    /// parser.
    Meta(u32),
}

impl Type {
    pub fn sum(a: Type, b: Type) -> Type {
        Type::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn arrow(
        domain: Type,
        size_var: impl Into<SizeVar>,
        alpha: BoundExpr,
        beta: BoundExpr,
        codomain: Type,
    ) -> Type {
        Type::Arrow {
            domain: Box::new(domain),
            size_var: size_var.into(),
            alpha,
            beta,
            codomain: Box::new(codomain),
        }
    }

    /// Built only from `Unit`, sums and products.
    pub fn is_first_order(&self) -> bool {
        match self {
            Type::Unit => true,
            Type::Sum(a, b) | Type::Prod(a, b) => a.is_first_order() && b.is_first_order(),
            _ => false,
        }
    }

    /// Applies a size-variable substitution to every bound inside the
    /// type, respecting arrow binders.
    pub fn instantiate_bounds(&self, var: &SizeVar, repl: &BoundExpr) -> Type {
        match self {
            Type::Sum(a, b) => Type::sum(
                a.instantiate_bounds(var, repl),
                b.instantiate_bounds(var, repl),
            ),
            Type::Prod(a, b) => Type::prod(
                a.instantiate_bounds(var, repl),
                b.instantiate_bounds(var, repl),
            ),
            Type::Arrow {
                domain,
                size_var,
                alpha,
                beta,
                codomain,
            } => {
                let domain = domain.instantiate_bounds(var, repl);
                if size_var == var {
                    return Type::Arrow {
                        domain: Box::new(domain),
                        size_var: size_var.clone(),
                        alpha: alpha.clone(),
                        beta: beta.clone(),
                        codomain: codomain.clone(),
                    };
                }
                let (size_var, alpha, beta, codomain) = if repl.eval_vars().contains(size_var) {
                    let mut avoid = repl.eval_vars();
                    avoid.extend(alpha.eval_vars());
                    avoid.extend(beta.eval_vars());
                    avoid.extend(codomain.size_vars());
                    avoid.insert(var.clone());
                    let fresh = crate::bounds::fresh_size_var(size_var, &avoid);
                    let to = BoundExpr::Var(fresh.clone());
                    (
                        fresh,
                        alpha.instantiate(size_var, &to),
                        beta.instantiate(size_var, &to),
                        codomain.instantiate_bounds(size_var, &to),
                    )
                } else {
                    (
                        size_var.clone(),
                        alpha.clone(),
                        beta.clone(),
                        (**codomain).clone(),
                    )
                };
                Type::Arrow {
                    domain: Box::new(domain),
                    size_var,
                    alpha: alpha.instantiate(var, repl),
                    beta: beta.instantiate(var, repl),
                    codomain: Box::new(codomain.instantiate_bounds(var, repl)),
                }
            }
            Type::TVar(_) | Type::Bottom | Type::Unit | Type::Meta(_) => self.clone(),
        }
    }

    /// Every size variable mentioned anywhere in the type's bounds.
    pub fn size_vars(&self) -> std::collections::BTreeSet<SizeVar> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_size_vars(&mut out);
        out
    }

    fn collect_size_vars(&self, out: &mut std::collections::BTreeSet<SizeVar>) {
        match self {
            Type::Sum(a, b) | Type::Prod(a, b) => {
                a.collect_size_vars(out);
                b.collect_size_vars(out);
            }
            Type::Arrow {
                domain,
                size_var,
                alpha,
                beta,
                codomain,
            } => {
                domain.collect_size_vars(out);
                out.insert(size_var.clone());
                out.extend(alpha.eval_vars());
                out.extend(beta.eval_vars());
                codomain.collect_size_vars(out);
            }
            _ => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Lam {
        binder: String,
        size_var: SizeVar,
        body: Box<Term>,
    },
    Inl(Box<Term>),
    Inr(Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Unit,
    Case {
        scrutinee: Box<Term>,
        left_binder: String,
        left: Box<Term>,
        right_binder: String,
        right: Box<Term>,
    },
    Prl(Box<Term>),
    Prr(Box<Term>),
    App(Box<Term>, Box<Term>),
    /// Bounded iteration: `f` applied to `a` as many times as the depth of
    /// the normal form of `k` dictates.
    Rec {
        f: Box<Term>,
        k: Box<Term>,
        a: Box<Term>,
    },
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn lam(binder: impl Into<String>, size_var: impl Into<SizeVar>, body: Term) -> Term {
        Term::Lam {
            binder: binder.into(),
            size_var: size_var.into(),
            body: Box::new(body),
        }
    }

    pub fn inl(t: Term) -> Term {
        Term::Inl(Box::new(t))
    }

    pub fn inr(t: Term) -> Term {
        Term::Inr(Box::new(t))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn prl(t: Term) -> Term {
        Term::Prl(Box::new(t))
    }

    pub fn prr(t: Term) -> Term {
        Term::Prr(Box::new(t))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn case(
        scrutinee: Term,
        left_binder: impl Into<String>,
        left: Term,
        right_binder: impl Into<String>,
        right: Term,
    ) -> Term {
        Term::Case {
            scrutinee: Box::new(scrutinee),
            left_binder: left_binder.into(),
            left: Box::new(left),
            right_binder: right_binder.into(),
            right: Box::new(right),
        }
    }

    pub fn rec(f: Term, k: Term, a: Term) -> Term {
        Term::Rec {
            f: Box::new(f),
            k: Box::new(k),
            a: Box::new(a),
        }
    }

    /// Values of the weak call-by-value strategy.
    pub fn is_value(&self) -> bool {
        match self {
            Term::Unit | Term::Lam { .. } => true,
            Term::Inl(t) | Term::Inr(t) => t.is_value(),
            Term::Pair(a, b) => a.is_value() && b.is_value(),
            _ => false,
        }
    }

    /// Node count.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unit => 1,
            Term::Lam { body, .. } => 1 + body.size(),
            Term::Inl(t) | Term::Inr(t) | Term::Prl(t) | Term::Prr(t) => 1 + t.size(),
            Term::Pair(a, b) | Term::App(a, b) => 1 + a.size() + b.size(),
            Term::Case {
                scrutinee,
                left,
                right,
                ..
            } => 1 + scrutinee.size() + left.size() + right.size(),
            Term::Rec { f, k, a } => 1 + f.size() + k.size() + a.size(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextEntry {
    pub name: String,
    pub ty: Type,
    /// Declared depth bound of the variable.
    pub beta: BoundExpr,
}

/// Ordered typing context; later entries shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<ContextEntry>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn extended(&self, name: impl Into<String>, ty: Type, beta: BoundExpr) -> Context {
        let mut c = self.clone();
        c.push(name, ty, beta);
        c
    }

    pub fn push(&mut self, name: impl Into<String>, ty: Type, beta: BoundExpr) {
        let name = name.into();
        self.entries.retain(|e| e.name != name);
        self.entries.push(ContextEntry { name, ty, beta });
    }

    pub fn lookup(&self, name: &str) -> Option<&ContextEntry> {
        self.entries.iter().rev().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[ContextEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn size_vars(&self) -> std::collections::BTreeSet<SizeVar> {
        let mut out = std::collections::BTreeSet::new();
        for e in &self.entries {
            out.extend(e.beta.eval_vars());
            out.extend(e.ty.size_vars());
        }
        out
    }
}

/// `ctx ⊢^alpha_beta term : ty`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgement {
    pub ctx: Context,
    pub alpha: BoundExpr,
    pub beta: BoundExpr,
    pub term: Term,
    pub ty: Type,
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.ctx.entries().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}[{}] : {}", e.name, e.beta, e.ty)?;
        }
        write!(
            f,
            " |-[{}; {}] {} : {}",
            self.alpha, self.beta, self.term, self.ty
        )
    }
}
