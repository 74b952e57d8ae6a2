//! Pretty printing. Output re-parses to the same AST (metas excepted).

use std::fmt;

use super::{Term, Type};

// Type levels: 0 arrow, 1 sum, 2 product, 3 atom.
fn write_type(t: &Type, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match t {
        Type::Arrow { .. } => 0,
        Type::Sum(..) => 1,
        Type::Prod(..) => 2,
        _ => 3,
    };
    if own < level {
        f.write_str("(")?;
        write_type(t, own, f)?;
        return f.write_str(")");
    }
    match t {
        Type::TVar(name) => f.write_str(name),
        Type::Unit => f.write_str("Unit"),
        Type::Bottom => f.write_str("Bot"),
        Type::Meta(n) => write!(f, "?{n}"),
        Type::Sum(a, b) => {
            write_type(a, 2, f)?;
            f.write_str(" + ")?;
            write_type(b, 1, f)
        }
        Type::Prod(a, b) => {
            write_type(a, 3, f)?;
            f.write_str(" * ")?;
            write_type(b, 2, f)
        }
        Type::Arrow {
            domain,
            size_var,
            alpha,
            beta,
            codomain,
        } => {
            write_type(domain, 1, f)?;
            write!(f, " ->[{size_var}; {alpha}; {beta}] ")?;
            write_type(codomain, 0, f)
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(self, 0, f)
    }
}

// Term levels: 0 open-ended (lambda, case), 1 application, 2 argument.
fn write_term(t: &Term, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let own = match t {
        Term::Lam { .. } | Term::Case { .. } => 0,
        Term::App(..) => 1,
        _ => 2,
    };
    if own < level {
        f.write_str("(")?;
        write_term(t, own, f)?;
        return f.write_str(")");
    }
    match t {
        Term::Var(x) => f.write_str(x),
        Term::Unit => f.write_str("unit"),
        Term::Lam {
            binder,
            size_var,
            body,
        } => {
            write!(f, "\\{binder}^{size_var}. ")?;
            write_term(body, 0, f)
        }
        Term::Inl(e) => prefix("inl", e, f),
        Term::Inr(e) => prefix("inr", e, f),
        Term::Prl(e) => prefix("prl", e, f),
        Term::Prr(e) => prefix("prr", e, f),
        Term::Pair(a, b) => {
            f.write_str("(")?;
            write_term(a, 0, f)?;
            f.write_str(", ")?;
            write_term(b, 0, f)?;
            f.write_str(")")
        }
        Term::App(a, b) => {
            write_term(a, 1, f)?;
            f.write_str(" ")?;
            write_term(b, 2, f)
        }
        Term::Case {
            scrutinee,
            left_binder,
            left,
            right_binder,
            right,
        } => {
            f.write_str("case ")?;
            write_term(scrutinee, 0, f)?;
            write!(f, " of inl {left_binder} => ")?;
            // an open-ended left branch would swallow the `|`
            write_term(left, 1, f)?;
            write!(f, " | inr {right_binder} => ")?;
            write_term(right, 0, f)
        }
        Term::Rec { f: g, k, a } => {
            f.write_str("rec ")?;
            write_term(g, 2, f)?;
            f.write_str(" ")?;
            write_term(k, 2, f)?;
            f.write_str(" ")?;
            write_term(a, 2, f)
        }
    }
}

fn prefix(kw: &str, e: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "{kw} ")?;
    write_term(e, 2, f)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, 0, f)
    }
}
