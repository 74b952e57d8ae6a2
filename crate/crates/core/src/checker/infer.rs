use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;

use crate::bounds::{
    fresh_size_var, leq_bounds, simplify, BoundExpr, Polynomial, SimplifyMode, SizeVar,
};
use crate::syntax::{Context, Judgement, Term, Type};

use super::unify::{align_arrows, Metas};
use super::{CheckError, CheckReport, CheckStatus, Checker, LeqCheck, RuleStep};

pub(super) struct Out {
    pub ty: Type,
    pub alpha: BoundExpr,
    pub beta: BoundExpr,
    node: usize,
}

pub(super) struct Session<'a> {
    checker: &'a Checker,
    metas: Metas,
    trace: Vec<RuleStep>,
}

fn tidy(e: BoundExpr) -> BoundExpr {
    simplify(&e, SimplifyMode::Exact).unwrap_or(e)
}

fn one() -> BoundExpr {
    BoundExpr::one()
}

impl<'a> Session<'a> {
    pub(super) fn new(checker: &'a Checker) -> Self {
        Session {
            checker,
            metas: Metas::default(),
            trace: Vec::new(),
        }
    }

    fn node(
        &mut self,
        rule: &'static str,
        ty: Type,
        alpha: BoundExpr,
        beta: BoundExpr,
        premises: Vec<usize>,
    ) -> Out {
        let alpha = tidy(alpha);
        let beta = tidy(beta);
        self.trace.push(RuleStep {
            rule,
            alpha: alpha.clone(),
            beta: beta.clone(),
            premises,
        });
        Out {
            ty,
            alpha,
            beta,
            node: self.trace.len() - 1,
        }
    }

    pub(super) fn infer(&mut self, ctx: &Context, t: &Term) -> Result<Out, CheckError> {
        match t {
            Term::Var(x) => {
                if let Some(e) = ctx.lookup(x) {
                    let (ty, beta) = (e.ty.clone(), e.beta.clone());
                    return Ok(self.node("var", ty, one(), beta, vec![]));
                }
                if let Some(d) = self.checker.defs.get(x) {
                    let d = d.clone();
                    return Ok(self.node("def", d.ty, d.alpha, d.beta, vec![]));
                }
                Err(CheckError::UnboundVariable(x.clone()))
            }
            Term::Unit => Ok(self.node("unit", Type::Unit, one(), one(), vec![])),
            Term::Inl(e) | Term::Inr(e) => {
                let o = self.infer(ctx, e)?;
                let other = self.metas.fresh();
                let (ty, rule) = if matches!(t, Term::Inl(_)) {
                    (Type::sum(o.ty, other), "inl")
                } else {
                    (Type::sum(other, o.ty), "inr")
                };
                Ok(self.node(rule, ty, o.alpha + one(), o.beta + one(), vec![o.node]))
            }
            Term::Pair(a, b) => {
                let oa = self.infer(ctx, a)?;
                let ob = self.infer(ctx, b)?;
                Ok(self.node(
                    "pair",
                    Type::prod(oa.ty, ob.ty),
                    oa.alpha + ob.alpha + one(),
                    BoundExpr::max(oa.beta, ob.beta) + one(),
                    vec![oa.node, ob.node],
                ))
            }
            Term::Prl(e) | Term::Prr(e) => {
                let o = self.infer(ctx, e)?;
                let (l, r) = (self.metas.fresh(), self.metas.fresh());
                self.metas.unify(&Type::prod(l.clone(), r.clone()), &o.ty)?;
                let beta = self.peel(&o.beta)?;
                let (ty, rule) = if matches!(t, Term::Prl(_)) {
                    (l, "prl")
                } else {
                    (r, "prr")
                };
                Ok(self.node(rule, ty, o.alpha + one(), beta, vec![o.node]))
            }
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let o = self.infer(ctx, scrutinee)?;
                let (l, r) = (self.metas.fresh(), self.metas.fresh());
                self.metas.unify(&Type::sum(l.clone(), r.clone()), &o.ty)?;
                let inner = self.peel(&o.beta)?;
                let ol = self.infer(&ctx.extended(left_binder, l, inner.clone()), left)?;
                let or = self.infer(&ctx.extended(right_binder, r, inner), right)?;
                self.metas.unify(&ol.ty, &or.ty)?;
                Ok(self.node(
                    "case",
                    ol.ty,
                    o.alpha + ol.alpha + or.alpha + one(),
                    BoundExpr::max(ol.beta, or.beta),
                    vec![o.node, ol.node, or.node],
                ))
            }
            Term::Lam {
                binder,
                size_var,
                body,
            } => self.infer_lam(ctx, binder, size_var, body, None),
            Term::App(f, a) => {
                let (of, oa) = match &**f {
                    Term::Lam {
                        binder,
                        size_var,
                        body,
                    } => {
                        let oa = self.infer(ctx, a)?;
                        let dom = oa.ty.clone();
                        let of = self.infer_lam(ctx, binder, size_var, body, Some(dom))?;
                        (of, oa)
                    }
                    _ => {
                        let of = self.infer(ctx, f)?;
                        let oa = self.infer(ctx, a)?;
                        (of, oa)
                    }
                };
                let Type::Arrow {
                    domain,
                    size_var,
                    alpha,
                    beta,
                    codomain,
                } = self.metas.zonk(&of.ty)
                else {
                    return Err(CheckError::NonArrowApplied(self.metas.zonk(&of.ty)));
                };
                self.metas.unify(&domain, &oa.ty)?;
                let ty = codomain.instantiate_bounds(&size_var, &oa.beta);
                Ok(self.node(
                    "app",
                    ty,
                    of.alpha + alpha.instantiate(&size_var, &oa.beta) + oa.alpha,
                    beta.instantiate(&size_var, &oa.beta),
                    vec![of.node, oa.node],
                ))
            }
            Term::Rec { f, k, a } => {
                let oa = self.infer(ctx, a)?;
                let of = match &**f {
                    Term::Lam {
                        binder,
                        size_var,
                        body,
                    } => self.infer_lam(ctx, binder, size_var, body, Some(oa.ty.clone()))?,
                    _ => self.infer(ctx, f)?,
                };
                let ok = self.infer(ctx, k)?;
                let fty = self.metas.zonk(&of.ty);
                let Type::Arrow {
                    domain,
                    size_var: v,
                    alpha,
                    beta,
                    codomain,
                } = &fty
                else {
                    return Err(CheckError::RecShapeError(self.metas.zonk(&fty)));
                };
                if codomain.size_vars().contains(v) || self.metas.unify(domain, codomain).is_err() {
                    return Err(CheckError::RecShapeError(self.metas.zonk(&fty)));
                }
                self.metas.unify(domain, &oa.ty)?;
                let vx = BoundExpr::Var(v.clone());
                // depth of every intermediate value: iterate max(v, β2)
                // ok.beta times starting from the depth of `a`
                let reach = BoundExpr::subst(
                    BoundExpr::iter(BoundExpr::max(vx, beta.clone()), ok.beta.clone(), v.clone()),
                    v.clone(),
                    oa.beta.clone(),
                );
                let reach = tidy(reach);
                let per_step = alpha.instantiate(v, &reach);
                Ok(self.node(
                    "rec",
                    (**domain).clone(),
                    of.alpha + ok.alpha + oa.alpha + ok.beta.clone() * per_step,
                    reach,
                    vec![of.node, ok.node, oa.node],
                ))
            }
        }
    }

    fn infer_lam(
        &mut self,
        ctx: &Context,
        binder: &str,
        size_var: &SizeVar,
        body: &Term,
        domain: Option<Type>,
    ) -> Result<Out, CheckError> {
        let mut avoid = ctx.size_vars();
        if let Some(d) = &domain {
            avoid.extend(self.metas.zonk(d).size_vars());
        }
        let v = if avoid.contains(size_var) {
            fresh_size_var(size_var, &avoid)
        } else {
            size_var.clone()
        };
        let dom = domain.unwrap_or_else(|| self.metas.fresh());
        let inner = ctx.extended(binder, dom.clone(), BoundExpr::Var(v.clone()));
        let ob = self.infer(&inner, body)?;
        let alpha = ob.alpha.instantiate(&v, &one()) + one();
        let mut locals = vec![binder.to_string()];
        let beta = one() + self.sdepth(ctx, body, &mut locals);
        let ty = Type::Arrow {
            domain: Box::new(dom),
            size_var: v,
            alpha: ob.alpha,
            beta: ob.beta,
            codomain: Box::new(ob.ty),
        };
        Ok(self.node("abs", ty, alpha, beta, vec![ob.node]))
    }

    /// Depth of `t` once the context variables are replaced by values of
    /// their declared depth; `t` itself is not reduced.
    fn sdepth(&self, ctx: &Context, t: &Term, locals: &mut Vec<String>) -> BoundExpr {
        match t {
            Term::Var(x) => {
                if locals.iter().any(|y| y == x) {
                    one()
                } else if let Some(e) = ctx.lookup(x) {
                    e.beta.clone()
                } else if let Some(d) = self.checker.defs.get(x) {
                    BoundExpr::from(d.term.depth())
                } else {
                    one()
                }
            }
            Term::Unit => one(),
            Term::Lam { binder, body, .. } => one() + self.sdepth_under(ctx, binder, body, locals),
            Term::Inl(e) | Term::Inr(e) | Term::Prl(e) | Term::Prr(e) => {
                one() + self.sdepth(ctx, e, locals)
            }
            Term::Pair(a, b) | Term::App(a, b) => {
                let da = self.sdepth(ctx, a, locals);
                let db = self.sdepth(ctx, b, locals);
                tidy(one() + BoundExpr::max(da, db))
            }
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let ds = self.sdepth(ctx, scrutinee, locals);
                let dl = self.sdepth_under(ctx, left_binder, left, locals);
                let dr = self.sdepth_under(ctx, right_binder, right, locals);
                tidy(one() + BoundExpr::max(ds, BoundExpr::max(dl, dr)))
            }
            Term::Rec { f, k, a } => {
                let df = self.sdepth(ctx, f, locals);
                let dk = self.sdepth(ctx, k, locals);
                let da = self.sdepth(ctx, a, locals);
                tidy(one() + BoundExpr::max(df, BoundExpr::max(dk, da)))
            }
        }
    }

    fn sdepth_under(
        &self,
        ctx: &Context,
        x: &str,
        t: &Term,
        locals: &mut Vec<String>,
    ) -> BoundExpr {
        locals.push(x.to_string());
        let d = self.sdepth(ctx, t, locals);
        locals.pop();
        d
    }

    /// A bound on the depth of `V` given a bound `beta` on the depth of an
    /// injection or pair built from `V`. Falls back to `beta` itself,
    /// which is always sound.
    fn peel(&self, beta: &BoundExpr) -> Result<BoundExpr, CheckError> {
        let s = tidy(beta.clone());
        if let Some(n) = s.as_lit() {
            if n.is_one() {
                return Err(CheckError::PeelError(s));
            }
            return Ok(BoundExpr::Lit(n - 1u32));
        }
        if let BoundExpr::Max(a, b) = &s {
            if let (Ok(pa), Ok(pb)) = (self.peel(a), self.peel(b)) {
                return Ok(tidy(BoundExpr::max(pa, pb)));
            }
            return Ok(s);
        }
        if Polynomial::from_bound(&s).constant_term() > BigInt::one() {
            let peeled = tidy(s.clone() - one());
            if !matches!(peeled, BoundExpr::Sub(..)) {
                return Ok(peeled);
            }
        }
        Ok(s)
    }

    pub(super) fn leq(&self, what: &str, lhs: &BoundExpr, rhs: &BoundExpr) -> LeqCheck {
        LeqCheck {
            what: what.to_string(),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            verdict: leq_bounds(lhs, rhs, self.checker.grid),
        }
    }

    /// Structural subtyping: equal shapes, arrow payloads compared with
    /// the bound procedure, codomains covariant.
    pub(super) fn subtype(
        &mut self,
        sub: &Type,
        sup: &Type,
        out: &mut Vec<LeqCheck>,
    ) -> Result<(), CheckError> {
        let a = self.metas.resolve(sub);
        let b = self.metas.resolve(sup);
        match (&a, &b) {
            (Type::Sum(a1, b1), Type::Sum(a2, b2)) | (Type::Prod(a1, b1), Type::Prod(a2, b2)) => {
                self.subtype(a1, a2, out)?;
                self.subtype(b1, b2, out)
            }
            (Type::Arrow { .. }, Type::Arrow { .. }) => {
                let (d1, c1, (al1, be1), d2, c2, (al2, be2)) = align_arrows(&a, &b);
                self.metas.unify(&d2, &d1)?;
                out.push(self.leq("arrow alpha", &al1, &al2));
                out.push(self.leq("arrow beta", &be1, &be2));
                self.subtype(&c1, &c2, out)
            }
            _ => self.metas.unify(&b, &a),
        }
    }

    pub(super) fn finish(self, ctx: &Context, t: &Term, out: Out) -> CheckReport {
        let ty = name_metas(&self.metas.zonk(&out.ty));
        CheckReport {
            judgement: Judgement {
                ctx: ctx.clone(),
                alpha: out.alpha,
                beta: out.beta,
                term: t.clone(),
                ty,
            },
            status: CheckStatus::Valid,
            rule_trace: self.trace,
            leq_checks: Vec::new(),
        }
    }
}

/// Replaces unsolved metas by type variables `A`, `B`, ... in order of
/// first appearance, skipping names already in use.
fn name_metas(t: &Type) -> Type {
    fn collect(t: &Type, metas: &mut Vec<u32>, used: &mut BTreeSet<String>) {
        match t {
            Type::Meta(m) if !metas.contains(m) => metas.push(*m),
            Type::TVar(x) => {
                used.insert(x.clone());
            }
            Type::Sum(a, b) | Type::Prod(a, b) => {
                collect(a, metas, used);
                collect(b, metas, used);
            }
            Type::Arrow {
                domain, codomain, ..
            } => {
                collect(domain, metas, used);
                collect(codomain, metas, used);
            }
            _ => {}
        }
    }
    fn replace(t: &Type, names: &[(u32, String)]) -> Type {
        match t {
            Type::Meta(m) => names
                .iter()
                .find(|(n, _)| n == m)
                .map(|(_, s)| Type::TVar(s.clone()))
                .unwrap_or_else(|| t.clone()),
            Type::Sum(a, b) => Type::sum(replace(a, names), replace(b, names)),
            Type::Prod(a, b) => Type::prod(replace(a, names), replace(b, names)),
            Type::Arrow {
                domain,
                size_var,
                alpha,
                beta,
                codomain,
            } => Type::Arrow {
                domain: Box::new(replace(domain, names)),
                size_var: size_var.clone(),
                alpha: alpha.clone(),
                beta: beta.clone(),
                codomain: Box::new(replace(codomain, names)),
            },
            _ => t.clone(),
        }
    }
    let mut metas = Vec::new();
    let mut used = BTreeSet::new();
    collect(t, &mut metas, &mut used);
    let mut names = Vec::new();
    let mut candidates = (0u32..).map(|i| {
        let letter = char::from(b'A' + (i % 26) as u8);
        if i < 26 {
            letter.to_string()
        } else {
            format!("{letter}{}", i / 26)
        }
    });
    for m in metas {
        let name = candidates
            .by_ref()
            .find(|c| !used.contains(c))
            .expect("infinite supply");
        names.push((m, name));
    }
    replace(t, &names)
}
