use std::collections::BTreeSet;

use super::Term;

impl Term {
    /// Constructor-count height. Eliminators count too, so the measure is
    /// defined on terms that still contain redexes.
    pub fn depth(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Unit => 1,
            Term::Lam { body, .. } => 1 + body.depth(),
            Term::Inl(t) | Term::Inr(t) | Term::Prl(t) | Term::Prr(t) => 1 + t.depth(),
            Term::Pair(a, b) | Term::App(a, b) => 1 + a.depth().max(b.depth()),
            Term::Case {
                scrutinee,
                left,
                right,
                ..
            } => 1 + scrutinee.depth().max(left.depth()).max(right.depth()),
            Term::Rec { f, k, a } => 1 + f.depth().max(k.depth()).max(a.depth()),
        }
    }

    /// Number of free occurrences of `x`.
    pub fn occurs(&self, x: &str) -> u64 {
        match self {
            Term::Var(y) => u64::from(y == x),
            Term::Unit => 0,
            Term::Lam { binder, body, .. } => {
                if binder == x {
                    0
                } else {
                    body.occurs(x)
                }
            }
            Term::Inl(t) | Term::Inr(t) | Term::Prl(t) | Term::Prr(t) => t.occurs(x),
            Term::Pair(a, b) | Term::App(a, b) => a.occurs(x) + b.occurs(x),
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                scrutinee.occurs(x)
                    + if left_binder == x { 0 } else { left.occurs(x) }
                    + if right_binder == x {
                        0
                    } else {
                        right.occurs(x)
                    }
            }
            Term::Rec { f, k, a } => f.occurs(x) + k.occurs(x) + a.occurs(x),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            Term::Unit => {}
            Term::Lam { binder, body, .. } => {
                bound.push(binder.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Term::Inl(t) | Term::Inr(t) | Term::Prl(t) | Term::Prr(t) => t.collect_free(bound, out),
            Term::Pair(a, b) | Term::App(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                scrutinee.collect_free(bound, out);
                bound.push(left_binder.clone());
                left.collect_free(bound, out);
                bound.pop();
                bound.push(right_binder.clone());
                right.collect_free(bound, out);
                bound.pop();
            }
            Term::Rec { f, k, a } => {
                f.collect_free(bound, out);
                k.collect_free(bound, out);
                a.collect_free(bound, out);
            }
        }
    }

    /// Capture-avoiding substitution of `v` for the free occurrences of `x`.
    pub fn subst(&self, x: &str, v: &Term) -> Term {
        let v_free = v.free_vars();
        self.subst_inner(x, v, &v_free)
    }

    fn subst_inner(&self, x: &str, v: &Term, v_free: &BTreeSet<String>) -> Term {
        let go = |t: &Term| Box::new(t.subst_inner(x, v, v_free));
        match self {
            Term::Var(y) if y == x => v.clone(),
            Term::Var(_) | Term::Unit => self.clone(),
            Term::Lam {
                binder,
                size_var,
                body,
            } => {
                let (binder, body) = under_binder(binder, body, x, v, v_free);
                Term::Lam {
                    binder,
                    size_var: size_var.clone(),
                    body: Box::new(body),
                }
            }
            Term::Inl(t) => Term::Inl(go(t)),
            Term::Inr(t) => Term::Inr(go(t)),
            Term::Prl(t) => Term::Prl(go(t)),
            Term::Prr(t) => Term::Prr(go(t)),
            Term::Pair(a, b) => Term::Pair(go(a), go(b)),
            Term::App(a, b) => Term::App(go(a), go(b)),
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let (left_binder, left) = under_binder(left_binder, left, x, v, v_free);
                let (right_binder, right) = under_binder(right_binder, right, x, v, v_free);
                Term::Case {
                    scrutinee: go(scrutinee),
                    left_binder,
                    left: Box::new(left),
                    right_binder,
                    right: Box::new(right),
                }
            }
            Term::Rec { f, k, a } => Term::Rec {
                f: go(f),
                k: go(k),
                a: go(a),
            },
        }
    }
}

fn under_binder(
    binder: &str,
    body: &Term,
    x: &str,
    v: &Term,
    v_free: &BTreeSet<String>,
) -> (String, Term) {
    if binder == x || body.occurs(x) == 0 {
        return (binder.to_string(), body.clone());
    }
    if v_free.contains(binder) {
        let mut avoid = v_free.clone();
        avoid.extend(body.free_vars());
        avoid.insert(x.to_string());
        let fresh = fresh_name(binder, &avoid);
        let renamed = body.subst(binder, &Term::Var(fresh.clone()));
        return (fresh, renamed.subst_inner(x, v, v_free));
    }
    (binder.to_string(), body.subst_inner(x, v, v_free))
}

/// The first of `base'`, `base''`, ... that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Equality up to renaming of term binders. Size-variable names on
/// lambdas only matter for types, so they are ignored here.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go(a: &Term, b: &Term, env_a: &mut Vec<String>, env_b: &mut Vec<String>) -> bool {
        let index = |env: &Vec<String>, x: &str| env.iter().rposition(|y| y == x);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => match (index(env_a, x), index(env_b, y)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            },
            (Term::Unit, Term::Unit) => true,
            (
                Term::Lam {
                    binder: xa,
                    size_var: _,
                    body: ba,
                },
                Term::Lam {
                    binder: xb,
                    size_var: _,
                    body: bb,
                },
            ) => {
                env_a.push(xa.clone());
                env_b.push(xb.clone());
                let r = go(ba, bb, env_a, env_b);
                env_a.pop();
                env_b.pop();
                r
            }
            (Term::Inl(x), Term::Inl(y))
            | (Term::Inr(x), Term::Inr(y))
            | (Term::Prl(x), Term::Prl(y))
            | (Term::Prr(x), Term::Prr(y)) => go(x, y, env_a, env_b),
            (Term::Pair(a1, a2), Term::Pair(b1, b2)) | (Term::App(a1, a2), Term::App(b1, b2)) => {
                go(a1, b1, env_a, env_b) && go(a2, b2, env_a, env_b)
            }
            (
                Term::Case {
                    scrutinee: sa,
                    left_binder: la,
                    left: lta,
                    right_binder: ra,
                    right: rta,
                },
                Term::Case {
                    scrutinee: sb,
                    left_binder: lb,
                    left: ltb,
                    right_binder: rb,
                    right: rtb,
                },
            ) => {
                if !go(sa, sb, env_a, env_b) {
                    return false;
                }
                env_a.push(la.clone());
                env_b.push(lb.clone());
                let l = go(lta, ltb, env_a, env_b);
                env_a.pop();
                env_b.pop();
                env_a.push(ra.clone());
                env_b.push(rb.clone());
                let r = go(rta, rtb, env_a, env_b);
                env_a.pop();
                env_b.pop();
                l && r
            }
            (
                Term::Rec {
                    f: fa,
                    k: ka,
                    a: aa,
                },
                Term::Rec {
                    f: fb,
                    k: kb,
                    a: ab,
                },
            ) => go(fa, fb, env_a, env_b) && go(ka, kb, env_a, env_b) && go(aa, ab, env_a, env_b),
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}
