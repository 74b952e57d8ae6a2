//! Bounded enumeration: inhabitants of first-order types, predicates
//! decided by checking every input, and the raw-term search for a proof
//! of `Bottom`.

use std::collections::HashMap;

use crate::checker::Checker;
use crate::evaluator::normalize;
use crate::syntax::{Context, Term, Type};

use super::EmulationError;

/// All closed values of `ty` with depth at most `max_depth`, ordered by
/// constructor (`inl` before `inr`, pairs lexicographically).
pub fn enumerate_inhabitants(ty: &Type, max_depth: u64) -> Result<Vec<Term>, EmulationError> {
    if max_depth == 0 {
        return Ok(Vec::new());
    }
    Ok(match ty {
        Type::Unit => vec![Term::Unit],
        Type::Sum(a, b) => {
            let mut out: Vec<Term> = enumerate_inhabitants(a, max_depth - 1)?
                .into_iter()
                .map(Term::inl)
                .collect();
            out.extend(
                enumerate_inhabitants(b, max_depth - 1)?
                    .into_iter()
                    .map(Term::inr),
            );
            out
        }
        Type::Prod(a, b) => {
            let left = enumerate_inhabitants(a, max_depth - 1)?;
            let right = enumerate_inhabitants(b, max_depth - 1)?;
            let mut out = Vec::with_capacity(left.len() * right.len());
            for l in &left {
                for r in &right {
                    out.push(Term::pair(l.clone(), r.clone()));
                }
            }
            out
        }
        Type::Bottom => Vec::new(),
        other => return Err(EmulationError::UnsupportedType(other.clone())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    /// The predicate returned `inl unit` on every input.
    pub holds: bool,
    /// First input on which it did not.
    pub counterexample: Option<Term>,
    pub inputs_checked: usize,
}

/// Applies `pred` to every inhabitant of `domain` up to `max_depth`.
/// Anything other than `inl unit` counts as false.
pub fn decide_proposition(
    pred: &Term,
    domain: &Type,
    max_depth: u64,
    fuel: u64,
) -> Result<Decision, EmulationError> {
    let inputs = enumerate_inhabitants(domain, max_depth)?;
    let truth = Term::inl(Term::Unit);
    for (i, v) in inputs.iter().enumerate() {
        let trace = normalize(&Term::app(pred.clone(), v.clone()), fuel)?;
        if trace.normal_form != truth {
            return Ok(Decision {
                holds: false,
                counterexample: Some(v.clone()),
                inputs_checked: i + 1,
            });
        }
    }
    Ok(Decision {
        holds: true,
        counterexample: None,
        inputs_checked: inputs.len(),
    })
}

/// Every closed term with at most `max_size` nodes, well-typed or not.
/// A binder introduced under `k` enclosing binders is named `xk`, so
/// alpha-equivalent terms are generated once.
pub fn enumerate_closed_terms(max_size: usize) -> Vec<Term> {
    let mut table = TermTable::default();
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(table.get(n, 0).iter().cloned());
    }
    out
}

#[derive(Default)]
struct TermTable {
    memo: HashMap<(usize, usize), Vec<Term>>,
}

impl TermTable {
    fn get(&mut self, size: usize, scope: usize) -> &[Term] {
        if !self.memo.contains_key(&(size, scope)) {
            let terms = self.build(size, scope);
            self.memo.insert((size, scope), terms);
        }
        &self.memo[&(size, scope)]
    }

    fn build(&mut self, n: usize, k: usize) -> Vec<Term> {
        let x = format!("x{k}");
        let mut out = Vec::new();
        if n == 1 {
            out.push(Term::Unit);
            out.extend((0..k).map(|i| Term::var(format!("x{i}"))));
            return out;
        }
        let sub = self.get(n - 1, k).to_vec();
        for wrap in [Term::inl, Term::inr, Term::prl, Term::prr] {
            out.extend(sub.iter().cloned().map(wrap));
        }
        for body in self.get(n - 1, k + 1).to_vec() {
            out.push(Term::lam(x.clone(), format!("v{k}"), body));
        }
        for a in 1..n - 1 {
            let left = self.get(a, k).to_vec();
            let right = self.get(n - 1 - a, k).to_vec();
            for l in &left {
                for r in &right {
                    out.push(Term::pair(l.clone(), r.clone()));
                    out.push(Term::app(l.clone(), r.clone()));
                }
            }
        }
        for a in 1..n.saturating_sub(2) {
            for b in 1..n - 1 - a {
                let c = n - 1 - a - b;
                let first = self.get(a, k).to_vec();
                let (bl, br) = (self.get(b, k + 1).to_vec(), self.get(c, k + 1).to_vec());
                for s in &first {
                    for l in &bl {
                        for r in &br {
                            out.push(Term::case(
                                s.clone(),
                                x.clone(),
                                l.clone(),
                                x.clone(),
                                r.clone(),
                            ));
                        }
                    }
                }
                let (mid, last) = (self.get(b, k).to_vec(), self.get(c, k).to_vec());
                for f in &first {
                    for m in &mid {
                        for a in &last {
                            out.push(Term::rec(f.clone(), m.clone(), a.clone()));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Runs inference on every closed term up to `max_ast_size` nodes and
/// returns the first one typed `Bottom`, with the number of terms tried.
pub fn search_for_bottom(max_ast_size: usize) -> (Option<Term>, usize) {
    let checker = Checker::new();
    let ctx = Context::new();
    let terms = enumerate_closed_terms(max_ast_size);
    for (i, t) in terms.iter().enumerate() {
        if let Ok(report) = checker.infer(&ctx, t) {
            if *report.ty() == Type::Bottom {
                return (Some(t.clone()), i + 1);
            }
        }
    }
    (None, terms.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, parse_type};

    fn ty(s: &str) -> Type {
        parse_type(s).unwrap()
    }

    #[test]
    fn small_inhabitant_sets() {
        assert_eq!(
            enumerate_inhabitants(&Type::Unit, 1).unwrap(),
            vec![Term::Unit]
        );
        assert_eq!(
            enumerate_inhabitants(&ty("Unit + Unit"), 2).unwrap(),
            vec![Term::inl(Term::Unit), Term::inr(Term::Unit)]
        );
        assert_eq!(
            enumerate_inhabitants(&ty("Unit * (Unit + Unit)"), 3).unwrap(),
            vec![
                Term::pair(Term::Unit, Term::inl(Term::Unit)),
                Term::pair(Term::Unit, Term::inr(Term::Unit)),
            ]
        );
        assert!(enumerate_inhabitants(&ty("Unit + Unit"), 1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn arrows_are_not_enumerable() {
        assert!(matches!(
            enumerate_inhabitants(&ty("Unit ->[v; 1; 1] Unit"), 3),
            Err(EmulationError::UnsupportedType(_))
        ));
    }

    #[test]
    fn inhabitants_respect_depth() {
        let t = ty("(Unit + Unit) * (Unit + (Unit + Unit))");
        for d in 1..5 {
            for v in enumerate_inhabitants(&t, d).unwrap() {
                assert!(v.depth() <= d);
            }
        }
    }

    #[test]
    fn decide_small_predicates() {
        let is_left = parse_term(r"\b^v. case b of inl x => inl unit | inr y => inr unit").unwrap();
        let d = decide_proposition(&is_left, &ty("Unit + Unit"), 2, 100).unwrap();
        assert!(!d.holds);
        assert_eq!(d.counterexample, Some(Term::inr(Term::Unit)));
        let always = parse_term(r"\b^v. inl unit").unwrap();
        let d = decide_proposition(&always, &ty("Unit + Unit"), 2, 100).unwrap();
        assert!(d.holds);
        assert_eq!(d.inputs_checked, 2);
    }

    #[test]
    fn closed_term_counts() {
        // size 1: unit; size 2: four wrappers of unit plus \x0. x0 and \x0. unit.
        assert_eq!(enumerate_closed_terms(1), vec![Term::Unit]);
        assert_eq!(enumerate_closed_terms(2).len(), 1 + 6);
        for t in enumerate_closed_terms(4) {
            assert!(t.free_vars().is_empty());
            assert!(t.size() <= 4);
        }
    }

    #[test]
    fn no_bottom_at_small_sizes() {
        let (found, tried) = search_for_bottom(4);
        assert_eq!(found, None);
        assert_eq!(tried, 1 + 6 + 37 + 245);
    }
}
