use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use proptest::prelude::*;

use cufl::bounds::{
    eval_bound, leq_bounds, simplify, witness_violates, BoundExpr, LeqVerdict, SimplifyMode,
    SizeVar, Valuation,
};
use cufl::checker::infer;
use cufl::emulation::{
    compile_loop, compile_tm, decode_tm_config, parse_loop_program, run_tm_direct, Move, TmSpec,
    Transition,
};
use cufl::encoder::{decode_nat, encode_nat, quote_term, DeBruijnMap};
use cufl::evaluator::{normalize, verify_bounds};
use cufl::generate::TermGenerator;
use cufl::syntax::{alpha_eq, parse_bound, parse_term, Context, Term};

fn bound() -> impl Strategy<Value = BoundExpr> {
    let leaf = prop_oneof![
        Just(BoundExpr::var("x")),
        Just(BoundExpr::var("y")),
        (1u64..6).prop_map(BoundExpr::lit),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BoundExpr::max(a, b)),
            (inner.clone(), 1u64..4).prop_map(|(a, n)| BoundExpr::pow(a, BoundExpr::lit(n))),
            (inner.clone(), 1u64..4).prop_map(|(a, n)| BoundExpr::iter(
                BoundExpr::var("x") + a,
                BoundExpr::lit(n),
                "x"
            )),
        ]
    })
}

fn valuation() -> impl Strategy<Value = Valuation> {
    (1u64..6, 1u64..6).prop_map(|(x, y)| Valuation::from_pairs([("x", x), ("y", y)]))
}

fn eval(e: &BoundExpr, v: &Valuation) -> BigUint {
    eval_bound(e, v).expect("monotone bounds evaluate")
}

proptest! {
    #[test]
    fn exact_simplification_preserves_value(e in bound(), v in valuation()) {
        let s = simplify(&e, SimplifyMode::Exact).unwrap();
        prop_assert_eq!(eval(&s, &v), eval(&e, &v));
    }

    #[test]
    fn loosening_never_decreases(e in bound(), v in valuation()) {
        let s = simplify(&e, SimplifyMode::Loosen).unwrap();
        prop_assert!(eval(&s, &v) >= eval(&e, &v));
    }

    #[test]
    fn substitution_agrees_with_valuation(e in bound(), r in bound(), v in valuation()) {
        let x = SizeVar::new("x");
        let substituted = e.instantiate(&x, &r);
        let shifted = v.with(&x, eval(&r, &v));
        prop_assert_eq!(eval(&substituted, &v), eval(&e, &shifted));
    }

    #[test]
    fn leq_verdicts_are_sound(a in bound(), b in bound()) {
        match leq_bounds(&a, &b, 3) {
            LeqVerdict::Proven => {
                for x in 1..=5u64 {
                    for y in 1..=5u64 {
                        let v = Valuation::from_pairs([("x", x), ("y", y)]);
                        prop_assert!(eval(&a, &v) <= eval(&b, &v), "{} <= {} fails at {}", a, b, v);
                    }
                }
            }
            LeqVerdict::Refuted(w) => {
                let closed = w.with(&SizeVar::new("x"), w.get(&SizeVar::new("x")).cloned().unwrap_or(BigUint::from(1u8)));
                let closed = closed.with(&SizeVar::new("y"), closed.get(&SizeVar::new("y")).cloned().unwrap_or(BigUint::from(1u8)));
                prop_assert!(witness_violates(&a, &b, &closed));
            }
            LeqVerdict::Unknown { .. } => {}
        }
    }

    #[test]
    fn bound_print_parse_roundtrip(e in bound()) {
        prop_assert_eq!(parse_bound(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn numerals_roundtrip(n in 0u64..2000) {
        let t = encode_nat(n);
        prop_assert_eq!(decode_nat(&t).unwrap(), n);
        prop_assert_eq!(t.depth(), n + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_terms_respect_their_bounds(seed in any::<u64>()) {
        let (t, r) = TermGenerator::new(seed).checked_term();
        let v = verify_bounds(&t, &r, 1_000_000).unwrap();
        prop_assert!(v.ok, "{}: cost {} / {}, depth {} / {}", t, v.measured_cost, v.alpha_bound, v.measured_depth, v.beta_bound);
    }

    #[test]
    fn term_print_parse_roundtrip(seed in any::<u64>()) {
        let t = TermGenerator::new(seed).raw_term();
        prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn normalisation_is_deterministic(seed in any::<u64>()) {
        let (t, _) = TermGenerator::new(seed).checked_term();
        let a = normalize(&t, 1_000_000).unwrap();
        let b = normalize(&t, 1_000_000).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normal_forms_are_values(seed in any::<u64>()) {
        let (t, _) = TermGenerator::new(seed).checked_term();
        let nf = normalize(&t, 1_000_000).unwrap().normal_form;
        prop_assert!(nf.is_value(), "{} normalised to {}", t, nf);
    }

    #[test]
    fn quotation_respects_alpha_equivalence(seed in any::<u64>()) {
        let t = TermGenerator::new(seed).raw_term();
        let renamed = rename_binders(&t);
        prop_assert!(alpha_eq(&t, &renamed));
        let env = DeBruijnMap::new();
        prop_assert_eq!(quote_term(&t, &env).unwrap(), quote_term(&renamed, &env).unwrap());
    }

    #[test]
    fn substitution_avoids_capture(seed in any::<u64>()) {
        let mut g = TermGenerator::new(seed);
        let body = Term::pair(g.raw_term(), Term::var("z"));
        let wrapped = Term::lam("y", "v", body);
        let replaced = wrapped.subst("z", &Term::var("y"));
        prop_assert!(replaced.free_vars().contains("y"));
    }
}

/// Appends `_r` to every bound variable.
fn rename_binders(t: &Term) -> Term {
    fn go(t: &Term, map: &BTreeMap<String, String>) -> Term {
        let bind = |x: &str| {
            let mut m = map.clone();
            m.insert(x.to_string(), format!("{x}_r"));
            (format!("{x}_r"), m)
        };
        match t {
            Term::Var(x) => Term::var(map.get(x).cloned().unwrap_or_else(|| x.clone())),
            Term::Unit => Term::Unit,
            Term::Lam {
                binder,
                size_var,
                body,
            } => {
                let (b, m) = bind(binder);
                Term::lam(b, size_var.clone(), go(body, &m))
            }
            Term::Inl(e) => Term::inl(go(e, map)),
            Term::Inr(e) => Term::inr(go(e, map)),
            Term::Prl(e) => Term::prl(go(e, map)),
            Term::Prr(e) => Term::prr(go(e, map)),
            Term::Pair(a, b) => Term::pair(go(a, map), go(b, map)),
            Term::App(a, b) => Term::app(go(a, map), go(b, map)),
            Term::Case {
                scrutinee,
                left_binder,
                left,
                right_binder,
                right,
            } => {
                let (lb, lm) = bind(left_binder);
                let (rb, rm) = bind(right_binder);
                Term::case(go(scrutinee, map), lb, go(left, &lm), rb, go(right, &rm))
            }
            Term::Rec { f, k, a } => Term::rec(go(f, map), go(k, map), go(a, map)),
        }
    }
    go(t, &BTreeMap::new())
}

fn machine() -> impl Strategy<Value = TmSpec> {
    (1usize..4, 2usize..4).prop_flat_map(|(ns, na)| {
        let cells = ns * na;
        (
            Just((ns, na)),
            proptest::collection::vec(
                proptest::option::weighted(0.8, (0..ns, 0..na, any::<bool>())),
                cells,
            ),
        )
            .prop_map(|((ns, na), rows)| {
                let states: Vec<String> = (0..ns).map(|i| format!("q{i}")).collect();
                let alphabet: Vec<String> = (0..na).map(|i| format!("{i}")).collect();
                let mut transitions = BTreeMap::new();
                for (i, row) in rows.into_iter().enumerate() {
                    if let Some((t, b, right)) = row {
                        transitions.insert(
                            (states[i / na].clone(), alphabet[i % na].clone()),
                            Transition {
                                next: states[t].clone(),
                                write: alphabet[b].clone(),
                                mv: if right { Move::R } else { Move::L },
                            },
                        );
                    }
                }
                TmSpec {
                    start: states[0].clone(),
                    halt: BTreeSet::new(),
                    states,
                    alphabet,
                    transitions,
                }
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn compiled_machines_match_direct_runs(
        tm in machine(),
        raw in proptest::collection::vec(0usize..3, 0..4),
        bound in 1u64..6,
    ) {
        let input: Vec<String> = raw.iter().map(|&i| tm.alphabet[i % tm.alphabet.len()].clone()).collect();
        if let Ok((want, _)) = run_tm_direct(&tm, &input, bound) {
            let c = compile_tm(&tm, &input, bound).unwrap();
            let nf = normalize(&c.term, 10_000_000).unwrap().normal_form;
            prop_assert_eq!(decode_tm_config(&tm, &c, &nf).unwrap(), want);
        }
    }

    #[test]
    fn compiled_addition_matches_arithmetic(x in 0u64..12, y in 0u64..12) {
        let p = parse_loop_program("prog add(x, y) { r := x; loop y { r := succ r }; return r }").unwrap();
        let c = compile_loop(&p, 26).unwrap();
        let applied = c.apply(&[x, y]).unwrap();
        let r = infer(&Context::new(), &applied).unwrap();
        prop_assert!(verify_bounds(&applied, &r, 10_000_000).unwrap().ok);
        let nf = normalize(&applied, 10_000_000).unwrap().normal_form;
        prop_assert_eq!(c.decode(&nf).unwrap(), x + y);
    }
}
