//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed or ran over its time limit.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use cufl::bounds::{eval_bound, simplify, BoundExpr, SimplifyMode, SizeVar, Valuation};
use cufl::checker::{infer, CheckReport};
use cufl::emulation::{
    compile_loop, compile_tm, decide_proposition, decode_tm_config, enumerate_inhabitants,
    parse_loop_program, parse_tm, run_tm_direct, search_for_bottom, DEFAULT_CAPACITY,
};
use cufl::encoder::{
    decode_nat, encode_nat, quote_bound, quote_term, quote_type, unfold_nat_type, DeBruijnMap,
};
use cufl::evaluator::{normalize, step, verify_bounds};
use cufl::generate::checked_corpus;
use cufl::syntax::{alpha_eq, parse_bound, parse_term, parse_type, Context, Term, Type};

type Check = fn() -> Result<String, String>;
type Arith = fn(u64, u64) -> u64;
type Oracle = Box<dyn Fn(&Term) -> bool>;

fn main() {
    let criteria: [(&str, Check, u64); 8] = [
        ("bound soundness", bound_soundness, 30),
        ("simplifier table", simplifier_table, 10),
        ("consistency probe", consistency_probe, 60),
        ("loop expressivity", loop_expressivity, 30),
        ("bounded TM emulation", tm_emulation, 60),
        ("subject reduction", subject_reduction, 60),
        ("quotation", quotation, 60),
        ("decidability enumerator", decidability, 30),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*limit);
        let (verdict, detail) = match outcome {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {limit} s limit")),
            Err(e) => ("FAIL", e),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {} {name}: {verdict} ({detail}; {:.2} s, limit {limit} s)",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all criteria passed");
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<String>()
        .cloned()
        .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn checked(t: &Term) -> Result<CheckReport, String> {
    let r = infer(&Context::new(), t).map_err(|e| format!("{t}: {e}"))?;
    ensure(!r.is_invalid(), || format!("{t}: {}", r.status.label()))?;
    Ok(r)
}

// 1

fn handwritten_terms() -> Vec<Term> {
    let not = r"(\b^v. case b of inl x => inr unit | inr y => inl unit)";
    let swap = r"(\p^v. (prr p, prl p))";
    let sources = vec![
        "unit".to_string(),
        "inl unit".into(),
        "inr (inl unit)".into(),
        "(unit, unit)".into(),
        "prl (unit, inr unit)".into(),
        "prr (inl unit, (unit, unit))".into(),
        "prl (prr (unit, (inl unit, unit)))".into(),
        r"\x^v. x".into(),
        r"inl (\x^v. x)".into(),
        r"((\x^v. x), unit)".into(),
        r"(\x^v. x) unit".into(),
        r"(\x^v. (x, x)) unit".into(),
        r"(\x^v. (x, (x, x))) (inl unit)".into(),
        r"(\x^v. inr (inl x)) (prr (unit, unit))".into(),
        r"(\x^v. \y^w. (x, y)) unit (inl unit)".into(),
        r"(\x^v. \y^w. y) unit unit".into(),
        r"(\t^v. prl t) ((\x^v. (x, x)) (inr unit))".into(),
        format!("{swap} (unit, inl unit)"),
        format!("{not} (inl unit)"),
        format!("{not} ({not} (inr unit))"),
        "case inl unit of inl a => a | inr b => unit".into(),
        "case inr (unit, unit) of inl a => inl a | inr b => inr (prl b)".into(),
        "case inl (inr unit) of inl a => (case a of inl c => c | inr d => d) | inr b => unit"
            .into(),
        r"(\x^v. case x of inl a => (a, a) | inr b => (b, b)) (inr unit)".into(),
        "case inr (inl unit) of inl a => inl unit | inr b => (case b of inl c => inr c | inr d => inl d)"
            .into(),
        format!("rec {not} {} (inl unit)", encode_nat(3)),
        format!("rec {not} {} (inr unit)", encode_nat(0)),
        format!("rec (\\x^v. x) {} unit", encode_nat(2)),
        format!("rec {swap} {} (inl unit, inr unit)", encode_nat(5)),
        format!(
            "rec (\\n^v. rec {not} {} n) {} (inl unit)",
            encode_nat(2),
            encode_nat(3)
        ),
        format!("case inl unit of inl a => rec {not} {} (inl a) | inr b => inr b", encode_nat(2)),
        format!("rec (\\b^v. case b of inl x => inr x | inr y => inl y) {} (inl unit)", encode_nat(4)),
        format!("prl (rec {swap} {} (inl unit, inr unit), unit)", encode_nat(1)),
    ];
    sources
        .iter()
        .map(|s| parse_term(s).unwrap_or_else(|e| panic!("{s}: {e}")))
        .collect()
}

fn rules_of(r: &CheckReport, seen: &mut std::collections::BTreeSet<&'static str>) {
    for s in &r.rule_trace {
        seen.insert(s.rule);
    }
}

fn bound_soundness() -> Result<String, String> {
    let hand = handwritten_terms();
    ensure(hand.len() >= 30, || {
        format!("only {} handwritten terms", hand.len())
    })?;
    let mut rules = std::collections::BTreeSet::new();
    let mut corpus = Vec::new();
    for t in hand {
        let r = checked(&t)?;
        rules_of(&r, &mut rules);
        corpus.push((t, r));
    }
    let hand_count = corpus.len();
    for (t, r) in checked_corpus(2026, 500) {
        rules_of(&r, &mut rules);
        corpus.push((t, r));
    }
    let expected = [
        "abs", "app", "case", "inl", "inr", "pair", "prl", "prr", "rec", "unit", "var",
    ];
    ensure(expected.iter().all(|r| rules.contains(r)), || {
        format!("rules exercised: {rules:?}")
    })?;
    for (t, r) in &corpus {
        let v = verify_bounds(t, r, 1_000_000).map_err(|e| format!("{t}: {e}"))?;
        ensure(v.ok, || {
            format!(
                "{t}: cost {} vs alpha {}, depth {} vs beta {}",
                v.measured_cost, v.alpha_bound, v.measured_depth, v.beta_bound
            )
        })?;
    }
    Ok(format!(
        "{hand_count} handwritten + {} generated terms within bounds",
        corpus.len() - hand_count
    ))
}

// 2

fn simplifier_table() -> Result<String, String> {
    let v = |s: &str| BoundExpr::var(s);
    let lit = BoundExpr::lit;
    let pow = |b: BoundExpr, e: u64| BoundExpr::pow(b, lit(e));
    let mut laws: Vec<(&str, BoundExpr, BoundExpr, bool)> = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            for e in 1..=3u64 {
                for f in e..=3 {
                    // (1) a*x^e + b*x^f <= (a+b)*x^f
                    laws.push((
                        "1",
                        lit(a) * pow(v("x"), e) + lit(b) * pow(v("x"), f),
                        lit(a + b) * pow(v("x"), f),
                        false,
                    ));
                    for g in 1..=3u64 {
                        for h in g..=3 {
                            // (2) a*x^e*y^g <= a*x^f*y^h
                            laws.push((
                                "2",
                                lit(a) * pow(v("x"), e) * pow(v("y"), g),
                                lit(a) * pow(v("x"), f) * pow(v("y"), h),
                                false,
                            ));
                        }
                    }
                }
            }
            // (3) iter(e; g; x) <= iter(f; h; x) for pointwise e <= f, g <= h
            let bodies = [
                (v("x") + lit(a), v("x") + lit(a + b)),
                (lit(a) * v("x"), lit(a + b) * v("x")),
                (v("x") + lit(a), lit(a + 1) * v("x")),
            ];
            for (e, f) in bodies {
                for (g, h) in [(v("y"), v("y") + lit(b)), (lit(a), v("y") + lit(a))] {
                    laws.push((
                        "3",
                        BoundExpr::iter(e.clone(), g, "x"),
                        BoundExpr::iter(f.clone(), h, "x"),
                        false,
                    ));
                }
            }
            for e in [v("y"), lit(b)] {
                // (4) iter(a*x; e; x) = a^e*x
                laws.push((
                    "4",
                    BoundExpr::iter(lit(a) * v("x"), e.clone(), "x"),
                    BoundExpr::pow(lit(a), e.clone()) * v("x"),
                    true,
                ));
                // (5) iter(x+a; e; x) = x+a*e
                laws.push((
                    "5",
                    BoundExpr::iter(v("x") + lit(a), e.clone(), "x"),
                    v("x") + lit(a) * e,
                    true,
                ));
            }
        }
        for g in [v("y"), lit(1), lit(2), lit(3)] {
            // (6) iter(x^e; g; x) = x^(e^g)
            laws.push((
                "6",
                BoundExpr::iter(pow(v("x"), a), g.clone(), "x"),
                BoundExpr::pow(v("x"), BoundExpr::pow(lit(a), g)),
                true,
            ));
        }
    }
    let mut valuations = 0u64;
    for (rule, lhs, rhs, equal) in &laws {
        let mode = if *equal {
            SimplifyMode::Exact
        } else {
            SimplifyMode::Loosen
        };
        let simplified = simplify(lhs, mode).map_err(|e| format!("rule {rule}: {lhs}: {e}"))?;
        for x in 1..=4u64 {
            for y in 1..=4u64 {
                valuations += 1;
                let val = Valuation::from_pairs([("x", x), ("y", y)]);
                let ev = |e: &BoundExpr| -> Result<BigUint, String> {
                    eval_bound(e, &val).map_err(|err| format!("rule {rule}: {e} at {val}: {err}"))
                };
                let (l, r, s) = (ev(lhs)?, ev(rhs)?, ev(&simplified)?);
                let holds = if *equal {
                    l == r && s == l
                } else {
                    l <= r && l <= s
                };
                ensure(holds, || {
                    format!("rule {rule} fails: {lhs} = {l}, {rhs} = {r}, simplified {simplified} = {s} at {val}")
                })?;
            }
        }
    }
    Ok(format!(
        "{} law instances, {valuations} valuations, 0 violations",
        laws.len()
    ))
}

// 3

fn consistency_probe() -> Result<String, String> {
    let (found, tried) = search_for_bottom(7);
    match found {
        None => Ok(format!(
            "no term of type Bot among {tried} closed terms of size <= 7"
        )),
        Some(t) => Err(format!("{t} has type Bot")),
    }
}

// 4

fn loop_expressivity() -> Result<String, String> {
    let programs: [(&str, Arith); 2] = [
        (include_str!("../data/add.loop"), |x, y| x + y),
        (include_str!("../data/mul.loop"), |x, y| x * y),
    ];
    let mut runs = 0;
    for (src, oracle) in programs {
        let prog = parse_loop_program(src).map_err(|e| e.to_string())?;
        let compiled = compile_loop(&prog, DEFAULT_CAPACITY).map_err(|e| e.to_string())?;
        for x in 0..=5 {
            for y in 0..=5 {
                let applied = compiled.apply(&[x, y]).map_err(|e| e.to_string())?;
                let report = checked(&applied)?;
                let v = verify_bounds(&applied, &report, 1_000_000).map_err(|e| e.to_string())?;
                ensure(v.ok, || {
                    format!("{}({x}, {y}) exceeds its bounds", prog.name)
                })?;
                let nf = normalize(&applied, 1_000_000)
                    .map_err(|e| e.to_string())?
                    .normal_form;
                let got = decode_nat(&nf).map_err(|e| e.to_string())?;
                ensure(got == oracle(x, y), || {
                    format!("{}({x}, {y}) = {got}, expected {}", prog.name, oracle(x, y))
                })?;
                runs += 1;
            }
        }
    }
    Ok(format!(
        "{runs} runs agree with arithmetic and pass bound verification"
    ))
}

// 5

fn tm_emulation() -> Result<String, String> {
    let tm = parse_tm(include_str!("../data/parity.tm")).map_err(|e| e.to_string())?;
    let mut samples: Vec<(usize, f64, f64)> = Vec::new();
    for len in 0..=6usize {
        for bits in 0..(1u32 << len) {
            let word: String = (0..len)
                .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            let input = tm.input_from_str(&word);
            let (want, steps) = run_tm_direct(&tm, &input, 1000).map_err(|e| e.to_string())?;
            let compiled = compile_tm(&tm, &input, len as u64 + 1).map_err(|e| e.to_string())?;
            let trace = normalize(&compiled.term, 10_000_000).map_err(|e| e.to_string())?;
            let got =
                decode_tm_config(&tm, &compiled, &trace.normal_form).map_err(|e| e.to_string())?;
            ensure(got == want, || {
                format!("input {word:?}: compiled {got:?}, direct {want:?}")
            })?;
            samples.push((len, steps as f64, trace.total_cost as f64));
        }
    }
    // cost ~ c * (ceil(lg 3) + ceil(lg 2)) * steps + c0
    let per_step = 3.0;
    let fit: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.0 <= 3)
        .map(|s| (per_step * s.1, s.2))
        .collect();
    let n = fit.len() as f64;
    let (sx, sy) = fit.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / n, sy / n);
    let sxx: f64 = fit.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let c = sxy / sxx;
    let c0 = my - c * mx;
    let mut worst: f64 = 1.0;
    for s in samples.iter().filter(|s| s.0 >= 4) {
        let predicted = c * per_step * s.1 + c0;
        let ratio = (s.2 / predicted).max(predicted / s.2);
        worst = worst.max(ratio);
        ensure(ratio <= 2.0, || {
            format!("length {}: cost {} vs predicted {predicted:.1}", s.0, s.2)
        })?;
    }
    Ok(format!(
        "{} inputs agree; c = {c:.3}, c0 = {c0:.2}, worst ratio on lengths 4-6 {worst:.3}",
        samples.len()
    ))
}

// 6

/// Arrow bounds dropped; unsolved type variables kept as names.
fn erase(t: &Type) -> Type {
    match t {
        Type::Sum(a, b) => Type::sum(erase(a), erase(b)),
        Type::Prod(a, b) => Type::prod(erase(a), erase(b)),
        Type::Arrow {
            domain, codomain, ..
        } => Type::arrow(
            erase(domain),
            "v",
            BoundExpr::one(),
            BoundExpr::one(),
            erase(codomain),
        ),
        other => other.clone(),
    }
}

/// Whether `specific` is an instance of `general`, reading type variables
/// of `general` as placeholders.
fn instance_of(general: &Type, specific: &Type, sub: &mut HashMap<String, Type>) -> bool {
    match (general, specific) {
        (Type::TVar(x), _) => match sub.get(x) {
            Some(t) => t == specific,
            None => {
                sub.insert(x.clone(), specific.clone());
                true
            }
        },
        (Type::Sum(a, b), Type::Sum(c, d)) | (Type::Prod(a, b), Type::Prod(c, d)) => {
            instance_of(a, c, sub) && instance_of(b, d, sub)
        }
        (
            Type::Arrow {
                domain: a,
                codomain: b,
                ..
            },
            Type::Arrow {
                domain: c,
                codomain: d,
                ..
            },
        ) => instance_of(a, c, sub) && instance_of(b, d, sub),
        _ => general == specific,
    }
}

fn subject_reduction() -> Result<String, String> {
    let mut steps = 0;
    let mut corpus: Vec<(Term, CheckReport)> = handwritten_terms()
        .into_iter()
        .map(|t| checked(&t).map(|r| (t, r)))
        .collect::<Result<_, _>>()?;
    corpus.extend(checked_corpus(606, 500));
    for (t, r) in &corpus {
        let ty = erase(r.ty());
        let mut cur = t.clone();
        for _ in 0..10_000 {
            let Some(next) = step(&cur).map_err(|e| format!("{t}: {e}"))? else {
                break;
            };
            cur = next.term;
            steps += 1;
            let reduct = infer(&Context::new(), &cur).map_err(|e| format!("{t} -> {cur}: {e}"))?;
            ensure(!reduct.is_invalid(), || format!("{t} -> {cur}: invalid"))?;
            let rty = erase(reduct.ty());
            ensure(instance_of(&rty, &ty, &mut HashMap::new()), || {
                format!("{t} : {ty} reduces to {cur} : {rty}")
            })?;
        }
    }
    Ok(format!(
        "{} terms, {steps} reduction steps, type preserved at each",
        corpus.len()
    ))
}

// 7

fn quotation() -> Result<String, String> {
    let corpus = checked_corpus(7007, 1000);
    let env = DeBruijnMap::new();
    let mut terms: HashMap<String, Term> = HashMap::new();
    let mut types: HashMap<String, Type> = HashMap::new();
    let mut bounds: HashMap<String, BoundExpr> = HashMap::new();
    for (t, r) in &corpus {
        let qt = quote_term(t, &env).map_err(|e| format!("{t}: {e}"))?;
        let qty = quote_type(r.ty(), &env).map_err(|e| format!("{}: {e}", r.ty()))?;
        let qb = quote_bound(r.alpha(), &env).map_err(|e| format!("{}: {e}", r.alpha()))?;
        for q in [&qt, &qty, &qb] {
            checked(q)?;
        }
        if let Some(prev) = terms.insert(qt.to_string(), t.clone()) {
            ensure(alpha_eq(&prev, t), || {
                format!("{prev} and {t} share a quotation")
            })?;
        }
        if let Some(prev) = types.insert(qty.to_string(), r.ty().clone()) {
            ensure(canonical(&prev, 0) == canonical(r.ty(), 0), || {
                format!("types {prev} and {} share a quotation", r.ty())
            })?;
        }
        if let Some(prev) = bounds.insert(qb.to_string(), r.alpha().clone()) {
            ensure(prev == *r.alpha(), || {
                format!("bounds {prev} and {} share a quotation", r.alpha())
            })?;
        }
        let back = parse_term(&t.to_string()).map_err(|e| format!("{t}: {e}"))?;
        ensure(back == *t, || format!("term roundtrip: {t} became {back}"))?;
        let ty_back = parse_type(&r.ty().to_string()).map_err(|e| format!("{}: {e}", r.ty()))?;
        ensure(ty_back == *r.ty(), || {
            format!("type roundtrip: {} became {ty_back}", r.ty())
        })?;
        let b_back =
            parse_bound(&r.alpha().to_string()).map_err(|e| format!("{}: {e}", r.alpha()))?;
        ensure(b_back == *r.alpha(), || {
            format!("bound roundtrip: {} became {b_back}", r.alpha())
        })?;
    }
    Ok(format!(
        "{} samples: {} distinct terms, {} types, {} bounds; all quotations check; roundtrips hold",
        corpus.len(),
        terms.len(),
        types.len(),
        bounds.len()
    ))
}

/// Renames arrow size variables by nesting depth.
fn canonical(t: &Type, depth: usize) -> Type {
    match t {
        Type::Sum(a, b) => Type::sum(canonical(a, depth), canonical(b, depth)),
        Type::Prod(a, b) => Type::prod(canonical(a, depth), canonical(b, depth)),
        Type::Arrow {
            domain,
            size_var,
            alpha,
            beta,
            codomain,
        } => {
            let fresh = SizeVar::new(format!("#{depth}"));
            let to = BoundExpr::Var(fresh.clone());
            Type::arrow(
                canonical(domain, depth + 1),
                fresh.clone(),
                alpha.substitute(size_var, &to),
                beta.substitute(size_var, &to),
                canonical(&codomain.instantiate_bounds(size_var, &to), depth + 1),
            )
        }
        other => other.clone(),
    }
}

// 8

fn count_values(ty: &Type, d: u64) -> u128 {
    if d == 0 {
        return 0;
    }
    match ty {
        Type::Unit => 1,
        Type::Sum(a, b) => count_values(a, d - 1) + count_values(b, d - 1),
        Type::Prod(a, b) => count_values(a, d - 1) * count_values(b, d - 1),
        _ => 0,
    }
}

fn random_first_order(rng: &mut StdRng, depth: u32) -> Type {
    if depth == 0 || rng.gen_bool(0.3) {
        return Type::Unit;
    }
    let a = random_first_order(rng, depth - 1);
    let b = random_first_order(rng, depth - 1);
    if rng.gen_bool(0.5) {
        Type::sum(a, b)
    } else {
        Type::prod(a, b)
    }
}

fn is_left(t: &Term) -> bool {
    matches!(t, Term::Inl(_))
}

fn decidability() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(88);
    let mut total = 0u128;
    for _ in 0..20 {
        let ty = random_first_order(&mut rng, 3);
        let d = rng.gen_range(1..=4);
        let got = enumerate_inhabitants(&ty, d)
            .map_err(|e| e.to_string())?
            .len() as u128;
        let want = count_values(&ty, d);
        ensure(got == want, || {
            format!("{ty} at depth {d}: {got} values, expected {want}")
        })?;
        total += got;
    }

    let bool2 = "Unit + Unit";
    let pair = "(Unit + Unit) * (Unit + Unit)";
    let components = |t: &Term| match t {
        Term::Pair(a, b) => (is_left(a), is_left(b)),
        _ => panic!("not a pair: {t}"),
    };
    let nat = unfold_nat_type(3).to_string();
    let even = r"\n^v. case n of inl a => inl unit | inr m => (case m of inl b => inr unit | inr k => (case k of inl c => inl unit | inr e => inr unit))";
    let below_three = r"\n^v. case n of inl a => inl unit | inr m => (case m of inl b => inl unit | inr k => (case k of inl c => inl unit | inr e => inr unit))";
    let preds: Vec<(&str, String, u64, Oracle)> = vec![
        (r"\b^v. inl unit", bool2.into(), 2, Box::new(|_| true)),
        (
            r"\b^v. case b of inl x => inl unit | inr y => inr unit",
            bool2.into(),
            2,
            Box::new(is_left),
        ),
        (
            r"\b^v. case b of inl x => inl unit | inr y => inl unit",
            bool2.into(),
            2,
            Box::new(|_| true),
        ),
        (r"\u^v. inl u", "Unit".into(), 1, Box::new(|_| true)),
        (
            r"\b^v. (\f^w. f b) (\x^u. x)",
            bool2.into(),
            2,
            Box::new(is_left),
        ),
        (
            r"\p^v. case prl p of inl a => (case prr p of inl c => inl unit | inr d => inr unit) | inr b => (case prr p of inl c => inr unit | inr d => inl unit)",
            pair.into(),
            3,
            Box::new(move |t| {
                let (a, b) = components(t);
                a == b
            }),
        ),
        (
            r"\p^v. case prl p of inl a => inl unit | inr b => (case prr p of inl c => inl unit | inr d => inr unit)",
            pair.into(),
            3,
            Box::new(move |t| {
                let (a, b) = components(t);
                a || b
            }),
        ),
        (
            r"\p^v. case prl p of inl a => (case prr p of inl c => inl unit | inr d => inr unit) | inr b => inl unit",
            pair.into(),
            3,
            Box::new(move |t| {
                let (a, b) = components(t);
                !a || b
            }),
        ),
        (
            even,
            nat.clone(),
            4,
            Box::new(|t| decode_nat(t).map(|n| n % 2 == 0).unwrap_or(false)),
        ),
        (
            below_three,
            nat.clone(),
            4,
            Box::new(|t| decode_nat(t).is_ok()),
        ),
    ];
    let mut holding = 0;
    for (src, domain, depth, oracle) in &preds {
        let pred = parse_term(src).map_err(|e| format!("{src}: {e}"))?;
        checked(&pred)?;
        let domain = parse_type(domain).map_err(|e| e.to_string())?;
        let decision =
            decide_proposition(&pred, &domain, *depth, 10_000).map_err(|e| e.to_string())?;
        let values = enumerate_inhabitants(&domain, *depth).map_err(|e| e.to_string())?;
        let first_false = values.iter().find(|v| !oracle(v));
        ensure(decision.holds == first_false.is_none(), || {
            format!(
                "{src}: decided {}, brute force says {}",
                decision.holds,
                first_false.is_none()
            )
        })?;
        ensure(decision.counterexample.as_ref() == first_false, || {
            format!(
                "{src}: counterexample {:?}, brute force {first_false:?}",
                decision.counterexample
            )
        })?;
        if decision.holds {
            holding += 1;
        }
    }
    Ok(format!(
        "20 types ({total} values) match the counting formula; {} predicates match brute force ({holding} hold)",
        preds.len()
    ))
}
