//! Checks random well-typed closed terms, runs them and compares the
//! measured cost and result depth with the inferred bounds.
//!
//!     cargo run --example soundness -- 500 [max-depth]

use std::collections::BTreeMap;

use cufl::evaluator::verify_bounds;
use cufl::generate::{GenConfig, TermGenerator};

fn main() {
    let count = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(500);
    let max_depth = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(GenConfig::default().max_depth);
    let mut gen = TermGenerator::with_config(
        1,
        GenConfig {
            max_depth,
            ..GenConfig::default()
        },
    );
    let corpus: Vec<_> = (0..count).map(|_| gen.checked_term()).collect();
    let mut failures = 0;
    let mut rules: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, (term, report)) in corpus.iter().enumerate() {
        for step in &report.rule_trace {
            *rules.entry(step.rule).or_default() += 1;
        }
        match verify_bounds(term, report, 1_000_000) {
            Ok(v) if v.ok => {}
            Ok(v) => {
                failures += 1;
                println!(
                    "#{i} {term}\n  cost {} > alpha {} or depth {} > beta {}",
                    v.measured_cost, v.alpha_bound, v.measured_depth, v.beta_bound
                );
            }
            Err(e) => {
                failures += 1;
                println!("#{i} {term}\n  {e}");
            }
        }
    }
    println!("rule uses: {rules:?}");
    println!("{} terms, {failures} bound violations", count);
}
