//! Compiles the parity machine for every input up to length 6, runs the
//! term and compares it with the reference simulator.
//!
//!     cargo run --example tm_emulation

use cufl::emulation::{compile_tm, decode_tm_config, parse_tm, run_tm_direct};
use cufl::evaluator::normalize;

fn main() {
    let tm = parse_tm(include_str!("../data/parity.tm")).expect("bundled machine parses");
    for len in 0..=6u32 {
        let mut costs = Vec::new();
        for bits in 0..(1u32 << len) {
            let word: String = (0..len)
                .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                .collect();
            let input = tm.input_from_str(&word);
            let (want, steps) = run_tm_direct(&tm, &input, 100).expect("parity halts");
            let compiled = compile_tm(&tm, &input, len as u64 + 1).expect("compiles");
            let trace = normalize(&compiled.term, 1_000_000).expect("normalizes");
            let got = decode_tm_config(&tm, &compiled, &trace.normal_form).expect("decodes");
            assert_eq!(got, want, "input {word:?}");
            costs.push((steps, trace.total_cost));
        }
        let max = costs.iter().map(|c| c.1).max().unwrap();
        let min = costs.iter().map(|c| c.1).min().unwrap();
        println!(
            "length {len}: {} inputs agree, steps {}, cost {min}..{max}",
            costs.len(),
            costs[0].0
        );
    }
}
