//! Compiles addition and multiplication loop programs, runs them on small
//! inputs and shows the measured cost next to the inferred bound.
//!
//!     cargo run --example loop_programs

use cufl::bounds::{eval_bound, Valuation};
use cufl::emulation::{compile_loop, parse_loop_program, run_loop_direct, DEFAULT_CAPACITY};
use cufl::evaluator::normalize;

fn main() {
    for src in [
        include_str!("../data/add.loop"),
        include_str!("../data/mul.loop"),
    ] {
        let prog = parse_loop_program(src).expect("program parses");
        let compiled = compile_loop(&prog, DEFAULT_CAPACITY).expect("program compiles");
        println!("{}: alpha = {}", prog.name, compiled.alpha);
        for (x, y) in [(0, 0), (2, 3), (4, 5)] {
            let applied = compiled.apply(&[x, y]).expect("inputs fit");
            let trace = normalize(&applied, 10_000_000).expect("normalises");
            let got = compiled.decode(&trace.normal_form).expect("numeral result");
            let want = run_loop_direct(&prog, &[x, y]).expect("direct run");
            // argument depth is the numeral depth n + 2
            let val = Valuation::from_pairs([("x", x + 2), ("y", y + 2)]);
            let bound = eval_bound(&compiled.alpha, &val).expect("bound evaluates");
            println!(
                "  {}({x}, {y}) = {got} (direct {want}), cost {} <= {bound}",
                prog.name, trace.total_cost
            );
        }
    }
}
