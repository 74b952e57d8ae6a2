//! Simplifies bound expressions and compares them.
//!
//!     cargo run --example bounds -- '2*x^2 + 3*x^3' '5*x^3'

use cufl::bounds::{leq_bounds, simplify, LeqVerdict, SimplifyMode};
use cufl::syntax::parse_bound;

fn main() {
    let mut args = std::env::args().skip(1);
    let lhs = args.next().unwrap_or_else(|| "iter(x + 2; 3; x)".into());
    let rhs = args.next().unwrap_or_else(|| "x * 7".into());
    let (l, r) = (
        parse_bound(&lhs).expect("left bound parses"),
        parse_bound(&rhs).expect("right bound parses"),
    );
    for (name, e) in [("lhs", &l), ("rhs", &r)] {
        println!("{name}: {e}");
        println!(
            "  exact:  {}",
            simplify(e, SimplifyMode::Exact).expect("simplifies")
        );
        println!(
            "  loosen: {}",
            simplify(e, SimplifyMode::Loosen).expect("simplifies")
        );
    }
    match leq_bounds(&l, &r, 4) {
        LeqVerdict::Proven => println!("lhs <= rhs proven"),
        LeqVerdict::Refuted(w) => println!("lhs > rhs at {w}"),
        LeqVerdict::Unknown { samples_checked } => {
            println!("undecided after {samples_checked} samples")
        }
    }
}
