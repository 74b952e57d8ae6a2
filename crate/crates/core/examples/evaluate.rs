//! Normalises a term, printing each reduction step with its cost, and
//! compares the totals with the inferred bounds.
//!
//!     cargo run --example evaluate -- '(\x^v. (x, x)) (inl unit)'

use cufl::checker::infer;
use cufl::evaluator::{normalize, verify_bounds, DEFAULT_FUEL};
use cufl::syntax::{parse_term, Context};

fn main() {
    let src = std::env::args().nth(1).unwrap_or_else(|| {
        r"rec (\b^v. case b of inl x => inr unit | inr y => inl unit) (inr (inr (inl unit))) (inl unit)"
            .into()
    });
    let term = parse_term(&src).expect("term parses");
    let report = infer(&Context::new(), &term).expect("term checks");
    println!("{report}");
    let trace = normalize(&term, DEFAULT_FUEL).expect("term normalises");
    print!("{trace}");
    println!(
        "normal form {} (depth {}), total cost {}",
        trace.normal_form, trace.normal_depth, trace.total_cost
    );
    let v = verify_bounds(&term, &report, DEFAULT_FUEL).expect("bounds are closed");
    println!(
        "cost {} (bound {}), depth {} (bound {}): {}",
        v.measured_cost,
        v.alpha_bound,
        v.measured_depth,
        v.beta_bound,
        if v.ok {
            "within bounds"
        } else {
            "BOUND VIOLATED"
        }
    );
}
