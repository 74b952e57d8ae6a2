//! Lists the values of a first-order type and decides a predicate over
//! them by running it on each.
//!
//!     cargo run --example enumerate

use cufl::emulation::{decide_proposition, enumerate_inhabitants};
use cufl::syntax::{parse_term, parse_type};

fn main() {
    let ty = parse_type("(Unit + Unit) * (Unit + Unit)").expect("type parses");
    let values = enumerate_inhabitants(&ty, 3).expect("first-order type");
    println!("{} values of {ty}:", values.len());
    for v in &values {
        println!("  {v}");
    }
    let predicates = [
        (
            "left or right",
            r"\p^v. case prl p of inl a => inl unit | inr b => inl unit",
        ),
        (
            "first is left or second is left",
            r"\p^v. case prl p of inl a => inl unit | inr b => (case prr p of inl c => inl unit | inr d => inr unit)",
        ),
    ];
    for (name, src) in predicates {
        let pred = parse_term(src).expect("predicate parses");
        let d = decide_proposition(&pred, &ty, 3, 1000).expect("predicate runs");
        match d.counterexample {
            None => println!("{name}: holds on all {} inputs", d.inputs_checked),
            Some(c) => println!("{name}: fails on {c}"),
        }
    }
}
