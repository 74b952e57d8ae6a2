//! Quotes a term, its type and its cost bound as data terms and checks
//! that the quotations are themselves well typed.
//!
//!     cargo run --example quote -- '\x^v. (x, x)'

use cufl::checker::infer;
use cufl::encoder::{quote_bound, quote_term, quote_type, DeBruijnMap};
use cufl::syntax::{parse_term, Context};

fn main() {
    let src = std::env::args()
        .nth(1)
        .unwrap_or_else(|| r"\x^v. (x, x)".into());
    let term = parse_term(&src).expect("term parses");
    let report = infer(&Context::new(), &term).expect("term checks");
    let env = DeBruijnMap::new();
    let quotes = [
        ("term", quote_term(&term, &env)),
        ("type", quote_type(report.ty(), &env)),
        ("alpha", quote_bound(report.alpha(), &env)),
    ];
    println!("{report}");
    for (what, q) in quotes {
        let q = q.expect("quotable");
        let r = infer(&Context::new(), &q).expect("quotation checks");
        println!("{what}: {q}\n  : {}", r.ty());
    }
}
