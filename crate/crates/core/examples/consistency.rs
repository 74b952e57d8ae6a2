//! Searches every closed term up to a size limit for a proof of `Bottom`.
//!
//!     cargo run --example consistency -- 6

use std::time::Instant;

use cufl::emulation::search_for_bottom;

fn main() {
    let max_size = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let start = Instant::now();
    let (found, tried) = search_for_bottom(max_size);
    match found {
        Some(t) => println!("inhabitant of Bottom: {t}"),
        None => println!("no inhabitant of Bottom among {tried} terms of size <= {max_size}"),
    }
    println!("elapsed {:.2?}", start.elapsed());
}
