//! Checks every definition of a source file and prints the judgements.
//!
//!     cargo run --example check_file -- data/basics.cufl

use cufl::checker::Checker;
use cufl::syntax::{parse_file, Item};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/basics.cufl").into());
    let text = std::fs::read_to_string(&path).expect("readable source file");
    let file = match parse_file(&text) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{path}:{e}");
            std::process::exit(1);
        }
    };
    let mut checker = Checker::new();
    for item in &file.items {
        if let Item::Def { name, ty, term, .. } = item {
            match checker.add_def(name, ty, term) {
                Ok(report) => {
                    println!("{name}: {report}");
                    for step in &report.rule_trace {
                        println!(
                            "    {:<5} alpha = {}, beta = {}",
                            step.rule, step.alpha, step.beta
                        );
                    }
                }
                Err(e) => println!("{name}: {e}"),
            }
        }
    }
}
