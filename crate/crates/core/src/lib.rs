//! Proof checker and cost-accounted interpreter for CUFL, an intuitionistic
//! propositional logic whose judgements carry explicit bounds on evaluation
//! cost (`alpha`) and normal-form depth (`beta`).
//!
//! The pipeline is: [`syntax`] parses terms and types, [`checker`] infers
//! bounded judgements, [`evaluator`] normalises terms while counting cost,
//! and [`evaluator::verify_bounds`] compares the two. [`encoder`] quotes
//! bounds, types and terms as data; [`emulation`] compiles loop programs
//! and Turing machines into terms.

#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod bounds;
pub mod checker;
pub mod cli;
pub mod emulation;
pub mod encoder;
pub mod evaluator;
pub mod generate;
pub mod syntax;
