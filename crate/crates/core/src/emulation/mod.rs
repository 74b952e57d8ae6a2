//! Compilers from bounded loop programs and Turing machines into CUFL,
//! plus enumeration of inhabitants and the consistency probe.

mod enumerate;
mod loops;
mod tm;

use thiserror::Error;

use crate::checker::CheckError;
use crate::encoder::EncodeError;
use crate::evaluator::EvalError;
use crate::syntax::Type;

pub use enumerate::{
    decide_proposition, enumerate_closed_terms, enumerate_inhabitants, search_for_bottom, Decision,
};
pub use loops::{
    compile_loop, parse_loop_program, run_loop_direct, CompiledLoop, LoopExpr, LoopProgram,
    LoopStmt, DEFAULT_CAPACITY,
};
pub use tm::{
    compile_tm, decode_tm_config, parse_tm, run_tm_direct, CompiledTm, Move, TapeConfig, TmSpec,
    Transition,
};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EmulationError {
    #[error("ill-formed loop program: {0}")]
    IllFormedLoop(String),
    #[error("{line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("alphabet or state set must be nonempty")]
    AlphabetTooLarge,
    #[error("machine did not halt within {0} steps")]
    StepLimitExceeded(u64),
    #[error("cannot enumerate inhabitants of {0}")]
    UnsupportedType(Type),
    #[error("value {0} exceeds the numeral capacity {1}")]
    CapacityExceeded(u64, u64),
    #[error("wrong number of arguments: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("unexpected result shape: {0}")]
    Decode(String),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
}
