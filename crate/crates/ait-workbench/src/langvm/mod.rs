//! A register-machine language with Gödel numbering, its interpreter, and a
//! quadruple Turing machine.

mod godel;
mod interp;
mod parse;
mod syntax;
mod turing;

use thiserror::Error;

pub use godel::{instruction_from_number, instruction_number, program_from_number, program_number, try_program_from_number};
pub use interp::{run, stp, Outcome};
pub use parse::{parse_program, parse_source, Source, SourceLine, Statement};
pub use syntax::{Body, Instruction, Label, LabelLetter, Program, Variable};
pub use turing::{tm_run, Action, Quadruple, TuringMachine};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VmError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("two quadruples apply in state q{state} reading {read}")]
    Nondeterministic { state: u32, read: bool },
}

/// Ready-made program texts.
pub mod stock {
    /// `Y = X1 + X2`, with `Y <- X1` and `Z1 <- X2` written as copies.
    pub const ADDITION: &str = "\
Y <- X1
Z1 <- X2
[B] IF Z1 != 0 GOTO A
GOTO E
[A] Z1 <- Z1 - 1
Y <- Y + 1
GOTO B
";

    /// Never halts on any input with `X1 > 0`; also never halts on 0 since
    /// the first instruction makes `X1` positive.
    pub const FOREVER: &str = "\
[A] X <- X + 1
IF X != 0 GOTO A
";
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::Nat;

    #[test]
    fn addition_adds() {
        let src = parse_source(stock::ADDITION).unwrap();
        assert_eq!(src.lines.len(), 7);
        let p = src.expand().unwrap();
        let out = run(&p, &[Nat::from(3u32), Nat::from(4u32)], 1000);
        assert_eq!(out.output(), Some(&Nat::from(7u32)));
    }

    #[test]
    fn forever_program_number() {
        let p = parse_program(stock::FOREVER).unwrap();
        let expect = Nat::from(2u32).pow(21) * Nat::from(3u32).pow(46) - 1u32;
        assert_eq!(program_number(&p), expect);
        assert_eq!(run(&p, &[Nat::from(0u32)], 10_000), Outcome::OutOfBudget);
    }
}
