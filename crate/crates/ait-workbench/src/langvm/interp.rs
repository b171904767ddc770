use std::collections::HashMap;

use num_traits::Zero;

use super::godel::program_from_number;
use super::syntax::{Body, Program, Variable};
use crate::codec::Nat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Halted { output: Nat, steps: u64 },
    OutOfBudget,
}

impl Outcome {
    pub fn halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }

    pub fn output(&self) -> Option<&Nat> {
        match self {
            Outcome::Halted { output, .. } => Some(output),
            Outcome::OutOfBudget => None,
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Nop,
    Inc(usize),
    Dec(usize),
    // register, jump target (None means a label with no instruction: halt)
    Jnz(usize, Option<usize>),
}

/// Runs `p` with `X_i = inputs[i - 1]` and every other register 0. One
/// executed instruction is one step; a run that halts after exactly
/// `budget` steps is reported as halted.
pub fn run(p: &Program, inputs: &[Nat], budget: u64) -> Outcome {
    let mut slots: HashMap<Variable, usize> = HashMap::new();
    let mut slot = |v: Variable| {
        let n = slots.len();
        *slots.entry(v).or_insert(n)
    };
    slot(Variable::Y);
    let mut first_at = HashMap::new();
    for (k, ins) in p.instructions().iter().enumerate() {
        if let Some(l) = ins.label {
            first_at.entry(l).or_insert(k);
        }
    }
    let ops: Vec<Op> = p
        .instructions()
        .iter()
        .map(|ins| match ins.body {
            Body::Nop(_) => Op::Nop,
            Body::Inc(v) => Op::Inc(slot(v)),
            Body::Dec(v) => Op::Dec(slot(v)),
            Body::IfGoto(v, l) => Op::Jnz(slot(v), first_at.get(&l).copied()),
        })
        .collect();
    let mut regs = vec![Nat::zero(); slots.len()];
    for (i, x) in inputs.iter().enumerate() {
        if let Some(&s) = slots.get(&Variable::X(i as u64 + 1)) {
            regs[s] = x.clone();
        }
    }

    let mut pc = 0usize;
    let mut steps = 0u64;
    loop {
        let Some(op) = ops.get(pc) else {
            return Outcome::Halted { output: regs.swap_remove(0), steps };
        };
        if steps == budget {
            return Outcome::OutOfBudget;
        }
        steps += 1;
        pc += 1;
        match *op {
            Op::Nop => {}
            Op::Inc(r) => regs[r] += 1u32,
            Op::Dec(r) => {
                if !regs[r].is_zero() {
                    regs[r] -= 1u32;
                }
            }
            Op::Jnz(r, target) => {
                if !regs[r].is_zero() {
                    pc = target.unwrap_or(ops.len());
                }
            }
        }
    }
}

/// `STP(inputs, n, t)`: program number `n` halts on `inputs` within `t` steps.
pub fn stp(inputs: &[Nat], program_number: &Nat, t: u64) -> bool {
    run(&program_from_number(program_number), inputs, t).halted()
}
