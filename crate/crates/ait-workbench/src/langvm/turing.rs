use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::interp::Outcome;
use super::VmError;
use crate::codec::Nat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Left,
    Right,
    /// Write a mark (`true`) or a blank (`false`).
    Write(bool),
}

/// `q_i S a q_l`: in state `q_i` reading `S`, do `a` and move to `q_l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quadruple {
    pub state: u32,
    pub read: bool,
    pub action: Action,
    pub next: u32,
}

/// A deterministic quadruple machine over the alphabet {blank, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TuringMachine {
    quads: Vec<Quadruple>,
}

impl TuringMachine {
    pub fn new(quads: Vec<Quadruple>) -> Result<Self, VmError> {
        let mut seen = HashMap::new();
        for q in &quads {
            if seen.insert((q.state, q.read), ()).is_some() {
                return Err(VmError::Nondeterministic { state: q.state, read: q.read });
            }
        }
        Ok(TuringMachine { quads })
    }

    pub fn quadruples(&self) -> &[Quadruple] {
        &self.quads
    }
}

/// Starts on a tape holding `input + 1` marks, head on the leftmost one, in
/// state `q0`. Halts when no quadruple applies; the output is the number of
/// marks left on the tape.
pub fn tm_run(m: &TuringMachine, input: u64, budget: u64) -> Outcome {
    let table: HashMap<(u32, bool), Quadruple> = m.quads.iter().map(|q| ((q.state, q.read), *q)).collect();
    let mut tape: VecDeque<bool> = std::iter::repeat_n(true, input as usize + 1).collect();
    let mut head = 0usize;
    let mut state = 0u32;
    let mut steps = 0u64;
    loop {
        let Some(q) = table.get(&(state, tape[head])) else {
            let ones = tape.iter().filter(|b| **b).count();
            return Outcome::Halted { output: Nat::from(ones), steps };
        };
        if steps == budget {
            return Outcome::OutOfBudget;
        }
        steps += 1;
        match q.action {
            Action::Write(b) => tape[head] = b,
            Action::Right => {
                head += 1;
                if head == tape.len() {
                    tape.push_back(false);
                }
            }
            Action::Left => {
                if head == 0 {
                    tape.push_front(false);
                } else {
                    head -= 1;
                }
            }
        }
        state = q.next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_machine_counts_the_input() {
        let m = TuringMachine::default();
        assert_eq!(tm_run(&m, 4, 0), Outcome::Halted { output: Nat::from(5u32), steps: 0 });
    }

    #[test]
    fn zero_budget_with_work_to_do() {
        let m = TuringMachine::new(vec![Quadruple { state: 0, read: true, action: Action::Write(false), next: 0 }]).unwrap();
        assert_eq!(tm_run(&m, 2, 0), Outcome::OutOfBudget);
        assert_eq!(tm_run(&m, 2, 1), Outcome::Halted { output: Nat::from(2u32), steps: 1 });
    }

    #[test]
    fn duplicate_quadruples_rejected() {
        let q = Quadruple { state: 0, read: true, action: Action::Right, next: 0 };
        assert!(TuringMachine::new(vec![q, q]).is_err());
    }
}
