use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codec::{str_decode, str_encode, unpair, BitString, Nat};
use crate::langvm::{run, try_program_from_number, Outcome, Program};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Prefix,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Prefix => "prefix",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(Mode::Plain),
            "prefix" => Ok(Mode::Prefix),
            _ => Err(format!("unknown mode {s:?} (expected plain or prefix)")),
        }
    }
}

/// Wraps `payload` as `1^k 0`, then `payload.len()` in `k` bits (most
/// significant first), then the payload. `k` is the least width that holds
/// the length.
pub fn prefix_wrap(payload: &BitString) -> BitString {
    let m = payload.len() as u64;
    let k = (64 - m.leading_zeros()) as usize;
    let mut out = BitString::new();
    for _ in 0..k {
        out.push(true);
    }
    out.push(false);
    out.extend_from(&BitString::from_index(k, m));
    out.extend_from(payload);
    out
}

/// Inverse of [`prefix_wrap`] on the whole domain: any `k`-bit length field
/// is accepted, and the string must end exactly where the payload does.
pub fn prefix_unwrap(p: &BitString) -> Option<BitString> {
    let bits = p.bits();
    let k = bits.iter().take_while(|b| **b).count();
    if k >= bits.len() || k > 32 {
        return None;
    }
    let rest = &bits[k + 1..];
    if rest.len() < k {
        return None;
    }
    let m = rest[..k].iter().fold(0usize, |acc, b| (acc << 1) | *b as usize);
    let payload = &rest[k..];
    (payload.len() == m).then(|| BitString::from_bits(payload.to_vec()))
}

/// The reference machine: the payload is read as a natural through `str`,
/// split by `unpair` into a program number `e` and an input `y`, and program
/// `e` runs on `X1 = y`. The output is `str^{-1}(Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalMachine {
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineRun {
    pub input: Nat,
    pub output: BitString,
    pub steps: u64,
}

impl UniversalMachine {
    pub fn new(mode: Mode) -> Self {
        UniversalMachine { mode }
    }

    /// The payload when `p` is in the machine's domain of well-formed inputs.
    pub fn payload(&self, p: &BitString) -> Option<BitString> {
        match self.mode {
            Mode::Plain => Some(p.clone()),
            Mode::Prefix => prefix_unwrap(p),
        }
    }

    /// Runs `p` for at most `budget` steps. `None` if `p` is outside the
    /// domain or does not halt within the budget.
    pub fn run(&self, p: &BitString, budget: u64) -> Option<MachineRun> {
        self.run_with(p, budget, &mut HashMap::new())
    }

    pub(crate) fn run_with(&self, p: &BitString, budget: u64, programs: &mut HashMap<Nat, Option<Program>>) -> Option<MachineRun> {
        let payload = self.payload(p)?;
        let (e, y) = unpair(&str_encode(&payload));
        let prog = programs.entry(e.clone()).or_insert_with(|| try_program_from_number(&e)).as_ref()?;
        match run(prog, std::slice::from_ref(&y), budget) {
            Outcome::Halted { output, steps } => Some(MachineRun { input: y, output: str_decode(&output), steps }),
            Outcome::OutOfBudget => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn wrap_round_trip() {
        for len in 0..9 {
            for x in BitString::all_of_len(len) {
                let w = prefix_wrap(&x);
                assert_eq!(prefix_unwrap(&w), Some(x));
            }
        }
        assert_eq!(prefix_wrap(&b("")), b("0"));
        assert_eq!(prefix_wrap(&b("1")), b("1011"));
    }

    #[test]
    fn prefix_domain_is_prefix_free() {
        let dom: Vec<BitString> = (0..=10)
            .flat_map(BitString::all_of_len)
            .filter(|s| prefix_unwrap(s).is_some())
            .collect();
        for a in &dom {
            for c in &dom {
                assert!(a == c || !a.is_prefix_of(c), "{a} is a prefix of {c}");
            }
        }
    }

    #[test]
    fn empty_payload_outputs_empty() {
        let m = UniversalMachine::new(Mode::Plain);
        // str("") = 0 = <0, 0>: the empty program on input 0
        let r = m.run(&b(""), 10).unwrap();
        assert_eq!(r.output, b(""));
        assert_eq!(r.steps, 0);
    }
}
