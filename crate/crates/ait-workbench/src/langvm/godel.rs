use num_traits::ToPrimitive;

use super::syntax::{Body, Instruction, Label, Program, Variable};
use crate::codec::{encode_list, pair, pair_u64, try_decode_list, unpair, Nat};

/// `#(I) = <a, <b, c>>` with `a` the label number (0 if unlabeled), `b` the
/// opcode (`#L + 2` for a jump) and `c = #V - 1`.
pub fn instruction_number(i: &Instruction) -> Nat {
    let a = i.label.map_or(0, |l| l.number());
    let (b, v) = match i.body {
        Body::Nop(v) => (0, v),
        Body::Inc(v) => (1, v),
        Body::Dec(v) => (2, v),
        Body::IfGoto(v, l) => (l.number() + 2, v),
    };
    pair(&Nat::from(a), &pair_u64(b, v.number() - 1))
}

/// Total inverse of [`instruction_number`].
///
/// # Panics
/// If an index does not fit in a `u64`.
pub fn instruction_from_number(n: &Nat) -> Instruction {
    let (a, w) = unpair(n);
    let (b, c) = unpair(&w);
    let a = a.to_u64().expect("label number fits in u64");
    let b = b.to_u64().expect("opcode fits in u64");
    let c = c.to_u64().and_then(|c| c.checked_add(1)).expect("variable number fits in u64");
    let v = Variable::from_number(c).expect("c + 1 >= 1");
    let body = match b {
        0 => Body::Nop(v),
        1 => Body::Inc(v),
        2 => Body::Dec(v),
        b => Body::IfGoto(v, Label::from_number(b - 2).expect("b >= 3")),
    };
    Instruction::new(Label::from_number(a), body)
}

pub fn program_number(p: &Program) -> Nat {
    let xs: Vec<Nat> = p.instructions().iter().map(instruction_number).collect();
    encode_list(&xs)
}

/// Every natural decodes to exactly one program, unless its largest prime
/// factor is beyond the indexing cap of the list decoder.
pub fn try_program_from_number(n: &Nat) -> Option<Program> {
    let xs = try_decode_list(n)?;
    let instrs = xs.iter().map(instruction_from_number).collect();
    // decode_list strips trailing zeros, so the last instruction is never 0
    Some(Program::new(instrs).expect("decoded program cannot end in instruction 0"))
}

/// # Panics
/// See [`try_program_from_number`].
pub fn program_from_number(n: &Nat) -> Program {
    try_program_from_number(n).expect("program number has a prime factor beyond the decoding cap")
}
