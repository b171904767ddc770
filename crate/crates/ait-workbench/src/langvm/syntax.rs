use std::fmt;

use serde::{Deserialize, Serialize};

/// `Y` is the output register, `X_i` the inputs and `Z_i` locals; indices
/// start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variable {
    Y,
    X(u64),
    Z(u64),
}

impl Variable {
    /// `#Y = 1`, `#X_i = 2i`, `#Z_i = 2i + 1`.
    pub fn number(&self) -> u64 {
        match *self {
            Variable::Y => 1,
            Variable::X(i) => 2 * i,
            Variable::Z(i) => 2 * i + 1,
        }
    }

    pub fn from_number(n: u64) -> Option<Variable> {
        match n {
            0 => None,
            1 => Some(Variable::Y),
            n if n % 2 == 0 => Some(Variable::X(n / 2)),
            n => Some(Variable::Z(n / 2)),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::Y => write!(f, "Y"),
            Variable::X(i) => write!(f, "X{i}"),
            Variable::Z(i) => write!(f, "Z{i}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LabelLetter {
    A,
    B,
    C,
    E,
}

impl LabelLetter {
    const ALL: [LabelLetter; 4] = [LabelLetter::A, LabelLetter::B, LabelLetter::C, LabelLetter::E];

    fn offset(self) -> u64 {
        match self {
            LabelLetter::A => 1,
            LabelLetter::B => 2,
            LabelLetter::C => 3,
            LabelLetter::E => 4,
        }
    }

    pub fn from_char(c: char) -> Option<LabelLetter> {
        match c {
            'A' => Some(LabelLetter::A),
            'B' => Some(LabelLetter::B),
            'C' => Some(LabelLetter::C),
            'E' => Some(LabelLetter::E),
            _ => None,
        }
    }
}

/// Labels run `A1 B1 C1 E1 A2 B2 ...` and are numbered from 1 in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub letter: LabelLetter,
    pub index: u64,
}

impl Label {
    pub fn new(letter: LabelLetter, index: u64) -> Self {
        assert!(index >= 1, "label indices start at 1");
        Label { letter, index }
    }

    pub fn number(&self) -> u64 {
        4 * (self.index - 1) + self.letter.offset()
    }

    pub fn from_number(n: u64) -> Option<Label> {
        if n == 0 {
            return None;
        }
        let letter = LabelLetter::ALL[((n - 1) % 4) as usize];
        Some(Label { letter, index: (n - 1) / 4 + 1 })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.letter {
            LabelLetter::A => 'A',
            LabelLetter::B => 'B',
            LabelLetter::C => 'C',
            LabelLetter::E => 'E',
        };
        if self.index == 1 {
            write!(f, "{c}")
        } else {
            write!(f, "{c}{}", self.index)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Body {
    /// `V <- V`
    Nop(Variable),
    /// `V <- V + 1`
    Inc(Variable),
    /// `V <- V - 1`, which leaves 0 at 0
    Dec(Variable),
    /// `IF V != 0 GOTO L`
    IfGoto(Variable, Label),
}

impl Body {
    pub fn variable(&self) -> Variable {
        match *self {
            Body::Nop(v) | Body::Inc(v) | Body::Dec(v) | Body::IfGoto(v, _) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instruction {
    pub label: Option<Label>,
    pub body: Body,
}

impl Instruction {
    pub fn new(label: Option<Label>, body: Body) -> Self {
        Instruction { label, body }
    }

    /// Instruction number 0: the unlabeled `Y <- Y`.
    pub fn is_zero(&self) -> bool {
        self.label.is_none() && self.body == Body::Nop(Variable::Y)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(l) = self.label {
            write!(f, "[{l}] ")?;
        }
        match self.body {
            Body::Nop(v) => write!(f, "{v} <- {v}"),
            Body::Inc(v) => write!(f, "{v} <- {v} + 1"),
            Body::Dec(v) => write!(f, "{v} <- {v} - 1"),
            Body::IfGoto(v, l) => write!(f, "IF {v} != 0 GOTO {l}"),
        }
    }
}

/// A finite instruction list that does not end in instruction 0, so that the
/// prime-power program number is injective.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Program {
    instructions: Vec<Instruction>,
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Result<Self, String> {
        if instructions.last().is_some_and(Instruction::is_zero) {
            return Err("a program may not end with the unlabeled instruction Y <- Y".into());
        }
        Ok(Program { instructions })
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.instructions {
            writeln!(f, "{i}")?;
        }
        Ok(())
    }
}
