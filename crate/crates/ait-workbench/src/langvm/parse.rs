//! Text syntax for register-machine programs.
//!
//! ```text
//! [L] V <- V + 1
//! [L] V <- V - 1
//! [L] V <- V
//! [L] IF V != 0 GOTO L
//! [L] GOTO L          (sugar)
//! [L] V <- W          (sugar, copies W into V)
//! ```
//!
//! `#` starts a comment, `;` separates statements on one line, and `←` / `≠`
//! are accepted for `<-` / `!=`.

use std::collections::BTreeSet;

use super::syntax::{Body, Instruction, Label, LabelLetter, Program, Variable};
use super::VmError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Core(Body),
    Goto(Label),
    Copy { dst: Variable, src: Variable },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceLine {
    pub label: Option<Label>,
    pub statement: Statement,
    pub line: usize,
}

/// A parsed program before sugar is expanded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Source {
    pub lines: Vec<SourceLine>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(u64),
    Arrow,
    Plus,
    Minus,
    Neq,
    LBracket,
    RBracket,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> VmError {
    VmError::Parse { line, column, message: message.into() }
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Lexed>, VmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, width) = match c {
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            '+' => (Tok::Plus, 1),
            '←' => (Tok::Arrow, 1),
            '≠' => (Tok::Neq, 1),
            '<' if chars.get(i + 1) == Some(&'-') => (Tok::Arrow, 2),
            '!' if chars.get(i + 1) == Some(&'=') => (Tok::Neq, 2),
            '-' => (Tok::Minus, 1),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s.parse().map_err(|_| err(line, col, "number too large"))?;
                (Tok::Num(n), j - i)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                (Tok::Word(chars[i..j].iter().collect()), j - i)
            }
            c => return Err(err(line, col, format!("unexpected character {c:?}"))),
        };
        out.push(Lexed { tok, col });
        i += width;
    }
    Ok(out)
}

fn split_index(word: &str) -> (char, Option<&str>) {
    let mut cs = word.chars();
    let head = cs.next().unwrap_or(' ');
    let rest = cs.as_str().trim_start_matches('_');
    (head, if rest.is_empty() { None } else { Some(rest) })
}

fn parse_index(rest: Option<&str>) -> Option<u64> {
    match rest {
        None => Some(1),
        Some(s) => s.parse().ok().filter(|i| *i >= 1),
    }
}

fn as_variable(word: &str) -> Option<Variable> {
    let (head, rest) = split_index(word);
    match head {
        'Y' if rest.is_none() => Some(Variable::Y),
        'X' => parse_index(rest).map(Variable::X),
        'Z' => parse_index(rest).map(Variable::Z),
        _ => None,
    }
}

fn as_label(word: &str) -> Option<Label> {
    let (head, rest) = split_index(word);
    let letter = LabelLetter::from_char(head)?;
    parse_index(rest).map(|i| Label::new(letter, i))
}

struct Cursor<'a> {
    toks: &'a [Lexed],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.col)
    }

    fn next(&mut self, what: &str) -> Result<(Tok, usize), VmError> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok((t.tok.clone(), t.col))
            }
            None => Err(err(self.line, self.end_col, format!("expected {what}, found end of statement"))),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), VmError> {
        let (t, col) = self.next(what)?;
        if t == want {
            Ok(())
        } else {
            Err(err(self.line, col, format!("expected {what}")))
        }
    }

    fn variable(&mut self) -> Result<Variable, VmError> {
        match self.next("a variable")? {
            (Tok::Word(w), col) => as_variable(&w).ok_or_else(|| err(self.line, col, format!("{w:?} is not a variable"))),
            (_, col) => Err(err(self.line, col, "expected a variable")),
        }
    }

    fn label(&mut self) -> Result<Label, VmError> {
        match self.next("a label")? {
            (Tok::Word(w), col) => as_label(&w).ok_or_else(|| err(self.line, col, format!("{w:?} is not a label"))),
            (_, col) => Err(err(self.line, col, "expected a label")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), VmError> {
        match self.next(kw)? {
            (Tok::Word(w), _) if w.eq_ignore_ascii_case(kw) => Ok(()),
            (_, col) => Err(err(self.line, col, format!("expected {kw}"))),
        }
    }

    fn done(&self) -> Result<(), VmError> {
        if self.pos < self.toks.len() {
            Err(err(self.line, self.col(), "unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

fn parse_statement(toks: &[Lexed], line: usize, end_col: usize) -> Result<SourceLine, VmError> {
    let mut c = Cursor { toks, pos: 0, line, end_col };
    let mut label = None;
    if c.peek() == Some(&Tok::LBracket) {
        c.pos += 1;
        label = Some(c.label()?);
        c.expect(Tok::RBracket, "]")?;
    }
    let statement = match c.peek() {
        Some(Tok::Word(w)) if w.eq_ignore_ascii_case("IF") => {
            c.pos += 1;
            let v = c.variable()?;
            c.expect(Tok::Neq, "!=")?;
            c.expect(Tok::Num(0), "0")?;
            c.keyword("GOTO")?;
            Statement::Core(Body::IfGoto(v, c.label()?))
        }
        Some(Tok::Word(w)) if w.eq_ignore_ascii_case("GOTO") => {
            c.pos += 1;
            Statement::Goto(c.label()?)
        }
        Some(_) => {
            let dst = c.variable()?;
            c.expect(Tok::Arrow, "<-")?;
            let src_col = c.col();
            let src = c.variable()?;
            match c.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => {
                    let inc = c.peek() == Some(&Tok::Plus);
                    c.pos += 1;
                    if src != dst {
                        return Err(err(line, src_col, "increment and decrement must use the same variable on both sides"));
                    }
                    c.expect(Tok::Num(1), "1")?;
                    Statement::Core(if inc { Body::Inc(dst) } else { Body::Dec(dst) })
                }
                _ if src == dst => Statement::Core(Body::Nop(dst)),
                _ => Statement::Copy { dst, src },
            }
        }
        None => return Err(err(line, c.col(), "expected a statement")),
    };
    c.done()?;
    Ok(SourceLine { label, statement, line })
}

/// Parses program text without expanding sugar.
pub fn parse_source(text: &str) -> Result<Source, VmError> {
    let mut lines = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let code = raw.split('#').next().unwrap_or("");
        let mut col0 = 1;
        for piece in code.split(';') {
            let width = piece.chars().count();
            let toks = lex(piece, line, col0)?;
            if !toks.is_empty() {
                lines.push(parse_statement(&toks, line, col0 + width)?);
            }
            col0 += width + 1;
        }
    }
    Ok(Source { lines })
}

/// Parses and expands sugar into core instructions.
pub fn parse_program(text: &str) -> Result<Program, VmError> {
    parse_source(text)?.expand()
}

struct Fresh {
    used_labels: BTreeSet<u64>,
    next_label: u64,
}

impl Fresh {
    fn label(&mut self) -> Label {
        loop {
            self.next_label += 1;
            if !self.used_labels.contains(&self.next_label) {
                self.used_labels.insert(self.next_label);
                return Label::from_number(self.next_label).expect("positive");
            }
        }
    }
}

impl Source {
    fn variables(&self) -> BTreeSet<Variable> {
        let mut vs = BTreeSet::new();
        for l in &self.lines {
            match &l.statement {
                Statement::Core(b) => {
                    vs.insert(b.variable());
                }
                Statement::Goto(_) => {}
                Statement::Copy { dst, src } => {
                    vs.insert(*dst);
                    vs.insert(*src);
                }
            }
        }
        vs
    }

    fn labels(&self) -> BTreeSet<u64> {
        let mut ls = BTreeSet::new();
        for l in &self.lines {
            if let Some(lb) = l.label {
                ls.insert(lb.number());
            }
            match &l.statement {
                Statement::Core(Body::IfGoto(_, t)) | Statement::Goto(t) => {
                    ls.insert(t.number());
                }
                _ => {}
            }
        }
        ls
    }

    /// Expands `GOTO L` into `Zk <- Zk + 1; IF Zk != 0 GOTO L` with `Zk` the
    /// lowest-indexed unused local, and `V <- W` into a copy loop that uses
    /// the next unused local as scratch and fresh labels from the
    /// `A B C E` cycle.
    pub fn expand(&self) -> Result<Program, VmError> {
        let vars = self.variables();
        let mut unused_z = (1u64..).filter(|i| !vars.contains(&Variable::Z(*i)));
        let needs_goto = self.lines.iter().any(|l| !matches!(l.statement, Statement::Core(_)));
        let needs_copy = self.lines.iter().any(|l| matches!(l.statement, Statement::Copy { .. }));
        let goto_z = if needs_goto { unused_z.next().map(Variable::Z) } else { None };
        let scratch = if needs_copy { unused_z.next().map(Variable::Z) } else { None };
        let mut fresh = Fresh { used_labels: self.labels(), next_label: 0 };

        let mut out: Vec<Instruction> = Vec::new();
        let goto = |out: &mut Vec<Instruction>, label: Option<Label>, target: Label| {
            let z = goto_z.expect("allocated when any sugar is present");
            out.push(Instruction::new(label, Body::Inc(z)));
            out.push(Instruction::new(None, Body::IfGoto(z, target)));
        };
        for l in &self.lines {
            match &l.statement {
                Statement::Core(b) => out.push(Instruction::new(l.label, *b)),
                Statement::Goto(t) => goto(&mut out, l.label, *t),
                Statement::Copy { dst, src } => {
                    let (v, w) = (*dst, *src);
                    let t = scratch.expect("allocated when a copy is present");
                    let l1 = l.label.unwrap_or_else(|| fresh.label());
                    let [l2, l3, l4, l5, l6] = [(); 5].map(|_| fresh.label());
                    out.push(Instruction::new(Some(l1), Body::Dec(v)));
                    out.push(Instruction::new(None, Body::IfGoto(v, l1)));
                    out.push(Instruction::new(Some(l2), Body::IfGoto(w, l3)));
                    goto(&mut out, None, l4);
                    out.push(Instruction::new(Some(l3), Body::Dec(w)));
                    out.push(Instruction::new(None, Body::Inc(v)));
                    out.push(Instruction::new(None, Body::Inc(t)));
                    goto(&mut out, None, l2);
                    out.push(Instruction::new(Some(l4), Body::IfGoto(t, l5)));
                    goto(&mut out, None, l6);
                    out.push(Instruction::new(Some(l5), Body::Dec(t)));
                    out.push(Instruction::new(None, Body::Inc(w)));
                    goto(&mut out, None, l4);
                    out.push(Instruction::new(Some(l6), Body::Nop(v)));
                }
            }
        }
        Program::new(out).map_err(|m| VmError::Parse {
            line: self.lines.last().map_or(0, |l| l.line),
            column: 1,
            message: m,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_plus_two() {
        match parse_program("X <- X + 2") {
            Err(VmError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 10)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn label_prefix_and_goto() {
        let p = parse_program("[A] X <- X + 1\nIF X != 0 GOTO A").unwrap();
        assert_eq!(p.len(), 2);
        let p = parse_program("GOTO E").unwrap();
        assert_eq!(p.instructions()[0].body, Body::Inc(Variable::Z(1)));
    }

    #[test]
    fn ending_in_zero_instruction_is_rejected() {
        assert!(parse_program("X <- X + 1\nY <- Y").is_err());
        assert!(parse_program("[A] Y <- Y").is_ok());
    }

    #[test]
    fn semicolons_and_unicode() {
        let p = parse_program("[A] X←X+1; IF X≠0 GOTO A").unwrap();
        assert_eq!(p.len(), 2);
    }
}
