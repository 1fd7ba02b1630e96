//! The circuit mini-language.
//!
//! ```text
//! circuit := stage ((';' | newline) stage)*      stages act left to right
//! stage   := expr ('@' mode (',' mode)*)?
//! expr    := fourier(d) | pauli_x(d) | pauli_z(d) | identity(d)
//!          | phase(turns) | permute(σ0, σ1, …)
//!          | tensor(expr, expr, …) | dsum(expr, expr, …)
//! turns   := ['-'] int ['/' int] | ['-'] decimal
//! ```
//!
//! A stage without `@` sits on modes `0..d`. `permute(σ)` sends mode `i` to
//! `σ(i)`; `tensor` puts pair `(i, j)` on index `i·dim(b) + j`.

use std::fmt;

use bsf_core::linalg::{
    direct_sum, embed, fourier_matrix, pauli_x, pauli_z, tensor, ExactPhase, LinalgError, TransferMatrix,
};

/// Upper bound on any single dimension written in a circuit.
const MAX_DIM: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    At,
    Slash,
    Minus,
    Sep,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Number(s) => write!(f, "number {s}"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::Comma => f.write_str("','"),
            Tok::At => f.write_str("'@'"),
            Tok::Slash => f.write_str("'/'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Sep => f.write_str("stage separator"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let mut pos = Pos { line: 1, column: 1 };
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                pos.line += 1;
                pos.column = 1;
            } else {
                pos.column += 1;
            }
            c
        };
        let tok = match c {
            '\n' | ';' => {
                bump(&mut chars);
                Tok::Sep
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '(' | ')' | ',' | '@' | '/' | '-' => {
                bump(&mut chars);
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '@' => Tok::At,
                    '/' => Tok::Slash,
                    _ => Tok::Minus,
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit() || *c == '.') {
                    s.push(bump(&mut chars));
                }
                Tok::Number(s)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                    s.push(bump(&mut chars));
                }
                Tok::Ident(s)
            }
            other => return Err(here.error(format!("unexpected character '{other}'"))),
        };
        out.push((tok, here));
    }
    out.push((Tok::End, pos));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Fourier(usize),
    PauliX(usize),
    PauliZ(usize),
    Identity(usize),
    Phase(ExactPhase),
    Permute(Vec<usize>),
    Tensor(Vec<Expr>),
    DirectSum(Vec<Expr>),
}

impl Expr {
    fn dim(&self) -> usize {
        match self {
            Expr::Fourier(d) | Expr::PauliX(d) | Expr::PauliZ(d) | Expr::Identity(d) => *d,
            Expr::Phase(_) => 1,
            Expr::Permute(p) => p.len(),
            Expr::Tensor(parts) => parts.iter().map(Expr::dim).product(),
            Expr::DirectSum(parts) => parts.iter().map(Expr::dim).sum(),
        }
    }

    fn build(&self) -> Result<TransferMatrix, LinalgError> {
        Ok(match self {
            Expr::Fourier(d) => fourier_matrix(*d)?,
            Expr::PauliX(d) => pauli_x(*d).to_transfer(),
            Expr::PauliZ(d) => pauli_z(*d).to_transfer(),
            Expr::Identity(d) => TransferMatrix::identity(*d),
            Expr::Phase(p) => TransferMatrix::phases(&[*p]),
            Expr::Permute(p) => TransferMatrix::permutation(p)?,
            Expr::Tensor(parts) => {
                let mut it = parts.iter();
                let first = it.next().expect("parser requires two factors").build()?;
                it.try_fold(first, |acc, e| Ok::<_, LinalgError>(tensor(&acc, &e.build()?)))?
            }
            Expr::DirectSum(parts) => {
                let mut it = parts.iter();
                let first = it.next().expect("parser requires two summands").build()?;
                it.try_fold(first, |acc, e| Ok::<_, LinalgError>(direct_sum(&acc, &e.build()?)))?
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Stage {
    expr: Expr,
    pos: Pos,
    modes: Option<(Vec<usize>, Pos)>,
}

/// A parsed circuit, not yet bound to a mode count.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitSpec {
    source: String,
    stages: Vec<Stage>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, ParseError> {
        let (tok, pos) = self.next();
        if tok == want {
            Ok(pos)
        } else {
            Err(pos.error(format!("expected {want}, found {tok}")))
        }
    }

    fn uint(&mut self) -> Result<(u64, Pos), ParseError> {
        match self.next() {
            (Tok::Number(s), pos) => {
                s.parse::<u64>().map(|v| (v, pos)).map_err(|_| pos.error(format!("expected an integer, found {s}")))
            }
            (tok, pos) => Err(pos.error(format!("expected an integer, found {tok}"))),
        }
    }

    fn dim(&mut self) -> Result<usize, ParseError> {
        let (d, pos) = self.uint()?;
        if d == 0 || d > MAX_DIM {
            return Err(pos.error(format!("dimension must be in 1..={MAX_DIM}, got {d}")));
        }
        Ok(d as usize)
    }

    fn uint_list(&mut self) -> Result<Vec<usize>, ParseError> {
        let mut out = vec![self.uint()?.0 as usize];
        while self.peek().0 == Tok::Comma {
            self.next();
            out.push(self.uint()?.0 as usize);
        }
        Ok(out)
    }

    fn turns(&mut self) -> Result<ExactPhase, ParseError> {
        let negative = if self.peek().0 == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let (tok, pos) = self.next();
        let Tok::Number(s) = tok else {
            return Err(pos.error(format!("expected a phase in turns, found {tok}")));
        };
        let (num, den) = parse_turns(&s).ok_or_else(|| pos.error(format!("invalid phase '{s}'")))?;
        let (num, den) = if self.peek().0 == Tok::Slash {
            if s.contains('.') {
                return Err(pos.error("a fraction needs an integer numerator"));
            }
            self.next();
            let (d, dpos) = self.uint()?;
            if d == 0 {
                return Err(dpos.error("zero denominator"));
            }
            (num, den * d)
        } else {
            (num, den)
        };
        let num = i64::try_from(num).map_err(|_| pos.error("phase numerator too large"))?;
        Ok(ExactPhase::from_turns(if negative { -num } else { num }, den))
    }

    fn expr(&mut self) -> Result<(Expr, Pos), ParseError> {
        let (tok, pos) = self.next();
        let Tok::Ident(name) = tok else {
            return Err(pos.error(format!("expected a gate name, found {tok}")));
        };
        self.expect(Tok::LParen)?;
        let e = match name.as_str() {
            "fourier" => Expr::Fourier(self.dim()?),
            "pauli_x" => Expr::PauliX(self.dim()?),
            "pauli_z" => Expr::PauliZ(self.dim()?),
            "identity" | "id" => Expr::Identity(self.dim()?),
            "phase" => Expr::Phase(self.turns()?),
            "permute" => {
                let perm = self.uint_list()?;
                check_permutation(&perm).map_err(|m| pos.error(m))?;
                Expr::Permute(perm)
            }
            "tensor" | "dsum" => {
                let mut parts = vec![self.expr()?.0];
                while self.peek().0 == Tok::Comma {
                    self.next();
                    parts.push(self.expr()?.0);
                }
                if parts.len() < 2 {
                    return Err(pos.error(format!("{name} needs at least two arguments")));
                }
                let e = if name == "tensor" { Expr::Tensor(parts) } else { Expr::DirectSum(parts) };
                if e.dim() as u64 > MAX_DIM {
                    return Err(pos.error(format!("{name} has dimension {} > {MAX_DIM}", e.dim())));
                }
                e
            }
            other => return Err(pos.error(format!(
                "unknown gate '{other}' (expected fourier, pauli_x, pauli_z, identity, phase, permute, tensor or dsum)"
            ))),
        };
        self.expect(Tok::RParen)?;
        Ok((e, pos))
    }

    fn stage(&mut self) -> Result<Stage, ParseError> {
        let (expr, pos) = self.expr()?;
        let modes = if self.peek().0 == Tok::At {
            let at = self.next().1;
            let list = self.uint_list()?;
            if list.len() != expr.dim() {
                return Err(at.error(format!("gate acts on {} modes but {} are listed", expr.dim(), list.len())));
            }
            let mut seen = std::collections::BTreeSet::new();
            if let Some(d) = list.iter().find(|k| !seen.insert(**k)) {
                return Err(at.error(format!("mode {d} listed more than once")));
            }
            Some((list, at))
        } else {
            None
        };
        Ok(Stage { expr, pos, modes })
    }
}

fn check_permutation(perm: &[usize]) -> Result<(), String> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(format!("permute({}) is not a permutation of 0..{}", join(perm), perm.len()));
        }
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// `"3"` → (3, 1), `"0.25"` → (25, 100).
fn parse_turns(s: &str) -> Option<(u64, u64)> {
    match s.split_once('.') {
        None => Some((s.parse().ok()?, 1)),
        Some((int, frac)) => {
            if frac.len() > 12 || (int.is_empty() && frac.is_empty()) || frac.contains('.') {
                return None;
            }
            let den = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() { 0 } else { int.parse().ok()? };
            let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
            Some((int.checked_mul(den)?.checked_add(frac)?, den))
        }
    }
}

impl CircuitSpec {
    pub fn parse(src: &str) -> Result<Self, ParseError> {
        let mut p = Parser { toks: lex(src)?, at: 0 };
        let mut stages = Vec::new();
        loop {
            while p.peek().0 == Tok::Sep {
                p.next();
            }
            if p.peek().0 == Tok::End {
                break;
            }
            stages.push(p.stage()?);
            match p.peek() {
                (Tok::Sep | Tok::End, _) => {}
                (tok, pos) => return Err(pos.error(format!("expected ';' or end of input, found {tok}"))),
            }
        }
        if stages.is_empty() {
            return Err(Pos { line: 1, column: 1 }.error("empty circuit"));
        }
        Ok(Self { source: src.to_string(), stages })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Smallest mode count the circuit fits in.
    pub fn min_modes(&self) -> usize {
        self.stages
            .iter()
            .map(|s| match &s.modes {
                Some((list, _)) => list.iter().max().map_or(0, |k| k + 1),
                None => s.expr.dim(),
            })
            .max()
            .unwrap_or(0)
    }

    /// The transfer matrix on `modes` modes, last stage leftmost.
    pub fn build(&self, modes: usize) -> Result<TransferMatrix, ParseError> {
        let mut u = TransferMatrix::identity(modes);
        for stage in &self.stages {
            let local = stage.expr.build().map_err(|e| stage.pos.error(e.to_string()))?;
            let (list, pos) = match &stage.modes {
                Some((list, pos)) => (list.clone(), *pos),
                None => ((0..local.modes()).collect(), stage.pos),
            };
            if let Some(k) = list.iter().find(|&&k| k >= modes) {
                return Err(pos.error(format!("mode {k} out of range for {modes} modes")));
            }
            let placed = embed(&local, &list, modes).map_err(|e| pos.error(e.to_string()))?;
            u = placed.compose(&u).map_err(|e| pos.error(e.to_string()))?;
        }
        Ok(u)
    }
}

/// A phase in turns, as accepted by `phase(…)`.
pub fn parse_phase(src: &str) -> Result<ExactPhase, ParseError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let phase = p.turns()?;
    match p.next() {
        (Tok::End, _) => Ok(phase),
        (tok, pos) => Err(pos.error(format!("unexpected {tok} after the phase"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bsf_core::linalg::max_abs_diff;

    fn close(a: &TransferMatrix, b: &TransferMatrix) -> bool {
        max_abs_diff(a.entries(), b.entries()) < 1e-12
    }

    #[test]
    fn primitives_and_placement() {
        let c = CircuitSpec::parse("fourier(2)@0,1").unwrap();
        assert_eq!(c.min_modes(), 2);
        assert!(close(&c.build(2).unwrap(), &fourier_matrix(2).unwrap()));
        let c = CircuitSpec::parse("pauli_x(2)@3,1").unwrap();
        assert_eq!(c.min_modes(), 4);
        let u = c.build(4).unwrap();
        assert_eq!(u.get(1, 3).re, 1.0);
        assert_eq!(u.get(0, 0).re, 1.0);
    }

    #[test]
    fn stages_compose_left_to_right() {
        let u = CircuitSpec::parse("permute(1,0); phase(1/4)@0").unwrap().build(2).unwrap();
        // the photon entering mode 1 lands on mode 0 and picks up i
        assert!((u.get(0, 1) - num_complex::Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let v = CircuitSpec::parse("phase(0.25)@0\npermute(1,0)").unwrap().build(2).unwrap();
        assert!((v.get(1, 0) - num_complex::Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn combinators() {
        let c = CircuitSpec::parse("tensor(identity(2), fourier(3))").unwrap();
        let want = tensor(&TransferMatrix::identity(2), &fourier_matrix(3).unwrap());
        assert!(close(&c.build(6).unwrap(), &want));
        let c = CircuitSpec::parse("dsum(fourier(2), phase(-1/2))").unwrap();
        assert_eq!(c.min_modes(), 3);
        assert!((c.build(3).unwrap().get(2, 2).re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors_carry_positions() {
        let e = CircuitSpec::parse("fourier(2)@0,1;\n  fouier(2)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.message.contains("unknown gate"));
        let e = CircuitSpec::parse("fourier(2@0").unwrap_err();
        assert_eq!((e.line, e.column), (1, 10));
        let e = CircuitSpec::parse("fourier(3)@0,1").unwrap_err();
        assert_eq!(e.column, 11);
        let e = CircuitSpec::parse("permute(0,0)").unwrap_err();
        assert!(e.message.contains("not a permutation"));
        let e = CircuitSpec::parse("pauli_x(2)@0,5").unwrap().build(4).unwrap_err();
        assert!(e.message.contains("out of range"));
        assert!(CircuitSpec::parse("").is_err());
        assert!(CircuitSpec::parse("phase(1/0)").is_err());
        assert!(CircuitSpec::parse("fourier(2) fourier(2)").is_err());
    }

    #[test]
    fn phases_in_turns() {
        assert_eq!(parse_phase("1/2").unwrap(), ExactPhase::MINUS_ONE);
        assert_eq!(parse_phase("-0.25").unwrap(), ExactPhase::MINUS_I);
        assert_eq!(parse_phase("3").unwrap(), ExactPhase::ONE);
        assert!(parse_phase("1/2/3").is_err());
        assert!(parse_phase("x").is_err());
    }
}
