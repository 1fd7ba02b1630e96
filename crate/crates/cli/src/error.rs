use std::fmt;

use bsf_core::bell::BellError;
use bsf_core::fock::{FockError, BASIS_LIMIT_ENV};
use bsf_core::linalg::LinalgError;
use bsf_core::stabilizer::StabilizerError;

use crate::circuit::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Internal,
    Input,
    SizeLimit,
    Inapplicable,
    Consistency,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Internal => 1,
            ErrorKind::Input => 2,
            ErrorKind::SizeLimit => 3,
            ErrorKind::Inapplicable => 4,
            ErrorKind::Consistency => 5,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub hint: Option<String>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), hint: None }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Input, message)
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Internal, message)
    }

    pub fn consistency(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Consistency, message)
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    pub fn parse(flag: &str, e: ParseError) -> Self {
        Self::input(format!("{flag}: {e}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error: {}", self.message)?;
        if let Some(h) = &self.hint {
            write!(f, "\nhint: {h}")?;
        }
        Ok(())
    }
}

impl std::error::Error for CliError {}

fn size_hint() -> String {
    format!("raise the guard with {BASIS_LIMIT_ENV}=<states> if the machine can hold the basis")
}

impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::SizeLimit { .. } => Self::new(ErrorKind::SizeLimit, e.to_string()),
            _ => Self::input(e.to_string()),
        }
    }
}

impl From<FockError> for CliError {
    fn from(e: FockError) -> Self {
        match e {
            FockError::SizeLimit { .. } => Self::new(ErrorKind::SizeLimit, e.to_string()).with_hint(size_hint()),
            FockError::Linalg(l) => l.into(),
            _ => Self::input(e.to_string()),
        }
    }
}

impl From<StabilizerError> for CliError {
    fn from(e: StabilizerError) -> Self {
        let msg = e.to_string();
        match e {
            StabilizerError::NotMonomial(_) | StabilizerError::InexactPhase { .. } => {
                Self::new(ErrorKind::Inapplicable, msg)
                    .with_hint("generators and their conjugates must be monomial with root-of-unity phases")
            }
            StabilizerError::NotDiagonalGroup(_) => Self::new(ErrorKind::Inapplicable, msg).with_hint(
                "pick a circuit U with U·G·U† diagonal, e.g. a Fourier transform over the modes a shift permutes",
            ),
            StabilizerError::NonAbelianGroup => {
                Self::new(ErrorKind::Inapplicable, msg).with_hint("characters and projectors need commuting generators")
            }
            StabilizerError::GroupTooLarge { .. } => {
                Self::new(ErrorKind::SizeLimit, msg).with_hint("use generators of smaller order")
            }
            StabilizerError::InconsistentCharacter(_) | StabilizerError::GeneratorCountMismatch { .. } => {
                Self::input(msg)
                    .with_hint("give one --char per --gen, as turns; values must respect the generator relations")
            }
            StabilizerError::Fock(f) => f.into(),
            StabilizerError::Linalg(l) => l.into(),
            StabilizerError::ModeCountMismatch { .. } => Self::input(msg),
        }
    }
}

impl From<BellError> for CliError {
    fn from(e: BellError) -> Self {
        let msg = e.to_string();
        match e {
            BellError::OracleGuard { .. } => {
                Self::new(ErrorKind::SizeLimit, msg).with_hint("pass --force to run it anyway")
            }
            BellError::NotRankOne { .. } => Self::consistency(msg),
            BellError::Fock(f) => f.into(),
            BellError::Linalg(l) => l.into(),
            BellError::Stabilizer(s) => s.into(),
            _ => Self::input(msg),
        }
    }
}
