use serde::Serialize;
use thiserror::Error;

use pqr_core::bounds::BoundsError;
use pqr_core::family::FamilyError;
use pqr_core::generators::GeneratorError;
use pqr_core::geometry::GeometryError;
use pqr_core::piercing::PiercingError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Io,
    Parse,
    Arity,
    Invalid,
    Premise,
    Budget,
    Violation,
    Internal,
}

/// A failed command: a kind that fixes the exit code, a message, and for
/// premise failures the offending member indices.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
            subset: None,
            path: None,
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Io, message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Parse, message)
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorKind::Invalid, message)
    }

    /// 2 for bad input of any kind, 3 for a violated premise, 4 for an
    /// exhausted budget, 1 for a bound violation or internal failure.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Io | ErrorKind::Parse | ErrorKind::Arity | ErrorKind::Invalid => 2,
            ErrorKind::Premise => 3,
            ErrorKind::Budget => 4,
            ErrorKind::Violation | ErrorKind::Internal => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::invalid(e.to_string())
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        let kind = match e {
            FamilyError::Arity { .. } => ErrorKind::Arity,
            FamilyError::BudgetExceeded { .. } => ErrorKind::Budget,
            _ => ErrorKind::Invalid,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<PiercingError> for CliError {
    fn from(e: PiercingError) -> Self {
        match e {
            PiercingError::Premise { reason, subset } => CliError {
                subset: Some(subset),
                ..CliError::new(ErrorKind::Premise, reason)
            },
            PiercingError::BudgetExceeded(_) => CliError::new(ErrorKind::Budget, e.to_string()),
            PiercingError::Internal(_) => CliError::new(ErrorKind::Internal, e.to_string()),
            PiercingError::Family(f) => f.into(),
            PiercingError::Geometry(g) => g.into(),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Invalid(_) => CliError::invalid(e.to_string()),
            GeneratorError::RetriesExhausted(_) => CliError::new(ErrorKind::Budget, e.to_string()),
            GeneratorError::Family(f) => f.into(),
        }
    }
}
