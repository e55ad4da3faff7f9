use std::process::ExitCode;

use beilinson::Error;

/// Why a command did not succeed, mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: a mathematical check failed.
    Math(String),
    /// Exit 2: bad flags, files or literals.
    Invalid(String),
    /// Exit 3: a budget ran out before a verdict.
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    pub fn exit(&self) -> ExitCode {
        ExitCode::from(self.code())
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Math(m) | Failure::Invalid(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) | Error::Parse(_) | Error::InvalidCandidate(_) => {
                Failure::Invalid(e.to_string())
            }
            _ => Failure::Math(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}
