//! Exit-code scheme: 0 ok, 2 bad configuration, 3 mathematical precondition
//! not met, 4 resource budget exceeded.

use std::fmt;

use affinewalk::Error;

pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_MATH: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Math(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Config(m) | Self::Math(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for Failure {}

fn library_code(e: &Error) -> u8 {
    match e {
        Error::Inadmissible { .. }
        | Error::NotPrime(_)
        | Error::NoUnitEigenvalue { .. }
        | Error::DegeneratePrime { .. }
        | Error::RootsDidNotConverge { .. } => EXIT_MATH,
        Error::StateBudget { .. } | Error::CharacterBudget { .. } => EXIT_BUDGET,
        _ => EXIT_CONFIG,
    }
}

/// Exit code for the first classified error in the chain; anything else
/// (I/O, malformed JSON) counts as a configuration problem.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(f) = cause.downcast_ref::<Failure>() {
            return match f {
                Failure::Config(_) => EXIT_CONFIG,
                Failure::Math(_) => EXIT_MATH,
            };
        }
        if let Some(e) = cause.downcast_ref::<Error>() {
            return library_code(e);
        }
    }
    EXIT_CONFIG
}
