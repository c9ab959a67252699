use std::path::PathBuf;

use ogclab_core::complex::ComplexError;
use ogclab_core::enumerate::{CatalogLoadError, EnumerateError};
use ogclab_core::zivkovic::ZivkovicError;
use thiserror::Error;

pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid catalog: {0}")]
    Catalog(String),
    #[error("{}: {1}", .0.display())]
    Io(PathBuf, std::io::Error),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Zivkovic(#[from] ZivkovicError),
}

impl From<CatalogLoadError> for CliError {
    fn from(e: CatalogLoadError) -> Self {
        CliError::Catalog(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Catalog(_) | CliError::Io(..) => EXIT_USAGE,
            CliError::Enumerate(e) | CliError::Complex(ComplexError::Enumerate(e)) => {
                enumerate_code(e)
            }
            CliError::Zivkovic(ZivkovicError::Complex(ComplexError::Enumerate(e))) => {
                enumerate_code(e)
            }
            CliError::Zivkovic(ZivkovicError::Mismatch(_)) => EXIT_USAGE,
            CliError::Complex(_) | CliError::Zivkovic(_) => EXIT_MATH,
        }
    }
}

fn enumerate_code(e: &EnumerateError) -> i32 {
    match e {
        EnumerateError::Unstable { .. } | EnumerateError::ProfileMismatch { .. } => EXIT_USAGE,
        EnumerateError::CapExceeded { .. } => EXIT_CAP,
        _ => EXIT_MATH,
    }
}
