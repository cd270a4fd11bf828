//! Report rendering and exit codes.

use clap::ValueEnum;
use pt3_core::Error;
use serde_json::Value;
use std::fs;
use std::path::Path;

pub const EXIT_OK: u8 = 0;
pub const EXIT_OTHER: u8 = 1;
/// A checked identity, formula or bound failed.
pub const EXIT_MISMATCH: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
/// A regenerated table differs from print with no ledger entry.
pub const EXIT_GOLDEN: u8 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug)]
pub struct Exit {
    pub code: u8,
    pub message: String,
}

impl Exit {
    pub fn config(msg: impl Into<String>) -> Self {
        Exit { code: EXIT_CONFIG, message: msg.into() }
    }

    pub fn other(msg: impl Into<String>) -> Self {
        Exit { code: EXIT_OTHER, message: msg.into() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::BudgetExceeded { .. } | Error::SizeOverBudget { .. } | Error::Timeout(_) => EXIT_BUDGET,
            Error::NotPrime(_)
            | Error::CharacteristicTooSmall(_)
            | Error::NotPrimePower(_)
            | Error::InvalidInput(_)
            | Error::UnsupportedN(_)
            | Error::IndexOutOfRange { .. }
            | Error::CharDividesK { .. }
            | Error::NotDivisor { .. }
            | Error::HypothesisViolated(_)
            | Error::InvalidPlan(_)
            | Error::NotLargeN(_)
            | Error::UnknownPolicy { .. }
            | Error::BadCache(_) => EXIT_CONFIG,
            Error::DivisibilityBreach { .. } => EXIT_MISMATCH,
            _ => EXIT_OTHER,
        };
        Exit { code, message: e.to_string() }
    }
}

/// What a command produced, in every format it supports.
pub struct Report {
    pub status: u8,
    pub text: String,
    /// Printed to stdout when the report itself goes to a file.
    pub summary: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn emit(self, format: Format, out: Option<&Path>) -> Result<u8, Exit> {
        let doc = match format {
            Format::Text => self.text,
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| Exit::other(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Csv => self.csv.ok_or_else(|| Exit::config("this command has no CSV form"))?,
        };
        match out {
            Some(path) => {
                fs::write(path, doc).map_err(|e| Exit::other(format!("{}: {e}", path.display())))?;
                println!("{}", self.summary);
                println!("report written to {}", path.display());
            }
            None => print!("{doc}"),
        }
        Ok(self.status)
    }
}
