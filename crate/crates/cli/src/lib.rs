//! Library side of the `geninv` command-line tool: file formats and the
//! subcommand implementations. `main.rs` only parses arguments.

pub mod commands;
pub mod format;

/// How a successfully executed command ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// The computation ran but a verdict or consistency check failed.
    VerdictFailure,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Success
        } else {
            Outcome::VerdictFailure
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Success => 0,
            Outcome::VerdictFailure => 1,
        }
    }
}

/// Exit code for usage, format and I/O errors.
pub const USAGE_EXIT: u8 = 2;
