//! Library half of the experiment front end: presets, CSV emission,
//! configuration files, the validation suite and fit reports. The `risim`
//! binary is a thin argument-parsing layer over this.

pub mod config;
pub mod csvout;
pub mod fit_report;
pub mod presets;
pub mod validate;

/// Process-level error classes, mapped to exit codes by the binary:
/// usage -> 1, validation -> 2, I/O -> 3.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Validation(String),
    Io(String),
}

impl AppError {
    pub fn usage(msg: impl Into<String>) -> Self {
        AppError::Usage(msg.into())
    }

    pub fn from_core(err: ris_core::Error) -> Self {
        AppError::Usage(err.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            AppError::Usage(_) => 1,
            AppError::Validation(_) => 2,
            AppError::Io(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            AppError::Usage(m) | AppError::Validation(m) | AppError::Io(m) => m,
        }
    }
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.message())
    }
}

impl std::error::Error for AppError {}
