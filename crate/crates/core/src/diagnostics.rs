//! Located messages produced while loading files.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Info,
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Info => "info",
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

/// Stable machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Code {
    SyntaxError,
    UnbalancedBracket,
    UnknownUnit,
    MalformedNumber,
    SelfRefWithoutContext,
    OutsideBlock,
    DuplicateBlock,
    UnknownSymbol,
    CycleDetected,
    MalformedHeader,
    MalformedLegendEntry,
    DuplicateLegendKey,
    ExtendedLegendKey,
    UnmappedGridCell,
    UnbalancedParen,
}

/// A message tied to a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn error(code: Code, line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Error, code, line, col, message: message.into() }
    }

    pub fn warning(code: Code, line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic { severity: Severity::Warning, code, line, col, message: message.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: severity: message`
    pub fn render(&self, file: &str) -> String {
        format!("{}:{}:{}: {}: {}", file, self.line, self.col, self.severity, self.message)
    }

    pub(crate) fn shifted(mut self, lines: usize) -> Self {
        self.line += lines;
        self
    }
}

/// A diagnostic together with the source it came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourcedDiagnostic {
    pub source: String,
    #[serde(flatten)]
    pub diagnostic: Diagnostic,
}

impl fmt::Display for SourcedDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.diagnostic.render(&self.source))
    }
}
