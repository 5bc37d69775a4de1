//! Diagnostics shared by every validator in the crate.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warn,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warn => "warn",
        })
    }
}

/// A single finding produced by parsing or validation.
///
/// `path` is a field trail such as `items[2].tree.root.children[0].fill`.
/// `code` is a stable short identifier that scripts may match on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub path: String,
    pub message: String,
    pub line: Option<usize>,
}

impl Diagnostic {
    pub fn error(code: &'static str, path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            path: path.into(),
            message: message.into(),
            line: None,
        }
    }

    pub fn warn(code: &'static str, path: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warn,
            code,
            path: path.into(),
            message: message.into(),
            line: None,
        }
    }

    pub fn with_line(mut self, line: usize) -> Self {
        self.line = Some(line);
        self
    }

    /// Prefix the path with an outer location, e.g. `items[3].box`.
    pub fn nested(mut self, prefix: &str) -> Self {
        self.path = if self.path.is_empty() {
            prefix.to_string()
        } else if self.path.starts_with('[') {
            format!("{prefix}{}", self.path)
        } else {
            format!("{prefix}.{}", self.path)
        };
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

/// Renders as `<severity> <code> <path>: <message>`.
impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "<document>" } else { &self.path };
        match self.line {
            Some(line) => write!(
                f,
                "{} {} {} (line {}): {}",
                self.severity, self.code, path, line, self.message
            ),
            None => write!(f, "{} {} {}: {}", self.severity, self.code, path, self.message),
        }
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_format() {
        let d = Diagnostic::error("unknown-theme", "items[0].box.theme", "unknown theme \"teal\"");
        assert_eq!(
            d.to_string(),
            "error unknown-theme items[0].box.theme: unknown theme \"teal\""
        );
        let w = Diagnostic::warn("unknown-field", "", "x").with_line(3);
        assert_eq!(w.to_string(), "warn unknown-field <document> (line 3): x");
    }

    #[test]
    fn nesting_paths() {
        let d = Diagnostic::error("c", "theme", "m").nested("items[1].box");
        assert_eq!(d.path, "items[1].box.theme");
        let d = Diagnostic::error("c", "[2]", "m").nested("children");
        assert_eq!(d.path, "children[2]");
        let d = Diagnostic::error("c", "", "m").nested("root");
        assert_eq!(d.path, "root");
    }
}
