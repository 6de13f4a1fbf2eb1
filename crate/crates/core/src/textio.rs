//! Line-oriented text formats share one diagnostic type: every parse error
//! carries the 1-based line it was found on, or no line for whole-file
//! problems (e.g. a required entry that never appeared).

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextError {
    pub line: Option<usize>,
    pub message: String,
}

impl TextError {
    pub fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn whole_file(message: impl Into<String>) -> Self {
        Self {
            line: None,
            message: message.into(),
        }
    }
}

impl fmt::Display for TextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

impl std::error::Error for TextError {}

/// Splits a line into whitespace-separated fields, ignoring blank lines and
/// `#` comments. Returns `None` for lines with no content.
pub(crate) fn fields(line: &str) -> Option<Vec<&str>> {
    let line = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.is_empty() {
        None
    } else {
        Some(fields)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_includes_line() {
        let err = TextError::at(7, "unknown key `lamda`");
        assert_eq!(err.to_string(), "line 7: unknown key `lamda`");
    }

    #[test]
    fn whole_file_error_has_no_line() {
        let err = TextError::whole_file("no `bottom` line");
        assert_eq!(err.to_string(), "no `bottom` line");
    }

    #[test]
    fn fields_strips_comments_and_blanks() {
        assert_eq!(fields("a b  c # comment"), Some(vec!["a", "b", "c"]));
        assert_eq!(fields("   # only comment"), None);
        assert_eq!(fields(""), None);
    }
}
