//! Operator list files: one signed Pauli string per line, `#` starts a
//! comment, blank lines are skipped, and every string has the length of the
//! first.

use thiserror::Error;

use crate::pauli::{PauliError, PauliString};

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct InputError {
    pub line: usize,
    pub column: usize,
    pub kind: PauliError,
}

/// Parses an operator list. An input with no operators yields
/// [`PauliError::EmptySet`] at line 1, column 1.
pub fn parse_operator_list(text: &str) -> Result<Vec<PauliString>, InputError> {
    let mut ops: Vec<PauliString> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        let lead = content.chars().count() - trimmed.chars().count();
        let token = trimmed.trim_end();
        if token.is_empty() {
            continue;
        }
        let at = |offset: usize, kind| InputError { line: idx + 1, column: lead + offset + 1, kind };
        if let Some((pos, _)) = token.char_indices().find(|(_, c)| c.is_whitespace()) {
            let offset = token[..pos].chars().count();
            return Err(at(offset, PauliError::InvalidChar { position: offset, ch: ' ' }));
        }
        let expected = ops.first().map(PauliString::n);
        match PauliString::parse(token, expected) {
            Ok(p) => ops.push(p),
            Err(e @ PauliError::InvalidChar { position, .. }) => return Err(at(position, e)),
            Err(e) => return Err(at(0, e)),
        }
    }
    if ops.is_empty() {
        return Err(InputError { line: 1, column: 1, kind: PauliError::EmptySet });
    }
    Ok(ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let text = "# worked example\n-XXYYY\n\n  IYIIX   # second\n-IZXXZ\r\nXYIZI\n-XZXYY\n";
        let ops = parse_operator_list(text).unwrap();
        assert_eq!(ops.len(), 5);
        assert_eq!(ops[3].to_string(), "XYIZI");
        assert_eq!(ops[4].to_string(), "-XZXYY");
    }

    #[test]
    fn reports_positions() {
        let err = parse_operator_list("XX\n  XQ\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 4));
        assert_eq!(err.kind, PauliError::InvalidChar { position: 1, ch: 'Q' });

        let err = parse_operator_list("XX\nXXX\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 1));
        assert_eq!(err.kind, PauliError::LengthMismatch { expected: 2, found: 3 });

        let err = parse_operator_list("XX ZZ\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 3));

        let err = parse_operator_list("# nothing\n\n").unwrap_err();
        assert_eq!(err.kind, PauliError::EmptySet);
    }
}
