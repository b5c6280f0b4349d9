//! Page-trace files: whitespace-separated tokens, `#` to end of line is a
//! comment. Tokens are opaque strings mapped to dense IDs in order of first
//! appearance.

use std::collections::HashMap;

use locality_core::{PageId, PageSequence};
use thiserror::Error;

/// Longest token accepted, in bytes.
pub const MAX_TOKEN_LEN: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("line {line}: token is {len} bytes, limit is {MAX_TOKEN_LEN}")]
    TokenTooLong { line: usize, len: usize },
    #[error("line {line}: token contains a control character")]
    ControlCharacter { line: usize },
    #[error("trace contains no requests")]
    Empty,
    #[error("too many distinct pages")]
    TooManyPages,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceFile {
    /// `names[id]` is the token for page `id`.
    names: Vec<String>,
    ids: HashMap<String, PageId>,
    requests: Vec<PageId>,
}

impl TraceFile {
    pub fn parse(text: &str) -> Result<Self, TraceError> {
        let mut trace = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            for token in content.split_whitespace() {
                if token.len() > MAX_TOKEN_LEN {
                    return Err(TraceError::TokenTooLong {
                        line,
                        len: token.len(),
                    });
                }
                if token.chars().any(char::is_control) {
                    return Err(TraceError::ControlCharacter { line });
                }
                let id = trace.intern(token)?;
                trace.requests.push(id);
            }
        }
        if trace.requests.is_empty() {
            return Err(TraceError::Empty);
        }
        Ok(trace)
    }

    /// Numeric pages written under their decimal names.
    pub fn from_pages(pages: &[PageId]) -> Self {
        let mut trace = Self::default();
        for p in pages {
            let id = trace
                .intern(&p.to_string())
                .expect("at most one ID per page");
            trace.requests.push(id);
        }
        trace
    }

    /// ID for `token`, allocating the next one if it is new.
    pub fn intern(&mut self, token: &str) -> Result<PageId, TraceError> {
        if let Some(&id) = self.ids.get(token) {
            return Ok(id);
        }
        let id = PageId::try_from(self.names.len()).map_err(|_| TraceError::TooManyPages)?;
        self.names.push(token.to_string());
        self.ids.insert(token.to_string(), id);
        Ok(id)
    }

    pub fn requests(&self) -> &[PageId] {
        &self.requests
    }

    pub fn sequence(&self) -> PageSequence {
        PageSequence::new(self.requests.clone())
    }

    pub fn name(&self, id: PageId) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn distinct_pages(&self) -> usize {
        self.names.len()
    }

    pub fn len(&self) -> usize {
        self.requests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.requests.is_empty()
    }

    /// Sixteen tokens per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for chunk in self.requests.chunks(16) {
            let line: Vec<&str> = chunk
                .iter()
                .map(|&id| self.names[id as usize].as_str())
                .collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_ids_in_first_appearance_order() {
        let t = TraceFile::parse("0x7f 0x10 # header\n\n0x7f  /index.html\n").unwrap();
        assert_eq!(t.requests(), &[0, 1, 0, 2]);
        assert_eq!(t.name(2), Some("/index.html"));
        assert_eq!(t.distinct_pages(), 3);
    }

    #[test]
    fn round_trip() {
        let text = (0..40).map(|i| format!("p{} ", i % 7)).collect::<String>();
        let t = TraceFile::parse(&text).unwrap();
        let again = TraceFile::parse(&t.to_text()).unwrap();
        assert_eq!(t, again);
        assert_eq!(t.to_text(), again.to_text());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let long = "x".repeat(MAX_TOKEN_LEN + 1);
        assert_eq!(
            TraceFile::parse(&format!("a b\nc\n{long}\n")),
            Err(TraceError::TokenTooLong {
                line: 3,
                len: MAX_TOKEN_LEN + 1
            })
        );
        assert_eq!(
            TraceFile::parse("a\u{7}b"),
            Err(TraceError::ControlCharacter { line: 1 })
        );
        assert_eq!(TraceFile::parse("# nothing\n"), Err(TraceError::Empty));
    }

    #[test]
    fn numeric_pages_keep_their_names() {
        let t = TraceFile::from_pages(&[5, 1, 1, 2, 2]);
        assert_eq!(t.to_text(), "5 1 1 2 2\n");
        assert_eq!(t.requests(), &[0, 1, 1, 2, 2]);
    }
}
