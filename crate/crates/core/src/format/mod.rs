//! Line-oriented text documents for families, actions, subsets, maps,
//! certificates and fibering witnesses.
//!
//! Every document starts with a header line naming its kind. Lines are
//! whitespace-separated tokens; a token starting with `#` starts a comment.
//! Indentation is for readers only. Points are always referred to by label.
//! See `docs/formats.md` for the grammar of each kind.

mod certificates;
mod documents;

use std::fmt;

use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;

pub use certificates::{
    parse_an_certificate, parse_asdim_certificate, parse_decomposition, parse_fibering,
    write_an_certificate, write_asdim_certificate, write_decomposition, write_fibering,
};
pub use documents::{
    parse_action, parse_family, parse_map, parse_subsets, write_action, write_family, write_map,
    write_subsets, Subsets,
};

/// Parse failure with a 1-based position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for FormatError {}

#[derive(Clone, Copy, Debug)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

#[derive(Clone, Debug)]
struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    fn args(&self) -> &[Token<'a>] {
        &self.tokens[1..]
    }

    /// Column just past the last token.
    fn end(&self) -> usize {
        let last = self.tokens.last().expect("lines are non-empty");
        last.column + last.text.chars().count()
    }

    fn error(&self, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.number,
            column: self.tokens[0].column,
            message: message.into(),
        }
    }

    fn error_at(&self, token: &Token<'_>, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.number,
            column: token.column,
            message: message.into(),
        }
    }

    /// Exactly `n` arguments.
    fn expect_args(&self, n: usize) -> Result<&[Token<'a>], FormatError> {
        let args = self.args();
        if args.len() == n {
            Ok(args)
        } else if args.len() > n {
            Err(self.error_at(
                &args[n],
                format!("`{}` takes {n} argument(s)", self.keyword()),
            ))
        } else {
            Err(FormatError {
                line: self.number,
                column: self.end(),
                message: format!(
                    "`{}` takes {n} argument(s), found {}",
                    self.keyword(),
                    args.len()
                ),
            })
        }
    }

    fn scalar<T: Scalar>(&self, token: &Token<'_>) -> Result<T, FormatError> {
        T::parse_token(token.text).ok_or_else(|| {
            self.error_at(
                token,
                format!("`{}` is not a valid {} number", token.text, T::NAME),
            )
        })
    }

    fn count(&self, token: &Token<'_>) -> Result<usize, FormatError> {
        token
            .text
            .parse()
            .map_err(|_| self.error_at(token, format!("`{}` is not a count", token.text)))
    }
}

fn tokenize(text: &str, first_line: usize) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let mut tokens = Vec::new();
        let mut start: Option<usize> = None;
        let mut column = 0;
        let mut start_column = 0;
        for (i, c) in raw.char_indices() {
            column += 1;
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &raw[s..i],
                        column: start_column,
                    });
                }
            } else if start.is_none() {
                if c == '#' {
                    break;
                }
                start = Some(i);
                start_column = column;
            }
        }
        if let Some(s) = start {
            tokens.push(Token {
                text: &raw[s..],
                column: start_column,
            });
        }
        if !tokens.is_empty() {
            out.push(Line {
                number: first_line + k,
                tokens,
            });
        }
    }
    out
}

struct Cursor<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    /// Line number reported for a premature end of input.
    last_line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, first_line: usize) -> Self {
        Self {
            lines: tokenize(text, first_line),
            pos: 0,
            last_line: first_line + text.lines().count().saturating_sub(1),
        }
    }

    fn peek_keyword(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l.keyword())
    }

    fn next(&mut self) -> Option<Line<'a>> {
        let line = self.lines.get(self.pos).cloned();
        self.pos += 1;
        line
    }

    fn end_error(&self, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.last_line.max(1),
            column: 1,
            message: message.into(),
        }
    }

    /// The next line, which must start with `keyword`.
    fn expect(&mut self, keyword: &str) -> Result<Line<'a>, FormatError> {
        match self.next() {
            Some(line) if line.keyword() == keyword => Ok(line),
            Some(line) => {
                Err(line.error(format!("expected `{keyword}`, found `{}`", line.keyword())))
            }
            None => Err(self.end_error(format!("expected `{keyword}`, found end of input"))),
        }
    }

    fn done(&mut self) -> Result<(), FormatError> {
        match self.next() {
            None => Ok(()),
            Some(line) => Err(line.error(format!("unexpected `{}`", line.keyword()))),
        }
    }
}

/// Keyword and arguments of the first non-comment line.
pub fn header(text: &str) -> Option<(String, Vec<String>)> {
    let line = tokenize(text, 1).into_iter().next()?;
    let args = line.args().iter().map(|t| t.text.to_string()).collect();
    Some((line.keyword().to_string(), args))
}

/// Resolves point labels to indices.
fn resolve_labels<T: Scalar>(
    line: &Line<'_>,
    tokens: &[Token<'_>],
    space: &FiniteMetricSpace<T>,
) -> Result<Vec<usize>, FormatError> {
    tokens
        .iter()
        .map(|t| {
            space.index_of(t.text).ok_or_else(|| {
                line.error_at(t, format!("unknown point `{}` in `{}`", t.text, space.id()))
            })
        })
        .collect()
}

fn labels_of<T: Scalar>(space: &FiniteMetricSpace<T>, indices: &[usize]) -> String {
    indices
        .iter()
        .map(|&i| space.label(i))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `keyword` followed by the labels, without a trailing space when empty.
fn labelled_line<T: Scalar>(
    indent: &str,
    keyword: &str,
    space: &FiniteMetricSpace<T>,
    indices: &[usize],
) -> String {
    if indices.is_empty() {
        format!("{indent}{keyword}\n")
    } else {
        format!("{indent}{keyword} {}\n", labels_of(space, indices))
    }
}
