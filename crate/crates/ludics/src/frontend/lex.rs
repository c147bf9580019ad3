//! Tokens for the session-file language.
//!
//! A hand-rolled scanner so every token carries the line and column it
//! started at; parse errors quote both. `#` opens a comment that runs to
//! the end of the line. Identifiers are `[a-zA-Z][a-zA-Z0-9_]*`, integers
//! are decimal digit runs, and the only two-character punctuation is `=>`.

use std::fmt;

use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(usize),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Pipe,
    Comma,
    Semi,
    Slash,
    Caret,
    Eq,
    FatArrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LAngle => f.write_str("`<`"),
            Tok::RAngle => f.write_str("`>`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::FatArrow => f.write_str("`=>`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// Scans the whole input. The returned list always ends with one `Eof`
/// token carrying the position just past the last character.
pub fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1usize;
    let mut col = 1usize;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            'a'..='z' | 'A'..='Z' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                {
                    s.push(bump!().expect("peeked"));
                }
                out.push(Token { tok: Tok::Ident(s), line: tline, col: tcol });
            }
            '0'..='9' => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump!().expect("peeked"));
                }
                let n = s.parse().map_err(|_| ParseError::Invalid {
                    line: tline,
                    col: tcol,
                    msg: format!("number {s} is out of range"),
                })?;
                out.push(Token { tok: Tok::Int(n), line: tline, col: tcol });
            }
            '=' => {
                bump!();
                let tok = if chars.peek() == Some(&'>') {
                    bump!();
                    Tok::FatArrow
                } else {
                    Tok::Eq
                };
                out.push(Token { tok, line: tline, col: tcol });
            }
            _ => {
                let tok = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' => Tok::LAngle,
                    '>' => Tok::RAngle,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    '|' => Tok::Pipe,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    other => {
                        return Err(ParseError::Syntax {
                            line: tline,
                            col: tcol,
                            expected: "a name, a number, or punctuation".into(),
                            found: format!("`{other}`"),
                        })
                    }
                };
                bump!();
                out.push(Token { tok, line: tline, col: tcol });
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
