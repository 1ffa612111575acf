//! Recursive-descent parser for generating-function expressions.
//!
//! Grammar (whitespace insensitive, `-` and U+2212 both accepted as minus):
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := factor (("*" | "/") factor)*
//! factor  := unary ("^" literal)?
//! unary   := "-" unary | atom
//! atom    := number | "x" | "i" | ident "(" expr ")" | "(" expr ")"
//! literal := "-"? (number | "i")
//! ident   := exp | sin | cos | sinh | cosh | tanh | sqrt
//! ```
//!
//! `+ -` and `* /` associate left; `^` binds tightest and its exponent must
//! be a literal, so chained powers do not parse.

use std::fmt;

use num_complex::Complex64;

use super::ast::{BinOp, ExprAst, Func};

/// Parse failure with the byte offset of the offending token.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub expected: Vec<&'static str>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    X,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::X => "`x`".into(),
            Tok::I => "`i`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next_token(&mut self) -> Result<(Tok, usize), ParseError> {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        let start = self.pos;
        let mut chars = trimmed.chars();
        let Some(ch) = chars.next() else {
            return Ok((Tok::Eof, start));
        };
        let tok = match ch {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                let (n, len) = self.lex_number(trimmed, start)?;
                self.pos = start + len;
                return Ok((Tok::Number(n), start));
            }
            c if c.is_alphabetic() => {
                let len = trimmed
                    .find(|c: char| !c.is_alphanumeric() && c != '_')
                    .unwrap_or(trimmed.len());
                let word = &trimmed[..len];
                self.pos = start + len;
                let tok = match word {
                    "x" => Tok::X,
                    "i" => Tok::I,
                    _ => Tok::Ident(word.to_owned()),
                };
                return Ok((tok, start));
            }
            other => {
                return Err(ParseError {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                    expected: vec![],
                });
            }
        };
        self.pos = start + ch.len_utf8();
        Ok((tok, start))
    }

    fn lex_number(&self, rest: &str, start: usize) -> Result<(f64, usize), ParseError> {
        let bytes = rest.as_bytes();
        let mut len = 0;
        while len < bytes.len() && bytes[len].is_ascii_digit() {
            len += 1;
        }
        let int_digits = len;
        if len < bytes.len() && bytes[len] == b'.' {
            len += 1;
            while len < bytes.len() && bytes[len].is_ascii_digit() {
                len += 1;
            }
        }
        if int_digits == 0 && len <= 1 {
            return Err(ParseError {
                offset: start,
                message: "malformed number".into(),
                expected: vec!["digit"],
            });
        }
        if len < bytes.len() && (bytes[len] == b'e' || bytes[len] == b'E') {
            let mut exp_len = len + 1;
            if exp_len < bytes.len() && (bytes[exp_len] == b'+' || bytes[exp_len] == b'-') {
                exp_len += 1;
            }
            let digits_start = exp_len;
            while exp_len < bytes.len() && bytes[exp_len].is_ascii_digit() {
                exp_len += 1;
            }
            if exp_len > digits_start {
                len = exp_len;
            }
        }
        let text = &rest[..len];
        text.parse::<f64>()
            .map(|n| (n, len))
            .map_err(|_| ParseError {
                offset: start,
                message: format!("malformed number `{text}`"),
                expected: vec!["number"],
            })
    }
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    cursor: usize,
    src_len: usize,
}

/// Parse a source string into an [`ExprAst`].
pub fn parse(source: &str) -> Result<ExprAst, ParseError> {
    let mut lexer = Lexer {
        src: source,
        pos: 0,
    };
    let mut tokens = Vec::new();
    loop {
        let (tok, at) = lexer.next_token()?;
        let done = tok == Tok::Eof;
        tokens.push((tok, at));
        if done {
            break;
        }
    }
    let mut parser = Parser {
        tokens,
        cursor: 0,
        src_len: source.len(),
    };
    let expr = parser.expr()?;
    parser.expect_eof()?;
    Ok(expr)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.cursor].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.cursor].1.min(self.src_len)
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.cursor].0.clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    fn error(&self, message: String, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.offset(),
            message,
            expected,
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(
                format!("trailing input starting with {}", self.peek().describe()),
                vec!["end of input", "operator"],
            ))
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = ExprAst::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = ExprAst::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    // `^` binds tighter than unary minus, so -x^2 is -(x^2).
    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            let inner = self.factor()?;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let exponent = self.exponent_literal()?;
            return Ok(ExprAst::Pow {
                base: Box::new(base),
                exponent,
            });
        }
        Ok(base)
    }

    fn exponent_literal(&mut self) -> Result<Complex64, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let lit = match self.peek().clone() {
            Tok::Number(n) => Complex64::new(n, 0.0),
            Tok::I => Complex64::new(0.0, 1.0),
            other => {
                return Err(self.error(
                    format!(
                        "exponent must be a literal constant, found {}",
                        other.describe()
                    ),
                    vec!["number", "`i`"],
                ));
            }
        };
        self.bump();
        Ok(if negate { -lit } else { lit })
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Ok(ExprAst::literal(n))
            }
            Tok::X => {
                self.bump();
                Ok(ExprAst::Var)
            }
            Tok::I => {
                self.bump();
                Ok(ExprAst::ImaginaryUnit)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(
                        format!("unbalanced parentheses: found {}", self.peek().describe()),
                        vec!["`)`"],
                    ));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                let Some(func) = Func::from_name(&name) else {
                    return Err(self.error(
                        format!("unknown identifier `{name}`"),
                        vec!["exp", "sin", "cos", "sinh", "cosh", "tanh", "sqrt"],
                    ));
                };
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Err(self.error(
                        format!("`{name}` takes one parenthesized argument"),
                        vec!["`(`"],
                    ));
                }
                self.bump();
                let arg = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(
                        format!(
                            "`{name}` takes exactly one argument, found {}",
                            self.peek().describe()
                        ),
                        vec!["`)`"],
                    ));
                }
                self.bump();
                Ok(ExprAst::Apply {
                    func,
                    arg: Box::new(arg),
                })
            }
            other => Err(self.error(
                format!("expected an operand, found {}", other.describe()),
                vec!["number", "`x`", "`i`", "function", "`(`"],
            )),
        }
    }
}
