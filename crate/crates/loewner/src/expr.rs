//! Expression grammar for field declarations in scenario files.
//!
//! Grammar over the free variables `z` and `t`, with complex literals built
//! from the imaginary unit `i`:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | primary
//! primary := number | 'z' | 't' | 'i'
//!          | ('exp' | 'sin' | 'cos' | 'abs' | 'conj') '(' expr ')'
//!          | '(' expr ')'
//! ```
//!
//! Parsing is hardened against untrusted input: it never panics, recursion
//! is depth-capped, and every error carries the line/column of the offending
//! token. Evaluation is total on finite inputs (division by zero follows
//! IEEE semantics and is caught downstream by the field validator).

use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// Maximum nesting depth accepted by the parser.
pub const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnaryFn {
    Exp,
    Sin,
    Cos,
    Abs,
    Conj,
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    ImaginaryUnit,
    Z,
    T,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Apply(UnaryFn, Box<Expr>),
}

impl Expr {
    /// Evaluate at `(z, t)`.
    pub fn eval(&self, z: Complex64, t: f64) -> Complex64 {
        match self {
            Expr::Const(x) => Complex64::new(*x, 0.0),
            Expr::ImaginaryUnit => Complex64::i(),
            Expr::Z => z,
            Expr::T => Complex64::new(t, 0.0),
            Expr::Neg(e) => -e.eval(z, t),
            Expr::Add(a, b) => a.eval(z, t) + b.eval(z, t),
            Expr::Sub(a, b) => a.eval(z, t) - b.eval(z, t),
            Expr::Mul(a, b) => a.eval(z, t) * b.eval(z, t),
            Expr::Div(a, b) => a.eval(z, t) / b.eval(z, t),
            Expr::Apply(f, e) => {
                let v = e.eval(z, t);
                match f {
                    UnaryFn::Exp => v.exp(),
                    UnaryFn::Sin => v.sin(),
                    UnaryFn::Cos => v.cos(),
                    UnaryFn::Abs => Complex64::new(v.norm(), 0.0),
                    UnaryFn::Conj => v.conj(),
                }
            }
        }
    }

    /// Whether the expression mentions the space variable `z`.
    pub fn depends_on_z(&self) -> bool {
        match self {
            Expr::Z => true,
            Expr::Const(_) | Expr::ImaginaryUnit | Expr::T => false,
            Expr::Neg(e) | Expr::Apply(_, e) => e.depends_on_z(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.depends_on_z() || b.depends_on_z()
            }
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

fn position(src: &[u8], offset: usize) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for &b in &src[..offset.min(src.len())] {
        if b == b'\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

impl<'a> Lexer<'a> {
    fn error(&self, offset: usize, message: impl Into<String>) -> ParseError {
        let (line, column) = position(self.src, offset);
        ParseError { message: message.into(), line, column }
    }

    fn tokens(mut self) -> Result<Vec<(Token, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let at = self.pos;
            let b = self.src[at];
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'+' => {
                    out.push((Token::Plus, at));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Token::Minus, at));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Token::Star, at));
                    self.pos += 1;
                }
                b'/' => {
                    out.push((Token::Slash, at));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Token::LParen, at));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Token::RParen, at));
                    self.pos += 1;
                }
                b'0'..=b'9' | b'.' => {
                    let start = self.pos;
                    while self.pos < self.src.len() && matches!(self.src[self.pos], b'0'..=b'9' | b'.') {
                        self.pos += 1;
                    }
                    if self.pos < self.src.len() && matches!(self.src[self.pos], b'e' | b'E') {
                        let mark = self.pos;
                        self.pos += 1;
                        if self.pos < self.src.len() && matches!(self.src[self.pos], b'+' | b'-') {
                            self.pos += 1;
                        }
                        if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                                self.pos += 1;
                            }
                        } else {
                            // Not an exponent after all; 'e' may start an identifier.
                            self.pos = mark;
                        }
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos])
                        .map_err(|_| self.error(start, "invalid number"))?;
                    let value: f64 = text
                        .parse()
                        .map_err(|_| self.error(start, format!("invalid number `{text}`")))?;
                    if !value.is_finite() {
                        return Err(self.error(start, format!("number `{text}` overflows")));
                    }
                    out.push((Token::Number(value), start));
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && matches!(self.src[self.pos], b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_')
                    {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos])
                        .map_err(|_| self.error(start, "invalid identifier"))?
                        .to_string();
                    out.push((Token::Ident(text), start));
                }
                _ => {
                    return Err(self.error(at, format!("unexpected byte 0x{b:02x}")));
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    tokens: Vec<(Token, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        let (line, column) = position(self.src, offset);
        ParseError { message: message.into(), line, column }
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let offset = self.tokens.get(self.pos).map(|(_, o)| *o).unwrap_or(self.src.len());
        self.error_at(offset, message)
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Token, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error_here(format!("expected {what}"))),
        }
    }

    fn expr(&mut self, depth: usize) -> Result<Expr, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.error_here("expression nests too deeply"));
        }
        let mut node = self.term(depth + 1)?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    node = Expr::Add(Box::new(node), Box::new(self.term(depth + 1)?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    node = Expr::Sub(Box::new(node), Box::new(self.term(depth + 1)?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<Expr, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.error_here("expression nests too deeply"));
        }
        let mut node = self.unary(depth + 1)?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    node = Expr::Mul(Box::new(node), Box::new(self.unary(depth + 1)?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    node = Expr::Div(Box::new(node), Box::new(self.unary(depth + 1)?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn unary(&mut self, depth: usize) -> Result<Expr, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.error_here("expression nests too deeply"));
        }
        if matches!(self.peek(), Some(Token::Minus)) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary(depth + 1)?)));
        }
        self.primary(depth + 1)
    }

    fn primary(&mut self, depth: usize) -> Result<Expr, ParseError> {
        if depth > MAX_DEPTH {
            return Err(self.error_here("expression nests too deeply"));
        }
        match self.bump() {
            Some(Token::Number(x)) => Ok(Expr::Const(x)),
            Some(Token::LParen) => {
                let inner = self.expr(depth + 1)?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "z" => Ok(Expr::Z),
                "t" => Ok(Expr::T),
                "i" => Ok(Expr::ImaginaryUnit),
                "exp" | "sin" | "cos" | "abs" | "conj" => {
                    let f = match name.as_str() {
                        "exp" => UnaryFn::Exp,
                        "sin" => UnaryFn::Sin,
                        "cos" => UnaryFn::Cos,
                        "abs" => UnaryFn::Abs,
                        _ => UnaryFn::Conj,
                    };
                    self.expect(Token::LParen, "`(` after function name")?;
                    let inner = self.expr(depth + 1)?;
                    self.expect(Token::RParen, "`)`")?;
                    Ok(Expr::Apply(f, Box::new(inner)))
                }
                other => Err(self.error_here(format!("unknown identifier `{other}`"))),
            },
            Some(tok) => Err(self.error_here(format!("unexpected token {tok:?}"))),
            None => Err(self.error_here("unexpected end of expression")),
        }
    }
}

/// Parse an expression; the whole input must be consumed.
pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let tokens = Lexer { src: src.as_bytes(), pos: 0 }.tokens()?;
    if tokens.is_empty() {
        return Err(ParseError { message: "empty expression".into(), line: 1, column: 1 });
    }
    let mut parser = Parser { src: src.as_bytes(), tokens, pos: 0 };
    let expr = parser.expr(0)?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error_here("trailing input after expression"));
    }
    Ok(expr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, z: Complex64, t: f64) -> Complex64 {
        parse(src).unwrap().eval(z, t)
    }

    #[test]
    fn literals_and_variables() {
        let z = Complex64::new(0.3, -0.2);
        assert_eq!(ev("1", z, 0.0), Complex64::new(1.0, 0.0));
        assert_eq!(ev("2.5e-1", z, 0.0), Complex64::new(0.25, 0.0));
        assert_eq!(ev("z", z, 0.0), z);
        assert_eq!(ev("t", z, 3.0), Complex64::new(3.0, 0.0));
        assert_eq!(ev("i", z, 0.0), Complex64::i());
    }

    #[test]
    fn precedence_and_unary_minus() {
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(ev("1 + 2 * 3", z, 0.0), Complex64::new(7.0, 0.0));
        assert_eq!(ev("(1 + 2) * 3", z, 0.0), Complex64::new(9.0, 0.0));
        assert_eq!(ev("-2 * 3 + 1", z, 0.0), Complex64::new(-5.0, 0.0));
        assert_eq!(ev("1 - 2 - 3", z, 0.0), Complex64::new(-4.0, 0.0));
        assert_eq!(ev("8 / 2 / 2", z, 0.0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn functions() {
        let z = Complex64::new(0.5, 0.25);
        let t = 1.25;
        assert!((ev("exp(i*t)", z, t) - Complex64::new(t.cos(), t.sin())).norm() < 1e-15);
        assert!((ev("sin(t) + cos(t)", z, t) - Complex64::new(t.sin() + t.cos(), 0.0)).norm() < 1e-15);
        assert!((ev("abs(z)", z, t) - Complex64::new(z.norm(), 0.0)).norm() < 1e-15);
        assert_eq!(ev("conj(z)", z, t), z.conj());
        assert!(parse("conj(z)").unwrap().depends_on_z());
        assert!(!parse("exp(i*t)").unwrap().depends_on_z());
    }

    #[test]
    fn error_positions() {
        let err = parse("1 + $").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
        let err = parse("sin 3").unwrap_err();
        assert!(err.message.contains("expected `(`"));
        let err = parse("1 + foo(2)").unwrap_err();
        assert!(err.message.contains("unknown identifier"));
        let err = parse("").unwrap_err();
        assert!(err.message.contains("empty"));
        let err = parse("(1 + 2").unwrap_err();
        assert!(err.message.contains("expected `)`"));
        let err = parse("1 2").unwrap_err();
        assert!(err.message.contains("trailing"));
    }

    #[test]
    fn depth_cap_prevents_runaway_recursion() {
        let deep = format!("{}1{}", "(".repeat(5000), ")".repeat(5000));
        let err = parse(&deep).unwrap_err();
        assert!(err.message.contains("too deeply"));
        let minus = format!("{}1", "-".repeat(5000));
        assert!(parse(&minus).is_err());
    }

    #[test]
    fn never_panics_on_garbage() {
        for src in [
            "///", ")(", "e", "1e", "1e+", ".", "..", "1..2", "z z", "exp()", "exp(", "-", "i i",
            "\u{0}", "0x12", "1.0e99999",
        ] {
            let _ = parse(src);
        }
    }
}
