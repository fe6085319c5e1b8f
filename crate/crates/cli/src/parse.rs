//! Text grammar for differential polynomials and ideal files.
//!
//! ```text
//! poly     := ['-'] term { ('+'|'-') term }
//! term     := factor { '*' factor }
//! factor   := base ['^' nat]
//! base     := rational | varref | '(' poly ')'
//! varref   := ident { '\'' } | 'D(' ident ',' nat ')'
//! rational := nat ['/' nat]
//! ```
//!
//! Ideal files separate generators by commas or newlines; `#` starts a
//! comment. Unknown identifiers are registered as new base variables.

use std::fmt;

use arcmult::{DPoly, DVar, Rational, VarNames};
use num_bigint::BigInt;
use num_traits::Zero;

/// Exponents above this are rejected as input errors.
pub const MAX_EXPONENT: u32 = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Ident(String),
    Prime,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Newline,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Nat(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Prime => write!(f, "`'`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        let tok = match c {
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            '\n' => Tok::Newline,
            c if c.is_whitespace() => {
                bump(&mut chars);
                continue;
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    bump(&mut chars);
                }
                out.push(Spanned { tok: Tok::Nat(s.parse().expect("digits")), line: l, column: col });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                    s.push(d);
                    bump(&mut chars);
                }
                out.push(Spanned { tok: Tok::Ident(s), line: l, column: col });
                continue;
            }
            '\'' => Tok::Prime,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            other => return Err(ParseError { line: l, column: col, message: format!("unexpected character `{other}`") }),
        };
        bump(&mut chars);
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser<'n> {
    toks: Vec<Spanned>,
    pos: usize,
    depth: usize,
    names: &'n mut VarNames,
}

impl Parser<'_> {
    /// Current token; newlines inside parentheses are skipped.
    fn peek(&mut self) -> &Spanned {
        while self.depth > 0 && self.toks[self.pos].tok == Tok::Newline {
            self.pos += 1;
        }
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.peek().clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Spanned, message: String) -> ParseError {
        ParseError { line: t.line, column: t.column, message }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == want {
            Ok(())
        } else {
            Err(Self::error_at(&t, format!("expected {want}, found {}", t.tok)))
        }
    }

    fn nat(&mut self) -> Result<(BigInt, Spanned), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Nat(n) => Ok((n.clone(), t)),
            other => Err(Self::error_at(&t, format!("expected a number, found {other}"))),
        }
    }

    fn small_nat(&mut self, what: &str) -> Result<u32, ParseError> {
        let (n, t) = self.nat()?;
        u32::try_from(&n)
            .ok()
            .filter(|&v| v <= MAX_EXPONENT)
            .ok_or_else(|| Self::error_at(&t, format!("{what} {n} is too large (limit {MAX_EXPONENT})")))
    }

    fn poly(&mut self) -> Result<DPoly, ParseError> {
        let mut acc = if self.peek().tok == Tok::Minus {
            self.next();
            -self.term()?
        } else {
            self.term()?
        };
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc + self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<DPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.next();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<DPoly, ParseError> {
        let b = self.base()?;
        if self.peek().tok == Tok::Caret {
            self.next();
            let e = self.small_nat("exponent")?;
            return Ok(b.pow(e));
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<DPoly, ParseError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Nat(n) => {
                let den = if self.peek().tok == Tok::Slash {
                    self.next();
                    let (d, dt) = self.nat()?;
                    if d.is_zero() {
                        return Err(Self::error_at(&dt, "division by zero".into()));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(DPoly::constant(Rational::new(n, den)))
            }
            Tok::LParen => {
                self.depth += 1;
                let p = self.poly()?;
                self.expect(Tok::RParen)?;
                self.depth -= 1;
                Ok(p)
            }
            Tok::Ident(ref name) if name == "D" && self.toks[self.pos].tok == Tok::LParen => {
                self.next();
                self.depth += 1;
                let it = self.next();
                let Tok::Ident(var) = it.tok else {
                    return Err(Self::error_at(&it, format!("expected a variable name, found {}", it.tok)));
                };
                self.expect(Tok::Comma)?;
                let k = self.small_nat("derivative order")?;
                self.expect(Tok::RParen)?;
                self.depth -= 1;
                let base = self.names.intern(&var);
                Ok(DPoly::var(DVar::new(base, k)))
            }
            Tok::Ident(name) => {
                let mut order = 0;
                while self.toks[self.pos].tok == Tok::Prime {
                    self.pos += 1;
                    order += 1;
                }
                let base = self.names.intern(&name);
                Ok(DPoly::var(DVar::new(base, order)))
            }
            other => Err(Self::error_at(&t, format!("expected a number, variable or `(`, found {other}"))),
        }
    }
}

/// Parses one polynomial, registering new names in `names`.
pub fn parse_poly(text: &str, names: &mut VarNames) -> Result<DPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 1, names };
    let out = p.poly()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(Parser::error_at(&t, format!("unexpected {} after polynomial", t.tok)));
    }
    Ok(out)
}

/// Parses a comma- or newline-separated list of generators.
pub fn parse_ideal(text: &str, names: &mut VarNames) -> Result<Vec<DPoly>, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, depth: 0, names };
    let mut out = Vec::new();
    loop {
        while matches!(p.peek().tok, Tok::Comma | Tok::Newline) {
            p.next();
        }
        if p.peek().tok == Tok::End {
            return Ok(out);
        }
        out.push(p.poly()?);
        let t = p.next();
        if !matches!(t.tok, Tok::Comma | Tok::Newline | Tok::End) {
            return Err(Parser::error_at(&t, format!("expected `,` or end of line, found {}", t.tok)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: u32) -> DPoly {
        DPoly::var(DVar::new(0, k))
    }

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn table_polynomial() {
        let mut names = VarNames::default();
        let p = parse_poly("2*x*x'' + (x')^2", &mut names).unwrap();
        assert_eq!(p, (&x(0) * &x(2)).scale(&q(2)) + x(1).pow(2));
        assert_eq!(names.names(), ["x"]);
    }

    #[test]
    fn derivative_notation() {
        let mut names = VarNames::default();
        assert_eq!(parse_poly("D(x,3)", &mut names).unwrap(), parse_poly("x'''", &mut names).unwrap());
        assert_eq!(parse_poly("D(x, 0)", &mut names).unwrap(), x(0));
    }

    #[test]
    fn rationals_and_signs() {
        let mut names = VarNames::default();
        let p = parse_poly("-1/2*x^2 - (3 - x)", &mut names).unwrap();
        let want = x(0).pow(2).scale(&Rational::new(BigInt::from(-1), BigInt::from(2))) - DPoly::constant(q(3)) + x(0);
        assert_eq!(p, want);
    }

    #[test]
    fn ideal_files() {
        let mut names = VarNames::default();
        let gens = parse_ideal("x^2, y^2, x*y", &mut names).unwrap();
        assert_eq!(gens.len(), 3);
        assert_eq!(names.names(), ["x", "y"]);
        let text = "# fat point\nx^3   # cube\n\ny^2,\n(x +\n y)^2\n";
        assert_eq!(parse_ideal(text, &mut VarNames::default()).unwrap().len(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let mut names = VarNames::default();
        let e = parse_poly("x + * y", &mut names).unwrap_err();
        assert_eq!((e.line, e.column), (1, 5));
        let e = parse_ideal("x^2\ny^", &mut names).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_poly("x $ y", &mut names).unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(parse_poly("1/0", &mut names).is_err());
        assert!(parse_poly("x, y", &mut names).is_err());
        assert!(parse_poly("x^100000", &mut names).is_err());
    }
}
