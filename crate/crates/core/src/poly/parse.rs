//! Text syntax for forms and complex constants.
//!
//! Forms are written as sums of terms such as `3.5*x0^2*x2 - (1+2i)*x1^3`.
//! Variables are `x0, x1, ...`; `i` is the imaginary unit and may follow a
//! number directly (`2.5i`); every other product needs an explicit `*`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use super::homogeneous::{Exponents, HomogeneousPoly};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            src: text.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(b)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let err = self.error("expected a number");
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        if self.peek() == Some(b'.') {
            self.bump();
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = (self.pos, self.line, self.column);
            self.bump();
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.bump();
            }
            if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.bump();
                }
            } else {
                (self.pos, self.line, self.column) = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>().map_err(|_| err)
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        let start = self.pos;
        let err = self.error("expected a non-negative integer");
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap_or("")
            .parse::<u32>()
            .map_err(|_| err)
    }

    /// A real or imaginary literal: `2`, `2.5i`, `i`.
    fn real_or_imaginary(&mut self) -> Result<Complex64, ParseError> {
        if self.peek() == Some(b'i') {
            self.bump();
            return Ok(Complex64::new(0.0, 1.0));
        }
        let v = self.number()?;
        if self.peek() == Some(b'i') {
            self.bump();
            Ok(Complex64::new(0.0, v))
        } else {
            Ok(Complex64::new(v, 0.0))
        }
    }

    /// Signed sum of real/imaginary literals, e.g. `-1.5+2i`.
    fn complex_sum(&mut self) -> Result<Complex64, ParseError> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut first = true;
        loop {
            self.skip_ws();
            let sign = match self.peek() {
                Some(b'+') => {
                    self.bump();
                    1.0
                }
                Some(b'-') => {
                    self.bump();
                    -1.0
                }
                _ if first => 1.0,
                _ => break,
            };
            self.skip_ws();
            total += self.real_or_imaginary()? * sign;
            first = false;
        }
        Ok(total)
    }
}

/// Parses a complex constant such as `3`, `-0.5i`, `1+2i` or `(1-2i)`.
pub fn parse_complex(text: &str) -> Result<Complex64, ParseError> {
    let mut cur = Cursor::new(text);
    cur.skip_ws();
    let parenthesized = cur.peek() == Some(b'(');
    if parenthesized {
        cur.bump();
    }
    let value = cur.complex_sum()?;
    cur.skip_ws();
    if parenthesized {
        if cur.peek() != Some(b')') {
            return Err(cur.error("expected ')'"));
        }
        cur.bump();
        cur.skip_ws();
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(value)
}

/// Parses comma-separated complex coordinates, e.g. `0, 1+i, -2`.
pub fn parse_point(text: &str) -> Result<Vec<Complex64>, ParseError> {
    let mut coords = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let value = parse_complex(piece).map_err(|mut e| {
            if e.line == 1 {
                e.column += offset;
            }
            e
        })?;
        coords.push(value);
        offset += piece.len() + 1;
    }
    Ok(coords)
}

/// Parses a homogeneous form.
///
/// With `num_vars = None` the variable count is one more than the largest index
/// that appears, but never below 3.
pub fn parse_form(text: &str, num_vars: Option<usize>) -> Result<HomogeneousPoly, ParseError> {
    let mut cur = Cursor::new(text);
    let mut raw: Vec<(BTreeMap<usize, u32>, Complex64, (usize, usize))> = Vec::new();

    cur.skip_ws();
    if cur.at_end() {
        return Err(cur.error("empty polynomial"));
    }
    let mut first = true;
    loop {
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        let sign = match cur.peek() {
            Some(b'+') => {
                cur.bump();
                1.0
            }
            Some(b'-') => {
                cur.bump();
                -1.0
            }
            _ if first => 1.0,
            _ => return Err(cur.error("expected '+' or '-' between terms")),
        };
        first = false;
        cur.skip_ws();
        let at = (cur.line, cur.column);
        let (vars, coeff) = parse_term(&mut cur)?;
        raw.push((vars, coeff * sign, at));
    }

    let max_index = raw.iter().flat_map(|(v, _, _)| v.keys().copied()).max();
    let inferred = max_index.map_or(3, |m| (m + 1).max(3));
    let nv = match num_vars {
        Some(n) => {
            if let Some(m) = max_index {
                if m >= n {
                    let (line, column) = raw.iter().find(|(v, _, _)| v.contains_key(&m)).map(|r| r.2).unwrap_or((1, 1));
                    return Err(ParseError {
                        line,
                        column,
                        message: format!("variable x{m} out of range for {n} variables"),
                    });
                }
            }
            n
        }
        None => inferred,
    };

    let degree: u32 = raw.first().map(|(v, _, _)| v.values().sum()).unwrap_or(0);
    let mut terms = Vec::with_capacity(raw.len());
    for (vars, coeff, (line, column)) in raw {
        let mut e: Exponents = vec![0; nv];
        for (i, k) in vars {
            e[i] += k;
        }
        let total: u32 = e.iter().sum();
        if total != degree {
            return Err(ParseError {
                line,
                column,
                message: format!("term of degree {total} in a form of degree {degree}"),
            });
        }
        terms.push((e, coeff));
    }
    HomogeneousPoly::new(nv, degree, terms).map_err(|e| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<(BTreeMap<usize, u32>, Complex64), ParseError> {
    let mut vars: BTreeMap<usize, u32> = BTreeMap::new();
    let mut coeff = Complex64::new(1.0, 0.0);
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(b'x') => {
                cur.bump();
                if !cur.peek().is_some_and(|b| b.is_ascii_digit()) {
                    return Err(cur.error("expected variable index after 'x'"));
                }
                let idx = cur.integer()? as usize;
                let mut power = 1;
                cur.skip_ws();
                if cur.peek() == Some(b'^') {
                    cur.bump();
                    cur.skip_ws();
                    power = cur.integer()?;
                }
                *vars.entry(idx).or_default() += power;
            }
            Some(b'(') => {
                cur.bump();
                coeff *= cur.complex_sum()?;
                cur.skip_ws();
                if cur.peek() != Some(b')') {
                    return Err(cur.error("expected ')'"));
                }
                cur.bump();
            }
            Some(b) if b.is_ascii_digit() || b == b'.' || b == b'i' => {
                coeff *= cur.real_or_imaginary()?;
            }
            Some(_) => return Err(cur.error("expected a coefficient or a variable")),
            None => return Err(cur.error("unexpected end of input")),
        }
        cur.skip_ws();
        match cur.peek() {
            Some(b'*') => {
                cur.bump();
            }
            None | Some(b'+' | b'-') => return Ok((vars, coeff)),
            Some(_) => return Err(cur.error("expected '*' (implicit multiplication is not allowed)")),
        }
    }
}

/// Canonical text of a form: terms in descending lexicographic exponent order,
/// real coefficients bare, complex ones as `(a+bi)`, unit coefficients omitted.
pub fn format_form(f: &HomogeneousPoly) -> String {
    let mut out = String::new();
    for (idx, (exps, coeff)) in f.terms().iter().rev().enumerate() {
        let monomial: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        let (negative, body) = if coeff.im == 0.0 {
            let v = coeff.re;
            let mag = v.abs();
            let body = if mag == 1.0 && !monomial.is_empty() {
                String::new()
            } else {
                format!("{mag}")
            };
            (v.is_sign_negative(), body)
        } else {
            (false, format_complex(*coeff))
        };
        if idx == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
        if !monomial.is_empty() {
            if !body.is_empty() {
                out.push('*');
            }
            out.push_str(&monomial.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `(a+bi)` form of a complex number that `parse_complex` reads back exactly.
pub fn format_complex(z: Complex64) -> String {
    let mut s = String::new();
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    let _ = write!(s, "({}{}{}i)", z.re, sign, z.im.abs());
    s
}
