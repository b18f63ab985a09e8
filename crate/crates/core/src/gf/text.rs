//! Element syntax: bare integers for F_p, parenthesized polynomials in `t`
//! for F_q, and polynomials in `u` (with F_q coefficients) for the tower.

use super::{Field, FieldElement};
use crate::error::{Error, Result};

impl Field {
    /// Renders an element; F_p elements print as bare integers.
    pub fn format(&self, a: FieldElement) -> String {
        if self.in_prime_field(a) {
            return a.index().to_string();
        }
        if self.in_base(a) {
            return format!("({})", self.format_base_terms(a));
        }
        let q = self.q();
        let mut rest = a.index();
        let mut parts = Vec::with_capacity(self.e());
        for _ in 0..self.e() {
            parts.push(FieldElement(rest % q));
            rest /= q;
        }
        let terms: Vec<String> = parts
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, &c)| {
                let power = match j {
                    0 => String::new(),
                    1 => "u".to_string(),
                    _ => format!("u^{j}"),
                };
                if j == 0 {
                    self.format(c)
                } else if c == FieldElement::ONE {
                    power
                } else {
                    format!("{}*{power}", self.format(c))
                }
            })
            .collect();
        format!("({})", terms.join("+"))
    }

    fn format_base_terms(&self, a: FieldElement) -> String {
        let digits = self.coeffs(a);
        let terms: Vec<String> = digits[..self.m()]
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "t".to_string(),
                (1, c) => format!("{c}*t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}*t^{i}"),
            })
            .collect();
        terms.join("+")
    }

    /// Parses an element written in the syntax produced by [`Field::format`];
    /// general sums, products and powers of `t`, `u` and integers are accepted.
    pub fn parse(&self, text: &str) -> Result<FieldElement> {
        let mut parser = ElemParser {
            field: self,
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        };
        let value = parser.expr()?;
        if parser.pos != parser.chars.len() {
            return Err(Error::parse(0, format!("trailing input in element `{text}`")));
        }
        Ok(value)
    }
}

struct ElemParser<'a> {
    field: &'a Field,
    chars: Vec<char>,
    pos: usize,
}

impl ElemParser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::parse(0, format!("{msg} at column {}", self.pos))
    }

    fn expr(&mut self) -> Result<FieldElement> {
        let f = self.field;
        let mut negate = false;
        if self.peek() == Some('-') {
            self.pos += 1;
            negate = true;
        }
        let mut acc = self.term()?;
        if negate {
            acc = f.neg(acc);
        }
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = f.add(acc, t);
                }
                '-' => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = f.sub(acc, t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FieldElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let x = self.factor()?;
            acc = self.field.mul(acc, x);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<FieldElement> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let n = self.integer()?;
            return Ok(self.field.pow(base, n));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }

    fn atom(&mut self) -> Result<FieldElement> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some('t') => {
                self.pos += 1;
                self.field.t().ok_or_else(|| self.err("`t` used in a field with m = 1"))
            }
            Some('u') => {
                self.pos += 1;
                self.field.u().ok_or_else(|| self.err("`u` used in a field with e = 1"))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.field.from_int((n % self.field.p() as u64) as i64))
            }
            _ => Err(self.err("expected element")),
        }
    }
}
