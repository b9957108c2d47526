//! Text format: integer or rational coefficients, `*`, `^`, `+`, `-`, parentheses.
//!
//! The printer emits terms in descending graded-lex order as
//! `c*x0^2*x1 - x2 + 3/4`; parsing the printed form gives back the same polynomial.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::field::{Field, Rational};
use super::multipoly::{MultiPoly, Ring};
use super::PolyError;

pub fn parse_poly<K: Field>(text: &str, ring: &Ring<K>) -> Result<MultiPoly<K>, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ring };
    p.skip_ws();
    if p.pos == p.src.len() {
        return Err(PolyError::Syntax { pos: 0, msg: "empty input".into() });
    }
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a, K: Field> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Ring<K>,
}

impl<'a, K: Field> Parser<'a, K> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly<K>, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg_poly()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add_poly(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub_poly(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly<K>, PolyError> {
        let mut acc = self.power()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc = acc.mul_poly(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly<K>, PolyError> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.err("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| PolyError::Syntax {
                pos: start,
                msg: "exponent out of range".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<MultiPoly<K>, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits();
                let mut q = Rational::from_integer(num.parse::<BigInt>().expect("digits"));
                // a '/' directly followed by digits makes a rational literal
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let start = self.pos;
                    let den = self.digits();
                    if den.is_empty() {
                        return Err(self.err("expected denominator"));
                    }
                    let den: BigInt = den.parse().expect("digits");
                    if den == BigInt::from(0) {
                        self.pos = start;
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rational::from_integer(den);
                }
                Ok(MultiPoly::constant(self.ring, self.ring.from_rational(&q)?))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.var_index(name) {
                    Some(i) => Ok(MultiPoly::var(self.ring, i)),
                    None => Err(PolyError::UnknownVariable { name: name.to_string(), pos: start }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Printed magnitude of a coefficient, without sign.
fn magnitude<K: Field>(c: &K) -> String {
    let s = c.to_string();
    if c.is_negative() {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

pub(crate) fn write_poly<K: Field>(f: &mut fmt::Formatter<'_>, p: &MultiPoly<K>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let vars = p.ring().vars();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        match (i, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        let mag = magnitude(c);
        let unit = mag == "1";
        let mut first = true;
        if !unit || m.is_one() {
            write!(f, "{}", mag)?;
            first = false;
        }
        for (v, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", vars[v])?;
            if e > 1 {
                write!(f, "^{}", e)?;
            }
        }
    }
    Ok(())
}

/// Render a rational as `n` or `n/d`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `n`, `-n`, `n/d` or `-n/d`.
pub fn parse_rational(text: &str) -> Result<Rational, PolyError> {
    let t = text.trim();
    let bad = || PolyError::Syntax { pos: 0, msg: format!("not a rational number: {t:?}") };
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let q = match body.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) || d.is_negative() || n.is_negative() {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(body.trim().parse::<BigInt>().map_err(|_| bad())?),
    };
    Ok(if neg { -q } else { q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Fp;

    fn ring() -> Ring<Rational> {
        Ring::projective()
    }

    #[test]
    fn parses_monomial() {
        let p = parse_poly("x0^2*x2^2", &ring()).unwrap();
        assert_eq!(p.nterms(), 1);
        assert_eq!(p.terms()[0].0.exponents(), &[2, 0, 2]);
        assert_eq!(p.to_string(), "x0^2*x2^2");
    }

    #[test]
    fn zero_has_no_terms() {
        let p = parse_poly("0", &ring()).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn canonical_order_is_descending_grlex() {
        let p = parse_poly("x0*x1 - x0^2", &ring()).unwrap();
        assert_eq!(p.to_string(), "-x0^2 + x0*x1");
        let q = parse_poly("x1*x2 + x0*x1 - x0^2 + 3/4", &ring()).unwrap();
        assert_eq!(q.to_string(), "-x0^2 + x0*x1 + x1*x2 + 3/4");
    }

    #[test]
    fn rational_coefficients_and_parentheses() {
        let p = parse_poly("(x0 - 2/3*x1)^2", &ring()).unwrap();
        assert_eq!(p.to_string(), "x0^2 - 4/3*x0*x1 + 4/9*x1^2");
    }

    #[test]
    fn syntax_errors_report_position() {
        match parse_poly("x0 + * x1", &ring()) {
            Err(PolyError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        match parse_poly("x0 + y", &ring()) {
            Err(PolyError::UnknownVariable { name, pos }) => {
                assert_eq!(name, "y");
                assert_eq!(pos, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_poly("x0^", &ring()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("(x0", &ring()), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_poly("1/0", &ring()), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn prime_field_parse_reduces() {
        let r = Ring::<Fp>::prime_field(&["x"], 7);
        let p = parse_poly("10*x + 1/2", &r).unwrap();
        assert_eq!(p.to_string(), "3*x + 4");
    }

    #[test]
    fn rational_literals() {
        assert_eq!(format_rational(&parse_rational("-6/4").unwrap()), "-3/2");
        assert_eq!(format_rational(&parse_rational("5").unwrap()), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a").is_err());
    }
}
