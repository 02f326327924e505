//! Plain-text rendering and parsing of polynomials, e.g. "q^2 - q + 1".
//!
//! Grammar (whitespace-insensitive):
//!   poly   := term (('+'|'-') term)*
//!   term   := coeff | coeff '*'? qpow | qpow
//!   coeff  := integer | integer '/' integer
//!   qpow   := 'q' | 'q^' integer        (integer may be negative)

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use super::{LaurentPoly, Rational, RationalFunction};
use crate::error::Error;

fn fmt_coeff(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest exponent first.
        for (i, (&e, c)) in self.terms().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if e == 0 {
                write!(f, "{}", fmt_coeff(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{} ", fmt_coeff(&mag))?;
                }
                if e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num())
        } else {
            write!(f, "({}) / ({})", self.num(), self.den())
        }
    }
}

/// Parse the rendering grammar above.
pub fn parse_laurent(s: &str) -> Result<LaurentPoly, Error> {
    let bad = |msg: &str| Error::Config(format!("polynomial parse error: {msg} in {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(bad("empty input"));
    }
    let mut poly = LaurentPoly::zero();
    let bytes = compact.as_bytes();
    let mut pos = 0usize;
    let mut sign = 1i64;
    // Leading sign.
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        pos = 1;
    }
    while pos < bytes.len() {
        let start = pos;
        // term: [coeff ['/'] ] ['*'] ['q' ['^' int]]
        let mut num: Option<i128> = None;
        let mut den: i128 = 1;
        if bytes[pos].is_ascii_digit() {
            let (v, np) = read_int(bytes, pos).ok_or_else(|| bad("bad integer"))?;
            num = Some(v);
            pos = np;
            if pos < bytes.len() && bytes[pos] == b'/' {
                let (v, np) = read_int(bytes, pos + 1).ok_or_else(|| bad("bad denominator"))?;
                if v == 0 {
                    return Err(bad("zero denominator"));
                }
                den = v;
                pos = np;
            }
        }
        if pos < bytes.len() && bytes[pos] == b'*' {
            pos += 1;
        }
        let mut exp = 0i64;
        if pos < bytes.len() && bytes[pos] == b'q' {
            pos += 1;
            exp = 1;
            if pos < bytes.len() && bytes[pos] == b'^' {
                pos += 1;
                let neg = pos < bytes.len() && bytes[pos] == b'-';
                if neg {
                    pos += 1;
                }
                let (v, np) = read_int(bytes, pos).ok_or_else(|| bad("bad exponent"))?;
                exp = if neg { -(v as i64) } else { v as i64 };
                pos = np;
            }
        } else if num.is_none() {
            return Err(bad("expected coefficient or q"));
        }
        if pos == start {
            return Err(bad("empty term"));
        }
        let numerator = num.unwrap_or(1) * i128::from(sign);
        poly.add_term(
            exp,
            Rational::new(numerator.into(), den.into()),
        );
        // Separator.
        if pos == bytes.len() {
            break;
        }
        match bytes[pos] {
            b'+' => sign = 1,
            b'-' => sign = -1,
            _ => return Err(bad("expected + or -")),
        }
        pos += 1;
        if pos == bytes.len() {
            return Err(bad("trailing sign"));
        }
    }
    Ok(poly)
}

fn read_int(bytes: &[u8], mut pos: usize) -> Option<(i128, usize)> {
    let start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == start {
        return None;
    }
    std::str::from_utf8(&bytes[start..pos])
        .ok()?
        .parse::<i128>()
        .ok()
        .map(|v| (v, pos))
}

impl FromStr for LaurentPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_laurent(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};

    #[test]
    fn renders_like_the_cli() {
        let p = LaurentPoly::from_coeffs(&[1, -1, 1]);
        assert_eq!(p.to_string(), "q^2 - q + 1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::monomial(-1, rint(1)).to_string(), "q^-1");
        let p = LaurentPoly::from_terms([(2, rat(3, 2)), (0, rint(-1))]);
        assert_eq!(p.to_string(), "3/2 q^2 - 1");
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "q^2 - q + 1",
            "0",
            "q^-1",
            "3/2 q^2 - 1",
            "-q^3 - 12 + 5/7 q^-2",
            "1",
            "-1",
        ] {
            let p: LaurentPoly = s.parse().unwrap();
            assert_eq!(p.to_string(), s, "round trip of {s}");
        }
    }

    #[test]
    fn parse_accepts_compact_forms() {
        let a: LaurentPoly = "3*q^2+1".parse().unwrap();
        let b = LaurentPoly::from_terms([(2, rint(3)), (0, rint(1))]);
        assert_eq!(a, b);
        assert!("q^".parse::<LaurentPoly>().is_err());
        assert!("2//3".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }
}
