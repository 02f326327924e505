use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::laurent::gcd;
use super::{LaurentPoly, Rational};
use crate::error::{Error, Result};

/// Rational function in `q`, kept in canonical form:
///
/// - the denominator is monic, ordinary, with nonzero constant term;
/// - numerator and denominator share no polynomial factor;
/// - any net power of `q` lives in the numerator's exponent range (the
///   numerator may be a Laurent polynomial).
///
/// Canonical form is unique, so equality is structural equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    /// Canonicalize `num / den`. Errors with `DivisionByZero` when `den = 0`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            });
        }
        // Move the denominator's net q-power into the numerator.
        let dshift = den.min_exp().unwrap();
        let mut den = den.shifted(-dshift);
        let mut num = num.shifted(-dshift);
        // Split the numerator as q^k * ordinary, cancel, reattach.
        let nshift = num.min_exp().unwrap();
        num = num.shifted(-nshift);
        let g = gcd(&num, &den)?;
        if !g.is_one() {
            num = num.div_rem(&g)?.0;
            den = den.div_rem(&g)?.0;
        }
        let lead = den.leading_coeff().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num.scale(&inv, 0);
            den.scale(&inv, 0);
        }
        Ok(Self {
            num: num.shifted(nshift),
            den,
        })
    }

    pub fn zero() -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn var() -> Self {
        Self::from_poly(LaurentPoly::var())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `c * q^e`.
    pub fn monomial(e: i64, c: Rational) -> Self {
        Self::from_poly(LaurentPoly::monomial(e, c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// `Some((c, e))` when the value is exactly `c * q^e`, `c != 0`.
    pub fn as_monomial(&self) -> Option<(Rational, i64)> {
        if self.den.is_one() && self.num.term_count() == 1 {
            let (&e, c) = self.num.terms().next().unwrap();
            Some((c.clone(), e))
        } else {
            None
        }
    }

    /// `Some(c)` when the value is a constant (including zero).
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        match self.as_monomial() {
            Some((c, 0)) => Some(c),
            _ => None,
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    /// Exact evaluation; errors when the denominator vanishes at the point
    /// or when `q0 = 0` meets a negative exponent.
    pub fn eval(&self, q0: &Rational) -> Result<Rational> {
        let den = self.den.eval(q0)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(q0)? / den)
    }

    /// Substitute `q -> q^k`, `k >= 1`.
    pub fn compose_qpow(&self, k: u32) -> Self {
        Self::new(self.num.compose_qpow(k), self.den.compose_qpow(k))
            .expect("nonzero denominator stays nonzero under dilation")
    }

    /// Substitute `q -> -q`.
    pub fn compose_neg_q(&self) -> Self {
        Self::new(self.num.compose_neg_q(), self.den.compose_neg_q())
            .expect("nonzero denominator stays nonzero under negation")
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g = gcd(&self.den, &rhs.den).expect("denominators nonzero");
        let (da, _) = self.den.div_rem(&g).unwrap();
        let (db, _) = rhs.den.div_rem(&g).unwrap();
        let num = &self.num * &db + &rhs.num * &da;
        let den = &self.den * &db;
        RationalFunction::new(num, den).expect("denominator nonzero")
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("denominator nonzero")
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($trait:ident, $fn:ident) => {
        impl $trait for RationalFunction {
            type Output = RationalFunction;
            fn $fn(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$fn(&rhs)
            }
        }
        impl $trait<&RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $fn(self, rhs: &RationalFunction) -> RationalFunction {
                (&self).$fn(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl std::fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};

    #[test]
    fn cancellation() {
        // (q^2 - 1) / (q - 1) -> q + 1 over 1
        let f = RationalFunction::new(
            LaurentPoly::from_coeffs(&[-1, 0, 1]),
            LaurentPoly::from_coeffs(&[-1, 1]),
        )
        .unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &LaurentPoly::from_coeffs(&[1, 1]));
    }

    #[test]
    fn common_denominator_add() {
        // 1/(1-q) + 1/(1+q) = 2/(1-q^2), canonical monic den: q^2 - 1, num -2
        let one = LaurentPoly::one;
        let a = RationalFunction::new(one(), LaurentPoly::from_coeffs(&[1, -1])).unwrap();
        let b = RationalFunction::new(one(), LaurentPoly::from_coeffs(&[1, 1])).unwrap();
        let s = &a + &b;
        assert_eq!(s.den(), &LaurentPoly::from_coeffs(&[-1, 0, 1]));
        assert_eq!(s.num(), &LaurentPoly::constant(rint(-2)));
        // and equals 2/(1-q^2) by value
        let direct =
            RationalFunction::new(LaurentPoly::constant(rint(2)), LaurentPoly::from_coeffs(&[1, 0, -1]))
                .unwrap();
        assert_eq!(s, direct);
    }

    #[test]
    fn q_power_absorbed_into_numerator() {
        // (1-q)/(q - q^2) -> q^{-1}
        let f = RationalFunction::new(
            LaurentPoly::from_coeffs(&[1, -1]),
            LaurentPoly::from_coeffs(&[0, 1, -1]),
        )
        .unwrap();
        assert!(f.is_polynomial());
        assert_eq!(f.num(), &LaurentPoly::monomial(-1, rint(1)));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            RationalFunction::new(LaurentPoly::one(), LaurentPoly::zero()).unwrap_err(),
            Error::DivisionByZero
        );
        assert_eq!(
            RationalFunction::zero().inverse().unwrap_err(),
            Error::DivisionByZero
        );
    }

    #[test]
    fn canonical_equality_decides() {
        // a - b == 0 iff a == b
        let a = RationalFunction::new(
            LaurentPoly::from_coeffs(&[0, 0, 3]),
            LaurentPoly::from_coeffs(&[3, 3]),
        )
        .unwrap();
        let b = RationalFunction::new(
            LaurentPoly::from_coeffs(&[0, 0, 1]),
            LaurentPoly::from_coeffs(&[1, 1]),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!((&a - &b).is_zero());
        let c = &b + &RationalFunction::from_rational(rat(1, 7));
        assert_ne!(a, c);
        assert!(!(&a - &c).is_zero());
    }

    #[test]
    fn monomial_detection() {
        let m = RationalFunction::monomial(-3, rat(2, 5));
        assert_eq!(m.as_monomial(), Some((rat(2, 5), -3)));
        assert_eq!(RationalFunction::one().as_rational(), Some(rint(1)));
        assert_eq!(RationalFunction::zero().as_rational(), Some(rint(0)));
    }
}
