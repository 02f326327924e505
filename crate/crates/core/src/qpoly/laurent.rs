use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Sparse Laurent polynomial in `q`: a map from integer exponents (possibly
/// negative) to nonzero rational coefficients. The zero polynomial is the
/// empty map. Exponents in this problem domain reach Theta(n^2) while term
/// counts stay small, hence the sparse representation.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, Rational::one())
    }

    /// The variable `q` itself.
    pub fn var() -> Self {
        Self::monomial(1, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// `c * q^e`; the zero polynomial when `c = 0`.
    pub fn monomial(e: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i64, Rational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Ordinary polynomial from coefficients in ascending degree order.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as i64, super::rint(c))),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    /// True when no exponent is negative (the zero polynomial is ordinary).
    pub fn is_ordinary(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Degree of an ordinary polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<i64> {
        self.max_exp()
    }

    pub fn coeff(&self, e: i64) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(
        &self,
    ) -> std::collections::btree_map::Iter<'_, i64, Rational> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Multiply by `c * q^e` in place.
    pub fn scale(&mut self, c: &Rational, e: i64) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        let old = std::mem::take(&mut self.terms);
        for (k, v) in old {
            self.terms.insert(k + e, v * c);
        }
    }

    pub fn shifted(&self, e: i64) -> Self {
        let mut p = self.clone();
        p.scale(&Rational::one(), e);
        p
    }

    /// Divide every coefficient by the leading one, making the polynomial
    /// monic. No-op on zero.
    pub fn into_monic(mut self) -> Self {
        if let Some(lead) = self.leading_coeff().cloned() {
            if !lead.is_one() {
                for v in self.terms.values_mut() {
                    *v /= &lead;
                }
            }
        }
        self
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, q0: &Rational) -> Result<Rational> {
        if q0.is_zero() && self.min_exp().map_or(false, |e| e < 0) {
            return Err(Error::ZeroBase);
        }
        let mut acc = Rational::zero();
        for (&e, c) in &self.terms {
            acc += c * rat_pow(q0, e)?;
        }
        Ok(acc)
    }

    /// Substitute `q -> q^k` (exponent dilation), `k >= 1`.
    pub fn compose_qpow(&self, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&e, c)| (e * i64::from(k), c.clone()))
                .collect(),
        }
    }

    /// Substitute `q -> -q`.
    pub fn compose_neg_q(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&e, c)| (e, c * super::sign_pow(e))),
        )
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Quotient and remainder of ordinary polynomial division:
    /// `self = q * rhs + r` with `deg r < deg rhs`.
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        if rhs.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if !self.is_ordinary() || !rhs.is_ordinary() {
            return Err(Error::NotOrdinary);
        }
        let db = rhs.degree().unwrap();
        let lead = rhs.leading_coeff().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while let Some(da) = rem.degree() {
            if da < db {
                break;
            }
            let c = rem.leading_coeff().unwrap() / &lead;
            let e = da - db;
            quo.add_term(e, c.clone());
            for (&be, bc) in &rhs.terms {
                rem.add_term(be + e, -(bc * &c));
            }
        }
        Ok((quo, rem))
    }

    /// True iff `rhs` divides `self` exactly (ordinary polynomials).
    pub fn divides_exactly(&self, rhs: &Self) -> Result<bool> {
        Ok(self.div_rem(rhs)?.1.is_zero())
    }
}

/// Monic greatest common divisor of two ordinary polynomials.
///
/// Primitive pseudo-remainder sequence over the integers: rational content
/// is cleared up front and every pseudo-remainder is divided by its integer
/// content, which keeps coefficient growth linear in the degree instead of
/// the quadratic blowup of the naive rational Euclid.
pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    if !a.is_ordinary() || !b.is_ordinary() {
        return Err(Error::NotOrdinary);
    }
    let mut x = primitive_int_coeffs(a);
    let mut y = primitive_int_coeffs(b);
    if x.is_empty() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        let r = pseudo_rem_primitive(&x, &y);
        x = y;
        y = r;
    }
    // Back to a monic rational polynomial.
    let lead = x.last().expect("nonzero gcd").clone();
    let poly = LaurentPoly::from_terms(
        x.into_iter()
            .enumerate()
            .map(|(i, c)| (i as i64, Rational::new(c, lead.clone()))),
    );
    Ok(poly)
}

/// Integer coefficient vector (ascending degree) of `p` with rational and
/// integer content removed; empty for zero.
fn primitive_int_coeffs(p: &LaurentPoly) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    if p.is_zero() {
        return vec![];
    }
    let deg = p.degree().unwrap() as usize;
    let mut den_lcm = BigInt::from(1);
    for (_, c) in p.terms() {
        den_lcm = den_lcm.lcm(c.denom());
    }
    let mut out = vec![BigInt::from(0); deg + 1];
    for (&e, c) in p.terms() {
        out[e as usize] = c.numer() * (&den_lcm / c.denom());
    }
    divide_by_content(&mut out);
    out
}

fn divide_by_content(coeffs: &mut Vec<num_bigint::BigInt>) {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Zero as _;
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    let mut content = BigInt::from(0);
    for c in coeffs.iter() {
        content = content.gcd(c);
        if content == BigInt::from(1) {
            return;
        }
    }
    if content > BigInt::from(1) {
        for c in coeffs.iter_mut() {
            *c = &*c / &content;
        }
    }
}

/// Primitive pseudo-remainder: `lead(y)^(dx-dy+1) * x mod y`, then strip the
/// integer content. Inputs are nonzero integer coefficient vectors.
fn pseudo_rem_primitive(
    x: &[num_bigint::BigInt],
    y: &[num_bigint::BigInt],
) -> Vec<num_bigint::BigInt> {
    use num_traits::Zero as _;
    let dy = y.len() - 1;
    let lead = &y[dy];
    let mut r = x.to_vec();
    while r.len() > dy {
        let dr = r.len() - 1;
        let top = r.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        // r := lead * r - top * q^{dr-dy} * y  (top coefficient cancels)
        for c in r.iter_mut() {
            *c = &*c * lead;
        }
        let shift = dr - dy;
        for (j, yc) in y.iter().enumerate().take(dy) {
            r[shift + j] -= &top * yc;
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    let mut r = r;
    divide_by_content(&mut r);
    r
}

fn rat_pow(base: &Rational, e: i64) -> Result<Rational> {
    if e == 0 {
        return Ok(Rational::one());
    }
    if base.is_zero() {
        return if e > 0 {
            Ok(Rational::zero())
        } else {
            Err(Error::ZeroBase)
        };
    }
    let mut acc = Rational::one();
    let mut b = if e > 0 { base.clone() } else { base.recip() };
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    Ok(acc)
}

/// Exact power of a rational with signed exponent; errors on `0^negative`.
pub fn rational_pow(base: &Rational, e: i64) -> Result<Rational> {
    rat_pow(base, e)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (&ea, ca) in &self.terms {
            for (&eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($trait:ident, $fn:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $fn(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$fn(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $fn(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$fn(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};

    fn q() -> LaurentPoly {
        LaurentPoly::var()
    }

    #[test]
    fn arithmetic_examples() {
        // (q-1)(q+1) = q^2 - 1
        let a = q() - LaurentPoly::one();
        let b = q() + LaurentPoly::one();
        let prod = &a * &b;
        assert_eq!(prod, LaurentPoly::from_terms([(2, rint(1)), (0, rint(-1))]));

        // q^{-1} * q = 1
        let inv = LaurentPoly::monomial(-1, rint(1));
        assert!((&inv * &q()).is_one());

        // (1+q) + (-1-q) = 0
        let c = LaurentPoly::from_coeffs(&[1, 1]);
        assert!((&c + &(-&c)).is_zero());
    }

    #[test]
    fn div_rem_examples() {
        // (q^2 - 1) / (q - 1) = (q + 1, 0)
        let num = LaurentPoly::from_coeffs(&[-1, 0, 1]);
        let den = LaurentPoly::from_coeffs(&[-1, 1]);
        let (quo, rem) = num.div_rem(&den).unwrap();
        assert_eq!(quo, LaurentPoly::from_coeffs(&[1, 1]));
        assert!(rem.is_zero());

        // q^2 / (q^2 + q + 1) = (1, -q - 1)
        let num = LaurentPoly::from_coeffs(&[0, 0, 1]);
        let den = LaurentPoly::from_coeffs(&[1, 1, 1]);
        let (quo, rem) = num.div_rem(&den).unwrap();
        assert!(quo.is_one());
        assert_eq!(rem, LaurentPoly::from_coeffs(&[-1, -1]));

        // q / q^2 = (0, q)
        let (quo, rem) = q().div_rem(&q().pow(2)).unwrap();
        assert!(quo.is_zero());
        assert_eq!(rem, q());
    }

    #[test]
    fn div_rem_errors() {
        assert_eq!(
            q().div_rem(&LaurentPoly::zero()).unwrap_err(),
            Error::ZeroDivisor
        );
        let lau = LaurentPoly::monomial(-1, rint(1));
        assert_eq!(lau.div_rem(&q()).unwrap_err(), Error::NotOrdinary);
        assert_eq!(q().div_rem(&lau).unwrap_err(), Error::NotOrdinary);
    }

    #[test]
    fn gcd_examples() {
        // gcd(q^2-1, q^3-1) = q - 1
        let a = LaurentPoly::from_coeffs(&[-1, 0, 1]);
        let b = LaurentPoly::from_coeffs(&[-1, 0, 0, 1]);
        assert_eq!(gcd(&a, &b).unwrap(), LaurentPoly::from_coeffs(&[-1, 1]));

        // gcd(q^2+q+1, q-1) = 1
        let a = LaurentPoly::from_coeffs(&[1, 1, 1]);
        let b = LaurentPoly::from_coeffs(&[-1, 1]);
        assert!(gcd(&a, &b).unwrap().is_one());

        // gcd(0, 2q+2) = q + 1 (monic normalization)
        let b = LaurentPoly::from_coeffs(&[2, 2]);
        assert_eq!(
            gcd(&LaurentPoly::zero(), &b).unwrap(),
            LaurentPoly::from_coeffs(&[1, 1])
        );

        assert_eq!(
            gcd(&LaurentPoly::zero(), &LaurentPoly::zero()).unwrap_err(),
            Error::BothZero
        );
    }

    #[test]
    fn eval_examples() {
        // eval(q^2 + 1, 2) = 5
        let p = LaurentPoly::from_coeffs(&[1, 0, 1]);
        assert_eq!(p.eval(&rint(2)).unwrap(), rint(5));

        // eval(q^{-1}, 1/2) = 2
        let p = LaurentPoly::monomial(-1, rint(1));
        assert_eq!(p.eval(&rat(1, 2)).unwrap(), rint(2));

        // eval(q^{-1}, 0) -> ZeroBase
        assert_eq!(p.eval(&rint(0)).unwrap_err(), Error::ZeroBase);
    }

    #[test]
    fn substitution() {
        let p = LaurentPoly::from_terms([(3, rint(2)), (-1, rat(1, 2))]);
        let d = p.compose_qpow(2);
        assert_eq!(d, LaurentPoly::from_terms([(6, rint(2)), (-2, rat(1, 2))]));
        let n = p.compose_neg_q();
        assert_eq!(
            n,
            LaurentPoly::from_terms([(3, rint(-2)), (-1, rat(-1, 2))])
        );
    }
}
