//! The q-combinatorial vocabulary: signed q-Pochhammer symbols, q-binomial
//! coefficients, q-integers, Hahn polynomials, the terminating 3phi2 series
//! with a zero lower parameter, the product P_k(x, y), and the integer
//! rising factorial 2^k (d + 1/2)_k.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::qpoly::{LaurentPoly, Rational, RationalFunction};
use crate::terms::{DensePoly, Term};

/// The symbol `(a; q^s)_n`: base `a`, step `s >= 1`, signed length `n`.
///
/// Negative lengths use the convention
/// `(a; Q)_{-n} = 1 / ((a Q^{-n}; Q)_n)`.
#[derive(Clone, Debug)]
pub struct PochhammerSpec {
    pub base: RationalFunction,
    pub step: u32,
    pub len: i64,
}

impl PochhammerSpec {
    pub fn new(base: RationalFunction, step: u32, len: i64) -> Self {
        debug_assert!(step >= 1);
        Self { base, step, len }
    }
}

/// `(a; q^s)_n` as an exact rational function.
///
/// Errors with `SingularFactor` when a vanishing factor lands in a
/// denominator (negative length only; for nonnegative lengths a vanishing
/// factor just zeroes the product).
pub fn poch(spec: &PochhammerSpec) -> Result<RationalFunction> {
    // Monomial bases (the common case at sampled parameters) go through the
    // factored-term machinery.
    if let Some((c, e)) = spec.base.as_monomial() {
        let mut t = Term::one();
        t.mul_poch(&c, e, spec.step, spec.len)
            .map_err(|err| match err {
                Error::SingularFactor(_) => Error::SingularFactor(format!(
                    "({}; q^{})_{}",
                    spec.base, spec.step, spec.len
                )),
                other => other,
            })?;
        return t.to_ratfun();
    }
    if spec.base.is_zero() {
        return Ok(RationalFunction::one());
    }
    let s = i64::from(spec.step);
    let mut acc = RationalFunction::one();
    if spec.len >= 0 {
        for k in 0..spec.len {
            let factor = RationalFunction::one()
                - &spec.base * &RationalFunction::monomial(s * k, Rational::one());
            acc = acc * factor;
        }
    } else {
        for j in 1..=(-spec.len) {
            let factor = RationalFunction::one()
                - &spec.base * &RationalFunction::monomial(-s * j, Rational::one());
            if factor.is_zero() {
                return Err(Error::SingularFactor(format!(
                    "({}; q^{})_{}",
                    spec.base, spec.step, spec.len
                )));
            }
            acc = acc.checked_div(&factor)?;
        }
    }
    Ok(acc)
}

/// Convenience: `(a; q)_n` for a rational-function base with step 1.
pub fn poch1(base: &RationalFunction, len: i64) -> Result<RationalFunction> {
    poch(&PochhammerSpec::new(base.clone(), 1, len))
}

/// The Gaussian binomial coefficient `[n, k]_q` as a polynomial; zero
/// outside `0 <= k <= n` (the identity sums never index out of range, but
/// zero extension keeps reindexing statements easy).
///
/// Built through the partial products `[n-k+j, j]_q`, each of which is a
/// polynomial, so every division step is exact.
pub fn q_binomial(n: i64, k: i64) -> LaurentPoly {
    if k < 0 || k > n {
        return LaurentPoly::zero();
    }
    let k = k.min(n - k);
    let one = Rational::one();
    let mut p = DensePoly::one();
    for j in 1..=k {
        p.mul_binomial(&one, n - k + j);
        p.div_binomial(&one, j);
    }
    p.to_laurent()
}

/// The q-integer `[n] = (1 - q^n)/(1 - q) = 1 + q + ... + q^{n-1}`.
pub fn q_integer(n: u32) -> LaurentPoly {
    LaurentPoly::from_terms((0..i64::from(n)).map(|i| (i, Rational::one())))
}

/// Hahn polynomial `phi_n^{(b)}(x | q) = sum_k [n, k]_q (b; q)_k x^k`.
pub fn hahn(n: u32, b: &RationalFunction, x: &RationalFunction) -> Result<RationalFunction> {
    let mut acc = RationalFunction::zero();
    let mut poch_b = RationalFunction::one();
    let mut x_pow = RationalFunction::one();
    for k in 0..=i64::from(n) {
        if k > 0 {
            let factor = RationalFunction::one()
                - b * &RationalFunction::monomial(k - 1, Rational::one());
            poch_b = poch_b * factor;
            x_pow = &x_pow * x;
        }
        let binom = RationalFunction::from_poly(q_binomial(i64::from(n), k));
        acc = acc + binom * &poch_b * &x_pow;
    }
    Ok(acc)
}

/// Terminating basic hypergeometric sum
/// `3phi2(a1, a2, q^{-k}; 0, b2; q, q)
///    = sum_{i=0}^{k} (a1; q)_i (a2; q)_i (q^{-k}; q)_i
///      / ((q; q)_i (b2; q)_i) * q^i`.
///
/// The `[(-1)^i q^C(i,2)]^{1+s-r}` factor of the general series is absent
/// because `1 + s - r = 0`, and `(0; q)_i = 1`.
pub fn phi32(
    a1: &RationalFunction,
    a2: &RationalFunction,
    k: u32,
    b2: &RationalFunction,
) -> Result<RationalFunction> {
    // (b2; q)_i sits in the denominator: a factor 1 - b2 q^j vanishing
    // identically (b2 = q^{-j}) poisons every term with i > j.
    for j in 0..i64::from(k) {
        let factor =
            RationalFunction::one() - b2 * &RationalFunction::monomial(j, Rational::one());
        if factor.is_zero() {
            return Err(Error::SingularLowerParameter(b2.to_string()));
        }
    }
    let kk = i64::from(k);
    let q = |e: i64| RationalFunction::monomial(e, Rational::one());
    let mut acc = RationalFunction::one();
    let mut term = RationalFunction::one();
    for i in 1..=kk {
        // ratio t_i / t_{i-1}
        let mut ratio = (RationalFunction::one() - a1 * &q(i - 1))
            * (RationalFunction::one() - a2 * &q(i - 1))
            * (RationalFunction::one() - q(-kk + i - 1));
        ratio = ratio * q(1);
        let den = (RationalFunction::one() - q(i))
            * (RationalFunction::one() - b2 * &q(i - 1));
        term = term * ratio.checked_div(&den)?;
        acc = acc + &term;
    }
    Ok(acc)
}

/// `P_k(x, y) = (x - y)(x - yq) ... (x - y q^{k-1})`.
pub fn pfall(x: &RationalFunction, y: &RationalFunction, k: u32) -> RationalFunction {
    let mut acc = RationalFunction::one();
    for j in 0..i64::from(k) {
        acc = acc * (x - &(y * &RationalFunction::monomial(j, Rational::one())));
    }
    acc
}

/// `2^k (d + 1/2)_k = prod_{j=0}^{k-1} (2d + 2j + 1)`, an exact integer.
pub fn central_rise(d: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..i64::from(k) {
        acc *= 2 * d + 2 * j + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};

    fn rf_int(n: i64) -> RationalFunction {
        RationalFunction::from_rational(rint(n))
    }

    #[test]
    fn poch_examples() {
        // (2; q)_2 = (1-2)(1-2q) = -1 + 2q
        let p = poch(&PochhammerSpec::new(rf_int(2), 1, 2)).unwrap();
        assert_eq!(
            p,
            RationalFunction::from_poly(LaurentPoly::from_terms([(0, rint(-1)), (1, rint(2))]))
        );
        // (q; q)_3 = (1-q)(1-q^2)(1-q^3)
        let p = poch(&PochhammerSpec::new(RationalFunction::var(), 1, 3)).unwrap();
        let direct = RationalFunction::from_poly(
            &(&LaurentPoly::from_coeffs(&[1, -1]) * &LaurentPoly::from_coeffs(&[1, 0, -1]))
                * &LaurentPoly::from_coeffs(&[1, 0, 0, -1]),
        );
        assert_eq!(p, direct);
        // (q^2; q)_{-1} = 1/(1 - q)
        let base = RationalFunction::monomial(2, rint(1));
        let p = poch(&PochhammerSpec::new(base, 1, -1)).unwrap();
        let expect =
            RationalFunction::new(LaurentPoly::one(), LaurentPoly::from_coeffs(&[1, -1])).unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn poch_singular_negative_index() {
        // (q; q)_{-1} = 1/(1 - q q^{-1}) = 1/0
        let spec = PochhammerSpec::new(RationalFunction::var(), 1, -1);
        assert!(matches!(poch(&spec), Err(Error::SingularFactor(_))));
    }

    #[test]
    fn poch_general_base() {
        // base (1+q)/(1-q), length 2, matches direct computation
        let base = RationalFunction::new(
            LaurentPoly::from_coeffs(&[1, 1]),
            LaurentPoly::from_coeffs(&[1, -1]),
        )
        .unwrap();
        let p = poch(&PochhammerSpec::new(base.clone(), 1, 2)).unwrap();
        let direct = (RationalFunction::one() - &base)
            * (RationalFunction::one() - &base * &RationalFunction::var());
        assert_eq!(p, direct);
    }

    #[test]
    fn q_binomial_examples() {
        assert!(q_binomial(7, 0).is_one());
        assert_eq!(q_binomial(2, 1), LaurentPoly::from_coeffs(&[1, 1]));
        assert_eq!(q_binomial(4, 2), LaurentPoly::from_coeffs(&[1, 1, 2, 1, 1]));
        assert_eq!(
            q_binomial(6, 3),
            LaurentPoly::from_coeffs(&[1, 1, 2, 3, 3, 3, 3, 2, 1, 1])
        );
        assert!(q_binomial(5, -1).is_zero());
        assert!(q_binomial(5, 6).is_zero());
    }

    #[test]
    fn q_binomial_pascal_recursion_oracle() {
        // [n+1, k] = [n, k] q^k + [n, k-1]
        for n in 0..=12i64 {
            for k in 0..=n + 1 {
                let lhs = q_binomial(n + 1, k);
                let rhs = q_binomial(n, k).shifted(k) + q_binomial(n, k - 1);
                // shifted multiplies by q^k
                assert_eq!(lhs, rhs, "q-Pascal at n={n} k={k}");
            }
        }
    }

    #[test]
    fn q_integer_examples() {
        assert!(q_integer(0).is_zero());
        assert!(q_integer(1).is_one());
        assert_eq!(q_integer(3), LaurentPoly::from_coeffs(&[1, 1, 1]));
    }

    #[test]
    fn hahn_examples() {
        let b = RationalFunction::from_rational(rat(2, 3));
        let x = RationalFunction::from_rational(rat(-1, 2));
        assert!(hahn(0, &b, &x).unwrap().is_one());
        // n = 1: 1 + (1 - b) x
        let expect = RationalFunction::one() + (RationalFunction::one() - &b) * &x;
        assert_eq!(hahn(1, &b, &x).unwrap(), expect);
        // n = 2: 1 + (1+q)(1-b)x + (1-b)(1-bq)(x^2)
        let q = RationalFunction::var();
        let expect = RationalFunction::one()
            + (RationalFunction::one() + &q) * (RationalFunction::one() - &b) * &x
            + (RationalFunction::one() - &b)
                * (RationalFunction::one() - &b * &q)
                * &x
                * &x;
        assert_eq!(hahn(2, &b, &x).unwrap(), expect);
    }

    #[test]
    fn phi32_examples() {
        let zero = RationalFunction::zero;
        // k = 0 -> single term 1
        assert!(phi32(&zero(), &zero(), 0, &rf_int(2)).unwrap().is_one());
        // k = 1, a1 = a2 = 0, b2 = 2 -> 1 - 1/(1-2) = 2
        let v = phi32(&zero(), &zero(), 1, &rf_int(2)).unwrap();
        assert_eq!(v, rf_int(2));
        // b2 = 1 is singular for k >= 1
        assert!(matches!(
            phi32(&zero(), &zero(), 1, &rf_int(1)),
            Err(Error::SingularLowerParameter(_))
        ));
    }

    #[test]
    fn pfall_examples() {
        let x = RationalFunction::from_rational(rat(3, 2));
        let y = RationalFunction::from_rational(rat(-2, 7));
        assert!(pfall(&x, &y, 0).is_one());
        assert_eq!(pfall(&x, &y, 1), &x - &y);
        let expect = (&x - &y) * (&x - &(&y * &RationalFunction::var()));
        assert_eq!(pfall(&x, &y, 2), expect);
    }

    #[test]
    fn central_rise_examples() {
        assert_eq!(central_rise(0, 2), BigInt::from(3));
        assert_eq!(central_rise(7, 0), BigInt::from(1));
        assert_eq!(central_rise(-1, 2), BigInt::from(-1));
        // 2^k (1/2)_k / k! = C(2k, k) / 2^k cross-check at k = 3:
        // central_rise(0,3) = 1*3*5 = 15, and C(6,3)/8 * 6 = 15.
        assert_eq!(central_rise(0, 3), BigInt::from(15));
    }
}
