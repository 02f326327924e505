//! Factored-term arithmetic for sums of q-Pochhammer quotients.
//!
//! At sampled rational parameter points every summand handled by the
//! verification engines has the shape
//!
//! ```text
//!     coeff * q^qexp * prod (1 - c_i q^{e_i}) / prod (1 - d_j q^{f_j})
//! ```
//!
//! with rational `c, d` and positive exponents after normalization. Keeping
//! numerators and denominators as factor multisets makes common denominators
//! a multiset join instead of a polynomial gcd, and lets a sum expand into a
//! single dense numerator with cheap binomial multiplies and exact binomial
//! divisions. Identity checks compare expanded numerators; congruence checks
//! reduce the expanded numerator by the modulus polynomial.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qpoly::{rational_pow, LaurentPoly, Rational, RationalFunction};
use crate::qring::{reduce_poly, Modulus, Residue};
use std::sync::Arc;

/// `(e, c)` stands for the binomial `1 - c q^e` with `e >= 1`, `c != 0`.
pub type FactorKey = (i64, Rational);
/// Multiset of binomial factors.
pub type FactorSet = BTreeMap<FactorKey, u32>;

/// One normalized summand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    coeff: Rational,
    qexp: i64,
    num: FactorSet,
    den: FactorSet,
}

impl Term {
    pub fn one() -> Self {
        Self {
            coeff: Rational::one(),
            qexp: 0,
            num: FactorSet::new(),
            den: FactorSet::new(),
        }
    }

    pub fn monomial(coeff: Rational, qexp: i64) -> Self {
        let mut t = Self::one();
        t.coeff = coeff;
        t.qexp = qexp;
        t
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &Rational {
        &self.coeff
    }

    pub fn qexp(&self) -> i64 {
        self.qexp
    }

    pub fn mul_coeff(&mut self, c: &Rational) {
        self.coeff *= c;
        if self.coeff.is_zero() {
            self.num.clear();
            self.den.clear();
        }
    }

    pub fn div_coeff(&mut self, c: &Rational) -> Result<()> {
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.coeff /= c;
        Ok(())
    }

    /// Multiply by `(-1)^e`.
    pub fn mul_sign(&mut self, e: i64) {
        if e.rem_euclid(2) == 1 {
            self.coeff = -std::mem::take(&mut self.coeff);
        }
    }

    pub fn mul_qpow(&mut self, e: i64) {
        self.qexp += e;
    }

    /// Multiply by `c^e` for signed `e`.
    pub fn mul_rat_pow(&mut self, c: &Rational, e: i64) -> Result<()> {
        if c.is_zero() && e < 0 {
            return Err(Error::DivisionByZero);
        }
        self.mul_coeff(&rational_pow(c, e)?);
        Ok(())
    }

    fn push_side(&mut self, key: FactorKey, mult: u32, den: bool) {
        if self.coeff.is_zero() {
            return;
        }
        let (mine, other) = if den {
            (&mut self.den, &mut self.num)
        } else {
            (&mut self.num, &mut self.den)
        };
        // Cancel against the opposite side first.
        let mut mult = mult;
        if let Some(o) = other.get_mut(&key) {
            let cancel = mult.min(*o);
            *o -= cancel;
            mult -= cancel;
            if *o == 0 {
                other.remove(&key);
            }
        }
        if mult > 0 {
            *mine.entry(key).or_insert(0) += mult;
        }
    }

    /// Multiply by the single factor `1 - c q^e` (or divide, with `den`).
    ///
    /// Normalization: `e = 0` folds the constant `1 - c` into the
    /// coefficient; `e < 0` rewrites `1 - c q^e = -c q^e (1 - q^{-e}/c)`.
    /// A vanishing factor zeroes the term on the numerator side and is a
    /// `SingularFactor` error on the denominator side.
    pub fn mul_factor_signed(&mut self, c: &Rational, e: i64, den: bool) -> Result<()> {
        // A term that is already zero still rejects singular denominator
        // factors: 0 * (1/0) is not 0, it is an ill-posed statement.
        if c.is_zero() {
            return Ok(());
        }
        if e == 0 {
            let k = Rational::one() - c;
            if k.is_zero() {
                if den {
                    return Err(Error::SingularFactor(format!("1 - ({c})")));
                }
                self.mul_coeff(&Rational::zero());
                return Ok(());
            }
            if den {
                self.coeff /= k;
            } else {
                self.coeff *= k;
            }
            return Ok(());
        }
        if e < 0 {
            // 1 - c q^e = (-c q^e) * (1 - (1/c) q^{-e})
            let unit = -c.clone();
            if den {
                self.coeff /= unit;
                self.qexp -= e;
            } else {
                self.coeff *= unit;
                self.qexp += e;
            }
            self.push_side((-e, c.recip()), 1, den);
            return Ok(());
        }
        self.push_side((e, c.clone()), 1, den);
        Ok(())
    }

    pub fn mul_factor(&mut self, c: &Rational, e: i64) -> Result<()> {
        self.mul_factor_signed(c, e, false)
    }

    pub fn div_factor(&mut self, c: &Rational, e: i64) -> Result<()> {
        self.mul_factor_signed(c, e, true)
    }

    /// Multiply by the Pochhammer symbol `(c q^{base}; q^{step})_len`
    /// with the signed-index convention
    /// `(a; Q)_{-m} = 1 / ((a Q^{-m}; Q)_m)`.
    pub fn mul_poch_signed(
        &mut self,
        c: &Rational,
        base: i64,
        step: u32,
        len: i64,
        den: bool,
    ) -> Result<()> {
        let s = i64::from(step);
        if len >= 0 {
            for k in 0..len {
                self.mul_factor_signed(c, base + s * k, den)?;
            }
        } else {
            for j in 1..=(-len) {
                self.mul_factor_signed(c, base - s * j, !den)?;
            }
        }
        Ok(())
    }

    pub fn mul_poch(&mut self, c: &Rational, base: i64, step: u32, len: i64) -> Result<()> {
        self.mul_poch_signed(c, base, step, len, false)
    }

    pub fn div_poch(&mut self, c: &Rational, base: i64, step: u32, len: i64) -> Result<()> {
        self.mul_poch_signed(c, base, step, len, true)
    }

    /// Multiply by the q-binomial `[n, k]` in the variable `q^step`
    /// (zero outside `0 <= k <= n`).
    pub fn mul_qbin(&mut self, n: i64, k: i64, step: u32) -> Result<()> {
        if k < 0 || k > n {
            self.mul_coeff(&Rational::zero());
            return Ok(());
        }
        let one = Rational::one();
        let s = i64::from(step);
        // (q^{s(n-k+1)}; q^s)_k / (q^s; q^s)_k
        self.mul_poch(&one, s * (n - k + 1), step, k)?;
        self.div_poch(&one, s, step, k)
    }

    pub fn mul_term(&mut self, other: &Term) {
        if self.is_zero() {
            return;
        }
        if other.is_zero() {
            self.mul_coeff(&Rational::zero());
            return;
        }
        self.coeff *= &other.coeff;
        self.qexp += other.qexp;
        for (key, &m) in &other.num {
            self.push_side(key.clone(), m, false);
        }
        for (key, &m) in &other.den {
            self.push_side(key.clone(), m, true);
        }
    }

    /// The reciprocal term; errors if this term is zero.
    pub fn inverse(&self) -> Result<Term> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Term {
            coeff: self.coeff.recip(),
            qexp: -self.qexp,
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    /// Substitute `q -> -q`: each factor `1 - c q^e` becomes
    /// `1 - (-1)^e c q^e` and the unit picks up `(-1)^qexp`.
    pub fn subst_neg_q(&self) -> Term {
        let flip = |set: &FactorSet| -> FactorSet {
            set.iter()
                .map(|((e, c), &m)| {
                    let c = if e.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
                    ((*e, c), m)
                })
                .collect()
        };
        let mut coeff = self.coeff.clone();
        if self.qexp.rem_euclid(2) == 1 {
            coeff = -coeff;
        }
        Term {
            coeff,
            qexp: self.qexp,
            num: flip(&self.num),
            den: flip(&self.den),
        }
    }

    /// Expand this single term into a rational function (exact).
    pub fn to_ratfun(&self) -> Result<RationalFunction> {
        if self.is_zero() {
            return Ok(RationalFunction::zero());
        }
        let mut num = DensePoly::one();
        for ((e, c), &m) in &self.num {
            for _ in 0..m {
                num.mul_binomial(c, *e);
            }
        }
        let mut den = DensePoly::one();
        for ((e, c), &m) in &self.den {
            for _ in 0..m {
                den.mul_binomial(c, *e);
            }
        }
        let mut n = num.to_laurent();
        n.scale(&self.coeff, self.qexp);
        RationalFunction::new(n, den.to_laurent())
    }
}

/// A formal sum of factored terms.
#[derive(Clone, Debug, Default)]
pub struct TermSum {
    terms: Vec<Term>,
}

impl TermSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: Term) {
        if !t.is_zero() {
            self.terms.push(t);
        }
    }

    pub fn extend(&mut self, other: TermSum) {
        for t in other.terms {
            self.push(t);
        }
    }

    pub fn negate(&mut self) {
        for t in &mut self.terms {
            t.coeff = -std::mem::take(&mut t.coeff);
        }
    }

    pub fn negated(mut self) -> Self {
        self.negate();
        self
    }

    pub fn scale(&mut self, factor: &Term) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for t in &mut self.terms {
            t.mul_term(factor);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn subst_neg_q(&self) -> TermSum {
        TermSum {
            terms: self.terms.iter().map(Term::subst_neg_q).collect(),
        }
    }

    /// Least common multiple (multiset join) of all term denominators.
    pub fn common_den(&self) -> FactorSet {
        let mut lcm = FactorSet::new();
        for t in &self.terms {
            for (key, &m) in &t.den {
                let e = lcm.entry(key.clone()).or_insert(0);
                *e = (*e).max(m);
            }
        }
        lcm
    }

    /// Expand `sum_t coeff_t q^{qexp_t} * num_t * (den / den_t)` as one dense
    /// Laurent numerator over the common denominator `den`.
    ///
    /// Consecutive terms of the paper's sums differ in a handful of factors,
    /// so the expansion rolls: the previous expanded product is patched by
    /// exact binomial multiplies/divides instead of being rebuilt.
    pub fn numerator_over(&self, den: &FactorSet) -> DensePoly {
        let mut acc = DensePoly::zero();
        let mut have: FactorSet = FactorSet::new();
        let mut cur = DensePoly::one();
        let mut first = true;
        for t in &self.terms {
            let mut want = t.num.clone();
            for (key, &m) in den {
                let held = t.den.get(key).copied().unwrap_or(0);
                debug_assert!(held <= m, "common denominator does not cover term");
                if m > held {
                    *want.entry(key.clone()).or_insert(0) += m - held;
                }
            }
            if first {
                cur = expand_set(&want);
                have = want;
                first = false;
            } else {
                let (delta_ops, fresh_ops) = delta_cost(&have, &want);
                if delta_ops <= fresh_ops {
                    apply_delta(&mut cur, &have, &want);
                } else {
                    cur = expand_set(&want);
                }
                have = want;
            }
            acc.add_scaled(&cur, &t.coeff, t.qexp);
        }
        acc
    }

    /// Whether the sum is identically zero (exact).
    pub fn is_zero_sum(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let den = self.common_den();
        self.numerator_over(&den).is_zero()
    }

    /// Check that no denominator factor is divisible by Phi_n.
    /// `1 - c q^e` can only share a root of unity with Phi_n when `c = 1`
    /// (n | e) or `c = -1` (n even and e = n/2 mod n).
    pub fn check_den_coprime(&self, modulus: &Modulus) -> Result<()> {
        let n = i64::from(modulus.n());
        for t in &self.terms {
            for ((e, c), _) in &t.den {
                let singular = if c.is_one() {
                    e % n == 0
                } else if (-c).is_one() {
                    n % 2 == 0 && (2 * e) % n == 0 && e % n != 0
                } else {
                    false
                };
                if singular {
                    return Err(Error::NotInvertible(format!(
                        "denominator factor 1 - ({c}) q^{e} shares a root with Phi_{n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the sum lies in the ideal (Phi_n^r)  (denominators must be
    /// units; powers of q are units).
    pub fn divisible_by(&self, modulus: &Arc<Modulus>) -> Result<bool> {
        self.check_den_coprime(modulus)?;
        let den = self.common_den();
        let num = self.numerator_over(&den);
        Ok(num.rem_by(modulus.poly()).is_zero())
    }

    /// The image of the sum in Q[q]/Phi_n^r.
    pub fn residue(&self, modulus: &Arc<Modulus>) -> Result<Residue> {
        self.check_den_coprime(modulus)?;
        let den = self.common_den();
        let num = self.numerator_over(&den).to_laurent();
        let den_poly = expand_set(&den).to_laurent();
        let num_res = reduce_poly(&num, modulus)?;
        let den_res = reduce_poly(&den_poly, modulus)?;
        num_res.mul(&den_res.inverse()?)
    }

    /// Exact expansion into a canonical rational function. Used for
    /// diagnostics and cross-checks; cost grows with the common denominator.
    pub fn to_ratfun(&self) -> Result<RationalFunction> {
        let den = self.common_den();
        let num = self.numerator_over(&den).to_laurent();
        let den_poly = expand_set(&den).to_laurent();
        RationalFunction::new(num, den_poly)
    }
}

fn expand_set(set: &FactorSet) -> DensePoly {
    let mut p = DensePoly::one();
    for ((e, c), &m) in set {
        for _ in 0..m {
            p.mul_binomial(c, *e);
        }
    }
    p
}

fn delta_cost(have: &FactorSet, want: &FactorSet) -> (u64, u64) {
    let mut delta = 0u64;
    let mut fresh = 0u64;
    for (key, &m) in want {
        fresh += u64::from(m);
        let h = have.get(key).copied().unwrap_or(0);
        delta += u64::from(m.abs_diff(h));
    }
    for (key, &h) in have {
        if !want.contains_key(key) {
            delta += u64::from(h);
        }
    }
    (delta, fresh)
}

fn apply_delta(poly: &mut DensePoly, have: &FactorSet, want: &FactorSet) {
    // Removals first so intermediate degrees shrink.
    for (key, &h) in have {
        let w = want.get(key).copied().unwrap_or(0);
        for _ in w..h {
            poly.div_binomial(&key.1, key.0);
        }
    }
    for (key, &w) in want {
        let h = have.get(key).copied().unwrap_or(0);
        for _ in h..w {
            poly.mul_binomial(&key.1, key.0);
        }
    }
}

/// Dense Laurent workspace: `sum c[i] q^{lo + i}`. Operations used by the
/// expansion paths are binomial multiplies, exact binomial divisions,
/// scaled accumulation, and remainder by a monic ordinary polynomial.
#[derive(Clone, Debug)]
pub struct DensePoly {
    lo: i64,
    c: Vec<Rational>,
}

impl DensePoly {
    pub fn zero() -> Self {
        Self { lo: 0, c: vec![] }
    }

    pub fn one() -> Self {
        Self {
            lo: 0,
            c: vec![Rational::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    fn trim(&mut self) {
        while self.c.last().map_or(false, Zero::is_zero) {
            self.c.pop();
        }
        let leading_zeros = self.c.iter().take_while(|x| x.is_zero()).count();
        if leading_zeros > 0 {
            self.c.drain(..leading_zeros);
            self.lo += leading_zeros as i64;
        }
        if self.c.is_empty() {
            self.lo = 0;
        }
    }

    /// `p := p * (1 - c q^e)`, `e >= 1`.
    pub fn mul_binomial(&mut self, c: &Rational, e: i64) {
        debug_assert!(e >= 1);
        if self.c.is_empty() {
            return;
        }
        let e = e as usize;
        let n = self.c.len();
        self.c.resize(n + e, Rational::zero());
        if c.is_one() {
            for i in (0..n).rev() {
                let v = self.c[i].clone();
                self.c[i + e] -= v;
            }
        } else if (-c.clone()).is_one() {
            for i in (0..n).rev() {
                let v = self.c[i].clone();
                self.c[i + e] += v;
            }
        } else {
            for i in (0..n).rev() {
                if !self.c[i].is_zero() {
                    let v = &self.c[i] * c;
                    self.c[i + e] -= v;
                }
            }
        }
    }

    /// `p := p / (1 - c q^e)`, exact, `e >= 1`.
    ///
    /// With `r = p / (1 - c q^e)`: `r[i] = p[i] + c r[i-e]`.
    pub fn div_binomial(&mut self, c: &Rational, e: i64) {
        debug_assert!(e >= 1);
        if self.c.is_empty() {
            return;
        }
        let e = e as usize;
        let n = self.c.len();
        if c.is_one() {
            for i in e..n {
                let v = self.c[i - e].clone();
                self.c[i] += v;
            }
        } else if (-c.clone()).is_one() {
            for i in e..n {
                let v = self.c[i - e].clone();
                self.c[i] -= v;
            }
        } else {
            for i in e..n {
                if !self.c[i - e].is_zero() {
                    let v = &self.c[i - e] * c;
                    self.c[i] += v;
                }
            }
        }
        // The top e coefficients of the quotient recurrence must vanish for
        // the division to be exact.
        for i in (n - e.min(n))..n {
            debug_assert!(self.c[i].is_zero(), "inexact binomial division");
            self.c[i] = Rational::zero();
        }
        self.c.truncate(n - e.min(n));
    }

    /// `acc += coeff * q^shift * other`.
    pub fn add_scaled(&mut self, other: &DensePoly, coeff: &Rational, shift: i64) {
        if other.c.is_empty() || coeff.is_zero() {
            return;
        }
        let olo = other.lo + shift;
        let ohi = olo + other.c.len() as i64;
        if self.c.is_empty() {
            self.lo = olo;
            self.c = vec![Rational::zero(); other.c.len()];
        } else {
            let lo = self.lo.min(olo);
            let hi = (self.lo + self.c.len() as i64).max(ohi);
            if lo < self.lo {
                let pad = (self.lo - lo) as usize;
                let mut fresh = vec![Rational::zero(); pad];
                fresh.extend(std::mem::take(&mut self.c));
                self.c = fresh;
                self.lo = lo;
            }
            let need = (hi - self.lo) as usize;
            if self.c.len() < need {
                self.c.resize(need, Rational::zero());
            }
        }
        let off = (olo - self.lo) as usize;
        if coeff.is_one() {
            for (i, v) in other.c.iter().enumerate() {
                if !v.is_zero() {
                    self.c[off + i] += v;
                }
            }
        } else {
            for (i, v) in other.c.iter().enumerate() {
                if !v.is_zero() {
                    self.c[off + i] += v * coeff;
                }
            }
        }
    }

    /// Remainder after dividing the ordinary part by a monic ordinary
    /// polynomial (the net q-power is a unit in the target quotient rings
    /// and is discarded for zero tests).
    pub fn rem_by(&self, modulus: &LaurentPoly) -> DensePoly {
        let mlead = modulus.degree().expect("nonzero modulus") as usize;
        let mut mc = vec![Rational::zero(); mlead + 1];
        for (&e, v) in modulus.terms() {
            mc[e as usize] = v.clone();
        }
        debug_assert!(mc[mlead].is_one(), "modulus must be monic");
        let mut work = self.c.clone();
        let n = work.len();
        if n <= mlead {
            let mut out = self.clone();
            out.trim();
            return out;
        }
        for i in (mlead..n).rev() {
            if work[i].is_zero() {
                continue;
            }
            let lead = std::mem::replace(&mut work[i], Rational::zero());
            for (j, m) in mc.iter().enumerate().take(mlead) {
                if !m.is_zero() {
                    let v = &lead * m;
                    work[i - mlead + j] -= v;
                }
            }
        }
        work.truncate(mlead);
        let mut out = DensePoly { lo: 0, c: work };
        out.trim();
        out
    }

    pub fn to_laurent(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.c
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (self.lo + i as i64, v.clone())),
        )
    }

    pub fn from_laurent(p: &LaurentPoly) -> DensePoly {
        match (p.min_exp(), p.max_exp()) {
            (Some(lo), Some(hi)) => {
                let mut c = vec![Rational::zero(); (hi - lo + 1) as usize];
                for (&e, v) in p.terms() {
                    c[(e - lo) as usize] = v.clone();
                }
                DensePoly { lo, c }
            }
            _ => DensePoly::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};

    fn poch_term(c: Rational, base: i64, step: u32, len: i64) -> Term {
        let mut t = Term::one();
        t.mul_poch(&c, base, step, len).unwrap();
        t
    }

    #[test]
    fn factor_normalization() {
        // 1 - 2 q^{-3} = -2 q^{-3} (1 - q^3/2)
        let mut t = Term::one();
        t.mul_factor(&rint(2), -3).unwrap();
        assert_eq!(t.coeff(), &rint(-2));
        assert_eq!(t.qexp(), -3);
        let rf = t.to_ratfun().unwrap();
        let direct = RationalFunction::from_poly(LaurentPoly::from_terms([
            (0, rint(1)),
            (-3, rint(-2)),
        ]));
        assert_eq!(rf, direct);
    }

    #[test]
    fn zero_exponent_folds_to_constant() {
        let mut t = Term::one();
        t.mul_factor(&rat(1, 3), 0).unwrap();
        assert_eq!(t.coeff(), &rat(2, 3));
        // and a vanishing denominator constant is singular
        let mut t = Term::one();
        assert!(matches!(
            t.div_factor(&rint(1), 0),
            Err(Error::SingularFactor(_))
        ));
        // while a vanishing numerator constant zeroes the term
        let mut t = Term::one();
        t.mul_factor(&rint(1), 0).unwrap();
        assert!(t.is_zero());
    }

    #[test]
    fn pochhammer_matches_direct_product() {
        // (2; q)_2 = (1-2)(1-2q) = -1 + 2q
        let t = poch_term(rint(2), 0, 1, 2);
        let rf = t.to_ratfun().unwrap();
        assert_eq!(
            rf,
            RationalFunction::from_poly(LaurentPoly::from_terms([(0, rint(-1)), (1, rint(2))]))
        );
        // (q^2; q)_{-1} = 1/(1-q)
        let t = poch_term(rint(1), 2, 1, -1);
        let rf = t.to_ratfun().unwrap();
        let expect = RationalFunction::new(
            LaurentPoly::one(),
            LaurentPoly::from_coeffs(&[1, -1]),
        )
        .unwrap();
        assert_eq!(rf, expect);
    }

    #[test]
    fn qbin_term_matches_polynomial() {
        let mut t = Term::one();
        t.mul_qbin(4, 2, 1).unwrap();
        let rf = t.to_ratfun().unwrap();
        assert_eq!(
            rf,
            RationalFunction::from_poly(LaurentPoly::from_coeffs(&[1, 1, 2, 1, 1]))
        );
    }

    #[test]
    fn rolling_sum_expansion() {
        // sum_{k=0}^{3} q^k / (q;q)_k  expanded over (q;q)_3
        let mut sum = TermSum::new();
        for k in 0..=3 {
            let mut t = Term::monomial(rint(1), k);
            t.div_poch(&rint(1), 1, 1, k).unwrap();
            sum.push(t);
        }
        let den = sum.common_den();
        let num = sum.numerator_over(&den).to_laurent();
        // direct: sum q^k (q^{k+1};q)_{3-k}
        let mut direct = LaurentPoly::zero();
        for k in 0..=3i64 {
            let mut t = Term::monomial(rint(1), k);
            t.mul_poch(&rint(1), k + 1, 1, 3 - k).unwrap();
            direct = &direct + t.to_ratfun().unwrap().num();
        }
        assert_eq!(num, direct);
    }

    #[test]
    fn dense_binomial_roundtrip() {
        let mut p = DensePoly::one();
        p.mul_binomial(&rat(2, 3), 2);
        p.mul_binomial(&rint(-1), 1);
        p.mul_binomial(&rint(1), 5);
        let snapshot = p.to_laurent();
        p.div_binomial(&rint(-1), 1);
        p.mul_binomial(&rint(-1), 1);
        assert_eq!(p.to_laurent(), snapshot);
        p.div_binomial(&rint(1), 5);
        p.div_binomial(&rat(2, 3), 2);
        p.div_binomial(&rint(-1), 1);
        assert!(p.to_laurent().is_one());
    }

    #[test]
    fn residue_and_divisibility() {
        // (1-q^6) - 2(1-q^3) === 0 mod Phi_3^2
        let m = Modulus::new(3, 2).unwrap();
        let mut sum = TermSum::new();
        let mut a = Term::one();
        a.mul_factor(&rint(1), 6).unwrap();
        sum.push(a);
        let mut b = Term::monomial(rint(-2), 0);
        b.mul_factor(&rint(1), 3).unwrap();
        sum.push(b);
        assert!(sum.divisible_by(&m).unwrap());
        assert!(sum.residue(&m).unwrap().is_zero());

        // 1 - q^3 alone is not
        let mut sum = TermSum::new();
        let mut a = Term::one();
        a.mul_factor(&rint(1), 3).unwrap();
        sum.push(a);
        assert!(!sum.divisible_by(&m).unwrap());
    }

    #[test]
    fn den_coprimality_guard() {
        let m = Modulus::new(3, 1).unwrap();
        let mut t = Term::one();
        t.div_factor(&rint(1), 3).unwrap(); // 1/(1-q^3)
        let mut sum = TermSum::new();
        sum.push(t);
        assert!(matches!(
            sum.divisible_by(&m),
            Err(Error::NotInvertible(_))
        ));
    }

    #[test]
    fn neg_q_substitution() {
        // (q;q)_2 under q -> -q equals (-q; -q)_2 = (1+q)(1-q^2)
        let t = poch_term(rint(1), 1, 1, 2);
        let s = t.subst_neg_q().to_ratfun().unwrap();
        let mut direct = Term::one();
        direct.mul_factor(&rint(-1), 1).unwrap();
        direct.mul_factor(&rint(1), 2).unwrap();
        assert_eq!(s, direct.to_ratfun().unwrap());
    }
}
