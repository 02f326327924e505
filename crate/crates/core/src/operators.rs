//! Noncommutative q-shift operator algebra on two variables `(a, b)`.
//!
//! An operator is a finite sum of terms `c(b, q) * eta_a^i eta_b^j` where
//! the coefficient is a polynomial in the formal symbol `b` over exact
//! rational functions in `q`. `eta_a` substitutes `a -> aq`, so coefficients
//! commute with `eta_a` but not with `eta_b`:
//!
//! ```text
//!     eta_b * c(b) = c(b q) * eta_b
//! ```
//!
//! which is exactly the composition rule implemented in [`ShiftOperator::mul`].
//! Operators act on grid functions: sampled base points `(a0, b0)` with an
//! exact rule for the shifted values `f(a0 q^i, b0 q^j)`.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::qpoly::{rational_pow, LaurentPoly, Rational, RationalFunction};

/// Polynomial in the formal symbol `b` with rational-function coefficients:
/// `coeffs[i]` multiplies `b^i`. Trailing zero coefficients are trimmed, so
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BPoly {
    coeffs: Vec<RationalFunction>,
}

impl BPoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(RationalFunction::one())
    }

    pub fn constant(c: RationalFunction) -> Self {
        let mut p = Self { coeffs: vec![c] };
        p.trim();
        p
    }

    /// The symbol `b`.
    pub fn var() -> Self {
        Self {
            coeffs: vec![RationalFunction::zero(), RationalFunction::one()],
        }
        .trimmed()
    }

    pub fn from_coeffs(coeffs: Vec<RationalFunction>) -> Self {
        Self { coeffs }.trimmed()
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, RationalFunction::is_zero) {
            self.coeffs.pop();
        }
    }

    fn trimmed(mut self) -> Self {
        self.trim();
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &BPoly) -> BPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let zero = RationalFunction::zero();
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = other.coeffs.get(i).unwrap_or(&zero);
            coeffs.push(a + b);
        }
        BPoly { coeffs }.trimmed()
    }

    pub fn neg(&self) -> BPoly {
        BPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &BPoly) -> BPoly {
        if self.is_zero() || other.is_zero() {
            return BPoly::zero();
        }
        let mut coeffs =
            vec![RationalFunction::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        BPoly { coeffs }.trimmed()
    }

    pub fn scale(&self, c: &RationalFunction) -> BPoly {
        BPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
        .trimmed()
    }

    /// Substitute `b -> b q^j`: the `b^i` coefficient picks up `q^{i j}`.
    pub fn shift_b(&self, j: u32) -> BPoly {
        if j == 0 {
            return self.clone();
        }
        BPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    c * &RationalFunction::monomial(i as i64 * i64::from(j), Rational::one())
                })
                .collect(),
        }
        .trimmed()
    }

    /// Evaluate at a rational `b0`, keeping `q` symbolic.
    pub fn eval_b(&self, b0: &Rational) -> RationalFunction {
        let mut acc = RationalFunction::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let p = rational_pow(b0, i as i64).expect("nonnegative power");
                acc = acc + c * &RationalFunction::from_rational(p);
            }
        }
        acc
    }

    /// `(c b q^{base}; q)_len` as a polynomial in `b` (len >= 0):
    /// the product of `1 - c q^{base + j} b`.
    pub fn poch_b(c: &RationalFunction, base: i64, len: u32) -> BPoly {
        let mut acc = BPoly::one();
        for j in 0..i64::from(len) {
            let factor = BPoly::from_coeffs(vec![
                RationalFunction::one(),
                -(c * &RationalFunction::monomial(base + j, Rational::one())),
            ]);
            acc = acc.mul(&factor);
        }
        acc
    }

    /// `b^k` times `(-1)^k q^{k(k-1)/2}` appears often enough to warrant a
    /// helper: this is plain `b^k`.
    pub fn b_pow(k: u32) -> BPoly {
        let mut coeffs = vec![RationalFunction::zero(); k as usize + 1];
        coeffs[k as usize] = RationalFunction::one();
        BPoly { coeffs }.trimmed()
    }
}

/// Normalized finite sum of `coeff(b, q) * eta_a^i eta_b^j` terms: no two
/// terms share a shift pair, no zero coefficients. The zero operator is the
/// empty sum.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ShiftOperator {
    terms: BTreeMap<(u32, u32), BPoly>,
}

impl ShiftOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(BPoly::one(), 0, 0)
    }

    pub fn eta_a() -> Self {
        Self::term(BPoly::one(), 1, 0)
    }

    pub fn eta_b() -> Self {
        Self::term(BPoly::one(), 0, 1)
    }

    /// `b * eta_b`.
    pub fn b_eta_b() -> Self {
        Self::term(BPoly::var(), 0, 1)
    }

    /// A single term `coeff * eta_a^i eta_b^j`.
    pub fn term(coeff: BPoly, shift_a: u32, shift_b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((shift_a, shift_b), coeff);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BPoly)> {
        self.terms.iter()
    }

    fn insert(&mut self, key: (u32, u32), coeff: BPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&coeff);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &ShiftOperator) -> ShiftOperator {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.insert(*key, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ShiftOperator) -> ShiftOperator {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.insert(*key, c.neg());
        }
        out
    }

    /// Composition `self . other`:
    /// `(c(b) eta_a^i eta_b^j) (d(b) eta_a^k eta_b^l)
    ///    = c(b) d(b q^j) eta_a^{i+k} eta_b^{j+l}`.
    pub fn mul(&self, other: &ShiftOperator) -> ShiftOperator {
        let mut out = ShiftOperator::zero();
        for (&(i, j), c) in &self.terms {
            for (&(k, l), d) in &other.terms {
                out.insert((i + k, j + l), c.mul(&d.shift_b(j)));
            }
        }
        out
    }

    pub fn scale(&self, coeff: &BPoly) -> ShiftOperator {
        let mut out = ShiftOperator::zero();
        for (&key, c) in &self.terms {
            out.insert(key, coeff.mul(c));
        }
        out
    }

    pub fn pow(&self, k: u32) -> ShiftOperator {
        let mut acc = ShiftOperator::identity();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Apply to a grid function: coefficients evaluate at `b = b0` (with `q`
    /// symbolic), shifted values come from the function's rule.
    pub fn apply(&self, f: &GridFunction) -> Result<RationalFunction> {
        let mut acc = RationalFunction::zero();
        for (&(i, j), c) in &self.terms {
            let coeff = c.eval_b(&f.b0);
            if coeff.is_zero() {
                continue;
            }
            let value = f.value(i, j)?;
            acc = acc + coeff * value;
        }
        Ok(acc)
    }
}

/// `Delta_a^k = (eta_a - 1)(eta_a - q) ... (eta_a - q^{k-1})`;
/// the identity operator for `k = 0`.
pub fn delta_power(k: u32) -> ShiftOperator {
    let mut acc = ShiftOperator::identity();
    for i in 0..i64::from(k) {
        let factor = ShiftOperator::eta_a().sub(&ShiftOperator::term(
            BPoly::constant(RationalFunction::monomial(i, Rational::one())),
            0,
            0,
        ));
        acc = acc.mul(&factor);
    }
    acc
}

/// `(eta_a eta_b - b eta_b)^n`.
pub fn carlitz_power(n: u32) -> ShiftOperator {
    let gen = ShiftOperator::eta_a()
        .mul(&ShiftOperator::eta_b())
        .sub(&ShiftOperator::b_eta_b());
    gen.pow(n)
}

/// A sampled function of `(a, b)`: base point plus an exact rule for the
/// values at shifted arguments `(a0 q^i, b0 q^j)`.
#[derive(Clone, Debug)]
pub struct GridFunction {
    a0: Rational,
    b0: Rational,
    rule: GridRule,
}

#[derive(Clone, Debug)]
pub enum GridRule {
    /// `sum c * a^r * b^s` over the listed `(r, s, c)` monomials.
    Polynomial(Vec<(u32, u32, Rational)>),
    /// `f(a) = 1/(1 - a)`.
    InvOneMinusA,
    /// Explicit table of shifted values; shifts outside the table are
    /// undefined.
    Table(BTreeMap<(u32, u32), RationalFunction>),
}

impl GridFunction {
    pub fn new(a0: Rational, b0: Rational, rule: GridRule) -> Self {
        Self { a0, b0, rule }
    }

    pub fn base(&self) -> (&Rational, &Rational) {
        (&self.a0, &self.b0)
    }

    /// `f(a0 q^i, b0 q^j)`, exact in `q`.
    pub fn value(&self, i: u32, j: u32) -> Result<RationalFunction> {
        match &self.rule {
            GridRule::Polynomial(monomials) => {
                let mut p = LaurentPoly::zero();
                for (r, s, c) in monomials {
                    let coeff = c
                        * rational_pow(&self.a0, i64::from(*r)).expect("nonnegative")
                        * rational_pow(&self.b0, i64::from(*s)).expect("nonnegative");
                    let exp = i64::from(i) * i64::from(*r) + i64::from(j) * i64::from(*s);
                    p.add_term(exp, coeff);
                }
                Ok(RationalFunction::from_poly(p))
            }
            GridRule::InvOneMinusA => {
                if self.a0.is_one() && i == 0 {
                    return Err(Error::SingularFactor("1 - a0".into()));
                }
                let den = LaurentPoly::from_terms([
                    (0, Rational::one()),
                    (i64::from(i), -self.a0.clone()),
                ]);
                RationalFunction::new(LaurentPoly::one(), den)
            }
            GridRule::Table(map) => map
                .get(&(i, j))
                .cloned()
                .ok_or(Error::UndefinedShift(i, j)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};
    use crate::qseries::q_binomial;

    fn rfq(e: i64) -> RationalFunction {
        RationalFunction::monomial(e, rint(1))
    }

    #[test]
    fn eta_a_squares() {
        let composed = ShiftOperator::eta_a().mul(&ShiftOperator::eta_a());
        assert_eq!(composed, ShiftOperator::term(BPoly::one(), 2, 0));
    }

    #[test]
    fn commutation_rule() {
        // (eta_a eta_b)(b eta_b) = q (b eta_b)(eta_a eta_b)
        let ab = ShiftOperator::eta_a().mul(&ShiftOperator::eta_b());
        let beb = ShiftOperator::b_eta_b();
        let lhs = ab.mul(&beb);
        let rhs = beb.mul(&ab).scale(&BPoly::constant(rfq(1)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_expansion() {
        // (eta_a - 1)(eta_a - q) = eta_a^2 - (1+q) eta_a + q
        let d2 = delta_power(2);
        let direct = ShiftOperator::term(BPoly::one(), 2, 0)
            .sub(&ShiftOperator::term(
                BPoly::constant(RationalFunction::one() + rfq(1)),
                1,
                0,
            ))
            .add(&ShiftOperator::term(BPoly::constant(rfq(1)), 0, 0));
        assert_eq!(d2, direct);
        assert_eq!(delta_power(0), ShiftOperator::identity());
        let d1 = ShiftOperator::eta_a().sub(&ShiftOperator::identity());
        assert_eq!(delta_power(1), d1);
    }

    #[test]
    fn delta_closed_form() {
        // Delta^k = sum_j [k,j] (-1)^{k-j} q^{C(k-j,2)} eta_a^j
        for k in 0..=8u32 {
            let mut direct = ShiftOperator::zero();
            for j in 0..=i64::from(k) {
                let kj = i64::from(k) - j;
                let mut c = RationalFunction::from_poly(q_binomial(i64::from(k), j));
                c = c * RationalFunction::monomial(kj * (kj - 1) / 2, crate::qpoly::sign_pow(kj));
                direct = direct.add(&ShiftOperator::term(BPoly::constant(c), j as u32, 0));
            }
            assert_eq!(delta_power(k), direct, "delta closed form k={k}");
        }
    }

    #[test]
    fn carlitz_power_examples() {
        assert_eq!(carlitz_power(0), ShiftOperator::identity());
        let direct = ShiftOperator::eta_a()
            .mul(&ShiftOperator::eta_b())
            .sub(&ShiftOperator::b_eta_b());
        assert_eq!(carlitz_power(1), direct);
    }

    #[test]
    fn carlitz_operator_binomial_expansion() {
        // (eta_a eta_b - b eta_b)^n = sum_k [n,k] (-b eta_b)^k (eta_a eta_b)^{n-k}
        for n in 0..=8u32 {
            let mut direct = ShiftOperator::zero();
            let neg_beb = ShiftOperator::b_eta_b().scale(&BPoly::constant(-RationalFunction::one()));
            let ab = ShiftOperator::eta_a().mul(&ShiftOperator::eta_b());
            for k in 0..=n {
                let coeff =
                    BPoly::constant(RationalFunction::from_poly(q_binomial(i64::from(n), i64::from(k))));
                let term = neg_beb.pow(k).mul(&ab.pow(n - k)).scale(&coeff);
                direct = direct.add(&term);
            }
            assert_eq!(carlitz_power(n), direct, "operator q-binomial theorem n={n}");
        }
    }

    #[test]
    fn apply_examples() {
        // eta_a on f(a) = a at a0 = 2 gives 2q
        let f = GridFunction::new(rint(2), rint(1), GridRule::Polynomial(vec![(1, 0, rint(1))]));
        let v = ShiftOperator::eta_a().apply(&f).unwrap();
        assert_eq!(v, RationalFunction::monomial(1, rint(2)));

        // (eta_a - 1) kills constants
        let c = GridFunction::new(rat(3, 7), rint(1), GridRule::Polynomial(vec![(0, 0, rat(5, 3))]));
        let d1 = delta_power(1);
        assert!(d1.apply(&c).unwrap().is_zero());

        // Delta_a^2 kills functions linear in a
        let f = GridFunction::new(rat(-2, 5), rint(1), GridRule::Polynomial(vec![(1, 0, rint(4)), (0, 0, rint(-3))]));
        assert!(delta_power(2).apply(&f).unwrap().is_zero());
    }

    #[test]
    fn apply_inv_one_minus_a() {
        // carlitz_power(n) . 1/(1-a) = sum_k [n,k] (-b0)^k q^{C(k,2)} / (1 - a0 q^{n-k})
        let a0 = rat(2, 7);
        let b0 = rat(-3, 5);
        for n in 0..=4u32 {
            let f = GridFunction::new(a0.clone(), b0.clone(), GridRule::InvOneMinusA);
            let lhs = carlitz_power(n).apply(&f).unwrap();
            let mut rhs = RationalFunction::zero();
            for k in 0..=i64::from(n) {
                let mut c = RationalFunction::from_poly(q_binomial(i64::from(n), k));
                let sign = rational_pow(&-b0.clone(), k).unwrap();
                c = c * RationalFunction::monomial(k * (k - 1) / 2, sign);
                let den = LaurentPoly::from_terms([
                    (0, rint(1)),
                    (i64::from(n) - k, -a0.clone()),
                ]);
                rhs = rhs + c.checked_div(&RationalFunction::from_poly(den)).unwrap();
            }
            assert_eq!(lhs, rhs, "phi_n via operator at n={n}");
        }
    }

    #[test]
    fn table_rule_reports_missing_shifts() {
        let mut map = BTreeMap::new();
        map.insert((0u32, 0u32), RationalFunction::one());
        let f = GridFunction::new(rint(2), rint(3), GridRule::Table(map));
        assert!(ShiftOperator::identity().apply(&f).is_ok());
        assert!(matches!(
            ShiftOperator::eta_a().apply(&f),
            Err(Error::UndefinedShift(1, 0))
        ));
    }

    #[test]
    fn singular_base_point() {
        let f = GridFunction::new(rint(1), rint(1), GridRule::InvOneMinusA);
        assert!(matches!(
            ShiftOperator::identity().apply(&f),
            Err(Error::SingularFactor(_))
        ));
        // but eta_a of it is fine: 1/(1 - q)
        assert!(ShiftOperator::eta_a().apply(&f).is_ok());
    }
}
