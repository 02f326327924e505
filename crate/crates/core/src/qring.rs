//! Arithmetic in the quotient ring Q[q] / Phi_n(q)^r: reduction of Laurent
//! polynomials and rational functions, modular inverses via the extended
//! Euclidean algorithm, and zero testing.

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::error::{Error, Result};
use crate::qpoly::{cyclotomic, gcd, LaurentPoly, RationalFunction};

/// The modulus Phi_n(q)^r together with its construction parameters.
#[derive(Clone, PartialEq, Eq)]
pub struct Modulus {
    n: u32,
    r: u32,
    phi: Arc<LaurentPoly>,
    poly: LaurentPoly,
}

impl Modulus {
    /// Build Phi_n(q)^r. Requires `n >= 2`, `r >= 1`; quotients by Phi_1
    /// powers are rejected (every congruence statement here degenerates at
    /// n = 1).
    pub fn new(n: u32, r: u32) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::InvalidIndex(format!("modulus index n = {n} < 2")));
        }
        if r < 1 {
            return Err(Error::InvalidIndex(format!("modulus power r = {r} < 1")));
        }
        let phi = cyclotomic(n)?;
        let poly = phi.pow(r);
        Ok(Arc::new(Self { n, r, phi, poly }))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Phi_n(q).
    pub fn phi(&self) -> &LaurentPoly {
        &self.phi
    }

    /// Phi_n(q)^r, the polynomial reduced against.
    pub fn poly(&self) -> &LaurentPoly {
        &self.poly
    }

    pub fn degree(&self) -> i64 {
        self.poly.degree().unwrap()
    }

    fn label(&self) -> String {
        if self.r == 1 {
            format!("Phi_{}", self.n)
        } else {
            format!("Phi_{}^{}", self.n, self.r)
        }
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// An element of Q[q]/Phi_n(q)^r in canonical representative form
/// (the remainder after division by the modulus polynomial).
#[derive(Clone, PartialEq, Eq)]
pub struct Residue {
    rep: LaurentPoly,
    modulus: Arc<Modulus>,
}

impl Residue {
    pub fn rep(&self) -> &LaurentPoly {
        &self.rep
    }

    pub fn modulus(&self) -> &Arc<Modulus> {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rep.is_one()
    }

    fn check_same(&self, other: &Residue) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(
                self.modulus.label(),
                other.modulus.label(),
            ))
        }
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        self.check_same(other)?;
        Ok(Residue {
            rep: &self.rep + &other.rep,
            modulus: Arc::clone(&self.modulus),
        })
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue> {
        self.check_same(other)?;
        Ok(Residue {
            rep: &self.rep - &other.rep,
            modulus: Arc::clone(&self.modulus),
        })
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        self.check_same(other)?;
        let prod = &self.rep * &other.rep;
        Ok(Residue {
            rep: prod.div_rem(self.modulus.poly())?.1,
            modulus: Arc::clone(&self.modulus),
        })
    }

    /// Multiplicative inverse, when the representative is a unit
    /// (gcd with Phi_n(q) is 1).
    pub fn inverse(&self) -> Result<Residue> {
        let rep = invert_mod(&self.rep, &self.modulus)?;
        Ok(Residue {
            rep,
            modulus: Arc::clone(&self.modulus),
        })
    }

    pub fn pow(&self, mut k: u64) -> Result<Residue> {
        let mut base = self.clone();
        let mut acc = reduce_poly(&LaurentPoly::one(), &self.modulus)?;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.rep, self.modulus.label())
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Extended Euclidean algorithm over Q[q] on ordinary polynomials:
/// returns `(g, s, t)` with `s*a + t*b = g` and `g` monic.
pub fn ext_gcd(a: &LaurentPoly, b: &LaurentPoly) -> Result<(LaurentPoly, LaurentPoly, LaurentPoly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::BothZero);
    }
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = LaurentPoly::one();
    let mut s1 = LaurentPoly::zero();
    let mut t0 = LaurentPoly::zero();
    let mut t1 = LaurentPoly::one();
    while !r1.is_zero() {
        let (quo, rem) = r0.div_rem(&r1)?;
        let s2 = &s0 - &(&quo * &s1);
        let t2 = &t0 - &(&quo * &t1);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lead = r0.leading_coeff().unwrap().clone();
    if !lead.is_one() {
        let inv = lead.recip();
        r0.scale(&inv, 0);
        s0.scale(&inv, 0);
        t0.scale(&inv, 0);
    }
    Ok((r0, s0, t0))
}

fn invert_mod(rep: &LaurentPoly, modulus: &Arc<Modulus>) -> Result<LaurentPoly> {
    let (g, s, _) = ext_gcd(rep, modulus.poly())?;
    if !g.is_one() {
        return Err(Error::NotInvertible(modulus.label()));
    }
    Ok(s.div_rem(modulus.poly())?.1)
}

/// Image of an ordinary-or-Laurent polynomial in the quotient ring.
/// Negative powers of `q` reduce through the inverse of `q`, which is a
/// unit because Phi_n(0) = 1 for n >= 2.
pub fn reduce_poly(p: &LaurentPoly, modulus: &Arc<Modulus>) -> Result<Residue> {
    let shift = p.min_exp().unwrap_or(0).min(0);
    let ordinary = p.shifted(-shift);
    let mut rep = ordinary.div_rem(modulus.poly())?.1;
    if shift < 0 {
        let qpow = LaurentPoly::monomial(-shift, crate::qpoly::rint(1));
        let inv = invert_mod(&qpow.div_rem(modulus.poly())?.1, modulus)?;
        rep = (&rep * &inv).div_rem(modulus.poly())?.1;
    }
    Ok(Residue {
        rep,
        modulus: Arc::clone(modulus),
    })
}

/// Image of a rational function in the quotient ring:
/// `reduce(num) * inverse(reduce(den))`.
///
/// Errors with `NotInvertible` when the denominator shares a factor with
/// Phi_n(q), which signals that the congruence statement does not make
/// sense for these parameters.
pub fn reduce(x: &RationalFunction, modulus: &Arc<Modulus>) -> Result<Residue> {
    // Cheap pre-check against Phi_n rather than Phi_n^r: a denominator is a
    // unit iff it is coprime to Phi_n.
    let g = gcd(x.den(), modulus.phi())?;
    if !g.is_one() {
        return Err(Error::NotInvertible(modulus.label()));
    }
    let num = reduce_poly(x.num(), modulus)?;
    let den = reduce_poly(x.den(), modulus)?;
    num.mul(&den.inverse()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::{rat, rint};

    #[test]
    fn modulus_examples() {
        assert_eq!(
            Modulus::new(3, 1).unwrap().poly(),
            &LaurentPoly::from_coeffs(&[1, 1, 1])
        );
        assert_eq!(
            Modulus::new(2, 2).unwrap().poly(),
            &LaurentPoly::from_coeffs(&[1, 2, 1])
        );
        assert_eq!(
            Modulus::new(4, 1).unwrap().poly(),
            &LaurentPoly::from_coeffs(&[1, 0, 1])
        );
        assert!(matches!(Modulus::new(1, 1), Err(Error::InvalidIndex(_))));
        assert!(matches!(Modulus::new(3, 0), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn reduce_examples() {
        let m3 = Modulus::new(3, 1).unwrap();
        // q^3 === 1 mod Phi_3
        let q3 = RationalFunction::from_poly(LaurentPoly::monomial(3, rint(1)));
        assert!(reduce(&q3, &m3).unwrap().is_one());

        // 1/(1-q) === (2+q)/3 mod Phi_3
        let f = RationalFunction::new(LaurentPoly::one(), LaurentPoly::from_coeffs(&[1, -1]))
            .unwrap();
        let r = reduce(&f, &m3).unwrap();
        assert_eq!(
            r.rep(),
            &LaurentPoly::from_terms([(0, rat(2, 3)), (1, rat(1, 3))])
        );

        // 1/(1-q^3) is not invertible mod Phi_3
        let f = RationalFunction::new(LaurentPoly::one(), LaurentPoly::from_coeffs(&[1, 0, 0, -1]))
            .unwrap();
        assert!(matches!(reduce(&f, &m3), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn inverse_examples() {
        let m3 = Modulus::new(3, 1).unwrap();
        // inverse(q) is the class of q^2 (canonical representative -q - 1,
        // since q^2 === -q - 1 mod Phi_3); q * q^2 = q^3 === 1.
        let q = reduce_poly(&LaurentPoly::var(), &m3).unwrap();
        let inv = q.inverse().unwrap();
        assert_eq!(inv.rep(), &LaurentPoly::from_coeffs(&[-1, -1]));
        assert_eq!(
            inv,
            reduce_poly(&LaurentPoly::monomial(2, rint(1)), &m3).unwrap()
        );
        assert!(q.mul(&inv).unwrap().is_one());
        // inverse(1) = 1
        let one = reduce_poly(&LaurentPoly::one(), &m3).unwrap();
        assert!(one.inverse().unwrap().is_one());
        // 1 - q^3 is a zero divisor mod Phi_3^2
        let m32 = Modulus::new(3, 2).unwrap();
        let z = reduce_poly(&LaurentPoly::from_coeffs(&[1, 0, 0, -1]), &m32).unwrap();
        assert!(matches!(z.inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn zero_testing() {
        // (1-q^6) - 2(1-q^3) = -(1-q^3)^2 reduces to zero mod Phi_3^2
        let m32 = Modulus::new(3, 2).unwrap();
        let p = LaurentPoly::from_terms([(0, rint(-1)), (3, rint(2)), (6, rint(-1))]);
        assert!(reduce_poly(&p, &m32).unwrap().is_zero());
        // but 1-q^3 has only a single factor of Phi_3
        let p = LaurentPoly::from_coeffs(&[1, 0, 0, -1]);
        assert!(!reduce_poly(&p, &m32).unwrap().is_zero());
        assert!(reduce_poly(&LaurentPoly::zero(), &m32).unwrap().is_zero());
    }

    #[test]
    fn negative_exponents_reduce_through_unit_q() {
        let m5 = Modulus::new(5, 2).unwrap();
        // q^{-7} * q^7 === 1
        let a = reduce_poly(&LaurentPoly::monomial(-7, rint(1)), &m5).unwrap();
        let b = reduce_poly(&LaurentPoly::monomial(7, rint(1)), &m5).unwrap();
        assert!(a.mul(&b).unwrap().is_one());
    }

    #[test]
    fn modulus_mismatch_rejected() {
        let m3 = Modulus::new(3, 1).unwrap();
        let m5 = Modulus::new(5, 1).unwrap();
        let a = reduce_poly(&LaurentPoly::var(), &m3).unwrap();
        let b = reduce_poly(&LaurentPoly::var(), &m5).unwrap();
        assert!(matches!(a.add(&b), Err(Error::ModulusMismatch(_, _))));
    }
}
