use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use super::{rint, LaurentPoly};
use crate::error::{Error, Result};

static TABLE: LazyLock<RwLock<HashMap<u32, Arc<LaurentPoly>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// The n-th cyclotomic polynomial, monic with integer coefficients and
/// degree phi(n).
///
/// Computed by dividing `q^n - 1` by the product of the cyclotomic
/// polynomials of the proper divisors of `n`; every division step is exact.
/// Results are memoized behind a read-write lock: concurrent readers are
/// cheap and a racing insert simply keeps one winner.
pub fn cyclotomic(n: u32) -> Result<Arc<LaurentPoly>> {
    if n < 1 {
        return Err(Error::InvalidIndex(format!("cyclotomic index {n} < 1")));
    }
    if let Some(p) = TABLE.read().unwrap().get(&n) {
        return Ok(Arc::clone(p));
    }
    let mut acc = LaurentPoly::from_terms([(i64::from(n), rint(1)), (0, rint(-1))]);
    for d in 1..=n / 2 {
        if n % d == 0 {
            let phi_d = cyclotomic(d)?;
            let (quo, rem) = acc.div_rem(&phi_d)?;
            debug_assert!(rem.is_zero());
            acc = quo;
        }
    }
    let arc = Arc::new(acc);
    let mut table = TABLE.write().unwrap();
    Ok(Arc::clone(table.entry(n).or_insert(arc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_indices() {
        assert_eq!(*cyclotomic(1).unwrap(), LaurentPoly::from_coeffs(&[-1, 1]));
        assert_eq!(*cyclotomic(2).unwrap(), LaurentPoly::from_coeffs(&[1, 1]));
        assert_eq!(
            *cyclotomic(3).unwrap(),
            LaurentPoly::from_coeffs(&[1, 1, 1])
        );
        assert_eq!(*cyclotomic(4).unwrap(), LaurentPoly::from_coeffs(&[1, 0, 1]));
        // n = 6: divide q^6 - 1 by Phi_1 Phi_2 Phi_3
        assert_eq!(
            *cyclotomic(6).unwrap(),
            LaurentPoly::from_coeffs(&[1, -1, 1])
        );
    }

    #[test]
    fn rejects_zero() {
        assert!(matches!(cyclotomic(0), Err(Error::InvalidIndex(_))));
    }

    #[test]
    fn degree_is_euler_phi() {
        fn phi(n: u32) -> i64 {
            (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as i64
        }
        for n in [5u32, 12, 30, 105] {
            assert_eq!(cyclotomic(n).unwrap().degree(), Some(phi(n)));
        }
    }
}
