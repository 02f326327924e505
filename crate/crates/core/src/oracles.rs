//! Structural oracle checks: algebraic identities that cross-validate the
//! building blocks through independent routes (product definitions against
//! recursions, operator algebra against closed forms, congruence right
//! sides against each other). Each oracle is a registry case so the batch
//! driver can run and report them like any other verification.

use num_traits::One;

use crate::congruences::{congruence_diff, congruence_rhs, lhs_is_even, CongruenceCase, CongruenceId};
use crate::error::Result;
use crate::operators::{carlitz_power, GridFunction, GridRule};
use crate::qpoly::{
    cyclotomic, rational_pow, sign_pow, LaurentPoly, Rational, RationalFunction,
};
use crate::qring::Modulus;
use crate::qseries::{poch, q_binomial, PochhammerSpec};
use crate::report::{params_of, CheckReport};
use crate::sample::{case_seed, SplitMix64};
use crate::terms::{Term, TermSum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OracleId {
    CycloProduct,
    CycloEvenSplit,
    QPascal,
    QBinomTheorem,
    QBinomAtOne,
    PochSplit,
    PochReindex,
    PochShift,
    DeltaClosed,
    CarlitzOpExpansion,
    CarlitzOpApply,
    PhiRecurrence,
    GenBasicTermwise,
    EvenMainM,
    EvenMainD,
    StrengthMono,
    ConsistencyD,
    QmorleyImplies,
}

pub struct OracleMeta {
    pub id: OracleId,
    pub name: &'static str,
    pub statement: &'static str,
}

pub const ORACLE_REGISTRY: &[OracleMeta] = &[
    OracleMeta {
        id: OracleId::CycloProduct,
        name: "ORC_CYCLO_PRODUCT",
        statement: "prod_{d|n} Phi_d(q) = q^n - 1 for all n <= 200",
    },
    OracleMeta {
        id: OracleId::CycloEvenSplit,
        name: "ORC_CYCLO_EVEN_SPLIT",
        statement: "Phi_n(q^2) = Phi_n(q) Phi_n(-q) for odd n in [3, 99]",
    },
    OracleMeta {
        id: OracleId::QPascal,
        name: "ORC_Q_PASCAL",
        statement: "[n+1,k]_q = [n,k]_q q^k + [n,k-1]_q for 0 <= k <= n+1 <= 20",
    },
    OracleMeta {
        id: OracleId::QBinomTheorem,
        name: "ORC_QBINOM_THEOREM",
        statement: "(z;q)_m = sum_k [m,k]_q (-z)^k q^{k(k-1)/2} for sampled rational z, m <= 15",
    },
    OracleMeta {
        id: OracleId::QBinomAtOne,
        name: "ORC_QBINOM_AT_ONE",
        statement: "[n,k]_q at q = 1 equals C(n,k) for n <= 12",
    },
    OracleMeta {
        id: OracleId::PochSplit,
        name: "ORC_POCH_SPLIT",
        statement: "(a;Q)_{m+n} = (a;Q)_m (a Q^m;Q)_n for signed m, n in [-5, 5]",
    },
    OracleMeta {
        id: OracleId::PochReindex,
        name: "ORC_POCH_REINDEX",
        statement: "(q^{n-2k+1};q^2)_k = (-1)^k q^{k(n-k)} (q^{1-n};q^2)_k for 0 <= k <= (n-1)/2, odd n <= 21",
    },
    OracleMeta {
        id: OracleId::PochShift,
        name: "ORC_POCH_SHIFT",
        statement: "(q^{-2k-2m+2};q^2)_{m-1} = (-1)^{m-1} q^{-(m-1)(2k+m)} (q^2;q^2)_{m+k-1}/(q^2;q^2)_k",
    },
    OracleMeta {
        id: OracleId::DeltaClosed,
        name: "ORC_DELTA_CLOSED",
        statement: "Delta_a^k = sum_j [k,j]_q (-1)^{k-j} q^{C(k-j,2)} eta_a^j for k <= 8",
    },
    OracleMeta {
        id: OracleId::CarlitzOpExpansion,
        name: "ORC_CARLITZ_OPEXP",
        statement: "(eta_a eta_b - b eta_b)^n = sum_k [n,k]_q (-b eta_b)^k (eta_a eta_b)^{n-k} for n <= 8",
    },
    OracleMeta {
        id: OracleId::CarlitzOpApply,
        name: "ORC_CARLITZ_OPAPPLY",
        statement: "(eta_a eta_b - b eta_b)^n . 1/(1-a) = sum_k [n,k]_q (-b0)^k q^{C(k,2)}/(1-a0 q^{n-k}) for n <= 10, 5 samples",
    },
    OracleMeta {
        id: OracleId::PhiRecurrence,
        name: "ORC_PHI_RECURRENCE",
        statement: "phi_n(a,b) = phi_{n-1}(aq,b) - b q^{n-1} phi_{n-1}(a,b) with phi the normalized kernel sum, n <= 12",
    },
    OracleMeta {
        id: OracleId::GenBasicTermwise,
        name: "ORC_GEN_BASIC_TERMWISE",
        statement: "GEN_BASIC at (x,y) = (1,q) reproduces CARLITZ term by term (scaled by (q;q)_n), n <= 12",
    },
    OracleMeta {
        id: OracleId::EvenMainM,
        name: "ORC_EVEN_MAIN_M",
        statement: "the TH_MAIN_M left side satisfies S(q) = S(-q) exactly, odd n <= 61, all m",
    },
    OracleMeta {
        id: OracleId::EvenMainD,
        name: "ORC_EVEN_MAIN_D",
        statement: "the TH_MAIN_D left side satisfies S(q) = S(-q) exactly, odd n <= 41, all d",
    },
    OracleMeta {
        id: OracleId::StrengthMono,
        name: "ORC_STRENGTH_MONO",
        statement: "statements holding mod Phi_n^2 also hold mod Phi_n (re-reduction), sampled ids with odd n <= 21",
    },
    OracleMeta {
        id: OracleId::ConsistencyD,
        name: "ORC_CONSISTENCY_D",
        statement: "the d-family corollary right sides at d in {-1,0,1} agree with the explicit Wang-Ni / Gu-Guo right sides mod Phi_n^2, odd n <= 41",
    },
    OracleMeta {
        id: OracleId::QmorleyImplies,
        name: "ORC_QMORLEY_IMPLIES",
        statement: "the squared-modulus special case follows from the full q-Morley congruence: the right sides differ by a multiple of Phi_n^2, odd n <= 41",
    },
];

pub fn oracle_meta(id: OracleId) -> &'static OracleMeta {
    ORACLE_REGISTRY
        .iter()
        .find(|m| m.id == id)
        .expect("registry covers all ids")
}

pub fn oracle_by_name(name: &str) -> Option<&'static OracleMeta> {
    ORACLE_REGISTRY.iter().find(|m| m.name == name)
}

/// Run one oracle in full. `seed` drives the sampled checks.
pub fn run_oracle(id: OracleId, seed: u64) -> CheckReport {
    let meta = oracle_meta(id);
    let outcome = match id {
        OracleId::CycloProduct => cyclo_product(200),
        OracleId::CycloEvenSplit => cyclo_even_split(99),
        OracleId::QPascal => q_pascal(19),
        OracleId::QBinomTheorem => qbinom_theorem(15, seed),
        OracleId::QBinomAtOne => qbinom_at_one(12),
        OracleId::PochSplit => poch_split(seed),
        OracleId::PochReindex => poch_reindex(21),
        OracleId::PochShift => poch_shift(6, 6),
        OracleId::DeltaClosed => delta_closed(8),
        OracleId::CarlitzOpExpansion => carlitz_op_expansion(8),
        OracleId::CarlitzOpApply => carlitz_op_apply(10, seed),
        OracleId::PhiRecurrence => phi_recurrence(12, seed),
        OracleId::GenBasicTermwise => gen_basic_termwise(12, seed),
        OracleId::EvenMainM => even_main(CongruenceId::ThMainM, 61),
        OracleId::EvenMainD => even_main(CongruenceId::ThMainD, 41),
        OracleId::StrengthMono => strength_mono(21),
        OracleId::ConsistencyD => consistency_d(41),
        OracleId::QmorleyImplies => qmorley_implies(41),
    };
    let params = params_of([("seed", seed.to_string())]);
    match outcome {
        Ok(None) => CheckReport::pass(meta.name, params),
        Ok(Some(detail)) => CheckReport::fail(meta.name, params, detail),
        Err(e) => CheckReport::error(meta.name, params, &e),
    }
}

type Outcome = Result<Option<String>>;

fn cyclo_product(n_max: u32) -> Outcome {
    for n in 1..=n_max {
        let mut prod = LaurentPoly::one();
        for d in 1..=n {
            if n % d == 0 {
                prod = &prod * &*cyclotomic(d)?;
            }
        }
        let direct = LaurentPoly::from_terms([
            (i64::from(n), Rational::one()),
            (0, -Rational::one()),
        ]);
        if prod != direct {
            return Ok(Some(format!("divisor product differs from q^{n} - 1")));
        }
    }
    Ok(None)
}

fn cyclo_even_split(n_max: u32) -> Outcome {
    for n in (3..=n_max).step_by(2) {
        let phi = cyclotomic(n)?;
        let lhs = phi.compose_qpow(2);
        let rhs = &*phi * &phi.compose_neg_q();
        if lhs != rhs {
            return Ok(Some(format!("Phi_{n}(q^2) != Phi_{n}(q) Phi_{n}(-q)")));
        }
    }
    Ok(None)
}

fn q_pascal(n_max: i64) -> Outcome {
    for n in 0..=n_max {
        for k in 0..=n + 1 {
            let lhs = q_binomial(n + 1, k);
            let rhs = q_binomial(n, k).shifted(k) + q_binomial(n, k - 1);
            if lhs != rhs {
                return Ok(Some(format!("q-Pascal fails at n={n}, k={k}")));
            }
        }
    }
    Ok(None)
}

fn qbinom_theorem(m_max: i64, seed: u64) -> Outcome {
    let mut rng = SplitMix64::new(seed ^ 0x51_42);
    for m in 0..=m_max {
        let z = rng.small_rational();
        let mut lhs = Term::one();
        lhs.mul_poch(&z, 0, 1, m)?;
        let lhs = lhs.to_ratfun()?;
        let mut rhs = LaurentPoly::zero();
        for k in 0..=m {
            let mut t = q_binomial(m, k);
            t.scale(&(rational_pow(&-z.clone(), k)?), k * (k - 1) / 2);
            rhs = rhs + t;
        }
        if lhs != RationalFunction::from_poly(rhs) {
            return Ok(Some(format!("finite q-binomial theorem fails at m={m}, z={z}")));
        }
    }
    Ok(None)
}

fn qbinom_at_one(n_max: i64) -> Outcome {
    for n in 0..=n_max {
        let mut c = Rational::one();
        for k in 0..=n {
            // binomial recurrence C(n,k) = C(n,k-1) (n-k+1)/k
            if k > 0 {
                c = c * crate::qpoly::rat(n - k + 1, k);
            }
            let v = q_binomial(n, k).eval(&Rational::one())?;
            if v != c {
                return Ok(Some(format!("[{n},{k}]_1 = {v} but C = {c}")));
            }
        }
    }
    Ok(None)
}

fn poch_split(seed: u64) -> Outcome {
    let mut rng = SplitMix64::new(seed ^ 0x70_C8);
    for step in 1..=3u32 {
        let mut a = rng.small_rational();
        while a.is_one() {
            a = rng.small_rational();
        }
        let base = RationalFunction::from_rational(a.clone());
        for m in -5..=5i64 {
            for n in -5..=5i64 {
                let whole = poch(&PochhammerSpec::new(base.clone(), step, m + n));
                let left = poch(&PochhammerSpec::new(base.clone(), step, m));
                let shifted_base =
                    &base * &RationalFunction::monomial(i64::from(step) * m, Rational::one());
                let right = poch(&PochhammerSpec::new(shifted_base, step, n));
                match (whole, left, right) {
                    (Ok(w), Ok(l), Ok(r)) => {
                        if w != &l * &r {
                            return Ok(Some(format!(
                                "splitting law fails at a={a}, step={step}, m={m}, n={n}"
                            )));
                        }
                    }
                    // A singular factor must then be singular on both routes.
                    (Err(_), _, _) | (_, Err(_), _) | (_, _, Err(_)) => continue,
                }
            }
        }
    }
    Ok(None)
}

fn poch_reindex(n_max: i64) -> Outcome {
    let one = Rational::one();
    for n in (3..=n_max).step_by(2) {
        for k in 0..=(n - 1) / 2 {
            let mut lhs = Term::one();
            lhs.mul_poch(&one, n - 2 * k + 1, 2, k)?;
            let mut rhs = Term::monomial(sign_pow(k), k * (n - k));
            rhs.mul_poch(&one, 1 - n, 2, k)?;
            if lhs.to_ratfun()? != rhs.to_ratfun()? {
                return Ok(Some(format!("reindex identity fails at n={n}, k={k}")));
            }
        }
    }
    Ok(None)
}

fn poch_shift(m_max: i64, k_max: i64) -> Outcome {
    let one = Rational::one();
    for m in 1..=m_max {
        for k in 0..=k_max {
            let mut lhs = Term::one();
            lhs.mul_poch(&one, -2 * k - 2 * m + 2, 2, m - 1)?;
            let mut rhs = Term::monomial(sign_pow(m - 1), -(m - 1) * (2 * k + m));
            rhs.mul_poch(&one, 2, 2, m + k - 1)?;
            rhs.div_poch(&one, 2, 2, k)?;
            if lhs.to_ratfun()? != rhs.to_ratfun()? {
                return Ok(Some(format!("shift identity fails at m={m}, k={k}")));
            }
        }
    }
    Ok(None)
}

fn delta_closed(k_max: i64) -> Outcome {
    use crate::operators::{delta_power, BPoly, ShiftOperator};
    for k in 0..=k_max {
        let mut direct = ShiftOperator::zero();
        for j in 0..=k {
            let kj = k - j;
            let c = RationalFunction::from_poly(q_binomial(k, j))
                * RationalFunction::monomial(kj * (kj - 1) / 2, sign_pow(kj));
            direct = direct.add(&ShiftOperator::term(BPoly::constant(c), j as u32, 0));
        }
        if delta_power(k as u32) != direct {
            return Ok(Some(format!("delta closed form fails at k={k}")));
        }
    }
    Ok(None)
}

fn carlitz_op_expansion(n_max: u32) -> Outcome {
    use crate::operators::{BPoly, ShiftOperator};
    let neg_beb = ShiftOperator::b_eta_b().scale(&BPoly::constant(-RationalFunction::one()));
    let ab = ShiftOperator::eta_a().mul(&ShiftOperator::eta_b());
    for n in 0..=n_max {
        let mut direct = ShiftOperator::zero();
        for k in 0..=n {
            let coeff = BPoly::constant(RationalFunction::from_poly(q_binomial(
                i64::from(n),
                i64::from(k),
            )));
            direct = direct.add(&neg_beb.pow(k).mul(&ab.pow(n - k)).scale(&coeff));
        }
        if carlitz_power(n) != direct {
            return Ok(Some(format!("operator q-binomial theorem fails at n={n}")));
        }
    }
    Ok(None)
}

fn carlitz_op_apply(n_max: u32, seed: u64) -> Outcome {
    let mut rng = SplitMix64::new(seed ^ 0xCA_37);
    for trial in 0..5 {
        let mut a0 = rng.small_rational();
        while a0.is_one() {
            a0 = rng.small_rational();
        }
        let b0 = rng.small_rational();
        for n in 0..=n_max {
            let f = GridFunction::new(a0.clone(), b0.clone(), GridRule::InvOneMinusA);
            let lhs = carlitz_power(n).apply(&f)?;
            let mut rhs = RationalFunction::zero();
            for k in 0..=i64::from(n) {
                let c = RationalFunction::from_poly(q_binomial(i64::from(n), k))
                    * RationalFunction::monomial(k * (k - 1) / 2, rational_pow(&-b0.clone(), k)?);
                let den = LaurentPoly::from_terms([
                    (0, Rational::one()),
                    (i64::from(n) - k, -a0.clone()),
                ]);
                rhs = rhs + c.checked_div(&RationalFunction::from_poly(den))?;
            }
            if lhs != rhs {
                return Ok(Some(format!(
                    "operator application differs from the explicit kernel sum at n={n}, trial={trial}"
                )));
            }
        }
    }
    Ok(None)
}

/// Normalized kernel sum
/// `phi_n(a, b) = (q;q)_n/(a;q)_{n+1} sum_k (a,b;q)_k/(q;q)_k (-ab)^{n-k}
///   q^{C(n,2)-C(k,2)}`, with monomial arguments `a c q^{ae}`, `b c q^{be}`.
fn phi_normalized(n: i64, ac: &Rational, ae: i64, bc: &Rational, be: i64) -> Result<TermSum> {
    let one = Rational::one();
    let mut sum = TermSum::new();
    let minus_ab = -(ac * bc);
    for k in 0..=n {
        let mut t = Term::monomial(
            rational_pow(&minus_ab, n - k)?,
            (ae + be) * (n - k) + n * (n - 1) / 2 - k * (k - 1) / 2,
        );
        t.mul_poch(ac, ae, 1, k)?;
        t.mul_poch(bc, be, 1, k)?;
        t.div_poch(&one, 1, 1, k)?;
        t.mul_poch(&one, 1, 1, n)?;
        t.div_poch(ac, ae, 1, n + 1)?;
        sum.push(t);
    }
    Ok(sum)
}

fn phi_recurrence(n_max: i64, seed: u64) -> Outcome {
    let mut rng = SplitMix64::new(seed ^ 0x9E_C6);
    for n in 1..=n_max {
        let mut a = rng.small_rational();
        while a.is_one() {
            a = rng.small_rational();
        }
        let b = rng.small_rational();
        let mut diff = phi_normalized(n, &a, 0, &b, 0)?;
        diff.extend(phi_normalized(n - 1, &a, 1, &b, 0)?.negated());
        let mut corr = phi_normalized(n - 1, &a, 0, &b, 0)?;
        corr.scale(&Term::monomial(b.clone(), n - 1));
        diff.extend(corr);
        if !diff.is_zero_sum() {
            return Ok(Some(format!("kernel recurrence fails at n={n}")));
        }
    }
    Ok(None)
}

fn gen_basic_termwise(n_max: i64, seed: u64) -> Outcome {
    let one = Rational::one();
    let mut rng = SplitMix64::new(seed ^ 0x6E_B5);
    for n in 0..=n_max {
        let mut a = rng.small_rational();
        while a.is_one() {
            a = rng.small_rational();
        }
        let b = rng.small_rational();
        let minus_ab = -(&a * &b);
        for k in 0..=n {
            // left sides, term k: GEN_BASIC at (x, y) = (1, q) vs
            // (q;q)_n * CARLITZ
            let mut lhs = Term::monomial(rational_pow(&minus_ab, n - k)?, n * (n - 1) / 2 - k * (k - 1) / 2);
            lhs.mul_qbin(n, k, 1)?;
            lhs.mul_poch(&a, 0, 1, k)?;
            lhs.mul_poch(&b, 0, 1, k)?;
            lhs.mul_poch(&one, 1, 1, n - k)?;
            let mut rhs = Term::monomial(rational_pow(&minus_ab, n - k)?, n * (n - 1) / 2 - k * (k - 1) / 2);
            rhs.mul_poch(&a, 0, 1, k)?;
            rhs.mul_poch(&b, 0, 1, k)?;
            rhs.div_poch(&one, 1, 1, k)?;
            rhs.mul_poch(&one, 1, 1, n)?;
            if lhs.to_ratfun()? != rhs.to_ratfun()? {
                return Ok(Some(format!("left terms differ at n={n}, k={k}")));
            }
            // right sides, term k
            let mut lhs = Term::monomial(rational_pow(&-b.clone(), k)?, k * (k - 1) / 2);
            lhs.mul_qbin(n, k, 1)?;
            lhs.mul_poch(&a, 1, 1, n)?;
            lhs.mul_poch(&a, 0, 1, n - k)?;
            lhs.div_poch(&a, 1, 1, n - k)?;
            let mut rhs = Term::monomial(rational_pow(&-b.clone(), k)?, k * (k - 1) / 2);
            rhs.mul_poch(&one, 1, 1, n)?;
            rhs.mul_poch(&a, 0, 1, n + 1)?;
            rhs.div_poch(&one, 1, 1, k)?;
            rhs.div_poch(&one, 1, 1, n - k)?;
            rhs.div_factor(&a, n - k)?;
            if lhs.to_ratfun()? != rhs.to_ratfun()? {
                return Ok(Some(format!("right terms differ at n={n}, k={k}")));
            }
        }
    }
    Ok(None)
}

fn even_main(id: CongruenceId, n_max: i64) -> Outcome {
    for n in (3..=n_max).step_by(2) {
        match id {
            CongruenceId::ThMainM => {
                for m in 1..=(n + 1) / 2 {
                    let case = CongruenceCase::with_param(id, n, "m", m);
                    if !lhs_is_even(&case)? {
                        return Ok(Some(format!("S(q) != S(-q) at n={n}, m={m}")));
                    }
                }
            }
            CongruenceId::ThMainD => {
                for d in -(n - 3) / 2..=(n - 3) / 2 {
                    let case = CongruenceCase::with_param(id, n, "d", d);
                    if !lhs_is_even(&case)? {
                        return Ok(Some(format!("S(q) != S(-q) at n={n}, d={d}")));
                    }
                }
            }
            _ => unreachable!("evenness oracle covers the two main theorems"),
        }
    }
    Ok(None)
}

fn strength_mono(n_max: i64) -> Outcome {
    for n in (3..=n_max).step_by(2) {
        let mut cases = vec![
            CongruenceCase::new(CongruenceId::GuoTauraso, n),
            CongruenceCase::new(CongruenceId::WangNi1, n),
            CongruenceCase::new(CongruenceId::WangNi2, n),
            CongruenceCase::new(CongruenceId::WangNi3, n),
            CongruenceCase::new(CongruenceId::GuGuo, n),
            CongruenceCase::new(CongruenceId::LiuSq, n),
        ];
        for d in -(n - 3) / 2..=(n - 3) / 2 {
            cases.push(CongruenceCase::with_param(CongruenceId::ThMainD, n, "d", d));
        }
        for case in cases {
            let diff = congruence_diff(&case)?;
            let m2 = Modulus::new(case.n as u32, 2)?;
            let m1 = Modulus::new(case.n as u32, 1)?;
            if !diff.divisible_by(&m2)? {
                return Ok(Some(format!("{:?} fails mod Phi^2 at n={n}", case.id)));
            }
            if !diff.divisible_by(&m1)? {
                return Ok(Some(format!(
                    "{:?} passes mod Phi^2 but not mod Phi at n={n}",
                    case.id
                )));
            }
        }
    }
    Ok(None)
}

fn consistency_d(n_max: i64) -> Outcome {
    for n in (3..=n_max).step_by(2) {
        let modulus = Modulus::new(n as u32, 2)?;
        let mut pairs: Vec<(CongruenceCase, CongruenceCase)> = vec![(
            CongruenceCase::with_param(CongruenceId::CorDQ2k, n, "d", 0),
            CongruenceCase::new(CongruenceId::WangNi3, n),
        )];
        if n >= 5 {
            pairs.push((
                CongruenceCase::with_param(CongruenceId::CorDQk, n, "d", -1),
                CongruenceCase::new(CongruenceId::WangNi1, n),
            ));
            pairs.push((
                CongruenceCase::with_param(CongruenceId::CorDQ2k, n, "d", -1),
                CongruenceCase::new(CongruenceId::WangNi2, n),
            ));
            pairs.push((
                CongruenceCase::with_param(CongruenceId::CorDQk, n, "d", 1),
                CongruenceCase::new(CongruenceId::WangNi4, n),
            ));
            pairs.push((
                CongruenceCase::with_param(CongruenceId::CorDQk, n, "d", 1),
                CongruenceCase::new(CongruenceId::GuGuo, n),
            ));
        }
        for (general, explicit) in pairs {
            let mut diff = congruence_rhs(&general)?;
            diff.extend(congruence_rhs(&explicit)?.negated());
            if !diff.divisible_by(&modulus)? {
                return Ok(Some(format!(
                    "right sides of {:?} and {:?} disagree mod Phi^2 at n={n}",
                    general.id, explicit.id
                )));
            }
        }
    }
    Ok(None)
}

fn qmorley_implies(n_max: i64) -> Outcome {
    for n in (3..=n_max).step_by(2) {
        let modulus = Modulus::new(n as u32, 2)?;
        let full = congruence_rhs(&CongruenceCase::new(CongruenceId::QmorleyFull, n))?;
        let mut sq = congruence_rhs(&CongruenceCase::new(CongruenceId::QmorleySq, n))?;
        // The squared-modulus statement carries the unit
        // (-1)^{(n-1)/2} q^{(n^2-1)/4} on the other side.
        sq.scale(&Term::monomial(sign_pow((n - 1) / 2), (n * n - 1) / 4));
        let mut diff = full;
        diff.extend(sq.negated());
        if !diff.divisible_by(&modulus)? {
            return Ok(Some(format!("right sides differ mod Phi^2 at n={n}")));
        }
    }
    Ok(None)
}

/// Seed helper so oracle runs stay reproducible per id.
pub fn oracle_seed(root: u64, id: OracleId) -> u64 {
    case_seed(root, oracle_meta(id).name, 0, &[], 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_oracles_pass() {
        for id in [
            OracleId::QPascal,
            OracleId::QBinomTheorem,
            OracleId::QBinomAtOne,
            OracleId::PochSplit,
            OracleId::PochReindex,
            OracleId::PochShift,
            OracleId::DeltaClosed,
            OracleId::CarlitzOpExpansion,
        ] {
            let r = run_oracle(id, 42);
            assert!(r.passed(), "{}: {:?}", r.id, r.detail);
        }
    }

    #[test]
    fn cyclotomic_oracles_pass_small() {
        assert!(cyclo_product(40).unwrap().is_none());
        assert!(cyclo_even_split(21).unwrap().is_none());
    }

    #[test]
    fn structural_oracles_pass_small() {
        assert!(carlitz_op_apply(4, 42).unwrap().is_none());
        assert!(phi_recurrence(5, 42).unwrap().is_none());
        assert!(gen_basic_termwise(5, 42).unwrap().is_none());
        assert!(even_main(CongruenceId::ThMainM, 9).unwrap().is_none());
        assert!(even_main(CongruenceId::ThMainD, 9).unwrap().is_none());
        assert!(strength_mono(7).unwrap().is_none());
        assert!(consistency_d(9).unwrap().is_none());
        assert!(qmorley_implies(9).unwrap().is_none());
    }
}
