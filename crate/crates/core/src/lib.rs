//! Exact-arithmetic verification engine for q-series identities and
//! q-congruences modulo cyclotomic polynomial powers.
//!
//! Layers, bottom up:
//!
//! - [`qpoly`]: Laurent polynomials and rational functions in `q` over
//!   arbitrary-precision rationals, plus cyclotomic polynomials.
//! - [`qring`]: the quotient rings Q[q]/Phi_n(q)^r.
//! - [`terms`]: factored Pochhammer-quotient sums, the workhorse behind the
//!   verification engines.
//! - [`qseries`]: q-Pochhammer symbols, q-binomials, Hahn polynomials,
//!   terminating 3phi2 series and friends.
//! - [`operators`]: the noncommutative q-shift operator algebra on two
//!   variables.
//! - [`identities`], [`congruences`]: registry-driven verification of the
//!   transformation identities and cyclotomic congruences.
//! - [`suite`]: batch execution, seeded sampling, corpus files and reports.
//!
//! Everything is exact: no floating point anywhere.


pub mod congruences;
pub mod error;
pub mod identities;
pub mod report;
pub mod sample;
pub mod suite;
pub mod operators;
pub mod oracles;
pub mod qseries;


pub mod qpoly;
pub mod qring;




pub mod terms;

pub use error::{Error, Result};
