//! Exact desk-scale computations around subsets of `{1..N}` whose products
//! form perfect powers.
//!
//! The crate has five computational layers:
//!
//! * [`arith`] — smallest-prime-factor sieve, residue exponent vectors
//!   (squarefree kernels mod m), exact perfect-power tests, prime harmonic
//!   sums.
//! * [`exact`] — enumeration of "bad" k-subsets (product an m-th power) as a
//!   hypergraph and an exact branch-and-bound maximum independent subset
//!   solver, in cardinality and weighted (sum of 1/n) modes.
//! * [`multopt`] — exact minimisation of partial sums of completely
//!   multiplicative ±1 functions, the Hall–Montgomery constant, and the
//!   one-large-prime-factor extremal set with its multiplicative certificate.
//! * [`sampler`] — seeded Monte Carlo for random k-tuples multiplying to an
//!   m-th power, with law checks and event statistics.
//! * [`oeis`] — b-file parsing, cached/offline sequence retrieval, and prefix
//!   comparison against computed values.
//!
//! The [`cli`] module backs the `sqprod` binary.

pub mod arith;
pub mod cli;
pub mod exact;
pub mod multopt;
pub mod oeis;
pub mod sampler;
