//! Python bindings for the sqprod library.
//!
//! Exposes the exact F_k / F / L_k solvers, the Hall–Montgomery constant,
//! the Hall set and its certificate, the tuple sampler, and the b-file
//! parser. Build as a cdylib and import as `sqprod_py`; see
//! `python/smoke_test.py` at the repository root.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sqprod::arith;
use sqprod::exact::{self, ExactConfig};
use sqprod::multopt;
use sqprod::oeis;
use sqprod::sampler::{self, SamplerConfig};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyfunction]
fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

/// F_{k,m}(N): largest subset of {1..N} with no k distinct elements whose
/// product is an m-th power.
#[pyfunction(signature = (n, k, m = 2))]
fn compute_fk(n: u32, k: u32, m: u32) -> PyResult<u64> {
    exact::compute_fk(n, k, m, &ExactConfig::default()).map_err(value_err)
}

/// (F(N), N - 2 F(N)).
#[pyfunction]
fn compute_f(n: u32) -> PyResult<(u64, i64)> {
    let (min_sum, _) = multopt::min_multiplicative_sum(n).map_err(value_err)?;
    let f = multopt::compute_f(n).map_err(value_err)?;
    Ok((f, min_sum))
}

/// Exact minimum of the multiplicative partial sum with its witnessing
/// prime signs.
#[pyfunction]
fn min_multiplicative_sum(n: u32) -> PyResult<(i64, BTreeMap<u64, i8>)> {
    let (min_sum, witness) = multopt::min_multiplicative_sum(n).map_err(value_err)?;
    Ok((min_sum, witness.signs().clone()))
}

/// L_k(N) as an exact rational string "p/q".
#[pyfunction]
fn compute_lk(n: u32, k: u32) -> PyResult<String> {
    let value = exact::compute_lk(n, k, &ExactConfig::default()).map_err(value_err)?;
    Ok(exact::format_rational(&value))
}

/// The k-subsets of {1..N} whose product is an m-th power.
#[pyfunction(signature = (n, k, m = 2))]
fn enumerate_bad_tuples(n: u32, k: u32, m: u32) -> PyResult<Vec<Vec<u32>>> {
    let h = exact::enumerate_bad_tuples(n, k, m, &ExactConfig::default()).map_err(value_err)?;
    Ok(h.edges)
}

#[pyfunction]
fn count_square_ksubsets(n: u32, k: u32) -> PyResult<u64> {
    exact::count_square_ksubsets(n, k).map_err(value_err)
}

#[pyfunction(signature = (tolerance = 1e-7))]
fn hall_montgomery_constant(tolerance: f64) -> PyResult<f64> {
    if !(tolerance > 0.0 && tolerance <= 1e-3) {
        return Err(value_err(format!("tolerance {tolerance} outside (0, 1e-3]")));
    }
    Ok(multopt::hall_montgomery_constant(tolerance))
}

/// (threshold, members) of the set with exactly one prime factor above
/// N^{1/u}, counted with multiplicity.
#[pyfunction]
fn build_hall_set(n: u64, u: f64) -> PyResult<(u64, Vec<u64>)> {
    let table = arith::FactorTable::build(n.max(4)).map_err(value_err)?;
    let hs = multopt::build_hall_set(&table, n, u).map_err(value_err)?;
    Ok((hs.threshold, hs.members))
}

#[pyfunction]
fn certify_no_odd_power_products(members: Vec<u64>, threshold: u64) -> PyResult<bool> {
    let limit = members.iter().copied().max().unwrap_or(2).max(2);
    let table = arith::FactorTable::build(limit).map_err(value_err)?;
    multopt::certify_no_odd_power_products(&members, threshold, &table).map_err(value_err)
}

#[pyfunction]
fn liouville_negative_set(n: u64) -> PyResult<Vec<u64>> {
    let table = arith::FactorTable::build(n.max(2)).map_err(value_err)?;
    multopt::liouville_negative_set(n, &table).map_err(value_err)
}

/// Exact test for x = y^m on arbitrary-size integers.
#[pyfunction]
fn is_perfect_power(x: BigUint, m: u32) -> PyResult<bool> {
    if m < 2 {
        return Err(value_err("m must be >= 2"));
    }
    Ok(arith::is_perfect_power(&x, m))
}

/// Prime exponents of n reduced mod m, keyed by prime, zeros omitted.
#[pyfunction]
fn residue_vector(n: u64, m: u32) -> PyResult<BTreeMap<u64, u32>> {
    let table = arith::FactorTable::build(n.max(2)).map_err(value_err)?;
    let v = arith::residue_vector(n, m, &table).map_err(value_err)?;
    Ok(v.entries_by_prime(&table).collect())
}

/// Sum of 1/p over primes in [lo, hi].
#[pyfunction]
fn prime_harmonic_sum(lo: u64, hi: u64) -> PyResult<f64> {
    let table = arith::FactorTable::build(hi.max(2)).map_err(value_err)?;
    arith::prime_harmonic_sum(lo, hi, &table).map_err(value_err)
}

/// Both sides of the Euler-product identity as exact rational strings.
#[pyfunction]
fn euler_identity_check(bound: u64, k: u32, m: u32) -> PyResult<(String, String)> {
    let (lhs, rhs) = sampler::euler_identity_check(bound, k, m).map_err(value_err)?;
    Ok((exact::format_rational(&lhs), exact::format_rational(&rhs)))
}

/// Run the seeded tuple sampler and return the aggregated report as a JSON
/// string.
#[pyfunction(signature = (n, k, m, eps, seed, trials))]
fn run_monte_carlo(n: u64, k: u32, m: u32, eps: f64, seed: u64, trials: u64) -> PyResult<String> {
    let config = SamplerConfig::new(n, k, m, eps, seed).map_err(value_err)?;
    let report = sampler::run_monte_carlo(&config, trials);
    Ok(serde_json::to_string(&report).expect("report serializes"))
}

/// One sampled tuple (n_1..n_k) for the given trial index.
#[pyfunction]
fn sample_tuple(n: u64, k: u32, m: u32, eps: f64, seed: u64, trial: u64) -> PyResult<Vec<BigUint>> {
    let config = SamplerConfig::new(n, k, m, eps, seed).map_err(value_err)?;
    Ok(sampler::sample_trial(&config, trial).n_values)
}

/// Parse OEIS b-file text into (index, value) pairs.
#[pyfunction]
fn parse_bfile(text: &str) -> PyResult<Vec<(i64, BigInt)>> {
    let entries = oeis::parse_bfile(text).map_err(value_err)?;
    Ok(entries.into_iter().map(|e| (e.index, e.value)).collect())
}

/// Smallest-prime-factor sieve shared across repeated queries.
#[pyclass(name = "FactorTable")]
struct PyFactorTable {
    inner: arith::FactorTable,
}

#[pymethods]
impl PyFactorTable {
    #[new]
    fn new(limit: u64) -> PyResult<Self> {
        Ok(PyFactorTable {
            inner: arith::FactorTable::build(limit).map_err(value_err)?,
        })
    }

    fn limit(&self) -> u64 {
        self.inner.limit()
    }

    fn primes(&self) -> Vec<u64> {
        self.inner.primes().to_vec()
    }

    fn is_prime(&self, n: u64) -> bool {
        self.inner.is_prime(n)
    }

    fn smallest_prime_factor(&self, n: u64) -> PyResult<u64> {
        self.inner.smallest_prime_factor(n).map_err(value_err)
    }

    fn factorize(&self, n: u64) -> PyResult<Vec<(u64, u32)>> {
        self.inner.factorize(n).map_err(value_err)
    }

    /// Squarefree kernel of n (product of primes with odd exponent).
    fn kernel(&self, n: u64) -> PyResult<BigUint> {
        let v = arith::residue_vector(n, 2, &self.inner).map_err(value_err)?;
        Ok(v.kernel(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("FactorTable(limit={})", self.inner.limit())
    }
}

#[pymodule]
fn sqprod_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFactorTable>()?;
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(compute_fk, m)?)?;
    m.add_function(wrap_pyfunction!(compute_f, m)?)?;
    m.add_function(wrap_pyfunction!(min_multiplicative_sum, m)?)?;
    m.add_function(wrap_pyfunction!(compute_lk, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_bad_tuples, m)?)?;
    m.add_function(wrap_pyfunction!(count_square_ksubsets, m)?)?;
    m.add_function(wrap_pyfunction!(hall_montgomery_constant, m)?)?;
    m.add_function(wrap_pyfunction!(build_hall_set, m)?)?;
    m.add_function(wrap_pyfunction!(certify_no_odd_power_products, m)?)?;
    m.add_function(wrap_pyfunction!(liouville_negative_set, m)?)?;
    m.add_function(wrap_pyfunction!(is_perfect_power, m)?)?;
    m.add_function(wrap_pyfunction!(residue_vector, m)?)?;
    m.add_function(wrap_pyfunction!(prime_harmonic_sum, m)?)?;
    m.add_function(wrap_pyfunction!(euler_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(run_monte_carlo, m)?)?;
    m.add_function(wrap_pyfunction!(sample_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(parse_bfile, m)?)?;
    Ok(())
}
