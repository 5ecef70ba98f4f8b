//! Seeded Monte Carlo for random k-tuples multiplying to an m-th power.
//!
//! One d-component and one p-component are drawn per m-subset of `{1..k}`:
//! d is a squarefree smooth number built by including each prime p below the
//! smoothness bound independently with probability 1/(w·p+1), where
//! w = C(k−1, m−1); p is a prime in `[N^ε, N]` drawn with probability
//! proportional to 1/p. The tuple entries are the products of the components
//! over the m-subsets containing each coordinate, so the full product is an
//! m-th power by construction. Per-trial randomness is keyed by
//! (seed, trial index), making reports reproducible and independent of
//! execution order.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{ArithError, FactorTable};

#[derive(Debug, Error)]
pub enum SamplerError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no prime in the sampling range [{lo}, {hi}]")]
    EmptyPrimeRange { lo: u64, hi: u64 },
    #[error("euler check bound {bound} exceeds the exact-enumeration cap {cap}")]
    EulerBoundTooLarge { bound: u64, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Largest N the p-sampling table accepts (a full prime sieve is built).
pub const SAMPLER_N_CAP: u64 = 100_000_000;

pub fn binomial(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u64;
    for i in 0..r {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Validated sampling parameters plus the precomputed prime tables.
#[derive(Debug, Clone)]
pub struct SamplerConfig {
    n: u64,
    k: u32,
    m: u32,
    eps: f64,
    seed: u64,
    smooth_bound: u64,
    prime_lo: u64,
    weight_denominator: u64,
    rankin_threshold: u64,
    smooth_primes: Vec<u64>,
    inclusion_probs: Vec<f64>,
    range_primes: Vec<u64>,
    cumulative_weights: Vec<f64>,
    subsets: Vec<Vec<u8>>,
}

/// Round-then-floor / round-then-ceil of N^e, guarding against float error
/// at exact integer powers.
fn int_pow_floor(n: u64, e: f64) -> u64 {
    let x = (n as f64).powf(e);
    let r = x.round();
    if (x - r).abs() < 1e-6 * r.max(1.0) {
        r as u64
    } else {
        x.floor() as u64
    }
}

fn int_pow_ceil(n: u64, e: f64) -> u64 {
    let x = (n as f64).powf(e);
    let r = x.round();
    if (x - r).abs() < 1e-6 * r.max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

impl SamplerConfig {
    pub fn new(n: u64, k: u32, m: u32, eps: f64, seed: u64) -> Result<Self, SamplerError> {
        if k < 4 {
            return Err(SamplerError::InvalidConfig(format!("k = {k} < 4")));
        }
        if m < 2 {
            return Err(SamplerError::InvalidConfig(format!("m = {m} < 2")));
        }
        if k < m + 2 {
            return Err(SamplerError::InvalidConfig(format!(
                "k = {k} < m + 2 = {}",
                m + 2
            )));
        }
        if !(eps > 0.0 && eps <= 0.5) {
            return Err(SamplerError::InvalidConfig(format!(
                "eps = {eps} outside (0, 0.5]"
            )));
        }
        if !(2..=SAMPLER_N_CAP).contains(&n) {
            return Err(SamplerError::InvalidConfig(format!(
                "N = {n} outside 2..={SAMPLER_N_CAP}"
            )));
        }

        let smooth_bound = int_pow_floor(n, eps * eps).max(1);
        let prime_lo = int_pow_ceil(n, eps);
        if prime_lo > n {
            return Err(SamplerError::InvalidConfig(format!(
                "prime_lo = {prime_lo} exceeds N = {n}"
            )));
        }
        let weight_denominator = binomial(k as u64 - 1, m as u64 - 1);
        let rankin_threshold = int_pow_floor(n, eps);

        let table = FactorTable::build(n.max(2))?;
        let smooth_primes: Vec<u64> = table
            .primes_in(2, smooth_bound.saturating_sub(1))
            .to_vec();
        if smooth_primes.len() > 32 {
            return Err(SamplerError::InvalidConfig(format!(
                "{} smoothness primes exceed the 32-bit support mask",
                smooth_primes.len()
            )));
        }
        let inclusion_probs: Vec<f64> = smooth_primes
            .iter()
            .map(|&p| 1.0 / (weight_denominator as f64 * p as f64 + 1.0))
            .collect();

        let range_primes: Vec<u64> = table.primes_in(prime_lo, n).to_vec();
        if range_primes.is_empty() {
            return Err(SamplerError::EmptyPrimeRange { lo: prime_lo, hi: n });
        }
        let mut cumulative_weights = Vec::with_capacity(range_primes.len());
        let mut acc = 0.0f64;
        for &p in &range_primes {
            acc += 1.0 / p as f64;
            cumulative_weights.push(acc);
        }

        let subsets = m_subsets(k as u8, m as u8);

        Ok(SamplerConfig {
            n,
            k,
            m,
            eps,
            seed,
            smooth_bound,
            prime_lo,
            weight_denominator,
            rankin_threshold,
            smooth_primes,
            inclusion_probs,
            range_primes,
            cumulative_weights,
            subsets,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    pub fn smooth_bound(&self) -> u64 {
        self.smooth_bound
    }
    pub fn prime_lo(&self) -> u64 {
        self.prime_lo
    }
    pub fn weight_denominator(&self) -> u64 {
        self.weight_denominator
    }
    pub fn smooth_primes(&self) -> &[u64] {
        &self.smooth_primes
    }
    pub fn range_primes(&self) -> &[u64] {
        &self.range_primes
    }
    /// The m-subsets of `{1..k}` in lexicographic order; components are drawn
    /// and stored in this order.
    pub fn subsets(&self) -> &[Vec<u8>] {
        &self.subsets
    }
}

fn m_subsets(k: u8, m: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::with_capacity(m as usize);
    fn rec(k: u8, m: u8, start: u8, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == m as usize {
            out.push(cur.clone());
            return;
        }
        let remaining = m as usize - cur.len();
        for v in start..=(k + 1 - remaining as u8) {
            cur.push(v);
            rec(k, m, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(k, m, 1, &mut cur, &mut out);
    out
}

/// One draw of all components with the assembled tuple and event flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSample {
    /// d-component per m-subset, in `config.subsets()` order.
    pub d_components: Vec<u128>,
    /// Support of each d-component as a bitmask over `config.smooth_primes()`.
    pub d_supports: Vec<u32>,
    /// p-component per m-subset.
    pub p_components: Vec<u64>,
    /// n_1..n_k.
    pub n_values: Vec<BigUint>,
    pub in_window: Vec<bool>,
    pub d_product_squarefree: bool,
    pub event_e: bool,
}

impl TupleSample {
    pub fn product(&self) -> BigUint {
        self.n_values.iter().product()
    }

    /// ω(d) per d-component.
    pub fn d_omegas(&self) -> Vec<u32> {
        self.d_supports.iter().map(|s| s.count_ones()).collect()
    }
}

/// Draw one d-component: include each prime below the smoothness bound
/// independently with probability 1/(w·p+1). Returns 1 when no prime is
/// included (in particular whenever the bound leaves no primes).
pub fn sample_d(config: &SamplerConfig, rng: &mut impl Rng) -> u128 {
    sample_d_with_support(config, rng).0
}

fn sample_d_with_support(config: &SamplerConfig, rng: &mut impl Rng) -> (u128, u32) {
    let mut value = 1u128;
    let mut support = 0u32;
    for (i, (&p, &prob)) in config
        .smooth_primes
        .iter()
        .zip(&config.inclusion_probs)
        .enumerate()
    {
        if rng.random_bool(prob) {
            value *= p as u128;
            support |= 1 << i;
        }
    }
    (value, support)
}

/// Draw one p-component with probability proportional to 1/p over the primes
/// in `[N^ε, N]`, via the cumulative-weight table.
pub fn sample_p(config: &SamplerConfig, rng: &mut impl Rng) -> u64 {
    let total = *config
        .cumulative_weights
        .last()
        .expect("config guarantees a nonempty prime range");
    let u = rng.random::<f64>() * total;
    let idx = config.cumulative_weights.partition_point(|&c| c <= u);
    config.range_primes[idx.min(config.range_primes.len() - 1)]
}

/// Draw all components (d's first, then p's, each in subset order) and
/// assemble the tuple.
pub fn sample_tuple(config: &SamplerConfig, rng: &mut impl Rng) -> TupleSample {
    let ds: Vec<(u128, u32)> = config
        .subsets
        .iter()
        .map(|_| sample_d_with_support(config, rng))
        .collect();
    let ps: Vec<u64> = config
        .subsets
        .iter()
        .map(|_| sample_p(config, rng))
        .collect();
    assemble_tuple(
        config,
        ds.iter().map(|&(v, _)| v).collect(),
        ds.iter().map(|&(_, s)| s).collect(),
        ps,
    )
}

/// Assemble a tuple from explicit components (used by tests to force
/// degenerate draws). Components are indexed like `config.subsets()`.
pub fn assemble_tuple(
    config: &SamplerConfig,
    d_components: Vec<u128>,
    d_supports: Vec<u32>,
    p_components: Vec<u64>,
) -> TupleSample {
    let k = config.k as usize;
    let mut n_values = vec![BigUint::one(); k];
    for (s, subset) in config.subsets.iter().enumerate() {
        let dv = BigUint::from(d_components[s]);
        let pv = BigUint::from(p_components[s]);
        for &i in subset {
            let slot = &mut n_values[i as usize - 1];
            *slot = &*slot * &dv * &pv;
        }
    }

    // product of all d's squarefree <=> supports pairwise disjoint
    let mut union = 0u32;
    let mut total_bits = 0u32;
    for &s in &d_supports {
        union |= s;
        total_bits += s.count_ones();
    }
    let d_product_squarefree = union.count_ones() == total_bits;

    let n_big = BigUint::from(config.n);
    let in_window: Vec<bool> = n_values
        .iter()
        .map(|v| v * 2u32 >= n_big && *v <= n_big)
        .collect();
    let event_e = d_product_squarefree && in_window.iter().all(|&b| b);

    TupleSample {
        d_components,
        d_supports,
        p_components,
        n_values,
        in_window,
        d_product_squarefree,
        event_e,
    }
}

/// Re-derive the event flag: the product of the d-components is squarefree
/// and N/2 ≤ n_i ≤ N for every coordinate.
pub fn check_event_e(t: &TupleSample, config: &SamplerConfig) -> bool {
    let mut union = 0u32;
    let mut total_bits = 0u32;
    for &s in &t.d_supports {
        union |= s;
        total_bits += s.count_ones();
    }
    if union.count_ones() != total_bits {
        return false;
    }
    let n_big = BigUint::from(config.n);
    t.n_values.iter().all(|v| v * 2u32 >= n_big && *v <= n_big)
}

/// Target magnitudes N_i = N / ∏ d-components containing i (diagnostic).
pub fn target_magnitudes(t: &TupleSample, config: &SamplerConfig) -> Vec<f64> {
    divisor_products(t, config)
        .iter()
        .map(|d| config.n as f64 / d.to_f64().unwrap_or(f64::INFINITY))
        .collect()
}

fn divisor_products(t: &TupleSample, config: &SamplerConfig) -> Vec<BigUint> {
    let k = config.k as usize;
    let mut out = vec![BigUint::one(); k];
    for (s, subset) in config.subsets.iter().enumerate() {
        let dv = BigUint::from(t.d_components[s]);
        for &i in subset {
            let slot = &mut out[i as usize - 1];
            *slot = &*slot * &dv;
        }
    }
    out
}

/// Deterministic RNG for one trial: the stream index separates trials under
/// a common seed, so results do not depend on execution order.
pub fn trial_rng(config: &SamplerConfig, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial_index);
    rng
}

/// Sample the tuple of a specific trial index.
pub fn sample_trial(config: &SamplerConfig, trial_index: u64) -> TupleSample {
    let mut rng = trial_rng(config, trial_index);
    sample_tuple(config, &mut rng)
}

/// Summary of the target magnitudes observed across all trials and
/// coordinates. Bucketed so that aggregation stays exact and independent of
/// trial order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetMagnitudeSummary {
    pub count: u64,
    pub min: f64,
    pub max: f64,
    /// Counts keyed by floor(log2(N_i)).
    pub log2_histogram: BTreeMap<i32, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub trials: u64,
    pub hits_e: u64,
    pub p_hat_e: f64,
    pub p_hat_std_err: f64,
    /// Trials whose full product passes the exact m-th-power test; equals
    /// `trials` by construction.
    pub perfect_power_pass: u64,
    /// Trials with n_i = n_j for some i < j.
    pub collisions: u64,
    /// Trials with every d-component ≤ N^ε.
    pub rankin_pass: u64,
    pub omega_mean: f64,
    pub omega_variance: f64,
    /// Largest fraction of E-hits attained by a single value at a single
    /// coordinate.
    pub max_hit_frequency: f64,
    pub target_magnitudes: TargetMagnitudeSummary,
}

/// Order-independent accumulator: integer counters, min/max, and hash counts
/// only, so that any permutation of the same trials yields the same report.
#[derive(Debug, Default)]
pub struct MonteCarloAccumulator {
    trials: u64,
    hits_e: u64,
    perfect_power_pass: u64,
    collisions: u64,
    rankin_pass: u64,
    omega_sum: u64,
    omega_sq_sum: u64,
    omega_count: u64,
    hit_counts: HashMap<(u8, u64), u64>,
    tm_count: u64,
    tm_min: f64,
    tm_max: f64,
    tm_histogram: BTreeMap<i32, u64>,
}

impl MonteCarloAccumulator {
    pub fn new() -> Self {
        MonteCarloAccumulator {
            tm_min: f64::INFINITY,
            tm_max: f64::NEG_INFINITY,
            ..Default::default()
        }
    }

    pub fn add(&mut self, t: &TupleSample, config: &SamplerConfig) {
        self.trials += 1;
        if crate::arith::is_perfect_power(&t.product(), config.m) {
            self.perfect_power_pass += 1;
        }
        if t.event_e {
            self.hits_e += 1;
            for (i, v) in t.n_values.iter().enumerate() {
                // on E every n_i <= N, so the value fits u64
                let key = (i as u8 + 1, v.to_u64().expect("n_i <= N on E"));
                *self.hit_counts.entry(key).or_insert(0) += 1;
            }
        }
        let mut collided = false;
        for i in 0..t.n_values.len() {
            for j in (i + 1)..t.n_values.len() {
                if t.n_values[i] == t.n_values[j] {
                    collided = true;
                }
            }
        }
        if collided {
            self.collisions += 1;
        }
        if t.d_components
            .iter()
            .all(|&d| d <= config.rankin_threshold as u128)
        {
            self.rankin_pass += 1;
        }
        for omega in t.d_omegas() {
            self.omega_sum += omega as u64;
            self.omega_sq_sum += (omega as u64) * (omega as u64);
            self.omega_count += 1;
        }
        for ni in target_magnitudes(t, config) {
            self.tm_count += 1;
            self.tm_min = self.tm_min.min(ni);
            self.tm_max = self.tm_max.max(ni);
            let bucket = ni.log2().floor() as i32;
            *self.tm_histogram.entry(bucket).or_insert(0) += 1;
        }
    }

    pub fn finalize(self) -> MonteCarloReport {
        let trials = self.trials.max(1);
        let p_hat = self.hits_e as f64 / trials as f64;
        let std_err = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        let omega_count = self.omega_count.max(1) as f64;
        let omega_mean = self.omega_sum as f64 / omega_count;
        let omega_variance = self.omega_sq_sum as f64 / omega_count - omega_mean * omega_mean;
        let max_hit_frequency = if self.hits_e == 0 {
            0.0
        } else {
            *self.hit_counts.values().max().unwrap() as f64 / self.hits_e as f64
        };
        MonteCarloReport {
            trials: self.trials,
            hits_e: self.hits_e,
            p_hat_e: p_hat,
            p_hat_std_err: std_err,
            perfect_power_pass: self.perfect_power_pass,
            collisions: self.collisions,
            rankin_pass: self.rankin_pass,
            omega_mean,
            omega_variance,
            max_hit_frequency,
            target_magnitudes: TargetMagnitudeSummary {
                count: self.tm_count,
                min: if self.tm_count == 0 { 0.0 } else { self.tm_min },
                max: if self.tm_count == 0 { 0.0 } else { self.tm_max },
                log2_histogram: self.tm_histogram,
            },
        }
    }
}

/// Run `trials` independent tuples and aggregate the report.
pub fn run_monte_carlo(config: &SamplerConfig, trials: u64) -> MonteCarloReport {
    let mut acc = MonteCarloAccumulator::new();
    for index in 0..trials {
        let t = sample_trial(config, index);
        acc.add(&t, config);
    }
    acc.finalize()
}

/// Both sides of the Euler-product identity
/// Σ_{d ∈ D} 1/(w^{ω(d)} d) = ∏_{p < bound} (1 + 1/(w·p)), w = C(k−1, m−1),
/// as exact rationals over the squarefree numbers D smooth below `bound`.
pub fn euler_identity_check(
    bound: u64,
    k: u32,
    m: u32,
) -> Result<(BigRational, BigRational), SamplerError> {
    const CAP: u64 = 50;
    if bound > CAP {
        return Err(SamplerError::EulerBoundTooLarge { bound, cap: CAP });
    }
    if m < 2 || k < m + 2 {
        return Err(SamplerError::InvalidArgument(format!(
            "(k, m) = ({k}, {m}) requires m >= 2 and k >= m + 2"
        )));
    }
    let w = binomial(k as u64 - 1, m as u64 - 1);
    let table = FactorTable::build(bound.max(2))?;
    let primes: Vec<u64> = table.primes_in(2, bound.saturating_sub(1)).to_vec();

    let mut lhs = BigRational::zero();
    for mask in 0u32..(1 << primes.len()) {
        let mut d = BigInt::one();
        for (i, &p) in primes.iter().enumerate() {
            if mask & (1 << i) != 0 {
                d *= BigInt::from(p);
            }
        }
        let omega = mask.count_ones();
        let denom = BigInt::from(w).pow(omega) * d;
        lhs += BigRational::new(BigInt::one(), denom);
    }

    let mut rhs = BigRational::one();
    for &p in &primes {
        rhs *= BigRational::one()
            + BigRational::new(BigInt::one(), BigInt::from(w) * BigInt::from(p));
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith;
    use num_traits::FromPrimitive;

    fn config_law_checks() -> SamplerConfig {
        // smooth bound 31 covers the primes 2 and 3
        SamplerConfig::new(1_000_000, 4, 2, 0.5, 0xd15ea5e).unwrap()
    }

    fn config_acceptance() -> SamplerConfig {
        SamplerConfig::new(100_000, 4, 2, 0.3, 1).unwrap()
    }

    #[test]
    fn config_derived_quantities() {
        let c = config_acceptance();
        assert_eq!(c.smooth_bound(), 2);
        assert_eq!(c.prime_lo(), 32);
        assert_eq!(c.weight_denominator(), 3);
        assert!(c.smooth_primes().is_empty());
        assert_eq!(c.range_primes().first(), Some(&37));

        let c = config_law_checks();
        assert_eq!(c.smooth_bound(), 31);
        assert_eq!(c.smooth_primes(), &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(c.prime_lo(), 1000);
    }

    #[test]
    fn config_validation() {
        assert!(matches!(
            SamplerConfig::new(1000, 3, 2, 0.3, 0),
            Err(SamplerError::InvalidConfig(_))
        ));
        assert!(matches!(
            SamplerConfig::new(1000, 4, 3, 0.3, 0),
            Err(SamplerError::InvalidConfig(_))
        ));
        assert!(matches!(
            SamplerConfig::new(1000, 5, 3, 0.6, 0),
            Err(SamplerError::InvalidConfig(_))
        ));
    }

    #[test]
    fn subsets_lexicographic() {
        let c = config_acceptance();
        assert_eq!(
            c.subsets(),
            &[
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn sample_d_degenerate_bound() {
        let c = config_acceptance();
        let mut rng = trial_rng(&c, 0);
        for _ in 0..100 {
            assert_eq!(sample_d(&c, &mut rng), 1);
        }
    }

    #[test]
    fn d_inclusion_frequency_of_two() {
        let c = config_law_checks();
        let mut rng = trial_rng(&c, 0);
        let draws = 100_000u64;
        let mut hits2 = 0u64;
        let mut hits3 = 0u64;
        let mut joint = 0u64;
        for _ in 0..draws {
            let (_, support) = sample_d_with_support(&c, &mut rng);
            let two = support & 1 != 0;
            let three = support & 2 != 0;
            hits2 += two as u64;
            hits3 += three as u64;
            joint += (two && three) as u64;
        }
        let f2 = hits2 as f64 / draws as f64;
        let f3 = hits3 as f64 / draws as f64;
        let f23 = joint as f64 / draws as f64;
        let se = |p: f64| (p * (1.0 - p) / draws as f64).sqrt();
        assert!((f2 - 1.0 / 7.0).abs() <= 3.0 * se(1.0 / 7.0), "f2 = {f2}");
        assert!((f3 - 1.0 / 10.0).abs() <= 3.0 * se(1.0 / 10.0), "f3 = {f3}");
        assert!(
            (f23 - f2 * f3).abs() <= 3.0 * se(f2 * f3),
            "joint {f23} vs product {}",
            f2 * f3
        );
    }

    #[test]
    fn p_single_prime_range() {
        // [5,5] leaves exactly the prime 5
        let c = SamplerConfig::new(5, 4, 2, 0.5, 0);
        // N = 5, eps = 0.5: prime_lo = ceil(sqrt(5)) = 3, so primes {3, 5};
        // craft an explicit single-prime check instead via range [5,5]
        drop(c);
        let mut cfg = SamplerConfig::new(25, 4, 2, 0.5, 0).unwrap();
        // prime_lo = 5: primes 5..25 = {5,7,11,13,17,19,23}
        assert_eq!(cfg.prime_lo(), 5);
        cfg.range_primes = vec![5];
        cfg.cumulative_weights = vec![0.2];
        let mut rng = trial_rng(&cfg, 3);
        for _ in 0..50 {
            assert_eq!(sample_p(&cfg, &mut rng), 5);
        }
    }

    #[test]
    fn p_two_prime_weights() {
        // weights 1/2 and 1/3 normalize to 3/5 and 2/5
        let mut cfg = SamplerConfig::new(1000, 4, 2, 0.3, 0).unwrap();
        cfg.range_primes = vec![2, 3];
        cfg.cumulative_weights = vec![0.5, 0.5 + 1.0 / 3.0];
        let mut rng = trial_rng(&cfg, 0);
        let draws = 100_000u64;
        let mut two = 0u64;
        for _ in 0..draws {
            if sample_p(&cfg, &mut rng) == 2 {
                two += 1;
            }
        }
        let f = two as f64 / draws as f64;
        let se = (0.6 * 0.4 / draws as f64).sqrt();
        assert!((f - 0.6).abs() <= 3.0 * se, "f = {f}");
    }

    #[test]
    fn smallest_range_prime_frequency() {
        let c = config_acceptance();
        let total: f64 = c.range_primes().iter().map(|&p| 1.0 / p as f64).sum();
        let expect = (1.0 / 37.0) / total;
        let mut rng = trial_rng(&c, 9);
        let draws = 100_000u64;
        let mut hits = 0u64;
        for _ in 0..draws {
            if sample_p(&c, &mut rng) == 37 {
                hits += 1;
            }
        }
        let f = hits as f64 / draws as f64;
        let se = (expect * (1.0 - expect) / draws as f64).sqrt();
        assert!((f - expect).abs() <= 3.0 * se, "f = {f}, expect {expect}");
    }

    #[test]
    fn tuple_structure_k4() {
        let c = config_law_checks();
        for index in 0..200 {
            let t = sample_trial(&c, index);
            // n_1 = d12 d13 d14 p12 p13 p14
            let expected = BigUint::from(t.d_components[0])
                * BigUint::from(t.d_components[1])
                * BigUint::from(t.d_components[2])
                * BigUint::from(t.p_components[0])
                * BigUint::from(t.p_components[1])
                * BigUint::from(t.p_components[2]);
            assert_eq!(t.n_values[0], expected);
        }
    }

    #[test]
    fn product_is_perfect_power_always() {
        // 10^5 trials spread across the three parameter pairs
        for (k, m) in [(4u32, 2u32), (5, 2), (5, 3)] {
            let c = SamplerConfig::new(10_000, k, m, 0.4, 42).unwrap();
            for index in 0..34_000 {
                let t = sample_trial(&c, index);
                assert!(
                    arith::is_perfect_power(&t.product(), m),
                    "trial {index} for (k, m) = ({k}, {m})"
                );
            }
        }
    }

    #[test]
    fn forced_degenerate_tuple() {
        let c = config_acceptance();
        let subsets = c.subsets().len();
        // all d = 1 and every p the same prime: n_i = p^{k-1}
        let p = 37u64;
        let t = assemble_tuple(&c, vec![1; subsets], vec![0; subsets], vec![p; subsets]);
        let expect = BigUint::from(p).pow(3);
        for v in &t.n_values {
            assert_eq!(*v, expect);
        }
        // 37^3 = 50653 lies inside [N/2, N] = [50000, 100000]
        assert!(t.event_e);
        assert!(check_event_e(&t, &c));

        let p = 97u64;
        let t = assemble_tuple(&c, vec![1; subsets], vec![0; subsets], vec![p; subsets]);
        // 97^3 > N: event fails on the window
        assert!(t.d_product_squarefree);
        assert!(!t.event_e);
    }

    #[test]
    fn shared_prime_breaks_squarefree() {
        let c = config_law_checks();
        let subsets = c.subsets().len();
        let mut d = vec![1u128; subsets];
        let mut s = vec![0u32; subsets];
        d[0] = 2;
        s[0] = 1;
        d[1] = 2;
        s[1] = 1;
        let t = assemble_tuple(&c, d, s, vec![1009; subsets]);
        assert!(!t.d_product_squarefree);
        assert!(!t.event_e);
        assert!(!check_event_e(&t, &c));
    }

    #[test]
    fn target_magnitude_cases() {
        let c = config_law_checks();
        let subsets = c.subsets().len();
        let t = assemble_tuple(&c, vec![1; subsets], vec![0; subsets], vec![1009; subsets]);
        for v in target_magnitudes(&t, &c) {
            assert_eq!(v, c.n() as f64);
        }

        // d12 = 2, others 1: N_1 = N_2 = N/2, N_3 = N_4 = N
        let mut d = vec![1u128; subsets];
        let mut s = vec![0u32; subsets];
        d[0] = 2;
        s[0] = 1;
        let t = assemble_tuple(&c, d, s, vec![1009; subsets]);
        let tm = target_magnitudes(&t, &c);
        let half = c.n() as f64 / 2.0;
        assert_eq!(tm, vec![half, half, c.n() as f64, c.n() as f64]);
    }

    #[test]
    fn report_deterministic_and_order_independent() {
        let c = SamplerConfig::new(10_000, 4, 2, 0.4, 777).unwrap();
        let a = run_monte_carlo(&c, 500);
        let b = run_monte_carlo(&c, 500);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());

        // aggregate the same trials in reverse order
        let mut acc = MonteCarloAccumulator::new();
        for index in (0..500u64).rev() {
            acc.add(&sample_trial(&c, index), &c);
        }
        let rev = acc.finalize();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&rev).unwrap());
    }

    #[test]
    fn report_single_trial() {
        let c = config_acceptance();
        let a = run_monte_carlo(&c, 1);
        let b = run_monte_carlo(&c, 1);
        assert_eq!(a, b);
        assert_eq!(a.trials, 1);
        assert_eq!(a.perfect_power_pass, 1);
        assert!(a.hits_e <= 1);
    }

    #[test]
    fn rankin_pass_dominates() {
        // (N, k, eps) = (1e6, 4, 0.3): d <= N^eps must hold in >= 90% of trials
        let c = SamplerConfig::new(1_000_000, 4, 2, 0.3, 5).unwrap();
        let report = run_monte_carlo(&c, 5_000);
        assert!(
            report.rankin_pass as f64 / report.trials as f64 >= 0.9,
            "rankin fraction {}",
            report.rankin_pass as f64 / report.trials as f64
        );
    }

    #[test]
    fn euler_identity_examples() {
        let q = |a: i64, b: i64| {
            BigRational::new(BigInt::from_i64(a).unwrap(), BigInt::from_i64(b).unwrap())
        };
        let (lhs, rhs) = euler_identity_check(5, 4, 2).unwrap();
        assert_eq!(lhs, q(35, 27));
        assert_eq!(rhs, q(35, 27));

        let (lhs, rhs) = euler_identity_check(3, 4, 2).unwrap();
        assert_eq!(lhs, q(7, 6));
        assert_eq!(rhs, q(7, 6));

        let (lhs, rhs) = euler_identity_check(2, 4, 2).unwrap();
        assert_eq!(lhs, BigRational::one());
        assert_eq!(rhs, BigRational::one());
    }

    #[test]
    fn euler_identity_across_bounds() {
        for bound in 2..=50u64 {
            for (k, m) in [(4u32, 2u32), (5, 2), (5, 3), (6, 2), (7, 4)] {
                let (lhs, rhs) = euler_identity_check(bound, k, m).unwrap();
                assert_eq!(lhs, rhs, "bound {bound}, (k, m) = ({k}, {m})");
            }
        }
    }

    #[test]
    fn euler_bound_capacity() {
        assert!(matches!(
            euler_identity_check(51, 4, 2),
            Err(SamplerError::EulerBoundTooLarge { .. })
        ));
    }
}
