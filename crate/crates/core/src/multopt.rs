//! Optimization over completely multiplicative ±1 functions.
//!
//! F(N) — the size of the largest subset of `{1..N}` with no odd-size subset
//! multiplying to a square — equals (N - S_min)/2 where S_min is the exact
//! minimum of the partial sum of a completely multiplicative ±1 function.
//! The minimum is found by branch and bound over prime sign choices. The
//! module also evaluates the Hall–Montgomery constant by adaptive quadrature
//! and builds the extremal set of integers with exactly one large prime
//! factor, together with its multiplicative certificate.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arith::{ArithError, FactorTable};

#[derive(Debug, Error)]
pub enum MultOptError {
    #[error("N = {n} exceeds the sign-search limit {limit}")]
    SolverLimit { n: u32, limit: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Debug, Clone)]
pub struct MultOptConfig {
    /// Largest N accepted by the exact sign search.
    pub solver_limit: u32,
    /// Fix f(p) = -1 for primes in (N/2, N] before searching. Each such
    /// prime contributes the single term f(p), so -1 is never worse.
    pub prefix_large_primes: bool,
}

impl Default for MultOptConfig {
    fn default() -> Self {
        MultOptConfig {
            solver_limit: 120,
            prefix_large_primes: true,
        }
    }
}

/// A sign choice f(p) ∈ {−1,+1} per prime p ≤ N and the induced partial sum
/// Σ_{n≤N} f(n).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignAssignment {
    n: u32,
    signs: BTreeMap<u64, i8>,
    partial_sum: i64,
}

impl SignAssignment {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn partial_sum(&self) -> i64 {
        self.partial_sum
    }

    pub fn signs(&self) -> &BTreeMap<u64, i8> {
        &self.signs
    }

    /// f(x) for 1 ≤ x ≤ N, from the prime signs.
    pub fn value(&self, x: u64, table: &FactorTable) -> Result<i8, MultOptError> {
        if x == 0 {
            return Err(MultOptError::InvalidArgument("f(0) undefined".into()));
        }
        let mut sign = 1i8;
        for (p, e) in table.factorize(x)? {
            let s = *self
                .signs
                .get(&p)
                .ok_or_else(|| MultOptError::InvalidArgument(format!("no sign for prime {p}")))?;
            if e % 2 == 1 {
                sign *= s;
            }
        }
        Ok(sign)
    }

    /// Recompute Σ_{n≤N} f(n) from scratch; matches `partial_sum` by
    /// construction.
    pub fn recompute_sum(&self, table: &FactorTable) -> Result<i64, MultOptError> {
        let mut sum = 0i64;
        for x in 1..=self.n as u64 {
            sum += self.value(x, table)? as i64;
        }
        Ok(sum)
    }
}

/// Exact minimum of Σ_{n≤N} f(n) over completely multiplicative
/// f: ℕ → {−1,+1}, with a witnessing assignment.
pub fn min_multiplicative_sum(n: u32) -> Result<(i64, SignAssignment), MultOptError> {
    min_multiplicative_sum_with(n, &MultOptConfig::default())
}

pub fn min_multiplicative_sum_with(
    n: u32,
    config: &MultOptConfig,
) -> Result<(i64, SignAssignment), MultOptError> {
    if n < 1 || n > config.solver_limit {
        return Err(MultOptError::SolverLimit {
            n,
            limit: config.solver_limit,
        });
    }
    if n == 1 {
        return Ok((
            1,
            SignAssignment {
                n,
                signs: BTreeMap::new(),
                partial_sum: 1,
            },
        ));
    }

    let table = FactorTable::build(n as u64)?;
    let primes = table.primes().to_vec();

    // kernel prime indices per term; f(x) depends only on odd-exponent primes
    let mut kernel_indices: Vec<Vec<u32>> = vec![Vec::new(); n as usize + 1];
    for x in 2..=n as u64 {
        for (p, e) in table.factorize(x)? {
            if e % 2 == 1 {
                let idx = table.prime_index(p).expect("sieved prime") as u32;
                kernel_indices[x as usize].push(idx);
            }
        }
    }

    let half = n as u64 / 2;
    let (fixed, searched): (Vec<usize>, Vec<usize>) = if config.prefix_large_primes {
        (0..primes.len()).partition(|&i| primes[i] > half)
    } else {
        (Vec::new(), (0..primes.len()).collect())
    };

    // terms bucketed by their largest kernel prime among searched primes;
    // searched primes are assigned in descending order, so a term is decided
    // once that prime gets its sign. Terms whose kernel holds only fixed
    // primes (or is empty) are decided up front.
    let mut order: Vec<usize> = searched.clone();
    order.sort_by(|&a, &b| primes[b].cmp(&primes[a]));
    let mut position = vec![usize::MAX; primes.len()];
    for (pos, &idx) in order.iter().enumerate() {
        position[idx] = pos;
    }

    let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); order.len() + 1];
    let mut base_sum = 0i64; // terms decided before the search starts
    let mut sign_by_index = vec![0i8; primes.len()];
    for &i in &fixed {
        sign_by_index[i] = -1;
    }
    for (x, kernel) in kernel_indices.iter().enumerate().skip(1) {
        // a term is decided once the last of its searched kernel primes is
        // assigned, i.e. at the maximum position; fixed primes never gate it
        let mut decide_at: Option<usize> = None;
        let mut fixed_sign = 1i8;
        for &idx in kernel {
            let pos = position[idx as usize];
            if pos == usize::MAX {
                fixed_sign *= sign_by_index[idx as usize];
            } else {
                decide_at = Some(decide_at.map_or(pos, |d| d.max(pos)));
            }
        }
        match decide_at {
            None => base_sum += fixed_sign as i64,
            Some(pos) => buckets[pos + 1].push(x as u32),
        }
    }

    // suffix counts of undecided terms for the optimistic bound
    let mut undecided_after = vec![0i64; order.len() + 1];
    for pos in (0..order.len()).rev() {
        undecided_after[pos] = undecided_after[pos + 1] + buckets[pos + 1].len() as i64;
    }

    struct Search<'a> {
        order: &'a [usize],
        buckets: &'a [Vec<u32>],
        undecided_after: &'a [i64],
        kernel_indices: &'a [Vec<u32>],
        sign_by_index: Vec<i8>,
        best: i64,
        best_signs: Vec<i8>,
    }

    fn recurse(s: &mut Search, pos: usize, sum: i64) {
        if sum - s.undecided_after[pos] >= s.best {
            return; // even all-(−1) terms cannot beat the incumbent
        }
        if pos == s.order.len() {
            if sum < s.best {
                s.best = sum;
                s.best_signs = s.sign_by_index.clone();
            }
            return;
        }
        let prime_idx = s.order[pos];
        for sign in [-1i8, 1] {
            s.sign_by_index[prime_idx] = sign;
            let mut next = sum;
            for &x in &s.buckets[pos + 1] {
                let mut v = 1i8;
                for &ki in &s.kernel_indices[x as usize] {
                    v *= s.sign_by_index[ki as usize];
                }
                next += v as i64;
            }
            recurse(s, pos + 1, next);
        }
        s.sign_by_index[prime_idx] = 0;
    }

    let mut search = Search {
        order: &order,
        buckets: &buckets,
        undecided_after: &undecided_after,
        kernel_indices: &kernel_indices,
        sign_by_index,
        best: i64::MAX,
        best_signs: Vec::new(),
    };
    recurse(&mut search, 0, base_sum);

    let mut signs = BTreeMap::new();
    for (i, &p) in primes.iter().enumerate() {
        signs.insert(p, search.best_signs[i]);
    }
    let assignment = SignAssignment {
        n,
        signs,
        partial_sum: search.best,
    };
    debug_assert_eq!(assignment.recompute_sum(&table)?, search.best);
    Ok((search.best, assignment))
}

/// F(N) = (N − min Σ f)/2.
pub fn compute_f(n: u32) -> Result<u64, MultOptError> {
    compute_f_with(n, &MultOptConfig::default())
}

pub fn compute_f_with(n: u32, config: &MultOptConfig) -> Result<u64, MultOptError> {
    let (min_sum, _) = min_multiplicative_sum_with(n, config)?;
    let diff = n as i64 - min_sum;
    debug_assert!(diff >= 0 && diff % 2 == 0, "N - min sum must be even");
    Ok((diff / 2) as u64)
}

pub(crate) fn hall_integrand(t: f64) -> f64 {
    t.ln() / (t + 1.0)
}

fn adaptive_simpson(f: fn(f64) -> f64, a: f64, b: f64, tolerance: f64) -> f64 {
    fn simpson(f: fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tolerance, 48)
}

/// Hall–Montgomery constant c = 1 − log(1+√e) + 2∫₁^{√e} log t/(t+1) dt,
/// evaluated to the given absolute tolerance (effective floor ~1e-13 in f64).
pub fn hall_montgomery_constant(tolerance: f64) -> f64 {
    assert!(
        tolerance > 0.0 && tolerance <= 1e-3,
        "tolerance must lie in (0, 1e-3]"
    );
    let sqrt_e = std::f64::consts::E.sqrt();
    let quad_tol = (tolerance / 4.0).max(1e-14);
    let integral = adaptive_simpson(hall_integrand, 1.0, sqrt_e, quad_tol);
    1.0 - (1.0 + sqrt_e).ln() + 2.0 * integral
}

/// Integers in `{1..N}` with exactly one prime factor above `threshold`,
/// counted with multiplicity: each member is p·s with p prime > threshold,
/// s (threshold)-smooth, and p ∤ s.
#[derive(Debug, Clone)]
pub struct HallSet {
    pub n: u64,
    pub u: f64,
    pub threshold: u64,
    pub members: Vec<u64>,
}

impl HallSet {
    pub fn density(&self) -> f64 {
        self.members.len() as f64 / self.n as f64
    }
}

/// ⌊N^{1/u}⌋ with a guard against floating-point boundary error.
fn floor_root(n: u64, u: f64) -> u64 {
    let mut t = (n as f64).powf(1.0 / u).floor() as u64;
    // settle the boundary by comparing u·ln(t) with ln(N)
    while t > 1 && (t as f64).ln() * u > (n as f64).ln() + 1e-9 {
        t -= 1;
    }
    while ((t + 1) as f64).ln() * u <= (n as f64).ln() + 1e-9 {
        t += 1;
    }
    t
}

/// Build the Hall set for parameter u (threshold ⌊N^{1/u}⌋).
pub fn build_hall_set(table: &FactorTable, n: u64, u: f64) -> Result<HallSet, MultOptError> {
    if n < 4 {
        return Err(MultOptError::InvalidArgument(format!("N = {n} < 4")));
    }
    if !(2.0..=4.0).contains(&u) {
        return Err(MultOptError::InvalidArgument(format!(
            "u = {u} outside [2, 4]"
        )));
    }
    let threshold = floor_root(n, u);
    let members = hall_set_with_threshold(table, n, threshold)?;
    Ok(HallSet {
        n,
        u,
        threshold,
        members,
    })
}

/// Members for an explicit threshold: exactly one prime factor above it,
/// with multiplicity.
pub fn hall_set_with_threshold(
    table: &FactorTable,
    n: u64,
    threshold: u64,
) -> Result<Vec<u64>, MultOptError> {
    if n > table.limit() {
        return Err(ArithError::BeyondTable {
            value: n,
            limit: table.limit(),
        }
        .into());
    }
    let mut members = Vec::new();
    for x in 2..=n {
        let mut large = 0u32;
        for (p, e) in table.factorize(x)? {
            if p > threshold {
                large += e;
                if large > 1 {
                    break;
                }
            }
        }
        if large == 1 {
            members.push(x);
        }
    }
    Ok(members)
}

/// True iff the completely multiplicative f with f(p) = −1 exactly for
/// p > threshold has f(x) = −1 for every member. When true, no odd-size
/// sub-multiset of the members multiplies to a square.
pub fn certify_no_odd_power_products(
    members: &[u64],
    threshold: u64,
    table: &FactorTable,
) -> Result<bool, MultOptError> {
    for &x in members {
        if x > table.limit() {
            return Err(ArithError::BeyondTable {
                value: x,
                limit: table.limit(),
            }
            .into());
        }
        let mut large = 0u32;
        for (p, e) in table.factorize(x)? {
            if p > threshold {
                large += e;
            }
        }
        if large.is_multiple_of(2) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// {n ≤ N : λ(n) = −1}, λ the Liouville function (−1 at every prime).
pub fn liouville_negative_set(n: u64, table: &FactorTable) -> Result<Vec<u64>, MultOptError> {
    if n > table.limit() {
        return Err(ArithError::BeyondTable {
            value: n,
            limit: table.limit(),
        }
        .into());
    }
    let mut out = Vec::new();
    for x in 2..=n {
        let omega_total: u32 = table.factorize(x)?.iter().map(|&(_, e)| e).sum();
        if omega_total % 2 == 1 {
            out.push(x);
        }
    }
    Ok(out)
}
