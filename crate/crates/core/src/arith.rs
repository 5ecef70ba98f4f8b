//! Sieve-backed factorization primitives shared by every other module.
//!
//! The central object is [`FactorTable`], a smallest-prime-factor sieve up to
//! a configured limit. On top of it sit residue exponent vectors (prime
//! exponents reduced mod m, the m = 2 case being the squarefree kernel),
//! exact perfect-power tests on big integers, and prime harmonic sums.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

/// Default cap on the sieve size: predictable desk-scale memory footprint.
pub const DEFAULT_TABLE_CAP: u64 = 100_000_000;

#[derive(Debug, Error)]
pub enum ArithError {
    #[error("factor table limit {limit} outside supported range 2..={cap}")]
    LimitOutOfRange { limit: u64, cap: u64 },
    #[error("value {value} exceeds factor table limit {limit}")]
    BeyondTable { value: u64, limit: u64 },
    #[error("residue vector moduli differ: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Smallest-prime-factor table for `2..=limit`, plus the ordered prime list.
///
/// Immutable after construction, so it can be shared freely across threads.
#[derive(Debug, Clone)]
pub struct FactorTable {
    limit: u64,
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl FactorTable {
    /// Sieve up to `limit` with the default memory cap.
    pub fn build(limit: u64) -> Result<Self, ArithError> {
        Self::build_with_cap(limit, DEFAULT_TABLE_CAP)
    }

    pub fn build_with_cap(limit: u64, cap: u64) -> Result<Self, ArithError> {
        if limit < 2 || limit > cap {
            return Err(ArithError::LimitOutOfRange { limit, cap });
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        // linear sieve: every composite is crossed off once, by its smallest
        // prime factor
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            for &p in &primes {
                let ip = i * p as usize;
                if p > spf[i] as u64 || ip > n {
                    break;
                }
                spf[ip] = p as u32;
            }
        }
        Ok(FactorTable { limit, spf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `<= limit`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn smallest_prime_factor(&self, n: u64) -> Result<u64, ArithError> {
        self.check_in_range(n)?;
        if n < 2 {
            return Err(ArithError::InvalidArgument(format!(
                "{n} has no prime factor"
            )));
        }
        Ok(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Index of `p` in the ascending prime list, if `p` is prime.
    pub fn prime_index(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok()
    }

    pub fn prime_by_index(&self, index: usize) -> u64 {
        self.primes[index]
    }

    /// Primes in the closed interval `[lo, hi]` as a slice of the prime list.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p < lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end.max(start)]
    }

    /// Prime factorization of `n` as `(prime, exponent)` pairs, ascending.
    pub fn factorize(&self, n: u64) -> Result<Vec<(u64, u32)>, ArithError> {
        self.check_in_range(n)?;
        if n == 0 {
            return Err(ArithError::InvalidArgument("cannot factorize 0".into()));
        }
        let mut out = Vec::new();
        let mut rem = n;
        while rem > 1 {
            let p = self.spf[rem as usize] as u64;
            let mut e = 0u32;
            while rem.is_multiple_of(p) {
                rem /= p;
                e += 1;
            }
            out.push((p, e));
        }
        Ok(out)
    }

    fn check_in_range(&self, n: u64) -> Result<(), ArithError> {
        if n > self.limit {
            return Err(ArithError::BeyondTable {
                value: n,
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// Build a factor table up to `limit` (capped at [`DEFAULT_TABLE_CAP`]).
pub fn build_factor_table(limit: u64) -> Result<FactorTable, ArithError> {
    FactorTable::build(limit)
}

/// Exponent vector of an integer reduced mod `m`, indexed by prime index.
///
/// Entries with residue 0 are omitted; the vector is empty exactly when the
/// integer is an m-th power. For m = 2 the entries mark the primes dividing
/// the squarefree kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueExponentVector {
    modulus: u32,
    entries: BTreeMap<usize, u32>,
}

impl ResidueExponentVector {
    pub fn empty(modulus: u32) -> Self {
        ResidueExponentVector {
            modulus,
            entries: BTreeMap::new(),
        }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// `(prime index, residue)` pairs, ascending by prime index.
    pub fn entries(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.entries.iter().map(|(&i, &r)| (i, r))
    }

    /// Same entries keyed by the primes themselves.
    pub fn entries_by_prime<'a>(
        &'a self,
        table: &'a FactorTable,
    ) -> impl Iterator<Item = (u64, u32)> + 'a {
        self.entries()
            .map(move |(i, r)| (table.prime_by_index(i), r))
    }

    /// Product of `p^r` over the entries. For m = 2 this is the squarefree
    /// kernel.
    pub fn kernel(&self, table: &FactorTable) -> BigUint {
        let mut out = BigUint::one();
        for (i, r) in self.entries() {
            out *= BigUint::from(table.prime_by_index(i)).pow(r);
        }
        out
    }
}

/// Exponent vector of `n` mod `m`, zeros dropped.
pub fn residue_vector(
    n: u64,
    modulus: u32,
    table: &FactorTable,
) -> Result<ResidueExponentVector, ArithError> {
    if n == 0 {
        return Err(ArithError::InvalidArgument(
            "residue vector requires n >= 1".into(),
        ));
    }
    if modulus < 2 {
        return Err(ArithError::InvalidArgument(format!(
            "modulus {modulus} < 2"
        )));
    }
    if n > table.limit() {
        return Err(ArithError::BeyondTable {
            value: n,
            limit: table.limit(),
        });
    }
    let mut entries = BTreeMap::new();
    for (p, e) in table.factorize(n)? {
        let r = e % modulus;
        if r != 0 {
            let idx = table.prime_index(p).expect("sieve prime must be indexed");
            entries.insert(idx, r);
        }
    }
    Ok(ResidueExponentVector { modulus, entries })
}

/// Entrywise sum mod m with zero entries dropped.
///
/// For m = 2 this is the symmetric difference of the two kernels.
pub fn vector_sum(
    a: &ResidueExponentVector,
    b: &ResidueExponentVector,
) -> Result<ResidueExponentVector, ArithError> {
    if a.modulus != b.modulus {
        return Err(ArithError::ModulusMismatch {
            left: a.modulus,
            right: b.modulus,
        });
    }
    let m = a.modulus;
    let mut entries = a.entries.clone();
    for (&idx, &r) in &b.entries {
        let cur = entries.remove(&idx).unwrap_or(0);
        let sum = (cur + r) % m;
        if sum != 0 {
            entries.insert(idx, sum);
        }
    }
    Ok(ResidueExponentVector { modulus: m, entries })
}

/// Squarefree-kernel bits of `n` over prime indices, the XOR fast path used
/// by subset enumeration. Every prime factor of `n` must have index < 128.
pub fn kernel_mask(n: u64, table: &FactorTable) -> Result<u128, ArithError> {
    let v = residue_vector(n, 2, table)?;
    let mut mask = 0u128;
    for (idx, _) in v.entries() {
        if idx >= 128 {
            return Err(ArithError::InvalidArgument(format!(
                "prime index {idx} does not fit the 128-bit kernel mask"
            )));
        }
        mask |= 1u128 << idx;
    }
    Ok(mask)
}

/// Exact test for `x = y^m`, decided by an integer m-th root.
pub fn is_perfect_power(x: &BigUint, m: u32) -> bool {
    assert!(m >= 2, "perfect-power exponent must be >= 2");
    if x.is_one() {
        return true;
    }
    let root = x.nth_root(m);
    root.pow(m) == *x
}

/// Sum of 1/p over primes in `[lo, hi]`, compensated (Kahan) accumulation.
///
/// An empty prime range yields 0.
pub fn prime_harmonic_sum(lo: u64, hi: u64, table: &FactorTable) -> Result<f64, ArithError> {
    if hi > table.limit() {
        return Err(ArithError::BeyondTable {
            value: hi,
            limit: table.limit(),
        });
    }
    if lo > hi {
        return Ok(0.0);
    }
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &p in table.primes_in(lo, hi) {
        let term = 1.0 / p as f64;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// Number of squarefree integers `<= n`.
pub fn count_squarefree_upto(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let n = n as usize;
    let mut squarefree = vec![true; n + 1];
    squarefree[0] = false;
    let mut d = 2usize;
    while d * d <= n {
        let dd = d * d;
        let mut k = dd;
        while k <= n {
            squarefree[k] = false;
            k += dd;
        }
        d += 1;
    }
    squarefree.iter().filter(|&&b| b).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spf_small_table() {
        let t = FactorTable::build(10).unwrap();
        let expected = [2u64, 3, 2, 5, 2, 7, 2, 3, 2];
        for (n, &want) in (2..=10).zip(expected.iter()) {
            assert_eq!(t.smallest_prime_factor(n).unwrap(), want, "spf({n})");
        }
    }

    #[test]
    fn primes_limit_two() {
        let t = FactorTable::build(2).unwrap();
        assert_eq!(t.primes(), &[2]);
    }

    #[test]
    fn primes_limit_thirty() {
        let t = FactorTable::build(30).unwrap();
        assert_eq!(t.primes().len(), 10);
        assert_eq!(*t.primes().last().unwrap(), 29);
    }

    #[test]
    fn limit_out_of_range() {
        assert!(matches!(
            FactorTable::build(1),
            Err(ArithError::LimitOutOfRange { .. })
        ));
        assert!(matches!(
            FactorTable::build_with_cap(1_000, 100),
            Err(ArithError::LimitOutOfRange { .. })
        ));
    }

    #[test]
    fn residue_vector_examples() {
        let t = FactorTable::build(1000).unwrap();
        let v = residue_vector(12, 2, &t).unwrap();
        assert_eq!(
            v.entries_by_prime(&t).collect::<Vec<_>>(),
            vec![(3, 1)],
            "12 = 2^2 * 3 has kernel 3"
        );
        assert_eq!(v.kernel(&t), BigUint::from_u64(3).unwrap());

        assert!(residue_vector(1, 2, &t).unwrap().is_empty());

        let v = residue_vector(360, 2, &t).unwrap();
        assert_eq!(
            v.entries_by_prime(&t).collect::<Vec<_>>(),
            vec![(2, 1), (5, 1)]
        );
        assert_eq!(v.kernel(&t), BigUint::from_u64(10).unwrap());
    }

    #[test]
    fn residue_vector_beyond_table() {
        let t = FactorTable::build(10).unwrap();
        assert!(matches!(
            residue_vector(11, 2, &t),
            Err(ArithError::BeyondTable { .. })
        ));
    }

    #[test]
    fn vector_sum_examples() {
        let t = FactorTable::build(100).unwrap();
        let k = |n| residue_vector(n, 2, &t).unwrap();
        assert!(vector_sum(&k(2), &k(8)).unwrap().is_empty(), "2*8 = 16");
        assert_eq!(vector_sum(&k(2), &k(3)).unwrap(), k(6));

        let c = |n| residue_vector(n, 3, &t).unwrap();
        assert!(vector_sum(&c(2), &c(4)).unwrap().is_empty(), "2*4 = 8");
    }

    #[test]
    fn vector_sum_modulus_mismatch() {
        let t = FactorTable::build(10).unwrap();
        let a = residue_vector(2, 2, &t).unwrap();
        let b = residue_vector(2, 3, &t).unwrap();
        assert!(matches!(
            vector_sum(&a, &b),
            Err(ArithError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn perfect_power_examples() {
        let b = |n: u64| BigUint::from_u64(n).unwrap();
        assert!(is_perfect_power(&b(36), 2));
        assert!(!is_perfect_power(&b(37), 2));
        assert!(is_perfect_power(&b(8), 3));
        assert!(is_perfect_power(&b(1), 7));
        // beyond machine words
        let big = BigUint::parse_bytes(b"123456789123456789", 10).unwrap();
        assert!(is_perfect_power(&(&big * &big), 2));
        assert!(!is_perfect_power(&(&big * &big + 1u32), 2));
    }

    #[test]
    fn harmonic_sum_examples() {
        let t = FactorTable::build(100).unwrap();
        assert_eq!(prime_harmonic_sum(2, 2, &t).unwrap(), 0.5);
        let s = prime_harmonic_sum(2, 10, &t).unwrap();
        assert!((s - 247.0 / 210.0).abs() < 1e-12, "got {s}");
        assert_eq!(prime_harmonic_sum(11, 10, &t).unwrap(), 0.0);
    }

    #[test]
    fn multiplicativity_exhaustive() {
        let t = FactorTable::build(1_000_000).unwrap();
        for m in [2u32, 3] {
            for a in 1..=1000u64 {
                let va = residue_vector(a, m, &t).unwrap();
                for b in (a..=1000).step_by(97) {
                    let vb = residue_vector(b, m, &t).unwrap();
                    let sum = vector_sum(&va, &vb).unwrap();
                    assert_eq!(sum, residue_vector(a * b, m, &t).unwrap());
                }
            }
        }
    }

    #[test]
    fn multiplicativity_dense_small() {
        let t = FactorTable::build(40_000).unwrap();
        for m in [2u32, 3] {
            for a in 1..=200u64 {
                let va = residue_vector(a, m, &t).unwrap();
                for b in 1..=200u64 {
                    let vb = residue_vector(b, m, &t).unwrap();
                    assert_eq!(
                        vector_sum(&va, &vb).unwrap(),
                        residue_vector(a * b, m, &t).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_sum_agrees_with_root_oracle() {
        let t = FactorTable::build(200).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for m in [2u32, 3] {
            for _ in 0..10_000 {
                let tuple: Vec<u64> = (0..5).map(|_| rng.random_range(1..=200)).collect();
                let mut acc = ResidueExponentVector::empty(m);
                let mut prod = BigUint::one();
                for &a in &tuple {
                    acc = vector_sum(&acc, &residue_vector(a, m, &t).unwrap()).unwrap();
                    prod *= BigUint::from_u64(a).unwrap();
                }
                assert_eq!(
                    acc.is_empty(),
                    is_perfect_power(&prod, m),
                    "tuple {tuple:?} mod {m}"
                );
            }
        }
    }

    #[test]
    fn kernel_mask_matches_vector() {
        let t = FactorTable::build(500).unwrap();
        for n in 1..=500u64 {
            let mask = kernel_mask(n, &t).unwrap();
            let v = residue_vector(n, 2, &t).unwrap();
            let from_vec = v.entries().fold(0u128, |acc, (i, _)| acc | (1 << i));
            assert_eq!(mask, from_vec);
        }
    }

    #[test]
    fn table_construction_is_deterministic() {
        let a = FactorTable::build(10_000).unwrap();
        let b = FactorTable::build(10_000).unwrap();
        assert_eq!(a.spf, b.spf);
        assert_eq!(a.primes, b.primes);
    }

    mod properties {
        use super::*;
        use num_traits::Zero;
        use proptest::prelude::*;
        use std::sync::OnceLock;

        fn table() -> &'static FactorTable {
            static TABLE: OnceLock<FactorTable> = OnceLock::new();
            TABLE.get_or_init(|| FactorTable::build(100_000).unwrap())
        }

        proptest! {
            #[test]
            fn kernel_times_n_is_a_square(n in 1u64..=100_000) {
                let t = table();
                let kernel = residue_vector(n, 2, t).unwrap().kernel(t);
                prop_assert!(is_perfect_power(&(kernel * n), 2));
            }

            #[test]
            fn vector_sum_is_self_inverse_mod_2(n in 1u64..=100_000) {
                let t = table();
                let v = residue_vector(n, 2, t).unwrap();
                prop_assert!(vector_sum(&v, &v).unwrap().is_empty());
            }

            #[test]
            fn residue_vector_empty_iff_mth_power(n in 1u64..=100_000, m in 2u32..=4) {
                let t = table();
                let v = residue_vector(n, m, t).unwrap();
                let is_power = !BigUint::from(n).is_zero()
                    && is_perfect_power(&BigUint::from(n), m);
                prop_assert_eq!(v.is_empty(), is_power);
            }
        }
    }

    #[test]
    fn squarefree_counts() {
        // 1,2,3,5,6,7,10 are the squarefree numbers <= 10
        assert_eq!(count_squarefree_upto(10), 7);
        assert_eq!(count_squarefree_upto(1), 1);
        assert_eq!(count_squarefree_upto(0), 0);
        // asymptotic density 6/pi^2
        let n = 100_000u64;
        let frac = count_squarefree_upto(n) as f64 / n as f64;
        assert!((frac - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-3);
    }
}
