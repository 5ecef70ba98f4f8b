//! Exact extremal subsets: enumerate the k-subsets of `{1..N}` whose product
//! is an m-th power, then solve the maximum independent subset problem on the
//! resulting hypergraph by branch and bound.
//!
//! Cardinality mode yields F_k(N) (and F_{k,m}(N) for general m); weighted
//! mode maximises the exact rational sum of 1/n over the subset, yielding
//! L_k(N).

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{self, ArithError, FactorTable};

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("N = {n} exceeds the solver limit {limit}")]
    SolverLimit { n: u32, limit: u32 },
    #[error("edge count exceeds the configured budget of {budget} edges")]
    EdgeBudget { budget: u64 },
    #[error("enumeration work exceeds the configured budget of {budget} nodes")]
    WorkBudget { budget: u64 },
    #[error("k = {k} outside supported range {lo}..={hi}")]
    KOutOfRange { k: u32, lo: u32, hi: u32 },
    #[error("instance (N = {n}, k = {k}) exceeds the exhaustive-count limits N <= {n_max}, k <= {k_max}")]
    CountLimits { n: u32, k: u32, n_max: u32, k_max: u32 },
    #[error("missing value F_{k}({n}) in the supplied map")]
    MissingValue { k: u32, n: u32 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Budgets for enumeration and solving. Exceeding one fails loudly instead of
/// truncating.
#[derive(Debug, Clone)]
pub struct ExactConfig {
    /// Largest N the branch-and-bound solver accepts (bitmask-backed, <= 128).
    pub solver_limit: u32,
    /// Maximum number of hyperedges an instance may produce.
    pub edge_budget: u64,
    /// Maximum number of enumeration DFS nodes.
    pub work_budget: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            solver_limit: 100,
            edge_budget: 10_000_000,
            work_budget: 200_000_000,
        }
    }
}

pub const SOLVER_HARD_CAP: u32 = 128;

/// k-uniform hyperedges over `{1..N}` whose residue-vector sum vanishes,
/// i.e. whose element product is an m-th power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadTupleHypergraph {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
    pub m: u32,
    pub edges: Vec<Vec<u32>>,
}

/// An optimal independent subset with its exact weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSolution {
    pub members: Vec<u32>,
    pub cardinality: usize,
    /// Sum of 1/n over the members, exact.
    pub weight: BigRational,
    pub optimal: bool,
    /// One fully-contained edge if the members are not independent.
    pub certificate: Option<Vec<u32>>,
}

impl SubsetSolution {
    /// Re-scan the hypergraph for an edge contained in the members.
    pub fn violated_edge(&self, h: &BadTupleHypergraph) -> Option<Vec<u32>> {
        let set: std::collections::BTreeSet<u32> = self.members.iter().copied().collect();
        h.edges
            .iter()
            .find(|e| e.iter().all(|x| set.contains(x)))
            .cloned()
    }
}

impl Serialize for SubsetSolution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SubsetSolution", 3)?;
        s.serialize_field("members", &self.members)?;
        s.serialize_field("cardinality", &self.cardinality)?;
        s.serialize_field("weight", &format_rational(&self.weight))?;
        s.end()
    }
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| ExactError::InvalidArgument(format!("not a p/q rational: {s:?}")))?;
    let num: BigInt = num
        .trim()
        .parse()
        .map_err(|e| ExactError::InvalidArgument(format!("bad numerator in {s:?}: {e}")))?;
    let den: BigInt = den
        .trim()
        .parse()
        .map_err(|e| ExactError::InvalidArgument(format!("bad denominator in {s:?}: {e}")))?;
    if den.is_zero() {
        return Err(ExactError::InvalidArgument(format!(
            "zero denominator in {s:?}"
        )));
    }
    Ok(BigRational::new(num, den))
}

/// Deserializes the `{"members":…, "cardinality":…, "weight":"p/q"}` export.
impl<'de> Deserialize<'de> for SubsetSolution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            members: Vec<u32>,
            cardinality: usize,
            weight: String,
        }
        let raw = Raw::deserialize(deserializer)?;
        let weight = parse_rational(&raw.weight).map_err(D::Error::custom)?;
        Ok(SubsetSolution {
            members: raw.members,
            cardinality: raw.cardinality,
            weight,
            optimal: false,
            certificate: None,
        })
    }
}

/// Per-element residue data used during enumeration.
enum Residues {
    /// m = 2: kernel bitmask per element, XOR composition.
    Xor(Vec<u128>),
    /// m >= 3: dense residue array per element over prime indices.
    ModM { m: u32, arrays: Vec<Vec<u8>> },
}

/// Enumerate the k-subsets of `{1..N}` whose product is an m-th power.
///
/// DFS over elements in increasing order; the final element of each tuple is
/// found by a hash lookup of the complementary residue vector rather than a
/// scan.
pub fn enumerate_bad_tuples(
    n: u32,
    k: u32,
    m: u32,
    config: &ExactConfig,
) -> Result<BadTupleHypergraph, ExactError> {
    if n < 1 || n > config.solver_limit || n > SOLVER_HARD_CAP {
        return Err(ExactError::SolverLimit {
            n,
            limit: config.solver_limit.min(SOLVER_HARD_CAP),
        });
    }
    if !(1..=7).contains(&k) {
        return Err(ExactError::KOutOfRange { k, lo: 1, hi: 7 });
    }
    if m < 2 {
        return Err(ExactError::InvalidArgument(format!("m = {m} < 2")));
    }

    let table = FactorTable::build(n.max(2) as u64)?;
    let residues = if m == 2 {
        let mut masks = vec![0u128; n as usize + 1];
        for e in 1..=n {
            masks[e as usize] = arith::kernel_mask(e as u64, &table)?;
        }
        Residues::Xor(masks)
    } else {
        let np = table.primes().len();
        let mut arrays = vec![Vec::new(); n as usize + 1];
        for e in 1..=n {
            let mut arr = vec![0u8; np];
            for (idx, r) in arith::residue_vector(e as u64, m, &table)?.entries() {
                arr[idx] = r as u8;
            }
            arrays[e as usize] = arr;
        }
        Residues::ModM { m, arrays }
    };

    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut work: u64 = 0;

    match &residues {
        Residues::Xor(masks) => {
            // elements grouped by kernel for the final-level lookup
            let mut by_kernel: HashMap<u128, Vec<u32>> = HashMap::new();
            for e in 1..=n {
                by_kernel.entry(masks[e as usize]).or_default().push(e);
            }
            let mut prefix: Vec<u32> = Vec::with_capacity(k as usize);
            dfs_xor(
                n,
                k,
                masks,
                &by_kernel,
                &mut prefix,
                0,
                0u128,
                &mut edges,
                &mut work,
                config,
            )?;
        }
        Residues::ModM { m, arrays } => {
            let np = arrays[1].len();
            let mut by_residue: HashMap<Vec<u8>, Vec<u32>> = HashMap::new();
            for e in 1..=n {
                by_residue
                    .entry(arrays[e as usize].clone())
                    .or_default()
                    .push(e);
            }
            let mut prefix: Vec<u32> = Vec::with_capacity(k as usize);
            let mut sum = vec![0u8; np];
            dfs_modm(
                n,
                k,
                *m,
                arrays,
                &by_residue,
                &mut prefix,
                0,
                &mut sum,
                &mut edges,
                &mut work,
                config,
            )?;
        }
    }

    edges.sort();
    Ok(BadTupleHypergraph { n, k, m, edges })
}

#[allow(clippy::too_many_arguments)]
fn dfs_xor(
    n: u32,
    k: u32,
    masks: &[u128],
    by_kernel: &HashMap<u128, Vec<u32>>,
    prefix: &mut Vec<u32>,
    last: u32,
    acc: u128,
    edges: &mut Vec<Vec<u32>>,
    work: &mut u64,
    config: &ExactConfig,
) -> Result<(), ExactError> {
    *work += 1;
    if *work > config.work_budget {
        return Err(ExactError::WorkBudget {
            budget: config.work_budget,
        });
    }
    if prefix.len() as u32 == k - 1 {
        // final element must cancel the accumulated kernel
        if let Some(cands) = by_kernel.get(&acc) {
            let start = cands.partition_point(|&e| e <= last);
            for &e in &cands[start..] {
                if edges.len() as u64 >= config.edge_budget {
                    return Err(ExactError::EdgeBudget {
                        budget: config.edge_budget,
                    });
                }
                let mut edge = prefix.clone();
                edge.push(e);
                edges.push(edge);
            }
        }
        return Ok(());
    }
    let remaining = k - prefix.len() as u32;
    for e in (last + 1)..=n.saturating_sub(remaining - 1) {
        prefix.push(e);
        dfs_xor(
            n,
            k,
            masks,
            by_kernel,
            prefix,
            e,
            acc ^ masks[e as usize],
            edges,
            work,
            config,
        )?;
        prefix.pop();
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn dfs_modm(
    n: u32,
    k: u32,
    m: u32,
    arrays: &[Vec<u8>],
    by_residue: &HashMap<Vec<u8>, Vec<u32>>,
    prefix: &mut Vec<u32>,
    last: u32,
    sum: &mut [u8],
    edges: &mut Vec<Vec<u32>>,
    work: &mut u64,
    config: &ExactConfig,
) -> Result<(), ExactError> {
    *work += 1;
    if *work > config.work_budget {
        return Err(ExactError::WorkBudget {
            budget: config.work_budget,
        });
    }
    if prefix.len() as u32 == k - 1 {
        // final element needs residue (m - sum) mod m entrywise
        let complement: Vec<u8> = sum
            .iter()
            .map(|&r| if r == 0 { 0 } else { m as u8 - r })
            .collect();
        if let Some(cands) = by_residue.get(&complement) {
            let start = cands.partition_point(|&e| e <= last);
            for &e in &cands[start..] {
                if edges.len() as u64 >= config.edge_budget {
                    return Err(ExactError::EdgeBudget {
                        budget: config.edge_budget,
                    });
                }
                let mut edge = prefix.clone();
                edge.push(e);
                edges.push(edge);
            }
        }
        return Ok(());
    }
    let remaining = k - prefix.len() as u32;
    for e in (last + 1)..=n.saturating_sub(remaining - 1) {
        prefix.push(e);
        for (s, &r) in sum.iter_mut().zip(&arrays[e as usize]) {
            *s = (*s + r) % m as u8;
        }
        dfs_modm(
            n, k, m, arrays, by_residue, prefix, e, sum, edges, work, config,
        )?;
        for (s, &r) in sum.iter_mut().zip(&arrays[e as usize]) {
            *s = (*s + m as u8 - r) % m as u8;
        }
        prefix.pop();
    }
    Ok(())
}

/// Integer weights for the branch-and-bound cost: 1 per element in
/// cardinality mode, lcm(1..=N)/e in weighted mode. Exact BigUint sums keep
/// optimality decisions exact.
struct SolverWeights {
    per_element: Vec<BigUint>,
}

impl SolverWeights {
    fn cardinality(n: u32) -> Self {
        SolverWeights {
            per_element: (0..=n).map(|_| BigUint::one()).collect(),
        }
    }

    fn harmonic(n: u32) -> Self {
        let mut lcm = BigUint::one();
        for e in 1..=n as u64 {
            lcm = num_integer::lcm(lcm, BigUint::from(e));
        }
        let per_element = (0..=n)
            .map(|e| {
                if e == 0 {
                    BigUint::zero()
                } else {
                    &lcm / BigUint::from(e)
                }
            })
            .collect();
        SolverWeights { per_element }
    }
}

struct SolverState<'a> {
    edges: &'a [u128],
    weights: &'a SolverWeights,
    best_removed: Option<BigUint>,
    best_removed_mask: u128,
    nodes: u64,
}

/// Exact maximum independent subset of the hypergraph.
///
/// `weighted = false` maximises cardinality, `weighted = true` maximises the
/// sum of 1/n over members. Branching always selects the undecided element
/// covering the most live edges, ties broken by the smallest element, with
/// the exclude branch explored first; the bound is a greedy element-disjoint
/// matching over live edges. The search is exhaustive apart from bound
/// pruning, so the result is provably optimal and deterministic.
pub fn max_independent_subset(h: &BadTupleHypergraph, weighted: bool) -> SubsetSolution {
    assert!(
        h.n <= SOLVER_HARD_CAP,
        "hypergraph N = {} beyond bitmask capacity",
        h.n
    );
    let edge_masks: Vec<u128> = h
        .edges
        .iter()
        .map(|e| e.iter().fold(0u128, |acc, &x| acc | (1u128 << (x - 1))))
        .collect();
    let weights = if weighted {
        SolverWeights::harmonic(h.n)
    } else {
        SolverWeights::cardinality(h.n)
    };
    let mut state = SolverState {
        edges: &edge_masks,
        weights: &weights,
        best_removed: None,
        best_removed_mask: 0,
        nodes: 0,
    };
    branch(&mut state, 0u128, 0u128, BigUint::zero());

    let removed = state.best_removed_mask;
    let members: Vec<u32> = (1..=h.n).filter(|&e| removed & (1 << (e - 1)) == 0).collect();
    let weight = members
        .iter()
        .map(|&e| BigRational::new(BigInt::one(), BigInt::from(e)))
        .sum();
    let mut solution = SubsetSolution {
        cardinality: members.len(),
        members,
        weight,
        optimal: true,
        certificate: None,
    };
    // independence re-scan; a violated edge would land in the certificate
    solution.certificate = solution.violated_edge(h);
    debug_assert!(solution.certificate.is_none());
    solution
}

fn branch(state: &mut SolverState, removed: u128, kept: u128, removed_cost: BigUint) {
    state.nodes += 1;

    // live edges: no removed element; an edge fully kept is a dead end
    let mut cover: HashMap<u32, u32> = HashMap::new();
    let mut live: Vec<u128> = Vec::new();
    for &edge in state.edges {
        if edge & removed != 0 {
            continue;
        }
        let undecided = edge & !kept;
        if undecided == 0 {
            return; // every element kept: independence impossible on this path
        }
        live.push(undecided);
        let mut bits = undecided;
        while bits != 0 {
            let b = bits.trailing_zeros();
            *cover.entry(b).or_insert(0) += 1;
            bits &= bits - 1;
        }
    }

    if live.is_empty() {
        // all undecided elements are free: solution = everything not removed
        let better = match &state.best_removed {
            None => true,
            Some(best) => removed_cost < *best,
        };
        if better {
            state.best_removed = Some(removed_cost);
            state.best_removed_mask = removed;
        }
        return;
    }

    // lower bound: greedy element-disjoint matching, each matched edge costs
    // at least its cheapest undecided element
    if let Some(best) = &state.best_removed {
        let mut used = 0u128;
        let mut bound = removed_cost.clone();
        for &undecided in &live {
            if undecided & used == 0 {
                used |= undecided;
                let mut min_w: Option<&BigUint> = None;
                let mut bits = undecided;
                while bits != 0 {
                    let e = bits.trailing_zeros() + 1;
                    let w = &state.weights.per_element[e as usize];
                    min_w = Some(match min_w {
                        None => w,
                        Some(cur) if w < cur => w,
                        Some(cur) => cur,
                    });
                    bits &= bits - 1;
                }
                bound += min_w.expect("live edge has an undecided element");
            }
        }
        if bound >= *best {
            return;
        }
    }

    // branch element: most live edges covered, ties to the smallest element
    let (&bit, _) = cover
        .iter()
        .max_by(|(a_bit, a_cnt), (b_bit, b_cnt)| a_cnt.cmp(b_cnt).then(b_bit.cmp(a_bit)))
        .expect("live edges imply a coverable element");
    let elem_mask = 1u128 << bit;
    let elem_weight = state.weights.per_element[bit as usize + 1].clone();

    branch(
        state,
        removed | elem_mask,
        kept,
        removed_cost.clone() + elem_weight,
    );
    branch(state, removed, kept | elem_mask, removed_cost);
}

/// F_{k,m}(N): the size of the largest subset of `{1..N}` with no k distinct
/// elements multiplying to an m-th power. k = 1 uses the closed form
/// N - floor(N^{1/m}).
pub fn compute_fk(n: u32, k: u32, m: u32, config: &ExactConfig) -> Result<u64, ExactError> {
    if k == 1 {
        if m < 2 {
            return Err(ExactError::InvalidArgument(format!("m = {m} < 2")));
        }
        return Ok(n as u64 - (n as u64).nth_root(m));
    }
    let h = enumerate_bad_tuples(n, k, m, config)?;
    Ok(max_independent_subset(&h, false).cardinality as u64)
}

/// L_k(N): the largest sum of 1/n over subsets of `{1..N}` with no k distinct
/// elements multiplying to a square, as an exact rational.
pub fn compute_lk(n: u32, k: u32, config: &ExactConfig) -> Result<BigRational, ExactError> {
    let h = enumerate_bad_tuples(n, k, 2, config)?;
    Ok(max_independent_subset(&h, true).weight)
}

/// Check F_{k+l}(N) <= max(F_k(N), F_l(N) + k) on precomputed values keyed by
/// `(k, N)`.
pub fn check_mono_inequality(
    values: &BTreeMap<(u32, u32), u64>,
    k: u32,
    l: u32,
    n: u32,
) -> Result<bool, ExactError> {
    let get = |kk: u32| {
        values
            .get(&(kk, n))
            .copied()
            .ok_or(ExactError::MissingValue { k: kk, n })
    };
    let f_kl = get(k + l)?;
    let f_k = get(k)?;
    let f_l = get(l)?;
    Ok(f_kl <= f_k.max(f_l + k as u64))
}

/// Number of k-subsets of `{1..N}` with square product, exhaustively.
pub fn count_square_ksubsets(n: u32, k: u32) -> Result<u64, ExactError> {
    const N_MAX: u32 = 60;
    const K_MAX: u32 = 5;
    if n > N_MAX || k > K_MAX {
        return Err(ExactError::CountLimits {
            n,
            k,
            n_max: N_MAX,
            k_max: K_MAX,
        });
    }
    let config = ExactConfig::default();
    let h = enumerate_bad_tuples(n, k, 2, &config)?;
    Ok(h.edges.len() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn cfg() -> ExactConfig {
        ExactConfig::default()
    }

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from_i64(num).unwrap(), BigInt::from_i64(den).unwrap())
    }

    #[test]
    fn enumerate_pairs_n8() {
        let h = enumerate_bad_tuples(8, 2, 2, &cfg()).unwrap();
        assert_eq!(h.edges, vec![vec![1, 4], vec![2, 8]]);
    }

    #[test]
    fn enumerate_triples_n6() {
        let h = enumerate_bad_tuples(6, 3, 2, &cfg()).unwrap();
        assert_eq!(h.edges, vec![vec![2, 3, 6]]);
    }

    #[test]
    fn enumerate_triples_n4_empty() {
        let h = enumerate_bad_tuples(4, 3, 2, &cfg()).unwrap();
        assert!(h.edges.is_empty());
    }

    #[test]
    fn enumerate_cubes_mod3() {
        // 1*2*4 = 8 = 2^3: the only bad triple mod 3 below 5
        let h = enumerate_bad_tuples(5, 3, 3, &cfg()).unwrap();
        assert_eq!(h.edges, vec![vec![1, 2, 4]]);
    }

    #[test]
    fn edge_budget_enforced() {
        let config = ExactConfig {
            edge_budget: 1,
            ..cfg()
        };
        match enumerate_bad_tuples(8, 2, 2, &config) {
            Err(ExactError::EdgeBudget { budget: 1 }) => {}
            other => panic!("expected edge budget error, got {other:?}"),
        }
    }

    #[test]
    fn solver_limit_enforced() {
        match enumerate_bad_tuples(101, 2, 2, &cfg()) {
            Err(ExactError::SolverLimit { n: 101, limit: 100 }) => {}
            other => panic!("expected solver limit error, got {other:?}"),
        }
    }

    #[test]
    fn solve_cardinality_n6_k3() {
        let h = enumerate_bad_tuples(6, 3, 2, &cfg()).unwrap();
        let sol = max_independent_subset(&h, false);
        assert_eq!(sol.cardinality, 5);
        assert!(sol.optimal);
        assert!(sol.violated_edge(&h).is_none());
    }

    #[test]
    fn solve_edgeless() {
        let h = BadTupleHypergraph {
            n: 4,
            k: 3,
            m: 2,
            edges: vec![],
        };
        let sol = max_independent_subset(&h, false);
        assert_eq!(sol.cardinality, 4);
        assert_eq!(sol.members, vec![1, 2, 3, 4]);
    }

    #[test]
    fn solve_weighted_n10_k2() {
        let h = enumerate_bad_tuples(10, 2, 2, &cfg()).unwrap();
        let sol = max_independent_subset(&h, true);
        assert_eq!(sol.weight, rational(171, 70));
        // one representative per square class, smallest element of each
        assert_eq!(sol.members, vec![1, 2, 3, 5, 6, 7, 10]);
    }

    #[test]
    fn fk_closed_form_k1() {
        assert_eq!(compute_fk(16, 1, 2, &cfg()).unwrap(), 12);
        assert_eq!(compute_fk(10_000, 1, 2, &cfg()).unwrap(), 10_000 - 100);
        assert_eq!(compute_fk(26, 1, 3, &cfg()).unwrap(), 26 - 2);
    }

    #[test]
    fn fk_small_values() {
        assert_eq!(compute_fk(10, 2, 2, &cfg()).unwrap(), 7);
        assert_eq!(compute_fk(6, 3, 2, &cfg()).unwrap(), 5);
    }

    #[test]
    fn lk_examples() {
        assert_eq!(compute_lk(10, 2, &cfg()).unwrap(), rational(171, 70));
        assert_eq!(compute_lk(4, 3, &cfg()).unwrap(), rational(25, 12));
        // drop 1/6 from the edge {2,3,6}
        assert_eq!(
            compute_lk(6, 3, &cfg()).unwrap(),
            rational(25, 12) + rational(1, 5)
        );
    }

    #[test]
    fn mono_inequality_examples() {
        let config = cfg();
        let mut values = BTreeMap::new();
        for k in [2u32, 4] {
            values.insert((k, 10), compute_fk(10, k, 2, &config).unwrap());
        }
        assert!(check_mono_inequality(&values, 2, 2, 10).unwrap());

        let mut values = BTreeMap::new();
        for k in [2u32, 3, 5] {
            values.insert((k, 6), compute_fk(6, k, 2, &config).unwrap());
        }
        assert!(check_mono_inequality(&values, 2, 3, 6).unwrap());

        assert!(matches!(
            check_mono_inequality(&BTreeMap::new(), 2, 2, 10),
            Err(ExactError::MissingValue { .. })
        ));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_square_ksubsets(8, 2).unwrap(), 2);
        assert_eq!(count_square_ksubsets(6, 3).unwrap(), 1);
        assert_eq!(count_square_ksubsets(4, 4).unwrap(), 0);
        assert!(matches!(
            count_square_ksubsets(61, 2),
            Err(ExactError::CountLimits { .. })
        ));
    }

    #[test]
    fn monotone_steps_small() {
        for k in [2u32, 3] {
            let mut prev = None;
            for n in 1..=30u32 {
                let f = compute_fk(n, k, 2, &cfg()).unwrap();
                if let Some(p) = prev {
                    assert!(f >= p && f <= p + 1, "F_{k}({n}) = {f}, prev {p}");
                }
                prev = Some(f);
            }
        }
    }

    #[test]
    fn solution_is_deterministic() {
        let h = enumerate_bad_tuples(24, 3, 2, &cfg()).unwrap();
        let a = max_independent_subset(&h, false);
        let b = max_independent_subset(&h, false);
        assert_eq!(a, b);
    }

    #[test]
    fn hypergraph_json_round_trip() {
        let h = enumerate_bad_tuples(8, 2, 2, &cfg()).unwrap();
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(json, r#"{"N":8,"k":2,"m":2,"edges":[[1,4],[2,8]]}"#);
        let back: BadTupleHypergraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn solution_json_format() {
        let h = enumerate_bad_tuples(6, 3, 2, &cfg()).unwrap();
        let sol = max_independent_subset(&h, true);
        let json = serde_json::to_string(&sol).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["weight"], "137/60");
        let back: SubsetSolution = serde_json::from_str(&json).unwrap();
        assert_eq!(back.weight, sol.weight);
        assert_eq!(back.members, sol.members);
    }
}
