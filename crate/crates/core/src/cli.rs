//! Command-line surface of the `sqprod` binary.
//!
//! Exit codes: 0 success, 2 argument error, 3 capacity/budget error,
//! 4 mismatch or verification failure, 1 anything else. Every command writes
//! a run manifest (JSON) listing its parameters and emitted files; with a
//! fixed seed the deterministic commands reproduce their outputs byte for
//! byte.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::exact::{self, ExactConfig, ExactError};
use crate::multopt::{self, MultOptError};
use crate::oeis::{self, OeisError};
use crate::sampler::{self, SamplerError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Argument,
    Capacity,
    Mismatch,
    Other,
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    fn argument(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Argument,
            message: message.into(),
        }
    }

    fn mismatch(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Mismatch,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Argument => 2,
            ErrorKind::Capacity => 3,
            ErrorKind::Mismatch => 4,
            ErrorKind::Other => 1,
        }
    }
}

impl From<ExactError> for CliError {
    fn from(e: ExactError) -> Self {
        let kind = match &e {
            ExactError::SolverLimit { .. }
            | ExactError::EdgeBudget { .. }
            | ExactError::WorkBudget { .. }
            | ExactError::CountLimits { .. } => ErrorKind::Capacity,
            ExactError::KOutOfRange { .. }
            | ExactError::MissingValue { .. }
            | ExactError::InvalidArgument(_) => ErrorKind::Argument,
            ExactError::Arith(_) => ErrorKind::Capacity,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<MultOptError> for CliError {
    fn from(e: MultOptError) -> Self {
        let kind = match &e {
            MultOptError::SolverLimit { .. } | MultOptError::Arith(_) => ErrorKind::Capacity,
            MultOptError::InvalidArgument(_) => ErrorKind::Argument,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        let kind = match &e {
            SamplerError::EulerBoundTooLarge { .. } | SamplerError::Arith(_) => {
                ErrorKind::Capacity
            }
            _ => ErrorKind::Argument,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<OeisError> for CliError {
    fn from(e: OeisError) -> Self {
        let kind = match &e {
            OeisError::InvalidId(_) => ErrorKind::Argument,
            _ => ErrorKind::Other,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<arith::ArithError> for CliError {
    fn from(e: arith::ArithError) -> Self {
        CliError {
            kind: ErrorKind::Capacity,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            kind: ErrorKind::Other,
            message: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "sqprod",
    version,
    about = "Extremal subsets and random tuples for products forming perfect powers"
)]
pub struct Cli {
    /// Print machine-readable JSON on stdout instead of human text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Path of the run manifest written by every command.
    #[arg(long, global = true, default_value = "sqprod_manifest.json")]
    pub manifest: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute F_{k,m}(N) with the exact hypergraph solver (k = 1 by formula).
    Fk {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Power in "product is an m-th power".
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        solver_limit: Option<u32>,
        #[arg(long)]
        edge_budget: Option<u64>,
        #[arg(long)]
        work_budget: Option<u64>,
        /// Write the optimal subset as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Emit F_{k,m}(n) for n = 1..=N in b-file format.
        #[arg(long)]
        emit_bfile: Option<PathBuf>,
    },
    /// Compute F(N) and the minimum multiplicative partial sum N - 2F(N).
    F {
        #[arg(long)]
        n: u32,
        /// Emit F(n) for n = 1..=N in b-file format.
        #[arg(long)]
        emit_bfile: Option<PathBuf>,
        /// Write the witnessing prime sign table as JSON.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Evaluate the Hall-Montgomery constant c and 1 - c.
    Const {
        #[arg(long, default_value_t = 1e-7)]
        tolerance: f64,
    },
    /// Run the seeded Monte Carlo tuple sampler and write its report.
    Sample {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report JSON here (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Stream one CSV row per trial.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build the set of n <= N with exactly one prime factor above N^{1/u}
    /// and check its multiplicative certificate.
    Hall {
        #[arg(long)]
        n: u64,
        /// Threshold exponent; defaults to 1 + sqrt(e).
        #[arg(long)]
        u: Option<f64>,
        /// Write the members as newline-delimited integers.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a CSV table of F(N), F_k(N) and their ratios to N.
    Table {
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = 30)]
        nmax: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare computed values against an OEIS b-file prefix.
    OeisCheck {
        /// Sequence id, e.g. A373114.
        #[arg(long)]
        seq: String,
        #[arg(long)]
        upto: i64,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Never touch the network; use cache or bundled fixtures.
        #[arg(long)]
        offline: bool,
    },
}

/// Record of one command invocation and the files it emitted.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            outputs: Vec::new(),
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    fn output(&mut self, path: &Path) -> &mut Self {
        self.outputs.push(path.display().to_string());
        self
    }

    fn write(&self, path: &Path) -> Result<(), CliError> {
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, json + "\n")?;
        Ok(())
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fk {
            n,
            k,
            m,
            solver_limit,
            edge_budget,
            work_budget,
            out,
            emit_bfile,
        } => {
            let mut config = ExactConfig::default();
            if let Some(v) = solver_limit {
                config.solver_limit = v;
            }
            if let Some(v) = edge_budget {
                config.edge_budget = v;
            }
            if let Some(v) = work_budget {
                config.work_budget = v;
            }
            let mut manifest = RunManifest::new("fk");
            manifest
                .param("n", n)
                .param("k", k)
                .param("m", m)
                .param("solver_limit", config.solver_limit)
                .param("edge_budget", config.edge_budget)
                .param("work_budget", config.work_budget);

            let value = exact::compute_fk(n, k, m, &config)?;
            if let Some(path) = &out {
                if k >= 2 {
                    let h = exact::enumerate_bad_tuples(n, k, m, &config)?;
                    let sol = exact::max_independent_subset(&h, false);
                    fs::write(path, serde_json::to_string_pretty(&sol).unwrap() + "\n")?;
                    manifest.output(path);
                }
            }
            if let Some(path) = &emit_bfile {
                let mut text = String::new();
                for i in 1..=n {
                    text.push_str(&format!("{i} {}\n", exact::compute_fk(i, k, m, &config)?));
                }
                fs::write(path, text)?;
                manifest.output(path);
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "n": n, "k": k, "m": m, "value": value })
                );
            } else if m == 2 {
                println!("F_{k}({n}) = {value}");
            } else {
                println!("F_{{{k},{m}}}({n}) = {value}");
            }
            manifest.write(&cli.manifest)
        }

        Command::F {
            n,
            emit_bfile,
            witness,
        } => {
            let mut manifest = RunManifest::new("f");
            manifest.param("n", n);
            let (min_sum, assignment) = multopt::min_multiplicative_sum(n)?;
            let f = multopt::compute_f(n)?;
            if let Some(path) = &witness {
                let json = serde_json::json!({
                    "n": n,
                    "f": f,
                    "min_sum": min_sum,
                    "signs": assignment.signs(),
                });
                fs::write(path, serde_json::to_string_pretty(&json).unwrap() + "\n")?;
                manifest.output(path);
            }
            if let Some(path) = &emit_bfile {
                let mut text = String::new();
                for i in 1..=n {
                    text.push_str(&format!("{i} {}\n", multopt::compute_f(i)?));
                }
                fs::write(path, text)?;
                manifest.output(path);
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "n": n, "f": f, "min_sum": min_sum })
                );
            } else {
                println!("F({n}) = {f}");
                println!("N - 2F(N) = {min_sum}");
            }
            manifest.write(&cli.manifest)
        }

        Command::Const { tolerance } => {
            if !(tolerance > 0.0 && tolerance <= 1e-3) {
                return Err(CliError::argument(format!(
                    "tolerance {tolerance} outside (0, 1e-3]"
                )));
            }
            let c = multopt::hall_montgomery_constant(tolerance);
            let mut manifest = RunManifest::new("const");
            manifest.param("tolerance", tolerance);
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({ "c": c, "one_minus_c": 1.0 - c, "tolerance": tolerance })
                );
            } else {
                println!("c = {c:.9}");
                println!("1 - c = {:.9}", 1.0 - c);
            }
            manifest.write(&cli.manifest)
        }

        Command::Sample {
            n,
            k,
            m,
            eps,
            trials,
            seed,
            out,
            csv,
        } => {
            if trials < 1 {
                return Err(CliError::argument("trials must be >= 1"));
            }
            let config = sampler::SamplerConfig::new(n, k, m, eps, seed)?;
            let mut manifest = RunManifest::new("sample");
            manifest
                .param("n", n)
                .param("k", k)
                .param("m", m)
                .param("eps", eps)
                .param("trials", trials);
            manifest.seed = Some(seed);

            let mut csv_file = match &csv {
                Some(path) => {
                    let mut f = fs::File::create(path)?;
                    writeln!(f, "{}", csv_header(&config))?;
                    Some(f)
                }
                None => None,
            };
            let mut acc = sampler::MonteCarloAccumulator::new();
            for index in 0..trials {
                let t = sampler::sample_trial(&config, index);
                if let Some(f) = csv_file.as_mut() {
                    writeln!(f, "{}", csv_row(index, &t))?;
                }
                acc.add(&t, &config);
            }
            let report = acc.finalize();
            let json = serde_json::to_string_pretty(&report).unwrap() + "\n";
            match &out {
                Some(path) => {
                    fs::write(path, &json)?;
                    manifest.output(path);
                    if !cli.json {
                        println!(
                            "{} trials: {} E-hits (p_hat = {:.3e}), {} collisions",
                            report.trials, report.hits_e, report.p_hat_e, report.collisions
                        );
                    }
                }
                None => print!("{json}"),
            }
            if let Some(path) = &csv {
                manifest.output(path);
            }
            manifest.write(&cli.manifest)
        }

        Command::Hall { n, u, out } => {
            let u = u.unwrap_or(1.0 + std::f64::consts::E.sqrt());
            let mut manifest = RunManifest::new("hall");
            manifest.param("n", n).param("u", u);
            let table = arith::FactorTable::build(n.max(4))?;
            let hs = multopt::build_hall_set(&table, n, u)?;
            let certified =
                multopt::certify_no_odd_power_products(&hs.members, hs.threshold, &table)?;
            if let Some(path) = &out {
                let mut text = String::new();
                for m in &hs.members {
                    text.push_str(&format!("{m}\n"));
                }
                fs::write(path, text)?;
                manifest.output(path);
            }
            if cli.json {
                println!(
                    "{}",
                    serde_json::json!({
                        "n": n,
                        "u": u,
                        "threshold": hs.threshold,
                        "size": hs.members.len(),
                        "density": hs.density(),
                        "certified": certified,
                    })
                );
            } else {
                println!(
                    "threshold {} (u = {u:.4}): {} members, density {:.4}, certificate {}",
                    hs.threshold,
                    hs.members.len(),
                    hs.density(),
                    if certified { "holds" } else { "FAILS" }
                );
            }
            manifest.write(&cli.manifest)?;
            if certified {
                Ok(())
            } else {
                Err(CliError::mismatch("multiplicative certificate failed"))
            }
        }

        Command::Table { kmax, nmax, out } => {
            if !(2..=7).contains(&kmax) {
                return Err(CliError::argument(format!("kmax {kmax} outside 2..=7")));
            }
            let mut manifest = RunManifest::new("table");
            manifest.param("kmax", kmax).param("nmax", nmax);
            let text = render_table(kmax, nmax)?;
            fs::write(&out, text)?;
            manifest.output(&out);
            if !cli.json {
                println!("wrote {}", out.display());
            } else {
                println!("{}", serde_json::json!({ "out": out.display().to_string() }));
            }
            manifest.write(&cli.manifest)
        }

        Command::OeisCheck {
            seq,
            upto,
            cache_dir,
            offline,
        } => {
            let cache = cache_dir.unwrap_or_else(oeis::default_cache_dir);
            let mut manifest = RunManifest::new("oeis-check");
            manifest
                .param("seq", &seq)
                .param("upto", upto)
                .param("offline", offline);
            let reference = oeis::fetch_sequence(&seq, &cache, offline)?;
            let computed = computed_sequence(&seq, upto)?;
            let report = oeis::compare_prefix(&computed, &reference, upto);

            if cli.json {
                let mismatches: Vec<_> = report
                    .mismatches
                    .iter()
                    .map(|m| {
                        serde_json::json!({
                            "index": m.index,
                            "computed": m.computed.to_string(),
                            "reference": m.reference.to_string(),
                        })
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "seq": seq,
                        "checked": report.checked,
                        "matches": report.matches,
                        "mismatches": mismatches,
                    })
                );
            } else {
                for m in &report.mismatches {
                    println!(
                        "mismatch at {}: computed {} != reference {}",
                        m.index, m.computed, m.reference
                    );
                }
                println!("{}: {}/{} values match", seq, report.matches, report.checked);
            }
            manifest.write(&cli.manifest)?;
            if report.all_match() {
                Ok(())
            } else {
                Err(CliError::mismatch(format!(
                    "{} mismatches against {seq}",
                    report.mismatches.len()
                )))
            }
        }
    }
}

/// Computed counterpart of each supported sequence, at indices 1..=upto.
fn computed_sequence(seq: &str, upto: i64) -> Result<BTreeMap<i64, BigInt>, CliError> {
    if upto < 1 {
        return Err(CliError::argument("upto must be >= 1"));
    }
    let config = ExactConfig::default();
    let mut out = BTreeMap::new();
    match seq {
        "A373114" => {
            for n in 1..=upto {
                out.insert(n, BigInt::from(multopt::compute_f(n as u32)?));
            }
        }
        "A360659" => {
            for n in 1..=upto {
                out.insert(n, BigInt::from(multopt::min_multiplicative_sum(n as u32)?.0));
            }
        }
        "A013928" => {
            for n in 1..=upto {
                out.insert(n, BigInt::from(arith::count_squarefree_upto(n as u64 - 1)));
            }
        }
        "A372306" | "A373119" | "A373178" => {
            let k = match seq {
                "A372306" => 3,
                "A373119" => 4,
                _ => 5,
            };
            for n in 1..=upto {
                out.insert(n, BigInt::from(exact::compute_fk(n as u32, k, 2, &config)?));
            }
        }
        other => {
            return Err(CliError::argument(format!(
                "no computed counterpart for sequence {other}"
            )));
        }
    }
    Ok(out)
}

fn csv_header(config: &sampler::SamplerConfig) -> String {
    let mut cols = vec!["trial".to_string()];
    for s in config.subsets() {
        cols.push(format!("d_{}", subset_label(s)));
    }
    for s in config.subsets() {
        cols.push(format!("p_{}", subset_label(s)));
    }
    for i in 1..=config.k() {
        cols.push(format!("n_{i}"));
    }
    cols.push("d_product_squarefree".to_string());
    for i in 1..=config.k() {
        cols.push(format!("in_window_{i}"));
    }
    cols.push("event_e".to_string());
    cols.join(",")
}

fn csv_row(index: u64, t: &sampler::TupleSample) -> String {
    let mut cols = vec![index.to_string()];
    cols.extend(t.d_components.iter().map(|d| d.to_string()));
    cols.extend(t.p_components.iter().map(|p| p.to_string()));
    cols.extend(t.n_values.iter().map(|n| n.to_string()));
    cols.push((t.d_product_squarefree as u8).to_string());
    cols.extend(t.in_window.iter().map(|&b| (b as u8).to_string()));
    cols.push((t.event_e as u8).to_string());
    cols.join(",")
}

fn subset_label(subset: &[u8]) -> String {
    subset
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("_")
}

/// CSV of N, F(N), F_k(N) and the ratios to N; capacity-limited cells stay
/// empty. '.' decimal separator, LF line endings.
fn render_table(kmax: u32, nmax: u32) -> Result<String, CliError> {
    let config = ExactConfig::default();
    let mut text = String::new();
    text.push('N');
    text.push_str(",F");
    for k in 2..=kmax {
        text.push_str(&format!(",F{k}"));
    }
    text.push_str(",F_ratio");
    for k in 2..=kmax {
        text.push_str(&format!(",F{k}_ratio"));
    }
    text.push('\n');

    for n in 1..=nmax {
        let f = match multopt::compute_f(n) {
            Ok(v) => Some(v),
            Err(MultOptError::SolverLimit { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let mut fks: Vec<Option<u64>> = Vec::new();
        for k in 2..=kmax {
            let v = match exact::compute_fk(n, k, 2, &config) {
                Ok(v) => Some(v),
                Err(
                    ExactError::SolverLimit { .. }
                    | ExactError::EdgeBudget { .. }
                    | ExactError::WorkBudget { .. },
                ) => None,
                Err(e) => return Err(e.into()),
            };
            fks.push(v);
        }
        let cell = |v: &Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        let ratio = |v: &Option<u64>| {
            v.map(|x| format!("{:.6}", x as f64 / n as f64))
                .unwrap_or_default()
        };
        text.push_str(&n.to_string());
        text.push(',');
        text.push_str(&cell(&f));
        for v in &fks {
            text.push(',');
            text.push_str(&cell(v));
        }
        text.push(',');
        text.push_str(&ratio(&f));
        for v in &fks {
            text.push(',');
            text.push_str(&ratio(v));
        }
        text.push('\n');
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn computed_sequences_cover_fixture_ids() {
        for id in oeis::FIXTURE_IDS {
            assert!(computed_sequence(id, 5).is_ok(), "{id}");
        }
        assert!(computed_sequence("A000001", 5).is_err());
    }

    #[test]
    fn table_has_expected_row() {
        let text = render_table(3, 6).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "N,F,F2,F3,F_ratio,F2_ratio,F3_ratio");
        // N = 6: F = 3, F_2 = 5 (squarefree count), F_3 = 5
        assert!(lines[6].starts_with("6,3,5,5,"), "row: {}", lines[6]);
        assert!(lines[6].ends_with(",0.833333"), "row: {}", lines[6]);
    }

    #[test]
    fn error_kinds_map_to_exit_codes() {
        let e: CliError = ExactError::EdgeBudget { budget: 1 }.into();
        assert_eq!(e.exit_code(), 3);
        let e: CliError = OeisError::InvalidId("x".into()).into();
        assert_eq!(e.exit_code(), 2);
        let e = CliError::mismatch("boom");
        assert_eq!(e.exit_code(), 4);
    }
}
