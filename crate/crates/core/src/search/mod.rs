//! Symmetry-reduced exhaustive norm search.
//!
//! The sup-norm of the alternating cocycle product over all tuples of circle
//! configurations is a maximum over finitely many combinatorial classes:
//! the first factor can be sorted (alternation), and the remaining factors
//! range over canonical weak-order classes (circle symmetries). For each
//! sorted first-factor pattern the kernel scans every class pair; the norm is
//! the maximum over patterns, with witnesses re-verified against the direct
//! evaluator before they are reported.

pub mod tables;

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cocycle::kernel::{bilinear_max, linear_max, KernelOptions, KernelOutcome};
use crate::cocycle::{build_sign_matrix, theta_direct, Configuration, SignRole};
use crate::error::{Error, Result};
use crate::ordercomb::{enumerate_x_patterns, RankVector, XPattern};
use crate::rat::Rat;

pub use tables::{
    canonical_classes, class_table, compat_distinct_table, compat_stacked_table, TableKind,
    TableSet,
};

/// Default maximum number of reported witnesses.
pub const DEFAULT_WITNESS_CAP: usize = 16;

/// Search strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// All sorted first-factor patterns times all dihedral weak-order
    /// classes; a full verification of the norm.
    Exhaustive,
    /// The fixed compatibility tables (360 distinct / 7710 stacked columns
    /// for three factors); reproduces the published case maxima.
    PaperFast,
    /// Evaluate only the regular configuration; a lower bound, not a norm.
    RegularOnly,
    /// Seeded random configurations; a lower bound, not a norm.
    Sample,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Exhaustive => "exhaustive",
            SearchMode::PaperFast => "paper-fast",
            SearchMode::RegularOnly => "regular-only",
            SearchMode::Sample => "sample",
        }
    }
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<SearchMode> {
        match s {
            "exhaustive" => Ok(SearchMode::Exhaustive),
            "paper-fast" => Ok(SearchMode::PaperFast),
            "regular-only" => Ok(SearchMode::RegularOnly),
            "sample" => Ok(SearchMode::Sample),
            other => Err(Error::Validation(format!(
                "unknown mode `{other}` (expected exhaustive, paper-fast, regular-only, sample)"
            ))),
        }
    }
}

/// Maximum for one sorted first-factor pattern.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatternMax {
    pub pattern: XPattern,
    pub max: Rat,
}

/// Size of one class table used by a search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableInfo {
    pub table: String,
    pub columns: usize,
    pub fingerprint: String,
}

/// Sampling details (sample mode only).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleInfo {
    pub seed: u64,
    pub requested: usize,
    pub evaluated: usize,
}

/// Volatile run statistics; never part of the canonical serialized report.
#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub elapsed: Duration,
    pub threads: usize,
}

/// Result of a norm search. The serialized form is byte-identical across
/// runs and thread counts; wall time and thread count live in [`RunStats`]
/// and are skipped.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NormReport {
    pub format: u32,
    pub n: usize,
    pub mode: SearchMode,
    /// Exact maximum (for exhaustive/paper-fast) or best value found
    /// (regular-only/sample).
    pub norm: Rat,
    /// False when the mode does not certify a maximum (regular-only, sample,
    /// or a truncated sample run).
    pub complete: bool,
    pub witness_cap: usize,
    /// Configurations attaining `norm`, all re-verified by the direct
    /// evaluator; empty when `norm` is 0.
    pub witnesses: Vec<Configuration>,
    pub per_pattern_maxima: Vec<PatternMax>,
    pub class_tables: Vec<TableInfo>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<SampleInfo>,
    #[serde(skip, default)]
    pub stats: RunStats,
}

/// Report format version; bump when the serialized layout changes.
const REPORT_FORMAT: u32 = 1;

/// Options for [`norm`].
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub witness_cap: usize,
    /// Sample mode: number of random configurations.
    pub samples: usize,
    /// Sample mode: RNG seed.
    pub seed: u64,
    /// Sample mode: optional wall-clock budget; exceeding it truncates the
    /// run and flags the report incomplete.
    pub time_budget: Option<Duration>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            witness_cap: DEFAULT_WITNESS_CAP,
            samples: 10_000,
            seed: 0,
            time_budget: None,
        }
    }
}

/// The cocycle value of the regular configuration (factor `k` at angle steps
/// `k/(2n+1)`), by direct evaluation.
pub fn eval_regular(n: usize) -> Result<Rat> {
    theta_direct(&Configuration::regular(n)?)
}

/// Maximum of the absolute cocycle value over all class pairs with the first
/// factor fixed to `xp`, plus verified argmax witnesses.
pub fn max_for_x_pattern(
    xp: &XPattern,
    tables: &TableSet,
    witness_cap: usize,
) -> Result<(Rat, Vec<Configuration>)> {
    let outcome = pattern_kernel(xp, tables, witness_cap)?;
    let witnesses = cells_to_configs(xp, tables, &outcome.cells)?;
    verify_witnesses(&witnesses, &outcome.value)?;
    Ok((outcome.value, witnesses))
}

/// Kernel run for one pattern (no witness mapping).
fn pattern_kernel(xp: &XPattern, tables: &TableSet, witness_cap: usize) -> Result<KernelOutcome> {
    if xp.len() != 2 * tables.n + 1 {
        return Err(Error::Shape(format!(
            "pattern {xp} has {} points, tables expect {}",
            xp.len(),
            2 * tables.n + 1
        )));
    }
    let sign = build_sign_matrix(
        SignRole::CombinedSign,
        &tables.perm_table,
        std::slice::from_ref(xp.as_rank_vector()),
    )?;
    let opts = KernelOptions {
        witness_cap,
        // y and z columns are the same class list, and the cocycle is
        // invariant under swapping the two factors; witnesses are re-verified.
        symmetric: tables.last.is_some(),
    };
    match &tables.last {
        Some(last) => bilinear_max(&sign, &tables.middle, last, &opts),
        None => linear_max(&sign, &tables.middle, &opts),
    }
}

fn cells_to_configs(
    xp: &XPattern,
    tables: &TableSet,
    cells: &[(u32, u32)],
) -> Result<Vec<Configuration>> {
    cells
        .iter()
        .map(|&(i, j)| {
            let mut factors = vec![
                xp.as_rank_vector().clone(),
                tables.classes[i as usize].clone(),
            ];
            if tables.last.is_some() {
                factors.push(tables.classes[j as usize].clone());
            }
            Configuration::new(factors)
        })
        .collect()
}

fn verify_witnesses(witnesses: &[Configuration], norm: &Rat) -> Result<()> {
    for w in witnesses {
        let value = theta_direct(w)?;
        if value.abs() != *norm {
            return Err(Error::Validation(format!(
                "witness re-verification failed: |{value}| != {norm} at {w:?}"
            )));
        }
    }
    Ok(())
}

fn table_info(t: &TableSet) -> TableInfo {
    TableInfo {
        table: t.name(),
        columns: t.columns(),
        fingerprint: t.fingerprint.clone(),
    }
}

/// Computes the norm report for `n` factors in the given mode.
///
/// Exhaustive and paper-fast certify the maximum for `n` in {1,2,3};
/// regular-only and sample report lower bounds for `n` up to 6.
pub fn norm(n: usize, mode: SearchMode, opts: &SearchOptions) -> Result<NormReport> {
    norm_with_tables(n, mode, opts, &mut TableSet::build)
}

/// Like [`norm`], with table construction routed through `provider` (e.g. a
/// disk cache).
pub fn norm_with_tables(
    n: usize,
    mode: SearchMode,
    opts: &SearchOptions,
    provider: TableProvider<'_>,
) -> Result<NormReport> {
    let start = Instant::now();
    let mut report = match mode {
        SearchMode::Exhaustive | SearchMode::PaperFast => match n {
            1 => norm_n1(mode, opts),
            2 | 3 => norm_tabled(n, mode, opts, provider),
            _ => Err(Error::Capability(format!(
                "exhaustive/paper-fast search supports n in 1..=3, got {n} \
                 (use regular-only or sample)"
            ))),
        },
        SearchMode::RegularOnly => norm_regular_only(n, opts),
        SearchMode::Sample => norm_sample(n, opts),
    }?;
    report.stats.elapsed = start.elapsed();
    report.stats.threads = rayon::current_num_threads();
    Ok(report)
}

/// n = 1: the cocycle is the plain orientation of three points.
fn norm_n1(mode: SearchMode, opts: &SearchOptions) -> Result<NormReport> {
    let mut per_pattern = Vec::new();
    let mut best = Rat::ZERO;
    let mut witnesses = Vec::new();
    for xp in enumerate_x_patterns(1)? {
        let cfg = Configuration::new(vec![xp.as_rank_vector().clone()])?;
        let value = theta_direct(&cfg)?.abs();
        if value > best {
            best = value;
            witnesses.clear();
        }
        if value == best && !value.is_zero() && witnesses.len() < opts.witness_cap {
            witnesses.push(cfg);
        }
        per_pattern.push(PatternMax {
            pattern: xp,
            max: value,
        });
    }
    verify_witnesses(&witnesses, &best)?;
    Ok(NormReport {
        format: REPORT_FORMAT,
        n: 1,
        mode,
        norm: best,
        complete: true,
        witness_cap: opts.witness_cap,
        witnesses,
        per_pattern_maxima: per_pattern,
        class_tables: Vec::new(),
        sample: None,
        stats: RunStats::default(),
    })
}

/// Source of prebuilt table sets; lets callers interpose a cache.
pub type TableProvider<'a> = &'a mut dyn FnMut(usize, TableKind) -> Result<TableSet>;

/// The pattern/table pairs a mode scans for n in {2, 3}.
fn mode_runs(
    n: usize,
    mode: SearchMode,
    provider: TableProvider<'_>,
) -> Result<Vec<(XPattern, TableSet)>> {
    match (mode, n) {
        (SearchMode::Exhaustive, _) => {
            let tables = provider(n, TableKind::Dihedral)?;
            Ok(enumerate_x_patterns(n)?
                .into_iter()
                .map(|xp| (xp, tables.clone()))
                .collect())
        }
        (SearchMode::PaperFast, 2) => {
            let tables = provider(2, TableKind::CompatDistinct)?;
            Ok(vec![(XPattern::new(vec![1, 2, 3, 4, 5])?, tables)])
        }
        (SearchMode::PaperFast, 3) => {
            let distinct = provider(3, TableKind::CompatDistinct)?;
            let stacked = provider(3, TableKind::CompatStacked)?;
            let run = |ranks: &[u8], t: &TableSet| -> Result<(XPattern, TableSet)> {
                Ok((XPattern::new(ranks.to_vec())?, t.clone()))
            };
            Ok(vec![
                run(&[1, 2, 3, 4, 5, 6, 7], &distinct)?,
                run(&[1, 1, 1, 1, 2, 3, 4], &distinct)?,
                run(&[1, 1, 1, 2, 2, 3, 4], &stacked)?,
                run(&[1, 1, 1, 2, 3, 3, 4], &stacked)?,
                run(&[1, 1, 2, 2, 3, 3, 4], &stacked)?,
                run(&[1, 1, 1, 2, 3, 4, 5], &stacked)?,
                run(&[1, 1, 2, 2, 3, 4, 5], &stacked)?,
                run(&[1, 1, 2, 3, 4, 5, 6], &stacked)?,
            ])
        }
        _ => unreachable!("norm() routes only n in 2..=3 here"),
    }
}

fn norm_tabled(
    n: usize,
    mode: SearchMode,
    opts: &SearchOptions,
    provider: TableProvider<'_>,
) -> Result<NormReport> {
    let runs = mode_runs(n, mode, provider)?;

    // Deduplicate table descriptors for the report.
    let mut class_tables: Vec<TableInfo> = Vec::new();
    for (_, t) in &runs {
        if !class_tables.iter().any(|i| i.table == t.name()) {
            class_tables.push(table_info(t));
        }
    }

    // runs that attain the current best, with their argmax cells
    type BestRun = (XPattern, TableSet, Vec<(u32, u32)>);
    let mut per_pattern = Vec::with_capacity(runs.len());
    let mut best = Rat::ZERO;
    let mut best_runs: Vec<BestRun> = Vec::new();
    for (xp, tables) in runs {
        let outcome = pattern_kernel(&xp, &tables, opts.witness_cap)?;
        per_pattern.push(PatternMax {
            pattern: xp.clone(),
            max: outcome.value,
        });
        if outcome.value > best {
            best = outcome.value;
            best_runs.clear();
        }
        if outcome.value == best {
            best_runs.push((xp, tables, outcome.cells));
        }
    }
    per_pattern.sort_by(|a, b| a.pattern.cmp(&b.pattern));

    let mut witnesses = Vec::new();
    for (xp, tables, cells) in &best_runs {
        if witnesses.len() >= opts.witness_cap {
            break;
        }
        let mut configs = cells_to_configs(xp, tables, cells)?;
        configs.truncate(opts.witness_cap - witnesses.len());
        witnesses.append(&mut configs);
    }
    verify_witnesses(&witnesses, &best)?;

    Ok(NormReport {
        format: REPORT_FORMAT,
        n,
        mode,
        norm: best,
        complete: true,
        witness_cap: opts.witness_cap,
        witnesses,
        per_pattern_maxima: per_pattern,
        class_tables,
        sample: None,
        stats: RunStats::default(),
    })
}

fn norm_regular_only(n: usize, opts: &SearchOptions) -> Result<NormReport> {
    let cfg = Configuration::regular(n)?;
    let value = theta_direct(&cfg)?;
    let norm = value.abs();
    let witnesses = if norm.is_zero() { Vec::new() } else { vec![cfg.clone()] };
    Ok(NormReport {
        format: REPORT_FORMAT,
        n,
        mode: SearchMode::RegularOnly,
        norm,
        complete: false,
        witness_cap: opts.witness_cap,
        witnesses,
        per_pattern_maxima: vec![PatternMax {
            pattern: XPattern::of(&cfg.factors()[0]),
            max: norm,
        }],
        class_tables: Vec::new(),
        sample: None,
        stats: RunStats::default(),
    })
}

/// A random weak order on `m` points (not uniform over weak orders; ties
/// arise from value collisions, which is what the identities need).
pub fn random_rank_vector(rng: &mut impl Rng, m: usize) -> RankVector {
    let values: Vec<u8> = (0..m).map(|_| rng.gen_range(1..=m as u8)).collect();
    RankVector::from_values(&values).expect("nonempty")
}

/// A random configuration for `n` factors.
pub fn random_configuration(rng: &mut impl Rng, n: usize) -> Configuration {
    let m = 2 * n + 1;
    let factors = (0..n).map(|_| random_rank_vector(rng, m)).collect();
    Configuration::new(factors).expect("factor lengths match by construction")
}

fn norm_sample(n: usize, opts: &SearchOptions) -> Result<NormReport> {
    if n == 0 || n > crate::cocycle::MAX_DIRECT_FACTORS {
        return Err(Error::Budget(format!(
            "sample mode supports 1..={} factors, got {n}",
            crate::cocycle::MAX_DIRECT_FACTORS
        )));
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best = Rat::ZERO;
    let mut witnesses: Vec<Configuration> = Vec::new();
    let mut per_pattern: Vec<(XPattern, Rat)> = Vec::new();
    let mut evaluated = 0usize;
    for _ in 0..opts.samples {
        if let Some(budget) = opts.time_budget {
            if start.elapsed() > budget {
                break;
            }
        }
        let cfg = random_configuration(&mut rng, n);
        let value = theta_direct(&cfg)?.abs();
        evaluated += 1;
        let pattern = XPattern::of(&cfg.factors()[0]);
        match per_pattern.iter_mut().find(|(p, _)| *p == pattern) {
            Some((_, m)) => {
                if value > *m {
                    *m = value;
                }
            }
            None => per_pattern.push((pattern, value)),
        }
        if value > best {
            best = value;
            witnesses.clear();
        }
        if value == best && !value.is_zero() && witnesses.len() < opts.witness_cap {
            witnesses.push(cfg);
        }
    }
    verify_witnesses(&witnesses, &best)?;
    per_pattern.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(NormReport {
        format: REPORT_FORMAT,
        n,
        mode: SearchMode::Sample,
        norm: best,
        complete: false,
        witness_cap: opts.witness_cap,
        witnesses,
        per_pattern_maxima: per_pattern
            .into_iter()
            .map(|(pattern, max)| PatternMax { pattern, max })
            .collect(),
        class_tables: Vec::new(),
        sample: Some(SampleInfo {
            seed: opts.seed,
            requested: opts.samples,
            evaluated,
        }),
        stats: RunStats::default(),
    })
}

/// True when the sample run hit its time budget before finishing.
pub fn sample_truncated(report: &NormReport) -> bool {
    matches!(&report.sample, Some(s) if s.evaluated < s.requested)
}
