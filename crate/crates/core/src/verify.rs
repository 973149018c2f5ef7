//! Reproduction and identity suites.
//!
//! `constants` recomputes every published maximum through the search engine
//! and compares exactly; `identities` stress-tests the algebraic laws the
//! evaluators must satisfy on seeded random configurations. A zero-failure
//! run is the reproduction badge for the whole artifact.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cache::fnv1a64;
use crate::cocycle::{theta_direct, theta_reduced, Configuration};
use crate::error::Result;
use crate::ordercomb::{
    canonicalize_cyclic, dihedral_orbit, enumerate_x_patterns, perm_parity_by_inversions,
    RankVector,
};
use crate::rat::Rat;
use crate::search::{
    self, eval_regular, norm, random_configuration, random_rank_vector, SearchMode, SearchOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Recorded for context; never counts as a failure.
    Info,
}

/// One checked quantity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationItem {
    pub id: String,
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
    #[serde(skip, default)]
    pub elapsed: Duration,
}

impl VerificationItem {
    fn timed(
        id: &str,
        label: &str,
        expected: impl ToString,
        start: Instant,
        computed: impl ToString,
        pass: bool,
    ) -> VerificationItem {
        VerificationItem {
            id: id.to_string(),
            label: label.to_string(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            elapsed: start.elapsed(),
        }
    }

    fn info(id: &str, label: &str, note: impl ToString) -> VerificationItem {
        VerificationItem {
            id: id.to_string(),
            label: label.to_string(),
            expected: "(recorded)".into(),
            computed: note.to_string(),
            status: Status::Info,
            elapsed: Duration::ZERO,
        }
    }
}

/// Whole-suite report. Serialization skips wall times, so two runs with the
/// same inputs are byte-identical regardless of thread count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub format: u32,
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub items: Vec<VerificationItem>,
}

impl VerificationReport {
    pub fn failures(&self) -> usize {
        self.items.iter().filter(|i| i.status == Status::Fail).count()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }
}

fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den).expect("constant fraction")
}

fn exact_item(id: &str, label: &str, expected: Rat, computed: Rat, start: Instant) -> VerificationItem {
    VerificationItem::timed(id, label, expected, start, computed, computed == expected)
}

/// Recomputes the published maxima and compares exactly.
pub fn verify_paper_constants(witness_cap: usize) -> Result<Vec<VerificationItem>> {
    let mut items = Vec::new();
    let opts = SearchOptions {
        witness_cap,
        ..Default::default()
    };

    // regular configurations
    for (n, expected) in [(1usize, rat(1, 1)), (2, rat(2, 3)), (3, rat(11, 45))] {
        let start = Instant::now();
        let value = eval_regular(n)?;
        items.push(exact_item(
            &format!("regular-n{n}"),
            &format!("value at the regular {n}-factor configuration"),
            expected,
            value,
            start,
        ));
    }
    {
        let start = Instant::now();
        let value = eval_regular(4)?;
        let mut item = VerificationItem::info(
            "regular-n4",
            "value at the regular 4-factor configuration (recorded, no independent source)",
            value,
        );
        item.elapsed = start.elapsed();
        items.push(item);
    }
    items.push(VerificationItem::info(
        "regular-convention",
        "regular configuration convention",
        "factor k places point i at angle (k*i mod 2n+1)/(2n+1)",
    ));

    // norms
    let start = Instant::now();
    let n1 = norm(1, SearchMode::Exhaustive, &opts)?;
    items.push(exact_item(
        "norm-n1",
        "sup-norm, 1 factor",
        rat(1, 1),
        n1.norm,
        start,
    ));

    let start = Instant::now();
    let n2_fast = norm(2, SearchMode::PaperFast, &opts)?;
    items.push(exact_item(
        "norm-n2-paper-fast",
        "sup-norm, 2 factors, fixed distinct-order table",
        rat(2, 3),
        n2_fast.norm,
        start,
    ));
    let start = Instant::now();
    let n2_exh = norm(2, SearchMode::Exhaustive, &opts)?;
    items.push(exact_item(
        "norm-n2-exhaustive",
        "sup-norm, 2 factors, all dihedral classes",
        rat(2, 3),
        n2_exh.norm,
        start,
    ));

    let start = Instant::now();
    let n3_fast = norm(3, SearchMode::PaperFast, &opts)?;
    items.push(exact_item(
        "norm-n3-paper-fast",
        "sup-norm, 3 factors, fixed case tables",
        rat(11, 45),
        n3_fast.norm,
        start,
    ));
    let start = Instant::now();
    let n3_exh = norm(3, SearchMode::Exhaustive, &opts)?;
    items.push(exact_item(
        "norm-n3-exhaustive",
        "sup-norm, 3 factors, all dihedral classes",
        rat(11, 45),
        n3_exh.norm,
        start,
    ));

    // the regular configuration must appear among the exhaustive witnesses
    {
        let start = Instant::now();
        let regular = Configuration::regular(3)?;
        let canon: Vec<RankVector> = regular
            .factors()
            .iter()
            .map(|f| canonicalize_cyclic(f, true))
            .collect();
        let found = n3_exh
            .witnesses
            .iter()
            .any(|w| w.factors() == canon.as_slice());
        items.push(VerificationItem::timed(
            "witness-regular-n3",
            "regular configuration among exhaustive witnesses",
            "present",
            start,
            if found { "present" } else { "absent" },
            found,
        ));
    }

    // per-pattern case maxima over the fixed tables
    let fast_cases: [(&[u8], Rat); 7] = [
        (&[1, 1, 1, 1, 2, 3, 4], rat(2, 15)),
        (&[1, 1, 1, 2, 2, 3, 4], rat(7, 45)),
        (&[1, 1, 1, 2, 3, 3, 4], rat(7, 45)),
        (&[1, 1, 2, 2, 3, 3, 4], rat(8, 45)),
        (&[1, 1, 1, 2, 3, 4, 5], rat(8, 45)),
        (&[1, 1, 2, 2, 3, 4, 5], rat(1, 5)),
        (&[1, 1, 2, 3, 4, 5, 6], rat(2, 9)),
    ];
    for (ranks, expected) in fast_cases {
        let id = format!(
            "xmax-{}",
            ranks.iter().map(|r| r.to_string()).collect::<String>()
        );
        let start = Instant::now();
        let computed = n3_fast
            .per_pattern_maxima
            .iter()
            .find(|p| p.pattern.ranks() == ranks)
            .map(|p| p.max)
            .unwrap_or(Rat::ZERO);
        items.push(exact_item(
            &id,
            &format!("case maximum for first-factor pattern {ranks:?}"),
            expected,
            computed,
            start,
        ));
    }

    // monotonicity: exhaustive >= fixed-table >= |regular|, equal for n in {2,3}
    for (n, exh, fast) in [(2usize, &n2_exh, &n2_fast), (3, &n3_exh, &n3_fast)] {
        let start = Instant::now();
        let reg = eval_regular(n)?.abs();
        let chain_ok = exh.norm >= fast.norm && fast.norm >= reg && exh.norm == reg;
        items.push(VerificationItem::timed(
            &format!("monotonicity-n{n}"),
            "exhaustive >= fixed-table >= |regular value|, all equal",
            "chain holds with equality",
            start,
            format!("exhaustive {} fixed {} regular {}", exh.norm, fast.norm, reg),
            chain_ok,
        ));
    }

    // strictness: first factor with exactly 3 distinct values stays below the
    // norm; read off the exhaustive per-pattern maxima (true maxima over all
    // class pairs)
    let bound = rat(11, 45);
    for pm in &n3_exh.per_pattern_maxima {
        if pm.pattern.distinct() == 3 {
            let id = format!(
                "three-distinct-strict-{}",
                pm.pattern.ranks().iter().map(|r| r.to_string()).collect::<String>()
            );
            items.push(VerificationItem::timed(
                &id,
                &format!("pattern {} maximum strictly below 11/45", pm.pattern),
                "< 11/45",
                Instant::now(),
                pm.max,
                pm.max < bound,
            ));
        }
    }

    // degenerate patterns (fewer than 3 distinct values) contribute exactly 0
    {
        let start = Instant::now();
        let mut all_zero = true;
        let mut checked = 0;
        for pm in &n3_exh.per_pattern_maxima {
            if pm.pattern.distinct() < 3 {
                checked += 1;
                all_zero &= pm.max.is_zero();
            }
        }
        items.push(VerificationItem::timed(
            "degenerate-patterns-zero",
            "patterns with < 3 distinct values give 0 through the kernel",
            "all 0",
            start,
            format!("{checked} patterns, all zero: {all_zero}"),
            all_zero && checked == 7,
        ));
    }

    // counting-bound context: the published vanishing-fraction bounds for
    // three-distinct first factors; these bound term counts, not values, so
    // they are recorded, with only the stated inequalities checked
    for (id, frac, label) in [
        ("bound-frac-115", rat(1, 7), "parts 1+1+5"),
        ("bound-frac-124", rat(8, 35), "parts 1+2+4"),
        ("bound-frac-133", rat(6, 35), "parts 1+3+3"),
        ("bound-frac-223", rat(8, 35), "parts 2+2+3"),
    ] {
        let holds = frac < bound;
        items.push(VerificationItem {
            id: id.into(),
            label: format!("non-vanishing term fraction bound, {label} (context)"),
            expected: "< 11/45".into(),
            computed: format!("{frac} ({})", if holds { "holds" } else { "violated" }),
            status: if holds { Status::Info } else { Status::Fail },
            elapsed: Duration::ZERO,
        });
    }

    Ok(items)
}

fn item_rng(seed: u64, id: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a64(id.as_bytes()))
}

fn counted_item(
    id: &str,
    label: &str,
    samples: usize,
    failures: usize,
    start: Instant,
) -> VerificationItem {
    VerificationItem::timed(
        id,
        label,
        "0 failures",
        start,
        format!("{failures} failures / {samples} samples"),
        failures == 0,
    )
}

/// Corner-case configurations mixed into every sampled identity check.
fn corner_configurations(n: usize) -> Vec<Configuration> {
    let m = 2 * n + 1;
    let all_ties = RankVector::new(vec![1; m]).unwrap();
    let identity = RankVector::new((1..=m as u8).collect()).unwrap();
    let two_level = RankVector::new(
        (0..m).map(|i| if i % 2 == 0 { 1 } else { 2 }).collect(),
    )
    .unwrap();
    let mut out = Vec::new();
    out.push(Configuration::new(vec![all_ties; n]).unwrap());
    out.push(Configuration::new(vec![identity.clone(); n]).unwrap());
    let mut mixed = vec![identity; n];
    mixed[0] = two_level;
    out.push(Configuration::new(mixed).unwrap());
    if let Ok(regular) = Configuration::regular(n) {
        out.push(Configuration::new(regular.factors().to_vec()).unwrap());
    }
    out
}

/// Random point permutation with its parity.
fn random_point_perm(rng: &mut impl Rng, m: usize) -> (Vec<u8>, i8) {
    let mut perm: Vec<u8> = (0..m as u8).collect();
    // Fisher-Yates
    for i in (1..m).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let sign = perm_parity_by_inversions(&perm);
    (perm, sign)
}

/// Rotates the circle values of one factor; the cocycle value is unchanged.
fn rotate_factor(cfg: &Configuration, factor: usize, shift: u8) -> Configuration {
    let mut factors = cfg.factors().to_vec();
    let k = factors[factor].distinct() as u8;
    let ranks: Vec<u8> = factors[factor]
        .ranks()
        .iter()
        .map(|&r| (r - 1 + shift) % k + 1)
        .collect();
    factors[factor] = RankVector::new(ranks).unwrap();
    Configuration::new(factors).unwrap()
}

/// Reverses the orientation of one factor; the cocycle value is negated.
fn reflect_factor(cfg: &Configuration, factor: usize) -> Configuration {
    let mut factors = cfg.factors().to_vec();
    let k = factors[factor].distinct() as u8;
    let ranks: Vec<u8> = factors[factor].ranks().iter().map(|&r| k + 1 - r).collect();
    factors[factor] = RankVector::new(ranks).unwrap();
    Configuration::new(factors).unwrap()
}

/// The alternating sum over omitted points of an (2n+2)-point extension;
/// zero for every cocycle.
fn coboundary_vanishes(rng: &mut impl Rng, n: usize) -> Result<bool> {
    let m = 2 * n + 2;
    let extended: Vec<RankVector> = (0..n).map(|_| random_rank_vector(rng, m)).collect();
    let mut sum = Rat::ZERO;
    for omit in 0..m {
        let factors: Vec<RankVector> = extended
            .iter()
            .map(|f| {
                let remaining: Vec<u8> = f
                    .ranks()
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != omit)
                    .map(|(_, &r)| r)
                    .collect();
                RankVector::from_values(&remaining)
            })
            .collect::<Result<Vec<_>>>()?;
        let value = theta_direct(&Configuration::new(factors)?)?;
        sum = if omit % 2 == 0 {
            sum.checked_add(&value)?
        } else {
            sum.checked_add(&value.neg())?
        };
    }
    Ok(sum.is_zero())
}

/// Seeded random checks of the algebraic identities (n = 3 plus the n = 2
/// oracle-equality check).
pub fn verify_identities(seed: u64, samples: usize) -> Result<Vec<VerificationItem>> {
    let mut items = Vec::new();
    let n = 3usize;
    let m = 2 * n + 1;

    // oracle equality: reduced table versus the direct factorial sum
    for factors in [2usize, 3] {
        let id = format!("reduced-equals-direct-n{factors}");
        let start = Instant::now();
        let mut rng = item_rng(seed, &id);
        let mut failures = 0;
        let mut tested = 0;
        for cfg in corner_configurations(factors) {
            tested += 1;
            if theta_reduced(&cfg)? != theta_direct(&cfg)? {
                failures += 1;
            }
        }
        for _ in 0..samples {
            let cfg = random_configuration(&mut rng, factors);
            tested += 1;
            if theta_reduced(&cfg)? != theta_direct(&cfg)? {
                failures += 1;
            }
        }
        items.push(counted_item(
            &id,
            &format!("reduced {factors}-factor sum equals the direct oracle"),
            tested,
            failures,
            start,
        ));
    }

    // alternation: permuting the points multiplies the value by the sign
    {
        let id = "alternation-sign-law";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        for _ in 0..samples {
            let cfg = random_configuration(&mut rng, n);
            let (perm, sign) = random_point_perm(&mut rng, m);
            let permuted = cfg.permute_points(&perm)?;
            let base = theta_direct(&cfg)?;
            let expected = if sign == 1 { base } else { base.neg() };
            if theta_direct(&permuted)? != expected {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "point relabeling scales the value by the permutation sign",
            samples,
            failures,
            start,
        ));
    }

    // coboundary of the cocycle vanishes on 2n+2 points
    {
        let id = "coboundary-vanishes";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        for _ in 0..samples {
            if !coboundary_vanishes(&mut rng, n)? {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "alternating omission sum over 8 points vanishes",
            samples,
            failures,
            start,
        ));
    }

    // factor-swap invariance
    {
        let id = "factor-swap";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        let orders: [[usize; 3]; 5] = [
            [1, 0, 2],
            [0, 2, 1],
            [2, 1, 0],
            [1, 2, 0],
            [2, 0, 1],
        ];
        for _ in 0..samples {
            let cfg = random_configuration(&mut rng, n);
            let order = orders[rng.gen_range(0..orders.len())];
            let swapped = cfg.permute_factors(&order)?;
            if theta_direct(&swapped)? != theta_direct(&cfg)? {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "permuting the circle factors leaves the value unchanged",
            samples,
            failures,
            start,
        ));
    }

    // single-factor rotation invariance / reflection antisymmetry
    {
        let id = "rotation-invariance";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        for _ in 0..samples {
            let cfg = random_configuration(&mut rng, n);
            let factor = rng.gen_range(0..n);
            let k = cfg.factors()[factor].distinct() as u8;
            let shift = rng.gen_range(0..k);
            let rotated = rotate_factor(&cfg, factor, shift);
            if theta_direct(&rotated)? != theta_direct(&cfg)? {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "rotating one factor's circle leaves the value unchanged",
            samples,
            failures,
            start,
        ));
    }
    {
        let id = "reflection-antisymmetry";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        for _ in 0..samples {
            let cfg = random_configuration(&mut rng, n);
            let factor = rng.gen_range(0..n);
            let reflected = reflect_factor(&cfg, factor);
            if theta_direct(&reflected)? != theta_direct(&cfg)?.neg() {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "reversing one factor's orientation negates the value",
            samples,
            failures,
            start,
        ));
    }

    // range and denominator
    {
        let id = "range-and-denominator";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        for _ in 0..samples {
            let cfg = random_configuration(&mut rng, n);
            let value = theta_direct(&cfg)?;
            let in_range = value.abs() <= (1, 1);
            let denom_divides = 5040 % value.denom() == 0;
            if !(in_range && denom_divides) {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "values lie in [-1,1] with denominator dividing (2n+1)!",
            samples,
            failures,
            start,
        ));
    }

    // canonicalization: idempotent and constant on orbits
    {
        let id = "canonical-form-orbit-constant";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let mut failures = 0;
        for _ in 0..samples {
            let rv = random_rank_vector(&mut rng, m);
            for use_reflection in [false, true] {
                let canon = canonicalize_cyclic(&rv, use_reflection);
                if canonicalize_cyclic(&canon, use_reflection) != canon {
                    failures += 1;
                    continue;
                }
                let orbit = dihedral_orbit(&rv, use_reflection);
                let image = &orbit[rng.gen_range(0..orbit.len())];
                if canonicalize_cyclic(image, use_reflection) != canon {
                    failures += 1;
                }
            }
        }
        items.push(counted_item(
            id,
            "canonical form is idempotent and constant on symmetry orbits",
            samples,
            failures,
            start,
        ));
    }

    // kernel spot check: single cells equal the reduced evaluator
    {
        let id = "kernel-cross-check";
        let start = Instant::now();
        let mut rng = item_rng(seed, id);
        let tables = search::TableSet::build(3, search::TableKind::Dihedral)?;
        let patterns = enumerate_x_patterns(3)?;
        let mut failures = 0;
        let spot_samples = samples.min(200);
        for _ in 0..spot_samples {
            let xp = &patterns[rng.gen_range(0..patterns.len())];
            let i = rng.gen_range(0..tables.columns());
            let j = rng.gen_range(0..tables.columns());
            let cfg = Configuration::new(vec![
                xp.as_rank_vector().clone(),
                tables.classes[i].clone(),
                tables.classes[j].clone(),
            ])?;
            let via_reduced = theta_reduced(&cfg)?;
            let via_cell = kernel_cell(&tables, xp, i, j)?;
            if via_cell != via_reduced {
                failures += 1;
            }
        }
        items.push(counted_item(
            id,
            "kernel cells equal the reduced evaluator on random class pairs",
            spot_samples,
            failures,
            start,
        ));
    }

    Ok(items)
}

/// One kernel cell, computed through the sign-matrix route.
fn kernel_cell(
    tables: &search::TableSet,
    xp: &crate::ordercomb::XPattern,
    i: usize,
    j: usize,
) -> Result<Rat> {
    use crate::cocycle::{build_sign_matrix, SignRole};
    let sign = build_sign_matrix(
        SignRole::CombinedSign,
        &tables.perm_table,
        std::slice::from_ref(xp.as_rank_vector()),
    )?;
    let last = tables.last.as_ref().expect("3-factor tables");
    let rows = sign.rows;
    let mut num = 0i64;
    for l in 0..rows {
        num += (sign.entry(l, 0) * tables.middle.entry(l, i) * last.entry(l, j)) as i64;
    }
    Rat::new(num, rows as i64)
}

/// Runs the selected suites in a fixed order.
pub fn run_suite(
    suite: &str,
    seed: u64,
    samples: usize,
    witness_cap: usize,
) -> Result<VerificationReport> {
    let mut items = Vec::new();
    match suite {
        "constants" => items.extend(verify_paper_constants(witness_cap)?),
        "identities" => items.extend(verify_identities(seed, samples)?),
        "all" => {
            items.extend(verify_paper_constants(witness_cap)?);
            items.extend(verify_identities(seed, samples)?);
        }
        other => {
            return Err(crate::error::Error::Validation(format!(
                "unknown suite `{other}` (expected constants, identities, all)"
            )))
        }
    }
    Ok(VerificationReport {
        format: 1,
        suite: suite.to_string(),
        seed,
        samples,
        items,
    })
}
