//! `thnorm`: exact cocycle-norm searches, configuration evaluation,
//! verification suites, and simplicial-volume lower bounds.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/input error,
//! 3 budget exceeded (truncated sample run).

mod cachedir;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use thnorm_core::bound::{lower_bound, parse_volume, surfaces_volume, VolumeSpec};
use thnorm_core::cocycle::{theta_direct, Configuration};
use thnorm_core::configfile::{parse_configuration, render_configuration};
use thnorm_core::error::Error;
use thnorm_core::report::{
    render_bound, render_classes, render_eval, render_norm, render_verification, EvalResult,
    OutputFormat,
};
use thnorm_core::search::{
    class_table, norm_with_tables, sample_truncated, SearchMode, SearchOptions, TableKind,
};
use thnorm_core::verify::run_suite;
use thnorm_core::Rat;

#[derive(Parser)]
#[command(name = "thnorm", version, about = "exact cocycle sup-norms and simplicial-volume bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the sup-norm for n circle factors.
    Norm(NormArgs),
    /// Evaluate the cocycle on a configuration file or the regular configuration.
    Eval(EvalArgs),
    /// Turn a norm into a simplicial-volume lower bound.
    Bound(BoundArgs),
    /// Run the reproduction/identity suites.
    Verify(VerifyArgs),
    /// Dump a class table.
    Classes(ClassesArgs),
}

#[derive(Args)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: text, json, or csv.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct NormArgs {
    /// Factor count.
    #[arg(long)]
    n: usize,
    /// exhaustive, paper-fast, regular-only, or sample.
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Cache directory for class tables and sign matrices.
    #[arg(long, env = "THNORM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Maximum number of reported witnesses.
    #[arg(long, default_value_t = thnorm_core::search::DEFAULT_WITNESS_CAP)]
    witness_cap: usize,
    /// Sample mode: number of random configurations.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Sample mode: RNG seed.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Sample mode: wall-clock budget in seconds; exceeding it truncates the
    /// run (exit 3).
    #[arg(long)]
    time_budget: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct EvalArgs {
    /// Configuration file (see README for the format).
    #[arg(long, conflicts_with = "regular")]
    config: Option<PathBuf>,
    /// Evaluate the regular configuration instead of a file.
    #[arg(long, requires = "n")]
    regular: bool,
    /// Factor count for --regular.
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BoundArgs {
    /// Factor count.
    #[arg(long)]
    n: usize,
    /// Volume: a number ("1", "2.5", "7/3"), "pi^K", or "C*pi^K".
    #[arg(long, conflicts_with = "surfaces")]
    volume: Option<String>,
    /// Genera of hyperbolic surfaces; the volume becomes prod 2*pi*(2g-2).
    #[arg(long, num_args = 1.., value_name = "GENUS")]
    surfaces: Option<Vec<u32>>,
    /// Override the cocycle norm (default: built-in certified value for n <= 3).
    #[arg(long, value_name = "RAT")]
    norm: Option<String>,
    /// Significant digits in the decimal output.
    #[arg(long, default_value_t = 12)]
    digits: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// constants, identities, or all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Samples per identity check.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Seed for the identity suites.
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Maximum number of witnesses the internal searches keep.
    #[arg(long, default_value_t = thnorm_core::search::DEFAULT_WITNESS_CAP)]
    witness_cap: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ClassesArgs {
    /// Factor count.
    #[arg(long)]
    n: usize,
    /// dihedral, rotation, distinct, or stacked.
    #[arg(long, default_value = "dihedral")]
    table: String,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err.downcast_ref::<Error>() {
                Some(Error::Budget(_)) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Norm(args) => cmd_norm(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Bound(args) => cmd_bound(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Classes(args) => cmd_classes(args),
    }
}

fn init_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(t) = threads {
        if t == 0 {
            anyhow::bail!("--threads must be >= 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()?;
    }
    Ok(())
}

fn emit(output: &OutputArgs, content: &str) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => {
            let mut f = std::fs::File::create(path)?;
            f.write_all(content.as_bytes())?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_norm(args: NormArgs) -> anyhow::Result<ExitCode> {
    init_threads(args.threads)?;
    let format: OutputFormat = args.output.format.parse()?;
    let mode: SearchMode = args.mode.parse()?;
    let opts = SearchOptions {
        witness_cap: args.witness_cap,
        samples: args.samples,
        seed: args.rng_seed,
        time_budget: args.time_budget.map(std::time::Duration::from_secs_f64),
    };
    let start = Instant::now();
    let mut provider = cachedir::provider(args.cache_dir.clone());
    let report = norm_with_tables(args.n, mode, &opts, &mut provider)?;
    eprintln!(
        "norm {} for n={} ({}) in {:.3}s on {} thread(s)",
        report.norm,
        report.n,
        report.mode.as_str(),
        start.elapsed().as_secs_f64(),
        report.stats.threads
    );
    emit(&args.output, &render_norm(&report, format)?)?;
    if sample_truncated(&report) {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> anyhow::Result<ExitCode> {
    let format: OutputFormat = args.output.format.parse()?;
    let cfg: Configuration = if args.regular {
        Configuration::regular(args.n.expect("clap requires --n with --regular"))?
    } else {
        let path = args
            .config
            .ok_or_else(|| Error::Validation("need --config FILE or --regular --n K".into()))?;
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
        parse_configuration(&text)?
    };
    let value = theta_direct(&cfg)?;
    let out = EvalResult {
        n: cfg.n(),
        value,
        decimal: thnorm_core::bound::rat_decimal(&value, 12),
        configuration: render_configuration(&cfg),
    };
    emit(&args.output, &render_eval(&out, format)?)?;
    Ok(ExitCode::SUCCESS)
}

/// Certified norms for the searchable factor counts.
fn builtin_norm(n: usize) -> Option<Rat> {
    match n {
        1 => Some(Rat::integer(1)),
        2 => Some(Rat::new(2, 3).expect("constant")),
        3 => Some(Rat::new(11, 45).expect("constant")),
        _ => None,
    }
}

fn cmd_bound(args: BoundArgs) -> anyhow::Result<ExitCode> {
    let format: OutputFormat = args.output.format.parse()?;
    let norm_value = match &args.norm {
        Some(s) => s.parse::<Rat>()?,
        None => builtin_norm(args.n).ok_or_else(|| {
            Error::Validation(format!(
                "no built-in norm for n={}; pass --norm (e.g. from a norm report)",
                args.n
            ))
        })?,
    };
    let (volume, product_form): (VolumeSpec, Option<Rat>) = match (&args.volume, &args.surfaces) {
        (Some(v), None) => (parse_volume(v)?, None),
        (None, Some(genera)) => {
            let (vol, factor_norms) = surfaces_volume(genera)?;
            (vol, Some(factor_norms))
        }
        _ => {
            return Err(Error::Validation(
                "need exactly one of --volume or --surfaces".into(),
            )
            .into())
        }
    };
    let result = lower_bound(args.n, norm_value, &volume, args.digits)?;
    let mut content = render_bound(&result, format)?;
    if let (Some(factor_norms), OutputFormat::Text) = (&product_form, format) {
        // the volume prod 2pi(2g-2) makes the bound (1/v) * prod(4g-4)
        let reciprocal = Rat::new(norm_value.denom(), norm_value.numer())?;
        let total = reciprocal.checked_mul(factor_norms)?;
        content.push_str(&format!(
            "product form: {reciprocal} * prod(4g-4) = {reciprocal} * {factor_norms} = {total}\n"
        ));
    }
    emit(&args.output, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    init_threads(args.threads)?;
    let format: OutputFormat = args.output.format.parse()?;
    let start = Instant::now();
    let report = run_suite(&args.suite, args.rng_seed, args.samples, args.witness_cap)?;
    eprintln!(
        "suite {} finished in {:.3}s: {} items, {} failures",
        report.suite,
        start.elapsed().as_secs_f64(),
        report.items.len(),
        report.failures()
    );
    emit(&args.output, &render_verification(&report, format)?)?;
    if report.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn cmd_classes(args: ClassesArgs) -> anyhow::Result<ExitCode> {
    let format: OutputFormat = args.output.format.parse()?;
    let kind = match args.table.as_str() {
        "dihedral" => TableKind::Dihedral,
        "rotation" => TableKind::Rotation,
        "distinct" => TableKind::CompatDistinct,
        "stacked" => TableKind::CompatStacked,
        other => {
            return Err(Error::Validation(format!(
                "unknown table `{other}` (expected dihedral, rotation, distinct, stacked)"
            ))
            .into())
        }
    };
    let classes = class_table(args.n, kind)?;
    let name = format!("{}-{}pts", kind.as_str(), 2 * args.n + 1);
    emit(&args.output, &render_classes(&name, &classes, format)?)?;
    Ok(ExitCode::SUCCESS)
}
