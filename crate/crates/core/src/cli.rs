//! Command-line front end: `paths`, `sweep`, `rank` and `plot`.
//!
//! Exit codes: 0 on success, 2 for usage or input errors, 3 for runtime
//! failures.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::field::dof;
use crate::harness::{check_bound_trend, m_for, rank_schemes, run_sweep, SweepResult, SweepSpec};
use crate::plot::{condition_plot_svg, trajectory_svg};
use crate::sampling::{generate_paths, write_paths_csv, Scheme, SchemeConfig};
use crate::seed::{derive_seed, rng_from_seed};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

const AFTER_HELP: &str = "\
Schemes: scattered, line_boundary_points, line_boundary_avg, line_inner_avg,
         random_walk, directed_boundary, directed_inner, bee_hive

Output files (all written under --out):
  paths_<scheme>.csv   path_id,t,x,y
  paths.svg            one panel per scheme
  sweep.csv            scheme,b,m,gamma,aware,mean_cond,std_cond,mean_rel_err,excluded
  cond_<scheme>.svg    mean condition number (log scale) against m

Sweep config files hold `key = value` lines (lists comma-separated, `#` comments):
  schemes, b, m (multiples of n = (2b+1)^2), gamma, aware, iterations, seed,
  noise_sigma, p, errors. Command-line flags override the file.";

#[derive(Debug, Parser)]
#[command(name = "fieldsense", version, about = "Randomized mobile sensing of 2D bandlimited fields", after_help = AFTER_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate sampling paths; write CSV and an SVG of the trajectories.
    Paths(PathsArgs),
    /// Run a condition-number sweep and write sweep.csv.
    Sweep(SweepArgs),
    /// Rank the eight schemes at one cell of a sweep CSV.
    Rank(RankArgs),
    /// Render one condition-number SVG per scheme from a sweep CSV.
    Plot(PlotArgs),
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse::<Scheme>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct PathsArgs {
    /// Schemes to generate (comma-separated); all eight when omitted.
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    pub scheme: Vec<Scheme>,
    /// Bandwidth, used only for the sizing warnings.
    #[arg(long, default_value_t = 3)]
    pub b: usize,
    /// Number of paths (sensors for `scattered`).
    #[arg(long, default_value_t = 20)]
    pub m: usize,
    /// Step bound between consecutive samples.
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    /// Samples per directed walk.
    #[arg(long, default_value_t = SchemeConfig::default().p)]
    pub p: usize,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip the SVG rendering.
    #[arg(long)]
    pub no_svg: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep config file (key = value lines).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Schemes to sweep (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    pub scheme: Vec<Scheme>,
    /// Bandwidths (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<usize>,
    /// Path counts as multiples of n = (2b+1)^2.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<f64>,
    /// Step bounds (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub gamma: Vec<f64>,
    /// Samples per directed walk.
    #[arg(long)]
    pub p: Option<usize>,
    /// Monte Carlo iterations per cell.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Standard deviation of the additive sensor noise.
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    /// Use location-unaware sensing matrices.
    #[arg(long)]
    pub unaware: bool,
    /// Also estimate the field and record the coefficient error.
    #[arg(long)]
    pub errors: bool,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Sweep CSV to read.
    #[arg(long)]
    pub input: PathBuf,
    /// Bandwidth of the cell; inferred when the CSV holds a single value.
    #[arg(long)]
    pub b: Option<usize>,
    /// Path count as a multiple of n; inferred when unique.
    #[arg(long)]
    pub m: Option<f64>,
    /// Step bound of the cell; inferred when unique.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Rank the location-unaware cells.
    #[arg(long)]
    pub unaware: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Sweep CSV to read.
    #[arg(long)]
    pub input: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Parse { .. } | Error::MissingCell(_) | Error::Field(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    let mut stdout = std::io::stdout().lock();
    match execute(&cli.command, &mut stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Runs a parsed command, writing the human-readable report to `report`.
pub fn execute<W: Write>(command: &Command, report: &mut W) -> Result<()> {
    match command {
        Command::Paths(args) => cmd_paths(args, report),
        Command::Sweep(args) => cmd_sweep(args, report).map(|_| ()),
        Command::Rank(args) => cmd_rank(args, report),
        Command::Plot(args) => cmd_plot(args, report).map(|_| ()),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

pub fn cmd_paths<W: Write>(args: &PathsArgs, report: &mut W) -> Result<()> {
    let schemes = if args.scheme.is_empty() { Scheme::ALL.to_vec() } else { args.scheme.clone() };
    let mut panels = Vec::with_capacity(schemes.len());
    for &scheme in &schemes {
        let config = SchemeConfig {
            scheme,
            b: args.b,
            m: args.m,
            gamma: args.gamma,
            p: args.p,
            seed: args.seed,
            ..SchemeConfig::default()
        };
        for w in config.validate()? {
            eprintln!("warning: {scheme}: {w}");
        }
        let mut rng = rng_from_seed(derive_seed(args.seed, &[scheme.id()]));
        let paths = generate_paths(&config, &mut rng)?;
        let samples: usize = paths.iter().map(|p| p.len()).sum();
        writeln!(report, "{scheme}: {} paths, {samples} samples", paths.len())?;
        panels.push((scheme, paths));
    }
    ensure_dir(&args.out)?;
    for (scheme, paths) in &panels {
        let file = File::create(args.out.join(format!("paths_{scheme}.csv")))?;
        let mut w = BufWriter::new(file);
        write_paths_csv(paths, &mut w)?;
        w.flush()?;
    }
    if !args.no_svg {
        fs::write(args.out.join("paths.svg"), trajectory_svg(&panels))?;
    }
    Ok(())
}

/// Builds the sweep spec from the optional config file plus flag overrides.
pub fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
            SweepSpec::from_config_str(&text)?
        }
        None => SweepSpec::default(),
    };
    if !args.scheme.is_empty() {
        spec.schemes = args.scheme.clone();
    }
    if !args.b.is_empty() {
        spec.b_values = args.b.clone();
    }
    if !args.m.is_empty() {
        spec.m_ratios = args.m.clone();
    }
    if !args.gamma.is_empty() {
        spec.gamma_values = args.gamma.clone();
    }
    if let Some(p) = args.p {
        spec.p = p;
    }
    if let Some(it) = args.iters {
        spec.iterations = it;
    }
    if let Some(seed) = args.seed {
        spec.base_seed = seed;
    }
    if let Some(sigma) = args.noise_sigma {
        spec.noise_sigma = sigma;
    }
    if args.unaware {
        spec.aware = vec![false];
    }
    if args.errors {
        spec.compute_error = true;
    }
    spec.validate()?;
    Ok(spec)
}

pub fn cmd_sweep<W: Write>(args: &SweepArgs, report: &mut W) -> Result<SweepResult> {
    let spec = sweep_spec(args)?;
    let result = run_sweep(&spec)?;
    ensure_dir(&args.out)?;
    fs::write(args.out.join("sweep.csv"), result.to_csv_string())?;
    write!(report, "{}", result.summary_table())?;
    for r in &result.records {
        if !r.is_valid() {
            eprintln!(
                "warning: {} b={} m={} gamma={} aware={}: no valid draws",
                r.scheme, r.b, r.m, r.gamma, r.aware
            );
        } else if r.excluded > 0 {
            eprintln!(
                "warning: {} b={} m={} gamma={} aware={}: {} singular draws excluded",
                r.scheme, r.b, r.m, r.gamma, r.aware, r.excluded
            );
        }
    }
    for entry in check_bound_trend(&result).entries.iter().filter(|e| e.sufficient) {
        writeln!(
            report,
            "trend {} b={} gamma={} aware={}: {}",
            entry.scheme,
            entry.b,
            entry.gamma,
            entry.aware,
            if entry.passes() { "non-increasing" } else { "VIOLATED" }
        )?;
    }
    Ok(result)
}

fn read_sweep_csv(path: &Path) -> Result<SweepResult> {
    let file = File::open(path)
        .map_err(|e| Error::Config(format!("cannot open {}: {e}", path.display())))?;
    SweepResult::read_csv(BufReader::new(file))
}

fn unique<T: PartialEq + Copy>(values: impl Iterator<Item = T>, what: &str) -> Result<T> {
    let mut found: Vec<T> = Vec::new();
    for v in values {
        if !found.contains(&v) {
            found.push(v);
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::Config(format!("no {what} values in input"))),
        _ => Err(Error::Config(format!("several {what} values in input: pass --{what}"))),
    }
}

pub fn cmd_rank<W: Write>(args: &RankArgs, report: &mut W) -> Result<()> {
    let result = read_sweep_csv(&args.input)?;
    let aware = !args.unaware;
    let b = match args.b {
        Some(b) => b,
        None => unique(result.records.iter().map(|r| r.b), "b")?,
    };
    let m = match args.m {
        Some(ratio) => m_for(b, ratio),
        None => unique(result.records.iter().filter(|r| r.b == b).map(|r| r.m), "m")?,
    };
    let gamma = match args.gamma {
        Some(g) => g,
        None => unique(result.records.iter().map(|r| r.gamma), "gamma")?,
    };
    let ranked = rank_schemes(&result, b, m, gamma, aware)?;
    writeln!(
        report,
        "ranking at b={b} m={m} (m/n = {:.2}) gamma={gamma} aware={aware}",
        m as f64 / dof(b) as f64
    )?;
    for (i, (scheme, cond)) in ranked.iter().enumerate() {
        writeln!(report, "{:>2}. {:<22} {cond:.4}", i + 1, scheme.name())?;
    }
    Ok(())
}

/// Writes `cond_<scheme>.svg` for every scheme in the CSV and returns the
/// paths written. Nothing is written if the CSV fails to parse.
pub fn cmd_plot<W: Write>(args: &PlotArgs, report: &mut W) -> Result<Vec<PathBuf>> {
    let result = read_sweep_csv(&args.input)?;
    let mut schemes: Vec<Scheme> = result.records.iter().map(|r| r.scheme).collect();
    schemes.sort();
    schemes.dedup();
    ensure_dir(&args.out)?;
    let mut written = Vec::new();
    for scheme in schemes {
        let path = args.out.join(format!("cond_{scheme}.svg"));
        fs::write(&path, condition_plot_svg(scheme, &result.records))?;
        writeln!(report, "wrote {}", path.display())?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::SWEEP_CSV_HEADER;

    #[test]
    fn help_documents_csv_schemas() {
        assert!(AFTER_HELP.contains(SWEEP_CSV_HEADER));
        assert!(AFTER_HELP.contains("path_id,t,x,y"));
    }

    #[test]
    fn bad_scheme_is_usage_error() {
        let err = Cli::try_parse_from(["fieldsense", "paths", "--scheme", "spiral"]).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_USAGE);
        assert!(err.to_string().contains("bee_hive"));
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("sweep.conf");
        fs::write(&cfg, "b = 2\niterations = 4\ngamma = 0.1\n").unwrap();
        let cli = Cli::try_parse_from([
            "fieldsense", "sweep", "--config", cfg.to_str().unwrap(), "--iters", "9", "--unaware",
        ])
        .unwrap();
        let Command::Sweep(args) = cli.command else { panic!() };
        let spec = sweep_spec(&args).unwrap();
        assert_eq!((spec.b_values.as_slice(), spec.iterations), (&[2][..], 9));
        assert_eq!(spec.gamma_values, vec![0.1]);
        assert_eq!(spec.aware, vec![false]);
    }
}
