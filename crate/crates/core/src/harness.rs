//! Monte Carlo sweeps over schemes, bandwidths, path counts and step sizes.
//!
//! Each cell of a sweep runs `iterations` independent trials. Trial seeds
//! are derived from `(base_seed, cell, iteration)`, so results do not depend
//! on the order of the spec lists or on thread scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use log::warn;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{condition_number, estimate_coefficients, measure, relative_error};
use crate::field::{dof, BandlimitedField};
use crate::sampling::{generate_paths, Scheme, SchemeConfig};
use crate::seed::{derive_seed, rng_from_seed};
use crate::sensing::build_matrix;

pub const SWEEP_CSV_HEADER: &str = "scheme,b,m,gamma,aware,mean_cond,std_cond,mean_rel_err,excluded";

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub schemes: Vec<Scheme>,
    pub b_values: Vec<usize>,
    /// Path (or sensor) counts as multiples of `n = (2b+1)^2`.
    pub m_ratios: Vec<f64>,
    pub gamma_values: Vec<f64>,
    pub aware: Vec<bool>,
    pub iterations: usize,
    pub base_seed: u64,
    pub noise_sigma: f64,
    /// Samples per directed walk.
    pub p: usize,
    /// Also estimate the field and record the coefficient error.
    pub compute_error: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            schemes: Scheme::ALL.to_vec(),
            b_values: vec![3],
            m_ratios: vec![1.5, 2.0, 4.0, 8.0],
            gamma_values: vec![0.05],
            aware: vec![true],
            iterations: 50,
            base_seed: 0,
            noise_sigma: 0.0,
            p: SchemeConfig::default().p,
            compute_error: false,
        }
    }
}

/// Number of rows (sensors or paths) for a multiple of `n`.
pub fn m_for(b: usize, ratio: f64) -> usize {
    (ratio * dof(b) as f64).round() as usize
}

fn parse_list<T>(value: &str, line: usize, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    let items: Vec<&str> = value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::parse(line, format!("{what}: empty list")));
    }
    items
        .into_iter()
        .map(|s| f(s).ok_or_else(|| Error::parse(line, format!("{what}: cannot parse '{s}'"))))
        .collect()
}

fn parse_one<T>(value: &str, line: usize, what: &str, f: impl Fn(&str) -> Option<T>) -> Result<T> {
    f(value.trim()).ok_or_else(|| Error::parse(line, format!("{what}: cannot parse '{}'", value.trim())))
}

pub(crate) fn parse_bool(s: &str) -> Option<bool> {
    match s.trim() {
        "true" | "yes" | "1" | "aware" => Some(true),
        "false" | "no" | "0" | "unaware" => Some(false),
        _ => None,
    }
}

impl SweepSpec {
    /// Parses `key = value` lines; lists are comma-separated and `#` starts
    /// a comment. Keys not present keep their defaults.
    ///
    /// Recognized keys: `schemes`, `b`, `m` (multiples of n), `gamma`,
    /// `aware`, `iterations`, `seed`, `noise_sigma`, `p`, `errors`.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::parse(line, format!("expected 'key = value', got '{content}'")))?;
            let key = key.trim();
            match key {
                "schemes" | "scheme" => {
                    spec.schemes = parse_list(value, line, key, |s| s.parse().ok())?;
                }
                "b" | "b_values" => spec.b_values = parse_list(value, line, key, |s| s.parse().ok())?,
                "m" | "m_ratios" => spec.m_ratios = parse_list(value, line, key, |s| s.parse().ok())?,
                "gamma" | "gamma_values" => {
                    spec.gamma_values = parse_list(value, line, key, |s| s.parse().ok())?;
                }
                "aware" => spec.aware = parse_list(value, line, key, parse_bool)?,
                "iterations" | "iters" => spec.iterations = parse_one(value, line, key, |s| s.parse().ok())?,
                "seed" | "base_seed" => spec.base_seed = parse_one(value, line, key, |s| s.parse().ok())?,
                "noise_sigma" => spec.noise_sigma = parse_one(value, line, key, |s| s.parse().ok())?,
                "p" => spec.p = parse_one(value, line, key, |s| s.parse().ok())?,
                "errors" | "compute_error" => spec.compute_error = parse_one(value, line, key, parse_bool)?,
                other => return Err(Error::parse(line, format!("unknown key '{other}'"))),
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str| Error::Config(format!("{name} list is empty"));
        if self.schemes.is_empty() {
            return Err(empty("schemes"));
        }
        if self.b_values.is_empty() {
            return Err(empty("b"));
        }
        if self.m_ratios.is_empty() {
            return Err(empty("m"));
        }
        if self.gamma_values.is_empty() {
            return Err(empty("gamma"));
        }
        if self.aware.is_empty() {
            return Err(empty("aware"));
        }
        if let Some(r) = self.m_ratios.iter().find(|r| !(**r >= 1.0 && r.is_finite())) {
            return Err(Error::Config(format!("m multiple {r} is below 1: need m >= n")));
        }
        if let Some(g) = self.gamma_values.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
            return Err(Error::Config(format!("gamma must be > 0, got {g}")));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if self.p < 2 {
            return Err(Error::Config(format!("p must be at least 2, got {}", self.p)));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::Config(format!("noise_sigma must be >= 0, got {}", self.noise_sigma)));
        }
        Ok(())
    }

    /// Cells in nested order: scheme, b, m, gamma, awareness.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for &scheme in &self.schemes {
            for &b in &self.b_values {
                for &ratio in &self.m_ratios {
                    for &gamma in &self.gamma_values {
                        for &aware in &self.aware {
                            cells.push(Cell { scheme, b, m: m_for(b, ratio), gamma, aware });
                        }
                    }
                }
            }
        }
        cells
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub scheme: Scheme,
    pub b: usize,
    pub m: usize,
    pub gamma: f64,
    pub aware: bool,
}

impl Cell {
    fn seed_words(&self) -> [u64; 5] {
        [
            self.scheme.id(),
            self.b as u64,
            self.m as u64,
            self.gamma.to_bits(),
            u64::from(self.aware),
        ]
    }

    /// Seed for one trial of this cell.
    pub fn trial_seed(&self, base_seed: u64, iteration: usize) -> u64 {
        let mut words = self.seed_words().to_vec();
        words.push(iteration as u64);
        derive_seed(base_seed, &words)
    }

    pub fn config(&self, spec: &SweepSpec, seed: u64) -> SchemeConfig {
        SchemeConfig {
            scheme: self.scheme,
            b: self.b,
            m: self.m,
            gamma: self.gamma,
            p: spec.p,
            noise_sigma: spec.noise_sigma,
            location_aware: self.aware,
            seed,
        }
    }
}

/// Outcome of one trial; `None` condition means the draw was excluded.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub condition_number: Option<f64>,
    pub rel_error: Option<f64>,
}

/// Runs a single trial: fresh field, fresh paths, sensing matrix, C2 and
/// (optionally) the least-squares coefficient error.
pub fn run_trial(config: &SchemeConfig, compute_error: bool) -> Result<TrialOutcome> {
    let mut rng = rng_from_seed(config.seed);
    let field = BandlimitedField::random(config.b, &mut rng);
    let paths = generate_paths(config, &mut rng)?;
    let x = build_matrix(&paths, config)?;
    let cond = condition_number(&x)?;
    if !cond.is_finite() {
        return Ok(TrialOutcome { condition_number: None, rel_error: None });
    }
    let rel_error = if compute_error {
        let g = measure(&field, &paths, config, &mut rng)?;
        match estimate_coefficients(&x, &g) {
            Ok(est) => Some(relative_error(&est, field.coeffs())),
            Err(Error::Singular { .. }) => {
                return Ok(TrialOutcome { condition_number: None, rel_error: None });
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    Ok(TrialOutcome { condition_number: Some(cond), rel_error })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellRecord {
    pub scheme: Scheme,
    pub b: usize,
    pub m: usize,
    pub gamma: f64,
    pub aware: bool,
    /// Infinite when every draw was excluded.
    pub mean_cond: f64,
    pub std_cond: f64,
    /// NaN when errors were not computed.
    pub mean_rel_err: f64,
    pub excluded: usize,
}

impl CellRecord {
    pub fn is_valid(&self) -> bool {
        self.mean_cond.is_finite()
    }

    fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.scheme,
            self.b,
            self.m,
            self.gamma,
            self.aware,
            self.mean_cond,
            self.std_cond,
            self.mean_rel_err,
            self.excluded
        )
    }
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::INFINITY, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, std)
}

fn run_cell(spec: &SweepSpec, cell: &Cell) -> CellRecord {
    let outcomes: Vec<Option<TrialOutcome>> = (0..spec.iterations)
        .into_par_iter()
        .map(|it| {
            let config = cell.config(spec, cell.trial_seed(spec.base_seed, it));
            match run_trial(&config, spec.compute_error) {
                Ok(outcome) => Some(outcome),
                Err(e) => {
                    warn!("{} b={} m={} gamma={} trial {it}: {e}", cell.scheme, cell.b, cell.m, cell.gamma);
                    None
                }
            }
        })
        .collect();
    let conds: Vec<f64> = outcomes.iter().flatten().filter_map(|o| o.condition_number).collect();
    let errs: Vec<f64> = outcomes.iter().flatten().filter_map(|o| o.rel_error).collect();
    let (mean_cond, std_cond) = mean_std(&conds);
    let mean_rel_err = if errs.is_empty() {
        f64::NAN
    } else {
        errs.iter().sum::<f64>() / errs.len() as f64
    };
    CellRecord {
        scheme: cell.scheme,
        b: cell.b,
        m: cell.m,
        gamma: cell.gamma,
        aware: cell.aware,
        mean_cond,
        std_cond,
        mean_rel_err,
        excluded: spec.iterations - conds.len(),
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub records: Vec<CellRecord>,
}

/// Runs every cell of `spec`. Cells whose scheme has no unaware sensing
/// matrix, or whose draws were all singular, come back invalid.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let records = spec
        .cells()
        .par_iter()
        .map(|cell| {
            if !cell.aware && !cell.scheme.supports_unaware() {
                return CellRecord {
                    scheme: cell.scheme,
                    b: cell.b,
                    m: cell.m,
                    gamma: cell.gamma,
                    aware: cell.aware,
                    mean_cond: f64::INFINITY,
                    std_cond: f64::NAN,
                    mean_rel_err: f64::NAN,
                    excluded: spec.iterations,
                };
            }
            run_cell(spec, cell)
        })
        .collect();
    Ok(SweepResult { records })
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{SWEEP_CSV_HEADER}")?;
        for r in &self.records {
            writeln!(w, "{}", r.csv_line())?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    /// Parses a CSV produced by [`write_csv`](Self::write_csv). An empty body
    /// is an error.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut records = Vec::new();
        let mut saw_header = false;
        for (i, line) in r.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if !saw_header {
                if line != SWEEP_CSV_HEADER {
                    return Err(Error::parse(lineno, format!("expected header '{SWEEP_CSV_HEADER}'")));
                }
                saw_header = true;
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 9 {
                return Err(Error::parse(lineno, format!("expected 9 columns, got {}", cols.len())));
            }
            let num = |idx: usize, name: &str| -> Result<f64> {
                cols[idx].parse().map_err(|_| Error::parse(lineno, format!("{name}: bad number '{}'", cols[idx])))
            };
            let int = |idx: usize, name: &str| -> Result<usize> {
                cols[idx].parse().map_err(|_| Error::parse(lineno, format!("{name}: bad integer '{}'", cols[idx])))
            };
            records.push(CellRecord {
                scheme: cols[0].parse().map_err(|e: Error| Error::parse(lineno, e.to_string()))?,
                b: int(1, "b")?,
                m: int(2, "m")?,
                gamma: num(3, "gamma")?,
                aware: parse_bool(cols[4]).ok_or_else(|| Error::parse(lineno, format!("aware: bad flag '{}'", cols[4])))?,
                mean_cond: num(5, "mean_cond")?,
                std_cond: num(6, "std_cond")?,
                mean_rel_err: num(7, "mean_rel_err")?,
                excluded: int(8, "excluded")?,
            });
        }
        if !saw_header {
            return Err(Error::parse(1, "empty CSV"));
        }
        if records.is_empty() {
            return Err(Error::parse(2, "CSV has a header but no records"));
        }
        Ok(Self { records })
    }

    pub fn find(&self, scheme: Scheme, b: usize, m: usize, gamma: f64, aware: bool) -> Option<&CellRecord> {
        self.records
            .iter()
            .find(|r| r.scheme == scheme && r.b == b && r.m == m && r.gamma == gamma && r.aware == aware)
    }

    /// Fixed-width table for terminal output.
    pub fn summary_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<22} {:>3} {:>6} {:>8} {:>6} {:>12} {:>12} {:>12} {:>5}",
            "scheme", "b", "m", "gamma", "aware", "mean_cond", "std_cond", "rel_err", "excl"
        );
        for r in &self.records {
            let _ = writeln!(
                s,
                "{:<22} {:>3} {:>6} {:>8} {:>6} {:>12.4} {:>12.4} {:>12.3e} {:>5}",
                r.scheme.name(),
                r.b,
                r.m,
                r.gamma,
                r.aware,
                r.mean_cond,
                r.std_cond,
                r.mean_rel_err,
                r.excluded
            );
        }
        s
    }
}

/// Trend of mean C2 against m for one (scheme, b, gamma, awareness) series.
#[derive(Clone, Debug, PartialEq)]
pub struct TrendEntry {
    pub scheme: Scheme,
    pub b: usize,
    pub gamma: f64,
    pub aware: bool,
    pub m_values: Vec<usize>,
    pub mean_cond: Vec<f64>,
    /// Fewer than three valid m values: no verdict.
    pub sufficient: bool,
    /// Indices `i` where the step from `m_values[i]` to `m_values[i+1]`
    /// increased by more than one standard deviation.
    pub violations: Vec<usize>,
    pub all_at_least_one: bool,
    /// Least-squares fit of `(sqrt(m) + H sqrt(n)) / (sqrt(m) - H sqrt(n))`.
    pub fitted_h: Option<f64>,
    pub fitted_curve: Vec<f64>,
}

impl TrendEntry {
    pub fn non_increasing(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn passes(&self) -> bool {
        !self.sufficient || (self.non_increasing() && self.all_at_least_one)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrendReport {
    pub entries: Vec<TrendEntry>,
}

impl TrendReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(TrendEntry::passes)
    }
}

/// Model curve for the random-matrix style bound.
pub fn bound_curve(h: f64, m: usize, n: usize) -> f64 {
    let (sm, hn) = ((m as f64).sqrt(), h * (n as f64).sqrt());
    (sm + hn) / (sm - hn)
}

fn fit_h(m_values: &[usize], conds: &[f64], n: usize) -> Option<f64> {
    let m_min = *m_values.iter().min()? as f64;
    let h_max = (m_min / n as f64).sqrt() * (1.0 - 1e-9);
    if !(h_max > 0.0) {
        return None;
    }
    let loss = |h: f64| -> f64 {
        m_values
            .iter()
            .zip(conds)
            .map(|(&m, &c)| (c - bound_curve(h, m, n)).powi(2))
            .sum()
    };
    // Coarse scan, then golden-section refinement around the best node.
    let steps = 2000;
    let (mut best, mut best_loss) = (0.0, loss(0.0));
    for i in 1..steps {
        let h = h_max * i as f64 / steps as f64;
        let l = loss(h);
        if l < best_loss {
            best = h;
            best_loss = l;
        }
    }
    let width = h_max / steps as f64;
    let (mut lo, mut hi) = ((best - width).max(0.0), (best + width).min(h_max));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if loss(a) < loss(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Groups records by (scheme, b, gamma, awareness) and checks that mean C2
/// does not grow with m by more than one standard deviation per step (the
/// larger of the two cells' deviations), and that every mean is at least 1.
pub fn check_bound_trend(result: &SweepResult) -> TrendReport {
    let mut groups: BTreeMap<(Scheme, usize, u64, bool), Vec<&CellRecord>> = BTreeMap::new();
    for r in result.records.iter().filter(|r| r.is_valid()) {
        groups.entry((r.scheme, r.b, r.gamma.to_bits(), r.aware)).or_default().push(r);
    }
    let entries = groups
        .into_iter()
        .map(|((scheme, b, gamma_bits, aware), mut recs)| {
            recs.sort_by_key(|r| r.m);
            let m_values: Vec<usize> = recs.iter().map(|r| r.m).collect();
            let mean_cond: Vec<f64> = recs.iter().map(|r| r.mean_cond).collect();
            let violations = recs
                .windows(2)
                .enumerate()
                .filter(|(_, w)| {
                    let slack = w[0].std_cond.max(w[1].std_cond);
                    w[1].mean_cond > w[0].mean_cond + slack
                })
                .map(|(i, _)| i)
                .collect();
            let n = dof(b);
            let fitted_h = fit_h(&m_values, &mean_cond, n);
            let fitted_curve = fitted_h
                .map(|h| m_values.iter().map(|&m| bound_curve(h, m, n)).collect())
                .unwrap_or_default();
            TrendEntry {
                scheme,
                b,
                gamma: f64::from_bits(gamma_bits),
                aware,
                sufficient: m_values.len() >= 3,
                all_at_least_one: mean_cond.iter().all(|&c| c >= 1.0),
                m_values,
                mean_cond,
                violations,
                fitted_h,
                fitted_curve,
            }
        })
        .collect();
    TrendReport { entries }
}

/// Schemes at one cell, sorted by ascending mean C2. Every one of the eight
/// schemes must be present; invalid cells sort last.
pub fn rank_schemes(
    result: &SweepResult,
    b: usize,
    m: usize,
    gamma: f64,
    aware: bool,
) -> Result<Vec<(Scheme, f64)>> {
    let mut ranked = Scheme::ALL
        .iter()
        .map(|&s| {
            result
                .find(s, b, m, gamma, aware)
                .map(|r| (s, r.mean_cond))
                .ok_or_else(|| Error::MissingCell(format!("{s} at b={b} m={m} gamma={gamma} aware={aware}")))
        })
        .collect::<Result<Vec<_>>>()?;
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(ranked)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(scheme: Scheme, m: usize, mean: f64, std: f64) -> CellRecord {
        CellRecord {
            scheme,
            b: 1,
            m,
            gamma: 0.1,
            aware: true,
            mean_cond: mean,
            std_cond: std,
            mean_rel_err: f64::NAN,
            excluded: 0,
        }
    }

    #[test]
    fn single_trial_bookkeeping() {
        let spec = SweepSpec {
            schemes: vec![Scheme::Scattered],
            b_values: vec![1],
            m_ratios: vec![2.0],
            iterations: 1,
            ..SweepSpec::default()
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.records.len(), 1);
        let r = &result.records[0];
        assert_eq!((r.m, r.excluded, r.std_cond), (18, 0, 0.0));
        assert!(r.mean_cond >= 1.0);
    }

    #[test]
    fn record_count_is_cartesian_product() {
        let spec = SweepSpec {
            schemes: vec![Scheme::Scattered, Scheme::RandomWalk],
            b_values: vec![1, 2],
            m_ratios: vec![1.5, 3.0],
            gamma_values: vec![0.1, 0.2],
            aware: vec![true, false],
            iterations: 2,
            ..SweepSpec::default()
        };
        let result = run_sweep(&spec).unwrap();
        assert_eq!(result.records.len(), 2 * 2 * 2 * 2 * 2);
        // Neither scheme has an unaware sensing matrix.
        assert!(result.records.iter().filter(|r| !r.aware).all(|r| !r.is_valid()));
    }

    #[test]
    fn config_parsing() {
        let text = "# demo\nschemes = scattered, bee_hive\nb = 2\nm = 1.5, 4\ngamma = 0.05,0.02\niters = 7\nseed = 42\naware = true, false\nerrors = yes\n";
        let spec = SweepSpec::from_config_str(text).unwrap();
        assert_eq!(spec.schemes, vec![Scheme::Scattered, Scheme::BeeHive]);
        assert_eq!(spec.b_values, vec![2]);
        assert_eq!(spec.m_ratios, vec![1.5, 4.0]);
        assert_eq!(spec.iterations, 7);
        assert_eq!(spec.base_seed, 42);
        assert_eq!(spec.aware, vec![true, false]);
        assert!(spec.compute_error);

        match SweepSpec::from_config_str("b = 2\nbogus = 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(SweepSpec::from_config_str("m = 0.5").is_err());
        assert!(SweepSpec::from_config_str("schemes = spiral").is_err());
    }

    #[test]
    fn csv_round_trip_and_errors() {
        let result = SweepResult {
            records: vec![record(Scheme::Scattered, 9, 2.5, 0.25), record(Scheme::BeeHive, 18, f64::INFINITY, f64::NAN)],
        };
        let text = result.to_csv_string();
        assert!(text.starts_with(SWEEP_CSV_HEADER));
        let back = SweepResult::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back.to_csv_string(), text);
        assert!(SweepResult::read_csv("".as_bytes()).is_err());
        assert!(SweepResult::read_csv(format!("{SWEEP_CSV_HEADER}\n").as_bytes()).is_err());
        let bad = format!("{SWEEP_CSV_HEADER}\nscattered,1,9,0.1,true,2,x,NaN,0\n");
        match SweepResult::read_csv(bad.as_bytes()) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("std_cond"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_series_is_non_increasing() {
        let result = SweepResult {
            records: [9, 18, 36].iter().map(|&m| record(Scheme::Scattered, m, 3.0, 0.0)).collect(),
        };
        let trend = check_bound_trend(&result);
        assert_eq!(trend.entries.len(), 1);
        assert!(trend.entries[0].non_increasing() && trend.all_pass());
    }

    #[test]
    fn trend_flags_large_increase_only() {
        let result = SweepResult {
            records: vec![
                record(Scheme::Scattered, 9, 5.0, 1.0),
                record(Scheme::Scattered, 18, 5.5, 1.0),
                record(Scheme::Scattered, 36, 9.0, 1.0),
            ],
        };
        let e = &check_bound_trend(&result).entries[0];
        assert_eq!(e.violations, vec![1]);
        assert!(!e.passes());
    }

    #[test]
    fn bound_fit_recovers_h() {
        let n = 9;
        let ms = [14, 18, 36, 72];
        let conds: Vec<f64> = ms.iter().map(|&m| bound_curve(0.6, m, n)).collect();
        let h = fit_h(&ms, &conds, n).unwrap();
        assert!((h - 0.6).abs() < 1e-6, "{h}");
    }

    #[test]
    fn ranking_requires_all_schemes() {
        let mut records: Vec<CellRecord> = Scheme::ALL
            .iter()
            .enumerate()
            .map(|(i, &s)| record(s, 18, 10.0 - i as f64, 0.0))
            .collect();
        let result = SweepResult { records: records.clone() };
        let ranked = rank_schemes(&result, 1, 18, 0.1, true).unwrap();
        assert_eq!(ranked[0].0, Scheme::BeeHive);
        assert_eq!(ranked[7].0, Scheme::Scattered);
        records.pop();
        assert!(matches!(
            rank_schemes(&SweepResult { records }, 1, 18, 0.1, true),
            Err(Error::MissingCell(_))
        ));
    }

    #[test]
    fn seeds_depend_on_cell_content_not_position() {
        let cell = Cell { scheme: Scheme::BeeHive, b: 2, m: 50, gamma: 0.05, aware: true };
        let other = Cell { gamma: 0.02, ..cell };
        assert_eq!(cell.trial_seed(1, 3), cell.trial_seed(1, 3));
        assert_ne!(cell.trial_seed(1, 3), other.trial_seed(1, 3));
        assert_ne!(cell.trial_seed(1, 3), cell.trial_seed(1, 4));
    }
}
