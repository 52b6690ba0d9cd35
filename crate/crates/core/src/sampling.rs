//! Sampling locations for the eight randomized sensing schemes.
//!
//! All schemes work in the unit square `[0,1]^2`. Paths are built from the
//! random-walk step rule
//!
//! ```text
//! x_{t+1} = x_t + d_t cos(theta_t),  y_{t+1} = y_t + d_t sin(theta_t),  d_t ~ U(0, gamma)
//! ```
//!
//! with a fixed `theta` for straight lines and a fresh uniform angle per step
//! for walks. Directed walks are pinned to their endpoints by a linear
//! correction that is zero at the first point and equal to the full endpoint
//! miss at the last one.

use std::f64::consts::TAU;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Attempts allowed when a raw random walk keeps exiting before its second
/// sample.
pub const RANDOM_WALK_RETRIES: usize = 10_000;

/// Upper bound on the number of samples in a single raw random walk.
pub const MAX_WALK_POINTS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn in_unit_square(self) -> bool {
        (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }

    /// Bit mask of the unit-square edges this point lies on
    /// (bottom, right, top, left).
    pub fn edge_mask(self) -> u8 {
        let mut mask = 0;
        if self.y == 0.0 {
            mask |= 1;
        }
        if self.x == 1.0 {
            mask |= 2;
        }
        if self.y == 1.0 {
            mask |= 4;
        }
        if self.x == 0.0 {
            mask |= 8;
        }
        mask
    }

    pub fn on_boundary(self) -> bool {
        self.in_unit_square() && self.edge_mask() != 0
    }
}

/// True when both points lie on a common edge of the unit square.
pub fn share_edge(a: Point, b: Point) -> bool {
    a.edge_mask() & b.edge_mask() != 0
}

/// The eight sampling schemes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Static sensors at i.i.d. uniform locations; the benchmark.
    Scattered,
    /// Point samples along random boundary-to-boundary lines.
    LineBoundaryPoints,
    /// One averaged reading per boundary-to-boundary line.
    LineBoundaryAvg,
    /// One averaged reading per line between two interior points.
    LineInnerAvg,
    /// Averaged reading over a free random walk started on the boundary.
    RandomWalk,
    /// Averaged reading over a directed walk between boundary points on
    /// different edges.
    DirectedBoundary,
    /// Averaged reading over a directed walk between interior points.
    DirectedInner,
    /// Averaged reading over a closed directed walk around a hive.
    BeeHive,
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::Scattered,
        Scheme::LineBoundaryPoints,
        Scheme::LineBoundaryAvg,
        Scheme::LineInnerAvg,
        Scheme::RandomWalk,
        Scheme::DirectedBoundary,
        Scheme::DirectedInner,
        Scheme::BeeHive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Scattered => "scattered",
            Scheme::LineBoundaryPoints => "line_boundary_points",
            Scheme::LineBoundaryAvg => "line_boundary_avg",
            Scheme::LineInnerAvg => "line_inner_avg",
            Scheme::RandomWalk => "random_walk",
            Scheme::DirectedBoundary => "directed_boundary",
            Scheme::DirectedInner => "directed_inner",
            Scheme::BeeHive => "bee_hive",
        }
    }

    /// Stable small integer used in seed derivation.
    pub fn id(self) -> u64 {
        Scheme::ALL.iter().position(|&s| s == self).unwrap() as u64
    }

    /// Whether each path yields one averaged reading (as opposed to one
    /// reading per sample).
    pub fn is_averaging(self) -> bool {
        !matches!(self, Scheme::Scattered | Scheme::LineBoundaryPoints)
    }

    /// Whether a location-unaware sensing matrix is defined for the scheme.
    pub fn supports_unaware(self) -> bool {
        matches!(
            self,
            Scheme::LineBoundaryPoints
                | Scheme::LineBoundaryAvg
                | Scheme::LineInnerAvg
                | Scheme::BeeHive
        )
    }

    pub fn valid_names() -> String {
        Scheme::ALL.map(Scheme::name).join(", ")
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown scheme '{s}' (valid: {})",
                    Scheme::valid_names()
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePath {
    pub points: Vec<Point>,
    pub endpoints: Option<(Point, Point)>,
    pub hive: Option<Point>,
    pub scheme: Scheme,
}

impl SamplePath {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        self.points[self.points.len() - 1]
    }
}

/// Scheme selector plus simulation parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    /// Bandwidth; harmonics run from `-b` to `b` on each axis.
    pub b: usize,
    /// Number of sensors (scattered) or paths (every other scheme).
    pub m: usize,
    /// Upper bound of the uniform step / spacing distribution.
    pub gamma: f64,
    /// Number of samples on each directed walk.
    pub p: usize,
    pub noise_sigma: f64,
    pub location_aware: bool,
    pub seed: u64,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::Scattered,
            b: 3,
            m: 196,
            gamma: 0.05,
            p: 40,
            noise_sigma: 0.0,
            location_aware: true,
            seed: 0,
        }
    }
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, b: usize, m: usize, gamma: f64) -> Self {
        Self {
            scheme,
            b,
            m,
            gamma,
            ..Self::default()
        }
    }

    /// Checks hard constraints and returns soft warnings.
    ///
    /// For point sampling on lines the usual sizing rule is more than `2b+1`
    /// paths with on average at least `2b+1` samples each; violating it only
    /// produces a warning.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.m == 0 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must be > 0, got {}", self.gamma)));
        }
        if self.p < 2 {
            return Err(Error::Config(format!("p must be at least 2, got {}", self.p)));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::Config(format!(
                "noise_sigma must be >= 0, got {}",
                self.noise_sigma
            )));
        }
        if !self.location_aware && !self.scheme.supports_unaware() {
            return Err(Error::Config(format!(
                "location-unaware sensing is not defined for scheme {}",
                self.scheme
            )));
        }
        let mut warnings = Vec::new();
        if self.scheme == Scheme::LineBoundaryPoints {
            let side = 2 * self.b + 1;
            if self.m <= side {
                warnings.push(format!(
                    "{} paths for b = {}: want more than {side}",
                    self.m, self.b
                ));
            }
            // Mean boundary-to-boundary chord is a bit over 0.7; spacing averages gamma / 2.
            let expected_per_path = 2.0 * 0.7 / self.gamma;
            if expected_per_path < side as f64 {
                warnings.push(format!(
                    "gamma = {} gives about {expected_per_path:.1} samples per path: want at least {side}",
                    self.gamma
                ));
            }
        }
        Ok(warnings)
    }
}

pub fn sample_uniform_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    Point::new(rng.random(), rng.random())
}

/// `m` i.i.d. uniform points in the unit square.
pub fn sample_scattered<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<Point> {
    (0..m).map(|_| sample_uniform_point(rng)).collect()
}

/// A point uniform on the perimeter: one of four edges with probability 1/4,
/// then a uniform offset along it.
pub fn sample_boundary_point<R: Rng + ?Sized>(rng: &mut R) -> Point {
    let edge = rng.random_range(0..4u8);
    let s: f64 = rng.random();
    match edge {
        0 => Point::new(s, 0.0),
        1 => Point::new(1.0, s),
        2 => Point::new(s, 1.0),
        _ => Point::new(0.0, s),
    }
}

fn draw_step<R: Rng + ?Sized>(gamma: f64, rng: &mut R) -> f64 {
    rng.random::<f64>() * gamma
}

/// Samples along the segment from `b1` toward `b2` with spacings drawn from
/// `U(0, gamma)`. The path starts at `b1` and ends at the last sample that
/// does not pass `b2`; `b2` itself is not appended.
pub fn line_path<R: Rng + ?Sized>(
    b1: Point,
    b2: Point,
    gamma: f64,
    scheme: Scheme,
    rng: &mut R,
) -> Result<SamplePath> {
    if !(gamma > 0.0) {
        return Err(Error::Config(format!("gamma must be > 0, got {gamma}")));
    }
    let length = b1.dist(b2);
    if length == 0.0 {
        return Err(Error::Config("line endpoints coincide".into()));
    }
    let theta = (b2.y - b1.y).atan2(b2.x - b1.x);
    let (sin, cos) = theta.sin_cos();
    let mut points = vec![b1];
    let mut s = 0.0;
    loop {
        s += draw_step(gamma, rng);
        if s > length {
            break;
        }
        points.push(Point::new(b1.x + s * cos, b1.y + s * sin));
    }
    Ok(SamplePath {
        points,
        endpoints: Some((b1, b2)),
        hive: None,
        scheme,
    })
}

/// One attempt at a free random walk from `b1`: the walk stops at the first
/// step that would leave the unit square, and that step is discarded.
///
/// Returns `Ok(None)` when the walk exits before taking its second sample.
pub fn random_walk_attempt<R: Rng + ?Sized>(
    b1: Point,
    gamma: f64,
    rng: &mut R,
) -> Result<Option<SamplePath>> {
    if !(gamma > 0.0) {
        return Err(Error::Config(format!("gamma must be > 0, got {gamma}")));
    }
    let mut points = vec![b1];
    let mut cur = b1;
    while points.len() < MAX_WALK_POINTS {
        let d = draw_step(gamma, rng);
        let (sin, cos) = (rng.random::<f64>() * TAU).sin_cos();
        let next = Point::new(cur.x + d * cos, cur.y + d * sin);
        if !next.in_unit_square() {
            break;
        }
        points.push(next);
        cur = next;
    }
    if points.len() < 2 {
        return Ok(None);
    }
    let last = cur;
    Ok(Some(SamplePath {
        points,
        endpoints: Some((b1, last)),
        hive: None,
        scheme: Scheme::RandomWalk,
    }))
}

/// Free random walk from `b1`, restarting from a fresh boundary point when
/// the walk is too short, up to [`RANDOM_WALK_RETRIES`] attempts.
pub fn random_walk_path<R: Rng + ?Sized>(b1: Point, gamma: f64, rng: &mut R) -> Result<SamplePath> {
    let mut start = b1;
    for _ in 0..RANDOM_WALK_RETRIES {
        if let Some(path) = random_walk_attempt(start, gamma, rng)? {
            return Ok(path);
        }
        start = sample_boundary_point(rng);
    }
    Err(Error::Generation(format!(
        "random walk with gamma = {gamma} exited immediately {RANDOM_WALK_RETRIES} times"
    )))
}

/// A `p`-sample walk from `b1` bent so that it ends exactly at `b2`.
///
/// The free walk `w_1 = b1, ..., w_p` is corrected as
/// `w'_t = w_t + (t-1)/(p-1) * (b2 - w_p)`, so the first sample stays at
/// `b1` and the last lands on `b2`. Intermediate samples may leave the unit
/// square.
pub fn directed_walk<R: Rng + ?Sized>(
    b1: Point,
    b2: Point,
    p: usize,
    gamma: f64,
    scheme: Scheme,
    rng: &mut R,
) -> Result<SamplePath> {
    if p < 2 {
        return Err(Error::Config(format!("directed walk needs p >= 2, got {p}")));
    }
    if !(gamma > 0.0) {
        return Err(Error::Config(format!("gamma must be > 0, got {gamma}")));
    }
    let mut walk = Vec::with_capacity(p);
    let mut cur = b1;
    walk.push(cur);
    for _ in 1..p {
        let d = draw_step(gamma, rng);
        let (sin, cos) = (rng.random::<f64>() * TAU).sin_cos();
        cur = Point::new(cur.x + d * cos, cur.y + d * sin);
        walk.push(cur);
    }
    let miss = Point::new(b2.x - cur.x, b2.y - cur.y);
    let denom = (p - 1) as f64;
    let mut points: Vec<Point> = walk
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let f = i as f64 / denom;
            Point::new(w.x + f * miss.x, w.y + f * miss.y)
        })
        .collect();
    // Rounding in w_p + (b2 - w_p) can differ from b2 in the last ulp.
    points[p - 1] = b2;
    let hive = (scheme == Scheme::BeeHive).then_some(b1);
    Ok(SamplePath {
        points,
        endpoints: Some((b1, b2)),
        hive,
        scheme,
    })
}

fn distinct_boundary_pair<R: Rng + ?Sized>(reject_same_edge: bool, rng: &mut R) -> (Point, Point) {
    loop {
        let b1 = sample_boundary_point(rng);
        let b2 = sample_boundary_point(rng);
        if b1 == b2 || (reject_same_edge && share_edge(b1, b2)) {
            continue;
        }
        return (b1, b2);
    }
}

fn distinct_inner_pair<R: Rng + ?Sized>(rng: &mut R) -> (Point, Point) {
    loop {
        let b1 = sample_uniform_point(rng);
        let b2 = sample_uniform_point(rng);
        if b1 != b2 {
            return (b1, b2);
        }
    }
}

/// Generates the `config.m` paths of the configured scheme.
pub fn generate_paths<R: Rng + ?Sized>(config: &SchemeConfig, rng: &mut R) -> Result<Vec<SamplePath>> {
    let SchemeConfig { scheme, m, gamma, p, .. } = *config;
    if m == 0 {
        return Err(Error::Config("m must be at least 1".into()));
    }
    (0..m)
        .map(|_| match scheme {
            Scheme::Scattered => {
                let pt = sample_uniform_point(rng);
                Ok(SamplePath {
                    points: vec![pt],
                    endpoints: None,
                    hive: None,
                    scheme,
                })
            }
            Scheme::LineBoundaryPoints | Scheme::LineBoundaryAvg => {
                let (b1, b2) = distinct_boundary_pair(false, rng);
                line_path(b1, b2, gamma, scheme, rng)
            }
            Scheme::LineInnerAvg => {
                let (b1, b2) = distinct_inner_pair(rng);
                line_path(b1, b2, gamma, scheme, rng)
            }
            Scheme::RandomWalk => {
                let b1 = sample_boundary_point(rng);
                random_walk_path(b1, gamma, rng)
            }
            Scheme::DirectedBoundary => {
                let (b1, b2) = distinct_boundary_pair(true, rng);
                directed_walk(b1, b2, p, gamma, scheme, rng)
            }
            Scheme::DirectedInner => {
                let (b1, b2) = distinct_inner_pair(rng);
                directed_walk(b1, b2, p, gamma, scheme, rng)
            }
            Scheme::BeeHive => {
                let hive = sample_uniform_point(rng);
                directed_walk(hive, hive, p, gamma, scheme, rng)
            }
        })
        .collect()
}

/// Writes paths as CSV with header `path_id,t,x,y`.
pub fn write_paths_csv<W: Write>(paths: &[SamplePath], mut w: W) -> Result<()> {
    writeln!(w, "path_id,t,x,y")?;
    for (id, path) in paths.iter().enumerate() {
        for (t, pt) in path.points.iter().enumerate() {
            writeln!(w, "{id},{t},{},{}", pt.x, pt.y)?;
        }
    }
    Ok(())
}
