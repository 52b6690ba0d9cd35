//! Complex sensing matrices.
//!
//! Column `r` corresponds to the harmonic `(k_r, l_r)` in the order of
//! [`frequency_index`]. A point row holds the phasors
//! `exp(j 2 pi (k_r x + l_r y))`; an averaged row is the mean of the point
//! rows along a path.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{dof, frequency_index, harmonics};
use crate::sampling::{Point, SamplePath, Scheme, SchemeConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// One phasor row per sample at its true location.
    PointExact,
    /// One row per path: the mean phasor over the true sample locations.
    PathAveraged,
    /// Point rows at equispaced locations between the path endpoints.
    PointUnaware,
    /// Averaged rows over equispaced locations between the path endpoints.
    AveragedUnaware,
    /// One point row at each hive center.
    HiveUnaware,
}

#[derive(Clone, Debug)]
pub struct SensingMatrix {
    entries: DMatrix<Complex64>,
    b: usize,
    kind: MatrixKind,
}

impl SensingMatrix {
    /// Stacks rows into a matrix. Every row must have `(2b+1)^2` entries.
    pub fn from_rows(rows: &[Vec<Complex64>], b: usize, kind: MatrixKind) -> Result<Self> {
        let n = dof(b);
        if rows.is_empty() {
            return Err(Error::Dimension("sensing matrix needs at least one row".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row of length {} for b = {b} (expected {n})",
                bad.len()
            )));
        }
        let entries = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        Ok(Self { entries, b, kind })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn column_index(&self) -> Vec<(i32, i32)> {
        frequency_index(self.b)
    }

    /// `X a` for a coefficient vector in canonical order.
    pub fn apply(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if coeffs.len() != self.cols() {
            return Err(Error::Dimension(format!(
                "{} coefficients for {} columns",
                coeffs.len(),
                self.cols()
            )));
        }
        Ok((0..self.rows())
            .map(|i| {
                self.entries
                    .row(i)
                    .iter()
                    .zip(coeffs)
                    .map(|(x, a)| x * a)
                    .sum()
            })
            .collect())
    }

    /// Writes the matrix as CSV with header `row,col,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "row,col,re,im")?;
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let z = self.entries[(i, j)];
                writeln!(w, "{i},{j},{},{}", z.re, z.im)?;
            }
        }
        Ok(())
    }
}

fn accumulate_point(acc: &mut [Complex64], pt: Point, b: usize) {
    let hx = harmonics(b, pt.x);
    let hy = harmonics(b, pt.y);
    let side = hy.len();
    for (chunk, ex) in acc.chunks_exact_mut(side).zip(&hx) {
        for (slot, ey) in chunk.iter_mut().zip(&hy) {
            *slot += ex * ey;
        }
    }
}

/// Phasor row for a single sample location.
pub fn point_row(pt: Point, b: usize) -> Vec<Complex64> {
    let mut row = vec![Complex64::new(0.0, 0.0); dof(b)];
    accumulate_point(&mut row, pt, b);
    row
}

/// Mean phasor row over a set of locations.
pub fn averaged_row_of(points: &[Point], b: usize) -> Result<Vec<Complex64>> {
    if points.is_empty() {
        return Err(Error::Dimension("cannot average over an empty path".into()));
    }
    if let [single] = points {
        return Ok(point_row(*single, b));
    }
    let mut row = vec![Complex64::new(0.0, 0.0); dof(b)];
    for &pt in points {
        accumulate_point(&mut row, pt, b);
    }
    let inv = 1.0 / points.len() as f64;
    row.iter_mut().for_each(|z| *z *= inv);
    Ok(row)
}

pub fn averaged_row(path: &SamplePath, b: usize) -> Result<Vec<Complex64>> {
    averaged_row_of(&path.points, b)
}

/// `p` equispaced locations from `b1` (t = 0) to `b2` (t = p-1): the best
/// guess at sample positions when only the endpoints and the sample count
/// are known.
pub fn unaware_locations(b1: Point, b2: Point, p: usize) -> Result<Vec<Point>> {
    if p < 2 {
        return Err(Error::Config(format!(
            "equispaced approximation needs p >= 2, got {p}"
        )));
    }
    let denom = (p - 1) as f64;
    Ok((0..p)
        .map(|t| {
            let f = t as f64 / denom;
            Point::new(
                b1.x * (1.0 - f) + b2.x * f,
                b1.y * (1.0 - f) + b2.y * f,
            )
        })
        .collect())
}

/// Approximate locations for an unaware path. A single reading can only
/// have been taken at the start point.
fn approximate_path(path: &SamplePath) -> Result<Vec<Point>> {
    let (b1, b2) = path.endpoints.ok_or_else(|| {
        Error::Config(format!(
            "location-unaware {} path carries no endpoint metadata",
            path.scheme
        ))
    })?;
    match path.len() {
        0 => Err(Error::Dimension("empty path".into())),
        1 => Ok(vec![b1]),
        p => unaware_locations(b1, b2, p),
    }
}

/// Assembles the sensing matrix for `paths` under `config`.
///
/// Location-aware: point rows for the scattered and line-point schemes,
/// one averaged row per path otherwise. Location-unaware: line schemes use
/// the equispaced approximation in place of the true sample locations;
/// the bee-and-hive scheme uses a point row at each hive.
pub fn build_matrix(paths: &[SamplePath], config: &SchemeConfig) -> Result<SensingMatrix> {
    if paths.is_empty() {
        return Err(Error::Dimension("no paths to build a sensing matrix from".into()));
    }
    let b = config.b;
    let scheme = config.scheme;
    if config.location_aware {
        if scheme.is_averaging() {
            let rows = paths
                .iter()
                .map(|p| averaged_row(p, b))
                .collect::<Result<Vec<_>>>()?;
            return SensingMatrix::from_rows(&rows, b, MatrixKind::PathAveraged);
        }
        let rows: Vec<_> = paths
            .iter()
            .flat_map(|p| p.points.iter().map(|&pt| point_row(pt, b)))
            .collect();
        return SensingMatrix::from_rows(&rows, b, MatrixKind::PointExact);
    }

    match scheme {
        Scheme::LineBoundaryPoints => {
            let mut rows = Vec::new();
            for path in paths {
                rows.extend(approximate_path(path)?.into_iter().map(|pt| point_row(pt, b)));
            }
            SensingMatrix::from_rows(&rows, b, MatrixKind::PointUnaware)
        }
        Scheme::LineBoundaryAvg | Scheme::LineInnerAvg => {
            let rows = paths
                .iter()
                .map(|p| averaged_row_of(&approximate_path(p)?, b))
                .collect::<Result<Vec<_>>>()?;
            SensingMatrix::from_rows(&rows, b, MatrixKind::AveragedUnaware)
        }
        Scheme::BeeHive => {
            let rows = paths
                .iter()
                .map(|p| {
                    p.hive.map(|h| point_row(h, b)).ok_or_else(|| {
                        Error::Config("bee-and-hive path carries no hive center".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            SensingMatrix::from_rows(&rows, b, MatrixKind::HiveUnaware)
        }
        other => Err(Error::Config(format!(
            "location-unaware sensing is not defined for scheme {other}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{generate_paths, line_path};
    use crate::seed::rng_from_seed;
    use std::f64::consts::TAU;

    #[test]
    fn origin_row_is_all_ones() {
        for b in 0..4 {
            let row = point_row(Point::new(0.0, 0.0), b);
            assert_eq!(row.len(), dof(b));
            assert!(row.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
        }
    }

    #[test]
    fn half_shift_row_alternates_in_k() {
        let row = point_row(Point::new(0.5, 0.0), 1);
        for ((k, _), z) in frequency_index(1).into_iter().zip(row) {
            let expected = if k == 0 { 1.0 } else { -1.0 };
            assert!((z - Complex64::new(expected, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn point_rows_have_unit_modulus() {
        let row = point_row(Point::new(0.123, 0.987), 5);
        assert!(row.iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn single_point_average_is_point_row() {
        let pt = Point::new(0.3, 0.4);
        assert_eq!(averaged_row_of(&[pt], 2).unwrap(), point_row(pt, 2));
    }

    #[test]
    fn opposite_phasors_cancel() {
        let row = averaged_row_of(&[Point::new(0.0, 0.0), Point::new(0.5, 0.0)], 1).unwrap();
        let col = crate::field::index_of(1, 1, 0).unwrap();
        assert!(row[col].norm() < 1e-15);
        assert!(averaged_row_of(&[], 1).is_err());
    }

    #[test]
    fn averaged_rows_are_contractions() {
        let mut rng = rng_from_seed(3);
        let cfg = SchemeConfig::new(Scheme::DirectedInner, 3, 30, 0.05);
        let paths = generate_paths(&cfg, &mut rng).unwrap();
        let x = build_matrix(&paths, &cfg).unwrap();
        assert_eq!(x.kind(), MatrixKind::PathAveraged);
        assert!(x.entries().iter().all(|z| z.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn equispaced_locations() {
        let (a, b) = (Point::new(0.0, 0.0), Point::new(1.0, 0.0));
        let pts = unaware_locations(a, b, 3).unwrap();
        assert_eq!(pts, vec![a, Point::new(0.5, 0.0), b]);
        let (c, d) = (Point::new(0.1, 0.7), Point::new(0.8, 0.2));
        let pts = unaware_locations(c, d, 17).unwrap();
        assert_eq!(pts[0], c);
        assert_eq!(pts[16], d);
        let gaps: Vec<f64> = pts.windows(2).map(|w| w[0].dist(w[1])).collect();
        assert!(gaps.iter().all(|g| (g - gaps[0]).abs() < 1e-15));
        assert!(unaware_locations(c, d, 1).is_err());
    }

    #[test]
    fn matrix_shapes() {
        let mut rng = rng_from_seed(4);
        let cfg = SchemeConfig::new(Scheme::Scattered, 2, 40, 0.05);
        let x = build_matrix(&generate_paths(&cfg, &mut rng).unwrap(), &cfg).unwrap();
        assert_eq!((x.rows(), x.cols(), x.kind()), (40, 25, MatrixKind::PointExact));

        let cfg = SchemeConfig::new(Scheme::LineBoundaryAvg, 2, 40, 0.05);
        let x = build_matrix(&generate_paths(&cfg, &mut rng).unwrap(), &cfg).unwrap();
        assert_eq!((x.rows(), x.cols(), x.kind()), (40, 25, MatrixKind::PathAveraged));

        let cfg = SchemeConfig::new(Scheme::LineBoundaryPoints, 2, 10, 0.05);
        let paths = generate_paths(&cfg, &mut rng).unwrap();
        let total: usize = paths.iter().map(SamplePath::len).sum();
        let x = build_matrix(&paths, &cfg).unwrap();
        assert_eq!(x.rows(), total);
        let mut unaware = cfg.clone();
        unaware.location_aware = false;
        let xu = build_matrix(&paths, &unaware).unwrap();
        assert_eq!((xu.rows(), xu.kind()), (total, MatrixKind::PointUnaware));
    }

    #[test]
    fn unaware_requires_supported_scheme_and_metadata() {
        let mut rng = rng_from_seed(5);
        let mut cfg = SchemeConfig::new(Scheme::DirectedInner, 2, 5, 0.05);
        let paths = generate_paths(&cfg, &mut rng).unwrap();
        cfg.location_aware = false;
        assert!(matches!(build_matrix(&paths, &cfg), Err(Error::Config(_))));

        let mut cfg = SchemeConfig::new(Scheme::LineInnerAvg, 2, 5, 0.05);
        let mut paths = generate_paths(&cfg, &mut rng).unwrap();
        paths[2].endpoints = None;
        cfg.location_aware = false;
        assert!(matches!(build_matrix(&paths, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn hive_rows_equal_scattered_rows_at_centers() {
        let mut rng = rng_from_seed(6);
        let mut cfg = SchemeConfig::new(Scheme::BeeHive, 3, 60, 0.05);
        cfg.location_aware = false;
        let paths = generate_paths(&cfg, &mut rng).unwrap();
        let hive = build_matrix(&paths, &cfg).unwrap();
        let centers: Vec<SamplePath> = paths
            .iter()
            .map(|p| SamplePath {
                points: vec![p.hive.unwrap()],
                endpoints: None,
                hive: None,
                scheme: Scheme::Scattered,
            })
            .collect();
        let scattered_cfg = SchemeConfig::new(Scheme::Scattered, 3, 60, 0.05);
        let scattered = build_matrix(&centers, &scattered_cfg).unwrap();
        assert_eq!(hive.entries(), scattered.entries());
    }

    /// Mean of `exp(j 2 pi (k x + l y))` along the segment, by dense midpoint quadrature.
    fn segment_mean(a: Point, b: Point, k: i32, l: i32) -> Complex64 {
        let nodes = 200_000;
        (0..nodes)
            .map(|i| {
                let s = (i as f64 + 0.5) / nodes as f64;
                let x = a.x + s * (b.x - a.x);
                let y = a.y + s * (b.y - a.y);
                Complex64::cis(TAU * (f64::from(k) * x + f64::from(l) * y))
            })
            .sum::<Complex64>()
            / nodes as f64
    }

    #[test]
    fn aware_average_converges_to_unaware_as_gamma_shrinks() {
        let (a, b) = (Point::new(0.0, 0.2), Point::new(1.0, 0.9));
        let band = 2;
        let reference: Vec<Complex64> = frequency_index(band)
            .into_iter()
            .map(|(k, l)| segment_mean(a, b, k, l))
            .collect();
        let trials = 200;
        let mut rng = rng_from_seed(7);
        let discrepancy: Vec<f64> = [0.05, 0.01, 0.002]
            .into_iter()
            .map(|gamma| {
                let mut total = 0.0;
                for _ in 0..trials {
                    let path = line_path(a, b, gamma, Scheme::LineInnerAvg, &mut rng).unwrap();
                    let aware = averaged_row(&path, band).unwrap();
                    let unaware = averaged_row_of(&unaware_locations(a, b, path.len()).unwrap(), band).unwrap();
                    // Both should approach the continuous segment mean; compare them to each other.
                    let gap = aware
                        .iter()
                        .zip(&unaware)
                        .map(|(x, y)| (x - y).norm())
                        .fold(0.0, f64::max);
                    total += gap;
                }
                total / trials as f64
            })
            .collect();
        assert!(discrepancy[0] > discrepancy[1] && discrepancy[1] > discrepancy[2], "{discrepancy:?}");
        // The unaware row for a dense path sits on the quadrature reference.
        let dense = unaware_locations(a, b, 5000).unwrap();
        let row = averaged_row_of(&dense, band).unwrap();
        let err = row.iter().zip(&reference).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }
}
