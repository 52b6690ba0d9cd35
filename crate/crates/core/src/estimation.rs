//! Measurements, least-squares recovery and conditioning.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::field::{evaluate_series, BandlimitedField};
use crate::sampling::{SamplePath, SchemeConfig};
use crate::sensing::SensingMatrix;

/// Below this `sigma_min / sigma_max` the least-squares problem is treated
/// as rank-deficient.
pub const RANK_TOL: f64 = 1e-10;

/// Below this `lambda_min / lambda_max` of the Gram matrix the condition
/// number is reported as infinite.
pub const GRAM_TOL: f64 = 1e-14;

/// Side of the uniform grid used for the field RMSE.
pub const RMSE_GRID: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub values: Vec<f64>,
    pub noise_sigma: f64,
}

impl Measurement {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reads the field along `paths`, adding i.i.d. `N(0, noise_sigma^2)` noise
/// to every raw reading. Averaging schemes report the mean of the noisy
/// readings of each path; point schemes report every reading.
pub fn measure<R: Rng + ?Sized>(
    field: &BandlimitedField,
    paths: &[SamplePath],
    config: &SchemeConfig,
    rng: &mut R,
) -> Result<Measurement> {
    let noise = if config.noise_sigma > 0.0 {
        Some(Normal::new(0.0, config.noise_sigma).map_err(|e| Error::Config(e.to_string()))?)
    } else {
        None
    };
    let mut read = |x: f64, y: f64| {
        let w = noise.as_ref().map_or(0.0, |n| n.sample(rng));
        field.evaluate(x, y) + w
    };
    let values = if config.scheme.is_averaging() {
        paths
            .iter()
            .map(|p| {
                let sum: f64 = p.points.iter().map(|pt| read(pt.x, pt.y)).sum();
                sum / p.len() as f64
            })
            .collect()
    } else {
        paths
            .iter()
            .flat_map(|p| p.points.iter())
            .map(|pt| read(pt.x, pt.y))
            .collect()
    };
    Ok(Measurement {
        values,
        noise_sigma: config.noise_sigma,
    })
}

/// Hermitian Gram matrix `X* X`, filling the upper triangle and mirroring.
pub fn gram(x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = x.ncols();
    let cols: Vec<&[Complex64]> = (0..n)
        .map(|j| {
            let start = j * x.nrows();
            &x.as_slice()[start..start + x.nrows()]
        })
        .collect();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let dot: Complex64 = cols[i]
                .iter()
                .zip(cols[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
            g[(i, j)] = dot;
            g[(j, i)] = dot.conj();
        }
        g[(i, i)].im = 0.0;
    }
    g
}

/// `C2(X) = sqrt(lambda_max(X*X) / lambda_min(X*X))`.
///
/// Works on the `n x n` Gram matrix rather than on `X`. Returns
/// `f64::INFINITY` when the Gram matrix is numerically singular.
pub fn condition_number(x: &SensingMatrix) -> Result<f64> {
    condition_number_of(x.entries())
}

pub fn condition_number_of(x: &DMatrix<Complex64>) -> Result<f64> {
    let eig = gram(x).symmetric_eigenvalues();
    let max = eig.max();
    let min = eig.min();
    if !(max > 0.0) {
        return Err(Error::Dimension("condition number of a zero matrix".into()));
    }
    if min <= GRAM_TOL * max {
        return Ok(f64::INFINITY);
    }
    Ok((max / min).sqrt().max(1.0))
}

/// Least-squares estimate `(X*X)^-1 X* g`, computed through a QR
/// factorization of `X`.
pub fn estimate_coefficients(x: &SensingMatrix, g: &Measurement) -> Result<Vec<Complex64>> {
    let (m, n) = (x.rows(), x.cols());
    if g.len() != m {
        return Err(Error::Dimension(format!(
            "{} measurements for a {m}-row sensing matrix",
            g.len()
        )));
    }
    if m < n {
        return Err(Error::Underdetermined { rows: m, cols: n });
    }
    let qr = x.entries().clone().qr();
    let r = qr.r();
    // R shares its singular values with X.
    let sv = r.singular_values();
    let ratio = sv.min() / sv.max();
    if !(ratio >= RANK_TOL) {
        return Err(Error::Singular { ratio });
    }
    let rhs = DVector::from_iterator(m, g.values.iter().map(|&v| Complex64::new(v, 0.0)));
    let qtg = qr.q().ad_mul(&rhs);
    let sol = r
        .solve_upper_triangular(&qtg)
        .ok_or(Error::Singular { ratio })?;
    Ok(sol.iter().copied().collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub coeff_estimate: Vec<Complex64>,
    pub condition_number: f64,
    pub coeff_rel_error: f64,
    pub field_rmse: f64,
}

impl EstimateReport {
    pub const CSV_HEADER: &'static str =
        "scheme,b,m,gamma,aware,noise_sigma,cond,rel_err,rmse,seed";

    pub fn csv_row(&self, config: &SchemeConfig) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            config.scheme,
            config.b,
            config.m,
            config.gamma,
            config.location_aware,
            config.noise_sigma,
            self.condition_number,
            self.coeff_rel_error,
            self.field_rmse,
            config.seed
        );
        s
    }
}

/// Relative l2 distance between two coefficient vectors.
pub fn relative_error(estimate: &[Complex64], truth: &[Complex64]) -> f64 {
    let num: f64 = estimate
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = truth.iter().map(|a| a.norm_sqr()).sum();
    (num / den).sqrt()
}

/// RMSE between `field` and the series defined by `estimate`, over a
/// uniform `RMSE_GRID x RMSE_GRID` grid on the unit square.
pub fn field_rmse(field: &BandlimitedField, estimate: &[Complex64]) -> f64 {
    let b = field.b();
    let mut total = 0.0;
    for i in 0..RMSE_GRID {
        for j in 0..RMSE_GRID {
            let x = i as f64 / RMSE_GRID as f64;
            let y = j as f64 / RMSE_GRID as f64;
            let diff = evaluate_series(b, estimate, x, y).re - field.evaluate(x, y);
            total += diff * diff;
        }
    }
    (total / (RMSE_GRID * RMSE_GRID) as f64).sqrt()
}

/// Estimates the coefficients and scores them against the true field.
pub fn reconstruct_and_score(
    field: &BandlimitedField,
    x: &SensingMatrix,
    g: &Measurement,
) -> Result<EstimateReport> {
    if x.b() != field.b() {
        return Err(Error::Dimension(format!(
            "sensing matrix for b = {} but field has b = {}",
            x.b(),
            field.b()
        )));
    }
    let coeff_estimate = estimate_coefficients(x, g)?;
    Ok(EstimateReport {
        condition_number: condition_number(x)?,
        coeff_rel_error: relative_error(&coeff_estimate, field.coeffs()),
        field_rmse: field_rmse(field, &coeff_estimate),
        coeff_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::frequency_index;
    use crate::sampling::{generate_paths, Point, Scheme};
    use crate::sensing::{build_matrix, point_row, MatrixKind};
    use crate::seed::rng_from_seed;

    fn grid_matrix(b: usize) -> SensingMatrix {
        let side = 2 * b + 1;
        let rows: Vec<_> = (0..side)
            .flat_map(|i| (0..side).map(move |j| (i, j)))
            .map(|(i, j)| point_row(Point::new(i as f64 / side as f64, j as f64 / side as f64), b))
            .collect();
        SensingMatrix::from_rows(&rows, b, MatrixKind::PointExact).unwrap()
    }

    #[test]
    fn unitary_and_diagonal_condition_numbers() {
        let unitary = DMatrix::<Complex64>::identity(4, 4);
        assert!((condition_number_of(&unitary).unwrap() - 1.0).abs() < 1e-12);
        let mut diag = DMatrix::<Complex64>::zeros(2, 2);
        diag[(0, 0)] = Complex64::new(2.0, 0.0);
        diag[(1, 1)] = Complex64::new(1.0, 0.0);
        assert!((condition_number_of(&diag).unwrap() - 2.0).abs() < 1e-12);
        assert!(condition_number_of(&DMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn rank_deficient_gram_is_infinite() {
        let mut x = DMatrix::<Complex64>::zeros(3, 2);
        x[(0, 0)] = Complex64::new(1.0, 0.0);
        x[(1, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(condition_number_of(&x).unwrap(), f64::INFINITY);
    }

    #[test]
    fn grid_sampling_is_orthogonal() {
        for b in 1..=3 {
            let x = grid_matrix(b);
            let m = x.rows() as f64;
            let g = gram(x.entries());
            for i in 0..x.cols() {
                for j in 0..x.cols() {
                    let expected = if i == j { m } else { 0.0 };
                    assert!((g[(i, j)] - Complex64::new(expected, 0.0)).norm() < 1e-10);
                }
            }
            assert!((condition_number(&x).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn grid_estimate_is_scaled_adjoint() {
        let b = 2;
        let x = grid_matrix(b);
        let field = BandlimitedField::random(b, &mut rng_from_seed(1));
        let g = Measurement {
            values: x.apply(field.coeffs()).unwrap().iter().map(|z| z.re).collect(),
            noise_sigma: 0.0,
        };
        let est = estimate_coefficients(&x, &g).unwrap();
        let m = x.rows() as f64;
        for (r, e) in est.iter().enumerate() {
            let adj: Complex64 = (0..x.rows())
                .map(|q| x.entries()[(q, r)].conj() * g.values[q])
                .sum::<Complex64>()
                / m;
            assert!((e - adj).norm() < 1e-12);
        }
        assert!(relative_error(&est, field.coeffs()) < 1e-12);
    }

    #[test]
    fn underdetermined_and_mismatched_inputs() {
        let rows = vec![point_row(Point::new(0.1, 0.2), 1); 4];
        let x = SensingMatrix::from_rows(&rows, 1, MatrixKind::PointExact).unwrap();
        let g = Measurement { values: vec![0.0; 4], noise_sigma: 0.0 };
        assert!(matches!(estimate_coefficients(&x, &g), Err(Error::Underdetermined { .. })));
        let g = Measurement { values: vec![0.0; 3], noise_sigma: 0.0 };
        assert!(matches!(estimate_coefficients(&x, &g), Err(Error::Dimension(_))));
    }

    #[test]
    fn repeated_rows_are_singular() {
        let rows = vec![point_row(Point::new(0.1, 0.2), 1); 20];
        let x = SensingMatrix::from_rows(&rows, 1, MatrixKind::PointExact).unwrap();
        let g = Measurement { values: vec![1.0; 20], noise_sigma: 0.0 };
        assert!(matches!(estimate_coefficients(&x, &g), Err(Error::Singular { .. })));
    }

    #[test]
    fn constant_field_measures_constant() {
        let mut field = BandlimitedField::zeros(2);
        field.set_pair(0, 0, Complex64::new(3.5, 0.0)).unwrap();
        let mut rng = rng_from_seed(2);
        for scheme in [Scheme::DirectedInner, Scheme::LineBoundaryAvg, Scheme::Scattered] {
            let cfg = SchemeConfig::new(scheme, 2, 20, 0.05);
            let paths = generate_paths(&cfg, &mut rng).unwrap();
            let g = measure(&field, &paths, &cfg, &mut rng).unwrap();
            assert!(g.values.iter().all(|v| (v - 3.5).abs() < 1e-12));
        }
    }

    #[test]
    fn noiseless_point_readings_match_evaluate() {
        let mut rng = rng_from_seed(3);
        let field = BandlimitedField::random(2, &mut rng);
        let cfg = SchemeConfig::new(Scheme::LineBoundaryPoints, 2, 8, 0.1);
        let paths = generate_paths(&cfg, &mut rng).unwrap();
        let g = measure(&field, &paths, &cfg, &mut rng).unwrap();
        let expected: Vec<f64> = paths
            .iter()
            .flat_map(|p| p.points.iter())
            .map(|pt| field.evaluate(pt.x, pt.y))
            .collect();
        assert_eq!(g.values, expected);
    }

    #[test]
    fn averaging_divides_noise_variance() {
        let field = BandlimitedField::zeros(1);
        let mut cfg = SchemeConfig::new(Scheme::DirectedInner, 1, 1, 0.05);
        cfg.p = 16;
        cfg.noise_sigma = 2.0;
        let mut rng = rng_from_seed(4);
        let trials = 10_000;
        let values: Vec<f64> = (0..trials)
            .map(|_| {
                let paths = generate_paths(&cfg, &mut rng).unwrap();
                measure(&field, &paths, &cfg, &mut rng).unwrap().values[0]
            })
            .collect();
        let mean = values.iter().sum::<f64>() / trials as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let expected = 4.0 / 16.0;
        assert!((var / expected - 1.0).abs() < 0.1, "variance {var}");
    }

    #[test]
    fn noiseless_recovery_and_noisy_rmse() {
        let mut rng = rng_from_seed(5);
        let field = BandlimitedField::random(2, &mut rng);
        let mut cfg = SchemeConfig::new(Scheme::Scattered, 2, 100, 0.05);
        let paths = generate_paths(&cfg, &mut rng).unwrap();
        let x = build_matrix(&paths, &cfg).unwrap();
        let g = measure(&field, &paths, &cfg, &mut rng).unwrap();
        let report = reconstruct_and_score(&field, &x, &g).unwrap();
        assert!(report.coeff_rel_error <= 1e-8);
        assert!(report.field_rmse <= 1e-8);
        assert!(report.condition_number >= 1.0);

        cfg.noise_sigma = 0.1;
        let g = measure(&field, &paths, &cfg, &mut rng).unwrap();
        let noisy = reconstruct_and_score(&field, &x, &g).unwrap();
        assert!(noisy.field_rmse > 0.0);
        let row = noisy.csv_row(&cfg);
        assert_eq!(row.split(',').count(), EstimateReport::CSV_HEADER.split(',').count());
        assert!(row.starts_with("scattered,2,100,0.05,true,0.1,"));
        assert_eq!(frequency_index(2).len(), noisy.coeff_estimate.len());
    }
}
