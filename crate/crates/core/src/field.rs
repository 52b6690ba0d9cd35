//! Bandlimited fields on the unit square.
//!
//! A field is a finite 2D Fourier series
//!
//! ```text
//! g(x, y) = sum_{k=-b..b} sum_{l=-b..b} a[k,l] exp(j 2 pi (k x + l y))
//! ```
//!
//! whose coefficients satisfy `a[-k,-l] = conj(a[k,l])`, so `g` is real.
//! Coefficients are stored row-major over `(k, l)` with `k` the outer index,
//! both running from `-b` to `b`. The sensing matrix uses the same column
//! order (see [`frequency_index`]).
//!
//! With that layout `index(-k,-l) = n - 1 - index(k,l)`, which makes the
//! symmetry check a simple reversal.

use std::f64::consts::TAU;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Number of coefficients (and real degrees of freedom) for bandwidth `b`.
pub fn dof(b: usize) -> usize {
    (2 * b + 1) * (2 * b + 1)
}

/// The `(k, l)` pairs in coefficient / column order.
pub fn frequency_index(b: usize) -> Vec<(i32, i32)> {
    let b = b as i32;
    (-b..=b)
        .flat_map(|k| (-b..=b).map(move |l| (k, l)))
        .collect()
}

/// Linear position of `(k, l)`, or `None` outside the band.
pub fn index_of(b: usize, k: i32, l: i32) -> Option<usize> {
    let bi = b as i32;
    if k.abs() > bi || l.abs() > bi {
        return None;
    }
    let side = 2 * b + 1;
    Some((k + bi) as usize * side + (l + bi) as usize)
}

/// `exp(j 2 pi f t)` for `f = -b..=b`.
pub(crate) fn harmonics(b: usize, t: f64) -> Vec<Complex64> {
    let b = b as i32;
    (-b..=b)
        .map(|f| Complex64::cis(TAU * f64::from(f) * t))
        .collect()
}

/// Evaluates the unreduced complex Fourier sum for an arbitrary coefficient
/// vector in canonical order. Used for estimated coefficients, which need not
/// be exactly conjugate-symmetric.
pub fn evaluate_series(b: usize, coeffs: &[Complex64], x: f64, y: f64) -> Complex64 {
    let side = 2 * b + 1;
    debug_assert_eq!(coeffs.len(), side * side);
    let hx = harmonics(b, x);
    let hy = harmonics(b, y);
    coeffs
        .chunks_exact(side)
        .zip(&hx)
        .map(|(row, ex)| {
            let inner: Complex64 = row.iter().zip(&hy).map(|(a, ey)| a * ey).sum();
            inner * ex
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BandlimitedField {
    b: usize,
    coeffs: Vec<Complex64>,
}

impl BandlimitedField {
    /// Relative tolerance used when validating conjugate symmetry.
    const SYMMETRY_TOL: f64 = 1e-12;

    /// Builds a field from a coefficient grid in canonical order.
    ///
    /// Fails if the grid length is not `(2b+1)^2` or the grid is not
    /// conjugate-symmetric.
    pub fn new(b: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let n = dof(b);
        if coeffs.len() != n {
            return Err(Error::Field(format!(
                "expected {n} coefficients for b = {b}, got {}",
                coeffs.len()
            )));
        }
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        for (i, c) in coeffs.iter().enumerate() {
            let mirror = coeffs[n - 1 - i].conj();
            if (c - mirror).norm() > Self::SYMMETRY_TOL * scale {
                let (k, l) = frequency_index(b)[i];
                return Err(Error::Field(format!(
                    "a[{k},{l}] = {c} is not the conjugate of a[{},{}] = {}",
                    -k,
                    -l,
                    coeffs[n - 1 - i]
                )));
            }
        }
        Ok(Self { b, coeffs })
    }

    pub fn zeros(b: usize) -> Self {
        Self {
            b,
            coeffs: vec![Complex64::new(0.0, 0.0); dof(b)],
        }
    }

    /// Draws a random field: real and imaginary parts of the independent
    /// half-grid are i.i.d. standard normal, `a[0,0]` gets a real standard
    /// normal, and the other half is filled by conjugation.
    pub fn random<R: Rng + ?Sized>(b: usize, rng: &mut R) -> Self {
        let n = dof(b);
        let center = (n - 1) / 2;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        coeffs[center] = Complex64::new(rng.sample(StandardNormal), 0.0);
        for i in center + 1..n {
            let c = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
            coeffs[i] = c;
            coeffs[n - 1 - i] = c.conj();
        }
        Self { b, coeffs }
    }

    /// Sets `a[k,l] = value` and `a[-k,-l] = conj(value)`. For `(0, 0)`
    /// only the real part is kept.
    pub fn set_pair(&mut self, k: i32, l: i32, value: Complex64) -> Result<()> {
        let i = index_of(self.b, k, l)
            .ok_or_else(|| Error::Field(format!("({k},{l}) outside band b = {}", self.b)))?;
        let n = self.coeffs.len();
        if i == n - 1 - i {
            self.coeffs[i] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[i] = value;
            self.coeffs[n - 1 - i] = value.conj();
        }
        Ok(())
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i32, l: i32) -> Option<Complex64> {
        index_of(self.b, k, l).map(|i| self.coeffs[i])
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// The unreduced complex sum; its imaginary part is rounding noise.
    pub fn evaluate_complex(&self, x: f64, y: f64) -> Complex64 {
        evaluate_series(self.b, &self.coeffs, x, y)
    }

    /// Field value at `(x, y)`. Defined on the whole plane (periodic
    /// extension), since directed walks may step outside the unit square.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.evaluate_complex(x, y).re
    }

    /// `alpha * f1 + beta * f2` for real scalars.
    pub fn linear_combination(alpha: f64, f1: &Self, beta: f64, f2: &Self) -> Result<Self> {
        if f1.b != f2.b {
            return Err(Error::Field(format!(
                "bandwidth mismatch: {} vs {}",
                f1.b, f2.b
            )));
        }
        let coeffs = f1
            .coeffs
            .iter()
            .zip(&f2.coeffs)
            .map(|(a, c)| a * alpha + c * beta)
            .collect();
        Ok(Self { b: f1.b, coeffs })
    }

    /// Writes the grid as CSV with header `k,l,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "k,l,re,im")?;
        for ((k, l), c) in frequency_index(self.b).into_iter().zip(&self.coeffs) {
            writeln!(w, "{k},{l},{},{}", c.re, c.im)?;
        }
        Ok(())
    }

    /// Reads a grid written by [`write_csv`](Self::write_csv). Rows may come
    /// in any order but every `(k, l)` in the band must appear exactly once.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let lineno = i + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 1 && line.starts_with('k')) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 4 {
                return Err(Error::parse(lineno, "expected 4 columns k,l,re,im"));
            }
            let k: i32 = cols[0].parse().map_err(|e| Error::parse(lineno, format!("k: {e}")))?;
            let l: i32 = cols[1].parse().map_err(|e| Error::parse(lineno, format!("l: {e}")))?;
            let re: f64 = cols[2].parse().map_err(|e| Error::parse(lineno, format!("re: {e}")))?;
            let im: f64 = cols[3].parse().map_err(|e| Error::parse(lineno, format!("im: {e}")))?;
            rows.push((lineno, k, l, Complex64::new(re, im)));
        }
        let side = (rows.len() as f64).sqrt().round() as usize;
        if side * side != rows.len() || side.is_multiple_of(2) {
            return Err(Error::Field(format!(
                "{} rows is not a (2b+1)^2 grid",
                rows.len()
            )));
        }
        let b = (side - 1) / 2;
        let mut coeffs = vec![None; rows.len()];
        for (lineno, k, l, c) in rows {
            let i = index_of(b, k, l)
                .ok_or_else(|| Error::parse(lineno, format!("({k},{l}) outside band b = {b}")))?;
            if coeffs[i].replace(c).is_some() {
                return Err(Error::parse(lineno, format!("duplicate entry ({k},{l})")));
            }
        }
        Self::new(b, coeffs.into_iter().map(|c| c.unwrap()).collect())
    }
}
