//! Normalized harmonic-oscillator eigenfunctions (Hermite functions).
//!
//! `phi_n(x) = (2^n n! sqrt(pi))^{-1/2} exp(-x^2/2) H_n(x)` with `m = hbar = omega = 1`.
//! The bare polynomial `H_n` overflows long before the weighted function does, so
//! everything here runs the normalized three-term recurrence
//!
//! ```text
//! phi_{n+1} = sqrt(2/(n+1)) x phi_n - sqrt(n/(n+1)) phi_{n-1}
//! ```
//!
//! on a mantissa with a separately tracked logarithmic scale. The Gaussian factor
//! starts in the scale, so points where `exp(-x^2/2)` alone would underflow still
//! produce correct values once the recurrence has grown the mantissa back.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;
const RESCALE_LOG: f64 = 345.387_763_949_606_9; // 150 ln 10

/// Default cap on `(n_max + 2) * grid.len()` for [`build_basis_table`].
pub const DEFAULT_TABLE_CAP: usize = 64 * 1024 * 1024;

/// Runs the recurrence from 0 through `n_top` at `x`, handing each value to `visit`.
fn run_recurrence(n_top: usize, x: f64, mut visit: impl FnMut(usize, f64)) {
    let mut log_scale = -0.5 * x * x - 0.25 * PI.ln();
    let mut factor = log_scale.exp();
    let mut prev = 0.0;
    let mut cur = 1.0;
    visit(0, cur * factor);
    for k in 0..n_top {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            prev *= RESCALE_BY;
            log_scale += RESCALE_LOG;
            factor = log_scale.exp();
        }
        visit(k + 1, cur * factor);
    }
}

/// Oscillator eigenfunction `phi_n(x)`.
pub fn hermite_fn(n: usize, x: f64) -> f64 {
    let mut out = 0.0;
    run_recurrence(n, x, |k, v| {
        if k == n {
            out = v;
        }
    });
    out
}

/// `phi_0(x), ..., phi_{n_top}(x)` from one pass of the recurrence.
pub fn hermite_fns(n_top: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_top + 1];
    run_recurrence(n_top, x, |k, v| out[k] = v);
    out
}

/// `phi_n'(x)` from the ladder identity
/// `phi_n' = sqrt(n/2) phi_{n-1} - sqrt((n+1)/2) phi_{n+1}`.
pub fn hermite_fn_derivative(n: usize, x: f64) -> f64 {
    let mut below = 0.0;
    let mut above = 0.0;
    run_recurrence(n + 1, x, |k, v| {
        if k + 1 == n {
            below = v;
        } else if k == n + 1 {
            above = v;
        }
    });
    let nf = n as f64;
    (nf / 2.0).sqrt() * below - ((nf + 1.0) / 2.0).sqrt() * above
}

/// Eigenfunction values and first derivatives for `n = 0..=n_max` sampled on a grid.
///
/// Rows are indexed by `n`, columns by grid point. Immutable once built.
#[derive(Debug, Clone)]
pub struct BasisTable {
    n_max: usize,
    points: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl BasisTable {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn cols(&self) -> usize {
        self.points.len()
    }

    pub fn values(&self, n: usize) -> &[f64] {
        let m = self.cols();
        &self.values[n * m..(n + 1) * m]
    }

    pub fn derivs(&self, n: usize) -> &[f64] {
        let m = self.cols();
        &self.derivs[n * m..(n + 1) * m]
    }

    /// True when the table was sampled on exactly this grid.
    pub fn matches(&self, grid: &Grid) -> bool {
        self.points.as_slice() == grid.points()
    }
}

pub fn build_basis_table(n_max: usize, grid: &Grid) -> Result<BasisTable> {
    build_basis_table_capped(n_max, grid, DEFAULT_TABLE_CAP)
}

pub fn build_basis_table_capped(n_max: usize, grid: &Grid, cap: usize) -> Result<BasisTable> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("basis table needs a non-empty grid".into()));
    }
    let rows = n_max + 2;
    let cols = grid.len();
    if rows.saturating_mul(cols) > cap {
        return Err(Error::ResourceLimit { rows, cols, cap });
    }

    // One extra row feeds the ladder identity for phi'_{n_max}.
    let mut ext = vec![0.0; rows * cols];
    for (j, &x) in grid.points().iter().enumerate() {
        run_recurrence(n_max + 1, x, |k, v| ext[k * cols + j] = v);
    }

    let mut derivs = vec![0.0; (n_max + 1) * cols];
    for n in 0..=n_max {
        let nf = n as f64;
        let down = (nf / 2.0).sqrt();
        let up = ((nf + 1.0) / 2.0).sqrt();
        let above = &ext[(n + 1) * cols..(n + 2) * cols];
        let out = &mut derivs[n * cols..(n + 1) * cols];
        if n == 0 {
            for (d, a) in out.iter_mut().zip(above) {
                *d = -up * a;
            }
        } else {
            let below = &ext[(n - 1) * cols..n * cols];
            for ((d, a), b) in out.iter_mut().zip(above).zip(below) {
                *d = down * b - up * a;
            }
        }
    }
    ext.truncate((n_max + 1) * cols);

    Ok(BasisTable {
        n_max,
        points: grid.points().to_vec(),
        values: ext,
        derivs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trapezoid(f: &[f64], h: f64) -> f64 {
        let inner: f64 = f.iter().sum();
        h * (inner - 0.5 * (f[0] + f[f.len() - 1]))
    }

    #[test]
    fn closed_form_values() {
        let ground = PI.powf(-0.25);
        assert!((hermite_fn(0, 0.0) - 0.751_125_544_4).abs() < 1e-10);
        assert!((hermite_fn(0, 0.0) - ground).abs() < 1e-15);
        assert_eq!(hermite_fn(1, 0.0), 0.0);
        // sqrt(1/(2 sqrt(pi))) e^{-1/2} * 2
        let expected = (1.0 / (2.0 * PI.sqrt())).sqrt() * (-0.5f64).exp() * 2.0;
        assert!((hermite_fn(1, 1.0) - expected).abs() < 1e-14);
        assert!((hermite_fn(1, 1.0) - 0.644_289).abs() < 1e-6);
        // H_2 = 4x^2 - 2, H_3 = 8x^3 - 12x at x = 0.7
        let x: f64 = 0.7;
        let g = (-x * x / 2.0).exp();
        let h2 = (4.0 * x * x - 2.0) * g / (8.0 * PI.sqrt()).sqrt();
        let h3 = (8.0 * x.powi(3) - 12.0 * x) * g / (48.0 * PI.sqrt()).sqrt();
        assert!((hermite_fn(2, x) - h2).abs() < 1e-14);
        assert!((hermite_fn(3, x) - h3).abs() < 1e-14);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(hermite_fn_derivative(0, 0.0), 0.0);
        assert!((hermite_fn_derivative(0, 1.0) + hermite_fn(0, 1.0)).abs() < 1e-15);
        assert!((hermite_fn_derivative(0, 1.0) + 0.455_580).abs() < 1e-6);
        let expected = 2f64.sqrt() * PI.powf(-0.25);
        assert!((hermite_fn_derivative(1, 0.0) - expected).abs() < 1e-14);
        assert!((hermite_fn_derivative(1, 0.0) - 1.062_252).abs() < 1e-6);
        // phi_2(0) = -pi^{-1/4}/sqrt(2)
        assert!((hermite_fn(2, 0.0) + PI.powf(-0.25) / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let h = 1e-5;
        for n in [0, 1, 2, 5, 13, 30, 50] {
            for i in 0..=80 {
                let x = -10.0 + 0.25 * i as f64;
                let fd = (hermite_fn(n, x + h) - hermite_fn(n, x - h)) / (2.0 * h);
                let d = hermite_fn_derivative(n, x);
                assert!((fd - d).abs() < 1e-7, "n={n} x={x} fd={fd} d={d}");
            }
        }
    }

    #[test]
    fn no_overflow_for_large_n() {
        for n in [150, 400, 1000] {
            for i in 0..=240 {
                let x = -60.0 + 0.5 * i as f64;
                assert!(hermite_fn(n, x).is_finite());
                assert!(hermite_fn_derivative(n, x).is_finite());
            }
        }
        // Inside the classical region the value is O(n^{-1/4}) even though exp(-x^2/2) underflows.
        let v = hermite_fn(1000, 40.0);
        assert!(v != 0.0 && v.abs() < 1.0);
    }

    #[test]
    fn large_n_stays_normalized() {
        let grid = Grid::for_fock(1000, 6.0, 16384).unwrap();
        let h = grid.spacing();
        for n in [200usize, 700, 1000] {
            let sq: Vec<f64> = grid.points().iter().map(|&x| hermite_fn(n, x).powi(2)).collect();
            assert!((trapezoid(&sq, h) - 1.0).abs() < 1e-8, "n={n}");
        }
    }

    #[test]
    fn three_point_table() {
        let grid = Grid::new(1.0, 3).unwrap();
        let table = build_basis_table(0, &grid).unwrap();
        let row = table.values(0);
        let expected = [0.455_580, 0.751_126, 0.455_580];
        for (v, e) in row.iter().zip(expected) {
            assert!((v - e).abs() < 1e-6);
        }
        for (j, &x) in grid.points().iter().enumerate() {
            let exact = PI.powf(-0.25) * (-x * x / 2.0).exp();
            assert!((row[j] - exact).abs() <= 1e-12 * exact);
        }
    }

    #[test]
    fn parity_is_exact() {
        let grid = Grid::new(9.0, 257).unwrap();
        let table = build_basis_table(12, &grid).unwrap();
        let m = grid.len();
        for n in 0..=12 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let row = table.values(n);
            let drow = table.derivs(n);
            for j in 0..m {
                assert_eq!(row[m - 1 - j], sign * row[j]);
                assert_eq!(drow[m - 1 - j], -sign * drow[j]);
            }
        }
    }

    #[test]
    fn table_is_orthonormal_and_ladder_consistent() {
        let n_max = 10;
        let grid = Grid::for_fock(n_max, 6.0, 4096).unwrap();
        let table = build_basis_table(n_max, &grid).unwrap();
        let h = grid.spacing();
        for m in 0..=n_max {
            for n in m..=n_max {
                let prod: Vec<f64> = table
                    .values(m)
                    .iter()
                    .zip(table.values(n))
                    .map(|(a, b)| a * b)
                    .collect();
                let expected = if m == n { 1.0 } else { 0.0 };
                assert!((trapezoid(&prod, h) - expected).abs() < 1e-8, "({m},{n})");
            }
        }
        for n in 0..n_max {
            let nf = n as f64;
            for j in (0..grid.len()).step_by(7) {
                let below = if n == 0 { 0.0 } else { table.values(n - 1)[j] };
                let ladder = (nf / 2.0).sqrt() * below - ((nf + 1.0) / 2.0).sqrt() * table.values(n + 1)[j];
                assert!((table.derivs(n)[j] - ladder).abs() < 1e-10);
            }
        }
        for (j, &x) in grid.points().iter().enumerate().step_by(13) {
            assert!((table.derivs(n_max)[j] - hermite_fn_derivative(n_max, x)).abs() < 1e-12);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let grid = Grid::new(5.0, 1000).unwrap();
        let err = build_basis_table_capped(100, &grid, 10_000).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }
}
