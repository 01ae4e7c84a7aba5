//! Quadrature rotation by explicit integration against the fractional Fourier kernel.
//!
//! This is the slow, independent route: it never touches Fock coefficients, so agreement
//! with the phase rule in [`crate::state`] checks both. The kernel
//!
//! `K_a(u, v) = sqrt((1 - i cot a) / (2 pi)) exp(i [(u^2 + v^2) cot a / 2 - u v / sin a])`
//!
//! has `phi_n` as eigenfunctions with eigenvalue `e^{-i n a}` (principal square root; the
//! global phase is unobservable in densities). The phase rule multiplies by `e^{+i n a}`,
//! so [`KernelTransform`] integrates against `K_{-a}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::integrate;
use crate::grid::Grid;
use crate::hermite::build_basis_table;
use crate::state::{eval_amplitude, make_state, FockState};

/// Smallest `|sin a|` accepted by the kernel.
pub const MIN_SIN: f64 = 1e-8;

/// `K_a(u, v)`.
pub fn kernel(alpha: f64, u: f64, v: f64) -> Result<Complex64> {
    let (s, c) = alpha.sin_cos();
    if s.abs() <= MIN_SIN {
        return Err(Error::DegenerateAngle(alpha));
    }
    let cot = c / s;
    let amp = (Complex64::new(1.0, -cot) / (2.0 * PI)).sqrt();
    Ok(amp * Complex64::from_polar(1.0, (u * u + v * v) * cot / 2.0 - u * v / s))
}

/// Dense discretization of the rotation `psi_theta -> psi_{theta + alpha}` on one grid,
/// trapezoid weights folded into the columns.
#[derive(Debug, Clone)]
pub struct KernelTransform {
    alpha: f64,
    grid: Grid,
    matrix: Vec<Complex64>,
}

impl KernelTransform {
    pub fn new(alpha: f64, grid: &Grid) -> Result<Self> {
        kernel(-alpha, 0.0, 0.0)?;
        let pts = grid.points();
        let m = pts.len();
        let h = grid.spacing();
        let matrix: Vec<Complex64> = (0..m * m)
            .into_par_iter()
            .map(|idx| {
                let (j, k) = (idx / m, idx % m);
                let w = if k == 0 || k == m - 1 { 0.5 * h } else { h };
                // Cannot fail: the angle was checked above.
                kernel(-alpha, pts[j], pts[k]).map(|z| z * w).unwrap_or_default()
            })
            .collect();
        Ok(Self { alpha, grid: grid.clone(), matrix })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn apply(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.grid.len();
        if psi.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "{} samples on a {m}-point grid",
                psi.len()
            )));
        }
        Ok(self
            .matrix
            .par_chunks(m)
            .map(|row| row.iter().zip(psi).fold(Complex64::new(0.0, 0.0), |acc, (k, p)| acc + k * p))
            .collect())
    }
}

/// Rotates grid samples of `psi_theta` to `psi_{theta + alpha}`.
pub fn transform(psi: &[Complex64], grid: &Grid, alpha: f64) -> Result<Vec<Complex64>> {
    KernelTransform::new(alpha, grid)?.apply(psi)
}

/// Probability mass in the outer tenth of the grid on either side.
pub fn edge_mass(psi: &[Complex64], grid: &Grid) -> Result<f64> {
    let cut = 0.9 * grid.extent();
    let outer: Vec<f64> = psi
        .iter()
        .zip(grid.points())
        .map(|(p, x)| if x.abs() > cut { p.norm_sqr() } else { 0.0 })
        .collect();
    integrate(&outer, grid)
}

/// `int |psi|^2`.
pub fn norm_sqr(psi: &[Complex64], grid: &Grid) -> Result<f64> {
    let sq: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
    integrate(&sq, grid)
}

/// `int | |a|^2 - |b|^2 |`.
pub fn density_l1(a: &[Complex64], b: &[Complex64], grid: &Grid) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} samples", a.len(), b.len())));
    }
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x.norm_sqr() - y.norm_sqr()).abs()).collect();
    integrate(&diff, grid)
}

pub const SELFTEST_ALPHAS: [f64; 4] = [0.2, 0.7, 1.1, 2.4];
pub const SELFTEST_STATES: usize = 20;
pub const SELFTEST_MAX_LEVEL: usize = 12;
pub const SELFTEST_L1_TOL: f64 = 1e-5;
pub const SELFTEST_COMPOSITION_TOL: f64 = 1e-4;
pub const SELFTEST_UNITARITY_TOL: f64 = 1e-6;

/// Random state with `n_max <= max_level` and complex amplitudes uniform in the unit square.
pub fn random_state(rng: &mut ChaCha8Rng, max_level: usize) -> FockState {
    let n_max = rng.gen_range(0..=max_level);
    loop {
        let coeffs: Vec<Complex64> = (0..=n_max)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(s) = make_state(&coeffs, true) {
            return s;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestCase {
    pub state: usize,
    pub n_max: usize,
    pub alpha: f64,
    /// Kernel route against phase route, L1 distance of densities.
    pub l1: f64,
    /// `| ||K psi||^2 - ||psi||^2 |`.
    pub norm_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: Vec<SelftestCase>,
    pub max_l1: f64,
    pub max_norm_drift: f64,
    /// L1 distance between two successive rotations and the single combined one.
    pub composition_l1: f64,
    pub passed: bool,
}

/// Kernel route against phase route on seeded random states, plus unitarity and
/// composition checks.
pub fn selftest(seed: u64) -> Result<SelftestReport> {
    let grid = Grid::new(11.0, 1024)?;
    let table = build_basis_table(SELFTEST_MAX_LEVEL, &grid)?;
    let kernels: Vec<KernelTransform> = SELFTEST_ALPHAS
        .iter()
        .map(|&a| KernelTransform::new(a, &grid))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<FockState> = (0..SELFTEST_STATES)
        .map(|_| random_state(&mut rng, SELFTEST_MAX_LEVEL))
        .collect();

    let mut cases = Vec::new();
    for (i, state) in states.iter().enumerate() {
        let psi = eval_amplitude(state, 0.0, &table)?;
        let before = norm_sqr(&psi, &grid)?;
        for kt in &kernels {
            let moved = kt.apply(&psi)?;
            let want = eval_amplitude(state, kt.alpha(), &table)?;
            cases.push(SelftestCase {
                state: i,
                n_max: state.n_max(),
                alpha: kt.alpha(),
                l1: density_l1(&moved, &want, &grid)?,
                norm_drift: (norm_sqr(&moved, &grid)? - before).abs(),
            });
        }
    }

    // 0.7 then 1.1 against 1.8 in one step.
    let psi = eval_amplitude(&states[0], 0.0, &table)?;
    let twice = kernels[2].apply(&kernels[1].apply(&psi)?)?;
    let once = transform(&psi, &grid, SELFTEST_ALPHAS[1] + SELFTEST_ALPHAS[2])?;
    let composition_l1 = density_l1(&twice, &once, &grid)?;

    let max_l1 = cases.iter().map(|c| c.l1).fold(0.0, f64::max);
    let max_norm_drift = cases.iter().map(|c| c.norm_drift).fold(0.0, f64::max);
    let passed = max_l1 < SELFTEST_L1_TOL
        && max_norm_drift < SELFTEST_UNITARITY_TOL
        && composition_l1 < SELFTEST_COMPOSITION_TOL;
    Ok(SelftestReport { seed, cases, max_l1, max_norm_drift, composition_l1, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{box_momentum_density, box_wavefunction, superposition_state};
    use crate::state::FockState;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    #[test]
    fn quarter_turn_is_fourier_kernel() {
        for (u, v) in [(0.3, -1.2), (2.0, 0.5)] {
            let k = kernel(FRAC_PI_2, u, v).unwrap();
            let want = Complex64::from_polar(1.0 / (2.0 * PI).sqrt(), -u * v);
            assert!((k - want).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_symmetry_and_modulus() {
        for a in [0.2, 1.3, 2.9, -0.8] {
            for (u, v) in [(0.1, 2.0), (-3.0, 1.5)] {
                let k = kernel(a, u, v).unwrap();
                assert!((k - kernel(a, v, u).unwrap()).norm() < 1e-15);
                let want = 1.0 / (2.0 * PI * f64::sin(a).abs()).sqrt();
                assert!((k.norm() - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn degenerate_angles_are_rejected() {
        assert!(matches!(kernel(0.0, 1.0, 1.0), Err(Error::DegenerateAngle(_))));
        assert!(kernel(PI, 1.0, 1.0).is_err());
        assert!(KernelTransform::new(2.0 * PI + 1e-10, &Grid::new(5.0, 16).unwrap()).is_err());
    }

    #[test]
    fn vacuum_is_invariant() {
        let grid = Grid::new(11.0, 1024).unwrap();
        let table = build_basis_table(0, &grid).unwrap();
        let psi = eval_amplitude(&FockState::number(0), 0.0, &table).unwrap();
        for a in [0.4, 1.9] {
            let out = transform(&psi, &grid, a).unwrap();
            for (o, p) in out.iter().zip(&psi) {
                assert!((o.norm_sqr() - p.norm_sqr()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn superposition_matches_phase_rule() {
        let grid = Grid::new(11.0, 1024).unwrap();
        let table = build_basis_table(2, &grid).unwrap();
        let s = superposition_state(2, FRAC_1_SQRT_2).unwrap();
        let psi = eval_amplitude(&s, 0.0, &table).unwrap();
        let out = transform(&psi, &grid, 0.3).unwrap();
        let want = eval_amplitude(&s, 0.3, &table).unwrap();
        assert!(density_l1(&out, &want, &grid).unwrap() < 1e-5);
    }

    #[test]
    fn direction_matches_phase_rule_not_its_inverse() {
        // A state without reflection symmetry tells +alpha from -alpha apart.
        let s = make_state(
            &[Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.5), Complex64::new(0.3, 0.2), Complex64::new(0.5, 0.0)],
            true,
        )
        .unwrap();
        let grid = Grid::new(11.0, 1024).unwrap();
        let table = build_basis_table(3, &grid).unwrap();
        let psi = eval_amplitude(&s, 0.0, &table).unwrap();
        let out = transform(&psi, &grid, 0.9).unwrap();
        let plus = eval_amplitude(&s, 0.9, &table).unwrap();
        let minus = eval_amplitude(&s, -0.9, &table).unwrap();
        assert!(density_l1(&out, &plus, &grid).unwrap() < 1e-5);
        assert!(density_l1(&out, &minus, &grid).unwrap() > 1e-2);
    }

    #[test]
    fn box_quarter_turn_gives_momentum_density() {
        let grid = Grid::new(24.0, 4097).unwrap();
        let psi: Vec<Complex64> =
            grid.points().iter().map(|&x| Complex64::new(box_wavefunction(1, x), 0.0)).collect();
        let out = transform(&psi, &grid, FRAC_PI_2).unwrap();
        let diff: Vec<f64> = out
            .iter()
            .zip(grid.points())
            .map(|(o, &p)| (o.norm_sqr() - box_momentum_density(1, p)).abs())
            .collect();
        let l1 = integrate(&diff, &grid).unwrap();
        assert!(l1 < 1e-3, "L1 = {l1}");
    }

    #[test]
    fn selftest_passes_for_fixed_seed() {
        let report = selftest(7).unwrap();
        assert_eq!(report.cases.len(), SELFTEST_STATES * SELFTEST_ALPHAS.len());
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn edge_mass_of_resolved_state_is_tiny() {
        let grid = Grid::new(11.0, 1024).unwrap();
        let table = build_basis_table(12, &grid).unwrap();
        let psi = eval_amplitude(&FockState::number(12), 0.0, &table).unwrap();
        assert!(edge_mass(&psi, &grid).unwrap() < 1e-10);
    }
}
