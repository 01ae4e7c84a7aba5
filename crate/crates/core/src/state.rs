//! Pure states in the oscillator eigenbasis and their quadrature densities.
//!
//! Rotating the quadrature by `theta` is diagonal in this basis: `c_n -> c_n e^{i n theta}`.
//! Densities are evaluated from that phase rule, never from a discretized projection
//! integral; the integral form lives in [`crate::frft`] as an independent check.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::hermite::{self, BasisTable};

/// Allowed deviation of the squared norm from one when not renormalizing.
pub const NORM_TOL: f64 = 1e-10;
/// Weight on the last retained coefficient above which truncation is reported.
pub const TRUNCATION_WARN: f64 = 1e-8;

/// Reduces an angle to the canonical range `[0, pi)`.
pub fn canonical_theta(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    // rem_euclid can round up to exactly pi
    if t >= PI {
        0.0
    } else {
        t
    }
}

/// Truncated pure state `sum_n c_n |n>` with unit norm.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    coeffs: Vec<Complex64>,
}

impl FockState {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Fock eigenstate `|n>`.
    pub fn number(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|c_N|^2`, the weight on the highest retained level.
    pub fn tail_weight(&self) -> f64 {
        self.coeffs[self.n_max()].norm_sqr()
    }

    pub fn truncation_warning(&self) -> Option<String> {
        let tail = self.tail_weight();
        (self.n_max() > 0 && tail > TRUNCATION_WARN).then(|| {
            format!(
                "weight {tail:.3e} on the highest retained level n={} suggests the expansion is truncated",
                self.n_max()
            )
        })
    }

    /// Applies `c_n -> c_n e^{i n theta}`. The raw angle is used, so `theta + pi`
    /// yields the parity-reflected state rather than the same one.
    pub fn rotate(&self, theta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .collect();
        Self { coeffs }
    }

    /// Wavefunction and its derivative at a single point of the rotated quadrature.
    pub fn amplitude_at(&self, theta: f64, x: f64) -> (Complex64, Complex64) {
        let rotated = self.rotate(theta);
        let mut psi = Complex64::new(0.0, 0.0);
        let mut dpsi = Complex64::new(0.0, 0.0);
        for (n, c) in rotated.coeffs.iter().enumerate() {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            psi += c * hermite::hermite_fn(n, x);
            dpsi += c * hermite::hermite_fn_derivative(n, x);
        }
        (psi, dpsi)
    }
}

/// Builds a state from amplitudes. Without `renormalize`, the squared norm must already be
/// one within [`NORM_TOL`].
pub fn make_state(coeffs: &[Complex64], renormalize: bool) -> Result<FockState> {
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if coeffs.is_empty() || norm == 0.0 {
        return Err(Error::ZeroState);
    }
    if !norm.is_finite() {
        return Err(Error::InvalidArgument("coefficients must be finite".into()));
    }
    if renormalize {
        let scale = 1.0 / norm.sqrt();
        Ok(FockState {
            coeffs: coeffs.iter().map(|c| c * scale).collect(),
        })
    } else if (norm - 1.0).abs() > NORM_TOL {
        Err(Error::NotNormalized { norm })
    } else {
        Ok(FockState {
            coeffs: coeffs.to_vec(),
        })
    }
}

/// Real-amplitude convenience wrapper around [`make_state`].
pub fn make_real_state(coeffs: &[f64], renormalize: bool) -> Result<FockState> {
    let c: Vec<Complex64> = coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    make_state(&c, renormalize)
}

/// Density `rho = |psi|^2` of one rotated quadrature and its derivative, sampled on a grid.
#[derive(Debug, Clone)]
pub struct DensityProfile {
    grid: Grid,
    theta: f64,
    rho: Vec<f64>,
    drho: Vec<f64>,
    /// `|psi'|^2`, present when the profile came from an amplitude; it supplies the
    /// Fisher integrand at nodes where `rho'^2 / rho` is 0/0.
    slope_sqr: Option<Vec<f64>>,
}

impl DensityProfile {
    /// Profile from externally computed samples (closed forms, tests).
    pub fn from_samples(grid: Grid, theta: f64, rho: Vec<f64>, drho: Vec<f64>) -> Result<Self> {
        if rho.len() != grid.len() || drho.len() != grid.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} density and {} derivative samples on a {}-point grid",
                rho.len(),
                drho.len(),
                grid.len()
            )));
        }
        if let Some(bad) = rho.iter().find(|r| !(**r >= 0.0) || !r.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "density samples must be finite and non-negative, found {bad}"
            )));
        }
        Ok(Self {
            grid,
            theta: canonical_theta(theta),
            rho,
            drho,
            slope_sqr: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Canonical angle in `[0, pi)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn drho(&self) -> &[f64] {
        &self.drho
    }

    pub fn slope_sqr(&self) -> Option<&[f64]> {
        self.slope_sqr.as_deref()
    }

    /// Same density seen through `s -> -s`.
    pub fn reflected(&self) -> Self {
        let mut rho = self.rho.clone();
        rho.reverse();
        let drho = self.drho.iter().rev().map(|d| -d).collect();
        let slope_sqr = self.slope_sqr.as_ref().map(|s| s.iter().rev().copied().collect());
        Self {
            grid: self.grid.clone(),
            theta: self.theta,
            rho,
            drho,
            slope_sqr,
        }
    }

    /// True when the sampled density is not resolved as a smooth, decaying function:
    /// it carries weight at the grid boundary or jumps between neighbouring samples.
    /// Derivative-based functionals are then set by the resolution, not the density.
    pub fn is_edge_dominated(&self) -> bool {
        let peak = self.rho.iter().copied().fold(0.0, f64::max);
        if peak == 0.0 {
            return true;
        }
        let last = self.rho.len() - 1;
        let at_edge = self.rho[0].max(self.rho[last]) > 1e-6 * peak;
        let jumps = self.rho.windows(2).any(|w| (w[1] - w[0]).abs() > 0.25 * peak);
        at_edge || jumps
    }
}

/// Samples `psi(s_theta) = sum_n c_n e^{i n theta} phi_n` on the table's grid.
pub fn eval_amplitude(state: &FockState, theta: f64, table: &BasisTable) -> Result<Vec<Complex64>> {
    if table.n_max() < state.n_max() {
        return Err(Error::DimensionMismatch(format!(
            "basis table reaches n={} but the state needs n={}",
            table.n_max(),
            state.n_max()
        )));
    }
    let mut psi = vec![Complex64::new(0.0, 0.0); table.cols()];
    for (n, c) in state.rotate(theta).coeffs.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for (out, &v) in psi.iter_mut().zip(table.values(n)) {
            *out += c * v;
        }
    }
    Ok(psi)
}

/// Evaluates `rho(s_theta)` and its analytic derivative for `state` on `grid`.
///
/// `psi(x) = sum_n c_n e^{i n theta} phi_n(x)`, `rho = |psi|^2`,
/// `rho' = 2 Re(conj(psi) psi')` with `psi'` from the ladder derivatives in `table`.
pub fn eval_density(
    state: &FockState,
    theta: f64,
    grid: &Grid,
    table: &BasisTable,
) -> Result<DensityProfile> {
    if table.n_max() < state.n_max() {
        return Err(Error::DimensionMismatch(format!(
            "basis table reaches n={} but the state needs n={}",
            table.n_max(),
            state.n_max()
        )));
    }
    if !table.matches(grid) {
        return Err(Error::DimensionMismatch(
            "basis table was not built on this grid".into(),
        ));
    }

    let m = grid.len();
    let mut re = vec![0.0; m];
    let mut im = vec![0.0; m];
    let mut dre = vec![0.0; m];
    let mut dim = vec![0.0; m];
    for (n, c) in state.rotate(theta).coeffs.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let (cr, ci) = (c.re, c.im);
        for (j, (&v, &d)) in table.values(n).iter().zip(table.derivs(n)).enumerate() {
            re[j] += cr * v;
            im[j] += ci * v;
            dre[j] += cr * d;
            dim[j] += ci * d;
        }
    }

    let mut rho = Vec::with_capacity(m);
    let mut drho = Vec::with_capacity(m);
    let mut slope = Vec::with_capacity(m);
    for j in 0..m {
        rho.push(re[j] * re[j] + im[j] * im[j]);
        drho.push(2.0 * (re[j] * dre[j] + im[j] * dim[j]));
        slope.push(dre[j] * dre[j] + dim[j] * dim[j]);
    }

    Ok(DensityProfile {
        grid: grid.clone(),
        theta: canonical_theta(theta),
        rho,
        drho,
        slope_sqr: Some(slope),
    })
}
