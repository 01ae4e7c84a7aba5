//! Concrete states: eigenstates, two-level superpositions, squeezed Gaussians and
//! particle-in-a-box eigenstates, with the closed forms used to validate them.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{report_from_profile, ComplexityReport, QuadratureModel};
use crate::grid::Grid;
use crate::hermite::hermite_fns;
use crate::numerics::Numerics;
use crate::quadrature::{gauss_legendre, integrate_rule};
use crate::state::{make_state, DensityProfile, FockState};

/// Largest truncation deficit accepted for a squeezed vacuum.
pub const SQUEEZED_DEFICIT_TOL: f64 = 1e-10;
/// Deficit targeted when the truncation is chosen automatically.
pub const SQUEEZED_AUTO_DEFICIT: f64 = 1e-12;
pub const DEFAULT_BOX_TRUNCATION: usize = 256;
/// Captured-norm tolerance for box projections. The coefficients decay algebraically, so
/// this is loose: at `N = 256` the deficit is about `1.2e-3` for `n = 5`.
pub const DEFAULT_BOX_NORM_TOL: f64 = 2e-3;
/// Coefficients below this magnitude are dropped from a box projection.
pub const BOX_COEFF_FLOOR: f64 = 1e-14;
const BOX_PROJECTION_NODES: usize = 1024;

/// `a |0> + sqrt(1 - a^2) |m>`.
pub fn superposition_state(m: usize, a: f64) -> Result<FockState> {
    if !(a.abs() <= 1.0) {
        return Err(Error::InvalidArgument(format!("amplitude a={a} must satisfy |a| <= 1")));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("superposition needs m >= 1".into()));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); m + 1];
    coeffs[0] = Complex64::new(a, 0.0);
    coeffs[m] = Complex64::new((1.0 - a * a).max(0.0).sqrt(), 0.0);
    make_state(&coeffs, true)
}

/// `sigma_theta^2 = (sin^2 theta + sigma^4 cos^2 theta) / sigma^2`.
///
/// Widths here follow the convention in which the vacuum has unit variance; in oscillator
/// units (vacuum variance 1/2) a position deviation `s` corresponds to `sigma = sqrt(2) s`
/// and the returned value is twice the quadrature variance.
pub fn gaussian_sigma_theta(sigma: f64, theta: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    let (s, c) = theta.sin_cos();
    Ok((s * s + sigma.powi(4) * c * c) / (sigma * sigma))
}

/// Variance of `s_theta` for the minimum-uncertainty Gaussian with position deviation
/// `sigma` in oscillator units.
pub fn gaussian_quadrature_variance(sigma: f64, theta: f64) -> Result<f64> {
    Ok(0.5 * gaussian_sigma_theta(std::f64::consts::SQRT_2 * sigma, theta)?)
}

fn squeeze_parameter(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("sigma must be positive, got {sigma}")));
    }
    Ok(-0.5 * (2.0 * sigma * sigma).ln())
}

/// Even coefficients `c_0, c_2, ...`, extended while `more(next_level, deficit)` holds.
fn squeezed_coefficients(r: f64, mut more: impl FnMut(usize, f64) -> bool) -> (Vec<f64>, f64) {
    let t = -r.tanh();
    let mut c = 1.0 / r.cosh().sqrt();
    let mut out = vec![c];
    let mut deficit = 1.0 - c * c;
    let mut k = 0usize;
    while more(2 * (k + 1), deficit) {
        let kf = k as f64;
        c *= t * ((2.0 * kf + 1.0) * (2.0 * kf + 2.0)).sqrt() / (2.0 * (kf + 1.0));
        deficit -= c * c;
        out.push(c);
        k += 1;
    }
    (out, deficit)
}

fn spread_even(even: &[f64], n_max: usize) -> Vec<f64> {
    let mut coeffs = vec![0.0; n_max + 1];
    for (k, c) in even.iter().enumerate() {
        coeffs[2 * k] = *c;
    }
    coeffs
}

/// Squeezed vacuum whose position density is the Gaussian of deviation `sigma`
/// (oscillator units), truncated at level `n_max`. Odd coefficients vanish.
pub fn squeezed_vacuum_fock(sigma: f64, n_max: usize) -> Result<FockState> {
    if n_max < 2 || !n_max.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "truncation N={n_max} must be even and at least 2"
        )));
    }
    let r = squeeze_parameter(sigma)?;
    let (even, deficit) = squeezed_coefficients(r, |level, _| level <= n_max);
    if deficit > SQUEEZED_DEFICIT_TOL {
        return Err(Error::Truncation {
            captured: 1.0 - deficit,
            advice: format!("raise N above {n_max} or use the automatic truncation"),
        });
    }
    let coeffs: Vec<Complex64> = spread_even(&even, n_max)
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    make_state(&coeffs, true)
}

/// [`squeezed_vacuum_fock`] with the smallest even truncation whose deficit is at most
/// [`SQUEEZED_AUTO_DEFICIT`].
pub fn squeezed_vacuum_auto(sigma: f64) -> Result<FockState> {
    let r = squeeze_parameter(sigma)?;
    const LEVEL_CAP: usize = 100_000;
    let (even, deficit) =
        squeezed_coefficients(r, |level, deficit| deficit > SQUEEZED_AUTO_DEFICIT && level <= LEVEL_CAP);
    if deficit > SQUEEZED_AUTO_DEFICIT {
        return Err(Error::Truncation {
            captured: 1.0 - deficit,
            advice: format!("squeezing too strong to capture below level {LEVEL_CAP}"),
        });
    }
    let n_max = (2 * (even.len() - 1)).max(2);
    squeezed_vacuum_fock(sigma, n_max)
}

/// Closed-form Gaussian: every quadrature density is normal with variance
/// [`gaussian_quadrature_variance`].
#[derive(Debug, Clone)]
pub struct GaussianModel {
    sigma: f64,
    numerics: Numerics,
}

impl GaussianModel {
    pub fn new(sigma: f64, numerics: &Numerics) -> Result<Self> {
        squeeze_parameter(sigma)?;
        Ok(Self { sigma, numerics: numerics.clone() })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn density(&self, theta: f64) -> Result<DensityProfile> {
        let var = gaussian_quadrature_variance(self.sigma, theta)?;
        let grid = Grid::new(12.0 * var.sqrt(), self.numerics.grid_points)?;
        let norm = 1.0 / (2.0 * PI * var).sqrt();
        let rho: Vec<f64> = grid.points().iter().map(|x| norm * (-x * x / (2.0 * var)).exp()).collect();
        let drho = grid.points().iter().zip(&rho).map(|(x, r)| -x / var * r).collect();
        DensityProfile::from_samples(grid, theta, rho, drho)
    }
}

impl QuadratureModel for GaussianModel {
    fn report(&self, theta: f64) -> Result<ComplexityReport> {
        report_from_profile(&self.density(theta)?, &self.numerics)
    }
}

/// Particle in the box `|x| <= 1` projected onto the oscillator basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoxSpec {
    /// Quantum number, `n >= 1`.
    pub n: usize,
    /// Highest retained oscillator level, `N >= 4n`.
    pub truncation: usize,
}

impl BoxSpec {
    pub fn new(n: usize, truncation: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("box quantum number must be at least 1".into()));
        }
        if truncation < 4 * n {
            return Err(Error::InvalidArgument(format!(
                "truncation N={truncation} must be at least 4n={}",
                4 * n
            )));
        }
        Ok(Self { n, truncation })
    }
}

/// `sin(pi n (x - 1) / 2)` inside the box, zero outside.
pub fn box_wavefunction(n: usize, x: f64) -> f64 {
    if x.abs() > 1.0 {
        0.0
    } else {
        (0.5 * PI * n as f64 * (x - 1.0)).sin()
    }
}

/// `|<p|psi_n>|^2 = (2k^2/pi) sin^2(p - k) / (p^2 - k^2)^2` with `k = pi n / 2`.
pub fn box_momentum_density(n: usize, p: f64) -> f64 {
    let k = 0.5 * PI * n as f64;
    // sin^2(p - k) = sin^2(p + k) because 2k is a multiple of pi; expand around the nearer pole.
    let (near, far) = if (p - k).abs() < (p + k).abs() { (p - k, p + k) } else { (p + k, p - k) };
    let s = sinc(near);
    2.0 * k * k / PI * s * s / (far * far)
}

fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

/// Raw projections `c_k = int_{-1}^{1} phi_k(x) psi_n(x) dx` by Gauss-Legendre.
fn project_box(n: usize, truncation: usize) -> Vec<f64> {
    let (nodes, weights) = gauss_legendre(BOX_PROJECTION_NODES);
    let partials: Vec<Vec<f64>> = nodes
        .par_iter()
        .zip(&weights)
        .map(|(&x, &w)| {
            let amp = w * box_wavefunction(n, x);
            hermite_fns(truncation, x).into_iter().map(|v| v * amp).collect()
        })
        .collect();
    // Fixed summation order over nodes keeps the result independent of scheduling.
    let mut coeffs = vec![0.0; truncation + 1];
    for part in &partials {
        for (c, v) in coeffs.iter_mut().zip(part) {
            *c += v;
        }
    }
    coeffs
}

/// Box eigenstate in the oscillator basis: opposite-parity coefficients exactly zero,
/// magnitudes below [`BOX_COEFF_FLOOR`] dropped, then renormalized.
///
/// Fails when the captured norm falls short of `1 - norm_tol`.
pub fn box_state(spec: BoxSpec, norm_tol: f64) -> Result<FockState> {
    let BoxSpec { n, truncation } = BoxSpec::new(spec.n, spec.truncation)?;
    let mut coeffs = project_box(n, truncation);

    // psi_n has parity (-1)^{n+1}.
    let parity = (n + 1) % 2;
    for (k, c) in coeffs.iter_mut().enumerate() {
        if k % 2 != parity || c.abs() < BOX_COEFF_FLOOR {
            *c = 0.0;
        }
    }

    let captured: f64 = coeffs.iter().map(|c| c * c).sum();
    if captured < 1.0 - norm_tol {
        return Err(Error::Truncation {
            captured,
            advice: format!("raise N above {truncation}"),
        });
    }
    let coeffs: Vec<Complex64> = coeffs.into_iter().map(|c| Complex64::new(c, 0.0)).collect();
    make_state(&coeffs, true)
}

/// Norm captured by the box projection before renormalization.
pub fn box_captured_norm(spec: BoxSpec) -> Result<f64> {
    let spec = BoxSpec::new(spec.n, spec.truncation)?;
    Ok(project_box(spec.n, spec.truncation).iter().map(|c| c * c).sum())
}

/// Exact position-space Fisher information `pi^2 n^2` of the box eigenstate.
pub fn box_fisher_exact(n: usize) -> f64 {
    let nf = n as f64;
    PI * PI * nf * nf
}

/// `8 pi n^2 / e^3`.
pub fn box_cfs_position(n: usize) -> f64 {
    let nf = n as f64;
    8.0 * PI * nf * nf / E.powi(3)
}

/// Lower limit of the trigonometric integral `K(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KLowerLimit {
    /// `-pi n / 2`, where `t = p - pi n / 2` places `p = 0`. With it `K(n)` equals the
    /// momentum entropy plus `ln 4` and the momentum formula is exact.
    Corrected,
    /// `+pi n / 2` as typeset; drops the half line `p < pi n`, giving `C_FS` below one.
    AsPrinted,
}

/// Controls for [`box_k_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KQuad {
    pub nodes_per_piece: usize,
    pub tail_tol: f64,
    pub max_pieces: usize,
    pub lower: KLowerLimit,
}

impl Default for KQuad {
    fn default() -> Self {
        Self {
            nodes_per_piece: 32,
            tail_tol: 1e-8,
            max_pieces: 1_000_000,
            lower: KLowerLimit::Corrected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KIntegral {
    pub value: f64,
    pub pieces: usize,
    pub tail_bound: f64,
    pub converged: bool,
}

/// `g ln g` for `g(t) = n^2 sin^2 t / (t^2 + pi n t)^2`, with `0 ln 0 = 0`.
fn k_integrand(n: f64, t: f64) -> f64 {
    // t^2 + pi n t = t (t + pi n); the pole at t = 0 cancels against sin t.
    let s = sinc(t);
    let d = t + PI * n;
    let g = n * n * s * s / (d * d);
    if g > 0.0 {
        g * g.ln()
    } else {
        0.0
    }
}

/// Bound on `pi |int_T^inf g ln g dt|` from the envelope `g <= n^2 / t^4`.
fn k_tail_bound(n: f64, t: f64) -> f64 {
    let t3 = t * t * t;
    PI * n * n * ((4.0 * t.ln() - 2.0 * n.ln()) / (3.0 * t3) + 4.0 / (9.0 * t3))
}

/// `K(n) = ln(8/pi) - pi int g ln g dt` over `[t_0, inf)`, summed piecewise between
/// consecutive multiples of pi until the tail bound drops below `quad.tail_tol`.
pub fn box_k_integral(n: usize, quad: &KQuad) -> Result<KIntegral> {
    if n == 0 {
        return Err(Error::InvalidArgument("box quantum number must be at least 1".into()));
    }
    if quad.nodes_per_piece == 0 || quad.max_pieces == 0 {
        return Err(Error::InvalidArgument("K quadrature needs nodes and pieces".into()));
    }
    let nf = n as f64;
    let start = match quad.lower {
        KLowerLimit::Corrected => -0.5 * PI * nf,
        KLowerLimit::AsPrinted => 0.5 * PI * nf,
    };
    let rule = gauss_legendre(quad.nodes_per_piece);

    let mut sum = 0.0;
    let mut a = start;
    let mut b = ((start / PI).floor() + 1.0) * PI;
    let mut pieces = 0;
    let mut bound = f64::INFINITY;
    while pieces < quad.max_pieces {
        sum += integrate_rule(&rule, a, b, |t| k_integrand(nf, t));
        pieces += 1;
        if b > PI * nf {
            bound = k_tail_bound(nf, b);
            if bound < quad.tail_tol {
                return Ok(KIntegral {
                    value: (8.0 / PI).ln() - PI * sum,
                    pieces,
                    tail_bound: bound,
                    converged: true,
                });
            }
        }
        a = b;
        b += PI;
    }
    Err(Error::NonConvergence { pieces, tail_bound: bound })
}

/// `exp(2K(n)) / (24 pi e) * (1 - 6 / (pi^2 n^2))`.
pub fn box_cfs_momentum(n: usize, quad: &KQuad) -> Result<f64> {
    let k = box_k_integral(n, quad)?;
    let nf = n as f64;
    Ok((2.0 * k.value).exp() / (24.0 * PI * E) * (1.0 - 6.0 / (PI * PI * nf * nf)))
}
