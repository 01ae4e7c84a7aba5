//! Complexity as a function of the quadrature angle.
//!
//! `C_FS(theta)` is smooth and pi-periodic, so the average over `[0, pi)` uses the periodic
//! trapezoid rule (spectrally convergent) on a lattice doubled until it settles. The minimum
//! comes from a coarse periodic scan followed by golden-section refinement around the best
//! sample; the landscape can have several local minima, which rules out a purely local search.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functionals::{ComplexityReport, FockEvaluator, QuadratureModel};
use crate::numerics::Numerics;
use crate::state::{canonical_theta, FockState};

const GOLDEN: f64 = 0.618_033_988_749_894_9; // (sqrt 5 - 1) / 2

/// Everything known about one state's complexity landscape.
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub thetas: Vec<f64>,
    pub reports: Vec<ComplexityReport>,
    pub gfs: f64,
    pub mfs: f64,
    pub mfs_theta: f64,
    /// Whether the global average met its relative tolerance before the lattice cap.
    pub converged: bool,
    /// Lattice size behind `gfs`.
    pub resolution: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct GlobalEstimate {
    pub value: f64,
    pub converged: bool,
    pub resolution: usize,
    /// Reports on the final lattice `k pi / resolution`, in index order.
    pub reports: Vec<ComplexityReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinEstimate {
    pub theta: f64,
    pub value: f64,
}

/// `k pi / n` for `k = 0..n`.
pub fn periodic_lattice(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * PI / n as f64).collect()
}

fn evaluate_all<M: QuadratureModel + ?Sized>(model: &M, thetas: &[f64]) -> Result<Vec<ComplexityReport>> {
    thetas.par_iter().map(|&t| model.report(t)).collect()
}

fn mean_cfs(reports: &[ComplexityReport]) -> f64 {
    let mut sum = 0.0;
    for r in reports {
        sum += r.cfs;
    }
    sum / reports.len() as f64
}

pub fn sweep_model<M: QuadratureModel + ?Sized>(model: &M, n_theta: usize) -> Result<Vec<ComplexityReport>> {
    if n_theta < 4 {
        return Err(Error::InvalidArgument(format!(
            "a sweep needs at least 4 angles, got {n_theta}"
        )));
    }
    evaluate_all(model, &periodic_lattice(n_theta))
}

/// Reports at `theta_k = k pi / n_theta`, `k = 0..n_theta`.
pub fn sweep(state: &FockState, n_theta: usize, numerics: &Numerics) -> Result<Vec<ComplexityReport>> {
    sweep_model(&FockEvaluator::new(state, numerics)?, n_theta)
}

pub fn global_fs_model<M: QuadratureModel + ?Sized>(model: &M, numerics: &Numerics) -> Result<GlobalEstimate> {
    let start = numerics.gfs_start_samples.max(2);
    let cap = numerics.gfs_max_samples.max(start);
    let mut n = start;
    let mut reports = evaluate_all(model, &periodic_lattice(n))?;
    let mut value = mean_cfs(&reports);
    loop {
        if 2 * n > cap {
            return Ok(GlobalEstimate { value, converged: false, resolution: n, reports });
        }
        let odd: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64 * PI / (2 * n) as f64).collect();
        let fresh = evaluate_all(model, &odd)?;
        let mut merged = Vec::with_capacity(2 * n);
        for (even, odd) in reports.into_iter().zip(fresh) {
            merged.push(even);
            merged.push(odd);
        }
        reports = merged;
        n *= 2;
        let next = mean_cfs(&reports);
        let settled = (next - value).abs() <= numerics.gfs_rel_tol * next.abs();
        value = next;
        if settled {
            return Ok(GlobalEstimate { value, converged: true, resolution: n, reports });
        }
    }
}

/// `(1/pi) int_0^pi C_FS(theta) d theta`.
pub fn global_fs(state: &FockState, numerics: &Numerics) -> Result<GlobalEstimate> {
    global_fs_model(&FockEvaluator::new(state, numerics)?, numerics)
}

/// Golden-section search for a minimum of `f` inside `[a, b]`, stopping once the bracket
/// is narrower than `tol`.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while (b - a).abs() > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// Index of the smallest `cfs`; near-ties go to the earlier (smaller) angle.
fn best_index(reports: &[ComplexityReport]) -> usize {
    let mut best = 0;
    for (k, r) in reports.iter().enumerate().skip(1) {
        let current = reports[best].cfs;
        if r.cfs < current - 1e-12 * current.abs() {
            best = k;
        }
    }
    best
}

fn refine_around<M: QuadratureModel + ?Sized>(
    model: &M,
    center: f64,
    half_width: f64,
    sample: f64,
    tol: f64,
) -> Result<MinEstimate> {
    let (theta, value) = golden_section(
        |t| model.report(t).map(|r| r.cfs),
        center - half_width,
        center + half_width,
        tol,
    )?;
    Ok(if value <= sample {
        MinEstimate { theta: canonical_theta(theta), value }
    } else {
        MinEstimate { theta: canonical_theta(center), value: sample }
    })
}

pub fn min_fs_model<M: QuadratureModel + ?Sized>(model: &M, numerics: &Numerics) -> Result<MinEstimate> {
    let n = numerics.mfs_scan_samples.max(4);
    let reports = evaluate_all(model, &periodic_lattice(n))?;
    let k = best_index(&reports);
    let h = PI / n as f64;
    refine_around(model, k as f64 * h, h, reports[k].cfs, numerics.mfs_theta_tol)
}

/// `min_theta C_FS(theta)` and the canonical angle where it is attained.
pub fn min_fs(state: &FockState, numerics: &Numerics) -> Result<MinEstimate> {
    min_fs_model(&FockEvaluator::new(state, numerics)?, numerics)
}

/// Global average, minimum and the lattice behind them.
pub fn analyze_model<M: QuadratureModel + ?Sized>(model: &M, numerics: &Numerics) -> Result<SweepResult> {
    let global = global_fs_model(model, numerics)?;
    let mut min = min_fs_model(model, numerics)?;

    // The averaging lattice may sample a lower point than the scan did; refine there too.
    let k = best_index(&global.reports);
    if global.reports[k].cfs < min.value {
        let h = PI / global.resolution as f64;
        let theta = k as f64 * h;
        min = refine_around(model, theta, h, global.reports[k].cfs, numerics.mfs_theta_tol)?;
    }

    Ok(SweepResult {
        thetas: global.reports.iter().map(|r| r.theta).collect(),
        gfs: global.value,
        mfs: min.value,
        mfs_theta: min.theta,
        converged: global.converged,
        resolution: global.resolution,
        reports: global.reports,
    })
}

pub fn analyze(state: &FockState, numerics: &Numerics) -> Result<SweepResult> {
    analyze_model(&FockEvaluator::new(state, numerics)?, numerics)
}
