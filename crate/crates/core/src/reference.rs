//! Published reference values set against what this crate computes.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use serde::Serialize;

use crate::catalog::{
    box_cfs_momentum, box_cfs_position, box_state, superposition_state, BoxSpec, KQuad,
    DEFAULT_BOX_NORM_TOL, DEFAULT_BOX_TRUNCATION,
};
use crate::error::Result;
use crate::functionals::{FockEvaluator, QuadratureModel};
use crate::numerics::Numerics;
use crate::state::FockState;
use crate::theta::analyze_model;

/// Published eigenstate complexities for `|1>` through `|10>`.
pub const EIGENSTATE_TABLE: [f64; 10] = [5.15, 11.7, 20.5, 31.3, 44.2, 59.0, 75.7, 94.3, 114.0, 137.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

impl Tolerance {
    pub fn admits(&self, reference: f64, computed: f64) -> bool {
        let d = (computed - reference).abs();
        match *self {
            Self::Absolute(t) => d <= t,
            Self::Relative(t) => d <= t * reference.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub label: String,
    pub reference: f64,
    pub computed: f64,
    /// `|computed - reference| / |reference|`.
    pub rel_delta: f64,
    pub tolerance: Tolerance,
    pub pass: bool,
    pub provenance: String,
}

impl ReferenceRow {
    pub fn new(label: impl Into<String>, reference: f64, computed: f64, tolerance: Tolerance, provenance: &str) -> Self {
        Self {
            label: label.into(),
            reference,
            computed,
            rel_delta: (computed - reference).abs() / reference.abs(),
            tolerance,
            pass: tolerance.admits(reference, computed),
            provenance: provenance.to_string(),
        }
    }
}

fn phi1(sign: f64) -> Result<FockState> {
    superposition_state(2, sign * FRAC_1_SQRT_2)
}

fn phi2(sign: f64) -> Result<FockState> {
    superposition_state(4, sign * FRAC_1_SQRT_2)
}

fn sign_name(sign: f64) -> &'static str {
    if sign > 0.0 {
        "a+"
    } else {
        "a-"
    }
}

pub fn eigenstate_rows(numerics: &Numerics) -> Result<Vec<ReferenceRow>> {
    (1..=10)
        .map(|n| {
            let r = FockEvaluator::new(&FockState::number(n), numerics)?.report(0.0)?;
            Ok(ReferenceRow::new(
                format!("C_FS |{n}>"),
                EIGENSTATE_TABLE[n - 1],
                r.cfs,
                Tolerance::Relative(0.01),
                "published eigenstate table",
            ))
        })
        .collect()
}

/// `phi_1` at `theta = 0, pi/2` (published for `a+` only) and `phi_2` at both angles for
/// both signs.
pub fn endpoint_rows(numerics: &Numerics) -> Result<Vec<ReferenceRow>> {
    let mut rows = Vec::new();
    let p1 = FockEvaluator::new(&phi1(1.0)?, numerics)?;
    for (theta, name, want) in [(0.0, "0", 2.32), (FRAC_PI_2, "pi/2", 2.95)] {
        rows.push(ReferenceRow::new(
            format!("C_FS phi1(a+) theta={name}"),
            want,
            p1.report(theta)?.cfs,
            Tolerance::Absolute(0.01),
            "published phi1 endpoint value",
        ));
    }
    for (sign, want) in [(1.0, 6.79763), (-1.0, 9.26409)] {
        let p2 = FockEvaluator::new(&phi2(sign)?, numerics)?;
        for (theta, name) in [(0.0, "0"), (FRAC_PI_2, "pi/2")] {
            rows.push(ReferenceRow::new(
                format!("C_FS phi2({}) theta={name}", sign_name(sign)),
                want,
                p2.report(theta)?.cfs,
                Tolerance::Absolute(1e-3),
                "published phi2 endpoint value",
            ));
        }
    }
    Ok(rows)
}

/// Global and minimum measures of `phi_1` and `phi_2`, both signs.
pub fn global_min_rows(numerics: &Numerics) -> Result<Vec<ReferenceRow>> {
    let mut gfs = Vec::new();
    let mut mfs = Vec::new();
    for (name, build, g_want, m_want) in [
        ("phi1", phi1 as fn(f64) -> Result<FockState>, 2.53, 2.25),
        ("phi2", phi2, 7.63, 6.79),
    ] {
        for sign in [1.0, -1.0] {
            let r = analyze_model(&FockEvaluator::new(&build(sign)?, numerics)?, numerics)?;
            let label = format!("{name}({})", sign_name(sign));
            gfs.push(ReferenceRow::new(
                format!("GFS {label}"),
                g_want,
                r.gfs,
                Tolerance::Absolute(0.01),
                "published global measure",
            ));
            mfs.push(ReferenceRow::new(
                format!("MFS {label}"),
                m_want,
                r.mfs,
                Tolerance::Absolute(0.01),
                "published minimum measure",
            ));
        }
    }
    gfs.extend(mfs);
    Ok(gfs)
}

/// Box eigenstates through the oscillator basis against the closed forms, position
/// (1%) and momentum (2%).
pub fn box_rows(numerics: &Numerics) -> Result<Vec<ReferenceRow>> {
    let mut position = Vec::new();
    let mut momentum = Vec::new();
    for n in 1..=5 {
        let state = box_state(BoxSpec::new(n, DEFAULT_BOX_TRUNCATION)?, DEFAULT_BOX_NORM_TOL)?;
        let eval = FockEvaluator::new(&state, numerics)?;
        position.push(ReferenceRow::new(
            format!("C_FS box n={n} theta=0"),
            box_cfs_position(n),
            eval.report(0.0)?.cfs,
            Tolerance::Relative(0.01),
            "closed-form position complexity 8 pi n^2 / e^3",
        ));
        momentum.push(ReferenceRow::new(
            format!("C_FS box n={n} theta=pi/2"),
            box_cfs_momentum(n, &KQuad::default())?,
            eval.report(FRAC_PI_2)?.cfs,
            Tolerance::Relative(0.02),
            "closed-form momentum complexity exp(2K(n)) / (24 pi e) (1 - 6 / (pi^2 n^2))",
        ));
    }
    position.extend(momentum);
    Ok(position)
}

/// Every comparison, in display order.
pub fn reproduction_ledger(numerics: &Numerics) -> Result<Vec<ReferenceRow>> {
    let mut rows = eigenstate_rows(numerics)?;
    rows.extend(endpoint_rows(numerics)?);
    rows.extend(global_min_rows(numerics)?);
    rows.extend(box_rows(numerics)?);
    Ok(rows)
}
