//! Textual state syntax:
//!
//! - `fock:N` eigenstate `|N>`
//! - `super:c0,c1,...` amplitudes as complex literals (`0.5`, `-2i`, `0.3-0.1i`), renormalized
//! - `gauss:sigma=S` squeezed vacuum with position deviation `S`; add `,N=64` for a fixed
//!   truncation or `,analytic` for the closed-form route
//! - `box:n=K` particle-in-a-box eigenstate; add `,N=256` to set the truncation

use num_complex::Complex64;
use serde::Serialize;

use crate::catalog::{
    box_state, squeezed_vacuum_auto, squeezed_vacuum_fock, BoxSpec, GaussianModel, DEFAULT_BOX_NORM_TOL,
    DEFAULT_BOX_TRUNCATION,
};
use crate::error::{Error, Result};
use crate::functionals::{FockEvaluator, QuadratureModel};
use crate::numerics::Numerics;
use crate::state::{make_state, FockState};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GaussRoute {
    /// Squeezed vacuum with the smallest truncation meeting the deficit target.
    FockAuto,
    /// Squeezed vacuum truncated at the given even level.
    Fock(usize),
    /// Closed-form densities.
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StateLiteral {
    Number(usize),
    Superposition(Vec<(f64, f64)>),
    Gaussian { sigma: f64, route: GaussRoute },
    Box(BoxSpec),
}

fn fail(literal: &str, reason: impl Into<String>) -> Error {
    Error::Parse { literal: literal.to_string(), reason: reason.into() }
}

fn parse_real(text: &str) -> Option<f64> {
    text.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_unit_or_real(text: &str) -> Option<f64> {
    match text {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        t => parse_real(t),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with `i` alone meaning unit magnitude).
pub fn parse_complex(text: &str) -> Option<Complex64> {
    let t = text.trim();
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(t).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(Complex64::new(parse_real(&body[..k])?, parse_unit_or_real(&body[k..])?)),
        None => Some(Complex64::new(0.0, parse_unit_or_real(body)?)),
    }
}

fn parse_usize(literal: &str, key: &str, value: &str) -> Result<usize> {
    value
        .trim()
        .parse::<usize>()
        .map_err(|_| fail(literal, format!("{key} must be a non-negative integer, got `{value}`")))
}

/// Splits `k=v` options; bare words come back with an empty value.
fn options(body: &str) -> Vec<(&str, &str)> {
    body.split(',')
        .map(|part| match part.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (part.trim(), ""),
        })
        .collect()
}

pub fn parse_literal(literal: &str) -> Result<StateLiteral> {
    let (kind, body) = literal
        .split_once(':')
        .ok_or_else(|| fail(literal, "expected `kind:arguments`"))?;
    match kind.trim() {
        "fock" => Ok(StateLiteral::Number(parse_usize(literal, "level", body)?)),
        "super" => {
            let mut amps = Vec::new();
            for part in body.split(',') {
                let c = parse_complex(part)
                    .ok_or_else(|| fail(literal, format!("`{part}` is not a complex number")))?;
                amps.push((c.re, c.im));
            }
            if amps.iter().all(|&(re, im)| re == 0.0 && im == 0.0) {
                return Err(fail(literal, "all amplitudes are zero"));
            }
            Ok(StateLiteral::Superposition(amps))
        }
        "gauss" => {
            let mut sigma = None;
            let mut route = GaussRoute::FockAuto;
            let mut route_set = false;
            for (key, value) in options(body) {
                match key {
                    "sigma" => {
                        let s = parse_real(value)
                            .filter(|s| *s > 0.0)
                            .ok_or_else(|| fail(literal, format!("sigma must be positive, got `{value}`")))?;
                        sigma = Some(s);
                    }
                    "N" | "analytic" if route_set => {
                        return Err(fail(literal, "choose at most one of `N=` and `analytic`"));
                    }
                    "N" => {
                        route = GaussRoute::Fock(parse_usize(literal, "N", value)?);
                        route_set = true;
                    }
                    "analytic" if value.is_empty() => {
                        route = GaussRoute::Analytic;
                        route_set = true;
                    }
                    other => return Err(fail(literal, format!("unknown option `{other}`"))),
                }
            }
            let sigma = sigma.ok_or_else(|| fail(literal, "missing `sigma=`"))?;
            Ok(StateLiteral::Gaussian { sigma, route })
        }
        "box" => {
            let mut n = None;
            let mut truncation = DEFAULT_BOX_TRUNCATION;
            for (key, value) in options(body) {
                match key {
                    "n" => n = Some(parse_usize(literal, "n", value)?),
                    "N" => truncation = parse_usize(literal, "N", value)?,
                    other => return Err(fail(literal, format!("unknown option `{other}`"))),
                }
            }
            let n = n.ok_or_else(|| fail(literal, "missing `n=`"))?;
            let spec = BoxSpec::new(n, truncation).map_err(|e| fail(literal, e.to_string()))?;
            Ok(StateLiteral::Box(spec))
        }
        other => Err(fail(literal, format!("unknown state kind `{other}`"))),
    }
}

impl StateLiteral {
    /// The Fock-basis state, or `None` for the closed-form Gaussian route.
    pub fn fock_state(&self) -> Result<Option<FockState>> {
        Ok(Some(match self {
            Self::Number(n) => FockState::number(*n),
            Self::Superposition(amps) => {
                let c: Vec<Complex64> = amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                make_state(&c, true)?
            }
            Self::Gaussian { route: GaussRoute::Analytic, .. } => return Ok(None),
            Self::Gaussian { sigma, route: GaussRoute::FockAuto } => squeezed_vacuum_auto(*sigma)?,
            Self::Gaussian { sigma, route: GaussRoute::Fock(n) } => squeezed_vacuum_fock(*sigma, *n)?,
            Self::Box(spec) => box_state(*spec, DEFAULT_BOX_NORM_TOL)?,
        }))
    }

    /// Evaluator for any angle.
    pub fn model(&self, numerics: &Numerics) -> Result<Box<dyn QuadratureModel>> {
        match (self, self.fock_state()?) {
            (_, Some(state)) => Ok(Box::new(FockEvaluator::new(&state, numerics)?)),
            (Self::Gaussian { sigma, .. }, None) => Ok(Box::new(GaussianModel::new(*sigma, numerics)?)),
            (_, None) => unreachable!("only the analytic Gaussian lacks a Fock state"),
        }
    }
}
