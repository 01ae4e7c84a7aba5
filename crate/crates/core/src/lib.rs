//! Fisher-Shannon complexity of one-dimensional pure states across the whole family of
//! rotated quadratures `s_theta = cos(theta) x - sin(theta) p`, `theta` in `[0, pi)`.
//!
//! States live in the harmonic-oscillator eigenbasis, where rotating the quadrature is a
//! phase `e^{i n theta}` per level. For each angle the pipeline samples the density and its
//! analytic derivative, then evaluates the Fisher information `I`, Shannon entropy `S`, entropy
//! power `J = e^{2S}/(2 pi e)` and `C_FS = I J`. Over all angles it reports the average
//! (global measure) and the minimum (minimum measure) of `C_FS`.
//!
//! Module map:
//! - [`hermite`]: oscillator eigenfunctions and derivatives.
//! - [`state`], [`grid`]: Fock states, rotation, sampled densities.
//! - [`functionals`]: quadrature and the information functionals.
//! - [`theta`]: sweeps, global average, minimum search.
//! - [`catalog`]: superpositions, squeezed Gaussians, particle-in-a-box states.
//! - [`frft`]: explicit rotation-kernel transform used as an independent check.
//! - [`literal`]: the textual state syntax shared with the CLI.
//! - [`reference`]: reference values and their comparison ledger.

#![forbid(unsafe_code)]
// `!(x > 0.0)` guards reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod error;
pub mod frft;
pub mod functionals;
pub mod grid;
pub mod hermite;
pub mod literal;
pub mod numerics;
mod quadrature;
pub mod reference;
pub mod state;
pub mod theta;

pub use error::{Error, Result};
pub use functionals::{fs_complexity, ComplexityReport, FockEvaluator, QuadratureModel};
pub use grid::Grid;
pub use numerics::Numerics;
pub use state::{make_state, DensityProfile, FockState};
pub use theta::{analyze, global_fs, min_fs, sweep, SweepResult};
