use serde::Serialize;

use crate::hermite::DEFAULT_TABLE_CAP;

/// Resolution and tolerance knobs shared by every measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Numerics {
    /// Samples per density grid.
    pub grid_points: usize,
    /// Units of Gaussian decay added beyond the highest classical turning point.
    pub grid_margin: f64,
    /// Relative density threshold below which the Fisher integrand switches to `4|psi'|^2`.
    pub node_eps: f64,
    /// Cap on basis-table entries.
    pub table_cap: usize,
    /// Default number of angles in a sweep.
    pub theta_samples: usize,
    /// Relative change between successive lattice doublings that ends the global average.
    pub gfs_rel_tol: f64,
    /// Starting lattice size for the global average.
    pub gfs_start_samples: usize,
    /// Largest lattice tried for the global average.
    pub gfs_max_samples: usize,
    /// Coarse scan size before golden-section refinement of the minimum.
    pub mfs_scan_samples: usize,
    /// Bracket width at which golden-section refinement stops.
    pub mfs_theta_tol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            grid_points: 4096,
            grid_margin: 6.0,
            node_eps: 1e-13,
            table_cap: DEFAULT_TABLE_CAP,
            theta_samples: 64,
            gfs_rel_tol: 1e-5,
            gfs_start_samples: 32,
            gfs_max_samples: 1024,
            mfs_scan_samples: 128,
            mfs_theta_tol: 1e-6,
        }
    }
}
