use crate::error::{Error, Result};

/// Uniform, origin-symmetric sampling lattice on `[-extent, extent]`.
///
/// Points are built as `(2j - (M-1)) * extent / (M-1)` so that `x[M-1-j] == -x[j]`
/// holds bit-for-bit; parity arguments elsewhere depend on that.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    extent: f64,
    points: Vec<f64>,
}

impl Grid {
    pub fn new(extent: f64, count: usize) -> Result<Self> {
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid extent must be finite and positive, got {extent}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        let half_step = extent / (count - 1) as f64;
        let last = (count - 1) as f64;
        let points = (0..count)
            .map(|j| (2.0 * j as f64 - last) * half_step)
            .collect();
        Ok(Self { extent, points })
    }

    /// Grid wide enough for every oscillator eigenfunction up to `n_max`:
    /// the classical turning point `sqrt(2 n_max + 1)` plus `margin` units of Gaussian decay.
    pub fn for_fock(n_max: usize, margin: f64, count: usize) -> Result<Self> {
        if !(margin.is_finite() && margin >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "grid margin must be non-negative, got {margin}"
            )));
        }
        Self::new((2.0 * n_max as f64 + 1.0).sqrt() + margin, count)
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.extent / (self.points.len() - 1) as f64
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_and_increasing() {
        let grid = Grid::new(7.3, 1001).unwrap();
        let x = grid.points();
        assert_eq!(x[0], -7.3);
        assert_eq!(x[1000], 7.3);
        assert_eq!(x[500], 0.0);
        for j in 0..x.len() {
            assert_eq!(x[j], -x[x.len() - 1 - j]);
        }
        assert!(x.windows(2).all(|w| w[1] > w[0]));
        assert!((grid.spacing() - 0.0146).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(Grid::new(0.0, 10).is_err());
        assert!(Grid::new(f64::NAN, 10).is_err());
        assert!(Grid::new(1.0, 1).is_err());
        assert!(Grid::for_fock(3, -1.0, 10).is_err());
    }

    #[test]
    fn fock_extent() {
        let grid = Grid::for_fock(4, 6.0, 64).unwrap();
        assert!((grid.extent() - 9.0).abs() < 1e-15);
    }
}
