//! Uniform 1D grids along the pipe axis and the difference stencils used on
//! them.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("grid needs at least {min} nodes, got {got}")]
    TooFewNodes { min: usize, got: usize },
    #[error("grid length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("array length {got} does not match grid size {want}")]
    Mismatch { want: usize, got: usize },
}

/// Smallest grid accepted anywhere in the pipeline.
pub const MIN_NODES: usize = 4;

/// Nodes `s_i = i h`, `i = 0..n`, on `[0, length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    n: usize,
    length: f64,
}

impl UniformGrid {
    pub fn new(n: usize, length: f64) -> Result<Self, GridError> {
        if n < MIN_NODES {
            return Err(GridError::TooFewNodes {
                min: MIN_NODES,
                got: n,
            });
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(GridError::BadLength(length));
        }
        Ok(Self { n, length })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.length
        } else {
            i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    pub fn check(&self, values: &[f64]) -> Result<(), GridError> {
        if values.len() == self.n {
            Ok(())
        } else {
            Err(GridError::Mismatch {
                want: self.n,
                got: values.len(),
            })
        }
    }

    /// Piecewise-linear interpolation of nodal `values` at `s`.
    pub fn interpolate(&self, values: &[f64], s: f64) -> f64 {
        let h = self.spacing();
        let x = (s / h).clamp(0.0, (self.n - 1) as f64);
        let i = (x.floor() as usize).min(self.n - 2);
        let w = x - i as f64;
        values[i] * (1.0 - w) + values[i + 1] * w
    }
}

/// First derivative: centered inside, second-order one-sided at the ends.
pub fn first_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            } else if i == n - 1 {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)
            } else {
                (f[i + 1] - f[i - 1]) / (2.0 * h)
            }
        })
        .collect()
}

/// Second derivative: centered inside, second-order one-sided at the ends.
pub fn second_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let h2 = h * h;
    (0..n)
        .map(|i| {
            if i == 0 {
                (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
            } else if i == n - 1 {
                (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2
            } else {
                (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_exact_on_quadratics() {
        let g = UniformGrid::new(7, 1.5).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|s| 3.0 * s * s - s + 2.0).collect();
        let d1 = first_derivative(&f, g.spacing());
        let d2 = second_derivative(&f, g.spacing());
        for (i, s) in g.nodes().into_iter().enumerate() {
            assert!((d1[i] - (6.0 * s - 1.0)).abs() < 1e-12);
            assert!((d2[i] - 6.0).abs() < 1e-10);
        }
    }

    #[test]
    fn last_node_is_exact_length() {
        let g = UniformGrid::new(11, 0.3).unwrap();
        assert_eq!(g.node(10), 0.3);
        assert!((g.interpolate(&g.nodes(), 0.17) - 0.17).abs() < 1e-15);
        assert!(UniformGrid::new(2, 1.0).is_err());
    }
}
