use std::fmt;
use std::str::FromStr;

use nalgebra::RealField;
use serde::{Deserialize, Serialize};

use crate::error::DiscretizeError;

/// Uniform grid of `n` interior points on `[x_min, x_max]`, spacing
/// `h = (x_max − x_min)/(n + 1)`, with the wavefunction pinned to zero at
/// both ends.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T> {
    x_min: T,
    x_max: T,
    n: usize,
    h: T,
}

impl<T: RealField + Copy> Grid<T> {
    pub fn new(x_min: T, x_max: T, n: usize) -> Result<Self, DiscretizeError> {
        if n < 3 {
            return Err(DiscretizeError::GridTooSmall(n));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(DiscretizeError::BadInterval {
                x_min: to_f64(x_min),
                x_max: to_f64(x_max),
            });
        }
        let h = (x_max - x_min) / nalgebra::convert::<f64, T>((n + 1) as f64);
        Ok(Grid { x_min, x_max, n, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> T {
        self.h
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn x_min_f64(&self) -> f64 {
        to_f64(self.x_min)
    }

    pub fn x_max_f64(&self) -> f64 {
        to_f64(self.x_max)
    }

    /// Interior point `j`, `0 ≤ j < n`.
    pub fn x(&self, j: usize) -> T {
        self.node(j + 1)
    }

    /// Interior points.
    pub fn points(&self) -> Vec<T> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// All `n + 2` nodes including both boundaries.
    pub fn nodes(&self) -> Vec<T> {
        (0..self.n + 2).map(|k| self.node(k)).collect()
    }

    fn node(&self, k: usize) -> T {
        if k == self.n + 1 {
            return self.x_max;
        }
        self.x_min + self.h * nalgebra::convert::<f64, T>(k as f64)
    }

    /// Same interval with half the spacing (`2n + 1` interior points), so
    /// every old point is also a new one.
    pub fn refined(&self) -> Self {
        Grid::new(self.x_min, self.x_max, 2 * self.n + 1).expect("refining a valid grid")
    }

    pub fn to_f64(&self) -> Grid<f64> {
        Grid {
            x_min: to_f64(self.x_min),
            x_max: to_f64(self.x_max),
            n: self.n,
            h: to_f64(self.h),
        }
    }
}

pub(crate) fn to_f64<T: RealField + Copy>(x: T) -> f64 {
    nalgebra::try_convert(x).unwrap_or(f64::NAN)
}

/// Finite-difference representation of `d/dx`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    /// Central difference `D` on the interior points; `p X p` becomes
    /// `D X D`, a five-point stencil of width `2h`.
    Central,
    /// Forward difference onto half points and its transpose back; `p X p`
    /// becomes the compact three-point stencil with `X` sampled between
    /// nodes (averaged from the neighbouring nodes).
    #[default]
    Staggered,
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stencil::Central => "central",
            Stencil::Staggered => "staggered",
        })
    }
}

impl FromStr for Stencil {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "central" => Ok(Stencil::Central),
            "staggered" | "compact" => Ok(Stencil::Staggered),
            other => Err(format!("unknown stencil {other:?}; expected central or staggered")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_points() {
        let g = Grid::new(0.0, 4.0, 3).unwrap();
        assert_eq!(g.h(), 1.0);
        assert_eq!(g.points(), vec![1.0, 2.0, 3.0]);
        assert_eq!(g.nodes(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        let r = g.refined();
        assert_eq!((r.n(), r.h()), (7, 0.5));
        assert_eq!(r.x(1), g.x(0));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(Grid::new(0.0, 1.0, 2), Err(DiscretizeError::GridTooSmall(2))));
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 10).is_err());
        assert!(Grid::new(0.0f32, 1.0, 10).is_ok());
    }
}
