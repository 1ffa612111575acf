use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid needs xmin < xmax, got [{xmin}, {xmax}]")]
    BadBounds { xmin: f64, xmax: f64 },
    #[error("grid needs an odd point count >= 3, got {n}")]
    BadCount { n: usize },
}

/// Uniform grid with an odd number of points, so a domain symmetric about
/// the mirror point contains it as a node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    xmin: f64,
    xmax: f64,
    n: usize,
}

impl Grid {
    pub fn new(xmin: f64, xmax: f64, n: usize) -> Result<Self, GridError> {
        if !xmin.is_finite() || !xmax.is_finite() || xmin >= xmax {
            return Err(GridError::BadBounds { xmin, xmax });
        }
        if n < 3 || n.is_multiple_of(2) {
            return Err(GridError::BadCount { n });
        }
        Ok(Self { xmin, xmax, n })
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        (self.xmax - self.xmin) / (self.n - 1) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.xmin + self.h() * j as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }

    /// Index of the node closest to `x`, clamped into range.
    pub fn nearest_index(&self, x: f64) -> usize {
        let raw = ((x - self.xmin) / self.h()).round();
        (raw.max(0.0) as usize).min(self.n - 1)
    }

    /// Same bounds with doubled resolution (halved spacing).
    pub fn refined(&self) -> Self {
        Self {
            xmin: self.xmin,
            xmax: self.xmax,
            n: 2 * self.n - 1,
        }
    }
}

/// Uniform sample points, `count` of them, spanning `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let h = (hi - lo) / (count - 1) as f64;
    (0..count).map(|j| lo + h * j as f64).collect()
}
