use serde::{Deserialize, Serialize};

use super::FracError;

/// Uniform discretization of `[a, b]` with `n` nodes, node `k` at `a + k h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
    #[serde(skip)]
    h: f64,
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Grid, FracError> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(FracError::InvalidGrid(format!(
                "need finite a < b, got a = {a}, b = {b}"
            )));
        }
        if n < 3 {
            return Err(FracError::InvalidGrid(format!(
                "need n >= 3 nodes, got {n}"
            )));
        }
        let h = (b - a) / (n - 1) as f64;
        if h <= 0.0 {
            return Err(FracError::InvalidGrid("step underflows to zero".into()));
        }
        Ok(Grid { a, b, n, h })
    }

    /// Grid starting at `a` with `n` nodes spaced `h` apart.
    pub fn from_step(a: f64, h: f64, n: usize) -> Result<Grid, FracError> {
        if !(h.is_finite() && h > 0.0) {
            return Err(FracError::InvalidGrid(format!(
                "need a positive step, got h = {h}"
            )));
        }
        let mut g = Grid::new(a, a + h * (n.max(1) - 1) as f64, n)?;
        g.h = h;
        Ok(g)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn node(&self, k: usize) -> f64 {
        if k + 1 == self.n {
            self.b
        } else {
            self.a + k as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.node(k))
    }

    /// `a + b - t`, the mirror image of `t` in the interval.
    pub fn reflect(&self, t: f64) -> f64 {
        self.a + self.b - t
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            a: f64,
            b: f64,
            n: usize,
        }
        let raw = Raw::deserialize(d)?;
        Grid::new(raw.a, raw.b, raw.n).map_err(serde::de::Error::custom)
    }
}
