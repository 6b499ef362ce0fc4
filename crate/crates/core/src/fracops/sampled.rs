use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{FracError, Grid};

/// Complex samples of a function on a [`Grid`].
///
/// Operators whose value at one endpoint is a discretization of a singular
/// quantity record that node in [`SampledFunction::boundary_inaccurate`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<Complex64>,
    inaccurate: Option<usize>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self, FracError> {
        if values.len() != grid.n() {
            return Err(FracError::LengthMismatch {
                expected: grid.n(),
                got: values.len(),
            });
        }
        if let Some(index) = values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(FracError::NonFinite { index });
        }
        Ok(SampledFunction {
            grid,
            values,
            inaccurate: None,
        })
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(grid.n(), values.len());
        SampledFunction {
            grid,
            values,
            inaccurate: None,
        }
    }

    pub fn from_real(grid: Grid, values: Vec<f64>) -> Result<Self, FracError> {
        Self::new(
            grid,
            values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid, f: F) -> Result<Self, FracError> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(grid: Grid, f: F) -> Result<Self, FracError> {
        Self::from_real(grid, grid.nodes().map(f).collect())
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::from_parts(grid, vec![Complex64::new(0.0, 0.0); grid.n()])
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.re).collect()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.values.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    /// Node whose value approximates a singular endpoint limit, if any.
    pub fn boundary_inaccurate(&self) -> Option<usize> {
        self.inaccurate
    }

    pub(crate) fn flag_inaccurate(mut self, node: usize) -> Self {
        self.inaccurate = Some(node);
        self
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|&z| f(z)).collect())
    }

    pub fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(&self, other: &Self, f: F) -> Self {
        assert_eq!(
            self.grid, other.grid,
            "sampled functions live on different grids"
        );
        Self::from_parts(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    /// Samples of `t ↦ f(a + b - t)`. The inaccurate-node flag moves with
    /// its node.
    pub fn reflected(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        SampledFunction {
            grid: self.grid,
            values,
            inaccurate: self.inaccurate.map(|k| self.grid.n() - 1 - k),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_interior(0, 0)
    }

    /// Maximum modulus after skipping `skip_start` leading and `skip_end`
    /// trailing nodes.
    pub fn sup_norm_interior(&self, skip_start: usize, skip_end: usize) -> f64 {
        let n = self.values.len();
        if skip_start + skip_end >= n {
            return 0.0;
        }
        self.values[skip_start..n - skip_end]
            .iter()
            .fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Discrete L2 norm `sqrt(h Σ |f_k|²)` over the nodes kept by
    /// [`SampledFunction::sup_norm_interior`].
    pub fn l2_norm_interior(&self, skip_start: usize, skip_end: usize) -> f64 {
        let n = self.values.len();
        if skip_start + skip_end >= n {
            return 0.0;
        }
        let sum: f64 = self.values[skip_start..n - skip_end]
            .iter()
            .map(|z| z.norm_sqr())
            .sum();
        (self.grid.h() * sum).sqrt()
    }

    /// Composite trapezoidal rule over the whole grid.
    pub fn trapezoid(&self) -> Complex64 {
        let n = self.values.len();
        let inner: Complex64 = self.values[1..n - 1].iter().sum();
        (inner + (self.values[0] + self.values[n - 1]) * 0.5) * self.grid.h()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, z) in self.grid.nodes().zip(&self.values) {
            out.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", t, z.re, z.im));
        }
        out
    }

    /// Reads `t,re,im` rows and rebuilds the grid from the first and last
    /// `t` and the row count. Rows must be uniformly spaced.
    pub fn from_csv(text: &str) -> Result<Self, FracError> {
        let rows = parse_csv_rows(text)?;
        if rows.len() < 3 {
            return Err(FracError::Format(format!(
                "need at least 3 rows, got {}",
                rows.len()
            )));
        }
        let grid = Grid::new(rows[0].0, rows[rows.len() - 1].0, rows.len())?;
        Self::check_nodes(&grid, &rows)?;
        Self::new(grid, rows.iter().map(|r| r.1).collect())
    }

    /// Reads `t,re,im` rows that must match `grid` node for node.
    pub fn from_csv_on(grid: Grid, text: &str) -> Result<Self, FracError> {
        let rows = parse_csv_rows(text)?;
        if rows.len() != grid.n() {
            return Err(FracError::LengthMismatch {
                expected: grid.n(),
                got: rows.len(),
            });
        }
        Self::check_nodes(&grid, &rows)?;
        Self::new(grid, rows.iter().map(|r| r.1).collect())
    }

    fn check_nodes(grid: &Grid, rows: &[(f64, Complex64)]) -> Result<(), FracError> {
        let tol = 1e-9 * grid.h();
        for (k, (t, _)) in rows.iter().enumerate() {
            if (t - grid.node(k)).abs() > tol.max(1e-12 * t.abs()) {
                return Err(FracError::Format(format!(
                    "row {} has t = {t}, expected uniform node {}",
                    k + 1,
                    grid.node(k)
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonRecord {
            grid: self.grid,
            values: self.values.iter().map(|z| [z.re, z.im]).collect(),
        })
        .expect("sampled function serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FracError> {
        let rec: JsonRecord =
            serde_json::from_str(text).map_err(|e| FracError::Format(e.to_string()))?;
        Self::new(
            rec.grid,
            rec.values
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    grid: Grid,
    values: Vec<[f64; 2]>,
}

fn parse_csv_rows(text: &str) -> Result<Vec<(f64, Complex64)>, FracError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == "t,re,im" => {}
        other => {
            return Err(FracError::Format(format!(
                "expected header 't,re,im', found {:?}",
                other.unwrap_or("")
            )))
        }
    }
    lines
        .enumerate()
        .map(|(k, line)| {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| FracError::Format(format!("row {}: bad number '{s}'", k + 1)))
            };
            match fields.as_slice() {
                [t, re, im] => Ok((num(t)?, Complex64::new(num(re)?, num(im)?))),
                _ => Err(FracError::Format(format!(
                    "row {}: expected 3 fields, found {}",
                    k + 1,
                    fields.len()
                ))),
            }
        })
        .collect()
}

impl Add for &SampledFunction {
    type Output = SampledFunction;

    fn add(self, rhs: Self) -> SampledFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SampledFunction {
    type Output = SampledFunction;

    fn sub(self, rhs: Self) -> SampledFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &SampledFunction {
    type Output = SampledFunction;

    fn mul(self, rhs: Self) -> SampledFunction {
        self.zip_with(rhs, |a, b| a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(0.0, 1.0, 11).unwrap()
    }

    #[test]
    fn rejects_length_mismatch_and_non_finite() {
        assert!(matches!(
            SampledFunction::from_real(grid(), vec![0.0; 10]),
            Err(FracError::LengthMismatch {
                expected: 11,
                got: 10
            })
        ));
        let mut v = vec![0.0; 11];
        v[4] = f64::NAN;
        assert!(matches!(
            SampledFunction::from_real(grid(), v),
            Err(FracError::NonFinite { index: 4 })
        ));
    }

    #[test]
    fn trapezoid_integrates_linear_exactly() {
        let f = SampledFunction::from_real_fn(grid(), |t| 3.0 * t + 1.0).unwrap();
        assert!((f.trapezoid().re - 2.5).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = SampledFunction::from_fn(grid(), |t| Complex64::new(t.sin(), -t / 3.0)).unwrap();
        let text = f.to_csv();
        assert!(text.starts_with("t,re,im\n"));
        let back = SampledFunction::from_csv(&text).unwrap();
        assert_eq!(back.values(), f.values());
        let on = SampledFunction::from_csv_on(grid(), &text).unwrap();
        assert_eq!(on.values(), f.values());
    }

    #[test]
    fn csv_reader_rejects_bad_input() {
        let f = SampledFunction::from_real_fn(grid(), |t| t).unwrap();
        let text = f.to_csv();
        let other = Grid::new(0.0, 1.0, 12).unwrap();
        assert!(matches!(
            SampledFunction::from_csv_on(other, &text),
            Err(FracError::LengthMismatch {
                expected: 12,
                got: 11
            })
        ));
        assert!(SampledFunction::from_csv("x,y\n1,2\n").is_err());
        assert!(SampledFunction::from_csv("t,re,im\n0,1,0\n0.5,1\n1,1,0\n").is_err());
        assert!(SampledFunction::from_csv("t,re,im\n0,1,0\n0.1,1,0\n1,1,0\n").is_err());
    }

    #[test]
    fn json_round_trip_and_length_check() {
        let f = SampledFunction::from_fn(grid(), |t| Complex64::new(t, t * t)).unwrap();
        let text = f.to_json();
        assert!(text.starts_with(r#"{"grid":{"a":0.0,"b":1.0,"n":11},"values":[[0.0,0.0],"#));
        assert_eq!(SampledFunction::from_json(&text).unwrap(), f);
        let bad = r#"{"grid":{"a":0,"b":1,"n":4},"values":[[0,0],[1,0],[2,0]]}"#;
        assert!(matches!(
            SampledFunction::from_json(bad),
            Err(FracError::LengthMismatch {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn reflection_moves_the_flag() {
        let f = SampledFunction::zeros(grid()).flag_inaccurate(0);
        assert_eq!(f.reflected().boundary_inaccurate(), Some(10));
    }
}
