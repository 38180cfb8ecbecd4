//! Dense complex vectors and matrices.
//!
//! Everything here is small and row-major; the perceptron never needs more
//! than a handful of qubits, so there are no blocked or sparse paths.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Tolerance on `|norm^2 - 1|` accepted by [`StateVector::new`].
pub const NORM_TOL: f64 = 1e-9;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `e^{i theta}`.
pub fn phase(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

fn all_finite(values: &[Complex]) -> bool {
    values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Unit-norm amplitude vector of a pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex>,
}

impl StateVector {
    /// Rejects vectors whose squared norm is more than [`NORM_TOL`] away from 1.
    pub fn new(amps: Vec<Complex>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyState);
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite("state vector"));
        }
        let norm_sqr = norm_sqr(&amps);
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps })
    }

    /// Scales `amps` to unit norm. Fails only for the zero vector.
    pub fn normalize(amps: Vec<Complex>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::EmptyState);
        }
        if !all_finite(&amps) {
            return Err(Error::NonFinite("state vector"));
        }
        let norm = norm_sqr(&amps).sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        Ok(Self {
            amps: amps.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| c(x, 0.0)).collect())
    }

    /// Computational basis state `|k>` of dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k + 1,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        Ok(Self { amps })
    }

    /// Basis state from a bit label such as `"011"` (leftmost bit most significant).
    pub fn from_bits(bits: &str) -> Result<Self> {
        let n = bits.len();
        let k = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::Parse(format!("`{bits}` is not a bit string")))?;
        Self::basis(1 << n, k)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Column matrix `|x>`.
    pub fn ket(&self) -> Matrix {
        Matrix {
            rows: self.dim(),
            cols: 1,
            data: self.amps.clone(),
        }
    }

    /// Row matrix `<x|`.
    pub fn bra(&self) -> Matrix {
        conj_transpose(&self.ket())
    }

    /// Largest entrywise absolute difference; `None` on dimension mismatch.
    pub fn max_abs_diff(&self, other: &StateVector) -> Option<f64> {
        (self.dim() == other.dim()).then(|| max_abs_diff_slices(&self.amps, &other.amps))
    }
}

impl Index<usize> for StateVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.amps[i]
    }
}

fn norm_sqr(amps: &[Complex]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}

fn max_abs_diff_slices(a: &[Complex], b: &[Complex]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if !all_finite(&data) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let r = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::BadShape {
                rows: r,
                cols,
                len: rows.iter().map(Vec::len).sum(),
            });
        }
        Self::new(r, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| c(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[&[Complex]]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |col| col.len());
        if columns.iter().any(|col| col.len() != rows) {
            return Err(Error::BadShape {
                rows,
                cols,
                len: columns.iter().map(|col| col.len()).sum(),
            });
        }
        if rows == 0 || cols == 0 {
            return Err(Error::BadShape { rows, cols, len: 0 });
        }
        let mut m = Self::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, z) in col.iter().enumerate() {
                m.data[i * cols + j] = *z;
            }
        }
        if !all_finite(&m.data) {
            return Err(Error::NonFinite("matrix"));
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    /// Square diagonal matrix with real entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = c(v, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex>> {
        self.data.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex) {
        self.data[i * self.cols + j] = z;
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex] {
        &mut self.data
    }

    pub fn scale(&self, k: Complex) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        Ok(())
    }

    /// Largest entrywise absolute difference; `None` if the shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> Option<f64> {
        (self.rows == other.rows && self.cols == other.cols)
            .then(|| max_abs_diff_slices(&self.data, &other.data))
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm_sqr(&self.data).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Complex;

    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|z| format_complex(*z)).collect();
            writeln!(f, "{}", row.join("  "))?;
        }
        Ok(())
    }
}

/// Compact rendering: `1`, `-0.707107`, `0.5i`, `0.5-0.5i`.
pub fn format_complex(z: Complex) -> String {
    const EPS: f64 = 5e-13;
    fn num(x: f64) -> String {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    }
    let re_zero = z.re.abs() < EPS;
    let im_zero = z.im.abs() < EPS;
    match (re_zero, im_zero) {
        (_, true) => num(if re_zero { 0.0 } else { z.re }),
        (true, false) => format!("{}i", num(z.im)),
        (false, false) => {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            format!("{}{}{}i", num(z.re), sign, num(z.im.abs()))
        }
    }
}

pub fn conj_transpose(m: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(m.cols, m.rows);
    for i in 0..m.rows {
        for j in 0..m.cols {
            out.data[j * m.rows + i] = m.data[i * m.cols + j].conj();
        }
    }
    out
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            expected: a.cols,
            found: b.rows,
        });
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.data[i * a.cols + k];
            if aik == ZERO {
                continue;
            }
            let brow = &b.data[k * b.cols..(k + 1) * b.cols];
            let orow = &mut out.data[i * b.cols..(i + 1) * b.cols];
            for (o, x) in orow.iter_mut().zip(brow) {
                *o += aik * x;
            }
        }
    }
    Ok(out)
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = Matrix::zeros(rows, cols);
    for ai in 0..a.rows {
        for aj in 0..a.cols {
            let x = a.data[ai * a.cols + aj];
            for bi in 0..b.rows {
                for bj in 0..b.cols {
                    out.data[(ai * b.rows + bi) * cols + aj * b.cols + bj] =
                        x * b.data[bi * b.cols + bj];
                }
            }
        }
    }
    out
}

/// `<a|b>`, antilinear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex> {
    inner_slices(a.amplitudes(), b.amplitudes())
}

pub(crate) fn inner_slices(a: &[Complex], b: &[Complex]) -> Result<Complex> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

/// `m|x>`. The result is not renormalized, so it comes back as raw
/// amplitudes rather than a [`StateVector`].
pub fn apply(m: &Matrix, x: &StateVector) -> Result<Vec<Complex>> {
    apply_slice(m, x.amplitudes())
}

pub fn apply_slice(m: &Matrix, x: &[Complex]) -> Result<Vec<Complex>> {
    if m.cols != x.len() {
        return Err(Error::DimensionMismatch {
            expected: m.cols,
            found: x.len(),
        });
    }
    Ok((0..m.rows)
        .map(|i| m.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
        .collect())
}

/// Largest entrywise deviation of `m m†` and `m† m` from the identity.
pub fn unitarity_error(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let id = Matrix::identity(m.rows);
    let mh = conj_transpose(m);
    let left = matmul(m, &mh)?.max_abs_diff(&id).unwrap_or(f64::INFINITY);
    let right = matmul(&mh, m)?.max_abs_diff(&id).unwrap_or(f64::INFINITY);
    Ok(left.max(right))
}

pub fn is_unitary(m: &Matrix, tol: f64) -> Result<bool> {
    Ok(unitarity_error(m)? <= tol)
}
