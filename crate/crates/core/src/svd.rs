//! Complex singular value decomposition by one-sided (Hestenes) Jacobi
//! rotations, and the unitary polar factor `U V†` built from it.
//!
//! Output is made deterministic by a phase convention: every column of `U`
//! is rotated so its largest-magnitude entry (lowest row on ties) is real and
//! positive, with the matching column of `V` rotated by the same phase.
//! Columns of `U` belonging to numerically zero singular values are filled by
//! Gram-Schmidt against `e_0, e_1, ...` in index order.

use std::cell::Cell;

use crate::error::{Error, Result};
use crate::linalg::{conj_transpose, inner_slices, matmul, Complex, Matrix, ONE, ZERO};

/// Relative rank tolerance, scaled by `max(1, sigma_max)`.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Sweep cap; Jacobi converges quadratically so hitting it means something is wrong.
pub const MAX_SWEEPS: usize = 100;

/// Absolute off-diagonal floor, relative to the Frobenius norm of the input.
const OFF_DIAG_FLOOR: f64 = 1e-14;

/// Singular values at or below this fraction of `sigma_max` get a canonical
/// left vector instead of a normalized (noise) column.
const NULL_REL: f64 = 1e-13;

/// Residual a canonical basis vector must keep after projection to be used
/// for completion.
const COMPLETION_MIN_RESIDUAL: f64 = 1e-3;

thread_local! {
    static DECOMPOSITIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of decompositions performed on the current thread so far.
pub fn decompositions_on_this_thread() -> usize {
    DECOMPOSITIONS.with(Cell::get)
}

/// `m = u · diag(sigma) · v_dag`.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: Matrix,
    /// Descending, length `min(rows, cols)`.
    pub sigma: Vec<f64>,
    pub v_dag: Matrix,
    pub rank: usize,
    pub rank_tol: f64,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let (rows, cols) = (self.u.rows(), self.v_dag.rows());
        let mut s = Matrix::zeros(rows, cols);
        for (i, &x) in self.sigma.iter().enumerate() {
            s.set(i, i, Complex::new(x, 0.0));
        }
        let us = matmul(&self.u, &s).expect("u is rows x rows");
        matmul(&us, &self.v_dag).expect("sigma is rows x cols")
    }

    pub fn v(&self) -> Matrix {
        conj_transpose(&self.v_dag)
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

/// Number of singular values above `rank_tol · max(1, sigma_max)`.
pub fn numerical_rank(sigma: &[f64], rank_tol: f64) -> usize {
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let threshold = rank_tol * sigma_max.max(1.0);
    sigma.iter().filter(|&&s| s > threshold).count()
}

pub fn svd(m: &Matrix) -> Result<SvdResult> {
    svd_with_rank_tol(m, DEFAULT_RANK_TOL)
}

pub fn svd_with_rank_tol(m: &Matrix, rank_tol: f64) -> Result<SvdResult> {
    if !(rank_tol >= 0.0 && rank_tol.is_finite()) {
        return Err(Error::InvalidConfig(format!("rank tolerance {rank_tol}")));
    }
    DECOMPOSITIONS.with(|n| n.set(n.get() + 1));

    let (mut u_cols, sigma, mut v_cols) = if m.rows() >= m.cols() {
        tall_svd(m)?
    } else {
        // m = (m†)† = (U' Σ V'†)† = V' Σ U'†
        let (u, s, v) = tall_svd(&conj_transpose(m))?;
        (v, s, u)
    };

    for k in 0..u_cols.len() {
        let phase = canonical_phase(&u_cols[k]);
        u_cols[k].iter_mut().for_each(|z| *z *= phase);
        if let Some(v) = v_cols.get_mut(k) {
            v.iter_mut().for_each(|z| *z *= phase);
        }
    }
    for v in v_cols.iter_mut().skip(u_cols.len()) {
        let phase = canonical_phase(v);
        v.iter_mut().for_each(|z| *z *= phase);
    }

    let u = columns_to_matrix(&u_cols)?;
    let v = columns_to_matrix(&v_cols)?;
    let rank = numerical_rank(&sigma, rank_tol);
    Ok(SvdResult {
        u,
        sigma,
        v_dag: conj_transpose(&v),
        rank,
        rank_tol,
    })
}

/// Unitary polar factor `U V†` (the singular values replaced by ones),
/// together with the numerical rank of `m`.
///
/// For invertible `m` this is the unique unitary closest to `m` in Frobenius
/// norm. For rank-deficient `m` its action on the row space of `m` is fixed;
/// outside it the result depends on the null-space completion convention.
pub fn polar_unitary(m: &Matrix, rank_tol: f64) -> Result<(Matrix, usize)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dec = svd_with_rank_tol(m, rank_tol)?;
    Ok((matmul(&dec.u, &dec.v_dag)?, dec.rank))
}

type Columns = Vec<Vec<Complex>>;

/// SVD of a matrix with `rows >= cols`. Returns full `U` (rows x rows) and
/// `V` (cols x cols) as column lists, with sigma sorted descending.
fn tall_svd(m: &Matrix) -> Result<(Columns, Vec<f64>, Columns)> {
    let (rows, cols) = (m.rows(), m.cols());
    debug_assert!(rows >= cols);
    let mut b: Columns = (0..cols).map(|j| m.column(j)).collect();
    let mut v: Columns = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { ONE } else { ZERO }).collect())
        .collect();

    let floor = (OFF_DIAG_FLOOR * m.frobenius_norm()).powi(2);
    let rel = 4.0 * rows as f64 * f64::EPSILON;
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                rotated |= rotate_pair(&mut b, &mut v, p, q, rel, floor);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NumericalFailure(format!(
            "Jacobi SVD did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let norms: Vec<f64> = b.iter().map(|col| col_norm(col)).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let v_sorted: Columns = order.iter().map(|&i| v[i].clone()).collect();

    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let null_threshold = NULL_REL * sigma_max;
    let mut u: Columns = Vec::with_capacity(rows);
    for (&i, &s) in order.iter().zip(&sigma) {
        let candidate = if s > null_threshold && s > 0.0 {
            let mut col: Vec<Complex> = b[i].iter().map(|z| z / s).collect();
            orthogonalize(&mut col, &u);
            let r = col_norm(&col);
            (r > 0.5).then(|| {
                col.iter_mut().for_each(|z| *z /= r);
                col
            })
        } else {
            None
        };
        match candidate {
            Some(col) => u.push(col),
            None => u.push(canonical_completion(&u, rows)?),
        }
    }
    while u.len() < rows {
        let col = canonical_completion(&u, rows)?;
        u.push(col);
    }
    Ok((u, sigma, v_sorted))
}

/// One complex Jacobi rotation on columns `p`, `q`. Returns whether it rotated.
fn rotate_pair(b: &mut Columns, v: &mut Columns, p: usize, q: usize, rel: f64, floor: f64) -> bool {
    let alpha: f64 = b[p].iter().map(|z| z.norm_sqr()).sum();
    let beta: f64 = b[q].iter().map(|z| z.norm_sqr()).sum();
    let gamma: Complex = b[p].iter().zip(&b[q]).map(|(x, y)| x.conj() * y).sum();
    let g = gamma.norm();
    if g <= rel * (alpha * beta).sqrt() || g <= floor {
        return false;
    }
    // Phase b_q so that <b_p|b_q> is real, then apply a real rotation.
    let eta = gamma.conj() / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = cs * t;
    for cols in [b, v] {
        let (left, right) = cols.split_at_mut(q);
        for (xp, xq) in left[p].iter_mut().zip(right[0].iter_mut()) {
            let bp = *xp;
            let bq = *xq * eta;
            *xp = bp * cs - bq * sn;
            *xq = bp * sn + bq * cs;
        }
    }
    true
}

fn col_norm(col: &[Complex]) -> f64 {
    col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Two passes of modified Gram-Schmidt against an orthonormal set.
fn orthogonalize(col: &mut [Complex], basis: &[Vec<Complex>]) {
    for _ in 0..2 {
        for e in basis {
            let proj = inner_slices(e, col).expect("equal lengths");
            for (x, y) in col.iter_mut().zip(e) {
                *x -= proj * y;
            }
        }
    }
}

/// First canonical basis vector (in index order) that survives projection
/// off `basis`, orthogonalized and normalized.
fn canonical_completion(basis: &[Vec<Complex>], dim: usize) -> Result<Vec<Complex>> {
    for k in 0..dim {
        let mut col = vec![ZERO; dim];
        col[k] = ONE;
        orthogonalize(&mut col, basis);
        let r = col_norm(&col);
        if r > COMPLETION_MIN_RESIDUAL {
            col.iter_mut().for_each(|z| *z /= r);
            return Ok(col);
        }
    }
    Err(Error::NumericalFailure(
        "could not complete an orthonormal basis".to_string(),
    ))
}

/// Unit phase that makes the largest-magnitude entry (first on ties) real positive.
fn canonical_phase(col: &[Complex]) -> Complex {
    let mut best = ZERO;
    let mut best_abs = 0.0;
    for z in col {
        let a = z.norm();
        if a > best_abs {
            best_abs = a;
            best = *z;
        }
    }
    if best_abs == 0.0 {
        ONE
    } else {
        best.conj() / best_abs
    }
}

fn columns_to_matrix(cols: &Columns) -> Result<Matrix> {
    let refs: Vec<&[Complex]> = cols.iter().map(Vec::as_slice).collect();
    Matrix::from_columns(&refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply, c, is_unitary, StateVector};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn example_weight() -> Matrix {
        Matrix::from_real_rows(&[&[1.6, 2.2], &[0.8, -1.4]])
            .unwrap()
            .scale(c(FRAC_1_SQRT_2, 0.0))
    }

    fn check_invariants(m: &Matrix, dec: &SvdResult) {
        assert!(is_unitary(&dec.u, 1e-10).unwrap());
        assert!(is_unitary(&dec.v_dag, 1e-10).unwrap());
        assert!(dec.sigma.windows(2).all(|w| w[0] >= w[1]));
        assert!(dec.sigma.iter().all(|&s| s >= 0.0));
        assert!(dec.reconstruct().max_abs_diff(m).unwrap() <= 1e-10);
    }

    #[test]
    fn singular_values_of_total_weight() {
        let w = example_weight();
        let dec = svd(&w).unwrap();
        check_invariants(&w, &dec);
        assert!((dec.sigma[0] - 2.0).abs() < 1e-12);
        assert!((dec.sigma[1] - 1.0).abs() < 1e-12);
        assert_eq!(dec.rank, 2);
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let dec = svd(&Matrix::identity(4)).unwrap();
        assert_eq!(dec.sigma, vec![1.0; 4]);
        assert_eq!(dec.u, Matrix::identity(4));
        assert_eq!(dec.v_dag, Matrix::identity(4));
    }

    #[test]
    fn zero_and_rank_one() {
        let z = Matrix::zeros(3, 3);
        let dec = svd(&z).unwrap();
        check_invariants(&z, &dec);
        assert_eq!(dec.rank, 0);
        assert_eq!(dec.u, Matrix::identity(3));

        let y = StateVector::normalize(vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)]).unwrap();
        let x = StateVector::normalize(vec![c(0.0, 1.0), c(3.0, 0.0), c(1.0, 0.0)]).unwrap();
        let w = matmul(&y.ket(), &x.bra()).unwrap();
        let dec = svd(&w).unwrap();
        check_invariants(&w, &dec);
        assert_eq!(dec.rank, 1);
        assert!((dec.sigma[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rectangular_shapes() {
        let m = Matrix::from_rows(vec![
            vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.5)],
            vec![c(-0.5, 0.0), c(2.0, 2.0), c(0.0, 0.0)],
        ])
        .unwrap();
        for a in [m.clone(), conj_transpose(&m)] {
            let dec = svd(&a).unwrap();
            check_invariants(&a, &dec);
            assert_eq!(dec.sigma.len(), 2);
        }
    }

    #[test]
    fn phase_convention_holds() {
        let m = Matrix::from_rows(vec![
            vec![c(0.3, -1.0), c(2.0, 0.1)],
            vec![c(-1.5, 0.7), c(0.2, 0.9)],
        ])
        .unwrap();
        let dec = svd(&m).unwrap();
        for j in 0..2 {
            let col = dec.u.column(j);
            let big = col
                .iter()
                .copied()
                .fold(ZERO, |acc, z| if z.norm() > acc.norm() { z } else { acc });
            assert!(big.im.abs() < 1e-15 && big.re > 0.0);
        }
    }

    #[test]
    fn polar_of_total_weight_is_hadamard() {
        let (p, rank) = polar_unitary(&example_weight(), DEFAULT_RANK_TOL).unwrap();
        let h = Matrix::from_real_rows(&[&[1.0, 1.0], &[1.0, -1.0]])
            .unwrap()
            .scale(c(FRAC_1_SQRT_2, 0.0));
        assert_eq!(rank, 2);
        assert!(p.max_abs_diff(&h).unwrap() < 1e-12);
    }

    #[test]
    fn polar_of_unitary_is_itself() {
        let s = Matrix::from_rows(vec![vec![ONE, ZERO], vec![ZERO, c(0.0, 1.0)]]).unwrap();
        let (p, _) = polar_unitary(&s, DEFAULT_RANK_TOL).unwrap();
        assert!(p.max_abs_diff(&s).unwrap() < 1e-14);
        let dec = svd(&s).unwrap();
        assert!(dec.sigma.iter().all(|x| (x - 1.0).abs() < 1e-14));
    }

    #[test]
    fn polar_of_rank_one_weight_maps_input_to_target() {
        // a = -11, b = 7: x = (a, b)/sqrt(170), y = (a + b, a - b)/sqrt(340).
        let x = StateVector::normalize(vec![c(-11.0, 0.0), c(7.0, 0.0)]).unwrap();
        let y = StateVector::normalize(vec![c(-4.0, 0.0), c(-18.0, 0.0)]).unwrap();
        let w = matmul(&y.ket(), &x.bra()).unwrap();
        let (p, rank) = polar_unitary(&w, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(rank, 1);
        let out = apply(&p, &x).unwrap();
        let got = StateVector::new(out).unwrap();
        assert!(got.max_abs_diff(&y).unwrap() < 1e-14);
    }

    #[test]
    fn polar_requires_square() {
        assert!(matches!(
            polar_unitary(&Matrix::zeros(2, 3), DEFAULT_RANK_TOL),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn rank_tolerance_is_relative_to_max_one_sigma() {
        assert_eq!(numerical_rank(&[1e3, 1e-6, 0.0], 1e-10), 2);
        assert_eq!(numerical_rank(&[1e3, 1e-8, 0.0], 1e-10), 1);
        assert_eq!(numerical_rank(&[1e-3, 5e-11], 1e-10), 1);
        assert_eq!(numerical_rank(&[], 1e-10), 0);
    }

    #[test]
    fn counter_tracks_calls() {
        let before = decompositions_on_this_thread();
        svd(&Matrix::identity(2)).unwrap();
        polar_unitary(&Matrix::identity(2), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(decompositions_on_this_thread() - before, 2);
    }

    #[test]
    fn rejects_bad_rank_tol() {
        assert!(svd_with_rank_tol(&Matrix::identity(2), -1.0).is_err());
        assert!(svd_with_rank_tol(&Matrix::identity(2), f64::NAN).is_err());
    }
}
