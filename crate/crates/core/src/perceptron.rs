//! The one-shot unitary-weight perceptron.
//!
//! Training is four steps with no update loop: take the bra `<x_j|` of every
//! input, form the outer-product weight `|y_j><x_j|`, sum the weights, and
//! replace the singular values of the sum by ones. The resulting unitary
//! `F · I · W_new` is the predictor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{apply, inner, tensor, Complex, Matrix, StateVector};
use crate::svd::{self, numerical_rank, DEFAULT_RANK_TOL};

/// Inner-product tolerance `train` uses to decide whether a set is consistent.
pub const CONSISTENCY_TOL: f64 = 1e-8;

/// Entrywise tolerance for exact-phase matching in [`fidelity`].
pub const EXACT_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    input: StateVector,
    target: StateVector,
}

impl TrainingPair {
    pub fn new(input: StateVector, target: StateVector) -> Result<Self> {
        if input.dim() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: input.dim(),
                found: target.dim(),
            });
        }
        Ok(Self { input, target })
    }

    pub fn input(&self) -> &StateVector {
        &self.input
    }

    pub fn target(&self) -> &StateVector {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.input.dim()
    }
}

/// How the training inputs cover the state space, by numerical rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Completeness {
    LessComplete,
    Complete,
    OverComplete,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::LessComplete => "LessComplete",
            Completeness::Complete => "Complete",
            Completeness::OverComplete => "OverComplete",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    dim: usize,
    pairs: Vec<TrainingPair>,
    completeness: Completeness,
}

impl TrainingSet {
    pub fn new(pairs: Vec<TrainingPair>) -> Result<Self> {
        Self::with_rank_tol(pairs, DEFAULT_RANK_TOL)
    }

    pub fn with_rank_tol(pairs: Vec<TrainingPair>, rank_tol: f64) -> Result<Self> {
        let dim = pairs.first().ok_or(Error::EmptyTrainingSet)?.dim();
        if let Some(bad) = pairs.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let completeness = classify_set(&pairs, rank_tol)?;
        Ok(Self {
            dim,
            pairs,
            completeness,
        })
    }

    /// Convenience constructor from `(input, target)` tuples.
    pub fn from_states(pairs: Vec<(StateVector, StateVector)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .map(|(x, y)| TrainingPair::new(x, y))
                .collect::<Result<_>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[TrainingPair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn completeness(&self) -> Completeness {
        self.completeness
    }
}

/// `|y><x|` for one pair.
pub fn pair_weight(p: &TrainingPair) -> Matrix {
    tensor(&p.target.ket(), &p.input.bra())
}

/// Sum of all pair weights.
pub fn total_weight(s: &TrainingSet) -> Matrix {
    s.pairs.iter().fold(Matrix::zeros(s.dim, s.dim), |acc, p| {
        acc.add(&pair_weight(p)).expect("pairs share the set dimension")
    })
}

/// Rank of the matrix whose columns are the inputs, compared with the
/// dimension and the number of pairs.
pub fn classify_set(pairs: &[TrainingPair], rank_tol: f64) -> Result<Completeness> {
    let dim = pairs.first().ok_or(Error::EmptyTrainingSet)?.dim();
    let columns: Vec<&[Complex]> = pairs.iter().map(|p| p.input.amplitudes()).collect();
    let inputs = Matrix::from_columns(&columns)?;
    let dec = svd::svd_with_rank_tol(&inputs, rank_tol)?;
    let rank = numerical_rank(&dec.sigma, rank_tol);
    Ok(if rank < dim {
        Completeness::LessComplete
    } else if pairs.len() == dim {
        Completeness::Complete
    } else {
        Completeness::OverComplete
    })
}

/// Outcome of comparing all pairwise input and target inner products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub ok: bool,
    /// Zero-based indices of the pair with the largest violation.
    pub worst_pair: Option<(usize, usize)>,
    /// `max |<x_i|x_j> - <y_i|y_j>|` over all pairs.
    pub violation: f64,
    pub tol: f64,
}

impl fmt::Display for ConsistencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.worst_pair {
            Some((i, j)) => write!(
                f,
                "pairs {i} and {j} violate inner-product preservation by {:.6e} (tol {:e})",
                self.violation, self.tol
            ),
            None => write!(f, "all inner products preserved"),
        }
    }
}

/// A unitary mapping every `x_i` to `y_i` exists iff `<x_i|x_j> = <y_i|y_j>`
/// for all `i, j`.
pub fn consistency_check(s: &TrainingSet, tol: f64) -> ConsistencyReport {
    let mut worst = None;
    let mut violation = 0.0;
    for (i, a) in s.pairs.iter().enumerate() {
        for (j, b) in s.pairs.iter().enumerate().skip(i) {
            let dx = inner(&a.input, &b.input).expect("shared dim");
            let dy = inner(&a.target, &b.target).expect("shared dim");
            let d = (dx - dy).norm();
            if d > violation {
                violation = d;
                worst = Some((i, j));
            }
        }
    }
    ConsistencyReport {
        ok: violation <= tol,
        worst_pair: worst,
        violation,
        tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainOptions {
    pub rank_tol: f64,
    /// Train on inconsistent data anyway; the result is then the closest
    /// unitary to the total weight rather than an exact fit.
    pub force: bool,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            rank_tol: DEFAULT_RANK_TOL,
            force: false,
        }
    }
}

impl TrainOptions {
    pub fn with_rank_tol(mut self, rank_tol: f64) -> Self {
        self.rank_tol = rank_tol;
        self
    }

    pub fn forced(mut self, force: bool) -> Self {
        self.force = force;
        self
    }
}

/// Learned predictor `F · Σ_new · W_new` with `Σ_new = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronModel {
    pub f: Matrix,
    /// Singular values of the total weight, kept for diagnostics.
    pub sigma: Vec<f64>,
    pub w_new: Matrix,
    pub unitary: Matrix,
    pub rank: usize,
    pub rank_tol: f64,
    pub dim: usize,
}

impl PerceptronModel {
    /// `false` means predictions outside the span of the training inputs
    /// depend on the basis-completion convention.
    pub fn is_full_rank(&self) -> bool {
        self.rank == self.dim
    }

    /// `f · diag(sigma) · w_new`, i.e. the total weight the model came from.
    pub fn total_weight(&self) -> Matrix {
        let fs = crate::linalg::matmul(&self.f, &Matrix::diag(&self.sigma)).expect("square");
        crate::linalg::matmul(&fs, &self.w_new).expect("square")
    }
}

/// One-shot training: a single SVD of the total weight, no update loop.
pub fn train(s: &TrainingSet, opts: &TrainOptions) -> Result<PerceptronModel> {
    if !opts.force {
        let report = consistency_check(s, CONSISTENCY_TOL);
        if !report.ok {
            return Err(Error::InconsistentTrainingSet(report));
        }
    }
    let w = total_weight(s);
    if !w.is_square() {
        return Err(Error::NotSquare {
            rows: w.rows(),
            cols: w.cols(),
        });
    }
    let dec = svd::svd_with_rank_tol(&w, opts.rank_tol)?;
    let unitary = crate::linalg::matmul(&dec.u, &dec.v_dag)?;
    Ok(PerceptronModel {
        f: dec.u,
        sigma: dec.sigma,
        w_new: dec.v_dag,
        unitary,
        rank: dec.rank,
        rank_tol: opts.rank_tol,
        dim: s.dim,
    })
}

pub fn predict(m: &PerceptronModel, x: &StateVector) -> Result<StateVector> {
    if x.dim() != m.dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim,
            found: x.dim(),
        });
    }
    let out = apply(&m.unitary, x)?;
    StateVector::new(out).map_err(|e| Error::NumericalFailure(format!("prediction lost norm: {e}")))
}

/// Phase-invariant mode gives `|<a|b>|^2`. Exact mode gives 1 when the
/// states agree entrywise within [`EXACT_MATCH_TOL`] and otherwise
/// `max(0, 1 - max_i |a_i - b_i|)`.
pub fn fidelity(a: &StateVector, b: &StateVector, phase_invariant: bool) -> Result<f64> {
    if phase_invariant {
        return Ok(inner(a, b)?.norm_sqr().min(1.0));
    }
    let d = a.max_abs_diff(b).ok_or(Error::DimensionMismatch {
        expected: a.dim(),
        found: b.dim(),
    })?;
    Ok(if d <= EXACT_MATCH_TOL {
        1.0
    } else {
        (1.0 - d).max(0.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, phase, ONE, ZERO};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn real(v: &[f64]) -> StateVector {
        StateVector::normalize(v.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    fn hadamard_example() -> TrainingSet {
        TrainingSet::from_states(vec![
            (real(&[1.0, 0.0]), real(&[1.0, 1.0])),
            (real(&[0.0, 1.0]), real(&[1.0, -1.0])),
            (real(&[1.0, 2.0]), real(&[3.0, -1.0])),
        ])
        .unwrap()
    }

    fn scaled(rows: &[&[f64]], k: f64) -> Matrix {
        Matrix::from_real_rows(rows).unwrap().scale(c(k, 0.0))
    }

    #[test]
    fn pair_weights() {
        let s = hadamard_example();
        let w1 = pair_weight(&s.pairs()[0]);
        assert!(w1.max_abs_diff(&scaled(&[&[1.0, 0.0], &[1.0, 0.0]], FRAC_1_SQRT_2)).unwrap() < 1e-15);
        let w3 = pair_weight(&s.pairs()[2]);
        let expected = scaled(&[&[0.6, 1.2], &[-0.2, -0.4]], FRAC_1_SQRT_2);
        assert!(w3.max_abs_diff(&expected).unwrap() < 1e-15);

        let p = TrainingPair::new(real(&[0.0, 1.0]), StateVector::new(vec![ZERO, c(0.0, 1.0)]).unwrap()).unwrap();
        let expected = Matrix::from_rows(vec![vec![ZERO, ZERO], vec![ZERO, c(0.0, 1.0)]]).unwrap();
        assert_eq!(pair_weight(&p), expected);
    }

    #[test]
    fn total_weight_of_hadamard_example() {
        let w = total_weight(&hadamard_example());
        let expected = scaled(&[&[1.6, 2.2], &[0.8, -1.4]], FRAC_1_SQRT_2);
        assert!(w.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn single_pair_total_is_pair_weight() {
        let s = TrainingSet::from_states(vec![(real(&[2.0, 1.0]), real(&[1.0, -3.0]))]).unwrap();
        assert_eq!(total_weight(&s), pair_weight(&s.pairs()[0]));
    }

    #[test]
    fn classification() {
        assert_eq!(hadamard_example().completeness(), Completeness::OverComplete);
        let basis = TrainingSet::from_states(vec![
            (real(&[1.0, 0.0]), real(&[1.0, 0.0])),
            (real(&[0.0, 1.0]), real(&[0.0, 1.0])),
        ])
        .unwrap();
        assert_eq!(basis.completeness(), Completeness::Complete);
        let one = TrainingSet::from_states(vec![(real(&[1.0, 3.0]), real(&[1.0, 3.0]))]).unwrap();
        assert_eq!(one.completeness(), Completeness::LessComplete);
        // Repeated input does not add rank.
        let rep = TrainingSet::from_states(vec![
            (real(&[1.0, 0.0]), real(&[1.0, 0.0])),
            (real(&[1.0, 0.0]), real(&[1.0, 0.0])),
        ])
        .unwrap();
        assert_eq!(rep.completeness(), Completeness::LessComplete);
    }

    #[test]
    fn set_construction_errors() {
        assert!(matches!(TrainingSet::new(vec![]), Err(Error::EmptyTrainingSet)));
        assert!(TrainingPair::new(real(&[1.0, 0.0]), real(&[1.0, 0.0, 0.0, 0.0])).is_err());
        let p2 = TrainingPair::new(real(&[1.0, 0.0]), real(&[1.0, 0.0])).unwrap();
        let p4 = TrainingPair::new(real(&[1.0, 0.0, 0.0, 0.0]), real(&[1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(
            TrainingSet::new(vec![p2, p4]),
            Err(Error::DimensionMismatch { expected: 2, found: 4 })
        ));
    }

    #[test]
    fn consistency() {
        let report = consistency_check(&hadamard_example(), 1e-12);
        assert!(report.ok, "{report}");

        let bad = TrainingSet::from_states(vec![
            (real(&[1.0, 0.0]), real(&[1.0, 0.0])),
            (real(&[1.0, 0.0]), real(&[0.0, 1.0])),
        ])
        .unwrap();
        let report = consistency_check(&bad, 1e-8);
        assert!(!report.ok);
        assert_eq!(report.worst_pair, Some((0, 1)));
        assert!((report.violation - 1.0).abs() < 1e-12);
        assert!(matches!(
            train(&bad, &TrainOptions::default()),
            Err(Error::InconsistentTrainingSet(_))
        ));

        let single = TrainingSet::from_states(vec![(real(&[1.0, 1.0]), real(&[0.0, 1.0]))]).unwrap();
        assert!(consistency_check(&single, 1e-15).ok);
    }

    #[test]
    fn forced_training_returns_closest_unitary() {
        let bad = TrainingSet::from_states(vec![
            (real(&[1.0, 0.0]), real(&[1.0, 0.0])),
            (real(&[1.0, 0.0]), real(&[0.0, 1.0])),
        ])
        .unwrap();
        let model = train(&bad, &TrainOptions::default().forced(true)).unwrap();
        assert!(crate::linalg::is_unitary(&model.unitary, 1e-12).unwrap());
        assert_eq!(model.rank, 1);
    }

    #[test]
    fn trains_hadamard() {
        let s = hadamard_example();
        let model = train(&s, &TrainOptions::default()).unwrap();
        let h = scaled(&[&[1.0, 1.0], &[1.0, -1.0]], FRAC_1_SQRT_2);
        assert!(model.unitary.max_abs_diff(&h).unwrap() < 1e-12);
        assert!(model.total_weight().max_abs_diff(&total_weight(&s)).unwrap() < 1e-12);
        for p in s.pairs() {
            let out = predict(&model, p.input()).unwrap();
            assert!(out.max_abs_diff(p.target()).unwrap() < 1e-12);
        }
        assert!(predict(&model, &real(&[1.0, 0.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn superposition_prediction_on_t_gate() {
        let e = phase(FRAC_PI_4);
        let norm = 145f64.sqrt();
        let s = TrainingSet::from_states(vec![
            (real(&[1.0, 0.0]), real(&[1.0, 0.0])),
            (real(&[0.0, 1.0]), StateVector::new(vec![ZERO, e]).unwrap()),
            (
                real(&[-8.0, -9.0]),
                StateVector::new(vec![c(-8.0 / norm, 0.0), e * (-9.0 / norm)]).unwrap(),
            ),
        ])
        .unwrap();
        let model = train(&s, &TrainOptions::default()).unwrap();
        let out = predict(&model, &real(&[-8.0, -9.0])).unwrap();
        assert!((out[0] - c(-8.0 / norm, 0.0)).norm() < 1e-12);
        assert!((out[1] - e * (-9.0 / norm)).norm() < 1e-12);
    }

    #[test]
    fn fidelity_modes() {
        let k0 = real(&[1.0, 0.0]);
        let k1 = real(&[0.0, 1.0]);
        let plus = real(&[1.0, 1.0]);
        assert_eq!(fidelity(&k0, &k0, false).unwrap(), 1.0);
        assert_eq!(fidelity(&k0, &k0, true).unwrap(), 1.0);
        assert_eq!(fidelity(&k0, &k1, true).unwrap(), 0.0);
        assert_eq!(fidelity(&k0, &k1, false).unwrap(), 0.0);
        assert!((fidelity(&plus, &k0, true).unwrap() - 0.5).abs() < 1e-15);
        // Global phase: invisible to the phase-invariant score only.
        let minus_k0 = StateVector::new(vec![-ONE, ZERO]).unwrap();
        assert_eq!(fidelity(&k0, &minus_k0, true).unwrap(), 1.0);
        assert!(fidelity(&k0, &minus_k0, false).unwrap() < 1.0);
        assert!(fidelity(&k0, &real(&[1.0, 0.0, 0.0, 0.0]), false).is_err());
    }
}
