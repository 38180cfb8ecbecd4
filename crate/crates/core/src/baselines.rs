//! Iterative learners used as the comparison axis for one-shot training.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{apply_slice, c, Complex, Matrix};
use crate::perceptron::{consistency_check, TrainingSet, CONSISTENCY_TOL};

/// Mean error above which the iterative rule is considered to have diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalOutcome {
    pub weights: Vec<f64>,
    /// Passes over the sample list, including the final error-free pass.
    pub iterations: usize,
    pub converged: bool,
}

fn sign(x: f64) -> f64 {
    if x > 0.0 { 1.0 } else { -1.0 }
}

/// Rosenblatt perceptron with a fixed threshold `theta` and zero initial
/// weights. Activation is `sign(sum w_k x_k - theta)`; each misclassified
/// sample updates `w_k += eta (y - y_hat) x_k`.
pub fn classical_perceptron_train(
    samples: &[(Vec<f64>, f64)],
    eta: f64,
    theta: f64,
    max_iters: usize,
) -> Result<ClassicalOutcome> {
    let n = samples.first().ok_or(Error::EmptyTrainingSet)?.0.len();
    if let Some((x, _)) = samples.iter().find(|(x, _)| x.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let mut w = vec![0.0; n];
    for pass in 1..=max_iters {
        let mut errors = 0;
        for (x, y) in samples {
            let activation: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - theta;
            let y_hat = sign(activation);
            if y_hat != *y {
                errors += 1;
                for (wk, xk) in w.iter_mut().zip(x) {
                    *wk += eta * (y - y_hat) * xk;
                }
            }
        }
        if errors == 0 {
            return Ok(ClassicalOutcome {
                weights: w,
                iterations: pass,
                converged: true,
            });
        }
    }
    Ok(ClassicalOutcome {
        weights: w,
        iterations: max_iters,
        converged: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightInit {
    Zero,
    ScaledIdentity(f64),
    /// Entries uniform in `[-0.1, 0.1]` (real and imaginary parts).
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeConfig {
    pub eta: f64,
    pub max_iters: usize,
    pub init: WeightInit,
    pub stop_tol: f64,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        Self {
            eta: 0.1,
            max_iters: 1000,
            init: WeightInit::Zero,
            stop_tol: 1e-3,
        }
    }
}

impl IterativeConfig {
    fn validate(&self) -> Result<()> {
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidConfig(format!("eta must be >= 0, got {}", self.eta)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
        }
        if !(self.stop_tol >= 0.0) {
            return Err(Error::InvalidConfig(format!("stop_tol must be >= 0, got {}", self.stop_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterativeOutcome {
    /// Mean error after each iteration; `errors[0]` is before any update.
    pub errors: Vec<f64>,
    pub weight: Matrix,
    pub iterations: usize,
    pub final_error: f64,
}

impl IterativeOutcome {
    /// The last `len` steps of the error history never increase.
    pub fn non_increasing_tail(&self, len: usize) -> bool {
        let start = self.errors.len().saturating_sub(len + 1);
        self.errors[start..].windows(2).all(|w| w[1] <= w[0])
    }
}

/// Mean over pairs of `||W|x_j> - |y_j>||`.
pub fn mean_error(w: &Matrix, s: &TrainingSet) -> f64 {
    let total: f64 = s
        .pairs()
        .iter()
        .map(|p| {
            let out = apply_slice(w, p.input().amplitudes()).expect("shared dim");
            out.iter()
                .zip(p.target().amplitudes())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .sum();
    total / s.len() as f64
}

/// Quantum analogue of the delta rule, applied pair by pair:
/// `W <- W + eta (|y> - W|x>) <x|`. One iteration is one pass over the set.
pub fn iterative_quantum_train(s: &TrainingSet, cfg: &IterativeConfig) -> Result<IterativeOutcome> {
    cfg.validate()?;
    let report = consistency_check(s, CONSISTENCY_TOL);
    if !report.ok {
        return Err(Error::InconsistentTrainingSet(report));
    }
    let dim = s.dim();
    let mut w = match cfg.init {
        WeightInit::Zero => Matrix::zeros(dim, dim),
        WeightInit::ScaledIdentity(k) => Matrix::identity(dim).scale(c(k, 0.0)),
        WeightInit::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let data = (0..dim * dim)
                .map(|_| c(rng.random_range(-0.1..0.1), rng.random_range(-0.1..0.1)))
                .collect();
            Matrix::new(dim, dim, data)?
        }
    };

    let mut errors = vec![mean_error(&w, s)];
    let mut iterations = 0;
    while iterations < cfg.max_iters && errors[iterations] > cfg.stop_tol {
        for p in s.pairs() {
            let x = p.input().amplitudes();
            let out = apply_slice(&w, x)?;
            let delta: Vec<Complex> = p
                .target()
                .amplitudes()
                .iter()
                .zip(&out)
                .map(|(y, o)| (y - o) * cfg.eta)
                .collect();
            let cols = w.cols();
            let data = w.data_mut();
            for (i, d) in delta.iter().enumerate() {
                for (j, xj) in x.iter().enumerate() {
                    data[i * cols + j] += d * xj.conj();
                }
            }
        }
        iterations += 1;
        let err = mean_error(&w, s);
        if !err.is_finite() || err > DIVERGENCE_LIMIT {
            return Err(Error::DivergenceDetected {
                iteration: iterations,
                error: err,
            });
        }
        errors.push(err);
    }
    let final_error = errors[iterations];
    Ok(IterativeOutcome {
        errors,
        weight: w,
        iterations,
        final_error,
    })
}
