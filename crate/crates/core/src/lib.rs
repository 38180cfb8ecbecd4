//! One-shot quantum perceptron with unitary weights.
//!
//! Given `(input, target)` state pairs, [`perceptron::train`] sums the
//! outer products `|y_j><x_j|`, takes a single SVD `F Σ W_new` of the sum and
//! keeps `F W_new` as the learned unitary. There is no update loop: one
//! decomposition produces the final model whether the training set is
//! complete, less-complete or over-complete.
//!
//! ```
//! use qperc::gates::{complete_training_set, StandardGate};
//! use qperc::perceptron::{predict, train, TrainOptions};
//! use qperc::linalg::StateVector;
//!
//! let set = complete_training_set(&StandardGate::H.spec()).unwrap();
//! let model = train(&set, &TrainOptions::default()).unwrap();
//! let out = predict(&model, &StateVector::basis(2, 0).unwrap()).unwrap();
//! assert!((out[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
//! ```

pub mod baselines;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod gates;
pub mod io;
pub mod linalg;
pub mod perceptron;
pub mod svd;

pub use error::{Error, Result};
pub use linalg::{Complex, Matrix, StateVector};
pub use perceptron::{Completeness, PerceptronModel, TrainingPair, TrainingSet};
pub use svd::SvdResult;
