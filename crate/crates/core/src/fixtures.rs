//! The fourteen worked examples: training sets for H, S, T, CNOT, Toffoli,
//! Fredkin and the two-qubit composite, each with the validation lines the
//! trained perceptron must reproduce exactly (phase included).

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, phase, Complex, StateVector};
use crate::perceptron::{fidelity, predict, train, Completeness, TrainOptions, TrainingSet};

/// Default entrywise tolerance for validation lines.
pub const FIXTURE_TOL: f64 = 1e-9;

pub const FIXTURE_IDS: std::ops::RangeInclusive<u8> = 1..=14;

/// One validation line: predict on `input` and compare with `expected`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    /// Zero-based index of the training pair whose input is fed in.
    pub pair: usize,
    pub expected: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub id: u8,
    pub gate: &'static str,
    pub label: Completeness,
    pub pairs: Vec<(StateVector, StateVector)>,
    pub checks: Vec<Check>,
    /// Deviations between the printed example and the encoded values.
    pub note: Option<&'static str>,
}

impl Fixture {
    pub fn training_set(&self) -> Result<TrainingSet> {
        TrainingSet::from_states(self.pairs.clone())
    }
}

/// `sum coeff_k |index_k>` over `dim` basis states, normalized.
fn sup(dim: usize, terms: &[(usize, Complex)]) -> StateVector {
    let mut amps = vec![Complex::new(0.0, 0.0); dim];
    for &(k, z) in terms {
        amps[k] += z;
    }
    StateVector::normalize(amps).expect("fixture states are nonzero")
}

fn r(x: f64) -> Complex {
    c(x, 0.0)
}

fn basis(dim: usize, k: usize) -> StateVector {
    StateVector::basis(dim, k).expect("index in range")
}

/// Basis pairs `|k> -> |images[k]>`.
fn permutation_pairs(images: &[usize]) -> Vec<(StateVector, StateVector)> {
    let dim = images.len();
    images
        .iter()
        .enumerate()
        .map(|(k, &img)| (basis(dim, k), basis(dim, img)))
        .collect()
}

/// Every pair is a validation line with its own target as the expected output.
fn check_all(pairs: &[(StateVector, StateVector)]) -> Vec<Check> {
    pairs
        .iter()
        .enumerate()
        .map(|(pair, (_, y))| Check {
            pair,
            expected: y.clone(),
        })
        .collect()
}

fn fixture(
    id: u8,
    gate: &'static str,
    label: Completeness,
    pairs: Vec<(StateVector, StateVector)>,
    note: Option<&'static str>,
) -> Fixture {
    let checks = check_all(&pairs);
    Fixture {
        id,
        gate,
        label,
        pairs,
        checks,
        note,
    }
}

pub fn load(id: u8) -> Result<Fixture> {
    use Completeness::{LessComplete as Less, OverComplete as Over};
    let e = phase(FRAC_PI_4);
    let i = c(0.0, 1.0);
    // e^{i3π/4}, the phase the composite puts on its |1x> branch.
    let w = i * e;
    let f = match id {
        // (a, b) = (1, 2)
        1 => fixture(
            1,
            "H",
            Over,
            vec![
                (basis(2, 0), sup(2, &[(0, r(1.0)), (1, r(1.0))])),
                (basis(2, 1), sup(2, &[(0, r(1.0)), (1, r(-1.0))])),
                (sup(2, &[(0, r(1.0)), (1, r(2.0))]), sup(2, &[(0, r(3.0)), (1, r(-1.0))])),
            ],
            None,
        ),
        // (a, b) = (-11, 7)
        2 => fixture(
            2,
            "H",
            Less,
            vec![(
                sup(2, &[(0, r(-11.0)), (1, r(7.0))]),
                sup(2, &[(0, r(-4.0)), (1, r(-18.0))]),
            )],
            None,
        ),
        // (a, b) = (2, 2)
        3 => fixture(
            3,
            "S",
            Over,
            vec![
                (basis(2, 0), basis(2, 0)),
                (basis(2, 1), sup(2, &[(1, i)])),
                (sup(2, &[(0, r(2.0)), (1, r(2.0))]), sup(2, &[(0, r(2.0)), (1, i * 2.0)])),
            ],
            Some("printed third output reads (|0> - i|1>)/sqrt2; the target and the printed factors give (|0> + i|1>)/sqrt2"),
        ),
        // (a, b) = (1, 3)
        4 => fixture(
            4,
            "S",
            Less,
            vec![(sup(2, &[(0, r(1.0)), (1, r(3.0))]), sup(2, &[(0, r(1.0)), (1, i * 3.0)]))],
            None,
        ),
        // (a, b) = (-8, -9)
        5 => fixture(
            5,
            "T",
            Over,
            vec![
                (basis(2, 0), basis(2, 0)),
                (basis(2, 1), sup(2, &[(1, e)])),
                (sup(2, &[(0, r(-8.0)), (1, r(-9.0))]), sup(2, &[(0, r(-8.0)), (1, e * -9.0)])),
            ],
            None,
        ),
        // (a, b) = (13, -10)
        6 => fixture(
            6,
            "T",
            Less,
            vec![(sup(2, &[(0, r(13.0)), (1, r(-10.0))]), sup(2, &[(0, r(13.0)), (1, e * -10.0)]))],
            None,
        ),
        // (a, b) = (3, 4)
        7 => {
            let mut pairs = permutation_pairs(&[0, 1, 3, 2]);
            pairs.push((sup(4, &[(0, r(3.0)), (3, r(4.0))]), sup(4, &[(0, r(3.0)), (2, r(4.0))])));
            fixture(7, "CNOT", Over, pairs, None)
        }
        // (a, b) = (5, -6)
        8 => fixture(
            8,
            "CNOT",
            Less,
            vec![
                (basis(4, 0), basis(4, 0)),
                (sup(4, &[(1, r(5.0)), (3, r(-6.0))]), sup(4, &[(1, r(5.0)), (2, r(-6.0))])),
            ],
            None,
        ),
        // (a, b) = (3, 4)
        9 => {
            let mut pairs = permutation_pairs(&[0, 1, 2, 3, 4, 5, 7, 6]);
            pairs.push((sup(8, &[(1, r(3.0)), (6, r(4.0))]), sup(8, &[(1, r(3.0)), (7, r(4.0))])));
            fixture(
                9,
                "Toffoli",
                Over,
                pairs,
                Some("printed ninth output reads (3|001> + 3|111>)/5; linearity over pairs 2 and 7 forces (3|001> + 4|111>)/5"),
            )
        }
        // (a, b) = (1, 2)
        10 => fixture(
            10,
            "Toffoli",
            Less,
            vec![
                (basis(8, 0), basis(8, 0)),
                (basis(8, 6), basis(8, 7)),
                (sup(8, &[(5, r(1.0)), (7, r(2.0))]), sup(8, &[(5, r(1.0)), (6, r(2.0))])),
            ],
            None,
        ),
        // (a, b) = (2, -7)
        11 => {
            let mut pairs = permutation_pairs(&[0, 1, 2, 3, 4, 6, 5, 7]);
            pairs.push((sup(8, &[(2, r(2.0)), (5, r(-7.0))]), sup(8, &[(2, r(2.0)), (6, r(-7.0))])));
            fixture(11, "Fredkin", Over, pairs, None)
        }
        // (a, b) = (3, 2)
        12 => fixture(
            12,
            "Fredkin",
            Less,
            vec![
                (basis(8, 2), basis(8, 2)),
                (basis(8, 5), basis(8, 6)),
                (sup(8, &[(0, r(3.0)), (6, r(2.0))]), sup(8, &[(0, r(3.0)), (5, r(2.0))])),
            ],
            None,
        ),
        // (a, b) = (6, 8)
        13 => fixture(
            13,
            "composite",
            Over,
            vec![
                (basis(4, 0), sup(4, &[(0, r(1.0)), (3, w)])),
                (basis(4, 1), sup(4, &[(1, r(1.0)), (2, w)])),
                (basis(4, 2), sup(4, &[(0, r(1.0)), (3, -w)])),
                (basis(4, 3), sup(4, &[(1, r(1.0)), (2, -w)])),
                (sup(4, &[(0, r(6.0)), (2, r(8.0))]), sup(4, &[(0, r(14.0)), (3, w * -2.0)])),
            ],
            None,
        ),
        // (a, b) = (2, 1)
        14 => fixture(
            14,
            "composite",
            Less,
            vec![
                (basis(4, 0), sup(4, &[(0, r(1.0)), (3, w)])),
                (sup(4, &[(1, r(2.0)), (3, r(1.0))]), sup(4, &[(1, r(3.0)), (2, w)])),
            ],
            None,
        ),
        other => {
            return Err(Error::InvalidConfig(format!(
                "fixture id {other} is outside {}..={}",
                FIXTURE_IDS.start(),
                FIXTURE_IDS.end()
            )))
        }
    };
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub pair: usize,
    pub max_abs_diff: f64,
    /// Exact-phase score.
    pub fidelity: f64,
    pub phase_invariant_fidelity: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureReport {
    pub id: u8,
    pub gate: &'static str,
    pub label: Completeness,
    pub classified: Option<Completeness>,
    pub rank: Option<usize>,
    pub dim: usize,
    pub sigma: Vec<f64>,
    pub checks: Vec<CheckResult>,
    pub tol: f64,
    pub note: Option<&'static str>,
    pub error: Option<String>,
    pub pass: bool,
}

impl FixtureReport {
    pub fn worst_diff(&self) -> f64 {
        self.checks.iter().map(|c| c.max_abs_diff).fold(0.0, f64::max)
    }
}

impl fmt::Display for FixtureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classified = self
            .classified
            .map_or_else(|| "-".to_string(), |c| c.to_string());
        write!(
            f,
            "{:>3}  {:<9} {:<13} {:<13} rank {}/{}  {} checks  max diff {:.2e}  {}",
            self.id,
            self.gate,
            self.label.to_string(),
            classified,
            self.rank.map_or_else(|| "-".to_string(), |r| r.to_string()),
            self.dim,
            self.checks.len(),
            self.worst_diff(),
            if self.pass { "PASS" } else { "FAIL" }
        )?;
        if let Some(err) = &self.error {
            write!(f, "  ({err})")?;
        }
        Ok(())
    }
}

pub fn run_fixture(id: u8) -> Result<FixtureReport> {
    run_fixture_with_tol(id, FIXTURE_TOL)
}

/// Trains on the example's set and checks every validation line. Training
/// failures end up in the report rather than the `Err` branch, which is
/// reserved for unknown ids.
pub fn run_fixture_with_tol(id: u8, tol: f64) -> Result<FixtureReport> {
    let fx = load(id)?;
    let dim = fx.pairs[0].0.dim();
    let mut report = FixtureReport {
        id,
        gate: fx.gate,
        label: fx.label,
        classified: None,
        rank: None,
        dim,
        sigma: Vec::new(),
        checks: Vec::new(),
        tol,
        note: fx.note,
        error: None,
        pass: false,
    };
    let outcome = fx.training_set().and_then(|set| {
        report.classified = Some(set.completeness());
        train(&set, &TrainOptions::default())
    });
    let model = match outcome {
        Ok(m) => m,
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok(report);
        }
    };
    report.rank = Some(model.rank);
    report.sigma = model.sigma.clone();
    for check in &fx.checks {
        let result = predict(&model, &fx.pairs[check.pair].0).and_then(|out| {
            let d = out.max_abs_diff(&check.expected).unwrap_or(f64::INFINITY);
            Ok(CheckResult {
                pair: check.pair,
                max_abs_diff: d,
                fidelity: fidelity(&out, &check.expected, false)?,
                phase_invariant_fidelity: fidelity(&out, &check.expected, true)?,
                pass: d <= tol,
            })
        });
        match result {
            Ok(r) => report.checks.push(r),
            Err(e) => {
                report.error = Some(e.to_string());
                return Ok(report);
            }
        }
    }
    report.pass = report.classified == Some(fx.label) && report.checks.iter().all(|c| c.pass);
    Ok(report)
}

pub fn run_all(tol: f64) -> Vec<FixtureReport> {
    FIXTURE_IDS
        .map(|id| run_fixture_with_tol(id, tol).expect("id in range"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perceptron::consistency_check;

    #[test]
    fn all_fixtures_are_consistent() {
        for id in FIXTURE_IDS {
            let set = load(id).unwrap().training_set().unwrap();
            assert!(consistency_check(&set, 1e-12).ok, "fixture {id}");
        }
    }

    #[test]
    fn labels_match_classification() {
        for id in FIXTURE_IDS {
            let fx = load(id).unwrap();
            assert_eq!(fx.training_set().unwrap().completeness(), fx.label, "fixture {id}");
        }
    }

    #[test]
    fn check_counts() {
        assert_eq!(run_fixture(4).unwrap().checks.len(), 1);
        assert_eq!(run_fixture(11).unwrap().checks.len(), 9);
        assert_eq!(run_fixture(14).unwrap().checks.len(), 2);
    }

    #[test]
    fn composite_superposition_target() {
        // Pair 5 of the over-complete composite set is (6 * pair 1 + 8 * pair 3) / 10.
        let fx = load(13).unwrap();
        let (x5, y5) = &fx.pairs[4];
        let combo = |k1: usize, k3: usize| -> Vec<Complex> {
            let a = &fx.pairs[k1].1;
            let b = &fx.pairs[k3].1;
            (0..4).map(|n| (a[n] * 6.0 + b[n] * 8.0) / 10.0).collect()
        };
        let expected = StateVector::new(combo(0, 2)).unwrap();
        assert!(y5.max_abs_diff(&expected).unwrap() < 1e-15);
        assert!((x5[0] - c(0.6, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unknown_id() {
        assert!(run_fixture(0).is_err());
        assert!(run_fixture(15).is_err());
    }
}
