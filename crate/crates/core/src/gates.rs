//! Gate matrices used as training-data generators and ground-truth oracles.
//!
//! Qubit 0 is the leftmost ket symbol and the most significant bit of the
//! basis index, so CNOT with control 0 maps `|10>` to `|11>`.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{apply, c, is_unitary, matmul, phase, Complex, Matrix, StateVector, ONE, ZERO};
use crate::perceptron::{TrainingPair, TrainingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardGate {
    H,
    S,
    T,
    Cnot,
    Toffoli,
    Fredkin,
    I,
}

impl StandardGate {
    pub const ALL: [StandardGate; 7] = [
        StandardGate::H,
        StandardGate::S,
        StandardGate::T,
        StandardGate::Cnot,
        StandardGate::Toffoli,
        StandardGate::Fredkin,
        StandardGate::I,
    ];

    /// The six gates the perceptron is benchmarked on (everything but `I`).
    pub const BENCHMARK: [StandardGate; 6] = [
        StandardGate::H,
        StandardGate::S,
        StandardGate::T,
        StandardGate::Cnot,
        StandardGate::Toffoli,
        StandardGate::Fredkin,
    ];

    pub fn qubits(self) -> usize {
        match self {
            StandardGate::H | StandardGate::S | StandardGate::T | StandardGate::I => 1,
            StandardGate::Cnot => 2,
            StandardGate::Toffoli | StandardGate::Fredkin => 3,
        }
    }

    pub fn matrix(self) -> Matrix {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            StandardGate::H => Matrix::from_real_rows(&[&[r, r], &[r, -r]]).unwrap(),
            StandardGate::S => diag(&[ONE, c(0.0, 1.0)]),
            StandardGate::T => diag(&[ONE, phase(std::f64::consts::FRAC_PI_4)]),
            StandardGate::I => Matrix::identity(2),
            StandardGate::Cnot => permutation(&[0, 1, 3, 2]),
            StandardGate::Toffoli => permutation(&[0, 1, 2, 3, 4, 5, 7, 6]),
            StandardGate::Fredkin => permutation(&[0, 1, 2, 3, 4, 6, 5, 7]),
        }
    }

    pub fn spec(self) -> GateSpec {
        GateSpec {
            name: GateName::Standard(self),
            qubits: self.qubits(),
            matrix: self.matrix(),
        }
    }
}

impl fmt::Display for StandardGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StandardGate::H => "H",
            StandardGate::S => "S",
            StandardGate::T => "T",
            StandardGate::Cnot => "CNOT",
            StandardGate::Toffoli => "Toffoli",
            StandardGate::Fredkin => "Fredkin",
            StandardGate::I => "I",
        })
    }
}

impl FromStr for StandardGate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "h" | "hadamard" => StandardGate::H,
            "s" | "phase" => StandardGate::S,
            "t" | "pi/8" => StandardGate::T,
            "cnot" | "cx" => StandardGate::Cnot,
            "toffoli" | "ccnot" | "ccx" => StandardGate::Toffoli,
            "fredkin" | "cswap" => StandardGate::Fredkin,
            "i" | "id" | "identity" => StandardGate::I,
            _ => return Err(Error::UnknownGate(s.to_string())),
        })
    }
}

fn diag(entries: &[Complex]) -> Matrix {
    let n = entries.len();
    let mut m = Matrix::zeros(n, n);
    for (i, z) in entries.iter().enumerate() {
        m.set(i, i, *z);
    }
    m
}

/// Permutation matrix sending basis state `k` to `images[k]`.
fn permutation(images: &[usize]) -> Matrix {
    let n = images.len();
    let mut m = Matrix::zeros(n, n);
    for (k, &img) in images.iter().enumerate() {
        m.set(img, k, ONE);
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateName {
    Standard(StandardGate),
    Identity,
    /// `|x, y> -> |x, y xor f(x)>` for the given truth table.
    Oracle(Vec<bool>),
    Composite(Vec<PlacedGate>),
    /// A gate defined directly by its matrix.
    Custom(String),
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateName::Standard(g) => write!(f, "{g}"),
            GateName::Identity => f.write_str("I"),
            GateName::Oracle(table) => {
                let bits: String = table.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "U_f[{bits}]")
            }
            GateName::Composite(parts) => {
                let names: Vec<String> = parts
                    .iter()
                    .map(|p| format!("{}@{:?}", p.gate.name, p.qubits))
                    .collect();
                write!(f, "{}", names.join(" -> "))
            }
            GateName::Custom(name) => f.write_str(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: GateName,
    pub qubits: usize,
    pub matrix: Matrix,
}

impl GateSpec {
    pub fn identity(qubits: usize) -> Self {
        GateSpec {
            name: GateName::Identity,
            qubits,
            matrix: Matrix::identity(1 << qubits),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Places this gate on the listed qubits of a wider register.
    pub fn on(self, qubits: &[usize]) -> PlacedGate {
        PlacedGate {
            gate: self,
            qubits: qubits.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacedGate {
    pub gate: GateSpec,
    /// Register qubits the gate's own qubits map to, in order.
    pub qubits: Vec<usize>,
}

pub fn standard_gate(name: &str) -> Result<GateSpec> {
    Ok(name.parse::<StandardGate>()?.spec())
}

/// Standard gate lookup that also knows `composite`.
pub fn named_gate(name: &str) -> Result<GateSpec> {
    if name.eq_ignore_ascii_case("composite") {
        return Ok(composite_gate());
    }
    standard_gate(name)
}

pub fn oracle_uf(table: &[bool]) -> Result<GateSpec> {
    let len = table.len();
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::BadTableLength(len));
    }
    let n = len.trailing_zeros() as usize;
    let images: Vec<usize> = (0..2 * len)
        .map(|k| {
            let (x, y) = (k >> 1, k & 1);
            (x << 1) | (y ^ usize::from(table[x]))
        })
        .collect();
    Ok(GateSpec {
        name: GateName::Oracle(table.to_vec()),
        qubits: n + 1,
        matrix: permutation(&images),
    })
}

/// Embeds `gate` acting on `qubits` into a `width`-qubit register.
fn lift(gate: &GateSpec, qubits: &[usize], width: usize) -> Result<Matrix> {
    let mut sorted = qubits.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if qubits.len() != gate.qubits
        || sorted.len() != qubits.len()
        || qubits.iter().any(|&q| q >= width)
    {
        return Err(Error::PlacementOutOfRange {
            qubits: qubits.to_vec(),
            width,
        });
    }
    let dim = 1usize << width;
    let k = qubits.len();
    let masks: Vec<usize> = qubits.iter().map(|&q| 1 << (width - 1 - q)).collect();
    let all: usize = masks.iter().sum();
    let sub = |i: usize| {
        masks
            .iter()
            .enumerate()
            .fold(0, |acc, (pos, &m)| acc | (usize::from(i & m != 0) << (k - 1 - pos)))
    };
    let mut out = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if i & !all == j & !all {
                out.set(i, j, gate.matrix[(sub(i), sub(j))]);
            }
        }
    }
    Ok(out)
}

/// Gates are listed in application order; the first one ends up rightmost
/// in the matrix product.
pub fn compose(width: usize, gates: &[PlacedGate]) -> Result<GateSpec> {
    let mut m = Matrix::identity(1 << width);
    for placed in gates {
        m = matmul(&lift(&placed.gate, &placed.qubits, width)?, &m)?;
    }
    Ok(GateSpec {
        name: GateName::Composite(gates.to_vec()),
        qubits: width,
        matrix: m,
    })
}

/// The two-qubit composite built from H, S, T and CNOT, defined by its basis
/// action:
/// `|00> -> (|00> + i e^{iπ/4}|11>)/√2`, `|01> -> (|01> + i e^{iπ/4}|10>)/√2`,
/// `|10> -> (|00> - i e^{iπ/4}|11>)/√2`, `|11> -> (|01> - i e^{iπ/4}|10>)/√2`.
pub fn composite_gate() -> GateSpec {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let w = c(0.0, 1.0) * phase(std::f64::consts::FRAC_PI_4) * r;
    let h = c(r, 0.0);
    let cols: [[Complex; 4]; 4] = [
        [h, ZERO, ZERO, w],
        [ZERO, h, w, ZERO],
        [h, ZERO, ZERO, -w],
        [ZERO, h, -w, ZERO],
    ];
    let refs: Vec<&[Complex]> = cols.iter().map(|col| col.as_slice()).collect();
    GateSpec {
        name: GateName::Custom("composite".to_string()),
        qubits: 2,
        matrix: Matrix::from_columns(&refs).unwrap(),
    }
}

/// A circuit realizing [`composite_gate`]: H on qubit 0, CNOT 0 -> 1, then S
/// and T on qubit 0.
pub fn composite_circuit() -> Vec<PlacedGate> {
    vec![
        StandardGate::H.spec().on(&[0]),
        StandardGate::Cnot.spec().on(&[0, 1]),
        StandardGate::S.spec().on(&[0]),
        StandardGate::T.spec().on(&[0]),
    ]
}

/// Pairs `(|k>, G|k>)` for every computational basis state.
pub fn complete_training_set(g: &GateSpec) -> Result<TrainingSet> {
    let dim = g.dim();
    let pairs = (0..dim)
        .map(|k| {
            let x = StateVector::basis(dim, k)?;
            let y = StateVector::new(g.matrix.column(k))?;
            TrainingPair::new(x, y)
        })
        .collect::<Result<Vec<_>>>()?;
    TrainingSet::new(pairs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetMode {
    Complete,
    Less,
    Over,
}

impl FromStr for SetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "complete" => Ok(SetMode::Complete),
            "less" | "less-complete" => Ok(SetMode::Less),
            "over" | "over-complete" => Ok(SetMode::Over),
            _ => Err(Error::Parse(format!("unknown set mode `{s}`"))),
        }
    }
}

fn random_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex> {
    loop {
        let v: Vec<Complex> = (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-2 {
            return v;
        }
    }
}

fn superposition_pair(g: &GateSpec, support: &[usize], rng: &mut ChaCha8Rng) -> Result<TrainingPair> {
    let coeffs = random_coefficients(rng, support.len());
    let mut amps = vec![ZERO; g.dim()];
    for (&k, z) in support.iter().zip(coeffs) {
        amps[k] = z;
    }
    let x = StateVector::normalize(amps)?;
    let y = StateVector::new(apply(&g.matrix, &x)?)?;
    TrainingPair::new(x, y)
}

/// Deterministic-per-seed training sets of the requested completeness.
///
/// `Over` appends `(v, G v)` for a random unit `v` to the complete set.
/// `Less` takes a random strict subset of the basis pairs and, on a coin
/// flip, one superposition pair whose support keeps the input rank below
/// the dimension. For a single qubit it is one random superposition pair.
pub fn generate_training_set(g: &GateSpec, mode: SetMode, seed: u64) -> Result<TrainingSet> {
    let dim = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match mode {
        SetMode::Complete => complete_training_set(g),
        SetMode::Over => {
            let mut pairs = complete_training_set(g)?.pairs().to_vec();
            let all: Vec<usize> = (0..dim).collect();
            pairs.push(superposition_pair(g, &all, &mut rng)?);
            TrainingSet::new(pairs)
        }
        SetMode::Less if dim <= 2 => {
            let all: Vec<usize> = (0..dim).collect();
            TrainingSet::new(vec![superposition_pair(g, &all, &mut rng)?])
        }
        SetMode::Less => {
            let mut order: Vec<usize> = (0..dim).collect();
            order.shuffle(&mut rng);
            let k = rng.random_range(1..dim);
            let (chosen, unused) = order.split_at(k);
            let mut pairs = chosen
                .iter()
                .map(|&b| {
                    TrainingPair::new(StateVector::basis(dim, b)?, StateVector::new(g.matrix.column(b))?)
                })
                .collect::<Result<Vec<_>>>()?;
            if rng.random_bool(0.5) {
                let spare = (dim - 1 - k).min(2);
                let mut pool: Vec<usize> = chosen.iter().chain(&unused[..spare]).copied().collect();
                if pool.len() >= 2 {
                    pool.shuffle(&mut rng);
                    pairs.push(superposition_pair(g, &pool[..2], &mut rng)?);
                }
            }
            TrainingSet::new(pairs)
        }
    }
}

/// `true` iff the gate matrix is unitary at `tol`.
pub fn check_unitary(g: &GateSpec, tol: f64) -> bool {
    is_unitary(&g.matrix, tol).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perceptron::Completeness;

    fn pauli_x() -> Matrix {
        permutation(&[1, 0])
    }

    #[test]
    fn standard_matrices() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = standard_gate("H").unwrap();
        assert_eq!(h.matrix, Matrix::from_real_rows(&[&[r, r], &[r, -r]]).unwrap());
        let t = standard_gate("t").unwrap().matrix;
        assert!((t[(1, 1)] - c(r, r)).norm() < 1e-15);

        let toffoli = standard_gate("Toffoli").unwrap().matrix;
        let fredkin = standard_gate("Fredkin").unwrap().matrix;
        let id = Matrix::identity(8);
        for i in 0..8 {
            for j in 0..8 {
                let swapped_t = match i {
                    6 => 7,
                    7 => 6,
                    _ => i,
                };
                let swapped_f = match i {
                    5 => 6,
                    6 => 5,
                    _ => i,
                };
                assert_eq!(toffoli[(i, j)], id[(swapped_t, j)]);
                assert_eq!(fredkin[(i, j)], id[(swapped_f, j)]);
            }
        }
        assert!(matches!(standard_gate("swap"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn every_gate_is_unitary() {
        for g in StandardGate::ALL {
            let spec = g.spec();
            assert!(check_unitary(&spec, 1e-12), "{g}");
            assert_eq!(spec.dim(), 1 << spec.qubits);
        }
        assert!(check_unitary(&composite_gate(), 1e-12));
    }

    #[test]
    fn oracles() {
        let cnot = oracle_uf(&[false, true]).unwrap();
        assert_eq!(cnot.qubits, 2);
        assert_eq!(cnot.matrix, StandardGate::Cnot.matrix());
        assert_eq!(oracle_uf(&[false, false]).unwrap().matrix, Matrix::identity(4));
        let flip = oracle_uf(&[true, true]).unwrap();
        assert_eq!(flip.matrix, crate::linalg::tensor(&Matrix::identity(2), &pauli_x()));
        assert!(matches!(oracle_uf(&[true, false, true]), Err(Error::BadTableLength(3))));
        assert!(oracle_uf(&[]).is_err());
    }

    #[test]
    fn oracle_is_permutation() {
        let g = oracle_uf(&[true, false, false, true, true, true, false, false]).unwrap();
        assert_eq!(g.qubits, 4);
        for i in 0..g.dim() {
            let row_ones = g.matrix.row(i).iter().filter(|z| **z == ONE).count();
            let row_zeros = g.matrix.row(i).iter().filter(|z| **z == ZERO).count();
            assert_eq!((row_ones, row_zeros), (1, g.dim() - 1));
            let col_ones = g.matrix.column(i).iter().filter(|z| **z == ONE).count();
            assert_eq!(col_ones, 1);
        }
    }

    #[test]
    fn composition() {
        let h = compose(1, &[StandardGate::H.spec().on(&[0])]).unwrap();
        assert_eq!(h.matrix, StandardGate::H.matrix());
        let cc = compose(
            2,
            &[StandardGate::Cnot.spec().on(&[0, 1]), StandardGate::Cnot.spec().on(&[0, 1])],
        )
        .unwrap();
        assert_eq!(cc.matrix, Matrix::identity(4));
        // Reversed control: |01> -> |11>.
        let rev = compose(2, &[StandardGate::Cnot.spec().on(&[1, 0])]).unwrap();
        let out = apply(&rev.matrix, &StateVector::from_bits("01").unwrap()).unwrap();
        assert_eq!(out, StateVector::from_bits("11").unwrap().amplitudes());
        assert!(matches!(
            compose(2, &[StandardGate::Toffoli.spec().on(&[0, 1, 2])]),
            Err(Error::PlacementOutOfRange { .. })
        ));
        assert!(compose(2, &[StandardGate::Cnot.spec().on(&[1, 1])]).is_err());
    }

    #[test]
    fn composite_circuit_matches_basis_definition() {
        let circuit = compose(2, &composite_circuit()).unwrap();
        let defined = composite_gate();
        assert!(circuit.matrix.max_abs_diff(&defined.matrix).unwrap() < 1e-15);
        let out = apply(&circuit.matrix, &StateVector::from_bits("00").unwrap()).unwrap();
        let w = c(0.0, 1.0) * phase(std::f64::consts::FRAC_PI_4) / 2f64.sqrt();
        assert!((out[0] - c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((out[3] - w).norm() < 1e-15);
    }

    #[test]
    fn complete_sets() {
        let s = complete_training_set(&StandardGate::Cnot.spec()).unwrap();
        assert_eq!(s.completeness(), Completeness::Complete);
        let third = &s.pairs()[2];
        assert_eq!(third.input(), &StateVector::from_bits("10").unwrap());
        assert_eq!(third.target(), &StateVector::from_bits("11").unwrap());
        let id = complete_training_set(&GateSpec::identity(1)).unwrap();
        assert_eq!(id.pairs()[1].target(), &StateVector::basis(2, 1).unwrap());
    }

    #[test]
    fn generated_sets_have_requested_completeness() {
        for g in StandardGate::BENCHMARK {
            for seed in 0..20 {
                let spec = g.spec();
                let less = generate_training_set(&spec, SetMode::Less, seed).unwrap();
                assert_eq!(less.completeness(), Completeness::LessComplete, "{g} seed {seed}");
                let over = generate_training_set(&spec, SetMode::Over, seed).unwrap();
                assert_eq!(over.completeness(), Completeness::OverComplete, "{g} seed {seed}");
                assert_eq!(less, generate_training_set(&spec, SetMode::Less, seed).unwrap());
            }
        }
    }
}
