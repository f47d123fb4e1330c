//! Exact statevector simulation of quantum query algorithms.
//!
//! Qubit `k` of a basis index is bit `k` (little-endian). Registers are
//! contiguous qubit ranges. An index register for a domain of size `n` has
//! `⌈log₂ n⌉` qubits and code `x` stands for domain point `x + 1`; codes
//! `≥ n` are padding and every oracle acts as the identity on them.

mod circuit;
mod grover;
mod oracle;

pub use circuit::{
    run_quantum, Circuit, CircuitAlgorithm, Gate, QuantumOutcome, QuantumQueryAlgorithm, SimulationMode, Simulator,
    DEFAULT_QUBIT_CAP,
};
pub use grover::{grover_circuit, grover_iteration_count, grover_search, GroverSearch};
pub use oracle::{
    apply_function_oracle, clean_h_query, forward_search_oracle, CleanHOracle, ForwardSearchOracle, OracleUnitary,
    OracleWires, QuantumOracle,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::oracles::{ceil_log2, OracleError};

/// Absolute tolerance for exact-mode comparisons.
pub const EXACT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("layout mismatch: {0}")]
    Layout(String),
    #[error("{requested} qubits exceed the cap of {cap}")]
    DimensionOverflow { requested: usize, cap: usize },
    #[error("oracle domain {found} does not match expected {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A contiguous block of qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Register {
    pub offset: usize,
    pub width: usize,
}

impl Register {
    pub const fn new(offset: usize, width: usize) -> Self {
        Self { offset, width }
    }

    pub fn end(&self) -> usize {
        self.offset + self.width
    }

    fn mask(&self) -> usize {
        ((1usize << self.width) - 1) << self.offset
    }

    /// Value held by this register in basis state `basis`.
    pub fn read(&self, basis: usize) -> usize {
        (basis & self.mask()) >> self.offset
    }

    pub fn xor(&self, basis: usize, value: usize) -> usize {
        basis ^ (value << self.offset)
    }

    /// Sub-register of `width` qubits starting `skip` qubits in.
    pub fn slice(&self, skip: usize, width: usize) -> Register {
        assert!(skip + width <= self.width, "slice exceeds register");
        Register::new(self.offset + skip, width)
    }

    pub fn overlaps(&self, other: &Register) -> bool {
        self.width > 0 && other.width > 0 && self.offset < other.end() && other.offset < self.end()
    }

    pub fn qubit(&self, k: usize) -> usize {
        assert!(k < self.width, "qubit outside register");
        self.offset + k
    }
}

/// Register map for a query algorithm on a domain of size `n`: index
/// register, answer register, then an ancilla block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n: usize,
    pub index: Register,
    pub answer: Register,
    pub ancilla: Register,
}

impl Layout {
    pub fn new(n: usize, answer_width: usize, ancilla_width: usize) -> Self {
        let index = Register::new(0, ceil_log2(n));
        let answer = Register::new(index.end(), answer_width);
        let ancilla = Register::new(answer.end(), ancilla_width);
        Self { n, index, answer, ancilla }
    }

    pub fn qubits(&self) -> usize {
        self.ancilla.end()
    }

    pub fn check(&self, state: &StateVector) -> Result<(), QuantumError> {
        if state.qubits() != self.qubits() {
            return Err(QuantumError::Layout(format!(
                "state has {} qubits, layout needs {}",
                state.qubits(),
                self.qubits()
            )));
        }
        Ok(())
    }
}

/// Amplitudes over `2^qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(qubits: usize) -> Self {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        if !amps.len().is_power_of_two() {
            return Err(QuantumError::Layout(format!("{} amplitudes", amps.len())));
        }
        Ok(Self { qubits: amps.len().trailing_zeros() as usize, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Probability that `qubit` reads 1.
    pub fn bit_probability(&self, qubit: usize) -> f64 {
        self.amps.iter().enumerate().filter(|(b, _)| b >> qubit & 1 == 1).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Distribution of the value held by `reg`.
    pub fn register_distribution(&self, reg: Register) -> Vec<f64> {
        let mut dist = vec![0.0; 1 << reg.width];
        for (b, a) in self.amps.iter().enumerate() {
            dist[reg.read(b)] += a.norm_sqr();
        }
        dist
    }

    pub(crate) fn check_register(&self, reg: Register) -> Result<(), QuantumError> {
        if reg.end() > self.qubits {
            return Err(QuantumError::Layout(format!(
                "register {}..{} outside {} qubits",
                reg.offset,
                reg.end(),
                self.qubits
            )));
        }
        Ok(())
    }

    /// Applies the basis permutation `b ↦ target(b)`, which must be a
    /// bijection on basis indices.
    pub(crate) fn permute_basis(&mut self, target: impl Fn(usize) -> usize) {
        let mut next = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (b, a) in self.amps.iter().enumerate() {
            next[target(b)] = *a;
        }
        self.amps = next;
    }

    /// `|b⟩ ↦ |b ⊕ (delta(b) << output.offset)⟩` where `delta` must not
    /// depend on the output register (so the map is an involution).
    pub(crate) fn xor_into(&mut self, output: Register, delta: impl Fn(usize) -> usize) {
        for b in 0..self.amps.len() {
            let d = delta(b);
            if d == 0 {
                continue;
            }
            let partner = output.xor(b, d);
            if b < partner {
                self.amps.swap(b, partner);
            }
        }
    }

    pub(crate) fn x(&mut self, qubit: usize) {
        let bit = 1 << qubit;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                self.amps.swap(b, b | bit);
            }
        }
    }

    pub(crate) fn h(&mut self, qubit: usize) {
        let bit = 1 << qubit;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let (a0, a1) = (self.amps[b], self.amps[b | bit]);
                self.amps[b] = (a0 + a1) * s;
                self.amps[b | bit] = (a0 - a1) * s;
            }
        }
    }

    /// Calls `visit` once per assignment of the qubits outside `reg`, with
    /// the basis indices of the `n` valid codes of `reg` in code order.
    fn for_each_fiber(&mut self, reg: Register, n: usize, mut visit: impl FnMut(&mut [Complex64], &[usize])) {
        let mask = ((1usize << reg.width) - 1) << reg.offset;
        let mut idx = vec![0; n];
        for base in 0..self.amps.len() {
            if base & mask != 0 {
                continue;
            }
            for (code, slot) in idx.iter_mut().enumerate() {
                *slot = base | (code << reg.offset);
            }
            visit(&mut self.amps, &idx);
        }
    }

    /// Inversion about the mean over the `n` valid codes of `reg`
    /// (`2|s⟩⟨s| − I` there, identity on padding).
    pub(crate) fn diffusion(&mut self, reg: Register, n: usize) {
        self.for_each_fiber(reg, n, |amps, idx| {
            let sum: Complex64 = idx.iter().map(|&b| amps[b]).sum();
            let mean = sum / n as f64;
            for &b in idx {
                amps[b] = mean * 2.0 - amps[b];
            }
        });
    }

    /// Householder reflection exchanging `|0⟩` and the uniform superposition
    /// over the `n` valid codes of `reg`.
    pub(crate) fn prepare_uniform(&mut self, reg: Register, n: usize) {
        if n == 1 {
            return;
        }
        let s = 1.0 / (n as f64).sqrt();
        // u = (e0 - s) / |e0 - s|
        let norm = (2.0 - 2.0 * s).sqrt();
        let u0 = (1.0 - s) / norm;
        let ur = -s / norm;
        self.for_each_fiber(reg, n, |amps, idx| {
            let dot: Complex64 = amps[idx[0]] * u0 + idx[1..].iter().map(|&b| amps[b] * ur).sum::<Complex64>();
            amps[idx[0]] -= dot * (2.0 * u0);
            for &b in &idx[1..] {
                amps[b] -= dot * (2.0 * ur);
            }
        });
    }
}

/// Column-by-column matrix of the linear map `apply` on `qubits` qubits;
/// entry `[row][col]` is `⟨row| U |col⟩`.
pub fn operator_matrix(
    qubits: usize,
    mut apply: impl FnMut(&mut StateVector) -> Result<(), QuantumError>,
) -> Result<Vec<Vec<Complex64>>, QuantumError> {
    let dim = 1 << qubits;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for col in 0..dim {
        let mut state = StateVector::basis(qubits, col);
        apply(&mut state)?;
        for (row, a) in state.amplitudes().iter().enumerate() {
            m[row][col] = *a;
        }
    }
    Ok(m)
}

/// Largest entrywise distance between two matrices of equal shape.
pub fn max_entry_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    assert_eq!(a.len(), b.len(), "matrix shapes differ");
    a.iter().zip(b).flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm())).fold(0.0, f64::max)
}
