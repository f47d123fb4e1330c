//! Gate-list circuits with oracle slots, and the simulator that runs them.

use serde::{Deserialize, Serialize};

use super::{QuantumError, QuantumOracle, Register, StateVector};
use crate::oracles::ceil_log2;
use crate::random::SeededStream;

/// Default limit on simulated qubits (circuit plus oracle workspace).
pub const DEFAULT_QUBIT_CAP: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    X(usize),
    H(usize),
    /// Maps `|0⟩` to the uniform superposition over codes `0..n` of `reg`.
    PrepareUniform {
        reg: Register,
        n: usize,
    },
    /// Inversion about the mean over codes `0..n` of `reg`.
    Diffusion {
        reg: Register,
        n: usize,
    },
    /// One call to the oracle plugged into the circuit.
    Oracle {
        input: Register,
        output: Register,
    },
}

/// A query algorithm on a domain of size `domain`, read out by measuring a
/// single qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    domain: usize,
    qubits: usize,
    output: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(domain: usize, qubits: usize, output: usize) -> Result<Self, QuantumError> {
        if output >= qubits {
            return Err(QuantumError::Layout(format!("output qubit {output} outside {qubits} qubits")));
        }
        Ok(Self { domain, qubits, output, gates: Vec::new() })
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, QuantumError> {
        let in_range = |r: Register| r.end() <= self.qubits;
        let ok = match gate {
            Gate::X(q) | Gate::H(q) => q < self.qubits,
            Gate::PrepareUniform { reg, n } | Gate::Diffusion { reg, n } => {
                in_range(reg) && n >= 1 && n <= 1 << reg.width
            }
            Gate::Oracle { input, output } => in_range(input) && in_range(output) && !input.overlaps(&output),
        };
        if !ok {
            return Err(QuantumError::Layout(format!("gate {gate:?} does not fit {} qubits", self.qubits)));
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn domain_size(&self) -> usize {
        self.domain
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn output(&self) -> usize {
        self.output
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn oracle_calls(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Oracle { .. })).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimulationMode {
    Exact,
    Shots { shots: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumOutcome {
    /// `[P(output 0), P(output 1)]`.
    pub output_distribution: [f64; 2],
    /// Calls made to the input oracle.
    pub query_count: usize,
    /// Measured bits in shots mode; empty in exact mode.
    pub samples: Vec<bool>,
}

impl QuantumOutcome {
    pub fn accept_probability(&self) -> f64 {
        self.output_distribution[1]
    }

    /// Probability of an output different from `answer`.
    pub fn error(&self, answer: bool) -> f64 {
        self.output_distribution[usize::from(!answer)]
    }

    /// Fraction of samples equal to 1.
    pub fn sample_mean(&self) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        Some(self.samples.iter().filter(|&&b| b).count() as f64 / self.samples.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    pub max_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self { max_qubits: DEFAULT_QUBIT_CAP }
    }
}

impl Simulator {
    pub fn new(max_qubits: usize) -> Self {
        Self { max_qubits }
    }

    /// Runs `circuit` from `|0…0⟩` with its oracle slots filled by `oracle`,
    /// whose workspace is appended after the circuit's qubits.
    pub fn run(
        &self,
        circuit: &Circuit,
        oracle: &mut dyn QuantumOracle,
        mode: SimulationMode,
    ) -> Result<QuantumOutcome, QuantumError> {
        let (state, query_count) = self.final_state(circuit, oracle)?;
        let p1 = state.bit_probability(circuit.output).clamp(0.0, 1.0);
        let mut outcome = QuantumOutcome { output_distribution: [1.0 - p1, p1], query_count, samples: Vec::new() };
        if let SimulationMode::Shots { shots, seed } = mode {
            let mut rng = SeededStream::new(seed);
            outcome.samples = (0..shots).map(|_| rng.unit_f64() < p1).collect();
        }
        Ok(outcome)
    }

    /// Final statevector (circuit qubits followed by oracle workspace) and
    /// the number of oracle queries made.
    pub fn final_state(
        &self,
        circuit: &Circuit,
        oracle: &mut dyn QuantumOracle,
    ) -> Result<(StateVector, usize), QuantumError> {
        if oracle.domain_size() != circuit.domain {
            return Err(QuantumError::DomainMismatch { expected: circuit.domain, found: oracle.domain_size() });
        }
        let workspace = Register::new(circuit.qubits, oracle.workspace_width());
        let total = workspace.end();
        if total > self.max_qubits {
            return Err(QuantumError::DimensionOverflow { requested: total, cap: self.max_qubits });
        }
        let before = oracle.queries();
        let mut state = StateVector::zero(total);
        for gate in &circuit.gates {
            match *gate {
                Gate::X(q) => state.x(q),
                Gate::H(q) => state.h(q),
                Gate::PrepareUniform { reg, n } => state.prepare_uniform(reg, n),
                Gate::Diffusion { reg, n } => state.diffusion(reg, n),
                Gate::Oracle { input, output } => {
                    if input.width != ceil_log2(circuit.domain) {
                        return Err(QuantumError::Layout("oracle input width differs from domain".into()));
                    }
                    oracle.apply(&mut state, super::OracleWires { input, output, workspace })?;
                }
            }
        }
        Ok((state, oracle.queries() - before))
    }
}

/// Runs `circuit` under the default qubit cap.
pub fn run_quantum(
    circuit: &Circuit,
    oracle: &mut dyn QuantumOracle,
    mode: SimulationMode,
) -> Result<QuantumOutcome, QuantumError> {
    Simulator::default().run(circuit, oracle, mode)
}

/// A quantum query algorithm deciding a property of the function behind
/// its oracle. Any classical randomness is averaged out exactly.
pub trait QuantumQueryAlgorithm {
    fn name(&self) -> String;

    fn domain_size(&self) -> usize;

    /// Exact output distribution and the largest number of oracle queries
    /// made on any random branch.
    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError>;
}

impl<T: QuantumQueryAlgorithm + ?Sized> QuantumQueryAlgorithm for &T {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain_size(&self) -> usize {
        (**self).domain_size()
    }
    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        (**self).run_exact(oracle)
    }
}

impl<T: QuantumQueryAlgorithm + ?Sized> QuantumQueryAlgorithm for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain_size(&self) -> usize {
        (**self).domain_size()
    }
    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        (**self).run_exact(oracle)
    }
}

/// A fixed circuit viewed as a query algorithm.
#[derive(Debug, Clone)]
pub struct CircuitAlgorithm {
    name: String,
    circuit: Circuit,
}

impl CircuitAlgorithm {
    pub fn new(name: impl Into<String>, circuit: Circuit) -> Self {
        Self { name: name.into(), circuit }
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }
}

impl QuantumQueryAlgorithm for CircuitAlgorithm {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn domain_size(&self) -> usize {
        self.circuit.domain
    }
    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        run_quantum(&self.circuit, oracle, SimulationMode::Exact)
    }
}
