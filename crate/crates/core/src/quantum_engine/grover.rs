//! Grover search as a decision procedure with a final verification query.

use super::circuit::{run_quantum, Circuit, Gate, QuantumOutcome, QuantumQueryAlgorithm, SimulationMode};
use super::{Layout, QuantumError, QuantumOracle};
use crate::oracles::Codomain;

/// `round(π / (4·asin(1/√n)) − 1/2)`, floored at 0.
pub fn grover_iteration_count(n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let theta = (1.0 / (n as f64).sqrt()).asin();
    let k = (std::f64::consts::PI / (4.0 * theta) - 0.5).round();
    if k < 0.0 {
        0
    } else {
        k as usize
    }
}

/// Grover search on `{1..n}` with `k = grover_iteration_count(n)`
/// iterations followed by one verification query into the clean answer
/// qubit, which is then the output.
pub fn grover_circuit(n: usize) -> Result<Circuit, QuantumError> {
    if n == 0 {
        return Err(QuantumError::Layout("empty domain".into()));
    }
    let layout = Layout::new(n, 1, 0);
    let index = layout.index;
    let answer = layout.answer.offset;
    let mut c = Circuit::new(n, layout.qubits(), answer)?;
    c.push(Gate::PrepareUniform { reg: index, n })?;
    c.push(Gate::X(answer))?.push(Gate::H(answer))?;
    for _ in 0..grover_iteration_count(n) {
        c.push(Gate::Oracle { input: index, output: layout.answer })?;
        c.push(Gate::Diffusion { reg: index, n })?;
    }
    c.push(Gate::H(answer))?.push(Gate::X(answer))?;
    c.push(Gate::Oracle { input: index, output: layout.answer })?;
    Ok(c)
}

/// Runs Grover search exactly against a boolean oracle on `{1..n}`.
pub fn grover_search(f_oracle: &mut dyn QuantumOracle, n: usize) -> Result<QuantumOutcome, QuantumError> {
    GroverSearch::new(n).run_exact(f_oracle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroverSearch {
    n: usize,
}

impl GroverSearch {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn iterations(&self) -> usize {
        grover_iteration_count(self.n)
    }

    /// Success probability on a marked instance.
    pub fn closed_form_success(&self) -> f64 {
        let theta = (1.0 / (self.n as f64).sqrt()).asin();
        ((2 * self.iterations() + 1) as f64 * theta).sin().powi(2)
    }
}

impl QuantumQueryAlgorithm for GroverSearch {
    fn name(&self) -> String {
        "grover".into()
    }

    fn domain_size(&self) -> usize {
        self.n
    }

    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        if oracle.codomain() != Codomain::Bits {
            return Err(QuantumError::Layout("grover needs a boolean oracle".into()));
        }
        run_quantum(&grover_circuit(self.n)?, oracle, SimulationMode::Exact)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{forward_search_oracle, OracleUnitary, EXACT_TOLERANCE};
    use super::*;
    use crate::oracles::{Permutation, SearchInstance};

    #[test]
    fn iteration_counts() {
        let expected = [(1, 0), (4, 1), (8, 2), (16, 3), (32, 4), (64, 6), (100, 7)];
        for (n, k) in expected {
            assert_eq!(grover_iteration_count(n), k, "n={n}");
        }
    }

    #[test]
    fn success_matches_closed_form() {
        for n in [1, 2, 3, 4, 5, 8, 16] {
            let g = GroverSearch::new(n);
            for f in SearchInstance::all(n).unwrap() {
                let mut o = OracleUnitary::from(&f);
                let out = grover_search(&mut o, n).unwrap();
                assert_eq!(out.query_count, g.iterations() + 1);
                let expected = if f.answer() { g.closed_form_success() } else { 0.0 };
                assert!((out.accept_probability() - expected).abs() < EXACT_TOLERANCE, "n={n} {f}");
                let total: f64 = out.output_distribution.iter().sum();
                assert!((total - 1.0).abs() < EXACT_TOLERANCE);
            }
        }
        assert!((GroverSearch::new(4).closed_form_success() - 1.0).abs() < EXACT_TOLERANCE);
        assert!((GroverSearch::new(8).closed_form_success() - 0.9453).abs() < 1e-4);
    }

    #[test]
    fn grover_over_forward_oracle_decides_permutation() {
        let n = 4;
        for p in Permutation::all(n).unwrap() {
            let mut pi = OracleUnitary::from(&p);
            let mut f = forward_search_oracle(&mut pi, n).unwrap();
            let out = grover_search(&mut f, n).unwrap();
            let k = grover_iteration_count(n);
            assert_eq!(out.query_count, 2 * (k + 1));
            let expected = if p.preimage(1) % 2 == 0 { 1.0 } else { 0.0 };
            assert!((out.accept_probability() - expected).abs() < EXACT_TOLERANCE);
        }
    }
}
