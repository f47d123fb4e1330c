//! Quantum counterparts of the reductions. Classical coins stay outside
//! the circuits and are averaged out exactly by enumeration.

use super::{check_rebalanceable, draw_hidden_permutation, rebalance_probability, ErrorPair};
use crate::classical_engine::EngineError;
use crate::oracles::{ceil_log2, Codomain, InstanceClass, Permutation};
use crate::quantum_engine::{
    forward_search_oracle, Circuit, CircuitAlgorithm, CleanHOracle, Gate, GroverSearch, Layout, OracleWires,
    QuantumError, QuantumOracle, QuantumOutcome, QuantumQueryAlgorithm, StateVector,
};
use crate::random::{enumerate_choices, prob_to_f64, Prob, RandomSource};

fn mixture(parts: impl IntoIterator<Item = (f64, QuantumOutcome)>) -> QuantumOutcome {
    let mut accept = 0.0;
    let mut query_count = 0;
    for (w, out) in parts {
        accept += w * out.accept_probability();
        query_count = query_count.max(out.query_count);
    }
    let accept = accept.clamp(0.0, 1.0);
    QuantumOutcome { output_distribution: [1.0 - accept, accept], query_count, samples: Vec::new() }
}

fn negated(out: QuantumOutcome) -> QuantumOutcome {
    let [p0, p1] = out.output_distribution;
    QuantumOutcome { output_distribution: [p1, p0], ..out }
}

fn invalid(e: EngineError) -> QuantumError {
    QuantumError::Layout(e.to_string())
}

/// The search reduction with a quantum PERMUTATION_n solver: every oracle
/// call of the solver is a clean two-query simulation of `h_{π,f}`.
#[derive(Debug, Clone)]
pub struct QuantumReductionB<A> {
    a: A,
}

impl<A: QuantumQueryAlgorithm> QuantumReductionB<A> {
    pub fn new(a: A) -> Result<Self, QuantumError> {
        let n = a.domain_size();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(QuantumError::Layout(format!("reduction needs even n, got {n}")));
        }
        Ok(Self { a })
    }

    /// Outcome conditioned on the given hidden permutation.
    pub fn run_with(&self, pi: &Permutation, f_oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        let mut h = CleanHOracle::new(pi.clone(), f_oracle)?;
        let out = self.a.run_exact(&mut h)?;
        Ok(if pi.class() == InstanceClass::P1 { negated(out) } else { out })
    }

    /// One run with the coin and permutation drawn from `rng`.
    pub fn run(
        &self,
        f_oracle: &mut dyn QuantumOracle,
        rng: &mut dyn RandomSource,
    ) -> Result<QuantumOutcome, QuantumError> {
        let pi = draw_hidden_permutation(self.a.domain_size(), rng)?;
        self.run_with(&pi, f_oracle)
    }
}

impl<A: QuantumQueryAlgorithm> QuantumQueryAlgorithm for QuantumReductionB<A> {
    fn name(&self) -> String {
        format!("reduce-b({})", self.a.name())
    }

    fn domain_size(&self) -> usize {
        self.a.domain_size() / 2
    }

    fn run_exact(&self, f_oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        let n = self.a.domain_size();
        let draws = enumerate_choices(|w| draw_hidden_permutation(n, w));
        let mut parts = Vec::with_capacity(draws.len());
        for (w, pi) in draws {
            parts.push((prob_to_f64(w), self.run_with(&pi?, f_oracle)?));
        }
        Ok(mixture(parts))
    }
}

/// Oracle for `g(i) = f(σ(i))` from one call to the oracle for `f`:
/// relabel the index register by `σ`, query, relabel back.
pub struct RelabeledOracle<'a> {
    sigma: Permutation,
    inner: &'a mut dyn QuantumOracle,
}

impl<'a> RelabeledOracle<'a> {
    pub fn new(sigma: Permutation, inner: &'a mut dyn QuantumOracle) -> Result<Self, QuantumError> {
        if sigma.n() != inner.domain_size() {
            return Err(QuantumError::DomainMismatch { expected: inner.domain_size(), found: sigma.n() });
        }
        Ok(Self { sigma, inner })
    }
}

fn relabel(state: &mut StateVector, input: crate::quantum_engine::Register, map: &Permutation) {
    let n = map.n();
    state.permute_basis(|b| {
        let x = input.read(b);
        if x < n {
            input.xor(b, x ^ (map.apply(x + 1) - 1))
        } else {
            b
        }
    });
}

impl QuantumOracle for RelabeledOracle<'_> {
    fn domain_size(&self) -> usize {
        self.inner.domain_size()
    }

    fn codomain(&self) -> Codomain {
        self.inner.codomain()
    }

    fn workspace_width(&self) -> usize {
        self.inner.workspace_width()
    }

    fn apply(&mut self, state: &mut StateVector, wires: OracleWires) -> Result<(), QuantumError> {
        state.check_register(wires.input)?;
        if wires.input.width != ceil_log2(self.domain_size()) {
            return Err(QuantumError::Layout("relabeled input width differs from domain".into()));
        }
        relabel(state, wires.input, &self.sigma);
        self.inner.apply(state, wires)?;
        relabel(state, wires.input, &self.sigma.inverse());
        Ok(())
    }

    fn queries(&self) -> usize {
        self.inner.queries()
    }
}

/// Averages a quantum search algorithm over all relabelings `σ` of its
/// domain; feasible for small domains only (`m!` branches).
#[derive(Debug, Clone)]
pub struct QuantumSymmetrizedSearch<B> {
    b: B,
}

impl<B: QuantumQueryAlgorithm> QuantumSymmetrizedSearch<B> {
    pub fn new(b: B) -> Self {
        Self { b }
    }
}

impl<B: QuantumQueryAlgorithm> QuantumQueryAlgorithm for QuantumSymmetrizedSearch<B> {
    fn name(&self) -> String {
        format!("sym({})", self.b.name())
    }

    fn domain_size(&self) -> usize {
        self.b.domain_size()
    }

    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        let perms = Permutation::all(self.b.domain_size())?;
        let w = 1.0 / perms.len() as f64;
        let mut parts = Vec::with_capacity(perms.len());
        for sigma in perms {
            let mut relabeled = RelabeledOracle::new(sigma, oracle)?;
            parts.push((w, self.b.run_exact(&mut relabeled)?));
        }
        Ok(mixture(parts))
    }
}

/// Quantum algorithm mixed with a constant answer, as in the classical
/// [`Rebalanced`](super::Rebalanced).
#[derive(Debug, Clone)]
pub struct QuantumRebalanced<B> {
    b: B,
    errs: ErrorPair,
}

impl<B: QuantumQueryAlgorithm> QuantumRebalanced<B> {
    pub fn new(b: B, errs: ErrorPair) -> Result<Self, QuantumError> {
        check_rebalanceable(&errs).map_err(invalid)?;
        Ok(Self { b, errs })
    }

    pub fn probability(&self) -> Prob {
        rebalance_probability(&self.errs)
    }
}

impl<B: QuantumQueryAlgorithm> QuantumQueryAlgorithm for QuantumRebalanced<B> {
    fn name(&self) -> String {
        format!("rebalance({})", self.b.name())
    }

    fn domain_size(&self) -> usize {
        self.b.domain_size()
    }

    fn run_exact(&self, oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        let p = prob_to_f64(self.probability());
        let bit = self.errs.eps1 > self.errs.eps0;
        let constant = QuantumOutcome {
            output_distribution: if bit { [0.0, 1.0] } else { [1.0, 0.0] },
            query_count: 0,
            samples: Vec::new(),
        };
        let inner = self.b.run_exact(oracle)?;
        Ok(mixture([(p, constant), (1.0 - p, inner)]))
    }
}

/// Decides PERMUTATION_n with a quantum search algorithm on `{1..n}` whose
/// oracle is simulated from two `π` queries.
#[derive(Debug, Clone)]
pub struct QuantumSearchToPermutation<S> {
    s: S,
}

impl<S: QuantumQueryAlgorithm> QuantumSearchToPermutation<S> {
    pub fn new(s: S) -> Result<Self, QuantumError> {
        let n = s.domain_size();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(QuantumError::Layout(format!("forward reduction needs even n, got {n}")));
        }
        Ok(Self { s })
    }
}

impl<S: QuantumQueryAlgorithm> QuantumQueryAlgorithm for QuantumSearchToPermutation<S> {
    fn name(&self) -> String {
        format!("via-search({})", self.s.name())
    }

    fn domain_size(&self) -> usize {
        self.s.domain_size()
    }

    fn run_exact(&self, p_oracle: &mut dyn QuantumOracle) -> Result<QuantumOutcome, QuantumError> {
        let mut f = forward_search_oracle(p_oracle, self.s.domain_size())?;
        self.s.run_exact(&mut f)
    }
}

/// Grover search over the forward search oracle.
pub type GroverInversion = QuantumSearchToPermutation<GroverSearch>;

pub fn grover_inversion(n: usize) -> Result<GroverInversion, QuantumError> {
    QuantumSearchToPermutation::new(GroverSearch::new(n))
}

/// One-query PERMUTATION_n fixture: queries the uniform superposition and
/// outputs the low bit of the answer register, i.e. accepts with
/// probability equal to the fraction of points with an even image.
pub fn single_query_probe(n: usize) -> Result<CircuitAlgorithm, QuantumError> {
    let w = ceil_log2(n);
    if w == 0 {
        return Err(QuantumError::Layout("probe needs n >= 2".into()));
    }
    let layout = Layout::new(n, w, 0);
    let mut c = Circuit::new(n, layout.qubits(), layout.answer.offset)?;
    c.push(Gate::PrepareUniform { reg: layout.index, n })?;
    c.push(Gate::Oracle { input: layout.index, output: layout.answer })?;
    Ok(CircuitAlgorithm::new("single-query-probe", c))
}
