//! Reductions between PERMUTATION and UNIQUE SEARCH, as algorithm wrappers.
//!
//! Each wrapper is itself a [`ClassicalAlgorithm`] (or, in [`quantum`], a
//! [`QuantumQueryAlgorithm`](crate::quantum_engine::QuantumQueryAlgorithm)):
//! it draws its own coins through the session and answers the inner
//! algorithm's queries by querying the outer oracle.

pub mod quantum;

pub use quantum::{
    grover_inversion, single_query_probe, GroverInversion, QuantumRebalanced, QuantumReductionB,
    QuantumSearchToPermutation, QuantumSymmetrizedSearch, RelabeledOracle,
};

use num_traits::{One, Signed, Zero};

use crate::classical_engine::{
    run_classical, ClassicalAlgorithm, CountedOracle, EngineError, QueryTranscript, Randomness, RandomnessSpace,
    Session,
};
use crate::oracles::{
    h_value, sample_omega_sigma, sample_uniform_in_class, sample_uniform_permutation, InstanceClass, OracleError,
    Permutation, SearchInstance,
};
use crate::random::{Prob, RandomSource, RandomnessError};

/// Parameters of a reduction run: the PERMUTATION size, the assumed bound
/// on the solver's distributional error, and the seed for sampled runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionConfig {
    pub n: usize,
    pub epsilon_bound: Prob,
    pub seed: u64,
}

impl ReductionConfig {
    pub fn new(n: usize, epsilon_bound: Prob, seed: u64) -> Result<Self, EngineError> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(EngineError::InvalidParameters(format!("n must be even and positive, got {n}")));
        }
        if epsilon_bound < Prob::zero() || epsilon_bound >= Prob::new(1, 2) {
            return Err(EngineError::InvalidParameters(format!("epsilon bound {epsilon_bound} outside [0, 1/2)")));
        }
        Ok(Self { n, epsilon_bound, seed })
    }

    /// `(1 + 2ε)/4`.
    pub fn mu_bound(&self) -> Prob {
        mu_error_bound(self.epsilon_bound)
    }

    /// `1/(3 − 2ε)`.
    pub fn worst_case_bound(&self) -> Prob {
        worst_case_error_bound(self.epsilon_bound)
    }
}

pub fn mu_error_bound(eps: Prob) -> Prob {
    (Prob::one() + eps * 2) / 4
}

pub fn worst_case_error_bound(eps: Prob) -> Prob {
    Prob::one() / (Prob::from_integer(3) - eps * 2)
}

/// Errors on the "no" and "yes" sides of a decision problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorPair {
    pub eps0: Prob,
    pub eps1: Prob,
}

impl ErrorPair {
    pub fn new(eps0: Prob, eps1: Prob) -> Result<Self, EngineError> {
        let unit = |p: Prob| p >= Prob::zero() && p <= Prob::one();
        if !unit(eps0) || !unit(eps1) {
            return Err(EngineError::InvalidParameters(format!("errors ({eps0}, {eps1}) outside [0, 1]")));
        }
        Ok(Self { eps0, eps1 })
    }

    pub fn max(&self) -> Prob {
        self.eps0.max(self.eps1)
    }

    /// `max{ε0, ε1} / (1 + |ε0 − ε1|)`.
    pub fn rebalanced_worst_case(&self) -> Prob {
        self.max() / (Prob::one() + (self.eps0 - self.eps1).abs())
    }
}

/// `|ε1 − ε0| / (1 + |ε1 − ε0|)`.
pub fn rebalance_probability(errs: &ErrorPair) -> Prob {
    let d = (errs.eps1 - errs.eps0).abs();
    d / (Prob::one() + d)
}

/// `((1 + 1/n)·ε0 + (1 − 1/n)·ε1) / 2` for odd `n`.
pub fn odd_error_combination(errs: &ErrorPair, n: usize) -> Result<Prob, EngineError> {
    if n.is_multiple_of(2) {
        return Err(EngineError::InvalidParameters(format!("n must be odd, got {n}")));
    }
    let inv = Prob::new(1, n as i128);
    Ok(((Prob::one() + inv) * errs.eps0 + (Prob::one() - inv) * errs.eps1) / 2)
}

/// A session seen through a query translation. Random symbols pass through
/// to the outer session unchanged.
struct MappedSession<'s, F> {
    outer: &'s mut dyn Session,
    n: usize,
    map: F,
}

impl<F> RandomSource for MappedSession<'_, F> {
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError> {
        self.outer.choose(alphabet)
    }
}

impl<F> Session for MappedSession<'_, F>
where
    F: FnMut(&mut dyn Session, usize) -> Result<usize, EngineError>,
{
    fn domain_size(&self) -> usize {
        self.n
    }

    fn query(&mut self, index: usize) -> Result<usize, EngineError> {
        if index == 0 || index > self.n {
            return Err(EngineError::QueryOutOfRange { index, n: self.n });
        }
        (self.map)(&mut *self.outer, index)
    }
}

fn run_mapped<F>(inner: &dyn ClassicalAlgorithm, outer: &mut dyn Session, map: F) -> Result<bool, EngineError>
where
    F: FnMut(&mut dyn Session, usize) -> Result<usize, EngineError>,
{
    let n = inner.domain_size();
    inner.run(&mut MappedSession { outer, n, map })
}

fn check_even(n: usize) -> Result<(), EngineError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(EngineError::InvalidParameters(format!("n must be even and positive, got {n}")));
    }
    Ok(())
}

/// Draws the class coin and a uniform `π` in that class.
pub(crate) fn draw_hidden_permutation<R: RandomSource + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<Permutation, OracleError> {
    let class = if rng.coin()? { InstanceClass::P1 } else { InstanceClass::P0 };
    sample_uniform_in_class(n, class, rng)
}

/// Search algorithm on `{1..n/2}` built from a PERMUTATION_n solver: hide
/// `f` inside `h_{π,f}` for a random `π` of a random class, run the solver,
/// and negate its answer when `π ∈ P1`. Each `h` query costs at most one
/// `f` query.
#[derive(Debug, Clone)]
pub struct ReductionB<A> {
    a: A,
}

impl<A: ClassicalAlgorithm> ReductionB<A> {
    pub fn new(a: A) -> Result<Self, EngineError> {
        check_even(a.domain_size())?;
        Ok(Self { a })
    }

    pub fn inner(&self) -> &A {
        &self.a
    }
}

impl<A: ClassicalAlgorithm> ClassicalAlgorithm for ReductionB<A> {
    fn name(&self) -> String {
        format!("reduce-b({})", self.a.name())
    }

    fn domain_size(&self) -> usize {
        self.a.domain_size() / 2
    }

    fn randomness(&self) -> RandomnessSpace {
        self.a.randomness()
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        let pi = draw_hidden_permutation(self.a.domain_size(), session)?;
        let out = run_mapped(&self.a, session, |outer, i| {
            let mut failure = None;
            let (value, _) = h_value(&pi, i, |j| {
                outer.query(j).unwrap_or_else(|e| {
                    failure = Some(e);
                    0
                })
            });
            failure.map_or(Ok(value), Err)
        })?;
        Ok(match pi.class() {
            InstanceClass::P1 => !out,
            _ => out,
        })
    }
}

/// One sampled run of the reduction on the search instance `f`.
pub fn reduce_b<A: ClassicalAlgorithm>(
    a: A,
    f: &SearchInstance,
    rng: &mut dyn RandomSource,
) -> Result<QueryTranscript, EngineError> {
    let b = ReductionB::new(a)?;
    if f.n() != b.domain_size() {
        return Err(EngineError::DomainMismatch { expected: b.domain_size(), found: f.n() });
    }
    run_classical(&b, &mut CountedOracle::from(f), Randomness::Stream(rng))
}

/// Runs a search algorithm with every query `i` rerouted to `σ(i)` for a
/// uniform `σ`.
#[derive(Debug, Clone)]
pub struct SymmetrizedSearch<B> {
    b: B,
}

pub fn symmetrize_search<B: ClassicalAlgorithm>(b: B) -> SymmetrizedSearch<B> {
    SymmetrizedSearch { b }
}

impl<B: ClassicalAlgorithm> ClassicalAlgorithm for SymmetrizedSearch<B> {
    fn name(&self) -> String {
        format!("sym({})", self.b.name())
    }

    fn domain_size(&self) -> usize {
        self.b.domain_size()
    }

    fn randomness(&self) -> RandomnessSpace {
        self.b.randomness()
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        let sigma = sample_uniform_permutation(self.b.domain_size(), session)?;
        run_mapped(&self.b, session, |outer, i| outer.query(sigma.apply(i)))
    }
}

/// With probability `rebalance_probability(errs)` outputs the answer of
/// the side with the larger error; otherwise runs the inner algorithm.
#[derive(Debug, Clone)]
pub struct Rebalanced<B> {
    b: B,
    errs: ErrorPair,
}

pub fn rebalance<B: ClassicalAlgorithm>(b: B, errs: ErrorPair) -> Result<Rebalanced<B>, EngineError> {
    check_rebalanceable(&errs)?;
    Ok(Rebalanced { b, errs })
}

pub(crate) fn check_rebalanceable(errs: &ErrorPair) -> Result<(), EngineError> {
    if errs.eps0 + errs.eps1 >= Prob::one() {
        return Err(EngineError::InvalidParameters(format!(
            "rebalancing needs eps0 + eps1 < 1, got {} + {}",
            errs.eps0, errs.eps1
        )));
    }
    Ok(())
}

impl<B> Rebalanced<B> {
    pub fn probability(&self) -> Prob {
        rebalance_probability(&self.errs)
    }

    /// The constant answer output on the rebalancing branch.
    pub fn constant(&self) -> bool {
        self.errs.eps1 > self.errs.eps0
    }
}

impl<B: ClassicalAlgorithm> ClassicalAlgorithm for Rebalanced<B> {
    fn name(&self) -> String {
        format!("rebalance({})", self.b.name())
    }

    fn domain_size(&self) -> usize {
        self.b.domain_size()
    }

    fn randomness(&self) -> RandomnessSpace {
        self.b.randomness()
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        if session.bernoulli(self.probability())? {
            return Ok(self.constant());
        }
        self.b.run(session)
    }
}

/// Runs a PERMUTATION solver on `ω ∘ π ∘ σ` for random `ω` fixing 1 and
/// parity-preserving `σ`; each composed query costs one `π` query.
#[derive(Debug, Clone)]
pub struct PermutationSymmetrized<A> {
    a: A,
}

pub fn permutation_symmetrize<A: ClassicalAlgorithm>(a: A) -> PermutationSymmetrized<A> {
    PermutationSymmetrized { a }
}

impl<A: ClassicalAlgorithm> ClassicalAlgorithm for PermutationSymmetrized<A> {
    fn name(&self) -> String {
        format!("perm-sym({})", self.a.name())
    }

    fn domain_size(&self) -> usize {
        self.a.domain_size()
    }

    fn randomness(&self) -> RandomnessSpace {
        self.a.randomness()
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        let (omega, sigma) = sample_omega_sigma(self.a.domain_size(), session)?;
        run_mapped(&self.a, session, |outer, i| Ok(omega.apply(outer.query(sigma.apply(i))?)))
    }
}

/// Runs a solver for odd size `n` on a permutation of `{1..n-1}` extended by
/// `π(n) = n`; the query at `n` is answered without touching the oracle.
#[derive(Debug, Clone)]
pub struct OddExtension<A> {
    a: A,
}

pub fn odd_n_wrapper<A: ClassicalAlgorithm>(a: A) -> Result<OddExtension<A>, EngineError> {
    if a.domain_size() < 2 {
        return Err(EngineError::InvalidParameters("odd extension needs n >= 2".into()));
    }
    Ok(OddExtension { a })
}

impl<A: ClassicalAlgorithm> ClassicalAlgorithm for OddExtension<A> {
    fn name(&self) -> String {
        format!("extend({})", self.a.name())
    }

    fn domain_size(&self) -> usize {
        self.a.domain_size() - 1
    }

    fn randomness(&self) -> RandomnessSpace {
        self.a.randomness()
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        let n = self.a.domain_size();
        run_mapped(&self.a, session, |outer, i| if i == n { Ok(n) } else { outer.query(i) })
    }
}

/// Decides PERMUTATION_n with a search algorithm on `{1..n}` run against
/// `f(i) = [π(i) = 1 and i even]`, one `π` query per `f` query.
#[derive(Debug, Clone)]
pub struct SearchToPermutation<S> {
    s: S,
}

pub fn search_to_permutation<S: ClassicalAlgorithm>(s: S) -> Result<SearchToPermutation<S>, EngineError> {
    check_even(s.domain_size())?;
    Ok(SearchToPermutation { s })
}

impl<S: ClassicalAlgorithm> ClassicalAlgorithm for SearchToPermutation<S> {
    fn name(&self) -> String {
        format!("via-search({})", self.s.name())
    }

    fn domain_size(&self) -> usize {
        self.s.domain_size()
    }

    fn randomness(&self) -> RandomnessSpace {
        self.s.randomness()
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        run_mapped(&self.s, session, |outer, i| {
            let image = outer.query(i)?;
            Ok(usize::from(image == 1 && i % 2 == 0))
        })
    }
}

/// The search instance a permutation induces in [`SearchToPermutation`].
pub fn forward_search_instance(p: &Permutation) -> SearchInstance {
    let i = p.preimage(1);
    SearchInstance::new(p.n(), i.is_multiple_of(2).then_some(i)).expect("preimage lies in 1..n")
}
