//! Exact and Monte Carlo error measurement for classical and quantum
//! deciders, plus uniformity testing.
//!
//! Classical algorithms are measured in exact rational arithmetic. Quantum
//! algorithms contribute floating-point output probabilities, so any rate
//! touched by one becomes [`Rate::Approx`].

mod uniformity;

pub use uniformity::{induced_h_distribution, sample_induced_h, uniformity_test, UniformityResult};

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::classical_engine::{
    exact_acceptance, run_classical, ClassicalAlgorithm, CountedOracle, EngineError, Randomness,
};
use crate::oracles::{
    sample_mu, sample_uniform_permutation, FunctionTable, InstanceClass, MuDistribution, MuVariant, OracleError,
    Permutation, SearchInstance,
};
use crate::quantum_engine::{OracleUnitary, QuantumError, QuantumQueryAlgorithm};
use crate::random::{prob_to_f64, Prob, SeededStream};

/// Largest search domain enumerated exactly.
pub const SEARCH_ENUMERATION_CAP: usize = 1 << 16;
/// Largest permutation size enumerated exactly (`n!` inputs).
pub const PERMUTATION_ENUMERATION_CAP: usize = 8;
/// Confidence level of reported Monte Carlo intervals is `1 - MC_ALPHA`.
pub const MC_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("{what} enumeration at n={n} exceeds the cap of {cap}; use Monte Carlo")]
    CapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("decider has domain {found}, measurement asked for {expected}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("at least one trial is required")]
    NoTrials,
    #[error("no samples to test")]
    EmptySamples,
    #[error("sample label {label} outside domain of size {domain}")]
    LabelOutOfRange { label: usize, domain: usize },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// A probability or average, exact when it can be.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    Exact(Prob),
    Approx(f64),
}

impl Rate {
    pub fn zero() -> Self {
        Rate::Exact(Prob::zero())
    }

    pub fn value(&self) -> f64 {
        match *self {
            Rate::Exact(p) => prob_to_f64(p),
            Rate::Approx(x) => x,
        }
    }

    pub fn exact(&self) -> Option<Prob> {
        match *self {
            Rate::Exact(p) => Some(p),
            Rate::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Rate::Exact(_))
    }

    /// `1 - self`.
    pub fn complement(self) -> Self {
        match self {
            Rate::Exact(p) => Rate::Exact(Prob::one() - p),
            Rate::Approx(x) => Rate::Approx(1.0 - x),
        }
    }

    pub fn scale(self, w: Prob) -> Self {
        match self {
            Rate::Exact(p) => Rate::Exact(p * w),
            Rate::Approx(x) => Rate::Approx(x * prob_to_f64(w)),
        }
    }

    pub fn plus(self, other: Rate) -> Self {
        match (self, other) {
            (Rate::Exact(a), Rate::Exact(b)) => Rate::Exact(a + b),
            (a, b) => Rate::Approx(a.value() + b.value()),
        }
    }

    pub fn max(self, other: Rate) -> Self {
        match (self, other) {
            (Rate::Exact(a), Rate::Exact(b)) => Rate::Exact(a.max(b)),
            (a, b) if b.value() > a.value() => b,
            (a, _) => a,
        }
    }

    /// Whether `self ≤ bound`, exactly for exact rates and within the exact
    /// tolerance otherwise.
    pub fn at_most(&self, bound: Prob) -> bool {
        match *self {
            Rate::Exact(p) => p <= bound,
            Rate::Approx(x) => x <= prob_to_f64(bound) + crate::quantum_engine::EXACT_TOLERANCE,
        }
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Exact(p) => write!(f, "{p}"),
            Rate::Approx(x) => write!(f, "{x}"),
        }
    }
}

/// A decision procedure of either kind.
#[derive(Clone, Copy)]
pub enum Decider<'a> {
    Classical(&'a dyn ClassicalAlgorithm),
    Quantum(&'a dyn QuantumQueryAlgorithm),
}

impl Decider<'_> {
    pub fn name(&self) -> String {
        match self {
            Decider::Classical(a) => a.name(),
            Decider::Quantum(a) => a.name(),
        }
    }

    pub fn domain_size(&self) -> usize {
        match self {
            Decider::Classical(a) => a.domain_size(),
            Decider::Quantum(a) => a.domain_size(),
        }
    }

    fn check_domain(&self, n: usize) -> Result<(), MeasureError> {
        if self.domain_size() != n {
            return Err(MeasureError::DomainMismatch { expected: n, found: self.domain_size() });
        }
        Ok(())
    }
}

/// Exact behaviour on one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceOutcome {
    pub accept: Rate,
    pub query_max: usize,
    pub query_mean: Rate,
}

impl InstanceOutcome {
    pub fn error(&self, answer: bool) -> Rate {
        if answer {
            self.accept.complement()
        } else {
            self.accept
        }
    }
}

/// Runs `decider` exactly on the function `table`.
pub fn instance_outcome(decider: Decider<'_>, table: FunctionTable) -> Result<InstanceOutcome, MeasureError> {
    decider.check_domain(table.domain_size())?;
    match decider {
        Decider::Classical(a) => {
            let run = exact_acceptance(a, &table)?;
            Ok(InstanceOutcome {
                accept: Rate::Exact(run.accept),
                query_max: run.query_max,
                query_mean: Rate::Exact(run.query_mean),
            })
        }
        Decider::Quantum(a) => {
            let out = a.run_exact(&mut OracleUnitary::new(table))?;
            Ok(InstanceOutcome {
                accept: Rate::Approx(out.accept_probability()),
                query_max: out.query_count,
                query_mean: Rate::Approx(out.query_count as f64),
            })
        }
    }
}

pub fn instance_error_search(decider: Decider<'_>, f: &SearchInstance) -> Result<Rate, MeasureError> {
    Ok(instance_outcome(decider, FunctionTable::from(f))?.error(f.answer()))
}

pub fn instance_error_perm(decider: Decider<'_>, p: &Permutation) -> Result<Rate, MeasureError> {
    let answer = p.class() == InstanceClass::P1;
    Ok(instance_outcome(decider, FunctionTable::from(p))?.error(answer))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureMode {
    Exact,
    MonteCarlo,
}

impl fmt::Display for MeasureMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasureMode::Exact => "exact",
            MeasureMode::MonteCarlo => "mc",
        })
    }
}

/// Input distribution an error is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputDistribution {
    Search(MuVariant),
    UniformPermutation,
}

impl fmt::Display for InputDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputDistribution::Search(v) => write!(f, "{v}"),
            InputDistribution::UniformPermutation => f.write_str("uniform-permutation"),
        }
    }
}

/// Error profile of a decider on a problem of size `n`.
///
/// `eps0` and `eps1` are the errors conditioned on "no" and "yes" inputs
/// (for search: the unmarked instance and `μ¹`; for permutations: uniform
/// on `P0` and on `P1`). `eps_mu` is the error on the natural mixture (`μ`
/// or uniform over all permutations) and `error` the error on the
/// requested distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub mode: MeasureMode,
    pub distribution: InputDistribution,
    pub n: usize,
    pub error: Rate,
    pub eps0: Option<Rate>,
    pub eps1: Option<Rate>,
    pub eps_mu: Rate,
    pub worst_case: Option<Rate>,
    pub query_max: usize,
    pub query_mean: Rate,
    pub ci_halfwidth: Option<f64>,
    pub trials: Option<u64>,
}

/// Exact errors of a UNIQUE SEARCH_n decider over every instance.
pub fn exact_error_search(decider: Decider<'_>, n: usize, variant: MuVariant) -> Result<ErrorReport, MeasureError> {
    if n > SEARCH_ENUMERATION_CAP {
        return Err(MeasureError::CapExceeded { what: "search", n, cap: SEARCH_ENUMERATION_CAP });
    }
    decider.check_domain(n)?;
    let yes_weight = MuDistribution::new(n, MuVariant::Mu1)?.probability(&SearchInstance::marked_at(n, 1)?);
    let mut eps0 = Rate::zero();
    let mut eps1 = Rate::zero();
    let mut worst = Rate::zero();
    let mut query_max = 0;
    let mut query_mean = Rate::zero();
    for f in SearchInstance::all(n)? {
        let out = instance_outcome(decider, FunctionTable::from(&f))?;
        let err = out.error(f.answer());
        worst = worst.max(err);
        query_max = query_max.max(out.query_max);
        let w = MuDistribution::new(n, MuVariant::Mu)?.probability(&f);
        query_mean = query_mean.plus(out.query_mean.scale(w));
        if f.answer() {
            eps1 = eps1.plus(err.scale(yes_weight));
        } else {
            eps0 = err;
        }
    }
    let half = Prob::new(1, 2);
    let eps_mu = eps0.scale(half).plus(eps1.scale(half));
    let error = match variant {
        MuVariant::Mu => eps_mu,
        MuVariant::Mu0 => eps0,
        MuVariant::Mu1 => eps1,
    };
    Ok(ErrorReport {
        mode: MeasureMode::Exact,
        distribution: InputDistribution::Search(variant),
        n,
        error,
        eps0: Some(eps0),
        eps1: Some(eps1),
        eps_mu,
        worst_case: Some(worst),
        query_max,
        query_mean,
        ci_halfwidth: None,
        trials: None,
    })
}

/// Exact errors of a PERMUTATION_n decider over all `n!` permutations. An
/// empty class (only `P1` at `n = 1`) contributes error 0.
pub fn exact_error_perm(decider: Decider<'_>, n: usize) -> Result<ErrorReport, MeasureError> {
    if n > PERMUTATION_ENUMERATION_CAP {
        return Err(MeasureError::CapExceeded { what: "permutation", n, cap: PERMUTATION_ENUMERATION_CAP });
    }
    decider.check_domain(n)?;
    let perms = Permutation::all(n)?;
    let total = perms.len() as i128;
    let mut sums = [Rate::zero(), Rate::zero()];
    let mut counts = [0i128; 2];
    let mut worst = Rate::zero();
    let mut query_max = 0;
    let mut query_mean = Rate::zero();
    for p in &perms {
        let answer = p.class() == InstanceClass::P1;
        let out = instance_outcome(decider, FunctionTable::from(p))?;
        let err = out.error(answer);
        worst = worst.max(err);
        query_max = query_max.max(out.query_max);
        query_mean = query_mean.plus(out.query_mean.scale(Prob::new(1, total)));
        sums[usize::from(answer)] = sums[usize::from(answer)].plus(err);
        counts[usize::from(answer)] += 1;
    }
    let class_mean = |k: usize| {
        if counts[k] == 0 {
            Rate::zero()
        } else {
            sums[k].scale(Prob::new(1, counts[k]))
        }
    };
    let eps_mu = sums[0].plus(sums[1]).scale(Prob::new(1, total));
    Ok(ErrorReport {
        mode: MeasureMode::Exact,
        distribution: InputDistribution::UniformPermutation,
        n,
        error: eps_mu,
        eps0: Some(class_mean(0)),
        eps1: Some(class_mean(1)),
        eps_mu,
        worst_case: Some(worst),
        query_max,
        query_mean,
        ci_halfwidth: None,
        trials: None,
    })
}

/// Two-sided Hoeffding half-width for a mean of `trials` values in
/// `[0, 1]` at confidence `1 - alpha`.
pub fn hoeffding_halfwidth(trials: u64, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * trials as f64)).sqrt()
}

/// Monte Carlo estimate: draws inputs from `distribution` and coins from
/// `rng`, and reports empirical errors with a 99% Hoeffding interval on
/// `error`. Quantum deciders are sampled from their exact output
/// distribution.
pub fn mc_error(
    decider: Decider<'_>,
    n: usize,
    distribution: InputDistribution,
    trials: u64,
    rng: &mut SeededStream,
) -> Result<ErrorReport, MeasureError> {
    if trials == 0 {
        return Err(MeasureError::NoTrials);
    }
    decider.check_domain(n)?;
    let mut wrong = [0u64; 2];
    let mut seen = [0u64; 2];
    let mut query_max = 0;
    let mut query_total = 0u64;
    for _ in 0..trials {
        let (table, answer) = match distribution {
            InputDistribution::Search(v) => {
                let f = sample_mu(n, v, rng)?;
                (FunctionTable::from(&f), f.answer())
            }
            InputDistribution::UniformPermutation => {
                let p = sample_uniform_permutation(n, rng)?;
                let answer = p.class() == InstanceClass::P1;
                (FunctionTable::from(&p), answer)
            }
        };
        let (output, queries) = match decider {
            Decider::Classical(a) => {
                let mut oracle = CountedOracle::new(table);
                let t = run_classical(a, &mut oracle, Randomness::Stream(rng))?;
                (t.output(), t.query_count())
            }
            Decider::Quantum(a) => {
                let out = a.run_exact(&mut OracleUnitary::new(table))?;
                (rng.unit_f64() < out.accept_probability(), out.query_count)
            }
        };
        let k = usize::from(answer);
        seen[k] += 1;
        if output != answer {
            wrong[k] += 1;
        }
        query_max = query_max.max(queries);
        query_total += queries as u64;
    }
    let ratio = |a: u64, b: u64| Rate::Approx(a as f64 / b as f64);
    let class = |k: usize| (seen[k] > 0).then(|| ratio(wrong[k], seen[k]));
    let error = ratio(wrong[0] + wrong[1], trials);
    let eps_mu = match distribution {
        InputDistribution::Search(MuVariant::Mu) | InputDistribution::UniformPermutation => error,
        InputDistribution::Search(_) => {
            let e0 = class(0).map_or(0.0, |r| r.value());
            let e1 = class(1).map_or(0.0, |r| r.value());
            Rate::Approx((e0 + e1) / 2.0)
        }
    };
    Ok(ErrorReport {
        mode: MeasureMode::MonteCarlo,
        distribution,
        n,
        error,
        eps0: class(0),
        eps1: class(1),
        eps_mu,
        worst_case: None,
        query_max,
        query_mean: ratio(query_total, trials),
        ci_halfwidth: Some(hoeffding_halfwidth(trials, MC_ALPHA)),
        trials: Some(trials),
    })
}
