//! Reference algorithms with exactly known error profiles.

use super::{ClassicalAlgorithm, EngineError, Session};
use crate::random::Prob;

/// Outputs a fixed bit without looking at the input.
#[derive(Debug, Clone, Copy)]
pub struct ConstantOutput {
    n: usize,
    bit: bool,
}

impl ConstantOutput {
    pub fn new(n: usize, bit: bool) -> Self {
        Self { n, bit }
    }
}

impl ClassicalAlgorithm for ConstantOutput {
    fn name(&self) -> String {
        format!("constant-{}", u8::from(self.bit))
    }
    fn domain_size(&self) -> usize {
        self.n
    }
    fn run(&self, _: &mut dyn Session) -> Result<bool, EngineError> {
        Ok(self.bit)
    }
}

/// A fair coin.
#[derive(Debug, Clone, Copy)]
pub struct RandomGuess {
    n: usize,
}

impl RandomGuess {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl ClassicalAlgorithm for RandomGuess {
    fn name(&self) -> String {
        "random-guess".into()
    }
    fn domain_size(&self) -> usize {
        self.n
    }
    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        Ok(session.coin()?)
    }
}

/// Scans the first `budget` positions for the preimage of 1 and answers its
/// parity; guesses with a fair coin when the scan comes up empty.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedScanSolver {
    n: usize,
    budget: usize,
}

/// Full scan: zero error, at most `n` queries.
pub type BaselinePermSolver = TruncatedScanSolver;

impl TruncatedScanSolver {
    pub fn new(n: usize, budget: usize) -> Result<Self, EngineError> {
        if n == 0 {
            return Err(EngineError::InvalidParameters("n must be positive".into()));
        }
        if budget > n {
            return Err(EngineError::InvalidParameters(format!("budget {budget} exceeds domain size {n}")));
        }
        Ok(Self { n, budget })
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

pub fn baseline_perm_solver(n: usize) -> Result<BaselinePermSolver, EngineError> {
    TruncatedScanSolver::new(n, n)
}

pub fn truncated_scan_solver(n: usize, budget: usize) -> Result<TruncatedScanSolver, EngineError> {
    TruncatedScanSolver::new(n, budget)
}

impl ClassicalAlgorithm for TruncatedScanSolver {
    fn name(&self) -> String {
        if self.budget == self.n {
            "baseline-scan".into()
        } else {
            format!("truncated-scan-{}", self.budget)
        }
    }
    fn domain_size(&self) -> usize {
        self.n
    }
    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        for i in 1..=self.budget {
            if session.query(i)? == 1 {
                return Ok(i % 2 == 0);
            }
        }
        if self.budget == self.n {
            // Only reachable on inputs that never map to 1.
            return Ok(false);
        }
        Ok(session.coin()?)
    }
}

/// Search fixture: queries index 1 only and reports `f(1)`.
#[derive(Debug, Clone, Copy)]
pub struct SingleProbeSearch {
    n: usize,
}

impl SingleProbeSearch {
    pub fn new(n: usize) -> Self {
        Self { n }
    }
}

impl ClassicalAlgorithm for SingleProbeSearch {
    fn name(&self) -> String {
        "single-probe".into()
    }
    fn domain_size(&self) -> usize {
        self.n
    }
    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        Ok(session.query(1)? == 1)
    }
}

/// Search fixture with tunable error: scans the first `budget` positions.
/// A hit is reported except with probability `miss`; an empty scan
/// answers "yes" with probability `false_alarm`.
///
/// Errors: `ε0 = false_alarm`, and on `μ¹`
/// `ε1 = (budget/n)·miss + (1 - budget/n)·(1 - false_alarm)`.
#[derive(Debug, Clone, Copy)]
pub struct NoisyScanSearch {
    n: usize,
    budget: usize,
    false_alarm: Prob,
    miss: Prob,
}

impl NoisyScanSearch {
    pub fn new(n: usize, budget: usize, false_alarm: Prob, miss: Prob) -> Result<Self, EngineError> {
        let unit = |p: Prob| p >= Prob::from_integer(0) && p <= Prob::from_integer(1);
        if n == 0 || budget > n || !unit(false_alarm) || !unit(miss) {
            return Err(EngineError::InvalidParameters(format!(
                "noisy scan n={n} budget={budget} false_alarm={false_alarm} miss={miss}"
            )));
        }
        Ok(Self { n, budget, false_alarm, miss })
    }
}

impl ClassicalAlgorithm for NoisyScanSearch {
    fn name(&self) -> String {
        format!("noisy-scan-{}-fa{}-miss{}", self.budget, self.false_alarm, self.miss)
    }
    fn domain_size(&self) -> usize {
        self.n
    }
    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        for i in 1..=self.budget {
            if session.query(i)? == 1 {
                return Ok(!session.bernoulli(self.miss)?);
            }
        }
        Ok(session.bernoulli(self.false_alarm)?)
    }
}
