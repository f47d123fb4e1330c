//! Classical query algorithms run against counted oracles.
//!
//! An algorithm never sees an oracle table. It receives a [`Session`], the
//! only channel for both oracle queries and random symbols, so every query
//! is counted and every execution can be captured as a [`QueryTranscript`]
//! or replayed exhaustively over its randomness by [`exact_acceptance`].

mod fixtures;

pub use fixtures::{
    baseline_perm_solver, truncated_scan_solver, BaselinePermSolver, ConstantOutput, NoisyScanSearch, RandomGuess,
    SingleProbeSearch, TruncatedScanSolver,
};

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::oracles::{FunctionTable, OracleError};
use crate::random::{enumerate_choices, ExplicitSymbols, Prob, RandomSource, RandomnessError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("query index {index} outside 1..{n}")]
    QueryOutOfRange { index: usize, n: usize },
    #[error("algorithm expects domain size {expected}, oracle has {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("algorithm {0} does not declare a finite randomness space")]
    UndeclaredRandomness(String),
    #[error("invalid algorithm parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Randomness(#[from] RandomnessError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Whether exact enumeration over an algorithm's coins is possible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomnessSpace {
    /// Every run consumes finitely many symbols from finite alphabets.
    Finite,
    Undeclared,
}

/// The only interface through which an algorithm touches its input.
pub trait Session: RandomSource {
    fn domain_size(&self) -> usize;

    /// Oracle value at the 1-based `index`.
    fn query(&mut self, index: usize) -> Result<usize, EngineError>;
}

/// A classical (possibly randomized) decision procedure with oracle access.
pub trait ClassicalAlgorithm {
    fn name(&self) -> String;

    fn domain_size(&self) -> usize;

    fn randomness(&self) -> RandomnessSpace {
        RandomnessSpace::Finite
    }

    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError>;
}

impl<T: ClassicalAlgorithm + ?Sized> ClassicalAlgorithm for &T {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain_size(&self) -> usize {
        (**self).domain_size()
    }
    fn randomness(&self) -> RandomnessSpace {
        (**self).randomness()
    }
    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        (**self).run(session)
    }
}

impl<T: ClassicalAlgorithm + ?Sized> ClassicalAlgorithm for Box<T> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn domain_size(&self) -> usize {
        (**self).domain_size()
    }
    fn randomness(&self) -> RandomnessSpace {
        (**self).randomness()
    }
    fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
        (**self).run(session)
    }
}

/// An oracle table with a query tally.
#[derive(Debug, Clone)]
pub struct CountedOracle {
    table: FunctionTable,
    count: usize,
}

impl CountedOracle {
    pub fn new(table: impl Into<FunctionTable>) -> Self {
        Self { table: table.into(), count: 0 }
    }

    pub fn domain_size(&self) -> usize {
        self.table.domain_size()
    }

    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn query(&mut self, index: usize) -> Result<usize, EngineError> {
        let value = self.table.eval(index).ok_or(EngineError::QueryOutOfRange { index, n: self.domain_size() })?;
        self.count += 1;
        Ok(value)
    }
}

impl<T> From<&T> for CountedOracle
where
    for<'a> &'a T: Into<FunctionTable>,
{
    fn from(x: &T) -> Self {
        CountedOracle::new(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    Query { index: usize, answer: usize },
    Random { alphabet: usize, symbol: usize },
}

/// Everything an execution did, in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryTranscript {
    events: Vec<Event>,
    output: bool,
}

impl QueryTranscript {
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn queries(&self) -> Vec<(usize, usize)> {
        self.events
            .iter()
            .filter_map(|e| match *e {
                Event::Query { index, answer } => Some((index, answer)),
                Event::Random { .. } => None,
            })
            .collect()
    }

    pub fn randomness(&self) -> Vec<usize> {
        self.events
            .iter()
            .filter_map(|e| match *e {
                Event::Random { symbol, .. } => Some(symbol),
                Event::Query { .. } => None,
            })
            .collect()
    }

    pub fn query_count(&self) -> usize {
        self.events.iter().filter(|e| matches!(e, Event::Query { .. })).count()
    }

    pub fn output(&self) -> bool {
        self.output
    }
}

/// Line-oriented dump: `q <index> -> <answer>`, `r <symbol>`, `out <bit>`.
impl fmt::Display for QueryTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for event in &self.events {
            match event {
                Event::Query { index, answer } => writeln!(f, "q {index} -> {answer}")?,
                Event::Random { symbol, .. } => writeln!(f, "r {symbol}")?,
            }
        }
        writeln!(f, "out {}", u8::from(self.output))
    }
}

/// Where an execution's coins come from.
pub enum Randomness<'a> {
    Stream(&'a mut dyn RandomSource),
    Explicit(Vec<usize>),
}

struct EngineSession<'a, R: ?Sized> {
    table: &'a FunctionTable,
    count: &'a mut usize,
    rng: &'a mut R,
    events: Option<Vec<Event>>,
}

impl<R: RandomSource + ?Sized> RandomSource for EngineSession<'_, R> {
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError> {
        let symbol = self.rng.choose(alphabet)?;
        if let Some(events) = &mut self.events {
            events.push(Event::Random { alphabet, symbol });
        }
        Ok(symbol)
    }
}

impl<R: RandomSource + ?Sized> Session for EngineSession<'_, R> {
    fn domain_size(&self) -> usize {
        self.table.domain_size()
    }

    fn query(&mut self, index: usize) -> Result<usize, EngineError> {
        let answer =
            self.table.eval(index).ok_or(EngineError::QueryOutOfRange { index, n: self.table.domain_size() })?;
        *self.count += 1;
        if let Some(events) = &mut self.events {
            events.push(Event::Query { index, answer });
        }
        Ok(answer)
    }
}

fn check_domain(alg: &dyn ClassicalAlgorithm, table: &FunctionTable) -> Result<(), EngineError> {
    if alg.domain_size() != table.domain_size() {
        return Err(EngineError::DomainMismatch { expected: alg.domain_size(), found: table.domain_size() });
    }
    Ok(())
}

/// Runs `alg` once against `oracle`, recording the transcript.
pub fn run_classical(
    alg: &dyn ClassicalAlgorithm,
    oracle: &mut CountedOracle,
    randomness: Randomness<'_>,
) -> Result<QueryTranscript, EngineError> {
    check_domain(alg, &oracle.table)?;
    let CountedOracle { table, count } = oracle;
    let mut explicit;
    let rng: &mut dyn RandomSource = match randomness {
        Randomness::Stream(rng) => rng,
        Randomness::Explicit(symbols) => {
            explicit = ExplicitSymbols::new(symbols);
            &mut explicit
        }
    };
    let mut session = EngineSession { table, count, rng, events: Some(Vec::new()) };
    let output = alg.run(&mut session)?;
    Ok(QueryTranscript { events: session.events.take().unwrap_or_default(), output })
}

/// Exact behaviour of an algorithm on one input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactRun {
    /// Probability of output 1 over the algorithm's randomness.
    pub accept: Prob,
    pub query_max: usize,
    /// Expected number of queries.
    pub query_mean: Prob,
}

/// Enumerates every randomness path of `alg` on `table`.
pub fn exact_acceptance(alg: &dyn ClassicalAlgorithm, table: &FunctionTable) -> Result<ExactRun, EngineError> {
    if alg.randomness() != RandomnessSpace::Finite {
        return Err(EngineError::UndeclaredRandomness(alg.name()));
    }
    check_domain(alg, table)?;
    let leaves = enumerate_choices(|walker| {
        let mut count = 0;
        let mut session = EngineSession { table, count: &mut count, rng: walker, events: None };
        let out = alg.run(&mut session);
        out.map(|bit| (bit, count))
    });
    let mut run = ExactRun { accept: Prob::zero(), query_max: 0, query_mean: Prob::zero() };
    for (weight, leaf) in leaves {
        let (bit, count) = leaf?;
        if bit {
            run.accept += weight;
        }
        run.query_max = run.query_max.max(count);
        run.query_mean += weight * Prob::from_integer(count as i128);
    }
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{Permutation, SearchInstance};
    use crate::random::SeededStream;
    use proptest::prelude::*;

    fn perm(map: &[usize]) -> Permutation {
        Permutation::new(map.to_vec()).unwrap()
    }

    #[test]
    fn constant_algorithm_makes_no_queries() {
        let alg = ConstantOutput::new(4, true);
        let mut oracle = CountedOracle::from(&perm(&[2, 1, 3, 4]));
        let t = run_classical(&alg, &mut oracle, Randomness::Explicit(vec![])).unwrap();
        assert_eq!(t.query_count(), 0);
        assert!(t.output());
        assert_eq!(t.to_string(), "out 1\n");
    }

    #[test]
    fn full_scan_trace() {
        let alg = baseline_perm_solver(4).unwrap();
        let mut oracle = CountedOracle::from(&perm(&[2, 1, 3, 4]));
        let t = run_classical(&alg, &mut oracle, Randomness::Explicit(vec![])).unwrap();
        assert!(t.output());
        assert_eq!(t.queries(), vec![(1, 2), (2, 1)]);
        assert_eq!(oracle.count(), 2);
        assert_eq!(t.to_string(), "q 1 -> 2\nq 2 -> 1\nout 1\n");
    }

    #[test]
    fn baseline_traces() {
        let alg = baseline_perm_solver(2).unwrap();
        let mut o = CountedOracle::from(&perm(&[2, 1]));
        let t = run_classical(&alg, &mut o, Randomness::Explicit(vec![])).unwrap();
        assert_eq!((t.output(), t.query_count()), (true, 2));
        let mut o = CountedOracle::from(&perm(&[1, 2]));
        let t = run_classical(&alg, &mut o, Randomness::Explicit(vec![])).unwrap();
        assert_eq!((t.output(), t.query_count()), (false, 1));
    }

    #[test]
    fn same_seed_same_transcript() {
        let alg = truncated_scan_solver(6, 2).unwrap();
        let p = perm(&[3, 4, 5, 1, 2, 6]);
        let run = |seed| {
            let mut rng = SeededStream::new(seed);
            let mut o = CountedOracle::from(&p);
            run_classical(&alg, &mut o, Randomness::Stream(&mut rng)).unwrap()
        };
        assert_eq!(run(9), run(9));
        let t = run(9);
        assert_eq!(t.randomness().len(), 1);
        assert!(t.to_string().contains("\nr "));
    }

    #[test]
    fn explicit_randomness_errors() {
        let alg = RandomGuess::new(3);
        let mut o = CountedOracle::from(&perm(&[1, 2, 3]));
        assert_eq!(
            run_classical(&alg, &mut o, Randomness::Explicit(vec![])),
            Err(EngineError::Randomness(RandomnessError::Exhausted { consumed: 0 }))
        );
        let t = run_classical(&alg, &mut o, Randomness::Explicit(vec![1])).unwrap();
        assert!(t.output());
    }

    struct OutOfRange;
    impl ClassicalAlgorithm for OutOfRange {
        fn name(&self) -> String {
            "out-of-range".into()
        }
        fn domain_size(&self) -> usize {
            2
        }
        fn run(&self, session: &mut dyn Session) -> Result<bool, EngineError> {
            Ok(session.query(3)? == 1)
        }
    }

    struct Opaque;
    impl ClassicalAlgorithm for Opaque {
        fn name(&self) -> String {
            "opaque".into()
        }
        fn domain_size(&self) -> usize {
            2
        }
        fn randomness(&self) -> RandomnessSpace {
            RandomnessSpace::Undeclared
        }
        fn run(&self, _: &mut dyn Session) -> Result<bool, EngineError> {
            Ok(false)
        }
    }

    #[test]
    fn engine_errors() {
        let mut o = CountedOracle::from(&perm(&[1, 2]));
        assert_eq!(
            run_classical(&OutOfRange, &mut o, Randomness::Explicit(vec![])),
            Err(EngineError::QueryOutOfRange { index: 3, n: 2 })
        );
        let mut o3 = CountedOracle::from(&perm(&[1, 2, 3]));
        assert!(matches!(
            run_classical(&ConstantOutput::new(2, false), &mut o3, Randomness::Explicit(vec![])),
            Err(EngineError::DomainMismatch { .. })
        ));
        assert!(matches!(exact_acceptance(&Opaque, o.table()), Err(EngineError::UndeclaredRandomness(_))));
    }

    #[test]
    fn baseline_is_exact_on_all_permutations() {
        let alg = baseline_perm_solver(4).unwrap();
        for p in Permutation::all(4).unwrap() {
            let run = exact_acceptance(&alg, &(&p).into()).unwrap();
            let expected = p.class().answer().unwrap();
            assert_eq!(run.accept, Prob::from_integer(i128::from(expected)));
            assert_eq!(run.query_max, p.preimage(1));
        }
    }

    /// Independent closed-form oracle: uniform error of the truncated scan.
    fn truncated_closed_form(n: usize, budget: usize) -> Prob {
        (Prob::from_integer(1) - Prob::new(budget as i128, n as i128)) / 2
    }

    #[test]
    fn truncated_scan_matches_closed_form() {
        for n in 1..=6 {
            let perms = Permutation::all(n).unwrap();
            for budget in 0..=n {
                let alg = truncated_scan_solver(n, budget).unwrap();
                let mut err = Prob::zero();
                for p in &perms {
                    let run = exact_acceptance(&alg, &p.into()).unwrap();
                    let wrong =
                        if p.class().answer().unwrap() { Prob::from_integer(1) - run.accept } else { run.accept };
                    err += wrong;
                }
                err /= Prob::from_integer(perms.len() as i128);
                assert_eq!(err, truncated_closed_form(n, budget), "n={n} budget={budget}");
            }
        }
        assert_eq!(truncated_closed_form(4, 2), Prob::new(1, 4));
    }

    #[test]
    fn noisy_search_has_declared_errors() {
        let alg = NoisyScanSearch::new(4, 3, Prob::new(1, 10), Prob::new(1, 10)).unwrap();
        let no = exact_acceptance(&alg, &(&SearchInstance::unmarked(4).unwrap()).into()).unwrap();
        assert_eq!(no.accept, Prob::new(1, 10));
        let mut miss = Prob::zero();
        for j in 1..=4 {
            let f = SearchInstance::marked_at(4, j).unwrap();
            miss += Prob::from_integer(1) - exact_acceptance(&alg, &(&f).into()).unwrap().accept;
        }
        assert_eq!(miss / 4, Prob::new(3, 10));
    }

    proptest! {
        #[test]
        fn tally_equals_transcript_length(
            n in 1usize..8,
            budget_frac in 0.0f64..=1.0,
            seed in any::<u64>(),
        ) {
            let budget = ((n as f64) * budget_frac).floor() as usize;
            let mut rng = SeededStream::new(seed);
            let p = crate::oracles::sample_uniform_permutation(n, &mut rng).unwrap();
            let algs: Vec<Box<dyn ClassicalAlgorithm>> = vec![
                Box::new(baseline_perm_solver(n).unwrap()),
                Box::new(truncated_scan_solver(n, budget).unwrap()),
                Box::new(RandomGuess::new(n)),
                Box::new(SingleProbeSearch::new(n)),
            ];
            for alg in &algs {
                let mut oracle = CountedOracle::from(&p);
                let t = run_classical(alg.as_ref(), &mut oracle, Randomness::Stream(&mut rng)).unwrap();
                prop_assert_eq!(t.query_count(), oracle.count());
            }
        }

        #[test]
        fn explicit_mode_is_pure(symbol in 0usize..2, n in 2usize..7) {
            let alg = truncated_scan_solver(n, 1).unwrap();
            let p = Permutation::identity(n).unwrap();
            let p = p.compose(&Permutation::new((1..=n).rev().collect()).unwrap()).unwrap();
            let a = run_classical(&alg, &mut CountedOracle::from(&p), Randomness::Explicit(vec![symbol])).unwrap();
            let b = run_classical(&alg, &mut CountedOracle::from(&p), Randomness::Explicit(vec![symbol])).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
