//! Randomness sources.
//!
//! Every randomized procedure in the crate draws its coins through
//! [`RandomSource::choose`], a uniform pick from a finite alphabet. The same
//! procedure can then be driven three ways: by a seeded pseudo-random stream,
//! by an explicit list of symbols, or exhaustively by [`enumerate_choices`],
//! which walks the whole tree of choice sequences and attaches the exact
//! probability of every leaf.

use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Exact probability.
pub type Prob = Ratio<i128>;

pub fn prob_to_f64(p: Prob) -> f64 {
    *p.numer() as f64 / *p.denom() as f64
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RandomnessError {
    #[error("explicit randomness exhausted after {consumed} symbols")]
    Exhausted { consumed: usize },
    #[error("symbol {symbol} outside alphabet of size {alphabet}")]
    InvalidSymbol { symbol: usize, alphabet: usize },
    #[error("cannot choose from an empty alphabet")]
    EmptyAlphabet,
    #[error("choice tree is not deterministic: alphabet {found} requested where {expected} was recorded")]
    Nondeterministic { expected: usize, found: usize },
}

/// A stream of uniform choices from finite alphabets.
pub trait RandomSource {
    /// Returns a symbol uniform in `0..alphabet`.
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError>;

    fn coin(&mut self) -> Result<bool, RandomnessError> {
        Ok(self.choose(2)? == 1)
    }

    /// Returns `true` with probability exactly `p` (clamped to `[0, 1]`).
    fn bernoulli(&mut self, p: Prob) -> Result<bool, RandomnessError> {
        if p <= Prob::zero() {
            return Ok(false);
        }
        if p >= Prob::one() {
            return Ok(true);
        }
        let denom = usize::try_from(*p.denom()).expect("probability denominator fits usize");
        let numer = usize::try_from(*p.numer()).expect("probability numerator fits usize");
        Ok(self.choose(denom)? < numer)
    }
}

impl<R: RandomSource + ?Sized> RandomSource for &mut R {
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError> {
        (**self).choose(alphabet)
    }
}

/// Seeded pseudo-random stream (ChaCha8, platform independent).
#[derive(Debug, Clone)]
pub struct SeededStream {
    rng: ChaCha8Rng,
}

impl SeededStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Derives an independent stream, e.g. one per worker or per fixture.
    pub fn fork(&mut self) -> Self {
        Self::new(self.rng.gen())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }

    /// Uniform in `[0, 1)`.
    pub fn unit_f64(&mut self) -> f64 {
        self.rng.gen()
    }
}

impl RandomSource for SeededStream {
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError> {
        if alphabet == 0 {
            return Err(RandomnessError::EmptyAlphabet);
        }
        Ok(self.rng.gen_range(0..alphabet))
    }
}

/// Replays a fixed list of symbols; running past the end is an error.
#[derive(Debug, Clone, Default)]
pub struct ExplicitSymbols {
    symbols: Vec<usize>,
    pos: usize,
}

impl ExplicitSymbols {
    pub fn new(symbols: Vec<usize>) -> Self {
        Self { symbols, pos: 0 }
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

impl RandomSource for ExplicitSymbols {
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError> {
        if alphabet == 0 {
            return Err(RandomnessError::EmptyAlphabet);
        }
        let symbol = *self.symbols.get(self.pos).ok_or(RandomnessError::Exhausted { consumed: self.pos })?;
        if symbol >= alphabet {
            return Err(RandomnessError::InvalidSymbol { symbol, alphabet });
        }
        self.pos += 1;
        Ok(symbol)
    }
}

/// Source used by [`enumerate_choices`]: follows a recorded prefix, then
/// extends it with symbol 0 at every fresh choice point.
#[derive(Debug, Default)]
pub struct ChoiceWalker {
    path: Vec<(usize, usize)>,
    pos: usize,
}

impl ChoiceWalker {
    fn probability(&self) -> Prob {
        self.path[..self.pos].iter().fold(Prob::one(), |acc, &(_, arity)| acc / Prob::from_integer(arity as i128))
    }

    /// Moves to the next leaf in lexicographic order; false when exhausted.
    fn advance(&mut self) -> bool {
        self.path.truncate(self.pos);
        while let Some((symbol, arity)) = self.path.pop() {
            if symbol + 1 < arity {
                self.path.push((symbol + 1, arity));
                return true;
            }
        }
        false
    }
}

impl RandomSource for ChoiceWalker {
    fn choose(&mut self, alphabet: usize) -> Result<usize, RandomnessError> {
        if alphabet == 0 {
            return Err(RandomnessError::EmptyAlphabet);
        }
        let symbol = match self.path.get(self.pos) {
            Some(&(symbol, arity)) if arity == alphabet => symbol,
            Some(&(_, arity)) => return Err(RandomnessError::Nondeterministic { expected: arity, found: alphabet }),
            None => {
                self.path.push((0, alphabet));
                0
            }
        };
        self.pos += 1;
        Ok(symbol)
    }
}

/// Runs `procedure` once per leaf of its choice tree and returns every
/// result together with its exact probability. The probabilities sum to 1.
///
/// `procedure` must consume choices deterministically given the symbols it
/// has received; a mismatch is reported as
/// [`RandomnessError::Nondeterministic`] when it surfaces through the source.
pub fn enumerate_choices<T, F>(mut procedure: F) -> Vec<(Prob, T)>
where
    F: FnMut(&mut ChoiceWalker) -> T,
{
    let mut walker = ChoiceWalker::default();
    let mut leaves = Vec::new();
    loop {
        walker.pos = 0;
        let value = procedure(&mut walker);
        leaves.push((walker.probability(), value));
        if !walker.advance() {
            return leaves;
        }
    }
}

/// Folds over the choice tree without materializing the leaves.
pub fn fold_choices<A, F, G>(init: A, mut procedure: F, mut combine: G) -> A
where
    F: FnMut(&mut ChoiceWalker) -> A,
    G: FnMut(A, Prob, A) -> A,
{
    let mut walker = ChoiceWalker::default();
    let mut acc = init;
    loop {
        walker.pos = 0;
        let value = procedure(&mut walker);
        acc = combine(acc, walker.probability(), value);
        if !walker.advance() {
            return acc;
        }
    }
}
