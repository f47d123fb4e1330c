//! Problem instances and instance classes.
//!
//! All public indices and values are 1-based: a [`Permutation`] on `n` maps
//! `{1..n}` onto itself, a [`SearchInstance`] marks at most one point of
//! `{1..n}`. Storage is a plain `Vec` where slot `i - 1` holds the image of
//! `i`; the conversion lives only in the accessors of this module.

mod sampling;
mod text;

pub use sampling::{
    compose_self_reduction, extend_permutation, sample_mu, sample_omega_sigma, sample_uniform_in_class,
    sample_uniform_permutation,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::random::{Prob, RandomnessError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("domain size must be positive")]
    ZeroSize,
    #[error("not a permutation of 1..{n}: {reason}")]
    NotPermutation { n: usize, reason: String },
    #[error("value {value} at position {index} outside 1..{n}")]
    ValueOutOfRange { index: usize, value: usize, n: usize },
    #[error("index {index} outside 1..{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("domain size {n} must be even")]
    OddSize { n: usize },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("class {class:?} has no members for n = {n}")]
    EmptyClass { class: InstanceClass, n: usize },
    #[error("class {0:?} cannot be sampled as a permutation class")]
    NotPermutationClass(InstanceClass),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot parse instance: {0}")]
    Parse(String),
    #[error(transparent)]
    Randomness(#[from] RandomnessError),
}

/// Answer classes: `P0`/`P1` partition the permutations by the parity of
/// the preimage of 1; `Q` collects the unique-collision functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InstanceClass {
    P0,
    P1,
    Q,
    NotClassified,
}

impl InstanceClass {
    /// The PERMUTATION answer bit of the class (`P1` is "yes").
    pub fn answer(self) -> Option<bool> {
        match self {
            InstanceClass::P0 => Some(false),
            InstanceClass::P1 => Some(true),
            _ => None,
        }
    }
}

fn is_even(i: usize) -> bool {
    i.is_multiple_of(2)
}

/// A bijection on `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Builds `π` from its images `[π(1), .., π(n)]`.
    pub fn new(map: Vec<usize>) -> Result<Self, OracleError> {
        let n = map.len();
        if n == 0 {
            return Err(OracleError::ZeroSize);
        }
        let mut seen = vec![false; n];
        for (slot, &value) in map.iter().enumerate() {
            if value == 0 || value > n {
                return Err(OracleError::ValueOutOfRange { index: slot + 1, value, n });
            }
            if std::mem::replace(&mut seen[value - 1], true) {
                return Err(OracleError::NotPermutation { n, reason: format!("value {value} appears twice") });
            }
        }
        Ok(Self { map })
    }

    pub(crate) fn from_map_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(Self::new(map.clone()).is_ok());
        Self { map }
    }

    pub fn identity(n: usize) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroSize);
        }
        Ok(Self { map: (1..=n).collect() })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// `π(i)` for `i` in `1..=n`.
    ///
    /// Panics on an out-of-range index; use [`Permutation::get`] for a
    /// checked lookup.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn get(&self, i: usize) -> Result<usize, OracleError> {
        if i == 0 || i > self.n() {
            return Err(OracleError::IndexOutOfRange { index: i, n: self.n() });
        }
        Ok(self.map[i - 1])
    }

    /// Images `[π(1), .., π(n)]`.
    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// `π⁻¹(v)`.
    pub fn preimage(&self, v: usize) -> usize {
        self.map.iter().position(|&x| x == v).expect("value in range") + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (slot, &v) in self.map.iter().enumerate() {
            inv[v - 1] = slot + 1;
        }
        Permutation { map: inv }
    }

    /// `self ∘ other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, OracleError> {
        if self.n() != other.n() {
            return Err(OracleError::SizeMismatch { expected: self.n(), found: other.n() });
        }
        Ok(Permutation { map: other.map.iter().map(|&j| self.map[j - 1]).collect() })
    }

    pub fn class(&self) -> InstanceClass {
        parity_class(self)
    }

    /// All `n!` permutations in lexicographic order.
    pub fn all(n: usize) -> Result<Vec<Permutation>, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroSize);
        }
        let mut current: Vec<usize> = (1..=n).collect();
        let mut out = vec![Permutation { map: current.clone() }];
        while next_lexicographic(&mut current) {
            out.push(Permutation { map: current.clone() });
        }
        Ok(out)
    }
}

fn next_lexicographic(xs: &mut [usize]) -> bool {
    let Some(pivot) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let successor = xs.iter().rposition(|&x| x > xs[pivot]).expect("pivot has a successor");
    xs.swap(pivot, successor);
    xs[pivot + 1..].reverse();
    true
}

/// `P0` when `π⁻¹(1)` is odd, `P1` when it is even.
pub fn parity_class(p: &Permutation) -> InstanceClass {
    if is_even(p.preimage(1)) {
        InstanceClass::P1
    } else {
        InstanceClass::P0
    }
}

/// An instance of unique search: `f: {1..n} → {0,1}` with at most one
/// marked point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SearchInstance {
    n: usize,
    marked: Option<usize>,
}

impl SearchInstance {
    pub fn new(n: usize, marked: Option<usize>) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroSize);
        }
        if let Some(j) = marked {
            if j == 0 || j > n {
                return Err(OracleError::IndexOutOfRange { index: j, n });
            }
        }
        Ok(Self { n, marked })
    }

    /// The all-zero instance.
    pub fn unmarked(n: usize) -> Result<Self, OracleError> {
        Self::new(n, None)
    }

    pub fn marked_at(n: usize, j: usize) -> Result<Self, OracleError> {
        Self::new(n, Some(j))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn marked(&self) -> Option<usize> {
        self.marked
    }

    /// The decision answer: whether a marked element exists.
    pub fn answer(&self) -> bool {
        self.marked.is_some()
    }

    /// `f(i)` as 0 or 1.
    pub fn value(&self, i: usize) -> usize {
        usize::from(self.marked == Some(i))
    }

    /// The unmarked instance followed by the `n` marked ones.
    pub fn all(n: usize) -> Result<Vec<SearchInstance>, OracleError> {
        let mut out = vec![Self::unmarked(n)?];
        out.extend((1..=n).map(|j| SearchInstance { n, marked: Some(j) }));
        Ok(out)
    }
}

/// Any total function `{1..n} → {1..n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneralFunction {
    map: Vec<usize>,
}

impl GeneralFunction {
    pub fn new(map: Vec<usize>) -> Result<Self, OracleError> {
        let n = map.len();
        if n == 0 {
            return Err(OracleError::ZeroSize);
        }
        if let Some((slot, &value)) = map.iter().enumerate().find(|(_, &v)| v == 0 || v > n) {
            return Err(OracleError::ValueOutOfRange { index: slot + 1, value, n });
        }
        Ok(Self { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    /// Points where `self` and `p` disagree.
    pub fn differences(&self, p: &Permutation) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.apply(i) != p.apply(i)).collect()
    }

    pub fn as_permutation(&self) -> Option<Permutation> {
        Permutation::new(self.map.clone()).ok()
    }

    pub fn class(&self) -> InstanceClass {
        if let Some(p) = self.as_permutation() {
            parity_class(&p)
        } else if is_in_q(self) {
            InstanceClass::Q
        } else {
            InstanceClass::NotClassified
        }
    }
}

impl From<&Permutation> for GeneralFunction {
    fn from(p: &Permutation) -> Self {
        GeneralFunction { map: p.map.clone() }
    }
}

/// Membership in `Q`: exactly one colliding pair `{i, j}`, the pair maps to
/// 1, and exactly one of `i, j` is odd.
pub fn is_in_q(h: &GeneralFunction) -> bool {
    let n = h.n();
    let mut first_seen = vec![0usize; n];
    let mut pair = None;
    for i in 1..=n {
        let v = h.apply(i);
        match first_seen[v - 1] {
            0 => first_seen[v - 1] = i,
            j => {
                if pair.is_some() {
                    return false;
                }
                pair = Some((j, i, v));
            }
        }
    }
    match pair {
        Some((i, j, 1)) => is_even(i) != is_even(j),
        _ => false,
    }
}

/// `h_{π,f}`: agrees with `π` except that the unique marked point of `f`
/// redirects one extra domain point to 1. For `π ∈ P0` the redirected point
/// is the even `2j`; for `π ∈ P1` it is the odd `2j - 1`.
pub fn build_h(p: &Permutation, f: &SearchInstance) -> Result<GeneralFunction, OracleError> {
    let n = p.n();
    if !is_even(n) {
        return Err(OracleError::OddSize { n });
    }
    if f.n() != n / 2 {
        return Err(OracleError::SizeMismatch { expected: n / 2, found: f.n() });
    }
    let mut map = p.images().to_vec();
    if let Some(j) = f.marked() {
        let redirected = match parity_class(p) {
            InstanceClass::P0 => 2 * j,
            _ => 2 * j - 1,
        };
        map[redirected - 1] = 1;
    }
    Ok(GeneralFunction { map })
}

/// `h_{π,f}(i)` evaluated pointwise, reading `f` only where the definition
/// needs it. Returns the value and whether `f` was consulted.
pub fn h_value(p: &Permutation, i: usize, f_at: impl FnOnce(usize) -> usize) -> (usize, bool) {
    let probe = match parity_class(p) {
        InstanceClass::P0 if is_even(i) => Some(i / 2),
        InstanceClass::P1 if !is_even(i) => Some(i.div_ceil(2)),
        _ => None,
    };
    match probe {
        Some(j) if f_at(j) == 1 => (1, true),
        Some(_) => (p.apply(i), true),
        None => (p.apply(i), false),
    }
}

/// `Q_π`: the `n/2` functions `build_h(p, f)` over the marked instances `f`.
pub fn q_pi_neighbors(p: &Permutation) -> Result<Vec<GeneralFunction>, OracleError> {
    let n = p.n();
    if !is_even(n) {
        return Err(OracleError::OddSize { n });
    }
    (1..=n / 2).map(|j| build_h(p, &SearchInstance::marked_at(n / 2, j)?)).collect()
}

/// Every member of `Q` for even `n`, sorted.
pub fn enumerate_q(n: usize) -> Result<Vec<GeneralFunction>, OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroSize);
    }
    if !is_even(n) {
        return Err(OracleError::OddSize { n });
    }
    let mut out = Vec::new();
    for odd in (1..=n).step_by(2) {
        for even in (2..=n).step_by(2) {
            let rest: Vec<usize> = (1..=n).filter(|&i| i != odd && i != even).collect();
            // Injections of the remaining n - 2 points into {2..n}.
            let mut buf = Vec::with_capacity(rest.len());
            let mut used = vec![false; n + 1];
            injections(&rest, n, &mut buf, &mut used, &mut |values| {
                let mut map = vec![0; n];
                map[odd - 1] = 1;
                map[even - 1] = 1;
                for (&i, &v) in rest.iter().zip(values) {
                    map[i - 1] = v;
                }
                out.push(GeneralFunction { map });
            });
        }
    }
    out.sort();
    Ok(out)
}

fn injections(points: &[usize], n: usize, buf: &mut Vec<usize>, used: &mut [bool], emit: &mut impl FnMut(&[usize])) {
    if buf.len() == points.len() {
        emit(buf);
        return;
    }
    for v in 2..=n {
        if !used[v] {
            used[v] = true;
            buf.push(v);
            injections(points, n, buf, used, emit);
            buf.pop();
            used[v] = false;
        }
    }
}

/// `|Q| = (n/2)² (n-1)!` for even `n`.
pub fn q_size(n: usize) -> u128 {
    let half = (n / 2) as u128;
    half * half * (1..n as u128).product::<u128>()
}

/// Which mixture of search instances to draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MuVariant {
    /// Equal mixture of the unmarked instance and the uniform marked ones.
    Mu,
    /// The unmarked instance only.
    Mu0,
    /// Uniform over marked instances.
    Mu1,
}

impl fmt::Display for MuVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MuVariant::Mu => "mu",
            MuVariant::Mu0 => "mu0",
            MuVariant::Mu1 => "mu1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuDistribution {
    pub n: usize,
    pub variant: MuVariant,
}

impl MuDistribution {
    pub fn new(n: usize, variant: MuVariant) -> Result<Self, OracleError> {
        if n == 0 {
            return Err(OracleError::ZeroSize);
        }
        Ok(Self { n, variant })
    }

    /// Exact probability of `f` under this distribution.
    pub fn probability(&self, f: &SearchInstance) -> Prob {
        if f.n() != self.n {
            return Prob::from_integer(0);
        }
        let yes = Prob::new(1, self.n as i128);
        match (self.variant, f.answer()) {
            (MuVariant::Mu0, false) => Prob::from_integer(1),
            (MuVariant::Mu0, true) => Prob::from_integer(0),
            (MuVariant::Mu1, false) => Prob::from_integer(0),
            (MuVariant::Mu1, true) => yes,
            (MuVariant::Mu, false) => Prob::new(1, 2),
            (MuVariant::Mu, true) => yes / 2,
        }
    }

    /// Support with weights, unmarked instance first.
    pub fn support(&self) -> Vec<(SearchInstance, Prob)> {
        SearchInstance::all(self.n)
            .expect("n validated at construction")
            .into_iter()
            .map(|f| (f, self.probability(&f)))
            .filter(|(_, w)| *w != Prob::from_integer(0))
            .collect()
    }
}

/// Codomain of an oracle table, which fixes how values are encoded into an
/// answer register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Codomain {
    /// `{0, 1}`, encoded as the bit itself.
    Bits,
    /// `{1..m}`, encoded as `value - 1` in `⌈log₂ m⌉` bits.
    Range(usize),
}

/// Explicit table of an oracle function, 1-based domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    values: Vec<usize>,
    codomain: Codomain,
}

impl FunctionTable {
    pub fn new(values: Vec<usize>, codomain: Codomain) -> Result<Self, OracleError> {
        if values.is_empty() {
            return Err(OracleError::ZeroSize);
        }
        let n = values.len();
        for (slot, &v) in values.iter().enumerate() {
            let ok = match codomain {
                Codomain::Bits => v <= 1,
                Codomain::Range(m) => (1..=m).contains(&v),
            };
            if !ok {
                return Err(OracleError::ValueOutOfRange { index: slot + 1, value: v, n });
            }
        }
        Ok(Self { values, codomain })
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn codomain(&self) -> Codomain {
        self.codomain
    }

    /// Value at 1-based `i`, `None` outside the domain.
    pub fn eval(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        self.values.get(i - 1).copied()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Bits needed to hold an encoded value.
    pub fn value_bits(&self) -> usize {
        match self.codomain {
            Codomain::Bits => 1,
            Codomain::Range(m) => ceil_log2(m),
        }
    }

    pub fn encode(&self, value: usize) -> usize {
        encode_value(self.codomain, value)
    }
}

pub(crate) fn encode_value(codomain: Codomain, value: usize) -> usize {
    match codomain {
        Codomain::Bits => value,
        Codomain::Range(_) => value - 1,
    }
}

/// `⌈log₂ n⌉`, with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: usize) -> usize {
    assert!(n > 0, "ceil_log2 of zero");
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

impl From<&Permutation> for FunctionTable {
    fn from(p: &Permutation) -> Self {
        FunctionTable { values: p.map.clone(), codomain: Codomain::Range(p.n()) }
    }
}

impl From<&SearchInstance> for FunctionTable {
    fn from(f: &SearchInstance) -> Self {
        FunctionTable { values: (1..=f.n()).map(|i| f.value(i)).collect(), codomain: Codomain::Bits }
    }
}

impl From<&GeneralFunction> for FunctionTable {
    fn from(h: &GeneralFunction) -> Self {
        FunctionTable { values: h.map.clone(), codomain: Codomain::Range(h.n()) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(map: &[usize]) -> Permutation {
        Permutation::new(map.to_vec()).unwrap()
    }

    fn func(map: &[usize]) -> GeneralFunction {
        GeneralFunction::new(map.to_vec()).unwrap()
    }

    #[test]
    fn parity_class_examples() {
        assert_eq!(parity_class(&perm(&[1, 2])), InstanceClass::P0);
        assert_eq!(parity_class(&perm(&[2, 1])), InstanceClass::P1);
        assert_eq!(parity_class(&perm(&[3, 1, 2, 4])), InstanceClass::P1);
    }

    #[test]
    fn permutation_validation() {
        assert_eq!(Permutation::new(vec![]), Err(OracleError::ZeroSize));
        assert!(matches!(Permutation::new(vec![1, 1]), Err(OracleError::NotPermutation { .. })));
        assert!(matches!(Permutation::new(vec![1, 3]), Err(OracleError::ValueOutOfRange { index: 2, value: 3, n: 2 })));
        assert!(perm(&[1, 2]).get(3).is_err());
    }

    #[test]
    fn all_permutations_are_distinct_and_complete() {
        let all = Permutation::all(4).unwrap();
        assert_eq!(all.len(), 24);
        let mut sorted = all.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
        let p0 = all.iter().filter(|p| p.class() == InstanceClass::P0).count();
        assert_eq!(p0, 12);
        // n = 3: |P0| = 4, |P1| = 2
        let all3 = Permutation::all(3).unwrap();
        assert_eq!(all3.iter().filter(|p| p.class() == InstanceClass::P0).count(), 4);
    }

    #[test]
    fn composition_and_inverse() {
        let p = perm(&[2, 3, 1]);
        let id = Permutation::identity(3).unwrap();
        assert_eq!(p.compose(&p.inverse()).unwrap(), id);
        assert_eq!(p.compose(&id).unwrap(), p);
    }

    #[test]
    fn is_in_q_examples() {
        assert!(!is_in_q(&func(&[1, 2, 3, 4])));
        assert!(is_in_q(&func(&[1, 1, 3, 4])));
        assert!(!is_in_q(&func(&[1, 3, 1, 4])));
        // collision not at 1
        assert!(!is_in_q(&func(&[2, 2, 1, 4])));
        // two collisions
        assert!(!is_in_q(&func(&[1, 1, 3, 3])));
        // triple collision
        assert!(!is_in_q(&func(&[1, 1, 1, 4])));
    }

    #[test]
    fn build_h_examples() {
        let p = perm(&[2, 1, 3, 4]);
        let zero = SearchInstance::unmarked(2).unwrap();
        assert_eq!(build_h(&p, &zero).unwrap().images(), p.images());

        let h = build_h(&p, &SearchInstance::marked_at(2, 1).unwrap()).unwrap();
        assert_eq!(h.images(), &[1, 1, 3, 4]);
        assert!(is_in_q(&h));

        let p = perm(&[1, 3, 2, 4]);
        let h = build_h(&p, &SearchInstance::marked_at(2, 2).unwrap()).unwrap();
        assert_eq!(h.images(), &[1, 3, 2, 1]);
        assert!(is_in_q(&h));
        assert_eq!(h.class(), InstanceClass::Q);
    }

    #[test]
    fn build_h_rejects_bad_sizes() {
        let odd = perm(&[1, 2, 3]);
        let f = SearchInstance::unmarked(1).unwrap();
        assert_eq!(build_h(&odd, &f), Err(OracleError::OddSize { n: 3 }));
        let p = perm(&[1, 2, 3, 4]);
        assert_eq!(
            build_h(&p, &SearchInstance::unmarked(3).unwrap()),
            Err(OracleError::SizeMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn h_value_agrees_with_table() {
        for p in Permutation::all(6).unwrap() {
            for f in SearchInstance::all(3).unwrap() {
                let h = build_h(&p, &f).unwrap();
                for i in 1..=6 {
                    let (v, _) = h_value(&p, i, |j| f.value(j));
                    assert_eq!(v, h.apply(i));
                }
            }
        }
    }

    #[test]
    fn build_h_differs_at_one_point_of_the_right_parity() {
        for n in [2, 4, 6, 8] {
            for p in Permutation::all(n).unwrap() {
                for j in 1..=n / 2 {
                    let h = build_h(&p, &SearchInstance::marked_at(n / 2, j).unwrap()).unwrap();
                    let diff = h.differences(&p);
                    assert_eq!(diff.len(), 1);
                    assert_eq!(is_even(diff[0]), p.class() == InstanceClass::P0);
                    assert!(is_in_q(&h));
                }
            }
        }
    }

    #[test]
    fn q_pi_neighbors_examples() {
        let n2 = q_pi_neighbors(&perm(&[1, 2])).unwrap();
        assert_eq!(n2, vec![func(&[1, 1])]);
        for p in Permutation::all(4).unwrap() {
            let nb = q_pi_neighbors(&p).unwrap();
            assert_eq!(nb.len(), 2);
            assert!(nb.iter().all(is_in_q));
        }
        assert!(q_pi_neighbors(&perm(&[1, 2, 3])).is_err());
    }

    #[test]
    fn enumerate_q_matches_predicate_count() {
        for n in [2, 4, 6] {
            let q = enumerate_q(n).unwrap();
            assert_eq!(q.len() as u128, q_size(n));
            assert!(q.iter().all(is_in_q));
        }
        // brute force over all n^n functions at n = 4
        let mut count = 0;
        for code in 0..4usize.pow(4) {
            let map: Vec<usize> = (0..4).map(|k| (code / 4usize.pow(k)) % 4 + 1).collect();
            if is_in_q(&func(&map)) {
                count += 1;
            }
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn mu_probabilities() {
        let mu = MuDistribution::new(4, MuVariant::Mu).unwrap();
        let support = mu.support();
        assert_eq!(support.len(), 5);
        assert_eq!(support[0].1, Prob::new(1, 2));
        assert!(support[1..].iter().all(|(_, w)| *w == Prob::new(1, 8)));
        let total: Prob = support.iter().map(|(_, w)| *w).sum();
        assert_eq!(total, Prob::from_integer(1));
        assert_eq!(MuDistribution::new(4, MuVariant::Mu0).unwrap().support().len(), 1);
    }

    #[test]
    fn function_table_encoding() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        let t = FunctionTable::from(&perm(&[2, 1, 3]));
        assert_eq!(t.value_bits(), 2);
        assert_eq!(t.encode(1), 0);
        assert_eq!(t.eval(4), None);
        assert!(FunctionTable::new(vec![0, 2], Codomain::Bits).is_err());
    }
}
