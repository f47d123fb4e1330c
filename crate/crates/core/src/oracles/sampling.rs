//! Samplers for the instance distributions and the permutation
//! self-reduction. All randomness comes from an explicit [`RandomSource`].

use super::{parity_class, InstanceClass, MuVariant, OracleError, Permutation, SearchInstance};
use crate::random::RandomSource;

/// Fisher-Yates shuffle of `values` in place.
fn shuffle<R: RandomSource + ?Sized>(values: &mut [usize], rng: &mut R) -> Result<(), OracleError> {
    for i in (1..values.len()).rev() {
        let j = rng.choose(i + 1)?;
        values.swap(i, j);
    }
    Ok(())
}

/// Uniform over all `n!` permutations.
pub fn sample_uniform_permutation<R: RandomSource + ?Sized>(n: usize, rng: &mut R) -> Result<Permutation, OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroSize);
    }
    let mut map: Vec<usize> = (1..=n).collect();
    shuffle(&mut map, rng)?;
    Ok(Permutation::from_map_unchecked(map))
}

/// Uniform over `P0` or `P1`: picks the preimage of 1 among the slots of
/// the right parity, then shuffles `2..=n` into the remaining slots.
pub fn sample_uniform_in_class<R: RandomSource + ?Sized>(
    n: usize,
    class: InstanceClass,
    rng: &mut R,
) -> Result<Permutation, OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroSize);
    }
    let first_slot = match class {
        InstanceClass::P0 => 1,
        InstanceClass::P1 => 2,
        other => return Err(OracleError::NotPermutationClass(other)),
    };
    let slots: Vec<usize> = (first_slot..=n).step_by(2).collect();
    if slots.is_empty() {
        return Err(OracleError::EmptyClass { class, n });
    }
    let home = slots[rng.choose(slots.len())?];
    let mut rest: Vec<usize> = (2..=n).collect();
    shuffle(&mut rest, rng)?;
    let mut rest = rest.into_iter();
    let map = (1..=n).map(|i| if i == home { 1 } else { rest.next().expect("n - 1 values") }).collect();
    Ok(Permutation::from_map_unchecked(map))
}

/// Draws a search instance from `μ`, `μ⁰` or `μ¹`.
pub fn sample_mu<R: RandomSource + ?Sized>(
    n: usize,
    variant: MuVariant,
    rng: &mut R,
) -> Result<SearchInstance, OracleError> {
    let marked = match variant {
        MuVariant::Mu0 => false,
        MuVariant::Mu1 => true,
        MuVariant::Mu => rng.coin()?,
    };
    if marked {
        SearchInstance::marked_at(n, rng.choose(n)? + 1)
    } else {
        SearchInstance::unmarked(n)
    }
}

/// `ω ∘ π ∘ σ` for `ω` fixing 1 and `σ` preserving parity; the result has
/// the same answer as `π`.
pub fn compose_self_reduction(
    p: &Permutation,
    omega: &Permutation,
    sigma: &Permutation,
) -> Result<Permutation, OracleError> {
    if omega.n() != p.n() {
        return Err(OracleError::SizeMismatch { expected: p.n(), found: omega.n() });
    }
    if sigma.n() != p.n() {
        return Err(OracleError::SizeMismatch { expected: p.n(), found: sigma.n() });
    }
    if omega.apply(1) != 1 {
        return Err(OracleError::Precondition("omega must fix 1".into()));
    }
    if (1..=sigma.n()).any(|i| sigma.apply(i) % 2 != i % 2) {
        return Err(OracleError::Precondition("sigma must preserve parity".into()));
    }
    omega.compose(&p.compose(sigma)?)
}

/// `ω` uniform among permutations fixing 1, `σ` uniform among
/// parity-preserving permutations.
pub fn sample_omega_sigma<R: RandomSource + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<(Permutation, Permutation), OracleError> {
    if n == 0 {
        return Err(OracleError::ZeroSize);
    }
    let mut tail: Vec<usize> = (2..=n).collect();
    shuffle(&mut tail, rng)?;
    let omega = Permutation::from_map_unchecked(std::iter::once(1).chain(tail).collect());

    let mut odds: Vec<usize> = (1..=n).step_by(2).collect();
    let mut evens: Vec<usize> = (2..=n).step_by(2).collect();
    shuffle(&mut odds, rng)?;
    shuffle(&mut evens, rng)?;
    let (mut odds, mut evens) = (odds.into_iter(), evens.into_iter());
    let sigma = (1..=n)
        .map(|i| if i % 2 == 1 { odds.next() } else { evens.next() })
        .collect::<Option<Vec<_>>>()
        .expect("parity blocks cover 1..n");
    Ok((omega, Permutation::from_map_unchecked(sigma)))
}

/// Extends `π` on `{1..n-1}` to `{1..n}` by `π(n) = n`.
pub fn extend_permutation(p: &Permutation) -> Permutation {
    let mut map = p.images().to_vec();
    map.push(p.n() + 1);
    let extended = Permutation::from_map_unchecked(map);
    debug_assert_eq!(parity_class(&extended), parity_class(p));
    extended
}
