//! Chi-square uniformity testing and the distribution of `h_{π,f}` when
//! `π` is uniform in a class and `f` is a uniform marked instance.

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::MeasureError;
use crate::oracles::{
    build_h, enumerate_q, sample_uniform_in_class, GeneralFunction, InstanceClass, Permutation, SearchInstance,
};
use crate::random::{Prob, RandomSource};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformityResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub alpha: f64,
    pub pass: bool,
}

/// Pearson chi-square goodness of fit of `samples` (labels in
/// `0..domain_size`) against the uniform distribution; passes when the
/// p-value is at least `alpha`.
pub fn uniformity_test(samples: &[usize], domain_size: usize, alpha: f64) -> Result<UniformityResult, MeasureError> {
    if samples.is_empty() {
        return Err(MeasureError::EmptySamples);
    }
    let mut counts = vec![0u64; domain_size];
    for &label in samples {
        *counts.get_mut(label).ok_or(MeasureError::LabelOutOfRange { label, domain: domain_size })? += 1;
    }
    let expected = samples.len() as f64 / domain_size as f64;
    let statistic: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = domain_size - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    };
    Ok(UniformityResult { statistic, degrees_of_freedom: dof, p_value, alpha, pass: p_value >= alpha })
}

fn check_class(n: usize, class: InstanceClass) -> Result<(), MeasureError> {
    if !matches!(class, InstanceClass::P0 | InstanceClass::P1) {
        return Err(crate::oracles::OracleError::NotPermutationClass(class).into());
    }
    if n < 2 || !n.is_multiple_of(2) {
        return Err(crate::oracles::OracleError::OddSize { n }.into());
    }
    Ok(())
}

/// Exact distribution of `h_{π,f}` for `π` uniform in `class` and `f`
/// uniform among the `n/2` marked instances, by enumerating every pair.
pub fn induced_h_distribution(n: usize, class: InstanceClass) -> Result<BTreeMap<GeneralFunction, Prob>, MeasureError> {
    check_class(n, class)?;
    let perms: Vec<Permutation> = Permutation::all(n)?.into_iter().filter(|p| p.class() == class).collect();
    let w = Prob::new(1, (perms.len() * (n / 2)) as i128);
    let mut dist = BTreeMap::new();
    for p in &perms {
        for j in 1..=n / 2 {
            let h = build_h(p, &SearchInstance::marked_at(n / 2, j)?)?;
            *dist.entry(h).or_insert_with(|| Prob::from_integer(0)) += w;
        }
    }
    Ok(dist)
}

/// Draws `draws` functions `h_{π,f}` as in [`induced_h_distribution`] and
/// returns each as its index in the sorted enumeration of `Q`.
pub fn sample_induced_h<R: RandomSource + ?Sized>(
    n: usize,
    class: InstanceClass,
    draws: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, usize), MeasureError> {
    check_class(n, class)?;
    let q = enumerate_q(n)?;
    let mut labels = Vec::with_capacity(draws);
    for _ in 0..draws {
        let p = sample_uniform_in_class(n, class, rng)?;
        let j = rng.choose(n / 2).map_err(crate::oracles::OracleError::from)? + 1;
        let h = build_h(&p, &SearchInstance::marked_at(n / 2, j)?)?;
        let label = q.binary_search(&h).expect("h lies in Q");
        labels.push(label);
    }
    Ok((labels, q.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::q_size;
    use crate::random::SeededStream;

    #[test]
    fn chi_square_basics() {
        let flat: Vec<usize> = (0..600).map(|i| i % 6).collect();
        let res = uniformity_test(&flat, 6, 0.01).unwrap();
        assert!(res.pass);
        assert_eq!(res.statistic, 0.0);
        let same = vec![2; 600];
        assert!(!uniformity_test(&same, 6, 0.01).unwrap().pass);
        assert_eq!(uniformity_test(&[], 6, 0.01), Err(MeasureError::EmptySamples));
        assert!(uniformity_test(&[6], 6, 0.01).is_err());
    }

    #[test]
    fn induced_h_is_uniform_on_q() {
        for n in [2, 4] {
            for class in [InstanceClass::P0, InstanceClass::P1] {
                let dist = induced_h_distribution(n, class).unwrap();
                assert_eq!(dist.len() as u128, q_size(n));
                let target = Prob::new(1, q_size(n) as i128);
                assert!(dist.values().all(|&w| w == target));
            }
        }
    }

    #[test]
    fn sampled_h_passes_uniformity() {
        let mut rng = SeededStream::new(11);
        let (labels, size) = sample_induced_h(4, InstanceClass::P1, 2400, &mut rng).unwrap();
        assert_eq!(size, 24);
        assert!(uniformity_test(&labels, size, 0.01).unwrap().pass);
    }
}
