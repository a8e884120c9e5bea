//! Behaviour/target policies over a discrete action set.
//!
//! All experiments are on-policy, so the same distribution is used to pick the
//! next action and to form the expectation term of the TD error.

use rand::Rng;

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyKind<T> {
    EpsilonGreedy(T),
    Equiprobable,
}

impl<T: Scalar> PolicyKind<T> {
    pub fn epsilon_greedy(epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in [0, 1], got {epsilon}"
            )));
        }
        Ok(PolicyKind::EpsilonGreedy(epsilon))
    }
}

/// Action probabilities for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDistribution<T> {
    probs: Vec<T>,
}

impl<T: Scalar> PolicyDistribution<T> {
    /// Validates non-negativity and normalisation (within 1e-6 relative to the scalar width).
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::NoActions);
        }
        if probs.iter().any(|p| !(*p >= T::zero() && *p <= T::one())) {
            return Err(Error::InvalidDistribution(format!(
                "probabilities outside [0, 1]: {probs:?}"
            )));
        }
        let total: T = probs.iter().copied().sum();
        let tol = T::epsilon() * T::of(probs.len() as f64 * 4.0);
        if (total - T::one()).abs() > tol {
            return Err(Error::InvalidDistribution(format!("sums to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoActions);
        }
        let p = T::one() / T::of(n as f64);
        Ok(Self { probs: vec![p; n] })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, action: usize) -> T {
        self.probs[action]
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Indices holding the maximum value, compared with exact equality.
pub fn argmax_set<T: Scalar>(q: &[T]) -> Vec<usize> {
    let mut best = T::neg_infinity();
    let mut set = Vec::new();
    for (i, &v) in q.iter().enumerate() {
        if v > best {
            best = v;
            set.clear();
            set.push(i);
        } else if v == best {
            set.push(i);
        }
    }
    set
}

/// ε-greedy gives every action ε/|A| and splits the remaining 1-ε equally over
/// all maximising actions. Equiprobable is uniform.
pub fn policy_distribution<T: Scalar>(q: &[T], kind: PolicyKind<T>) -> Result<PolicyDistribution<T>> {
    if q.is_empty() {
        return Err(Error::NoActions);
    }
    if q.iter().any(|v| !v.is_finite()) {
        return Err(Error::diverged());
    }
    match kind {
        PolicyKind::Equiprobable => PolicyDistribution::uniform(q.len()),
        PolicyKind::EpsilonGreedy(eps) => {
            let n = T::of(q.len() as f64);
            let greedy = argmax_set(q);
            let explore = eps / n;
            let exploit = (T::one() - eps) / T::of(greedy.len() as f64);
            let mut probs = vec![explore; q.len()];
            for i in greedy {
                probs[i] = explore + exploit;
            }
            Ok(PolicyDistribution { probs })
        }
    }
}

/// Σ_a π(a) Q(a).
pub fn expected_value<T: Scalar>(dist: &PolicyDistribution<T>, q: &[T]) -> Result<T> {
    if dist.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: dist.len(),
            right: q.len(),
        });
    }
    Ok(dist.probs.iter().zip(q).fold(T::zero(), |acc, (&p, &v)| acc + p * v))
}

/// Inverse-CDF sampling with exactly one uniform draw from `rng`.
///
/// Returns the first index whose cumulative probability exceeds the draw. If
/// rounding leaves the draw above the final cumulative sum, the last action with
/// non-zero probability is returned.
pub fn sample_action<T: Scalar, R: Rng + ?Sized>(dist: &PolicyDistribution<T>, rng: &mut R) -> usize {
    let u = T::of(rng.random::<f64>());
    let mut cumulative = T::zero();
    for (i, &p) in dist.probs.iter().enumerate() {
        cumulative = cumulative + p;
        if u < cumulative {
            return i;
        }
    }
    dist.probs
        .iter()
        .rposition(|&p| p > T::zero())
        .unwrap_or(dist.probs.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::agent_rng;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn epsilon_greedy_examples() {
        let d = policy_distribution(&[1.0, 2.0], PolicyKind::EpsilonGreedy(0.1)).unwrap();
        assert_abs_diff_eq!(d.probs()[0], 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(d.probs()[1], 0.95, epsilon = 1e-15);

        let d = policy_distribution(&[2.0, 2.0], PolicyKind::EpsilonGreedy(0.1)).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.5]);

        let d = policy_distribution(&[4.0, 1.0, 1.0], PolicyKind::EpsilonGreedy(1.0)).unwrap();
        assert_eq!(d.probs(), &[1.0 / 3.0; 3]);
    }

    #[test]
    fn epsilon_zero_is_greedy_over_ties() {
        let d = policy_distribution(&[3.0, 1.0, 3.0, -2.0], PolicyKind::EpsilonGreedy(0.0)).unwrap();
        assert_eq!(d.probs(), &[0.5, 0.0, 0.5, 0.0]);
    }

    #[test]
    fn empty_q_is_rejected() {
        let q: [f64; 0] = [];
        assert!(matches!(
            policy_distribution(&q, PolicyKind::Equiprobable),
            Err(Error::NoActions)
        ));
    }

    #[test]
    fn expected_value_examples() {
        let d = PolicyDistribution::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(expected_value(&d, &[-1.0, 1.0]).unwrap(), 0.0);
        let d = PolicyDistribution::new(vec![0.05, 0.95]).unwrap();
        assert_abs_diff_eq!(expected_value(&d, &[1.0, 3.0]).unwrap(), 2.9, epsilon = 1e-12);
        let d = PolicyDistribution::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(expected_value(&d, &[4.0, 7.0]).unwrap(), 4.0);
        assert!(matches!(
            expected_value(&d, &[1.0, 2.0, 3.0]),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn works_in_f32() {
        let d = policy_distribution(&[1.0f32, 2.0], PolicyKind::EpsilonGreedy(0.1)).unwrap();
        assert_abs_diff_eq!(expected_value(&d, &[1.0f32, 3.0]).unwrap(), 2.9, epsilon = 1e-6);
    }

    #[test]
    fn deterministic_distributions_sample_their_atom() {
        let mut rng = agent_rng(11);
        let left = PolicyDistribution::new(vec![1.0, 0.0]).unwrap();
        let right = PolicyDistribution::new(vec![0.0, 1.0]).unwrap();
        for _ in 0..1000 {
            assert_eq!(sample_action(&left, &mut rng), 0);
            assert_eq!(sample_action(&right, &mut rng), 1);
        }
    }

    #[test]
    fn sampling_is_reproducible_under_reseeding() {
        let d = PolicyDistribution::new(vec![0.5, 0.5]).unwrap();
        let first: Vec<usize> = {
            let mut rng = agent_rng(99);
            (0..64).map(|_| sample_action(&d, &mut rng)).collect()
        };
        let second: Vec<usize> = {
            let mut rng = agent_rng(99);
            (0..64).map(|_| sample_action(&d, &mut rng)).collect()
        };
        assert_eq!(first, second);
    }

    #[test]
    fn sampling_consumes_one_draw() {
        use rand::Rng;
        let d = PolicyDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let mut a = agent_rng(5);
        let mut b = agent_rng(5);
        sample_action(&d, &mut a);
        let _: f64 = b.random();
        assert_eq!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn empirical_frequencies_within_three_sigma() {
        let probs = [0.1, 0.25, 0.05, 0.6];
        let d = PolicyDistribution::new(probs.to_vec()).unwrap();
        let n = 100_000;
        let mut counts = [0usize; 4];
        let mut rng = agent_rng(2024);
        for _ in 0..n {
            counts[sample_action(&d, &mut rng)] += 1;
        }
        for (c, p) in counts.iter().zip(probs) {
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - n as f64 * p).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    proptest! {
        #[test]
        fn distribution_is_normalised(
            q in prop::collection::vec(-100.0f64..100.0, 1..12),
            eps in 0.0f64..=1.0,
        ) {
            let d = policy_distribution(&q, PolicyKind::EpsilonGreedy(eps)).unwrap();
            let total: f64 = d.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(d.probs().iter().all(|p| *p >= 0.0));
        }

        #[test]
        fn uniform_expectation_is_mean(q in prop::collection::vec(-100.0f64..100.0, 1..12)) {
            let d = policy_distribution(&q, PolicyKind::Equiprobable).unwrap();
            let mean = q.iter().sum::<f64>() / q.len() as f64;
            prop_assert!((expected_value(&d, &q).unwrap() - mean).abs() < 1e-12);
        }

        #[test]
        fn epsilon_extremes_are_exact(q in prop::collection::vec(-5i32..5, 1..8)) {
            let q: Vec<f64> = q.into_iter().map(f64::from).collect();
            let uniform = policy_distribution(&q, PolicyKind::EpsilonGreedy(1.0)).unwrap();
            prop_assert!(uniform.probs().iter().all(|&p| p == 1.0 / q.len() as f64));
            let greedy = policy_distribution(&q, PolicyKind::EpsilonGreedy(0.0)).unwrap();
            let best = argmax_set(&q);
            for (i, &p) in greedy.probs().iter().enumerate() {
                if best.contains(&i) {
                    prop_assert_eq!(p, 1.0 / best.len() as f64);
                } else {
                    prop_assert_eq!(p, 0.0);
                }
            }
        }
    }
}
