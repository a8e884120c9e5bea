use super::EligibilityTrace;
use crate::tilecoding::{TileCoder, TileCoderConfig};
use crate::{Error, Result, Scalar};

/// Action-value store that an eligibility trace can be laid over.
///
/// Parameters and trace entries share one flat index space of length
/// [`trace_len`](Self::trace_len). Queries take `&mut self` because feature
/// construction may assign new indices on first touch.
pub trait ActionValueFunction<T: Scalar, O> {
    fn num_actions(&self) -> usize;

    fn trace_len(&self) -> usize;

    fn action_values_into(&mut self, obs: &O, out: &mut Vec<T>);

    fn value(&mut self, obs: &O, action: usize) -> T;

    /// Adds the feature vector of `(obs, action)` to `trace`.
    fn accumulate_trace(&mut self, trace: &mut EligibilityTrace<T>, obs: &O, action: usize);

    /// `params += step · trace`. Returns `false` if any updated parameter is not finite.
    fn apply_trace(&mut self, trace: &EligibilityTrace<T>, step: T) -> bool;

    fn action_values(&mut self, obs: &O) -> Vec<T> {
        let mut out = Vec::with_capacity(self.num_actions());
        self.action_values_into(obs, &mut out);
        out
    }

    fn new_trace(&self) -> EligibilityTrace<T> {
        EligibilityTrace::new(self.trace_len())
    }
}

fn apply_sparse<T: Scalar>(params: &mut [T], trace: &EligibilityTrace<T>, step: T) -> bool {
    let mut finite = true;
    for (i, e) in trace.iter_active() {
        let p = params[i] + step * e;
        finite &= p.is_finite();
        params[i] = p;
    }
    finite
}

/// Dense `num_states × num_actions` table, zero-initialised.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularQ<T> {
    num_states: usize,
    num_actions: usize,
    table: Vec<T>,
}

impl<T: Scalar> TabularQ<T> {
    pub fn new(num_states: usize, num_actions: usize) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::NoActions);
        }
        Ok(Self {
            num_states,
            num_actions,
            table: vec![T::zero(); num_states * num_actions],
        })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn get(&self, state: usize, action: usize) -> T {
        self.table[state * self.num_actions + action]
    }

    pub fn set(&mut self, state: usize, action: usize, value: T) {
        self.table[state * self.num_actions + action] = value;
    }

    pub fn row(&self, state: usize) -> &[T] {
        &self.table[state * self.num_actions..(state + 1) * self.num_actions]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.table
    }

    pub fn index(&self, state: usize, action: usize) -> usize {
        state * self.num_actions + action
    }
}

impl<T: Scalar> ActionValueFunction<T, usize> for TabularQ<T> {
    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn trace_len(&self) -> usize {
        self.table.len()
    }

    fn action_values_into(&mut self, obs: &usize, out: &mut Vec<T>) {
        out.clear();
        out.extend_from_slice(self.row(*obs));
    }

    fn value(&mut self, obs: &usize, action: usize) -> T {
        self.get(*obs, action)
    }

    fn accumulate_trace(&mut self, trace: &mut EligibilityTrace<T>, obs: &usize, action: usize) {
        trace.accumulate(self.index(*obs, action), T::one());
    }

    fn apply_trace(&mut self, trace: &EligibilityTrace<T>, step: T) -> bool {
        apply_sparse(&mut self.table, trace, step)
    }
}

/// Linear action values over hashed binary tile features, one feature block per
/// action (the action index is passed to the coder as an integer input).
#[derive(Debug, Clone)]
pub struct LinearQ<T> {
    num_actions: usize,
    weights: Vec<T>,
    coder: TileCoder,
    features: Vec<usize>,
}

impl<T: Scalar> LinearQ<T> {
    pub fn new(config: TileCoderConfig, num_actions: usize) -> Result<Self> {
        if num_actions == 0 {
            return Err(Error::NoActions);
        }
        let coder = TileCoder::new(config)?;
        let weights = vec![T::zero(); coder.capacity()];
        Ok(Self {
            num_actions,
            weights,
            coder,
            features: Vec::new(),
        })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn coder(&self) -> &TileCoder {
        &self.coder
    }

    pub fn num_tilings(&self) -> usize {
        self.coder.num_tilings()
    }

    fn load_features(&mut self, raw: &[f64], action: usize) {
        let mut features = std::mem::take(&mut self.features);
        self.coder.features_into(&mut features, raw, action);
        self.features = features;
    }

    fn sum_active(&self) -> T {
        self.features.iter().fold(T::zero(), |acc, &i| acc + self.weights[i])
    }
}

impl<T: Scalar, O: AsRef<[f64]>> ActionValueFunction<T, O> for LinearQ<T> {
    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn trace_len(&self) -> usize {
        self.weights.len()
    }

    fn action_values_into(&mut self, obs: &O, out: &mut Vec<T>) {
        out.clear();
        for a in 0..self.num_actions {
            self.load_features(obs.as_ref(), a);
            out.push(self.sum_active());
        }
    }

    fn value(&mut self, obs: &O, action: usize) -> T {
        self.load_features(obs.as_ref(), action);
        self.sum_active()
    }

    fn accumulate_trace(&mut self, trace: &mut EligibilityTrace<T>, obs: &O, action: usize) {
        self.load_features(obs.as_ref(), action);
        for &i in &self.features {
            trace.accumulate(i, T::one());
        }
    }

    fn apply_trace(&mut self, trace: &EligibilityTrace<T>, step: T) -> bool {
        apply_sparse(&mut self.weights, trace, step)
    }
}
