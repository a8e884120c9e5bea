use crate::Scalar;

/// Accumulating eligibility trace over a flat parameter index space.
///
/// Only entries touched since the last reset are visited by updates and decay;
/// all other entries are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EligibilityTrace<T> {
    values: Vec<T>,
    active: Vec<usize>,
    is_active: Vec<bool>,
}

impl<T: Scalar> EligibilityTrace<T> {
    pub fn new(len: usize) -> Self {
        Self {
            values: vec![T::zero(); len],
            active: Vec::new(),
            is_active: vec![false; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> T {
        self.values[index]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Indices with (possibly) non-zero trace, in no particular order.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn iter_active(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.active.iter().map(|&i| (i, self.values[i]))
    }

    pub fn reset(&mut self) {
        for &i in &self.active {
            self.values[i] = T::zero();
            self.is_active[i] = false;
        }
        self.active.clear();
    }

    pub fn accumulate(&mut self, index: usize, amount: T) {
        if !self.is_active[index] {
            self.is_active[index] = true;
            self.active.push(index);
        }
        self.values[index] = self.values[index] + amount;
    }

    /// Multiplies every entry by `factor`; entries that end up `<= cutoff` are set
    /// to zero and dropped from the active set.
    pub fn decay(&mut self, factor: T, cutoff: T) {
        let values = &mut self.values;
        let is_active = &mut self.is_active;
        self.active.retain(|&i| {
            let v = values[i] * factor;
            if v > cutoff {
                values[i] = v;
                true
            } else {
                values[i] = T::zero();
                is_active[i] = false;
                false
            }
        });
    }
}
