//! σ-selection schemes.
//!
//! A scheme is driven by two events: every TD error observed by the agent, and
//! every episode end. The σ reported by [`SigmaScheme::current`] is the one the
//! agent uses on the next step; a σ computed from a step's TD error only takes
//! effect one step later.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result, Scalar};

/// How the reference TD-error magnitude of an episode is summarised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Max,
    Mean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeKind<T> {
    /// Fixed σ.
    Constant(T),
    /// σ = initial · factorⁿ after n episode ends.
    DynamicDecay { initial: T, factor: T },
    /// σ = clamp(|δ| / reference, 0, 1), reference from the previous episode.
    TdError(Aggregate),
    /// TD-error ratio (max reference) scaled by factor^(episodes completed), then clamped.
    Combined { factor: T },
}

impl<T: Scalar> SchemeKind<T> {
    fn validate(&self) -> Result<()> {
        let unit = |x: T| x >= T::zero() && x <= T::one();
        let factor_ok = |x: T| x > T::zero() && x <= T::one();
        let ok = match *self {
            SchemeKind::Constant(s) => unit(s),
            SchemeKind::DynamicDecay { initial, factor } => unit(initial) && factor_ok(factor),
            SchemeKind::TdError(_) => true,
            SchemeKind::Combined { factor } => factor_ok(factor),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("sigma scheme out of range: {self}")))
        }
    }
}

impl<T: Scalar> fmt::Display for SchemeKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeKind::Constant(s) => write!(f, "constant:{s}"),
            SchemeKind::DynamicDecay { initial, factor } => write!(f, "decay:{initial}:{factor}"),
            SchemeKind::TdError(Aggregate::Max) => write!(f, "tderror:max"),
            SchemeKind::TdError(Aggregate::Mean) => write!(f, "tderror:mean"),
            SchemeKind::Combined { factor } => write!(f, "combined:{factor}"),
        }
    }
}

impl<T: Scalar> FromStr for SchemeKind<T> {
    type Err = Error;

    /// Accepts `constant:0.5`, `decay:1.0:0.95`, `tderror:max`, `tderror:mean`, `combined:0.95`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unrecognised sigma scheme `{s}`"));
        let num = |x: &str| -> Result<T> {
            x.trim()
                .parse::<f64>()
                .map(T::of)
                .map_err(|_| Error::Parse(format!("bad number `{x}` in sigma scheme `{s}`")))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let kind = match parts.as_slice() {
            ["constant", v] => SchemeKind::Constant(num(v)?),
            ["decay", init, factor] => SchemeKind::DynamicDecay {
                initial: num(init)?,
                factor: num(factor)?,
            },
            ["tderror", "max"] | ["tderror"] => SchemeKind::TdError(Aggregate::Max),
            ["tderror", "mean"] => SchemeKind::TdError(Aggregate::Mean),
            ["combined", factor] => SchemeKind::Combined { factor: num(factor)? },
            _ => return Err(bad()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// A σ-selection scheme together with its running state.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaScheme<T> {
    kind: SchemeKind<T>,
    sigma: T,
    episode_count: usize,
    td_abs: Vec<T>,
    delta_ref_prev: T,
}

impl<T: Scalar> SigmaScheme<T> {
    pub fn new(kind: SchemeKind<T>) -> Result<Self> {
        kind.validate()?;
        let sigma = match kind {
            SchemeKind::Constant(s) => s,
            SchemeKind::DynamicDecay { initial, .. } => initial,
            SchemeKind::TdError(_) | SchemeKind::Combined { .. } => T::one(),
        };
        Ok(Self {
            kind,
            sigma,
            episode_count: 0,
            td_abs: Vec::new(),
            delta_ref_prev: T::zero(),
        })
    }

    pub fn constant(sigma: T) -> Result<Self> {
        Self::new(SchemeKind::Constant(sigma))
    }

    pub fn dynamic_decay(initial: T, factor: T) -> Result<Self> {
        Self::new(SchemeKind::DynamicDecay { initial, factor })
    }

    pub fn td_error(aggregate: Aggregate) -> Result<Self> {
        Self::new(SchemeKind::TdError(aggregate))
    }

    pub fn combined(factor: T) -> Result<Self> {
        Self::new(SchemeKind::Combined { factor })
    }

    pub fn kind(&self) -> SchemeKind<T> {
        self.kind
    }

    /// σ to use on the next step.
    pub fn current(&self) -> T {
        self.sigma
    }

    pub fn episode_count(&self) -> usize {
        self.episode_count
    }

    /// Reference |δ| (max or mean) of the most recently completed episode.
    pub fn delta_ref_prev(&self) -> T {
        self.delta_ref_prev
    }

    /// |δ| values recorded so far in the current episode.
    pub fn episode_td_abs(&self) -> &[T] {
        &self.td_abs
    }

    /// Records a TD error and returns the σ for the following step.
    pub fn observe_td_error(&mut self, delta: T) -> Result<T> {
        if !delta.is_finite() {
            return Err(Error::diverged());
        }
        let magnitude = delta.abs();
        self.td_abs.push(magnitude);
        if self.episode_count > 0 {
            match self.kind {
                SchemeKind::TdError(_) => {
                    self.sigma = self.ratio(magnitude);
                }
                SchemeKind::Combined { factor } => {
                    let decay = factor.powi(self.episode_count as i32);
                    self.sigma = self.ratio_scaled(magnitude, decay);
                }
                SchemeKind::Constant(_) | SchemeKind::DynamicDecay { .. } => {}
            }
        }
        Ok(self.sigma)
    }

    fn ratio(&self, magnitude: T) -> T {
        self.ratio_scaled(magnitude, T::one())
    }

    // A zero reference means the previous episode had no error at all; use full expectation.
    fn ratio_scaled(&self, magnitude: T, scale: T) -> T {
        if self.delta_ref_prev == T::zero() {
            return T::zero();
        }
        let raw = magnitude / self.delta_ref_prev * scale;
        raw.max(T::zero()).min(T::one())
    }

    /// Closes the current episode.
    pub fn end_episode(&mut self) -> Result<()> {
        match self.kind {
            SchemeKind::TdError(aggregate) => {
                self.delta_ref_prev = self.summarise(aggregate)?;
            }
            SchemeKind::Combined { .. } => {
                self.delta_ref_prev = self.summarise(Aggregate::Max)?;
            }
            SchemeKind::DynamicDecay { initial, factor } => {
                self.sigma = initial * factor.powi(self.episode_count as i32 + 1);
            }
            SchemeKind::Constant(_) => {}
        }
        self.episode_count += 1;
        self.td_abs.clear();
        Ok(())
    }

    fn summarise(&self, aggregate: Aggregate) -> Result<T> {
        if self.td_abs.is_empty() {
            return Err(Error::EmptyEpisode);
        }
        Ok(match aggregate {
            Aggregate::Max => self.td_abs.iter().copied().fold(T::zero(), T::max),
            Aggregate::Mean => {
                let total: T = self.td_abs.iter().copied().sum();
                total / T::of(self.td_abs.len() as f64)
            }
        })
    }
}
