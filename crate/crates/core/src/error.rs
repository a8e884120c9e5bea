use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where in an experiment a divergence happened. Fields are filled in as the
/// error propagates outward (step by the agent, episode and run by the harness).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DivergenceSite {
    pub run: Option<usize>,
    pub episode: Option<usize>,
    pub step: Option<usize>,
}

impl fmt::Display for DivergenceSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(r) = self.run {
            parts.push(format!("run {r}"));
        }
        if let Some(e) = self.episode {
            parts.push(format!("episode {e}"));
        }
        if let Some(s) = self.step {
            parts.push(format!("step {s}"));
        }
        if parts.is_empty() {
            Ok(())
        } else {
            write!(f, " at {}", parts.join(", "))
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("no actions")]
    NoActions,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("diverged{0}")]
    Diverged(DivergenceSite),
    #[error("empty episode")]
    EmptyEpisode,
    #[error("step called on a terminal state; reset required")]
    TerminalStep,
    #[error("ragged input: series {index} has length {len}, expected {expected}")]
    Ragged { index: usize, len: usize, expected: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn diverged() -> Self {
        Error::Diverged(DivergenceSite::default())
    }

    /// Attaches location information to a divergence; other errors pass through.
    pub fn at(self, f: impl FnOnce(&mut DivergenceSite)) -> Self {
        match self {
            Error::Diverged(mut site) => {
                f(&mut site);
                Error::Diverged(site)
            }
            other => other,
        }
    }
}
