//! Protocol outcomes: either an output value or an abort with a reason code
//! attributing the failed check and, where applicable, the run index.

use std::fmt;

use crate::error::TransportError;
use crate::transport::PartyId;

/// Why a party aborted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbortCode {
    /// A peer never deposited an owed message: it stopped (usually because
    /// it aborted first) or desynchronized.
    PeerSilent { from: PartyId, phase: String },
    /// A party's input does not match its circuit input range.
    InputLength { party: PartyId },
    /// A received payload failed structural validation.
    Malformed { from: PartyId, detail: String },
    /// A commitment opening failed its pairwise agreement check.
    CommitMismatch { committer: PartyId },
    /// A verification run's reconstructed input differs from the owner's
    /// random input.
    RandomInputCheck { run: usize },
    /// Re-executing a verification run found an inconsistent gate.
    CircuitCheck { run: usize, wire: usize },
    /// Output-computation runs disagree on the output value.
    OutputMismatch { run: usize },
    /// The cut-and-choose indicator came out all ones, leaving no run to
    /// compute the output from.
    NoOutputRuns,
}

impl AbortCode {
    /// Stable short code used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            AbortCode::PeerSilent { .. } => "peer-silent",
            AbortCode::InputLength { .. } => "input-length",
            AbortCode::Malformed { .. } => "malformed",
            AbortCode::CommitMismatch { .. } => "commit-mismatch",
            AbortCode::RandomInputCheck { .. } => "random-input-check",
            AbortCode::CircuitCheck { .. } => "circuit-check",
            AbortCode::OutputMismatch { .. } => "output-mismatch",
            AbortCode::NoOutputRuns => "no-output-runs",
        }
    }

    /// The run index a check failed in, if the code names one (1-based).
    pub fn run_index(&self) -> Option<usize> {
        match self {
            AbortCode::RandomInputCheck { run }
            | AbortCode::CircuitCheck { run, .. }
            | AbortCode::OutputMismatch { run } => Some(*run),
            _ => None,
        }
    }
}

/// A protocol abort, attributed to the phase where it was detected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abort {
    pub code: AbortCode,
    /// Phase tag active when the abort was raised.
    pub phase: String,
}

impl Abort {
    pub fn new(code: AbortCode, phase: impl Into<String>) -> Self {
        Abort {
            code,
            phase: phase.into(),
        }
    }
}

impl fmt::Display for Abort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "abort {} at {}", self.code.label(), self.phase)?;
        if let Some(run) = self.code.run_index() {
            write!(f, " run {run}")?;
        }
        Ok(())
    }
}

impl From<TransportError> for Abort {
    fn from(err: TransportError) -> Self {
        match err {
            TransportError::Deadlock { from, phase, .. } => Abort {
                code: AbortCode::PeerSilent {
                    from,
                    phase: phase.clone(),
                },
                phase,
            },
        }
    }
}
