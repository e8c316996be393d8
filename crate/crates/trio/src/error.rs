//! Error types shared across the crate.

use thiserror::Error;

use crate::transport::PartyId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("invalid bit character {ch:?} at index {index}")]
    BadCharacter { index: usize, ch: char },
    #[error("byte buffer of length {bytes} does not hold exactly {bits} bits")]
    BadByteLength { bits: usize, bytes: usize },
}

/// Errors raised while parsing or validating a circuit description.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("gate {gate}: wire order violated, need first < second < gate")]
    WireOrder { gate: usize },
    #[error("party input bounds {bounds:?} are not monotone or do not end at n")]
    PartyBounds { bounds: (usize, usize, usize) },
    #[error("output count {outputs} exceeds gate count {gates}")]
    TooManyOutputs { outputs: usize, gates: usize },
    #[error("expected input of length {expected}, got {actual}")]
    InputLength { expected: usize, actual: usize },
}

/// Errors raised by secret-sharing primitives.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SharingError {
    #[error("share lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid parameters: need 0 <= t < parties < p, got t={t}, parties={parties}, p={p}")]
    BadThreshold { t: usize, parties: usize, p: u64 },
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("need at least {needed} shares, got {got}")]
    TooFewShares { needed: usize, got: usize },
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u64),
    #[error("evaluation point must be non-zero")]
    ZeroPoint,
}

/// Errors raised by the commitment scheme.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CommitmentError {
    #[error("block {block}: pairwise reconstructions disagree, opening aborted")]
    Mismatch { block: usize },
    #[error("value of {bits} bits does not fit {blocks} blocks of {block_bits} bits")]
    Shape {
        bits: usize,
        blocks: usize,
        block_bits: usize,
    },
    #[error("commitments have different shapes or committers")]
    Incompatible,
    #[error("malformed share record: {0}")]
    Malformed(String),
}

/// Errors raised by the transport layer while a party is running.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransportError {
    #[error("party {to} expected a message from {from} tagged {phase:?} that was never deposited")]
    Deadlock {
        from: PartyId,
        to: PartyId,
        phase: String,
    },
}
