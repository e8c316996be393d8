//! Information-theoretic secure three-party computation over Boolean
//! circuits.
//!
//! The crate implements two protocols over a deterministic simulated
//! network:
//!
//! * a semi-honest protocol evaluating XOR/AND circuits on 3-of-3 XOR
//!   shares, with local XOR gates and one ring round per AND depth, and
//! * its cut-and-choose compilation to security against one malicious
//!   party: the circuit is run `s` times in parallel on obliviously
//!   selected true or random inputs, transcripts are committed with a
//!   Shamir-based perfectly hiding and binding commitment, and a jointly
//!   determined indicator decides which runs are opened for verification
//!   and which produce the output. A cheater survives only by guessing the
//!   indicator, so the cheating probability is 2^-s.
//!
//! Everything runs in-process: parties are logical processes in lockstep
//! rounds, all randomness flows from one seed, and a pluggable adversary can
//! corrupt one party to tamper with its state and messages. This makes
//! correctness, privacy properties and the 2^-s bound directly measurable;
//! see the `examples/` directory for one runnable walk-through per
//! capability and the `acceptance` test suite for the verification gates.

pub mod adversary;
pub mod bits;
pub mod circuit;
pub mod cli;
pub mod commitment;
pub mod error;
pub mod malicious;
pub mod outcome;
pub mod rng;
pub mod semihonest;
pub mod sharing;
pub mod transport;

pub use bits::BitString;
pub use circuit::{Circuit, Gate, GateOp};
pub use outcome::{Abort, AbortCode};
pub use rng::Seed;
pub use transport::{Metrics, PartyId};
