//! Secret-sharing substrate: 3-of-3 XOR sharing over bit strings and
//! Shamir's (t, n)-threshold sharing over a prime field.
//!
//! XOR sharing carries every protocol value; Shamir sharing backs the
//! three-party commitment scheme. Both are pure value-level primitives with
//! no I/O, safe to call concurrently.

mod field;
mod shamir;
mod xor;

pub use field::{FieldElement, PRODUCTION_BLOCK_BITS, PRODUCTION_PRIME, TEST_PRIME};
pub use shamir::{lagrange_reconstruct, shamir_share, ShamirShare};
pub use xor::{xor_add_local, xor_reconstruct, xor_share, xor_share_from, XorSharing};
