//! Prime-field arithmetic with a runtime modulus.
//!
//! The protocol instantiates the field twice: the production modulus is the
//! Mersenne prime 2^61 - 1 paired with 59-bit value blocks (so that
//! p > 2^(k+1) holds), and the tiny test modulus 11 keeps exhaustive
//! enumeration affordable.

use rand::Rng;

/// Production modulus, the Mersenne prime 2^61 - 1.
pub const PRODUCTION_PRIME: u64 = (1 << 61) - 1;

/// Bits per value block committed under [`PRODUCTION_PRIME`]; satisfies
/// p > 2^(k+1).
pub const PRODUCTION_BLOCK_BITS: usize = 59;

/// Small prime for exhaustive test suites.
pub const TEST_PRIME: u64 = 11;

/// An element of the prime field F_p for a runtime modulus p.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    modulus: u64,
}

impl FieldElement {
    /// Reduces `value` into F_p.
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus > 1);
        Self {
            value: value % modulus,
            modulus,
        }
    }

    /// The additive identity.
    pub fn zero(modulus: u64) -> Self {
        Self::new(0, modulus)
    }

    /// Uniformly random element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, modulus: u64) -> Self {
        Self {
            value: rng.gen_range(0..modulus),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "mixed field moduli");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let sum = (self.value as u128 + other.value as u128) % self.modulus as u128;
        Self {
            value: sum as u64,
            modulus: self.modulus,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check(other);
        let diff =
            (self.value as u128 + self.modulus as u128 - other.value as u128) % self.modulus as u128;
        Self {
            value: diff as u64,
            modulus: self.modulus,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let prod = (self.value as u128 * other.value as u128) % self.modulus as u128;
        Self {
            value: prod as u64,
            modulus: self.modulus,
        }
    }

    pub fn neg(&self) -> Self {
        Self::zero(self.modulus).sub(self)
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::new(1, self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat's little theorem; panics on zero.
    pub fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero");
        self.pow(self.modulus - 2)
    }
}

impl std::fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}
