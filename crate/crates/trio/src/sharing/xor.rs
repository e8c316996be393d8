//! Three-out-of-three XOR secret sharing.

use rand::Rng;

use crate::bits::BitString;
use crate::error::SharingError;

/// A 3-of-3 XOR sharing: the three shares XOR to the secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XorSharing {
    pub shares: [BitString; 3],
}

/// Splits `secret` into three shares, uniform subject to their XOR being the
/// secret: the first two are drawn from `rng`, the third is forced.
pub fn xor_share<R: Rng + ?Sized>(secret: &BitString, rng: &mut R) -> XorSharing {
    let first = BitString::random(rng, secret.len());
    let second = BitString::random(rng, secret.len());
    xor_share_from(first, second, secret)
}

/// Deterministic core of [`xor_share`]: completes two given shares with the
/// forced third one.
pub fn xor_share_from(first: BitString, second: BitString, secret: &BitString) -> XorSharing {
    let third = &(&first ^ &second) ^ secret;
    XorSharing {
        shares: [first, second, third],
    }
}

/// Recombines a sharing by XOR-ing all three shares.
pub fn xor_reconstruct(sharing: &XorSharing) -> Result<BitString, SharingError> {
    let [a, b, c] = &sharing.shares;
    if a.len() != b.len() || b.len() != c.len() {
        return Err(SharingError::LengthMismatch(a.len(), b.len().max(c.len())));
    }
    Ok(&(a ^ b) ^ c)
}

/// Per-party local share addition: a share of `x ^ y` from shares of `x` and
/// `y`, with no communication.
pub fn xor_add_local(a: &BitString, b: &BitString) -> Result<BitString, SharingError> {
    if a.len() != b.len() {
        return Err(SharingError::LengthMismatch(a.len(), b.len()));
    }
    Ok(a ^ b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Seed;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    // 101 ^ 011 ^ 110 = 000: the forced third share.
    #[test]
    fn third_share_is_forced() {
        let sharing = xor_share_from(bits("011"), bits("110"), &bits("101"));
        assert_eq!(sharing.shares[2], bits("000"));
        assert_eq!(xor_reconstruct(&sharing).unwrap(), bits("101"));
    }

    #[test]
    fn empty_secret_gives_empty_shares() {
        let mut rng = Seed(3).rng();
        let sharing = xor_share(&BitString::empty(), &mut rng);
        assert!(sharing.shares.iter().all(|s| s.is_empty()));
        assert_eq!(xor_reconstruct(&sharing).unwrap(), BitString::empty());
    }

    #[test]
    fn share_then_reconstruct_is_identity() {
        let mut rng = Seed(4).rng();
        for _ in 0..1000 {
            let secret = BitString::random(&mut rng, 17);
            let sharing = xor_share(&secret, &mut rng);
            assert_eq!(xor_reconstruct(&sharing).unwrap(), secret);
        }
    }

    #[test]
    fn local_addition_is_linear() {
        let mut rng = Seed(5).rng();
        for _ in 0..1000 {
            let x = BitString::random(&mut rng, 9);
            let y = BitString::random(&mut rng, 9);
            let sx = xor_share(&x, &mut rng);
            let sy = xor_share(&y, &mut rng);
            let sums = XorSharing {
                shares: [
                    xor_add_local(&sx.shares[0], &sy.shares[0]).unwrap(),
                    xor_add_local(&sx.shares[1], &sy.shares[1]).unwrap(),
                    xor_add_local(&sx.shares[2], &sy.shares[2]).unwrap(),
                ],
            };
            assert_eq!(xor_reconstruct(&sums).unwrap(), &x ^ &y);
        }
    }

    #[test]
    fn share_is_self_inverse() {
        let mut rng = Seed(6).rng();
        let a = BitString::random(&mut rng, 32);
        assert_eq!(xor_add_local(&a, &a).unwrap(), BitString::zeros(32));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(xor_add_local(&bits("10"), &bits("1")).is_err());
    }

    /// Statistical uniformity: over 10^4 sharings of the fixed secret "1",
    /// each share bit is set with frequency 0.5 +- 0.02.
    #[test]
    fn share_marginals_are_uniform() {
        let mut rng = Seed(7).rng();
        let secret = bits("1");
        let mut ones = [0usize; 3];
        let trials = 10_000;
        for _ in 0..trials {
            let sharing = xor_share(&secret, &mut rng);
            for (count, share) in ones.iter_mut().zip(&sharing.shares) {
                *count += usize::from(share.bit(0));
            }
        }
        for count in ones {
            let freq = count as f64 / trials as f64;
            assert!((freq - 0.5).abs() < 0.02, "share bit frequency {freq}");
        }
    }

    /// Exhaustive privacy check for 3-bit secrets: for any fixed secret, any
    /// pair of shares with one share withheld is uniformly distributed over
    /// all randomness choices.
    #[test]
    fn pair_views_are_uniform_exhaustive() {
        for secret_v in 0..8u8 {
            let secret = BitString::from_bits(
                (0..3).map(|i| secret_v >> i & 1 == 1).collect::<Vec<_>>(),
            );
            // Enumerate all randomness: first and second shares free.
            for withheld in 0..3 {
                let mut counts = std::collections::HashMap::new();
                for first_v in 0..8u8 {
                    for second_v in 0..8u8 {
                        let first = BitString::from_bits(
                            (0..3).map(|i| first_v >> i & 1 == 1).collect::<Vec<_>>(),
                        );
                        let second = BitString::from_bits(
                            (0..3).map(|i| second_v >> i & 1 == 1).collect::<Vec<_>>(),
                        );
                        let sharing = xor_share_from(first, second, &secret);
                        let view: Vec<String> = (0..3)
                            .filter(|&k| k != withheld)
                            .map(|k| sharing.shares[k].to_string())
                            .collect();
                        *counts.entry(view.join(",")).or_insert(0usize) += 1;
                    }
                }
                // 64 views over 64 possible pairs: exactly uniform.
                assert_eq!(counts.len(), 64);
                assert!(counts.values().all(|&c| c == 1));
            }
        }
    }
}
