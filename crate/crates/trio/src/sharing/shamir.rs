//! Shamir's (t, n)-threshold secret sharing with Lagrange reconstruction.
//!
//! Shares are evaluations of a uniformly random polynomial of degree at most
//! `t` whose constant term is the secret, at the fixed public points
//! alpha_i = i for i = 1..n.

use rand::Rng;

use crate::error::SharingError;
use crate::sharing::FieldElement;

/// One share: the public evaluation point and the polynomial value there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShamirShare {
    pub point: FieldElement,
    pub value: FieldElement,
}

/// Splits `secret` into `n_parties` shares, any `t + 1` of which reconstruct
/// it while any `t` reveal nothing.
///
/// Coefficients 1..=t of the polynomial are drawn uniformly from the field.
pub fn shamir_share<R: Rng + ?Sized>(
    secret: FieldElement,
    t: usize,
    n_parties: usize,
    rng: &mut R,
) -> Result<Vec<ShamirShare>, SharingError> {
    let p = secret.modulus();
    if t >= n_parties || (n_parties as u64) >= p {
        return Err(SharingError::BadThreshold {
            t,
            parties: n_parties,
            p,
        });
    }
    let coefficients: Vec<FieldElement> = (0..t).map(|_| FieldElement::random(rng, p)).collect();
    let shares = (1..=n_parties as u64)
        .map(|i| {
            let point = FieldElement::new(i, p);
            ShamirShare {
                point,
                value: evaluate(secret, &coefficients, point),
            }
        })
        .collect();
    Ok(shares)
}

/// Evaluates `secret + c_1 x + ... + c_t x^t` at `x` by Horner's rule.
fn evaluate(secret: FieldElement, coefficients: &[FieldElement], x: FieldElement) -> FieldElement {
    let mut acc = FieldElement::zero(x.modulus());
    for c in coefficients.iter().rev() {
        acc = acc.mul(&x).add(c);
    }
    acc.mul(&x).add(&secret)
}

/// Recovers `f(0)` from at least `t + 1` shares of a degree-<=t polynomial.
pub fn lagrange_reconstruct(
    shares: &[ShamirShare],
    t: usize,
) -> Result<FieldElement, SharingError> {
    if shares.len() < t + 1 {
        return Err(SharingError::TooFewShares {
            needed: t + 1,
            got: shares.len(),
        });
    }
    let p = shares[0].point.modulus();
    for share in shares {
        if share.point.modulus() != p || share.value.modulus() != p {
            return Err(SharingError::ModulusMismatch(p, share.point.modulus()));
        }
        if share.point.value() == 0 {
            return Err(SharingError::ZeroPoint);
        }
    }
    for (i, a) in shares.iter().enumerate() {
        for b in &shares[..i] {
            if a.point == b.point {
                return Err(SharingError::DuplicatePoint(a.point.value()));
            }
        }
    }

    // f(0) = sum_i y_i * prod_{j != i} (0 - x_j) / (x_i - x_j)
    let mut secret = FieldElement::zero(p);
    for (i, share) in shares.iter().enumerate() {
        let mut basis = FieldElement::new(1, p);
        for (j, other) in shares.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis
                .mul(&other.point.neg())
                .mul(&share.point.sub(&other.point).inv());
        }
        secret = secret.add(&share.value.mul(&basis));
    }
    Ok(secret)
}
