//! Three-party commitment scheme based on Shamir's secret sharing.
//!
//! A committer encodes its value into field blocks, draws one uniformly
//! random degree-1 polynomial per block with the block as constant term, and
//! hands each party the evaluation at its own point (alpha_i = i). To open,
//! all three parties announce their shares and everyone reconstructs the
//! constant term from each of the three share pairs, accepting only if all
//! three agree. With at most one corrupted party this is perfectly hiding
//! (one share is a uniform field element) and perfectly binding (the two
//! honest shares pin the polynomial).
//!
//! The scheme is uncommitment-symmetric, since any party can trigger an
//! opening by announcing, and blockwise addition homomorphic: parties add
//! their share vectors locally and the result opens to the blockwise sum
//! mod p.
//!
//! Values longer than one block are committed as block sequences under a
//! single commitment id. Share records travel as
//! `(commitment-id: u64, block-index: u32, share: u64)`, all little-endian.

use std::collections::BTreeMap;

use rand::Rng;

use crate::bits::BitString;
use crate::error::CommitmentError;
use crate::sharing::{
    lagrange_reconstruct, shamir_share, FieldElement, ShamirShare, PRODUCTION_BLOCK_BITS,
    PRODUCTION_PRIME, TEST_PRIME,
};
use crate::transport::PartyId;

/// Field modulus and block width for one commitment session. The modulus
/// must exceed `2^(block_bits + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CommitParams {
    pub modulus: u64,
    pub block_bits: usize,
}

impl CommitParams {
    /// Mersenne prime 2^61 - 1 with 59-bit blocks.
    pub fn production() -> Self {
        CommitParams {
            modulus: PRODUCTION_PRIME,
            block_bits: PRODUCTION_BLOCK_BITS,
        }
    }

    /// p = 11 with 2-bit blocks, for exhaustive tests.
    pub fn test() -> Self {
        CommitParams {
            modulus: TEST_PRIME,
            block_bits: 2,
        }
    }

    pub fn blocks_for(&self, bit_len: usize) -> usize {
        bit_len.div_ceil(self.block_bits)
    }
}

/// Splits a bit string into field blocks of at most `block_bits` bits each,
/// big-endian within a block. The empty string encodes to zero blocks.
pub fn encode_value(params: &CommitParams, value: &BitString) -> Vec<FieldElement> {
    let mut blocks = Vec::with_capacity(params.blocks_for(value.len()));
    let mut i = 0;
    while i < value.len() {
        let end = (i + params.block_bits).min(value.len());
        let mut acc: u64 = 0;
        for j in i..end {
            acc = acc << 1 | u64::from(value.bit(j));
        }
        blocks.push(FieldElement::new(acc, params.modulus));
        i = end;
    }
    blocks
}

/// Inverse of [`encode_value`] for a known bit length. Fails when a block
/// does not fit the expected width, which means the committed value was not
/// a valid encoding.
pub fn decode_value(
    params: &CommitParams,
    bit_len: usize,
    blocks: &[FieldElement],
) -> Result<BitString, CommitmentError> {
    if blocks.len() != params.blocks_for(bit_len) {
        return Err(CommitmentError::Shape {
            bits: bit_len,
            blocks: blocks.len(),
            block_bits: params.block_bits,
        });
    }
    let mut bits = Vec::with_capacity(bit_len);
    for (i, block) in blocks.iter().enumerate() {
        let width = (bit_len - i * params.block_bits).min(params.block_bits);
        if block.value() >> width != 0 {
            return Err(CommitmentError::Malformed(format!(
                "block {i} value {} exceeds {width} bits",
                block.value()
            )));
        }
        for bit in (0..width).rev() {
            bits.push(block.value() >> bit & 1 == 1);
        }
    }
    Ok(BitString::from_bits(bits))
}

/// Committer side: one degree-1 sharing per block. Returns the three share
/// vectors indexed by party.
pub fn commit_value<R: Rng + ?Sized>(
    params: &CommitParams,
    value: &BitString,
    rng: &mut R,
) -> [Vec<FieldElement>; 3] {
    share_blocks(&encode_value(params, value), rng)
}

/// One degree-1 Shamir sharing per block at points 1, 2, 3.
pub fn share_blocks<R: Rng + ?Sized>(
    blocks: &[FieldElement],
    rng: &mut R,
) -> [Vec<FieldElement>; 3] {
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for block in blocks {
        let shares = shamir_share(*block, 1, 3, rng).expect("fixed (1, 3) parameters are valid");
        for (vec, share) in out.iter_mut().zip(shares) {
            vec.push(share.value);
        }
    }
    out
}

fn pair(point_a: u64, a: FieldElement, point_b: u64, b: FieldElement) -> FieldElement {
    let p = a.modulus();
    lagrange_reconstruct(
        &[
            ShamirShare {
                point: FieldElement::new(point_a, p),
                value: a,
            },
            ShamirShare {
                point: FieldElement::new(point_b, p),
                value: b,
            },
        ],
        1,
    )
    .expect("two distinct fixed points")
}

/// Verification step of the opening: reconstruct the constant term from the
/// pairs (d1, d2), (d2, d3), (d3, d1) and accept only if all three agree.
pub fn reconstruct_block(
    d1: FieldElement,
    d2: FieldElement,
    d3: FieldElement,
    block: usize,
) -> Result<FieldElement, CommitmentError> {
    let first = pair(1, d1, 2, d2);
    let second = pair(2, d2, 3, d3);
    let third = pair(3, d3, 1, d1);
    if first == second && second == third {
        Ok(first)
    } else {
        Err(CommitmentError::Mismatch { block })
    }
}

/// Opens a block sequence from the three announced share vectors.
pub fn open_blocks(shares: [&[FieldElement]; 3]) -> Result<Vec<FieldElement>, CommitmentError> {
    let blocks = shares[0].len();
    if shares[1].len() != blocks || shares[2].len() != blocks {
        return Err(CommitmentError::Incompatible);
    }
    (0..blocks)
        .map(|b| reconstruct_block(shares[0][b], shares[1][b], shares[2][b], b))
        .collect()
}

/// Opens a committed bit string: block reconstruction plus decoding.
pub fn open_value(
    params: &CommitParams,
    bit_len: usize,
    shares: [&[FieldElement]; 3],
) -> Result<BitString, CommitmentError> {
    decode_value(params, bit_len, &open_blocks(shares)?)
}

/// Local homomorphic addition of two share vectors held by the same party.
pub fn add_shares(
    a: &[FieldElement],
    b: &[FieldElement],
) -> Result<Vec<FieldElement>, CommitmentError> {
    if a.len() != b.len() {
        return Err(CommitmentError::Incompatible);
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
}

/// Local homomorphic subtraction of two share vectors held by the same party.
pub fn sub_shares(
    a: &[FieldElement],
    b: &[FieldElement],
) -> Result<Vec<FieldElement>, CommitmentError> {
    if a.len() != b.len() {
        return Err(CommitmentError::Incompatible);
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.sub(y)).collect())
}

/// One share record on the wire: `(commitment-id, block-index, share)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShareRecord {
    pub id: u64,
    pub block: u32,
    pub share: FieldElement,
}

/// 20 bytes per record, little-endian fields.
pub fn encode_records(records: &[ShareRecord]) -> Vec<u8> {
    let mut out = Vec::with_capacity(records.len() * 20);
    for rec in records {
        out.extend_from_slice(&rec.id.to_le_bytes());
        out.extend_from_slice(&rec.block.to_le_bytes());
        out.extend_from_slice(&rec.share.value().to_le_bytes());
    }
    out
}

pub fn decode_records(
    params: &CommitParams,
    bytes: &[u8],
) -> Result<Vec<ShareRecord>, CommitmentError> {
    if bytes.len() % 20 != 0 {
        return Err(CommitmentError::Malformed(format!(
            "record stream of {} bytes is not a multiple of 20",
            bytes.len()
        )));
    }
    bytes
        .chunks_exact(20)
        .map(|chunk| {
            let id = u64::from_le_bytes(chunk[..8].try_into().unwrap());
            let block = u32::from_le_bytes(chunk[8..12].try_into().unwrap());
            let share = u64::from_le_bytes(chunk[12..].try_into().unwrap());
            if share >= params.modulus {
                return Err(CommitmentError::Malformed(format!(
                    "share {share} outside the field"
                )));
            }
            Ok(ShareRecord {
                id,
                block,
                share: FieldElement::new(share, params.modulus),
            })
        })
        .collect()
}

/// Lifecycle of one commitment at one party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CommitStatus {
    /// Shares registered, not yet opened.
    Committed,
    /// Opened successfully to the recorded value.
    Opened(BitString),
    /// An opening failed its agreement check; the session is poisoned.
    Failed,
}

#[derive(Debug, Clone)]
struct Entry {
    committer: PartyId,
    bit_len: usize,
    my_shares: Vec<Option<FieldElement>>,
    status: CommitStatus,
}

/// Per-party record of every commitment in a session: who committed what
/// shape, this party's share vector, and open/verify state. All cross-party
/// effects flow through explicit message payloads.
#[derive(Debug)]
pub struct CommitmentStore {
    params: CommitParams,
    entries: BTreeMap<u64, Entry>,
}

impl CommitmentStore {
    pub fn new(params: CommitParams) -> Self {
        CommitmentStore {
            params,
            entries: BTreeMap::new(),
        }
    }

    pub fn params(&self) -> &CommitParams {
        &self.params
    }

    /// Declares an expected commitment. Every party registers the same ids in
    /// the same order, derived from public protocol context.
    pub fn register(&mut self, id: u64, committer: PartyId, bit_len: usize) {
        let blocks = self.params.blocks_for(bit_len);
        let prev = self.entries.insert(
            id,
            Entry {
                committer,
                bit_len,
                my_shares: vec![None; blocks],
                status: CommitStatus::Committed,
            },
        );
        debug_assert!(prev.is_none(), "commitment id {id} registered twice");
    }

    pub fn committer(&self, id: u64) -> PartyId {
        self.entries[&id].committer
    }

    pub fn status(&self, id: u64) -> &CommitStatus {
        &self.entries[&id].status
    }

    /// Committer side: draws the sharing, keeps the committer's own share
    /// vector and returns the records to send to each verifier.
    pub fn commit_own<R: Rng + ?Sized>(
        &mut self,
        me: PartyId,
        id: u64,
        value: &BitString,
        rng: &mut R,
    ) -> [(PartyId, Vec<ShareRecord>); 2] {
        let shares = commit_value(&self.params, value, rng);
        let entry = self.entries.get_mut(&id).expect("commitment id registered");
        debug_assert_eq!(entry.committer, me);
        debug_assert_eq!(entry.bit_len, value.len());
        entry.my_shares = shares[me.index0()].iter().copied().map(Some).collect();
        me.others().map(|verifier| {
            let records = shares[verifier.index0()]
                .iter()
                .enumerate()
                .map(|(block, share)| ShareRecord {
                    id,
                    block: block as u32,
                    share: *share,
                })
                .collect();
            (verifier, records)
        })
    }

    /// Verifier side: ingests the commit-phase records received from
    /// `committer`, which must cover exactly the ids in `expected`.
    pub fn receive_commit(
        &mut self,
        committer: PartyId,
        expected: &[u64],
        records: &[ShareRecord],
    ) -> Result<(), CommitmentError> {
        for rec in records {
            let entry = self
                .entries
                .get_mut(&rec.id)
                .ok_or_else(|| CommitmentError::Malformed(format!("unknown id {}", rec.id)))?;
            if entry.committer != committer {
                return Err(CommitmentError::Malformed(format!(
                    "id {} was not committed by party {committer}",
                    rec.id
                )));
            }
            let slot = entry
                .my_shares
                .get_mut(rec.block as usize)
                .ok_or_else(|| {
                    CommitmentError::Malformed(format!("block {} overflow", rec.block))
                })?;
            if slot.replace(rec.share).is_some() {
                return Err(CommitmentError::Malformed(format!(
                    "duplicate share for id {} block {}",
                    rec.id, rec.block
                )));
            }
        }
        for id in expected {
            if self.entries[id].my_shares.iter().any(Option::is_none) {
                return Err(CommitmentError::Malformed(format!(
                    "commitment {id} is missing shares"
                )));
            }
        }
        Ok(())
    }

    /// This party's announcement records for an opening.
    pub fn open_records(&self, ids: &[u64]) -> Vec<ShareRecord> {
        let mut out = Vec::new();
        for id in ids {
            let entry = &self.entries[id];
            for (block, share) in entry.my_shares.iter().enumerate() {
                out.push(ShareRecord {
                    id: *id,
                    block: block as u32,
                    share: share.expect("own shares are complete before opening"),
                });
            }
        }
        out
    }

    /// Completes an opening from the records announced by the other two
    /// parties (this party's own shares come from the store). On any
    /// pairwise disagreement the entry is poisoned and the error propagates
    /// as a protocol abort.
    pub fn open(
        &mut self,
        id: u64,
        announcers: [PartyId; 2],
        announced: [&BTreeMap<(u64, u32), FieldElement>; 2],
    ) -> Result<BitString, CommitmentError> {
        let me_shares: Vec<FieldElement> = {
            let entry = &self.entries[&id];
            entry
                .my_shares
                .iter()
                .map(|s| {
                    s.ok_or_else(|| CommitmentError::Malformed(format!("id {id} incomplete")))
                })
                .collect::<Result<_, _>>()?
        };
        let blocks = me_shares.len();
        let mut by_party: [Vec<FieldElement>; 3] = Default::default();
        for (party, records) in announcers.iter().zip(announced) {
            let mut shares = Vec::with_capacity(blocks);
            for block in 0..blocks {
                shares.push(*records.get(&(id, block as u32)).ok_or_else(|| {
                    CommitmentError::Malformed(format!(
                        "party {party} did not announce id {id} block {block}"
                    ))
                })?);
            }
            by_party[party.index0()] = shares;
        }
        let me = PartyId::ALL
            .into_iter()
            .find(|p| !announcers.contains(p))
            .expect("two distinct announcers");
        by_party[me.index0()] = me_shares;

        let entry = self.entries.get_mut(&id).unwrap();
        let result = open_value(
            &self.params,
            entry.bit_len,
            [&by_party[0], &by_party[1], &by_party[2]],
        );
        match &result {
            Ok(value) => {
                if let CommitStatus::Opened(prev) = &entry.status {
                    debug_assert_eq!(prev, value, "binding violated");
                }
                entry.status = CommitStatus::Opened(value.clone());
            }
            Err(_) => entry.status = CommitStatus::Failed,
        }
        result
    }
}

/// Groups announced records into a lookup keyed by (id, block), rejecting
/// duplicates.
pub fn group_records(
    records: &[ShareRecord],
) -> Result<BTreeMap<(u64, u32), FieldElement>, CommitmentError> {
    let mut map = BTreeMap::new();
    for rec in records {
        if map.insert((rec.id, rec.block), rec.share).is_some() {
            return Err(CommitmentError::Malformed(format!(
                "duplicate record for id {} block {}",
                rec.id, rec.block
            )));
        }
    }
    Ok(map)
}
