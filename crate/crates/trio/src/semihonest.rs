//! The semi-honest three-party protocol.
//!
//! Each party XOR-shares its input and distributes two of the shares around
//! the ring. Gates are then computed on shares: XOR gates locally, AND gates
//! with one ring round in which every party sends its two operand shares and
//! a fresh randomizer to its successor and combines what it received from
//! its predecessor into its product share. All AND gates at the same depth
//! are batched into a single round, so a run costs exactly the circuit's AND
//! depth plus one input and one output round. Finally the parties exchange
//! their output-wire shares pairwise and everyone reconstructs the output.
//!
//! Wire shares are bit strings of a caller-chosen width: the semi-honest
//! protocol runs at width 1, and the malicious compiler reuses the same
//! circuit-computation code at width `s` to evaluate its batched lanes.

use rand_chacha::ChaCha12Rng;

use crate::bits::BitString;
use crate::circuit::{Circuit, GateOp};
use crate::outcome::{Abort, AbortCode};
use crate::rng::Seed;
use crate::transport::{run_parties, Endpoint, PartyId, RunOutput};

/// Phase tag of the input-sharing round.
pub const PHASE_INPUT: &str = "input-share";
/// Phase tag of the output-reconstruction round.
pub const PHASE_OUTPUT: &str = "output";

/// The per-party product-share formula of the one-round AND pattern: from
/// own operand shares, the predecessor's operand shares and the two
/// randomizers,
/// `[ab]_i = [a]_i[b]_i ^ [a]_i[b]_pred ^ [a]_pred[b]_i ^ r_i ^ r_pred`.
pub fn and_share(a_i: bool, b_i: bool, a_pred: bool, b_pred: bool, r_i: bool, r_pred: bool) -> bool {
    (a_i & b_i) ^ (a_i & b_pred) ^ (a_pred & b_i) ^ r_i ^ r_pred
}

/// An AND ring round in flight: operands and randomizers staged, waiting for
/// the predecessor's message.
pub(crate) struct AndBatch {
    items: Vec<(BitString, BitString)>,
    randomizers: Vec<BitString>,
}

/// Stages one batched AND round under `phase`: draws a fresh randomizer per
/// item and sends `(a, b, r)` for every item to the successor in a single
/// envelope.
pub(crate) fn stage_and(
    net: &mut Endpoint<'_, '_>,
    phase: &str,
    rng: &mut ChaCha12Rng,
    items: Vec<(BitString, BitString)>,
) -> AndBatch {
    let randomizers: Vec<BitString> = items
        .iter()
        .map(|(a, _)| BitString::random(rng, a.len()))
        .collect();
    let mut payload = BitString::empty();
    for ((a, b), r) in items.iter().zip(&randomizers) {
        payload = payload.concat(a).concat(b).concat(r);
    }
    net.send(net.id().succ(), phase, payload.to_bytes());
    AndBatch { items, randomizers }
}

/// Completes a staged AND round after the exchange: receives the
/// predecessor's operands and randomizers and combines them into product
/// shares, item by item.
pub(crate) fn finish_and(
    net: &mut Endpoint<'_, '_>,
    phase: &str,
    batch: AndBatch,
) -> Result<Vec<BitString>, Abort> {
    let total: usize = batch.items.iter().map(|(a, _)| 3 * a.len()).sum();
    let bytes = net.recv(net.id().pred(), phase)?;
    let received = BitString::from_bytes(total, &bytes).map_err(|e| {
        Abort::new(
            AbortCode::Malformed {
                from: net.id().pred(),
                detail: e.to_string(),
            },
            phase,
        )
    })?;
    let mut offset = 0;
    let mut products = Vec::with_capacity(batch.items.len());
    for ((a, b), r) in batch.items.iter().zip(&batch.randomizers) {
        let len = a.len();
        let a_pred = received.slice(offset, offset + len);
        let b_pred = received.slice(offset + len, offset + 2 * len);
        let r_pred = received.slice(offset + 2 * len, offset + 3 * len);
        offset += 3 * len;
        let product = &(&(&(&(a & b) ^ &(a & &b_pred)) ^ &(&a_pred & b)) ^ r) ^ &r_pred;
        products.push(product);
    }
    Ok(products)
}

/// Computes all wire shares of `circuit` from the input-wire shares, at the
/// given share width. XOR gates are local; AND gates are grouped by AND
/// depth, one ring round per level. Returns one share per wire.
pub(crate) fn compute_wire_shares(
    net: &mut Endpoint<'_, '_>,
    circuit: &Circuit,
    input_shares: Vec<BitString>,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<BitString>, Abort> {
    debug_assert_eq!(input_shares.len(), circuit.inputs());
    let levels = circuit.and_levels();
    let mut wires: Vec<Option<BitString>> = input_shares.into_iter().map(Some).collect();
    wires.resize(circuit.wires(), None);

    let mut level = 0;
    loop {
        level += 1;
        let mut batch_outs = Vec::new();
        let mut batch_items = Vec::new();
        for gate in circuit.gates() {
            if wires[gate.out - 1].is_some() {
                continue;
            }
            let (Some(a), Some(b)) = (&wires[gate.a - 1], &wires[gate.b - 1]) else {
                continue;
            };
            match gate.op {
                GateOp::Xor => wires[gate.out - 1] = Some(a ^ b),
                GateOp::And if levels[gate.out - 1] == level => {
                    batch_outs.push(gate.out);
                    batch_items.push((a.clone(), b.clone()));
                }
                GateOp::And => {}
            }
        }
        if batch_items.is_empty() {
            break;
        }
        let phase = format!("and:{level}");
        let batch = stage_and(net, &phase, rng, batch_items);
        net.exchange();
        let products = finish_and(net, &phase, batch)?;
        for (out, product) in batch_outs.into_iter().zip(products) {
            wires[out - 1] = Some(product);
        }
    }
    Ok(wires
        .into_iter()
        .map(|w| w.expect("index order is topological, every wire was computed"))
        .collect())
}

/// What one party ends a semi-honest run with: the reconstructed output and,
/// for white-box harness checks, its full wire-share vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiHonestParty {
    pub output: BitString,
    pub wire_shares: Vec<BitString>,
}

fn party_program(
    circuit: &Circuit,
    me: PartyId,
    input: BitString,
    mut rng: ChaCha12Rng,
    net: &mut Endpoint<'_, '_>,
) -> Result<SemiHonestParty, Abort> {
    if input.len() != circuit.party_input_len(me) {
        return Err(Abort::new(AbortCode::InputLength { party: me }, PHASE_INPUT));
    }

    // Input sharing: split own input, pass one share to each neighbor.
    let sharing = crate::sharing::xor_share(&input, &mut rng);
    for other in me.others() {
        net.send(other, PHASE_INPUT, sharing.shares[other.index0()].to_bytes());
    }
    net.exchange();

    let mut input_share_of = [BitString::empty(), BitString::empty(), BitString::empty()];
    input_share_of[me.index0()] = sharing.shares[me.index0()].clone();
    for other in me.others() {
        let bytes = net.recv(other, PHASE_INPUT)?;
        input_share_of[other.index0()] =
            BitString::from_bytes(circuit.party_input_len(other), &bytes).map_err(|e| {
                Abort::new(
                    AbortCode::Malformed {
                        from: other,
                        detail: e.to_string(),
                    },
                    PHASE_INPUT,
                )
            })?;
    }

    // Wire shares for input wires, width 1.
    let mut input_shares = Vec::with_capacity(circuit.inputs());
    for owner in PartyId::ALL {
        let share = &input_share_of[owner.index0()];
        for pos in 0..circuit.party_input_len(owner) {
            input_shares.push(BitString::from_bits(vec![share.bit(pos)]));
        }
    }

    let wires = compute_wire_shares(net, circuit, input_shares, &mut rng)?;

    // Output construction: pairwise-send output-wire shares, reconstruct.
    let my_output = BitString::from_bits(
        circuit
            .output_wires()
            .map(|w| wires[w - 1].bit(0))
            .collect::<Vec<_>>(),
    );
    net.send_both(PHASE_OUTPUT, my_output.to_bytes());
    net.exchange();
    let mut output = my_output;
    for other in me.others() {
        let bytes = net.recv(other, PHASE_OUTPUT)?;
        let theirs = BitString::from_bytes(circuit.outputs(), &bytes).map_err(|e| {
            Abort::new(
                AbortCode::Malformed {
                    from: other,
                    detail: e.to_string(),
                },
                PHASE_OUTPUT,
            )
        })?;
        output = &output ^ &theirs;
    }

    Ok(SemiHonestParty {
        output,
        wire_shares: wires,
    })
}

/// Runs the semi-honest protocol on a circuit with the given per-party
/// inputs. Party randomness derives from `seed`; identical seeds give
/// byte-identical traces.
pub fn run_semi_honest(
    circuit: &Circuit,
    inputs: &[BitString; 3],
    seed: Seed,
    trace: bool,
) -> RunOutput<SemiHonestParty, Abort> {
    let programs = PartyId::ALL.map(|id| {
        let input = inputs[id.index0()].clone();
        let rng = seed.party(id.index() as u8).rng();
        let program: crate::transport::PartyProgram<'_, SemiHonestParty, Abort> =
            Box::new(move |net| party_program(circuit, id, input, rng, net));
        program
    });
    run_parties(programs, None, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::samples;

    fn bits(s: &str) -> BitString {
        BitString::parse(s).unwrap()
    }

    fn outputs(run: &RunOutput<SemiHonestParty, Abort>) -> Vec<BitString> {
        run.outcomes
            .iter()
            .map(|o| o.as_ref().unwrap().output.clone())
            .collect()
    }

    // Spec example of the AND pattern: a-shares (1,0,0), b-shares (1,1,1),
    // all randomizers zero give product shares (0,1,0), which reconstruct
    // to 1 = 1*1.
    #[test]
    fn and_share_hand_example() {
        let a = [true, false, false];
        let b = [true, true, true];
        let shares: Vec<bool> = (0..3)
            .map(|i| {
                let pred = (i + 2) % 3;
                and_share(a[i], b[i], a[pred], b[pred], false, false)
            })
            .collect();
        assert_eq!(shares, vec![false, true, false]);
        assert!(shares.iter().fold(false, |acc, s| acc ^ s));
    }

    /// 512-case exhaustive oracle: over all share assignments of a and b and
    /// all randomizers, the three product shares reconstruct a * b.
    #[test]
    fn and_share_exhaustive() {
        for assignment in 0..512u32 {
            let bit = |k: u32| assignment >> k & 1 == 1;
            let a = [bit(0), bit(1), bit(2)];
            let b = [bit(3), bit(4), bit(5)];
            let r = [bit(6), bit(7), bit(8)];
            let mut product = false;
            for i in 0..3 {
                let pred = (i + 2) % 3;
                product ^= and_share(a[i], b[i], a[pred], b[pred], r[i], r[pred]);
            }
            let expect = (a[0] ^ a[1] ^ a[2]) & (b[0] ^ b[1] ^ b[2]);
            assert_eq!(product, expect, "assignment {assignment:#011b}");
        }
    }

    /// The pairwise randomizer pattern cancels identically.
    #[test]
    fn randomizers_cancel() {
        for assignment in 0..8u32 {
            let r = [assignment & 1 == 1, assignment & 2 == 2, assignment & 4 == 4];
            let mut sum = false;
            for i in 0..3 {
                sum ^= r[i] ^ r[(i + 2) % 3];
            }
            assert!(!sum);
        }
    }

    #[test]
    fn and_circuit_matches_truth_table() {
        let circuit = samples::and2();
        for (a, b) in [(0u8, 0u8), (0, 1), (1, 0), (1, 1)] {
            let inputs = [
                bits(if a == 1 { "1" } else { "0" }),
                bits(if b == 1 { "1" } else { "0" }),
                BitString::empty(),
            ];
            let run = run_semi_honest(&circuit, &inputs, Seed(100 + u64::from(a * 2 + b)), false);
            let expect = bits(if a & b == 1 { "1" } else { "0" });
            assert_eq!(outputs(&run), vec![expect.clone(), expect.clone(), expect]);
        }
    }

    #[test]
    fn agrees_with_plaintext_oracle_on_random_circuits() {
        let mut rng = Seed(31).rng();
        for trial in 0..100 {
            let circuit = samples::random(
                samples::RandomSpec {
                    inputs: 6,
                    gates: 40,
                    outputs: 3,
                    and_fraction: 0.5,
                },
                &mut rng,
            );
            let x = BitString::random(&mut rng, 6);
            let inputs = split_input(&circuit, &x);
            let run = run_semi_honest(&circuit, &inputs, Seed(1000 + trial), false);
            let expect = circuit.eval_plaintext(&x).unwrap();
            for output in outputs(&run) {
                assert_eq!(output, expect);
            }
        }
    }

    /// White-box share-sum invariant: after the run, the XOR of the three
    /// parties' shares of every wire equals the plaintext wire value.
    #[test]
    fn share_sum_matches_plaintext_wires() {
        let mut rng = Seed(32).rng();
        let circuit = samples::random(
            samples::RandomSpec {
                inputs: 5,
                gates: 20,
                outputs: 2,
                and_fraction: 0.6,
            },
            &mut rng,
        );
        let x = BitString::random(&mut rng, 5);
        let run = run_semi_honest(&circuit, &split_input(&circuit, &x), Seed(33), false);
        let parties: Vec<&SemiHonestParty> =
            run.outcomes.iter().map(|o| o.as_ref().unwrap()).collect();

        // Recompute every plaintext wire value.
        let mut values: Vec<bool> = x.iter().collect();
        for gate in circuit.gates() {
            let (a, b) = (values[gate.a - 1], values[gate.b - 1]);
            values.push(match gate.op {
                GateOp::Xor => a ^ b,
                GateOp::And => a & b,
            });
        }
        for wire in 0..circuit.wires() {
            let sum = parties
                .iter()
                .fold(false, |acc, p| acc ^ p.wire_shares[wire].bit(0));
            assert_eq!(sum, values[wire], "wire {}", wire + 1);
        }
    }

    #[test]
    fn xor_only_circuit_takes_two_rounds() {
        let circuit = samples::xor_chain(6);
        let inputs = split_input(&circuit, &BitString::random(&mut Seed(34).rng(), 7));
        let run = run_semi_honest(&circuit, &inputs, Seed(35), false);
        assert!(run.outcomes.iter().all(|o| o.is_ok()));
        assert_eq!(run.metrics.rounds, 2);
    }

    #[test]
    fn rounds_track_and_depth() {
        for depth in [1usize, 3, 5] {
            let circuit = samples::and_chain(depth);
            let x = BitString::random(&mut Seed(36).rng(), circuit.inputs());
            let run = run_semi_honest(&circuit, &split_input(&circuit, &x), Seed(37), false);
            assert_eq!(run.metrics.rounds as usize, depth + 2);
        }
    }

    #[test]
    fn empty_input_party_participates() {
        // Party 3 owns no wires in the two-input circuit.
        let circuit = samples::and2();
        let run = run_semi_honest(
            &circuit,
            &[bits("1"), bits("1"), BitString::empty()],
            Seed(38),
            false,
        );
        assert_eq!(outputs(&run), vec![bits("1"), bits("1"), bits("1")]);
    }

    #[test]
    fn wrong_input_length_aborts() {
        let circuit = samples::and2();
        let run = run_semi_honest(
            &circuit,
            &[bits("11"), bits("1"), BitString::empty()],
            Seed(39),
            false,
        );
        assert!(matches!(
            run.outcomes[0].as_ref().unwrap_err().code,
            AbortCode::InputLength { party: PartyId::P1 }
        ));
    }

    #[test]
    fn identical_seeds_give_identical_traces() {
        let circuit = samples::and_chain(3);
        let x = BitString::parse("1011").unwrap();
        let inputs = split_input(&circuit, &x);
        let a = run_semi_honest(&circuit, &inputs, Seed(40), true);
        let b = run_semi_honest(&circuit, &inputs, Seed(40), true);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.metrics, b.metrics);
        let c = run_semi_honest(&circuit, &inputs, Seed(41), true);
        assert_ne!(a.trace, c.trace);
    }

    fn split_input(circuit: &Circuit, x: &BitString) -> [BitString; 3] {
        circuit.split_input(x).unwrap()
    }
}
