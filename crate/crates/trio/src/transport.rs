//! Deterministic message-passing harness connecting three party processes.
//!
//! Parties run as independent logical processes with no shared protocol
//! state. Communication happens in synchronous lockstep rounds: each party
//! stages the point-to-point messages it owes, then calls
//! [`Endpoint::exchange`], which blocks until every live party has done the
//! same; all deliveries of a round are simultaneous. A message that a party
//! expected but never arrived surfaces as a deadlock error naming the sender
//! and phase tag.
//!
//! An interposition hook ([`MessageTap`]) can be installed on exactly one
//! party: it may rewrite that party's outgoing payloads and observe its
//! incoming ones. Messages between the other two parties never pass through
//! the hook, which is the one-corruption model.
//!
//! Byte and round metering, plus an optional trace (one line per envelope,
//! `round from to phase payload-hex`, `-` for an empty payload), are recorded
//! per session. Given identical programs, seeds and tap, traces are
//! byte-identical across executions regardless of thread scheduling: the only
//! cross-thread interactions are the round barriers, and deliveries are
//! canonically ordered.

use std::collections::BTreeMap;
use std::fmt;
use std::mem::take;
use std::sync::{Condvar, Mutex};
use std::thread;

use crate::error::TransportError;

/// One of the three parties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PartyId {
    P1 = 1,
    P2 = 2,
    P3 = 3,
}

/// Wraps an index onto the party ring: `h(i) = (i - 1) % 3 + 1`, so
/// `h(i) = i` for `i` in 1..=3 and `h(i + 3) = h(i)`.
pub fn h(i: u64) -> PartyId {
    debug_assert!(i >= 1);
    match (i - 1) % 3 + 1 {
        1 => PartyId::P1,
        2 => PartyId::P2,
        _ => PartyId::P3,
    }
}

impl PartyId {
    pub const ALL: [PartyId; 3] = [PartyId::P1, PartyId::P2, PartyId::P3];

    /// 1-based index.
    pub fn index(self) -> usize {
        self as usize
    }

    /// 0-based index for array storage.
    pub fn index0(self) -> usize {
        self as usize - 1
    }

    /// The ring successor `h(i + 1)`.
    pub fn succ(self) -> PartyId {
        h(self.index() as u64 + 1)
    }

    /// The ring predecessor `h(i + 2)`.
    pub fn pred(self) -> PartyId {
        h(self.index() as u64 + 2)
    }

    /// The other two parties, in ring order from this one.
    pub fn others(self) -> [PartyId; 2] {
        [self.succ(), self.pred()]
    }

    pub fn from_index(index: usize) -> Option<PartyId> {
        match index {
            1 => Some(PartyId::P1),
            2 => Some(PartyId::P2),
            3 => Some(PartyId::P3),
            _ => None,
        }
    }
}

impl fmt::Display for PartyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A point-to-point message within one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub from: PartyId,
    pub to: PartyId,
    pub round: u64,
    pub phase: String,
    pub payload: Vec<u8>,
}

/// Communication metering for one session.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metrics {
    /// Count of synchronized rounds in which at least one message flowed.
    pub rounds: u64,
    /// Bytes sent per directed channel, metered before any tampering.
    pub bytes_per_channel: BTreeMap<(PartyId, PartyId), u64>,
}

impl Metrics {
    pub fn total_bytes(&self) -> u64 {
        self.bytes_per_channel.values().sum()
    }
}

/// Interposition hook for the corrupted party's channel endpoints.
pub trait MessageTap: Send {
    /// May replace the payload of an outgoing envelope of the corrupted
    /// party. Metering always records the original size.
    fn rewrite(&mut self, _env: &Envelope) -> Option<Vec<u8>> {
        None
    }

    /// Observes an envelope delivered to the corrupted party.
    fn observe(&mut self, _env: &Envelope) {}
}

struct NetState<'a> {
    round: u64,
    generation: u64,
    live: [bool; 3],
    arrived: [bool; 3],
    outboxes: [Vec<(PartyId, String, Vec<u8>)>; 3],
    inboxes: [Vec<Envelope>; 3],
    metrics: Metrics,
    trace: Option<Vec<String>>,
    tap: Option<(PartyId, Box<dyn MessageTap + 'a>)>,
}

impl NetState<'_> {
    fn ready(&self) -> bool {
        let mut live_arrived = 0;
        for i in 0..3 {
            if self.live[i] {
                if !self.arrived[i] {
                    return false;
                }
                live_arrived += 1;
            }
        }
        live_arrived > 0
    }

    fn deliver(&mut self) {
        let mut envelopes: Vec<Envelope> = Vec::new();
        for from in PartyId::ALL {
            for (to, phase, payload) in take(&mut self.outboxes[from.index0()]) {
                envelopes.push(Envelope {
                    from,
                    to,
                    round: 0,
                    phase,
                    payload,
                });
            }
        }
        envelopes.sort_by(|x, y| {
            (x.from, x.to, x.phase.as_str()).cmp(&(y.from, y.to, y.phase.as_str()))
        });

        if !envelopes.is_empty() {
            self.round += 1;
            self.metrics.rounds = self.round;
        }

        for env in &mut envelopes {
            env.round = self.round;
            *self
                .metrics
                .bytes_per_channel
                .entry((env.from, env.to))
                .or_insert(0) += env.payload.len() as u64;
            if let Some((corrupted, tap)) = &mut self.tap {
                if env.from == *corrupted {
                    if let Some(new_payload) = tap.rewrite(env) {
                        env.payload = new_payload;
                    }
                }
                if env.to == *corrupted {
                    tap.observe(env);
                }
            }
        }

        if let Some(trace) = &mut self.trace {
            for env in &envelopes {
                let hex: String = if env.payload.is_empty() {
                    "-".to_string()
                } else {
                    env.payload.iter().map(|b| format!("{b:02x}")).collect()
                };
                trace.push(format!(
                    "{} {} {} {} {}",
                    env.round, env.from, env.to, env.phase, hex
                ));
            }
        }

        for env in envelopes {
            self.inboxes[env.to.index0()].push(env);
        }
        self.arrived = [false; 3];
        self.generation += 1;
    }
}

/// The shared simulated network for one session.
pub struct Network<'a> {
    state: Mutex<NetState<'a>>,
    barrier: Condvar,
}

impl<'a> Network<'a> {
    pub fn new(tap: Option<(PartyId, Box<dyn MessageTap + 'a>)>, trace: bool) -> Self {
        Network {
            state: Mutex::new(NetState {
                round: 0,
                generation: 0,
                live: [true; 3],
                arrived: [false; 3],
                outboxes: Default::default(),
                inboxes: Default::default(),
                metrics: Metrics::default(),
                trace: trace.then(Vec::new),
                tap,
            }),
            barrier: Condvar::new(),
        }
    }

    /// The endpoint handed to one party program. Call once per party.
    pub fn endpoint(&self, id: PartyId) -> Endpoint<'_, 'a> {
        Endpoint {
            id,
            net: self,
            staged: Vec::new(),
            inbox: Vec::new(),
        }
    }

    fn finish(&self, id: PartyId) {
        let mut st = self.state.lock().unwrap();
        st.live[id.index0()] = false;
        st.arrived[id.index0()] = false;
        if st.ready() {
            st.deliver();
        }
        self.barrier.notify_all();
    }

    fn into_results(self) -> (Metrics, Vec<String>) {
        let st = self.state.into_inner().unwrap();
        (st.metrics, st.trace.unwrap_or_default())
    }
}

/// One party's handle onto the network.
pub struct Endpoint<'n, 'a> {
    id: PartyId,
    net: &'n Network<'a>,
    staged: Vec<(PartyId, String, Vec<u8>)>,
    inbox: Vec<Envelope>,
}

impl Endpoint<'_, '_> {
    pub fn id(&self) -> PartyId {
        self.id
    }

    /// Stages a message for the next exchange.
    pub fn send(&mut self, to: PartyId, phase: &str, payload: Vec<u8>) {
        debug_assert_ne!(to, self.id, "a party does not message itself");
        self.staged.push((to, phase.to_string(), payload));
    }

    /// Stages the same payload to both other parties (two point-to-point
    /// sends; there is no broadcast channel).
    pub fn send_both(&mut self, phase: &str, payload: Vec<u8>) {
        self.send(self.id.succ(), phase, payload.clone());
        self.send(self.id.pred(), phase, payload);
    }

    /// Runs one synchronized round: deposits everything staged, waits for
    /// all live parties, then collects this party's deliveries.
    pub fn exchange(&mut self) {
        let mut st = self.net.state.lock().unwrap();
        let me = self.id.index0();
        st.outboxes[me] = take(&mut self.staged);
        st.arrived[me] = true;
        let gen = st.generation;
        while st.generation == gen {
            if st.ready() {
                st.deliver();
                self.net.barrier.notify_all();
                break;
            }
            st = self.net.barrier.wait(st).unwrap();
        }
        self.inbox.extend(take(&mut st.inboxes[me]));
    }

    /// Takes the payload of the delivered message with the given sender and
    /// phase tag; a missing message is a deadlock, meaning the sender never
    /// deposited what this party owes to receive.
    pub fn recv(&mut self, from: PartyId, phase: &str) -> Result<Vec<u8>, TransportError> {
        match self
            .inbox
            .iter()
            .position(|env| env.from == from && env.phase == phase)
        {
            Some(idx) => Ok(self.inbox.remove(idx).payload),
            None => Err(TransportError::Deadlock {
                from,
                to: self.id,
                phase: phase.to_string(),
            }),
        }
    }

    /// Discards all deliveries collected so far.
    pub fn clear_inbox(&mut self) {
        self.inbox.clear();
    }
}

impl Drop for Endpoint<'_, '_> {
    fn drop(&mut self) {
        self.net.finish(self.id);
    }
}

/// A boxed party program returning either a value or a protocol error.
pub type PartyProgram<'a, T, E> =
    Box<dyn FnOnce(&mut Endpoint<'_, 'a>) -> Result<T, E> + Send + 'a>;

/// The result of a full session.
#[derive(Debug)]
pub struct RunOutput<T, E> {
    /// Per-party outcome, indexed by party.
    pub outcomes: [Result<T, E>; 3],
    pub metrics: Metrics,
    pub trace: Vec<String>,
}

/// Executes three party programs in lockstep and collects their outcomes,
/// metrics and optional trace. Deterministic given the programs' own seeds
/// and the tap.
pub fn run_parties<'a, T, E>(
    programs: [PartyProgram<'a, T, E>; 3],
    tap: Option<(PartyId, Box<dyn MessageTap + 'a>)>,
    trace: bool,
) -> RunOutput<T, E>
where
    T: Send + 'a,
    E: Send + 'a,
{
    let net = Network::new(tap, trace);
    let [p1, p2, p3] = programs;
    let (r1, r2, r3) = thread::scope(|scope| {
        let run = |id: PartyId, program: PartyProgram<'a, T, E>| {
            let net = &net;
            scope.spawn(move || {
                let mut endpoint = net.endpoint(id);
                program(&mut endpoint)
            })
        };
        let h1 = run(PartyId::P1, p1);
        let h2 = run(PartyId::P2, p2);
        let h3 = run(PartyId::P3, p3);
        (h1.join(), h2.join(), h3.join())
    });
    let outcomes = [
        r1.unwrap_or_else(|p| std::panic::resume_unwind(p)),
        r2.unwrap_or_else(|p| std::panic::resume_unwind(p)),
        r3.unwrap_or_else(|p| std::panic::resume_unwind(p)),
    ];
    let (metrics, trace) = net.into_results();
    RunOutput {
        outcomes,
        metrics,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::{Arc, Mutex as StdMutex};

    #[test]
    fn h_wraps_the_ring() {
        assert_eq!(h(1), PartyId::P1);
        assert_eq!(h(4), PartyId::P1);
        assert_eq!(h(5), PartyId::P2);
        assert_eq!(PartyId::P3.succ(), PartyId::P1);
        assert_eq!(PartyId::P1.pred(), PartyId::P3);
    }

    fn ring_program(payload: u8) -> PartyProgram<'static, Vec<u8>, TransportError> {
        Box::new(move |net| {
            net.send(net.id().succ(), "ring", vec![payload]);
            net.exchange();
            net.recv(net.id().pred(), "ring")
        })
    }

    #[test]
    fn ring_round_delivers_and_meters() {
        let out = run_parties(
            [ring_program(10), ring_program(20), ring_program(30)],
            None,
            false,
        );
        assert_eq!(out.outcomes[0].as_deref().unwrap(), &[30]);
        assert_eq!(out.outcomes[1].as_deref().unwrap(), &[10]);
        assert_eq!(out.outcomes[2].as_deref().unwrap(), &[20]);
        assert_eq!(out.metrics.rounds, 1);
        assert_eq!(
            out.metrics.bytes_per_channel[&(PartyId::P1, PartyId::P2)],
            1
        );
    }

    struct FlipFirstBit;
    impl MessageTap for FlipFirstBit {
        fn rewrite(&mut self, env: &Envelope) -> Option<Vec<u8>> {
            let mut payload = env.payload.clone();
            payload[0] ^= 0x80;
            Some(payload)
        }
    }

    #[test]
    fn tap_rewrites_corrupted_output_only_and_keeps_metrics() {
        let honest = run_parties(
            [ring_program(10), ring_program(20), ring_program(30)],
            None,
            false,
        );
        let tampered = run_parties(
            [ring_program(10), ring_program(20), ring_program(30)],
            Some((PartyId::P1, Box::new(FlipFirstBit))),
            false,
        );
        // P2 receives P1's flipped payload; the other channels are untouched.
        assert_eq!(tampered.outcomes[1].as_deref().unwrap(), &[10 ^ 0x80]);
        assert_eq!(tampered.outcomes[0].as_deref().unwrap(), &[30]);
        assert_eq!(tampered.outcomes[2].as_deref().unwrap(), &[20]);
        assert_eq!(tampered.metrics, honest.metrics);
    }

    #[test]
    fn empty_rounds_do_not_count() {
        let quiet = |_: u8| -> PartyProgram<'static, u64, TransportError> {
            Box::new(|net| {
                net.exchange();
                net.send(net.id().succ(), "late", vec![1]);
                net.exchange();
                Ok(0)
            })
        };
        let out = run_parties([quiet(0), quiet(1), quiet(2)], None, false);
        assert_eq!(out.metrics.rounds, 1);
    }

    #[test]
    fn missing_message_is_a_deadlock_naming_sender_and_phase() {
        let silent: PartyProgram<'static, Vec<u8>, TransportError> = Box::new(|net| {
            net.exchange();
            Ok(Vec::new())
        });
        let out = run_parties([ring_program(1), ring_program(2), silent], None, false);
        assert_eq!(
            out.outcomes[0],
            Err(TransportError::Deadlock {
                from: PartyId::P3,
                to: PartyId::P1,
                phase: "ring".to_string(),
            })
        );
    }

    #[test]
    fn early_abort_unblocks_peers() {
        let quitter: PartyProgram<'static, Vec<u8>, TransportError> = Box::new(|_| Ok(Vec::new()));
        let out = run_parties([ring_program(1), ring_program(2), quitter], None, false);
        // P1 expected P3's ring message which never came.
        assert!(matches!(
            out.outcomes[0],
            Err(TransportError::Deadlock { from: PartyId::P3, .. })
        ));
        // P2 still receives P1's message.
        assert_eq!(out.outcomes[1].as_deref().unwrap(), &[1]);
    }

    #[derive(Default)]
    struct Recorder(Arc<StdMutex<Vec<(PartyId, PartyId)>>>);
    impl MessageTap for Recorder {
        fn rewrite(&mut self, env: &Envelope) -> Option<Vec<u8>> {
            self.0.lock().unwrap().push((env.from, env.to));
            None
        }
        fn observe(&mut self, env: &Envelope) {
            self.0.lock().unwrap().push((env.from, env.to));
        }
    }

    #[test]
    fn tap_never_sees_the_honest_channel() {
        let seen = Arc::new(StdMutex::new(Vec::new()));
        let tap = Recorder(seen.clone());
        run_parties(
            [ring_program(1), ring_program(2), ring_program(3)],
            Some((PartyId::P1, Box::new(tap))),
            false,
        );
        for (from, to) in seen.lock().unwrap().iter() {
            assert!(*from == PartyId::P1 || *to == PartyId::P1);
        }
    }

    #[test]
    fn traces_are_byte_identical_across_runs() {
        let run = || {
            run_parties(
                [ring_program(1), ring_program(2), ring_program(3)],
                None,
                true,
            )
        };
        let (a, b) = (run(), run());
        assert!(!a.trace.is_empty());
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.metrics, b.metrics);
        assert_eq!(a.trace[0], "1 1 2 ring 01");
    }
}
