//! Boolean circuit representation, textual format, validation and the
//! plaintext evaluator used as the correctness oracle for every protocol
//! test.
//!
//! A circuit has `n` input wires, `q` gates and `m` output wires. Wires are
//! numbered from 1: inputs occupy `1..=n`, each gate is indexed by its output
//! wire in `n+1..=n+q`, and the output wires are exactly the last `m` wires.
//! Gates are fan-in-2 XOR or AND with both operands strictly below the gate
//! index (first < second < gate). Inputs are split between the three parties
//! by cumulative bounds `n1 <= n2 <= n3 = n`.
//!
//! The textual format is line oriented:
//!
//! ```text
//! circuit <n> <m> <q>
//! parties <n1> <n2> <n3>
//! <XOR|AND> <a> <b> -> <g>      (q lines, g increasing from n+1)
//! ```
//!
//! `Circuit` and [`BitString`] values are immutable after construction and
//! safe to share across concurrently running party processes.

use std::fmt;
use std::ops::RangeInclusive;

use rand::Rng;

use crate::bits::BitString;
use crate::error::CircuitError;
use crate::transport::PartyId;

/// Gate operation; circuits are built exclusively from XOR and AND.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOp {
    Xor,
    And,
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateOp::Xor => "XOR",
            GateOp::And => "AND",
        })
    }
}

/// A fan-in-2 gate, indexed by its output wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Gate {
    /// Output wire index.
    pub out: usize,
    /// First input wire.
    pub a: usize,
    /// Second input wire.
    pub b: usize,
    pub op: GateOp,
}

/// A validated circuit `(n, m, q, F, S, G)` with party input bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: usize,
    m: usize,
    gates: Vec<Gate>,
    /// Cumulative party input bounds `(n1, n2, n3)` with `n3 = n`.
    bounds: (usize, usize, usize),
}

impl Circuit {
    /// Builds and validates a circuit from its parts.
    pub fn new(
        n: usize,
        m: usize,
        bounds: (usize, usize, usize),
        gates: Vec<Gate>,
    ) -> Result<Self, CircuitError> {
        let circuit = Self { n, m, gates, bounds };
        circuit.validate()?;
        Ok(circuit)
    }

    fn validate(&self) -> Result<(), CircuitError> {
        let (n1, n2, n3) = self.bounds;
        if n1 > n2 || n2 > n3 || n3 != self.n {
            return Err(CircuitError::PartyBounds { bounds: self.bounds });
        }
        if self.m > self.gates.len() {
            return Err(CircuitError::TooManyOutputs {
                outputs: self.m,
                gates: self.gates.len(),
            });
        }
        for (i, gate) in self.gates.iter().enumerate() {
            let expected = self.n + i + 1;
            if gate.out != expected {
                return Err(CircuitError::Syntax {
                    line: i + 3,
                    message: format!("gate wire {} out of order, expected {expected}", gate.out),
                });
            }
            if gate.a == 0 || gate.a >= gate.b || gate.b >= gate.out {
                return Err(CircuitError::WireOrder { gate: gate.out });
            }
        }
        Ok(())
    }

    /// Number of input wires.
    pub fn inputs(&self) -> usize {
        self.n
    }

    /// Number of output wires.
    pub fn outputs(&self) -> usize {
        self.m
    }

    /// Number of gates.
    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Total wire count `n + q`.
    pub fn wires(&self) -> usize {
        self.n + self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Cumulative party input bounds `(n1, n2, n3)`.
    pub fn party_bounds(&self) -> (usize, usize, usize) {
        self.bounds
    }

    /// Output wires, `n + q - m + 1 ..= n + q`.
    pub fn output_wires(&self) -> RangeInclusive<usize> {
        self.wires() - self.m + 1..=self.wires()
    }

    /// The contiguous (possibly empty) input wire range of one party.
    pub fn party_input_range(&self, party: PartyId) -> RangeInclusive<usize> {
        let (n1, n2, n3) = self.bounds;
        match party.index() {
            1 => 1..=n1,
            2 => n1 + 1..=n2,
            _ => n2 + 1..=n3,
        }
    }

    /// Number of input wires owned by `party`.
    pub fn party_input_len(&self, party: PartyId) -> usize {
        let range = self.party_input_range(party);
        range.end() + 1 - range.start()
    }

    /// Splits a full input assignment into the three per-party slices.
    pub fn split_input(&self, x: &BitString) -> Result<[BitString; 3], CircuitError> {
        if x.len() != self.n {
            return Err(CircuitError::InputLength {
                expected: self.n,
                actual: x.len(),
            });
        }
        Ok(PartyId::ALL.map(|p| {
            let range = self.party_input_range(p);
            if range.is_empty() {
                BitString::empty()
            } else {
                x.slice(range.start() - 1, *range.end())
            }
        }))
    }

    /// Evaluates the circuit in the clear, gate by gate in index order.
    pub fn eval_plaintext(&self, input: &BitString) -> Result<BitString, CircuitError> {
        if input.len() != self.n {
            return Err(CircuitError::InputLength {
                expected: self.n,
                actual: input.len(),
            });
        }
        let mut values: Vec<bool> = input.iter().collect();
        values.reserve(self.gates.len());
        for gate in &self.gates {
            let a = values[gate.a - 1];
            let b = values[gate.b - 1];
            values.push(match gate.op {
                GateOp::Xor => a ^ b,
                GateOp::And => a & b,
            });
        }
        Ok(BitString::from_bits(
            &values[self.wires() - self.m..self.wires()],
        ))
    }

    /// Per-wire AND depth: the maximum number of AND gates on any path from
    /// an input to the wire. XOR gates are round-free and add nothing.
    pub fn and_levels(&self) -> Vec<usize> {
        let mut levels = vec![0usize; self.wires()];
        for gate in &self.gates {
            let operands = levels[gate.a - 1].max(levels[gate.b - 1]);
            levels[gate.out - 1] = match gate.op {
                GateOp::Xor => operands,
                GateOp::And => operands + 1,
            };
        }
        levels
    }

    /// The circuit's AND depth, which determines its communication rounds.
    pub fn and_depth(&self) -> usize {
        self.and_levels().into_iter().max().unwrap_or(0)
    }

    /// Serializes back to the textual format; `parse` of the result yields a
    /// structurally identical circuit.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "circuit {} {} {}\nparties {} {} {}\n",
            self.n,
            self.m,
            self.gates.len(),
            self.bounds.0,
            self.bounds.1,
            self.bounds.2
        );
        for gate in &self.gates {
            out.push_str(&format!("{} {} {} -> {}\n", gate.op, gate.a, gate.b, gate.out));
        }
        out
    }

    /// Parses the textual circuit format.
    pub fn parse(text: &str) -> Result<Self, CircuitError> {
        let mut lines = text.lines().enumerate();

        let (line_no, header) = lines
            .next()
            .ok_or_else(|| syntax(1, "missing circuit header"))?;
        let header_fields = fields(line_no + 1, header, "circuit", 3)?;
        let (n, m, q) = (header_fields[0], header_fields[1], header_fields[2]);

        let (line_no, parties) = lines
            .next()
            .ok_or_else(|| syntax(2, "missing parties line"))?;
        let bounds_fields = fields(line_no + 1, parties, "parties", 3)?;
        let bounds = (bounds_fields[0], bounds_fields[1], bounds_fields[2]);

        let mut gates = Vec::with_capacity(q);
        for _ in 0..q {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| syntax(gates.len() + 3, "missing gate line"))?;
            gates.push(parse_gate(line_no + 1, line)?);
        }
        if let Some((line_no, extra)) = lines.next() {
            if !extra.trim().is_empty() {
                return Err(syntax(line_no + 1, "trailing content after last gate"));
            }
        }
        Self::new(n, m, bounds, gates)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        message: message.into(),
    }
}

fn fields(line_no: usize, line: &str, keyword: &str, count: usize) -> Result<Vec<usize>, CircuitError> {
    let mut parts = line.split_whitespace();
    match parts.next() {
        Some(k) if k == keyword => {}
        other => {
            return Err(syntax(
                line_no,
                format!("expected keyword {keyword:?}, got {other:?}"),
            ))
        }
    }
    let values: Vec<usize> = parts
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| syntax(line_no, format!("invalid number {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    if values.len() != count {
        return Err(syntax(
            line_no,
            format!("expected {count} values after {keyword:?}, got {}", values.len()),
        ));
    }
    Ok(values)
}

fn parse_gate(line_no: usize, line: &str) -> Result<Gate, CircuitError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 5 || parts[3] != "->" {
        return Err(syntax(line_no, "expected \"<XOR|AND> <a> <b> -> <g>\""));
    }
    let op = match parts[0] {
        "XOR" => GateOp::Xor,
        "AND" => GateOp::And,
        other => return Err(syntax(line_no, format!("unknown gate operation {other:?}"))),
    };
    let number = |p: &str| {
        p.parse::<usize>()
            .map_err(|_| syntax(line_no, format!("invalid wire index {p:?}")))
    };
    Ok(Gate {
        op,
        a: number(parts[1])?,
        b: number(parts[2])?,
        out: number(parts[4])?,
    })
}

/// Deterministic circuit generators used by tests, benches and `gen-circuit`.
pub mod samples {
    use super::*;

    /// Single AND of two inputs held by parties 1 and 2.
    pub fn and2() -> Circuit {
        Circuit::parse("circuit 2 1 1\nparties 1 2 2\nAND 1 2 -> 3\n").unwrap()
    }

    /// Single XOR of two inputs held by parties 1 and 2.
    pub fn xor2() -> Circuit {
        Circuit::parse("circuit 2 1 1\nparties 1 2 2\nXOR 1 2 -> 3\n").unwrap()
    }

    /// A chain of `depth` AND gates, AND depth exactly `depth`.
    pub fn and_chain(depth: usize) -> Circuit {
        chain(depth, GateOp::And)
    }

    /// A chain of `len` XOR gates; AND depth 0.
    pub fn xor_chain(len: usize) -> Circuit {
        chain(len, GateOp::Xor)
    }

    fn chain(len: usize, op: GateOp) -> Circuit {
        assert!(len >= 1);
        let n = len + 1;
        let gates = (0..len)
            .map(|i| Gate {
                op,
                a: i + 2,
                b: if i == 0 { 1 } else { n + i },
                out: n + i + 1,
            })
            .map(|g| Gate {
                a: g.a.min(g.b),
                b: g.a.max(g.b),
                ..g
            })
            .collect();
        let n1 = n.div_ceil(3);
        let n2 = n1 + (n - n1).div_ceil(2);
        Circuit::new(n, 1, (n1, n2, n), gates).unwrap()
    }

    /// Shape of a random circuit.
    #[derive(Debug, Clone, Copy)]
    pub struct RandomSpec {
        pub inputs: usize,
        pub gates: usize,
        pub outputs: usize,
        /// Probability that a gate is AND rather than XOR.
        pub and_fraction: f64,
    }

    /// A random fan-in-2 circuit honoring the wire-order constraint.
    pub fn random<R: Rng + ?Sized>(spec: RandomSpec, rng: &mut R) -> Circuit {
        assert!(spec.inputs >= 2 && spec.gates >= 1 && spec.outputs <= spec.gates);
        let n = spec.inputs;
        let gates = (0..spec.gates)
            .map(|i| {
                let out = n + i + 1;
                let a = rng.gen_range(1..out - 1);
                let b = rng.gen_range(a + 1..out);
                let op = if rng.gen_bool(spec.and_fraction) {
                    GateOp::And
                } else {
                    GateOp::Xor
                };
                Gate { op, a, b, out }
            })
            .collect();
        let n1 = rng.gen_range(0..=n);
        let n2 = rng.gen_range(n1..=n);
        Circuit::new(n, spec.outputs.max(1), (n1, n2, n), gates).unwrap()
    }
}
