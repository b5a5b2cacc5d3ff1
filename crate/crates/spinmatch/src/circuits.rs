//! Gate-level circuits: simulation, synthesis and text emission.
//!
//! Qubits are 1-based and qubit `q` is bit `q - 1` of the basis index.
//! Rotations use half-angle generators:
//!
//! * `RXX(θ) = exp(-iθ X_a X_b / 2)`
//! * `RY(θ) = exp(-iθ Y / 2)`
//! * `CRY(θ)` applies `RY(θ)` to the target when the control is `|1⟩`.
//!
//! Gates are applied in list order.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spinham::XXHamiltonian;
use crate::statesim::{rotate_pairs, StateVector, MAX_SPINS};
use crate::targetstates::{binomial, double_factorial};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Rxx {
        theta: f64,
        a: usize,
        b: usize,
    },
    Ry {
        theta: f64,
        q: usize,
    },
    Cry {
        theta: f64,
        control: usize,
        target: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    X {
        q: usize,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rxx { a, b, .. } => vec![a, b],
            Gate::Ry { q, .. } | Gate::X { q } => vec![q],
            Gate::Cry {
                control, target, ..
            }
            | Gate::Cnot { control, target } => {
                vec![control, target]
            }
        }
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            Gate::Rxx { theta, .. } | Gate::Ry { theta, .. } | Gate::Cry { theta, .. } => {
                Some(theta)
            }
            Gate::Cnot { .. } | Gate::X { .. } => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Rxx { .. } => "rxx",
            Gate::Ry { .. } => "ry",
            Gate::Cry { .. } => "cry",
            Gate::Cnot { .. } => "cx",
            Gate::X { .. } => "x",
        }
    }

    fn shifted(self, offset: usize) -> Gate {
        match self {
            Gate::Rxx { theta, a, b } => Gate::Rxx {
                theta,
                a: a + offset,
                b: b + offset,
            },
            Gate::Ry { theta, q } => Gate::Ry {
                theta,
                q: q + offset,
            },
            Gate::Cry {
                theta,
                control,
                target,
            } => Gate::Cry {
                theta,
                control: control + offset,
                target: target + offset,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + offset,
                target: target + offset,
            },
            Gate::X { q } => Gate::X { q: q + offset },
        }
    }

    fn from_record(r: GateRecord) -> Result<Gate> {
        let theta = || {
            r.theta
                .ok_or_else(|| Error::Parse(format!("gate {} needs theta", r.kind)))
        };
        let arity = |n: usize| -> Result<()> {
            if r.qubits.len() != n {
                return Err(Error::Parse(format!(
                    "gate {} takes {n} qubits, got {}",
                    r.kind,
                    r.qubits.len()
                )));
            }
            Ok(())
        };
        let q = &r.qubits;
        Ok(match r.kind.as_str() {
            "rxx" => {
                arity(2)?;
                Gate::Rxx {
                    theta: theta()?,
                    a: q[0],
                    b: q[1],
                }
            }
            "ry" => {
                arity(1)?;
                Gate::Ry {
                    theta: theta()?,
                    q: q[0],
                }
            }
            "cry" => {
                arity(2)?;
                Gate::Cry {
                    theta: theta()?,
                    control: q[0],
                    target: q[1],
                }
            }
            "cx" => {
                arity(2)?;
                Gate::Cnot {
                    control: q[0],
                    target: q[1],
                }
            }
            "x" => {
                arity(1)?;
                Gate::X { q: q[0] }
            }
            other => return Err(Error::Parse(format!("unknown gate kind {other:?}"))),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct CircuitRecord {
    num_qubits: usize,
    gates: Vec<GateRecord>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Number of gates acting on two qubits.
    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.qubits().len() == 2).count()
    }

    /// Appends a gate after checking its operands and angle.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q == 0 || q > self.num_qubits) {
            return Err(Error::InvalidArgument(format!(
                "{} acts on qubit {q} outside 1..={}",
                gate.kind(),
                self.num_qubits
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidArgument(format!(
                "{} needs distinct qubits, got {} twice",
                gate.kind(),
                qs[0]
            )));
        }
        if gate.theta().is_some_and(|t| !t.is_finite()) {
            return Err(Error::NonFinite("rotation angle"));
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other` with its qubit `q` mapped to `q + offset`.
    pub fn append(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        for &g in &other.gates {
            self.push(g.shifted(offset))?;
        }
        Ok(())
    }

    /// Same gates, permuted.
    pub fn with_gate_order(&self, order: &[usize]) -> Circuit {
        assert_eq!(order.len(), self.gates.len());
        Circuit {
            num_qubits: self.num_qubits,
            gates: order.iter().map(|&k| self.gates[k]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let record = CircuitRecord {
            num_qubits: self.num_qubits,
            gates: self
                .gates
                .iter()
                .map(|g| GateRecord {
                    kind: g.kind().to_string(),
                    qubits: g.qubits(),
                    theta: g.theta(),
                })
                .collect(),
        };
        serde_json::to_string(&record).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Circuit> {
        let record: CircuitRecord = serde_json::from_str(text)?;
        let mut c = Circuit::new(record.num_qubits);
        for r in record.gates {
            c.push(Gate::from_record(r)?)?;
        }
        Ok(c)
    }

    /// OpenQASM 2.0 text. `q[i-1]` holds qubit `i`; CRY is expanded into
    /// `ry(θ/2) t; cx c,t; ry(-θ/2) t; cx c,t;`.
    pub fn to_qasm2(&self) -> String {
        let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
        writeln!(out, "qreg q[{}];", self.num_qubits).unwrap();
        for g in &self.gates {
            match *g {
                Gate::Rxx { theta, a, b } => {
                    writeln!(out, "rxx({theta}) q[{}],q[{}];", a - 1, b - 1)
                }
                Gate::Ry { theta, q } => writeln!(out, "ry({theta}) q[{}];", q - 1),
                Gate::Cry {
                    theta,
                    control,
                    target,
                } => {
                    let (c, t) = (control - 1, target - 1);
                    let half = theta / 2.0;
                    writeln!(out, "ry({half}) q[{t}];").unwrap();
                    writeln!(out, "cx q[{c}],q[{t}];").unwrap();
                    writeln!(out, "ry({}) q[{t}];", -half).unwrap();
                    writeln!(out, "cx q[{c}],q[{t}];")
                }
                Gate::Cnot { control, target } => {
                    writeln!(out, "cx q[{}],q[{}];", control - 1, target - 1)
                }
                Gate::X { q } => writeln!(out, "x q[{}];", q - 1),
            }
            .unwrap();
        }
        out
    }

    /// Reads the OpenQASM 2.0 subset written by [`Circuit::to_qasm2`]
    /// (one `q` register; `rxx`, `ry`, `cx`, `x`).
    pub fn from_qasm2(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for raw in text.split(';') {
            let stmt = raw.trim();
            if stmt.is_empty() || stmt.starts_with("OPENQASM") || stmt.starts_with("include") {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                let n = parse_register_index(rest.trim())?;
                circuit = Some(Circuit::new(n));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| Error::Parse("gate before qreg declaration".into()))?;
            let (head, args) = stmt
                .split_once(|ch: char| ch.is_whitespace())
                .ok_or_else(|| Error::Parse(format!("malformed statement {stmt:?}")))?;
            let qubits = args
                .split(',')
                .map(|a| parse_register_index(a.trim()).map(|i| i + 1))
                .collect::<Result<Vec<_>>>()?;
            let (name, theta) = match head.split_once('(') {
                Some((name, angle)) => {
                    let angle = angle.trim_end_matches(')');
                    let theta = angle
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad angle {angle:?}")))?;
                    (name, Some(theta))
                }
                None => (head, None),
            };
            c.push(Gate::from_record(GateRecord {
                kind: name.to_string(),
                qubits,
                theta,
            })?)?;
        }
        circuit.ok_or_else(|| Error::Parse("missing qreg declaration".into()))
    }
}

fn parse_register_index(s: &str) -> Result<usize> {
    s.strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad register reference {s:?}")))
}

/// Text encodings a circuit can be emitted in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircuitFormat {
    Json,
    Qasm2,
}

impl FromStr for CircuitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(CircuitFormat::Json),
            "qasm2" => Ok(CircuitFormat::Qasm2),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

pub fn emit(c: &Circuit, format: CircuitFormat) -> String {
    match format {
        CircuitFormat::Json => c.to_json(),
        CircuitFormat::Qasm2 => c.to_qasm2(),
    }
}

/// Parses text produced by [`emit`].
pub fn parse(text: &str, format: CircuitFormat) -> Result<Circuit> {
    match format {
        CircuitFormat::Json => Circuit::from_json(text),
        CircuitFormat::Qasm2 => Circuit::from_qasm2(text),
    }
}

fn ry_pairs(amps: &mut [Complex64], q: usize, control: Option<usize>, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    let bit = 1usize << (q - 1);
    let cbit = control.map_or(0, |c| 1usize << (c - 1));
    for m in 0..amps.len() {
        if m & bit != 0 || m & cbit != cbit {
            continue;
        }
        let (a0, a1) = (amps[m], amps[m | bit]);
        amps[m] = c * a0 - s * a1;
        amps[m | bit] = s * a0 + c * a1;
    }
}

/// Runs `c` on `psi` gate by gate.
pub fn apply_circuit(c: &Circuit, psi: &StateVector) -> Result<StateVector> {
    if c.num_qubits != psi.num_spins() {
        return Err(Error::DimensionMismatch {
            expected: c.num_qubits,
            found: psi.num_spins(),
        });
    }
    let mut out = psi.clone();
    let amps = out.amplitudes_mut();
    for g in &c.gates {
        match *g {
            Gate::Rxx { theta, a, b } => {
                let flip = (1usize << (a - 1)) | (1usize << (b - 1));
                rotate_pairs(amps, a, flip, theta / 2.0);
            }
            Gate::Ry { theta, q } => ry_pairs(amps, q, None, theta),
            Gate::Cry {
                theta,
                control,
                target,
            } => ry_pairs(amps, target, Some(control), theta),
            Gate::Cnot { control, target } => {
                let (cb, tb) = (1usize << (control - 1), 1usize << (target - 1));
                for m in 0..amps.len() {
                    if m & cb != 0 && m & tb == 0 {
                        amps.swap(m, m | tb);
                    }
                }
            }
            Gate::X { q } => {
                let b = 1usize << (q - 1);
                for m in 0..amps.len() {
                    if m & b == 0 {
                        amps.swap(m, m | b);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `exp(-iHt)` as one `RXX(2ct)` per term, in term order. No Trotter error
/// because the terms commute.
pub fn evolution_circuit(h: &XXHamiltonian, t: f64) -> Result<Circuit> {
    let mut c = Circuit::new(h.num_spins());
    for term in h.terms() {
        c.push(Gate::Rxx {
            theta: 2.0 * term.coeff * t,
            a: term.i,
            b: term.j,
        })?;
    }
    Ok(c)
}

/// Weight `C(2N, 2k)^{1/2} / (2(N-k)-1)!!` of the Dicke component `D^{2N}_{2k}`.
fn ladder_weight(n: usize, k: usize) -> f64 {
    let df = double_factorial(2 * (n - k) as i64 - 1).expect("small double factorial") as f64;
    binomial(2 * n, 2 * k).sqrt() / df
}

/// Rotation angle of step `m` of the amplitude ladder:
/// `θ_m = 2 arccos( w_m / sqrt(Σ_{k=m}^{N} w_k²) )` with `w_k` the ladder weights.
pub fn theta_m(n: usize, m: usize) -> Result<f64> {
    if m >= n {
        return Err(Error::InvalidArgument(format!(
            "ladder step {m} outside 0..{n}"
        )));
    }
    let tail: f64 = (m..=n).map(|k| ladder_weight(n, k).powi(2)).sum();
    let ratio = (ladder_weight(n, m) / tail.sqrt()).clamp(-1.0, 1.0);
    Ok(2.0 * ratio.acos())
}

/// The ladder `V` on `2N` qubits. On `|0^{2N}⟩` it produces
/// `(1/L_N) Σ_k w_k |0^{2(N-k)} 1^{2k}⟩`, the ones sitting on the highest qubits.
pub fn v_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let two_n = 2 * n;
    let mut c = Circuit::new(two_n);
    for m in 0..n {
        let theta = theta_m(n, m)?;
        let target = two_n - 2 * m;
        if m == 0 {
            c.push(Gate::Ry { theta, q: target })?;
        } else {
            c.push(Gate::Cry {
                theta,
                control: target + 1,
                target,
            })?;
        }
        c.push(Gate::Cnot {
            control: target,
            target: target - 1,
        })?;
    }
    Ok(c)
}

/// `RY(θ)` on `target` controlled by both `c1` and `c2`, using only CRY and CNOT.
fn push_ccry(c: &mut Circuit, theta: f64, c1: usize, c2: usize, target: usize) -> Result<()> {
    c.push(Gate::Cry {
        theta: theta / 2.0,
        control: c2,
        target,
    })?;
    c.push(Gate::Cnot {
        control: c1,
        target: c2,
    })?;
    c.push(Gate::Cry {
        theta: -theta / 2.0,
        control: c2,
        target,
    })?;
    c.push(Gate::Cnot {
        control: c1,
        target: c2,
    })?;
    c.push(Gate::Cry {
        theta: theta / 2.0,
        control: c1,
        target,
    })
}

/// Split-and-cyclic-shift block on qubits `1..=m`: maps `|0^{m-l} 1^l⟩` to
/// `sqrt(l/m) |0^{m-l} 1^l⟩ + sqrt((m-l)/m) |0^{m-l-1} 1^l 0⟩` for every `l`.
fn push_scs(c: &mut Circuit, m: usize) -> Result<()> {
    for l in 1..m {
        let theta = 2.0 * (l as f64 / m as f64).sqrt().acos();
        let low = m - l;
        c.push(Gate::Cnot {
            control: low,
            target: m,
        })?;
        if l == 1 {
            c.push(Gate::Cry {
                theta,
                control: m,
                target: low,
            })?;
        } else {
            push_ccry(c, theta, m, low + 1, low)?;
        }
        c.push(Gate::Cnot {
            control: low,
            target: m,
        })?;
    }
    Ok(())
}

/// A unitary on `n` qubits taking `|0^{n-w} 1^w⟩` to the Dicke state
/// `D^n_w` for every `0 ≤ w ≤ n` at once. Uses `O(n²)` gates.
pub fn dicke_unitary_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Dicke unitary needs at least one qubit".into(),
        ));
    }
    let mut c = Circuit::new(n);
    for m in (2..=n).rev() {
        push_scs(&mut c, m)?;
    }
    Ok(c)
}

/// Prepares `|φ₁⟩` from `|0^{4N}⟩`: `X` on the upper register, `V` then the
/// Dicke unitary on the lower register, then `CNOT(i, 2N+i)` for every `i`.
pub fn phi1_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let two_n = 2 * n;
    if 2 * two_n > MAX_SPINS {
        return Err(Error::SizeLimit {
            what: "phi1 circuit (4N qubits)",
            size: 2 * two_n,
            limit: MAX_SPINS,
        });
    }
    let mut c = Circuit::new(2 * two_n);
    for q in two_n + 1..=2 * two_n {
        c.push(Gate::X { q })?;
    }
    c.append(&v_circuit(n)?, 0)?;
    c.append(&dicke_unitary_circuit(two_n)?, 0)?;
    c.append(&disentangler(n), 0)?;
    Ok(c)
}

/// `CNOT(i, 2N+i)` for `i = 1..=2N` on `4N` qubits. Its own inverse.
pub fn disentangler(n: usize) -> Circuit {
    let two_n = 2 * n;
    let mut c = Circuit::new(2 * two_n);
    for i in 1..=two_n {
        c.push(Gate::Cnot {
            control: i,
            target: two_n + i,
        })
        .expect("operands are in range");
    }
    c
}
