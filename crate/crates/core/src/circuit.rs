//! Backend-agnostic circuit IR.
//!
//! A circuit is an ordered instruction list over a fixed qubit count.
//! Measurement outcomes are keyed by tag; tags must be unique so records
//! stay unambiguous. Noise lives in the IR as explicit `NoiseSite`
//! instructions so that instrumented circuits are self-describing, while
//! `IdleDd` marks the data-qubit idle window during ancilla readout and is
//! a no-op until the noise pass replaces it.

use crate::pauli::PauliString;
use crate::CoreError;
use std::collections::HashMap;
use std::fmt::Write as _;

/// Stochastic error channel attached to a circuit location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseKind {
    /// Uniform single-qubit depolarizing: with probability p apply one of
    /// X, Y, Z (p/3 each).
    Depolarize1 { p: f64 },
    /// Uniform two-qubit depolarizing: with probability p apply one of the
    /// 15 non-identity two-qubit Paulis (p/15 each).
    Depolarize2 { p: f64 },
    /// Classical readout error: with probability p flip the outcome of the
    /// next MeasurePauli in program order.
    FlipOutcome { p: f64 },
}

impl NoiseKind {
    pub fn probability(&self) -> f64 {
        match *self {
            NoiseKind::Depolarize1 { p }
            | NoiseKind::Depolarize2 { p }
            | NoiseKind::FlipOutcome { p } => p,
        }
    }

    fn arity(&self) -> usize {
        match self {
            NoiseKind::Depolarize1 { .. } => 1,
            NoiseKind::Depolarize2 { .. } => 2,
            NoiseKind::FlipOutcome { .. } => 0,
        }
    }
}

/// One circuit instruction.
#[derive(Debug, Clone, PartialEq)]
pub enum Instruction {
    H(usize),
    S(usize),
    Sdg(usize),
    /// Apply every non-identity letter of the string as a single-qubit gate.
    /// The global phase of the string is ignored (unobservable).
    PauliGate(PauliString),
    Rx { q: usize, theta: f64 },
    Ry { q: usize, theta: f64 },
    Rz { q: usize, theta: f64 },
    Cx { control: usize, target: usize },
    Cz { a: usize, b: usize },
    /// Joint projective measurement of a Hermitian Pauli product.
    MeasurePauli { op: PauliString, tag: String },
    /// Measure Z and flip to |0> when the outcome is -1.
    ResetZ(usize),
    NoiseSite { kind: NoiseKind, qubits: Vec<usize> },
    IdleDd { qubits: Vec<usize> },
}

/// Ordered instruction list over a fixed qubit register.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    n_qubits: usize,
    instructions: Vec<Instruction>,
    meas_tags: Vec<String>,
    tag_index: HashMap<String, usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Circuit {
        Circuit {
            n_qubits,
            instructions: Vec::new(),
            meas_tags: Vec::new(),
            tag_index: HashMap::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Number of MeasurePauli instructions.
    pub fn measurement_count(&self) -> usize {
        self.meas_tags.len()
    }

    /// Measurement tags in program order.
    pub fn measurement_tags(&self) -> impl Iterator<Item = &str> {
        self.meas_tags.iter().map(|s| s.as_str())
    }

    /// Ordinal of a tag among the circuit's measurements.
    pub fn tag_ordinal(&self, tag: &str) -> Result<usize, CoreError> {
        self.tag_index
            .get(tag)
            .copied()
            .ok_or_else(|| CoreError::UnknownTag(tag.to_string()))
    }

    fn check_q(&self, q: usize) -> Result<(), CoreError> {
        if q >= self.n_qubits {
            return Err(CoreError::QubitOutOfRange {
                index: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn check_op(&self, op: &PauliString) -> Result<(), CoreError> {
        if op.n_qubits() != self.n_qubits {
            return Err(CoreError::DimensionMismatch(op.n_qubits(), self.n_qubits));
        }
        Ok(())
    }

    /// Validate and append one instruction.
    pub fn push(&mut self, instr: Instruction) -> Result<(), CoreError> {
        match &instr {
            Instruction::H(q) | Instruction::S(q) | Instruction::Sdg(q) | Instruction::ResetZ(q) => {
                self.check_q(*q)?
            }
            Instruction::PauliGate(op) => self.check_op(op)?,
            Instruction::Rx { q, theta }
            | Instruction::Ry { q, theta }
            | Instruction::Rz { q, theta } => {
                self.check_q(*q)?;
                if !theta.is_finite() {
                    return Err(CoreError::NonFiniteAngle);
                }
            }
            Instruction::Cx {
                control: a,
                target: b,
            }
            | Instruction::Cz { a, b } => {
                self.check_q(*a)?;
                self.check_q(*b)?;
                if a == b {
                    return Err(CoreError::RepeatedQubit(*a));
                }
            }
            Instruction::MeasurePauli { op, tag } => {
                self.check_op(op)?;
                if !op.is_hermitian() {
                    return Err(CoreError::NonHermitian(op.phase_exponent()));
                }
                if self.tag_index.contains_key(tag) {
                    return Err(CoreError::DuplicateTag(tag.clone()));
                }
            }
            Instruction::NoiseSite { kind, qubits } => {
                let p = kind.probability();
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    return Err(CoreError::BadProbability(p));
                }
                if qubits.len() != kind.arity() {
                    return Err(CoreError::NoiseArity {
                        expected: kind.arity(),
                        got: qubits.len(),
                    });
                }
                for &q in qubits {
                    self.check_q(q)?;
                }
                if qubits.len() == 2 && qubits[0] == qubits[1] {
                    return Err(CoreError::RepeatedQubit(qubits[0]));
                }
            }
            Instruction::IdleDd { qubits } => {
                let mut seen = 0u128;
                for &q in qubits {
                    self.check_q(q)?;
                    if seen >> q & 1 == 1 {
                        return Err(CoreError::RepeatedQubit(q));
                    }
                    seen |= 1 << q;
                }
            }
        }
        if let Instruction::MeasurePauli { tag, .. } = &instr {
            self.tag_index.insert(tag.clone(), self.meas_tags.len());
            self.meas_tags.push(tag.clone());
        }
        self.instructions.push(instr);
        Ok(())
    }

    /// Append all instructions of `other` (tags must stay unique).
    pub fn append(&mut self, other: &Circuit) -> Result<(), CoreError> {
        if other.n_qubits != self.n_qubits {
            return Err(CoreError::DimensionMismatch(other.n_qubits, self.n_qubits));
        }
        for instr in &other.instructions {
            self.push(instr.clone())?;
        }
        Ok(())
    }

    // Builder helpers.

    pub fn h(&mut self, q: usize) -> Result<(), CoreError> {
        self.push(Instruction::H(q))
    }

    pub fn s(&mut self, q: usize) -> Result<(), CoreError> {
        self.push(Instruction::S(q))
    }

    pub fn sdg(&mut self, q: usize) -> Result<(), CoreError> {
        self.push(Instruction::Sdg(q))
    }

    pub fn pauli_gate(&mut self, op: PauliString) -> Result<(), CoreError> {
        self.push(Instruction::PauliGate(op))
    }

    pub fn rx(&mut self, q: usize, theta: f64) -> Result<(), CoreError> {
        self.push(Instruction::Rx { q, theta })
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> Result<(), CoreError> {
        self.push(Instruction::Ry { q, theta })
    }

    pub fn rz(&mut self, q: usize, theta: f64) -> Result<(), CoreError> {
        self.push(Instruction::Rz { q, theta })
    }

    pub fn cx(&mut self, control: usize, target: usize) -> Result<(), CoreError> {
        self.push(Instruction::Cx { control, target })
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<(), CoreError> {
        self.push(Instruction::Cz { a, b })
    }

    pub fn measure(&mut self, op: PauliString, tag: impl Into<String>) -> Result<(), CoreError> {
        self.push(Instruction::MeasurePauli {
            op,
            tag: tag.into(),
        })
    }

    pub fn reset_z(&mut self, q: usize) -> Result<(), CoreError> {
        self.push(Instruction::ResetZ(q))
    }

    pub fn idle_dd(&mut self, qubits: Vec<usize>) -> Result<(), CoreError> {
        self.push(Instruction::IdleDd { qubits })
    }

    /// Line-oriented text form, one instruction per line, for golden files.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "QUBITS {}", self.n_qubits);
        for instr in &self.instructions {
            let line = match instr {
                Instruction::H(q) => format!("H {q}"),
                Instruction::S(q) => format!("S {q}"),
                Instruction::Sdg(q) => format!("SDG {q}"),
                Instruction::PauliGate(p) => format!("PAULI {p}"),
                Instruction::Rx { q, theta } => format!("RX {q} {theta:?}"),
                Instruction::Ry { q, theta } => format!("RY {q} {theta:?}"),
                Instruction::Rz { q, theta } => format!("RZ {q} {theta:?}"),
                Instruction::Cx { control, target } => format!("CX {control} {target}"),
                Instruction::Cz { a, b } => format!("CZ {a} {b}"),
                Instruction::MeasurePauli { op, tag } => format!("MPP {tag} {op}"),
                Instruction::ResetZ(q) => format!("RESET {q}"),
                Instruction::NoiseSite { kind, qubits } => {
                    let qs: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
                    match kind {
                        NoiseKind::Depolarize1 { p } => format!("DEPOL1 {p:?} {}", qs.join(" ")),
                        NoiseKind::Depolarize2 { p } => format!("DEPOL2 {p:?} {}", qs.join(" ")),
                        NoiseKind::FlipOutcome { p } => format!("FLIP {p:?}"),
                    }
                }
                Instruction::IdleDd { qubits } => {
                    let qs: Vec<String> = qubits.iter().map(|q| q.to_string()).collect();
                    format!("IDLE {}", qs.join(" "))
                }
            };
            let _ = writeln!(out, "{line}");
        }
        out
    }

    /// Parse the text form produced by `to_text`.
    pub fn from_text(text: &str) -> Result<Circuit, CoreError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| CoreError::Parse("empty circuit text".into()))?;
        let n: usize = header
            .strip_prefix("QUBITS ")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| CoreError::Parse(format!("bad header `{header}`")))?;
        let mut c = Circuit::new(n);
        for line in lines {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let word = tokens[0];
            let args = &tokens[1..];
            let bad = || CoreError::Parse(format!("malformed line `{line}`"));
            let one_usize = |args: &[&str]| -> Result<usize, CoreError> {
                if args.len() != 1 {
                    return Err(bad());
                }
                args[0].parse().map_err(|_| bad())
            };
            let usize_at = |i: usize| -> Result<usize, CoreError> {
                args.get(i).and_then(|v| v.parse().ok()).ok_or_else(bad)
            };
            let f64_at = |i: usize| -> Result<f64, CoreError> {
                args.get(i).and_then(|v| v.parse().ok()).ok_or_else(bad)
            };
            let usize_tail = |from: usize| -> Result<Vec<usize>, CoreError> {
                args[from.min(args.len())..]
                    .iter()
                    .map(|v| v.parse().map_err(|_| bad()))
                    .collect()
            };
            let instr = match word {
                "H" => Instruction::H(one_usize(args)?),
                "S" => Instruction::S(one_usize(args)?),
                "SDG" => Instruction::Sdg(one_usize(args)?),
                "RESET" => Instruction::ResetZ(one_usize(args)?),
                "PAULI" => {
                    if args.len() != 1 {
                        return Err(bad());
                    }
                    Instruction::PauliGate(args[0].parse()?)
                }
                "RX" | "RY" | "RZ" => {
                    if args.len() != 2 {
                        return Err(bad());
                    }
                    let q = usize_at(0)?;
                    let theta = f64_at(1)?;
                    match word {
                        "RX" => Instruction::Rx { q, theta },
                        "RY" => Instruction::Ry { q, theta },
                        _ => Instruction::Rz { q, theta },
                    }
                }
                "CX" | "CZ" => {
                    if args.len() != 2 {
                        return Err(bad());
                    }
                    if word == "CX" {
                        Instruction::Cx {
                            control: usize_at(0)?,
                            target: usize_at(1)?,
                        }
                    } else {
                        Instruction::Cz {
                            a: usize_at(0)?,
                            b: usize_at(1)?,
                        }
                    }
                }
                "MPP" => {
                    if args.len() != 2 {
                        return Err(bad());
                    }
                    Instruction::MeasurePauli {
                        op: args[1].parse()?,
                        tag: args[0].to_string(),
                    }
                }
                "DEPOL1" | "DEPOL2" | "FLIP" => {
                    let p = f64_at(0)?;
                    let qubits = usize_tail(1)?;
                    let kind = match word {
                        "DEPOL1" => NoiseKind::Depolarize1 { p },
                        "DEPOL2" => NoiseKind::Depolarize2 { p },
                        _ => NoiseKind::FlipOutcome { p },
                    };
                    Instruction::NoiseSite { kind, qubits }
                }
                "IDLE" => Instruction::IdleDd {
                    qubits: usize_tail(0)?,
                },
                other => return Err(CoreError::Parse(format!("unknown instruction `{other}`"))),
            };
            c.push(instr)?;
        }
        Ok(c)
    }
}
