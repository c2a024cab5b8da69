//! Signed Pauli strings in symplectic form and their conjugation by
//! Clifford gates.
//!
//! A letter on qubit `q` is encoded as the bit pair `(x[q], z[q])`:
//! `I = 00`, `X = 10`, `Y = 11`, `Z = 01`. Qubit 0 is the leftmost letter of
//! the text form.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::BitVec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("empty Pauli string")]
    Empty,
    #[error("invalid character {ch:?} at position {position}")]
    InvalidChar { position: usize, ch: char },
    #[error("expected {expected} qubits, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("two-qubit gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("operators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },
    #[error("empty operator list")]
    EmptySet,
    #[error("product of anticommuting operators is not Hermitian")]
    NonHermitianProduct,
}

/// Hermitian element of the Pauli group: `(-1)^negative · P(x, z)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
    negative: bool,
}

/// The tableau's `g` function: the power of `i` picked up when the single
/// qubit Paulis `(x1, z1)` and `(x2, z2)` are multiplied in that order.
#[inline]
pub(crate) fn phase_exponent(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2 as i32 - x2 as i32,
        (true, false) => z2 as i32 * (2 * x2 as i32 - 1),
        (false, true) => x2 as i32 * (1 - 2 * z2 as i32),
    }
}

impl PauliString {
    pub fn new(x: BitVec, z: BitVec, negative: bool) -> Result<Self, PauliError> {
        if x.len() != z.len() {
            return Err(PauliError::LengthMismatch { expected: x.len(), found: z.len() });
        }
        if x.is_empty() {
            return Err(PauliError::Empty);
        }
        Ok(Self { x, z, negative })
    }

    pub fn identity(n: usize) -> Self {
        Self { x: BitVec::zeros(n), z: BitVec::zeros(n), negative: false }
    }

    /// `Z` on qubit `q`, identity elsewhere.
    pub fn single_z(n: usize, q: usize) -> Self {
        Self { x: BitVec::zeros(n), z: BitVec::unit(n, q), negative: false }
    }

    pub fn single_x(n: usize, q: usize) -> Self {
        Self { x: BitVec::unit(n, q), z: BitVec::zeros(n), negative: false }
    }

    /// Parses `sign? [IXYZ]+`, optionally checking the qubit count.
    pub fn parse(text: &str, n_expected: Option<usize>) -> Result<Self, PauliError> {
        let mut chars = text.chars().peekable();
        let mut negative = false;
        let mut offset = 0;
        if let Some(&c) = chars.peek() {
            if matches!(c, '+' | '-' | '\u{2212}') {
                negative = c != '+';
                chars.next();
                offset = 1;
            }
        }
        let mut x = Vec::new();
        let mut z = Vec::new();
        for (i, c) in chars.enumerate() {
            let (xb, zb) = match c {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                ch => return Err(PauliError::InvalidChar { position: i + offset, ch }),
            };
            x.push(xb);
            z.push(zb);
        }
        if x.is_empty() {
            return Err(PauliError::Empty);
        }
        if let Some(expected) = n_expected {
            if expected != x.len() {
                return Err(PauliError::LengthMismatch { expected, found: x.len() });
            }
        }
        Ok(Self { x: BitVec::from_bools(&x), z: BitVec::from_bools(&z), negative })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &BitVec {
        &self.x
    }

    pub fn z(&self) -> &BitVec {
        &self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn negated(&self) -> Self {
        Self { negative: !self.negative, ..self.clone() }
    }

    pub fn with_sign(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }

    /// True for `±I…I`.
    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// True when the string contains only `I` and `Z`.
    pub fn is_diagonal(&self) -> bool {
        self.x.is_zero()
    }

    pub fn letter(&self, q: usize) -> char {
        match (self.x.get(q), self.z.get(q)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    pub fn weight(&self) -> usize {
        (0..self.n()).filter(|&q| self.x.get(q) || self.z.get(q)).count()
    }

    /// Number of `Y` letters.
    pub fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    /// The concatenated `(x | z)` symplectic vector, length `2n`.
    pub fn symplectic(&self) -> BitVec {
        let n = self.n();
        let mut v = BitVec::zeros(2 * n);
        for q in self.x.ones() {
            v.set(q, true);
        }
        for q in self.z.ones() {
            v.set(n + q, true);
        }
        v
    }

    /// Symplectic commutation test; signs play no role.
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool, PauliError> {
        if self.n() != other.n() {
            return Err(PauliError::LengthMismatch { expected: self.n(), found: other.n() });
        }
        Ok(self.x.dot(&other.z) == self.z.dot(&other.x))
    }

    /// Product `self · other` as `(i^k, P)` where `P` carries a real sign and
    /// `k` is 0 or 1.
    pub fn mul_with_phase(&self, other: &PauliString) -> Result<(u8, PauliString), PauliError> {
        if self.n() != other.n() {
            return Err(PauliError::LengthMismatch { expected: self.n(), found: other.n() });
        }
        let mut e: i32 = 2 * (self.negative as i32) + 2 * (other.negative as i32);
        for q in 0..self.n() {
            e += phase_exponent(self.x.get(q), self.z.get(q), other.x.get(q), other.z.get(q));
        }
        let e = e.rem_euclid(4);
        let product = PauliString { x: self.x.xor(&other.x), z: self.z.xor(&other.z), negative: e >= 2 };
        Ok(((e % 2) as u8, product))
    }

    /// Product of two commuting strings, which is again Hermitian.
    pub fn mul_commuting(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        match self.mul_with_phase(other)? {
            (0, p) => Ok(p),
            _ => Err(PauliError::NonHermitianProduct),
        }
    }

    /// `g · self · g†`.
    pub fn conjugated(&self, gate: &CliffordGate) -> Result<PauliString, PauliError> {
        let mut p = self.clone();
        p.conjugate_in_place(gate)?;
        Ok(p)
    }

    pub fn conjugate_in_place(&mut self, gate: &CliffordGate) -> Result<(), PauliError> {
        gate.validate(self.n())?;
        let (x, z) = (&mut self.x, &mut self.z);
        match *gate {
            CliffordGate::H(q) => {
                let (xq, zq) = (x.get(q), z.get(q));
                self.negative ^= xq && zq;
                x.set(q, zq);
                z.set(q, xq);
            }
            CliffordGate::S(q) => {
                let (xq, zq) = (x.get(q), z.get(q));
                self.negative ^= xq && zq;
                z.set(q, zq ^ xq);
            }
            CliffordGate::Cnot { control: c, target: t } => {
                let (xc, zc, xt, zt) = (x.get(c), z.get(c), x.get(t), z.get(t));
                self.negative ^= xc && zt && (xt == zc);
                x.set(t, xt ^ xc);
                z.set(c, zc ^ zt);
            }
            CliffordGate::Cz(a, b) => {
                let (xa, za, xb, zb) = (x.get(a), z.get(a), x.get(b), z.get(b));
                self.negative ^= xa && xb && (za != zb);
                z.set(a, za ^ xb);
                z.set(b, zb ^ xa);
            }
            CliffordGate::X(q) => self.negative ^= z.get(q),
            CliffordGate::Z(q) => self.negative ^= x.get(q),
        }
        Ok(())
    }

    /// `W · self · W†`, conjugating by the circuit's gates in order.
    pub fn conjugated_by(&self, circuit: &CliffordCircuit) -> Result<PauliString, PauliError> {
        if circuit.n() != self.n() {
            return Err(PauliError::LengthMismatch { expected: circuit.n(), found: self.n() });
        }
        let mut p = self.clone();
        for g in circuit.gates() {
            p.conjugate_in_place(g)?;
        }
        Ok(p)
    }
}

/// Returns `g p g†`.
pub fn conjugate(p: &PauliString, gate: &CliffordGate) -> Result<PauliString, PauliError> {
    p.conjugated(gate)
}

/// Returns `W p W†`.
pub fn conjugate_by_circuit(p: &PauliString, circuit: &CliffordCircuit) -> Result<PauliString, PauliError> {
    p.conjugated_by(circuit)
}

pub fn commutes(p: &PauliString, q: &PauliString) -> Result<bool, PauliError> {
    p.commutes_with(q)
}

/// Checks that all strings share a length and pairwise commute. The error
/// names the lexicographically first offending pair.
pub fn check_commuting_set(ops: &[PauliString]) -> Result<(), PauliError> {
    let first = ops.first().ok_or(PauliError::EmptySet)?;
    if let Some(bad) = ops.iter().find(|p| p.n() != first.n()) {
        return Err(PauliError::LengthMismatch { expected: first.n(), found: bad.n() });
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !ops[i].commutes_with(&ops[j])? {
                return Err(PauliError::NonCommuting { first: i, second: j });
            }
        }
    }
    Ok(())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        for q in 0..self.n() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PauliString::parse(s, None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
    X(usize),
    Z(usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> ([usize; 2], usize) {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::X(q) | CliffordGate::Z(q) => ([q, q], 1),
            CliffordGate::Cnot { control, target } => ([control, target], 2),
            CliffordGate::Cz(a, b) => ([a, b], 2),
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), PauliError> {
        let (qs, arity) = self.qubits();
        for &q in &qs[..arity] {
            if q >= n {
                return Err(PauliError::QubitOutOfRange { index: q, n });
            }
        }
        if arity == 2 && qs[0] == qs[1] {
            return Err(PauliError::RepeatedQubit(qs[0]));
        }
        Ok(())
    }

    /// Gate sequence implementing the inverse of this gate.
    pub fn inverse(&self) -> Vec<CliffordGate> {
        match *self {
            CliffordGate::S(q) => vec![CliffordGate::S(q); 3],
            g => vec![g],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliffordGate::H(_) => "H",
            CliffordGate::S(_) => "S",
            CliffordGate::Cnot { .. } => "CNOT",
            CliffordGate::Cz(..) => "CZ",
            CliffordGate::X(_) => "X",
            CliffordGate::Z(_) => "Z",
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::X(q) | CliffordGate::Z(q) => {
                write!(f, "{}({q})", self.name())
            }
            CliffordGate::Cnot { control, target } => write!(f, "CNOT({control},{target})"),
            CliffordGate::Cz(a, b) => write!(f, "CZ({a},{b})"),
        }
    }
}

/// Ordered gate list on `n` qubits. The first gate is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        Self { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: Vec<CliffordGate>) -> Result<Self, PauliError> {
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Self { n, gates })
    }

    pub fn push(&mut self, gate: CliffordGate) -> Result<(), PauliError> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Circuit for `W†`.
    pub fn inverse(&self) -> CliffordCircuit {
        let gates = self.gates.iter().rev().flat_map(CliffordGate::inverse).collect();
        CliffordCircuit { n: self.n, gates }
    }
}
