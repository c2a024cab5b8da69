//! Stabilizer tableau (destabilizers and stabilizers with sign bits) and the
//! computational-basis support of the state it represents.
//!
//! Rows `0..n` hold the destabilizers and rows `n..2n` the stabilizers. Each
//! row is a signed Pauli string, so gate application is conjugation of every
//! row.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::{CliffordCircuit, CliffordGate, PauliError, PauliString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },
    #[error("tableau needs at least one qubit")]
    Empty,
}

#[derive(Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    rows: Vec<PauliString>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: bool,
    pub deterministic: bool,
}

/// Affine description `{R z ⊕ t}` of the basis states carrying amplitude.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportDescriptor {
    /// `n × r` generator matrix of full column rank.
    pub generators: BitMatrix,
    /// A basis state with nonzero amplitude.
    pub offset: BitVec,
    pub rank: usize,
}

impl SupportDescriptor {
    pub fn n(&self) -> usize {
        self.offset.len()
    }

    /// All `2^r` support points, in Gray-code order starting at `offset`.
    pub fn points(&self) -> Vec<BitVec> {
        let cols: Vec<BitVec> = (0..self.rank).map(|j| self.generators.column(j)).collect();
        let mut current = self.offset.clone();
        let mut out = Vec::with_capacity(1 << self.rank);
        out.push(current.clone());
        for k in 1u64..(1u64 << self.rank) {
            current.xor_assign(&cols[k.trailing_zeros() as usize]);
            out.push(current.clone());
        }
        out
    }

    pub fn contains(&self, u: &BitVec) -> bool {
        let shifted = u.xor(&self.offset);
        self.generators.transpose().in_row_span(&shifted).unwrap_or(false)
    }
}

impl StabilizerTableau {
    /// Tableau of `|0…0⟩`: destabilizers `X_q`, stabilizers `Z_q`.
    pub fn new(n: usize) -> Result<Self, TableauError> {
        if n == 0 {
            return Err(TableauError::Empty);
        }
        let rows =
            (0..n).map(|q| PauliString::single_x(n, q)).chain((0..n).map(|q| PauliString::single_z(n, q))).collect();
        Ok(Self { n, rows })
    }

    pub fn from_circuit(circuit: &CliffordCircuit) -> Result<Self, TableauError> {
        let mut tab = Self::new(circuit.n())?;
        for g in circuit.gates() {
            tab.apply(g)?;
        }
        Ok(tab)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn destabilizer(&self, i: usize) -> &PauliString {
        &self.rows[i]
    }

    pub fn stabilizer(&self, i: usize) -> &PauliString {
        &self.rows[self.n + i]
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.rows[self.n..]
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.rows[..self.n]
    }

    pub fn apply(&mut self, gate: &CliffordGate) -> Result<(), TableauError> {
        gate.validate(self.n)?;
        for row in &mut self.rows {
            row.conjugate_in_place(gate)?;
        }
        Ok(())
    }

    /// The `n × n` X block of the stabilizer half.
    pub fn stabilizer_x_block(&self) -> BitMatrix {
        BitMatrix::from_rows(self.n, self.stabilizers().iter().map(|p| p.x().clone()).collect())
            .expect("stabilizer rows have n columns")
    }

    /// Row `h` becomes `row_i · row_h`; any imaginary phase is dropped, which
    /// only happens on destabilizer rows.
    fn rowsum(&mut self, h: usize, i: usize) {
        let (_, product) = self.rows[i].mul_with_phase(&self.rows[h]).expect("rows share n");
        self.rows[h] = product;
    }

    /// Measures `Z_q`. A random outcome takes `forced` when given, otherwise a
    /// fair coin from `rng`.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        q: usize,
        forced: Option<bool>,
        rng: &mut R,
    ) -> Result<Measurement, TableauError> {
        self.measure_with(q, || forced.unwrap_or_else(|| rng.random()))
    }

    pub fn measure_forced(&mut self, q: usize, outcome: bool) -> Result<Measurement, TableauError> {
        self.measure_with(q, || outcome)
    }

    fn measure_with(&mut self, q: usize, pick: impl FnOnce() -> bool) -> Result<Measurement, TableauError> {
        let n = self.n;
        if q >= n {
            return Err(TableauError::QubitOutOfRange { index: q, n });
        }
        // Smallest stabilizer row anticommuting with Z_q.
        if let Some(p) = (n..2 * n).find(|&i| self.rows[i].x().get(q)) {
            for i in 0..2 * n {
                if i != p && self.rows[i].x().get(q) {
                    self.rowsum(i, p);
                }
            }
            self.rows[p - n] = self.rows[p].clone();
            let outcome = pick();
            self.rows[p] = PauliString::single_z(n, q).with_sign(outcome);
            return Ok(Measurement { outcome, deterministic: false });
        }
        let mut scratch = PauliString::identity(n);
        for i in 0..n {
            if self.rows[i].x().get(q) {
                let (_, product) = self.rows[i + n].mul_with_phase(&scratch).expect("rows share n");
                scratch = product;
            }
        }
        Ok(Measurement { outcome: scratch.is_negative(), deterministic: true })
    }

    /// Measures every qubit in order on a copy; `pick(q)` chooses the outcome
    /// whenever the measurement of qubit `q` is random. Returns the outcome
    /// string and the qubits whose measurement was random.
    pub fn measure_all_with(&self, mut pick: impl FnMut(usize) -> bool) -> (BitVec, Vec<usize>) {
        let mut tab = self.clone();
        let mut outcomes = BitVec::zeros(self.n);
        let mut random = Vec::new();
        for q in 0..self.n {
            let m = tab.measure_with(q, || pick(q)).expect("q < n");
            outcomes.set(q, m.outcome);
            if !m.deterministic {
                random.push(q);
            }
        }
        (outcomes, random)
    }

    /// A basis state with nonzero amplitude, found by forcing every random
    /// measurement to 0.
    pub fn sample_basis_state(&self) -> BitVec {
        self.measure_all_with(|_| false).0
    }

    /// Generators, offset and dimension of the support coset.
    pub fn extract_support(&self) -> SupportDescriptor {
        let xbar = self.stabilizer_x_block();
        let basis = xbar.row_space_basis();
        let rank = basis.rows();
        SupportDescriptor { generators: basis.transpose(), offset: self.sample_basis_state(), rank }
    }

    /// Checks commutation, the destabilizer pairing and full symplectic rank.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n;
        for i in 0..2 * n {
            for j in i + 1..2 * n {
                let commute = self.rows[i].commutes_with(&self.rows[j]).map_err(|e| e.to_string())?;
                let paired = i < n && j == i + n;
                if commute == paired {
                    return Err(format!("rows {i} and {j}: commute = {commute}, expected {}", !paired));
                }
            }
        }
        let full = BitMatrix::from_rows(2 * n, self.rows.iter().map(PauliString::symplectic).collect())
            .map_err(|e| e.to_string())?;
        let rank = full.rank();
        if rank != 2 * n {
            return Err(format!("symplectic rank {rank}, expected {}", 2 * n));
        }
        Ok(())
    }

    fn dump_rows(&self, rows: &[PauliString], f: &mut impl fmt::Write) -> fmt::Result {
        for row in rows {
            let bits = |v: &BitVec| v.iter().map(|b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(" ");
            writeln!(f, "{} | {} | {}", bits(row.x()), bits(row.z()), row.is_negative() as u8)?;
        }
        Ok(())
    }

    /// Full `2n × (2n+1)` array in `X | Z | S` block layout.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        self.dump_rows(&self.rows, &mut s).expect("writing to a String");
        s
    }

    /// The stabilizer half only.
    pub fn dump_stabilizers(&self) -> String {
        let mut s = String::new();
        self.dump_rows(self.stabilizers(), &mut s).expect("writing to a String");
        s
    }
}

impl fmt::Debug for StabilizerTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "StabilizerTableau(n = {})", self.n)?;
        f.write_str(&self.dump())
    }
}

pub fn tableau_from_circuit(circuit: &CliffordCircuit) -> Result<StabilizerTableau, TableauError> {
    StabilizerTableau::from_circuit(circuit)
}

pub fn extract_support(tab: &StabilizerTableau) -> SupportDescriptor {
    tab.extract_support()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::CliffordGate::*;

    fn circuit(n: usize, gates: Vec<CliffordGate>) -> CliffordCircuit {
        CliffordCircuit::from_gates(n, gates).unwrap()
    }

    #[test]
    fn zero_state_tableau() {
        let tab = StabilizerTableau::new(2).unwrap();
        assert_eq!(tab.dump(), "1 0 | 0 0 | 0\n0 1 | 0 0 | 0\n0 0 | 1 0 | 0\n0 0 | 0 1 | 0\n");
        tab.check_invariants().unwrap();
        assert!(StabilizerTableau::new(0).is_err());
    }

    #[test]
    fn hadamard_gives_plus_state() {
        let tab = tableau_from_circuit(&circuit(1, vec![H(0)])).unwrap();
        assert_eq!(tab.stabilizer(0), &"X".parse::<PauliString>().unwrap());
        assert_eq!(tab.destabilizer(0), &"Z".parse::<PauliString>().unwrap());
    }

    #[test]
    fn measurements() {
        let mut zero = StabilizerTableau::new(1).unwrap();
        assert_eq!(zero.measure_forced(0, true).unwrap(), Measurement { outcome: false, deterministic: true });

        let mut plus = tableau_from_circuit(&circuit(1, vec![H(0)])).unwrap();
        let m = plus.measure_forced(0, false).unwrap();
        assert_eq!(m, Measurement { outcome: false, deterministic: false });
        assert_eq!(plus.stabilizer(0), &"Z".parse::<PauliString>().unwrap());
        plus.check_invariants().unwrap();

        let mut one = tableau_from_circuit(&circuit(1, vec![X(0)])).unwrap();
        assert_eq!(one.measure_forced(0, false).unwrap(), Measurement { outcome: true, deterministic: true });
        assert!(one.measure_forced(1, false).is_err());
    }

    #[test]
    fn minus_state_samples_zero() {
        let tab = tableau_from_circuit(&circuit(1, vec![H(0), Z(0)])).unwrap();
        assert_eq!(tab.sample_basis_state().to_string(), "0");
    }

    #[test]
    fn support_of_simple_states() {
        let zero = StabilizerTableau::new(3).unwrap().extract_support();
        assert_eq!(zero.rank, 0);
        assert_eq!(zero.generators.cols(), 0);
        assert!(zero.offset.is_zero());

        let hh = tableau_from_circuit(&circuit(2, vec![H(0), H(1)])).unwrap().extract_support();
        assert_eq!(hh.rank, 2);
        assert_eq!(hh.generators.rank(), 2);
        assert_eq!(hh.offset.to_string(), "00");
        assert_eq!(hh.points().len(), 4);
    }

    #[test]
    fn bell_state_support() {
        let tab = tableau_from_circuit(&circuit(2, vec![H(0), Cnot { control: 0, target: 1 }, X(1)])).unwrap();
        let sup = tab.extract_support();
        assert_eq!(sup.rank, 1);
        let mut pts: Vec<String> = sup.points().iter().map(|p| p.to_string()).collect();
        pts.sort();
        assert_eq!(pts, ["01", "10"]);
    }

    #[test]
    fn five_qubit_product_state_matches_worked_example() {
        // |+ + + 0 +⟩ has the same stabilizer group as the printed example
        // tableau, whose X̄ row space is span{e1, e2, e3, e5}.
        let tab = tableau_from_circuit(&circuit(5, vec![H(0), H(1), H(2), H(4)])).unwrap();
        let sup = tab.extract_support();
        assert_eq!(sup.rank, 4);
        let expected = BitMatrix::parse_rows(4, &["1000", "0100", "0010", "0000", "0001"]).unwrap();
        assert_eq!(sup.generators, expected);
        assert_eq!(sup.offset.to_string(), "00000");
        let (u, random) = tab.measure_all_with(|_| false);
        assert_eq!(u.to_string(), "00000");
        assert_eq!(random, vec![0, 1, 2, 4]);
    }
}
