//! Clifford synthesis that maps a commuting set of Pauli strings onto signed
//! `{I, Z}` strings.

use thiserror::Error;

use crate::gf2::{BitMatrix, BitVec};
use crate::pauli::{check_commuting_set, CliffordCircuit, CliffordGate, PauliError, PauliString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagonalizeError {
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("operator {0} is a multiple of the identity")]
    IdentityOperator(usize),
}

/// Result of diagonalization: `W H_j W† = (-1)^{s_j} Z^{A_j}` for every `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalizedSet {
    pub circuit: CliffordCircuit,
    /// `N × n`; row `j` is the Z mask of the diagonal image of operator `j`.
    pub a: BitMatrix,
    /// Bit `j` set iff the image of operator `j` carries sign −1.
    pub signs: BitVec,
}

impl DiagonalizedSet {
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn len(&self) -> usize {
        self.a.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.a.rows() == 0
    }

    /// The diagonal image of operator `j` as a signed Pauli string.
    pub fn diagonal_operator(&self, j: usize) -> PauliString {
        PauliString::new(BitVec::zeros(self.n()), self.a.row(j).clone(), self.signs.get(j))
            .expect("A has n >= 1 columns")
    }
}

/// First operator whose conjugate disagrees with the recorded encoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operator {index}: {reason}")]
pub struct DiagonalizationMismatch {
    pub index: usize,
    pub reason: String,
}

/// Indices of a maximal symplectically independent subset, scanned in order.
fn independent_subset(ops: &[PauliString]) -> Vec<usize> {
    let width = 2 * ops[0].n();
    // Reduced rows keyed by their leading bit.
    let mut reduced: Vec<(usize, BitVec)> = Vec::new();
    let mut chosen = Vec::new();
    for (j, op) in ops.iter().enumerate() {
        let mut v = op.symplectic();
        for (lead, row) in &reduced {
            if v.get(*lead) {
                v.xor_assign(row);
            }
        }
        if let Some(lead) = v.first_one() {
            for (_, row) in reduced.iter_mut() {
                if row.get(lead) {
                    row.xor_assign(&v);
                }
            }
            reduced.push((lead, v));
            chosen.push(j);
        }
        if reduced.len() == width {
            break;
        }
    }
    chosen
}

struct Synthesis {
    circuit: CliffordCircuit,
    generators: Vec<PauliString>,
}

impl Synthesis {
    fn push(&mut self, gate: CliffordGate) {
        self.circuit.push(gate).expect("synthesized gates act on valid qubits");
        for g in &mut self.generators {
            g.conjugate_in_place(&gate).expect("validated gate");
        }
    }
}

/// Finds `W` with every `W H_j W†` diagonal, and reads off `A` and the signs.
///
/// The independent generators are reduced one at a time to `±Z_c` on a fresh
/// pivot qubit `c`: Hadamard to expose an X component, CNOTs to confine it to
/// `c`, CZs to strip the remaining Z components, then S (if the letter at `c`
/// is Y) and a final Hadamard. Gates only touch non-pivot qubits, so earlier
/// generators stay fixed. At most `n (2n + 1)` gates are emitted.
pub fn simultaneous_diagonalize(ops: &[PauliString]) -> Result<DiagonalizedSet, DiagonalizeError> {
    check_commuting_set(ops)?;
    if let Some(j) = ops.iter().position(PauliString::is_identity) {
        return Err(DiagonalizeError::IdentityOperator(j));
    }
    let n = ops[0].n();
    let generators = independent_subset(ops).into_iter().map(|j| ops[j].clone()).collect();
    let mut syn = Synthesis { circuit: CliffordCircuit::new(n), generators };
    let mut pivot_of: Vec<Option<usize>> = vec![None; n];

    for i in 0..syn.generators.len() {
        // Generator i commutes with each earlier ±Z_c, so its X part vanishes
        // on pivots; multiplying by those generators clears the Z part too.
        for (c, pivot) in pivot_of.iter().enumerate() {
            if let Some(j) = *pivot {
                if syn.generators[i].z().get(c) {
                    syn.generators[i] = syn.generators[i].mul_commuting(&syn.generators[j])?;
                }
            }
        }
        let free: Vec<usize> = (0..n).filter(|&c| pivot_of[c].is_none()).collect();
        let g = &syn.generators[i];
        if g.x().is_zero() && g.z().count_ones() == 1 {
            let c = g.z().first_one().expect("weight one");
            pivot_of[c] = Some(i);
            continue;
        }
        let c = match free.iter().copied().find(|&c| g.x().get(c)) {
            Some(c) => c,
            None => {
                let c = free
                    .iter()
                    .copied()
                    .find(|&c| g.z().get(c))
                    .expect("independent generator has support off the pivots");
                syn.push(CliffordGate::H(c));
                c
            }
        };
        for &d in &free {
            if d != c && syn.generators[i].x().get(d) {
                syn.push(CliffordGate::Cnot { control: c, target: d });
            }
        }
        for &d in &free {
            if d != c && syn.generators[i].z().get(d) {
                syn.push(CliffordGate::Cz(c, d));
            }
        }
        if syn.generators[i].z().get(c) {
            syn.push(CliffordGate::S(c));
        }
        syn.push(CliffordGate::H(c));
        debug_assert!(syn.generators[i].is_diagonal());
        pivot_of[c] = Some(i);
    }

    let circuit = syn.circuit;
    let mut rows = Vec::with_capacity(ops.len());
    let mut signs = BitVec::zeros(ops.len());
    for (j, op) in ops.iter().enumerate() {
        let image = op.conjugated_by(&circuit)?;
        debug_assert!(image.is_diagonal(), "operator {j} not diagonalized");
        signs.set(j, image.is_negative());
        rows.push(image.z().clone());
    }
    let a = BitMatrix::from_rows(n, rows).expect("rows have n columns");
    Ok(DiagonalizedSet { circuit, a, signs })
}

/// Re-derives every `W H_j W†` and compares it with the stored row and sign.
pub fn verify_diagonalization(ops: &[PauliString], result: &DiagonalizedSet) -> Result<(), DiagonalizationMismatch> {
    let fail = |index, reason: String| Err(DiagonalizationMismatch { index, reason });
    if ops.len() != result.len() || result.signs.len() != ops.len() {
        return fail(0, format!("expected {} encoded operators, found {}", ops.len(), result.len()));
    }
    for (j, op) in ops.iter().enumerate() {
        let image = match op.conjugated_by(&result.circuit) {
            Ok(p) => p,
            Err(e) => return fail(j, e.to_string()),
        };
        if !image.is_diagonal() {
            return fail(j, format!("image {image} has X components"));
        }
        if image.z() != result.a.row(j) {
            return fail(j, format!("Z mask {} differs from A row {}", image.z(), result.a.row(j)));
        }
        if image.is_negative() != result.signs.get(j) {
            return fail(j, format!("sign of {image} differs from recorded sign"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ops(list: &[&str]) -> Vec<PauliString> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn already_diagonal() {
        let d = simultaneous_diagonalize(&ops(&["Z"])).unwrap();
        assert!(d.circuit.is_empty());
        assert_eq!(d.a, BitMatrix::identity(1));
        assert!(d.signs.is_zero());
    }

    #[test]
    fn single_x() {
        let set = ops(&["X"]);
        let d = simultaneous_diagonalize(&set).unwrap();
        assert_eq!(d.a, BitMatrix::identity(1));
        assert!(d.signs.is_zero());
        verify_diagonalization(&set, &d).unwrap();
    }

    #[test]
    fn worked_example_set() {
        let set = ops(&["-XXYYY", "IYIIX", "-IZXXZ", "XYIZI", "-XZXYY"]);
        let d = simultaneous_diagonalize(&set).unwrap();
        verify_diagonalization(&set, &d).unwrap();
        assert!(d.circuit.len() <= 5 * 11);
        for op in &set {
            assert!(op.conjugated_by(&d.circuit).unwrap().is_diagonal());
        }
    }

    #[test]
    fn dependent_and_signed_members() {
        let set = ops(&["XX", "ZZ", "-YY", "XX"]);
        let d = simultaneous_diagonalize(&set).unwrap();
        verify_diagonalization(&set, &d).unwrap();
        // XX · ZZ = -YY, so the third row is the XOR of the first two.
        assert_eq!(d.a.row(2), &d.a.row(0).xor(d.a.row(1)));
        assert_eq!(d.a.row(3), d.a.row(0));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            simultaneous_diagonalize(&ops(&["XX", "ZI"])),
            Err(DiagonalizeError::Pauli(PauliError::NonCommuting { first: 0, second: 1 }))
        );
        assert_eq!(simultaneous_diagonalize(&ops(&["ZZ", "-II"])), Err(DiagonalizeError::IdentityOperator(1)));
        assert!(simultaneous_diagonalize(&[]).is_err());
    }

    #[test]
    fn tampering_is_detected() {
        let set = ops(&["-XXYYY", "IYIIX", "-IZXXZ", "XYIZI", "-XZXYY"]);
        let mut d = simultaneous_diagonalize(&set).unwrap();
        d.a.row_mut(3).flip(2);
        assert_eq!(verify_diagonalization(&set, &d).unwrap_err().index, 3);

        let mut d = simultaneous_diagonalize(&set).unwrap();
        d.signs.flip(1);
        assert_eq!(verify_diagonalization(&set, &d).unwrap_err().index, 1);
    }
}
