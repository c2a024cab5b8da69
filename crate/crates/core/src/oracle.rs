//! Dense brute-force reference for small qubit counts.
//!
//! Everything here works on explicit state vectors and signed-permutation
//! Pauli matrices, independently of the tableau and GF(2) machinery, so it
//! can be used to check those paths.
//!
//! Basis index convention: qubit `q` (the `q`-th letter of a Pauli string) is
//! bit `n - 1 - q` of the index, so index `x` written in binary reads like the
//! string.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::diagonalize::{verify_diagonalization, DiagonalizedSet};
use crate::distribution::{determinant, dyadic_from_f64, DistributionError, KDistribution, DEFAULT_SUPPORT_CAP};
use crate::gf2::BitVec;
use crate::lattice::{exact_frame_potential_from_support, LatticeError};
use crate::pauli::{CliffordCircuit, CliffordGate, PauliError, PauliString};
use crate::pipeline::Analysis;
use crate::tableau::StabilizerTableau;

/// Largest qubit count the dense oracle accepts.
pub const MAX_ORACLE_QUBITS: usize = 10;
/// Largest operator count for the projector-based law of `K`.
pub const MAX_ORACLE_OPERATORS: usize = 14;
/// Independent random streams used by the Monte-Carlo estimator.
pub const MC_STREAMS: u64 = 64;

const AMPLITUDE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("dense oracle limited to {max} qubits, got {n}")]
    QubitGuard { n: usize, max: usize },
    #[error("dense oracle limited to {max} operators, got {count}")]
    OperatorGuard { count: usize, max: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("conjugated operator column {column} is not a phase times a basis vector")]
    NotMonomial { column: usize },
    #[error("weight {0} is not a dyadic rational")]
    NonDyadic(f64),
    #[error("operator {0} is not diagonal with ±1 entries after conjugation")]
    NotDiagonal(usize),
    #[error("parameter vector has length {found}, expected {expected}")]
    ParameterLength { expected: usize, found: usize },
    #[error("at least one sample is required")]
    ZeroSamples,
    #[error("empty operator list")]
    NoOperators,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

fn guard(n: usize) -> Result<(), OracleError> {
    if n > MAX_ORACLE_QUBITS {
        return Err(OracleError::QubitGuard { n, max: MAX_ORACLE_QUBITS });
    }
    Ok(())
}

fn mask(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

/// Basis index of a bit string under the oracle's convention.
pub fn basis_index(u: &BitVec) -> usize {
    let n = u.len();
    u.ones().map(|q| mask(n, q)).sum()
}

pub fn basis_vector(n: usize, x: usize) -> BitVec {
    BitVec::from_bools(&(0..n).map(|q| x & mask(n, q) != 0).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn zero(n: usize) -> Result<Self, OracleError> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, x: usize) -> Result<Self, OracleError> {
        guard(n)?;
        let mut amplitudes = vec![Complex64::zero(); 1 << n];
        amplitudes[x] = Complex64::one();
        Ok(Self { n, amplitudes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn inner(&self, other: &DenseState) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_gate(&mut self, gate: &CliffordGate) -> Result<(), OracleError> {
        gate.validate(self.n)?;
        let n = self.n;
        let amps = &mut self.amplitudes;
        match *gate {
            CliffordGate::H(q) => {
                let m = mask(n, q);
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    let (a, b) = (amps[i], amps[i | m]);
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | m] = (a - b) * FRAC_1_SQRT_2;
                }
            }
            CliffordGate::S(q) => {
                let m = mask(n, q);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a *= Complex64::i();
                    }
                }
            }
            CliffordGate::Cnot { control, target } => {
                let (mc, mt) = (mask(n, control), mask(n, target));
                for i in 0..amps.len() {
                    if i & mc != 0 && i & mt == 0 {
                        amps.swap(i, i | mt);
                    }
                }
            }
            CliffordGate::Cz(a, b) => {
                let m = mask(n, a) | mask(n, b);
                for (i, amp) in amps.iter_mut().enumerate() {
                    if i & m == m {
                        *amp = -*amp;
                    }
                }
            }
            CliffordGate::X(q) => {
                let m = mask(n, q);
                for i in (0..amps.len()).filter(|i| i & m == 0) {
                    amps.swap(i, i | m);
                }
            }
            CliffordGate::Z(q) => {
                let m = mask(n, q);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & m != 0 {
                        *a = -*a;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, circuit: &CliffordCircuit) -> Result<(), OracleError> {
        for g in circuit.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }
}

/// `W|0…0⟩` by direct state-vector simulation.
pub fn dense_state_from_circuit(circuit: &CliffordCircuit) -> Result<DenseState, OracleError> {
    let mut s = DenseState::zero(circuit.n())?;
    s.apply_circuit(circuit)?;
    Ok(s)
}

pub fn amplitudes_squared(state: &DenseState) -> Vec<f64> {
    state.amplitudes.iter().map(Complex64::norm_sqr).collect()
}

/// Pauli matrix stored column by column: basis state `x` maps to
/// `i^phase[x] |target[x]⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePauli {
    n: usize,
    targets: Vec<usize>,
    phases: Vec<u8>,
}

impl DensePauli {
    pub fn from_pauli(p: &PauliString) -> Result<Self, OracleError> {
        let n = p.n();
        guard(n)?;
        let xmask = basis_index(p.x());
        let zmask = basis_index(p.z());
        let base = (p.y_count() + if p.is_negative() { 2 } else { 0 }) % 4;
        let (targets, phases) = (0..1usize << n)
            .map(|x| {
                let parity = (x & zmask).count_ones() as usize % 2;
                (x ^ xmask, ((base + 2 * parity) % 4) as u8)
            })
            .unzip();
        Ok(Self { n, targets, phases })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_diagonal(&self) -> bool {
        self.targets.iter().enumerate().all(|(x, &t)| x == t)
    }

    /// Diagonal entries when the matrix is diagonal with real entries.
    pub fn real_diagonal(&self) -> Option<Vec<i8>> {
        if !self.is_diagonal() {
            return None;
        }
        self.phases
            .iter()
            .map(|&p| match p {
                0 => Some(1),
                2 => Some(-1),
                _ => None,
            })
            .collect()
    }

    pub fn apply(&self, state: &DenseState) -> DenseState {
        let mut out = vec![Complex64::zero(); state.amplitudes.len()];
        for (x, amp) in state.amplitudes.iter().enumerate() {
            out[self.targets[x]] += phase(self.phases[x]) * amp;
        }
        DenseState { n: state.n, amplitudes: out }
    }

    /// `⟨ψ|P|ψ⟩`, which is real for Hermitian `P`.
    pub fn expectation(&self, state: &DenseState) -> f64 {
        state.inner(&self.apply(state)).re
    }
}

fn phase(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn phase_of(z: Complex64) -> Option<u8> {
    [0u8, 1, 2, 3].into_iter().find(|&k| (z - phase(k)).norm() < AMPLITUDE_TOL)
}

/// `W P W†` computed column by column from dense gate actions.
pub fn dense_conjugation_check(op: &PauliString, circuit: &CliffordCircuit) -> Result<DensePauli, OracleError> {
    let n = op.n();
    guard(n)?;
    if circuit.n() != n {
        return Err(PauliError::LengthMismatch { expected: circuit.n(), found: n }.into());
    }
    let p = DensePauli::from_pauli(op)?;
    let inverse = circuit.inverse();
    let mut targets = Vec::with_capacity(1 << n);
    let mut phases = Vec::with_capacity(1 << n);
    for x in 0..1usize << n {
        let mut s = DenseState::basis(n, x)?;
        s.apply_circuit(&inverse)?;
        let mut s = p.apply(&s);
        s.apply_circuit(circuit)?;
        let nonzero: Vec<usize> = (0..s.amplitudes.len()).filter(|&y| s.amplitudes[y].norm() > AMPLITUDE_TOL).collect();
        let [y] = nonzero[..] else {
            return Err(OracleError::NotMonomial { column: x });
        };
        let k = phase_of(s.amplitudes[y]).ok_or(OracleError::NotMonomial { column: x })?;
        targets.push(y);
        phases.push(k);
    }
    Ok(DensePauli { n, targets, phases })
}

/// Law of `K` by tallying `|⟨ψ0|x⟩|²` against the dense diagonals of each
/// `W H_j W†`.
pub fn brute_pmf_k(
    ops: &[PauliString],
    diag: &DiagonalizedSet,
    state: &DenseState,
) -> Result<BTreeMap<Vec<i8>, BigRational>, OracleError> {
    let n = state.n;
    guard(n)?;
    let diagonals = ops
        .iter()
        .enumerate()
        .map(|(j, op)| dense_conjugation_check(op, &diag.circuit)?.real_diagonal().ok_or(OracleError::NotDiagonal(j)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut pmf: BTreeMap<Vec<i8>, BigRational> = BTreeMap::new();
    for (x, w) in amplitudes_squared(state).into_iter().enumerate() {
        if w < AMPLITUDE_TOL {
            continue;
        }
        let weight = dyadic_from_f64(w, n as u32, AMPLITUDE_TOL).ok_or(OracleError::NonDyadic(w))?;
        let k: Vec<i8> = diagonals.iter().map(|d| d[x]).collect();
        *pmf.entry(k).or_insert_with(BigRational::zero) += weight;
    }
    Ok(pmf)
}

/// Law of `K` without any diagonalizing circuit:
/// `P(K = k) = ‖∏_j (I + k_j H_j)/2 |0…0⟩‖²`.
pub fn projector_pmf_k(ops: &[PauliString]) -> Result<BTreeMap<Vec<i8>, BigRational>, OracleError> {
    let first = ops.first().ok_or(OracleError::NoOperators)?;
    let n = first.n();
    guard(n)?;
    if ops.len() > MAX_ORACLE_OPERATORS {
        return Err(OracleError::OperatorGuard { count: ops.len(), max: MAX_ORACLE_OPERATORS });
    }
    let dense = ops.iter().map(DensePauli::from_pauli).collect::<Result<Vec<_>, _>>()?;
    let zero = DenseState::zero(n)?;
    let mut pmf = BTreeMap::new();
    for b in 0..1u64 << ops.len() {
        let k: Vec<i8> = (0..ops.len()).map(|j| if b >> j & 1 == 1 { -1 } else { 1 }).collect();
        let mut s = zero.clone();
        for (p, &kj) in dense.iter().zip(&k) {
            let ps = p.apply(&s);
            for (a, pa) in s.amplitudes.iter_mut().zip(&ps.amplitudes) {
                *a = (*a + pa * kj as f64) * 0.5;
            }
        }
        let w = s.norm_sqr();
        if w > AMPLITUDE_TOL {
            let weight = dyadic_from_f64(w, 2 * n as u32, AMPLITUDE_TOL).ok_or(OracleError::NonDyadic(w))?;
            pmf.insert(k, weight);
        }
    }
    Ok(pmf)
}

/// Mean vector and covariance of a uniform law on `points`.
pub fn enumerated_moments(points: &[Vec<i8>]) -> (Vec<BigRational>, Vec<Vec<BigRational>>) {
    let count = BigRational::from_integer(BigInt::from(points.len()));
    let dim = points.first().map_or(0, Vec::len);
    let sum =
        |f: &dyn Fn(&Vec<i8>) -> i64| BigRational::from_integer(points.iter().map(f).sum::<i64>().into()) / &count;
    let mean: Vec<BigRational> = (0..dim).map(|j| sum(&|p| p[j] as i64)).collect();
    let cov = (0..dim)
        .map(|i| (0..dim).map(|j| sum(&|p| p[i] as i64 * p[j] as i64) - &mean[i] * &mean[j]).collect())
        .collect();
    (mean, cov)
}

/// `⟨ψ0|Λ_i|ψ0⟩` and `⟨ψ0|Λ_i Λ_j|ψ0⟩ − ⟨ψ0|Λ_i|ψ0⟩⟨ψ0|Λ_j|ψ0⟩` from dense
/// matrices.
pub fn dense_moments(diag: &DiagonalizedSet, state: &DenseState) -> Result<(Vec<f64>, Vec<Vec<f64>>), OracleError> {
    let lambdas =
        (0..diag.len()).map(|j| DensePauli::from_pauli(&diag.diagonal_operator(j))).collect::<Result<Vec<_>, _>>()?;
    let images: Vec<DenseState> = lambdas.iter().map(|l| l.apply(state)).collect();
    let mean: Vec<f64> = images.iter().map(|s| state.inner(s).re).collect();
    let cov = (0..images.len())
        .map(|i| (0..images.len()).map(|j| images[i].inner(&images[j]).re - mean[i] * mean[j]).collect())
        .collect();
    Ok((mean, cov))
}

/// `∏_j exp(iθ_j H_j) |0…0⟩`, with `exp(iθP) = cos θ I + i sin θ P`.
fn evolve(dense: &[DensePauli], theta: &[f64], n: usize) -> Result<DenseState, OracleError> {
    let mut s = DenseState::zero(n)?;
    for (p, &angle) in dense.iter().zip(theta).rev() {
        let ps = p.apply(&s);
        let (c, si) = (angle.cos(), Complex64::new(0.0, angle.sin()));
        for (a, pa) in s.amplitudes.iter_mut().zip(&ps.amplitudes) {
            *a = *a * c + pa * si;
        }
    }
    Ok(s)
}

fn check_params(ops: &[PauliString], theta: &[f64]) -> Result<usize, OracleError> {
    let n = ops.first().ok_or(OracleError::NoOperators)?.n();
    guard(n)?;
    if theta.len() != ops.len() {
        return Err(OracleError::ParameterLength { expected: ops.len(), found: theta.len() });
    }
    Ok(n)
}

fn dense_ops(ops: &[PauliString]) -> Result<Vec<DensePauli>, OracleError> {
    ops.iter().map(DensePauli::from_pauli).collect()
}

/// `|⟨0|U(θ)† U(θ')|0⟩|²` by state-vector evolution.
pub fn fidelity(ops: &[PauliString], theta: &[f64], theta_prime: &[f64]) -> Result<f64, OracleError> {
    let n = check_params(ops, theta)?;
    check_params(ops, theta_prime)?;
    let dense = dense_ops(ops)?;
    fidelity_dense(&dense, theta, theta_prime, n)
}

fn fidelity_dense(dense: &[DensePauli], theta: &[f64], theta_prime: &[f64], n: usize) -> Result<f64, OracleError> {
    let a = evolve(dense, theta, n)?;
    let b = evolve(dense, theta_prime, n)?;
    Ok(a.inner(&b).norm_sqr().min(1.0))
}

/// Monte-Carlo estimate of the frame potential from uniform parameter pairs
/// in `[-π, π]^{2N}`. Returns the estimate and its standard error.
///
/// Samples are split over [`MC_STREAMS`] ChaCha8 streams seeded with `seed`,
/// stream `k` drawing its share in order, so the result is independent of the
/// thread count.
pub fn mc_frame_potential(ops: &[PauliString], t: u32, samples: u64, seed: u64) -> Result<(f64, f64), OracleError> {
    if samples == 0 {
        return Err(OracleError::ZeroSamples);
    }
    let n = ops.first().ok_or(OracleError::NoOperators)?.n();
    guard(n)?;
    let dense = dense_ops(ops)?;
    let count = ops.len();
    let partials: Vec<(f64, f64)> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|k| {
            let share = samples / MC_STREAMS + u64::from(k < samples % MC_STREAMS);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let mut theta = vec![0.0; count];
            let mut theta_prime = vec![0.0; count];
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..share {
                for v in theta.iter_mut().chain(theta_prime.iter_mut()) {
                    *v = rng.random_range(-PI..PI);
                }
                let f = fidelity_dense(&dense, &theta, &theta_prime, n).expect("guard checked").powi(t as i32);
                sum += f;
                sum_sq += f * f;
            }
            (sum, sum_sq)
        })
        .collect();
    let (sum, sum_sq) = partials.iter().fold((0.0, 0.0), |(a, b), (s, q)| (a + s, b + q));
    let m = samples as f64;
    let mean = sum / m;
    let var = if samples > 1 { ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
    Ok((mean, (var / m).sqrt()))
}

/// A random circuit drawn uniformly from the gate set on random qubits.
pub fn random_clifford_circuit<R: Rng + ?Sized>(rng: &mut R, n: usize, gates: usize) -> CliffordCircuit {
    let mut c = CliffordCircuit::new(n);
    for _ in 0..gates {
        let q = rng.random_range(0..n);
        let kind = if n > 1 { rng.random_range(0..6) } else { rng.random_range(0..4) };
        let mut other = || {
            let mut p = rng.random_range(0..n - 1);
            if p >= q {
                p += 1;
            }
            p
        };
        let gate = match kind {
            0 => CliffordGate::H(q),
            1 => CliffordGate::S(q),
            2 => CliffordGate::X(q),
            3 => CliffordGate::Z(q),
            4 => CliffordGate::Cnot { control: q, target: other() },
            _ => CliffordGate::Cz(q, other()),
        };
        c.push(gate).expect("valid random gate");
    }
    c
}

/// Random commuting set: random signed non-identity `{I, Z}` strings
/// conjugated by one random Clifford circuit.
pub fn random_commuting_set<R: Rng + ?Sized>(rng: &mut R, n: usize, count: usize) -> Vec<PauliString> {
    let circuit = random_clifford_circuit(rng, n, 4 * n * n + 4);
    (0..count)
        .map(|_| {
            let z = loop {
                let z = BitVec::from_bools(&(0..n).map(|_| rng.random::<bool>()).collect::<Vec<_>>());
                if !z.is_zero() {
                    break z;
                }
            };
            let p = PauliString::new(BitVec::zeros(n), z, rng.random()).expect("n >= 1");
            p.conjugated_by(&circuit).expect("matching n")
        })
        .collect()
}

/// Outcome of one oracle cross-check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str, result: Result<(), String>) -> Self {
        match result {
            Ok(()) => Self { name, passed: true, detail: String::new() },
            Err(detail) => Self { name, passed: false, detail },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn same_law(lhs: &BTreeMap<Vec<i8>, BigRational>, d: &KDistribution) -> Result<(), String> {
    let points = d.support_points(DEFAULT_SUPPORT_CAP).map_err(|e| e.to_string())?;
    let p = d.pmf_value();
    let symbolic: BTreeMap<Vec<i8>, BigRational> = points.into_iter().map(|k| (k, p.clone())).collect();
    if &symbolic != lhs {
        return Err(format!("{} symbolic support points vs {} dense", symbolic.len(), lhs.len()));
    }
    Ok(())
}

/// Runs every dense cross-check against a pipeline result. `mc_samples > 0`
/// adds a Monte-Carlo versus quadrature comparison at `t = 1`.
pub fn cross_check(analysis: &Analysis, mc_samples: u64, seed: u64) -> Result<VerificationReport, OracleError> {
    let ops = &analysis.ops;
    let diag = &analysis.diagonalized;
    let d = &analysis.distribution;
    let n = d.n();
    guard(n)?;
    let state = dense_state_from_circuit(&diag.circuit)?;
    let mut checks = Vec::new();

    checks.push(CheckOutcome::new(
        "symbolic_diagonalization",
        verify_diagonalization(ops, diag).map_err(|e| e.to_string()),
    ));

    checks.push(CheckOutcome::new(
        "dense_diagonalization",
        (|| {
            for (j, op) in ops.iter().enumerate() {
                let dense = dense_conjugation_check(op, &diag.circuit).map_err(|e| e.to_string())?;
                if dense != DensePauli::from_pauli(&diag.diagonal_operator(j)).map_err(|e| e.to_string())? {
                    return Err(format!("operator {j}: dense W H W† differs from its encoding"));
                }
            }
            Ok(())
        })(),
    ));

    checks.push(CheckOutcome::new(
        "tableau_support",
        (|| {
            let tableau = StabilizerTableau::from_circuit(&diag.circuit).map_err(|e| e.to_string())?;
            if tableau.extract_support() != *d.support() {
                return Err("support descriptor differs from a fresh tableau run".into());
            }
            let probs = amplitudes_squared(&state);
            let expected = 0.5f64.powi(d.state_rank() as i32);
            let dense: Vec<usize> = (0..probs.len()).filter(|&x| probs[x] > AMPLITUDE_TOL).collect();
            if let Some(&x) = dense.iter().find(|&&x| (probs[x] - expected).abs() > AMPLITUDE_TOL) {
                return Err(format!("amplitude² at {x} is {}, expected {expected}", probs[x]));
            }
            let mut coset: Vec<usize> = d.support().points().iter().map(basis_index).collect();
            coset.sort_unstable();
            if coset != dense {
                return Err(format!("coset has {} states, dense support has {}", coset.len(), dense.len()));
            }
            Ok(())
        })(),
    ));

    checks.push(CheckOutcome::new(
        "distribution_inputs",
        if d.a() != &diag.a {
            Err("distribution was built from a different A".into())
        } else if d.signs() != &diag.signs {
            Err("distribution was built from different signs".into())
        } else {
            Ok(())
        },
    ));

    checks.push(CheckOutcome::new(
        "brute_pmf",
        brute_pmf_k(ops, diag, &state).map_err(|e| e.to_string()).and_then(|pmf| same_law(&pmf, d)),
    ));

    if ops.len() <= MAX_ORACLE_OPERATORS {
        checks.push(CheckOutcome::new(
            "projector_pmf",
            projector_pmf_k(ops).map_err(|e| e.to_string()).and_then(|pmf| same_law(&pmf, d)),
        ));
    }

    let moments = &analysis.moments;
    checks.push(CheckOutcome::new(
        "moments",
        (|| {
            let points = d.support_points(DEFAULT_SUPPORT_CAP).map_err(|e| e.to_string())?;
            let (mean, cov) = enumerated_moments(&points);
            if mean != moments.mean || cov != moments.covariance {
                return Err("closed-form moments differ from enumeration".into());
            }
            if determinant(&cov) != moments.det_cov || moments.degenerate != moments.det_cov.is_zero() {
                return Err("determinant of the covariance is inconsistent".into());
            }
            let (dmean, dcov) = dense_moments(diag, &state).map_err(|e| e.to_string())?;
            let to_f = |r: &BigRational| num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN);
            for i in 0..mean.len() {
                if (to_f(&mean[i]) - dmean[i]).abs() > 1e-9 {
                    return Err(format!("mean {i} differs from dense expectation"));
                }
                for j in 0..mean.len() {
                    if (to_f(&cov[i][j]) - dcov[i][j]).abs() > 1e-9 {
                        return Err(format!("covariance ({i},{j}) differs from dense expectation"));
                    }
                }
            }
            Ok(())
        })(),
    ));

    if mc_samples > 0 {
        checks.push(CheckOutcome::new(
            "monte_carlo",
            (|| {
                let points = d.support_points(DEFAULT_SUPPORT_CAP).map_err(|e| e.to_string())?;
                let exact = exact_frame_potential_from_support(&points, 1).map_err(|e: LatticeError| e.to_string())?;
                let (est, se) = mc_frame_potential(ops, 1, mc_samples, seed).map_err(|e| e.to_string())?;
                if (est - exact).abs() > 4.0 * se + 1e-12 {
                    return Err(format!("estimate {est} ± {se} vs quadrature {exact}"));
                }
                Ok(())
            })(),
        ));
    }

    Ok(VerificationReport { checks })
}
