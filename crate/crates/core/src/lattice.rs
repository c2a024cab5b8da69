//! Increment lattice of `K`, the central-limit approximation of the frame
//! potential, and its exact value by grid quadrature.

use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::distribution::{DistributionError, KDistribution, DEFAULT_SUPPORT_CAP};

/// Largest grid `(t + 1)^N` the exact quadrature will evaluate.
pub const QUADRATURE_GUARD: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("empty support")]
    EmptySupport,
    #[error("support vectors have mixed lengths")]
    MixedLengths,
    #[error("support vector entry {0} is not ±1")]
    NotSignVector(i64),
    #[error("integer overflow during Hermite reduction")]
    Overflow,
    #[error("lattice has rank {rank} < {dim}; the central-limit formula does not apply")]
    Degenerate { rank: usize, dim: usize },
    #[error("covariance determinant must be positive")]
    SingularCovariance,
    #[error("t must be positive")]
    NonPositiveT,
    #[error("quadrature grid (t+1)^N = {points:.3e} exceeds the guard {QUADRATURE_GUARD:.0e}")]
    QuadratureGuard { points: f64 },
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}

/// Covolume of the increment lattice, or its rank when it is not full.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeVolume {
    Covolume(BigInt),
    Degenerate { rank: usize },
}

impl LatticeVolume {
    pub fn covolume(&self) -> Option<&BigInt> {
        match self {
            LatticeVolume::Covolume(v) => Some(v),
            LatticeVolume::Degenerate { .. } => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, LatticeVolume::Degenerate { .. })
    }
}

impl fmt::Display for LatticeVolume {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeVolume::Covolume(v) => write!(f, "{v}"),
            LatticeVolume::Degenerate { .. } => f.write_str("degenerate"),
        }
    }
}

/// Hermite-style triangular basis built one generator at a time. Row `c`, when
/// present, has its first nonzero entry (positive) in column `c`.
struct HermiteBasis {
    dim: usize,
    rows: Vec<Option<Vec<i128>>>,
    rank: usize,
    /// Product of the pivots once the basis has full rank. The lattice then
    /// contains `modulus · Z^N`, so entries can be reduced modulo it.
    modulus: Option<i128>,
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let e = a.extended_gcd(&b);
    (e.gcd, e.x, e.y)
}

fn combine(p: i128, row: &[i128], q: i128, v: &[i128]) -> Result<Vec<i128>, LatticeError> {
    row.iter()
        .zip(v)
        .map(|(&a, &b)| {
            p.checked_mul(a).and_then(|x| q.checked_mul(b).and_then(|y| x.checked_add(y))).ok_or(LatticeError::Overflow)
        })
        .collect()
}

impl HermiteBasis {
    fn new(dim: usize) -> Self {
        Self { dim, rows: vec![None; dim], rank: 0, modulus: None }
    }

    fn reduce_mod(&self, v: &mut [i128], from: usize) {
        if let Some(m) = self.modulus {
            for x in &mut v[from..] {
                *x = x.rem_euclid(m);
            }
        }
    }

    fn insert(&mut self, mut v: Vec<i128>) -> Result<(), LatticeError> {
        self.reduce_mod(&mut v, 0);
        for c in 0..self.dim {
            if v[c] == 0 {
                continue;
            }
            let Some(row) = self.rows[c].take() else {
                if v[c] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                self.reduce_mod(&mut v, c + 1);
                self.rows[c] = Some(v);
                self.rank += 1;
                self.update_modulus()?;
                return Ok(());
            };
            let (g, x, y) = ext_gcd(row[c], v[c]);
            let (a, b) = (row[c] / g, v[c] / g);
            let mut pivot = combine(x, &row, y, &v)?;
            let mut rest = combine(a, &v, -b, &row)?;
            if pivot[c] < 0 {
                pivot.iter_mut().for_each(|x| *x = -*x);
            }
            debug_assert_eq!(rest[c], 0);
            self.reduce_mod(&mut pivot, c + 1);
            self.reduce_mod(&mut rest, c + 1);
            let changed = pivot[c] != row[c];
            self.rows[c] = Some(pivot);
            if changed {
                self.update_modulus()?;
            }
            v = rest;
        }
        Ok(())
    }

    fn update_modulus(&mut self) -> Result<(), LatticeError> {
        if self.rank < self.dim {
            return Ok(());
        }
        let mut m: i128 = 1;
        for (c, row) in self.rows.iter().enumerate() {
            let p = row.as_ref().expect("full rank")[c];
            m = m.checked_mul(p).ok_or(LatticeError::Overflow)?;
        }
        self.modulus = Some(m);
        Ok(())
    }

    fn volume(&self) -> LatticeVolume {
        if self.rank < self.dim {
            return LatticeVolume::Degenerate { rank: self.rank };
        }
        let det = self
            .rows
            .iter()
            .enumerate()
            .map(|(c, r)| BigInt::from(r.as_ref().expect("full rank")[c]))
            .fold(BigInt::one(), |acc, p| acc * p);
        LatticeVolume::Covolume(det)
    }
}

/// Covolume of the lattice generated by `{v - v_0 : v ∈ support}`.
pub fn lattice_volume(support: &[Vec<i8>]) -> Result<LatticeVolume, LatticeError> {
    let base = support.first().ok_or(LatticeError::EmptySupport)?;
    let dim = base.len();
    let mut basis = HermiteBasis::new(dim);
    for v in support {
        if v.len() != dim {
            return Err(LatticeError::MixedLengths);
        }
        if let Some(&bad) = v.iter().find(|&&x| x != 1 && x != -1) {
            return Err(LatticeError::NotSignVector(bad as i64));
        }
        let diff: Vec<i128> = v.iter().zip(base).map(|(&a, &b)| (a - b) as i128).collect();
        if diff.iter().any(|&x| x != 0) {
            basis.insert(diff)?;
        }
    }
    if dim == 0 {
        return Ok(LatticeVolume::Covolume(BigInt::one()));
    }
    Ok(basis.volume())
}

/// `V / ((4π)^{N/2} sqrt(det Cov))`, evaluated in log space.
pub fn clt_coefficient(volume: &BigInt, det_cov: &BigRational, dim: usize) -> Result<f64, LatticeError> {
    if !det_cov.is_positive() {
        return Err(LatticeError::SingularCovariance);
    }
    let log_v = bigint_ln(volume);
    let log_det = bigint_ln(det_cov.numer()) - bigint_ln(det_cov.denom());
    Ok((log_v - 0.5 * dim as f64 * (4.0 * PI).ln() - 0.5 * log_det).exp())
}

fn bigint_ln(v: &BigInt) -> f64 {
    match v.to_f64() {
        Some(x) if x.is_finite() => x.ln(),
        _ => {
            let bits = v.bits();
            let shift = bits.saturating_sub(60);
            (v >> shift).to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

/// `V / sqrt((4πt)^N det Cov)`.
pub fn clt_frame_potential(
    volume: &LatticeVolume,
    det_cov: &BigRational,
    dim: usize,
    t: f64,
) -> Result<f64, LatticeError> {
    if t <= 0.0 {
        return Err(LatticeError::NonPositiveT);
    }
    let v = match volume {
        LatticeVolume::Covolume(v) => v,
        LatticeVolume::Degenerate { rank } => return Err(LatticeError::Degenerate { rank: *rank, dim }),
    };
    Ok(clt_coefficient(v, det_cov, dim)? * t.powf(-(dim as f64) / 2.0))
}

/// Compensated accumulator.
#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `P(W_t = 0)` for the walk with increments `K - K'`, i.e. the mean of
/// `|E e^{iθ·K}|^{2t}` over the torus.
///
/// `|φ(θ)|^{2t}` only has even frequencies bounded by `2t`, so the mean is
/// reproduced exactly by the grid `θ_j = π m_j / (t + 1)`, `m_j = 0..=t`.
/// On that grid `θ·k = π s / (t + 1)` for the integer `s = Σ k_j m_j`, so
/// each phase is a table lookup.
pub fn exact_frame_potential(d: &KDistribution, t: u32) -> Result<f64, LatticeError> {
    let support = d.support_points(DEFAULT_SUPPORT_CAP)?;
    exact_frame_potential_from_support(&support, t)
}

/// Same as [`exact_frame_potential`] for an explicit uniform support.
pub fn exact_frame_potential_from_support(support: &[Vec<i8>], t: u32) -> Result<f64, LatticeError> {
    if t == 0 {
        return Err(LatticeError::NonPositiveT);
    }
    let first = support.first().ok_or(LatticeError::EmptySupport)?;
    let dim = first.len();
    if support.iter().any(|v| v.len() != dim) {
        return Err(LatticeError::MixedLengths);
    }
    let side = t as usize + 1;
    let points = (side as f64).powi(dim as i32);
    if points > QUADRATURE_GUARD {
        return Err(LatticeError::QuadratureGuard { points });
    }
    if dim == 0 {
        return Ok(1.0);
    }
    let period = 2 * side as i64;
    let table: Vec<Complex64> = (0..period).map(|s| Complex64::from_polar(1.0, PI * s as f64 / side as f64)).collect();
    let weight = 1.0 / support.len() as f64;
    let exponent = t as i32;

    // One partition per value of the first grid coordinate; partial sums are
    // combined in index order, so the result does not depend on scheduling.
    let partials: Vec<Neumaier> = (0..side)
        .into_par_iter()
        .map(|m0| {
            let mut acc = Neumaier::default();
            let mut digits = vec![0usize; dim];
            digits[0] = m0;
            let mut phase: Vec<i64> = support.iter().map(|k| k[0] as i64 * m0 as i64).collect();
            loop {
                let phi: Complex64 =
                    phase.iter().map(|&s| table[s.rem_euclid(period) as usize]).sum::<Complex64>() * weight;
                acc.add(phi.norm_sqr().powi(exponent));
                // Odometer over coordinates 1..dim.
                let mut j = 1;
                loop {
                    if j == dim {
                        return acc;
                    }
                    if digits[j] < t as usize {
                        digits[j] += 1;
                        for (s, k) in phase.iter_mut().zip(support) {
                            *s += k[j] as i64;
                        }
                        break;
                    }
                    for (s, k) in phase.iter_mut().zip(support) {
                        *s -= k[j] as i64 * t as i64;
                    }
                    digits[j] = 0;
                    j += 1;
                }
            }
        })
        .collect();
    let mut total = Neumaier::default();
    for p in &partials {
        total.add(p.sum);
        total.add(p.carry);
    }
    Ok(total.value() / points)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameValue {
    pub t: u32,
    pub clt: Option<f64>,
    pub exact: Option<f64>,
    /// Monte-Carlo estimate and its standard error.
    pub monte_carlo: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub num_ops: usize,
    pub volume: LatticeVolume,
    pub det_cov: BigRational,
    pub clt_coefficient: Option<f64>,
    pub values: Vec<FrameValue>,
}

impl FrameReport {
    pub fn degenerate(&self) -> bool {
        self.clt_coefficient.is_none()
    }
}

/// Lattice volume, CLT coefficient and per-`t` values; exact quadrature is
/// included when `exact` is set.
pub fn frame_report(d: &KDistribution, ts: &[u32], exact: bool) -> Result<FrameReport, LatticeError> {
    let support = d.support_points(DEFAULT_SUPPORT_CAP)?;
    let volume = lattice_volume(&support)?;
    let det_cov = d.moments().det_cov;
    let num_ops = d.len();
    let clt_coefficient = match &volume {
        LatticeVolume::Covolume(v) if det_cov.is_positive() => Some(clt_coefficient(v, &det_cov, num_ops)?),
        _ => None,
    };
    let values = ts
        .iter()
        .map(|&t| {
            if t == 0 {
                return Err(LatticeError::NonPositiveT);
            }
            let clt = clt_coefficient.map(|c| c * (t as f64).powf(-(num_ops as f64) / 2.0));
            let exact = if exact { Some(exact_frame_potential_from_support(&support, t)?) } else { None };
            Ok(FrameValue { t, clt, exact, monte_carlo: None })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FrameReport { num_ops, volume, det_cov, clt_coefficient, values })
}
