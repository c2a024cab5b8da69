//! Exact law of the spectral random vector `K`.
//!
//! With `W H_j W† = (-1)^{s_j} Z^{A_j}` and the state `W|0…0⟩` supported
//! uniformly on `{R z ⊕ t}`, the vector `K = ((-1)^{s ⊕ A u})` is uniform on
//! the `2^rank(AR)` points `(-1)^{b0 ⊕ AR z}` with `b0 = A t ⊕ s`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::diagonalize::DiagonalizedSet;
use crate::gf2::{BitMatrix, BitVec, Gf2Error};
use crate::tableau::SupportDescriptor;

/// Default bound on `rank(AR)` for explicit support enumeration.
pub const DEFAULT_SUPPORT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributionError {
    #[error(transparent)]
    Dimension(#[from] Gf2Error),
    #[error("support has 2^{rank} points, above the enumeration cap 2^{cap}")]
    EnumerationCap { rank: usize, cap: usize },
    #[error("vector has entry {0}, expected ±1")]
    NotSignVector(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KDistribution {
    a: BitMatrix,
    signs: BitVec,
    support: SupportDescriptor,
    ar: BitMatrix,
    /// Rows form a basis of the column space of `AR`, as vectors of length N.
    image_basis: BitMatrix,
    base: BitVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentReport {
    pub mean: Vec<BigRational>,
    pub covariance: Vec<Vec<BigRational>>,
    pub det_cov: BigRational,
    pub degenerate: bool,
}

/// `((-1)^{s_j ⊕ (A u)_j})_j`.
pub fn k_row(a: &BitMatrix, signs: &BitVec, u: &BitVec) -> Result<Vec<i8>, DistributionError> {
    let au = a.mat_vec(u)?;
    if signs.len() != au.len() {
        return Err(Gf2Error::DimensionMismatch { expected: au.len(), found: signs.len() }.into());
    }
    Ok(au.iter().zip(signs.iter()).map(|(x, s)| if x ^ s { -1 } else { 1 }).collect())
}

/// Exponent vector `b` with `k = (-1)^b`.
pub fn sign_exponents(k: &[i8]) -> Result<BitVec, DistributionError> {
    let bits = k
        .iter()
        .map(|&v| match v {
            1 => Ok(false),
            -1 => Ok(true),
            other => Err(DistributionError::NotSignVector(other as i64)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BitVec::from_bools(&bits))
}

fn to_signs(b: &BitVec) -> Vec<i8> {
    b.iter().map(|bit| if bit { -1 } else { 1 }).collect()
}

fn signed_one(negative: bool) -> BigRational {
    if negative {
        -BigRational::one()
    } else {
        BigRational::one()
    }
}

pub fn build_distribution(
    diag: &DiagonalizedSet,
    support: &SupportDescriptor,
) -> Result<KDistribution, DistributionError> {
    KDistribution::new(diag.a.clone(), diag.signs.clone(), support.clone())
}

impl KDistribution {
    pub fn new(a: BitMatrix, signs: BitVec, support: SupportDescriptor) -> Result<Self, DistributionError> {
        if signs.len() != a.rows() {
            return Err(Gf2Error::DimensionMismatch { expected: a.rows(), found: signs.len() }.into());
        }
        let ar = a.multiply(&support.generators)?;
        let image_basis = ar.transpose().row_space_basis();
        let mut base = a.mat_vec(&support.offset)?;
        base.xor_assign(&signs);
        Ok(Self { a, signs, support, ar, image_basis, base })
    }

    /// Number of operators `N`.
    pub fn len(&self) -> usize {
        self.a.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.a.rows() == 0
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn a(&self) -> &BitMatrix {
        &self.a
    }

    pub fn signs(&self) -> &BitVec {
        &self.signs
    }

    pub fn support(&self) -> &SupportDescriptor {
        &self.support
    }

    pub fn ar(&self) -> &BitMatrix {
        &self.ar
    }

    /// Dimension `r` of the state's support coset.
    pub fn state_rank(&self) -> usize {
        self.support.rank
    }

    /// `rank(AR)`; the support of `K` has `2^rank` points.
    pub fn rank(&self) -> usize {
        self.image_basis.rows()
    }

    /// Exponent vector of one support point, `A t ⊕ s`.
    pub fn base_point(&self) -> &BitVec {
        &self.base
    }

    pub fn support_size(&self) -> BigInt {
        BigInt::one() << self.rank()
    }

    /// Probability of each support point, `2^-rank(AR)`.
    pub fn pmf_value(&self) -> BigRational {
        BigRational::new(BigInt::one(), self.support_size())
    }

    pub fn contains(&self, k: &[i8]) -> Result<bool, DistributionError> {
        let b = sign_exponents(k)?;
        if b.len() != self.len() {
            return Err(Gf2Error::DimensionMismatch { expected: self.len(), found: b.len() }.into());
        }
        Ok(self.image_basis.in_row_span(&b.xor(&self.base))?)
    }

    pub fn probability(&self, k: &[i8]) -> Result<BigRational, DistributionError> {
        Ok(if self.contains(k)? { self.pmf_value() } else { BigRational::zero() })
    }

    /// The `2^rank(AR)` distinct support vectors, enumerated in Gray-code
    /// order over a basis of the image of `AR`.
    pub fn support_points(&self, cap: usize) -> Result<Vec<Vec<i8>>, DistributionError> {
        let rank = self.rank();
        if rank > cap {
            return Err(DistributionError::EnumerationCap { rank, cap });
        }
        let mut b = self.base.clone();
        let mut out = Vec::with_capacity(1 << rank);
        out.push(to_signs(&b));
        for k in 1u64..(1u64 << rank) {
            b.xor_assign(self.image_basis.row(k.trailing_zeros() as usize));
            out.push(to_signs(&b));
        }
        Ok(out)
    }

    /// Closed-form moments: `E K_j` is `(-1)^{b0_j}` when row `j` of `AR`
    /// vanishes and 0 otherwise; `E K_i K_j` is `(-1)^{b0_i ⊕ b0_j}` when rows
    /// `i` and `j` of `AR` coincide and 0 otherwise.
    pub fn moments(&self) -> MomentReport {
        let n_ops = self.len();
        let mean: Vec<BigRational> = (0..n_ops)
            .map(|j| if self.ar.row(j).is_zero() { signed_one(self.base.get(j)) } else { BigRational::zero() })
            .collect();
        let covariance: Vec<Vec<BigRational>> = (0..n_ops)
            .map(|i| {
                (0..n_ops)
                    .map(|j| {
                        let second = if self.ar.row(i) == self.ar.row(j) {
                            signed_one(self.base.get(i) ^ self.base.get(j))
                        } else {
                            BigRational::zero()
                        };
                        second - &mean[i] * &mean[j]
                    })
                    .collect()
            })
            .collect();
        let det_cov = determinant(&covariance);
        let degenerate = det_cov.is_zero();
        MomentReport { mean, covariance, det_cov, degenerate }
    }
}

pub fn support_points(d: &KDistribution, cap: usize) -> Result<Vec<Vec<i8>>, DistributionError> {
    d.support_points(cap)
}

pub fn moments(d: &KDistribution) -> MomentReport {
    d.moments()
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let size = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let pivot_row = a[col].clone();
        let p = &pivot_row[col];
        det *= p;
        for row in a.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / p;
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Rounds a nonnegative float to the nearest multiple of `2^-bits`, failing
/// when it is further than `tol` away.
pub fn dyadic_from_f64(value: f64, bits: u32, tol: f64) -> Option<BigRational> {
    let scale = (1u64 << bits) as f64;
    let scaled = (value * scale).round();
    if (scaled / scale - value).abs() > tol || scaled < 0.0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(scaled as u64), BigInt::one() << bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn descriptor(generators: BitMatrix, offset: &str) -> SupportDescriptor {
        let rank = generators.cols();
        SupportDescriptor { generators, offset: offset.parse().unwrap(), rank }
    }

    fn example() -> KDistribution {
        let a = BitMatrix::parse_rows(5, &["10011", "01101", "01100", "11010", "11011"]).unwrap();
        let r = BitMatrix::parse_rows(4, &["1000", "0100", "0010", "0000", "0001"]).unwrap();
        KDistribution::new(a, BitVec::zeros(5), descriptor(r, "00000")).unwrap()
    }

    #[test]
    fn k_row_examples() {
        let a = BitMatrix::identity(1);
        assert_eq!(k_row(&a, &BitVec::zeros(1), &"1".parse().unwrap()).unwrap(), vec![-1]);
        let a = BitMatrix::parse_rows(3, &["101", "011"]).unwrap();
        assert_eq!(k_row(&a, &BitVec::zeros(2), &BitVec::zeros(3)).unwrap(), vec![1, 1]);
        assert_eq!(k_row(&a, &"01".parse().unwrap(), &"100".parse().unwrap()).unwrap(), vec![-1, -1]);
        assert!(k_row(&a, &BitVec::zeros(3), &BitVec::zeros(3)).is_err());
    }

    #[test]
    fn worked_example_law() {
        let d = example();
        assert_eq!(d.rank(), 4);
        assert_eq!(d.pmf_value(), BigRational::new(1.into(), 16.into()));
        let pts = d.support_points(DEFAULT_SUPPORT_CAP).unwrap();
        assert_eq!(pts.len(), 16);
        let distinct: std::collections::BTreeSet<_> = pts.iter().cloned().collect();
        assert_eq!(distinct.len(), 16);
        for p in &pts {
            assert!(d.contains(p).unwrap());
        }
        let m = d.moments();
        for i in 0..5 {
            assert_eq!(m.mean[i], rat(0));
            for j in 0..5 {
                assert_eq!(m.covariance[i][j], rat((i == j) as i64));
            }
        }
        assert_eq!(m.det_cov, rat(1));
        assert!(!m.degenerate);
    }

    #[test]
    fn point_mass() {
        let a = BitMatrix::parse_rows(2, &["11", "01"]).unwrap();
        let d = KDistribution::new(a, "10".parse().unwrap(), descriptor(BitMatrix::zeros(2, 0), "01")).unwrap();
        assert_eq!(d.rank(), 0);
        let pts = d.support_points(0).unwrap();
        assert_eq!(pts, vec![vec![1, -1]]);
        let m = d.moments();
        assert_eq!(m.mean, vec![rat(1), rat(-1)]);
        assert!(m.covariance.iter().flatten().all(Zero::is_zero));
        assert!(m.degenerate);
    }

    #[test]
    fn single_qubit_x_law() {
        let d = KDistribution::new(BitMatrix::identity(1), BitVec::zeros(1), descriptor(BitMatrix::identity(1), "0"))
            .unwrap();
        let mut pts = d.support_points(4).unwrap();
        pts.sort();
        assert_eq!(pts, vec![vec![-1], vec![1]]);
        let m = d.moments();
        assert_eq!(m.mean, vec![rat(0)]);
        assert_eq!(m.covariance, vec![vec![rat(1)]]);
    }

    #[test]
    fn cap_is_enforced() {
        let d = example();
        assert_eq!(d.support_points(3), Err(DistributionError::EnumerationCap { rank: 4, cap: 3 }));
    }

    #[test]
    fn probability_outside_support_is_zero() {
        let d = example();
        let all: Vec<Vec<i8>> = (0..32u64).map(|b| to_signs(&BitVec::from_u64(5, b))).collect();
        let inside = all.iter().filter(|k| d.contains(k).unwrap()).count();
        assert_eq!(inside, 16);
        assert!(d.probability(&[1, 1, 2, 1, 1]).is_err());
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]];
        assert_eq!(determinant(&m), rat(1));
        let m = vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]];
        assert_eq!(determinant(&m), rat(-1));
        assert_eq!(determinant(&[]), rat(1));
    }

    #[test]
    fn dyadic_rounding() {
        assert_eq!(dyadic_from_f64(0.0625 + 1e-14, 10, 1e-10), Some(BigRational::new(1.into(), 16.into())));
        assert_eq!(dyadic_from_f64(0.3, 4, 1e-10), None);
    }
}
