//! Seeded corruptions of a finished analysis, used to show that `verify`
//! rejects wrong intermediate results.

use cfp_core::{Analysis, BitVec, CliffordGate, KDistribution};
use num_rational::BigRational;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    FlipMatrixBit,
    FlipSign,
    AppendGate,
    ShiftSupport,
    DistributionSign,
    Covariance,
    Determinant,
}

pub const ALL_MUTATIONS: [Mutation; 7] = [
    Mutation::FlipMatrixBit,
    Mutation::FlipSign,
    Mutation::AppendGate,
    Mutation::ShiftSupport,
    Mutation::DistributionSign,
    Mutation::Covariance,
    Mutation::Determinant,
];

fn rebuild(a: &mut Analysis, signs: BitVec) {
    a.distribution =
        KDistribution::new(a.diagonalized.a.clone(), signs, a.support.clone()).expect("dimensions unchanged");
    a.moments = a.distribution.moments();
}

/// Applies `kind` to a copy of `analysis` at positions drawn from `seed`.
pub fn mutate(analysis: &Analysis, kind: Mutation, seed: u64) -> Analysis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = analysis.clone();
    let (count, n) = (a.num_ops(), a.n());
    match kind {
        Mutation::FlipMatrixBit => {
            let (j, q) = (rng.random_range(0..count), rng.random_range(0..n));
            a.diagonalized.a.row_mut(j).flip(q);
        }
        Mutation::FlipSign => a.diagonalized.signs.flip(rng.random_range(0..count)),
        Mutation::AppendGate => {
            // X on a qubit where some image has a Z flips that image's sign.
            let j = rng.random_range(0..count);
            let ones: Vec<usize> = a.diagonalized.a.row(j).ones().collect();
            let q = ones[rng.random_range(0..ones.len())];
            a.diagonalized.circuit.push(CliffordGate::X(q)).expect("q < n");
        }
        Mutation::ShiftSupport => {
            if a.support.rank < n {
                let span = a.support.generators.transpose();
                let outside = (0..n)
                    .map(|q| BitVec::unit(n, q))
                    .find(|e| !span.in_row_span(e).unwrap_or(true))
                    .expect("rank < n leaves a unit vector outside the span");
                a.support.offset.xor_assign(&outside);
            } else {
                let cols: Vec<BitVec> = (0..n - 1).map(|j| a.support.generators.column(j)).collect();
                a.support.generators = cfp_core::BitMatrix::from_columns(n, &cols).expect("n rows");
                a.support.rank = n - 1;
            }
            let signs = a.diagonalized.signs.clone();
            rebuild(&mut a, signs);
        }
        Mutation::DistributionSign => {
            let mut signs = a.diagonalized.signs.clone();
            signs.flip(rng.random_range(0..count));
            rebuild(&mut a, signs);
        }
        Mutation::Covariance => {
            let i = rng.random_range(0..count);
            let entry = &mut a.moments.covariance[i][i];
            *entry = BigRational::one() - &*entry;
        }
        Mutation::Determinant => a.moments.det_cov += BigRational::one(),
    }
    a
}
