mod common;

use cfp_core::distribution::DEFAULT_SUPPORT_CAP;
use cfp_core::lattice::{exact_frame_potential, exact_frame_potential_from_support, lattice_volume};
use cfp_core::oracle::{mc_frame_potential, random_commuting_set};
use cfp_core::{Analysis, LatticeVolume};
use common::rng;
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn permute(points: &[Vec<i8>], perm: &[usize]) -> Vec<Vec<i8>> {
    points.iter().map(|k| perm.iter().map(|&j| k[j]).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn volume_is_invariant_under_relabeling(seed in any::<u64>(), n in 1usize..=5, extra in 0usize..=3) {
        let mut r = rng(seed);
        let count = r.random_range(1..=n + extra);
        let set = random_commuting_set(&mut r, n, count);
        let d = Analysis::run(&set).unwrap().distribution;
        let points = d.support_points(DEFAULT_SUPPORT_CAP).unwrap();
        let volume = lattice_volume(&points).unwrap();

        let mut perm: Vec<usize> = (0..count).collect();
        perm.shuffle(&mut r);
        prop_assert_eq!(&lattice_volume(&permute(&points, &perm)).unwrap(), &volume);

        let mut rotated = points.clone();
        rotated.rotate_left(r.random_range(0..points.len()));
        prop_assert_eq!(&lattice_volume(&rotated).unwrap(), &volume);

        // Flipping a coordinate everywhere reflects the lattice.
        let j = r.random_range(0..count);
        let flipped: Vec<Vec<i8>> = points.iter().map(|k| { let mut k = k.clone(); k[j] = -k[j]; k }).collect();
        prop_assert_eq!(&lattice_volume(&flipped).unwrap(), &volume);

        if let LatticeVolume::Covolume(v) = &volume {
            // Differences of sign vectors lie in 2Z^N, so 2^N divides V.
            let full = BigInt::from(1) << count;
            prop_assert!(v.is_multiple_of(&full));
        } else {
            prop_assert!(d.moments().degenerate);
        }
    }

    #[test]
    fn exact_value_is_a_probability(seed in any::<u64>(), n in 1usize..=4, t in 1u32..=4) {
        let mut r = rng(seed);
        let count = r.random_range(1..=n.min(4));
        let set = random_commuting_set(&mut r, n, count);
        let d = Analysis::run(&set).unwrap().distribution;
        let f = exact_frame_potential(&d, t).unwrap();
        prop_assert!(f > 0.0 && f <= 1.0 + 1e-12);
        let next = exact_frame_potential(&d, t + 1).unwrap();
        prop_assert!(next <= f + 1e-12);
    }
}

#[test]
fn exact_agrees_with_monte_carlo() {
    let mut r = rng(3);
    for _ in 0..4 {
        let n = r.random_range(1..=3);
        let count = r.random_range(1..=3);
        let set = random_commuting_set(&mut r, n, count);
        let d = Analysis::run(&set).unwrap().distribution;
        for t in 1..=2 {
            let exact = exact_frame_potential(&d, t).unwrap();
            let (est, se) = mc_frame_potential(&set, t, 40_000, 99).unwrap();
            assert!((est - exact).abs() <= 5.0 * se + 1e-9, "t={t}: {est} ± {se} vs {exact}");
        }
    }
}

#[test]
fn independent_coordinates_converge_to_gaussian_law() {
    // Two independent uniform signs: V = 4, det = 1, F̃ = 4 / (4π t).
    let points = vec![vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]];
    assert_eq!(lattice_volume(&points).unwrap(), LatticeVolume::Covolume(BigInt::from(4)));
    let mut last = f64::INFINITY;
    for t in [5u32, 10, 20, 40] {
        let exact = exact_frame_potential_from_support(&points, t).unwrap();
        let clt = 1.0 / (std::f64::consts::PI * t as f64);
        let gap = (exact / clt - 1.0).abs();
        assert!(gap < last);
        last = gap;
    }
    assert!(last < 0.05);
}
