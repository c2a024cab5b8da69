#![allow(dead_code)]

use cfp_core::{BitVec, PauliString};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bits<R: Rng>(rng: &mut R, n: usize) -> BitVec {
    BitVec::from_bools(&(0..n).map(|_| rng.random::<bool>()).collect::<Vec<_>>())
}

pub fn random_pauli<R: Rng>(rng: &mut R, n: usize) -> PauliString {
    let x = random_bits(rng, n);
    let z = random_bits(rng, n);
    PauliString::new(x, z, rng.random()).unwrap()
}

pub fn ops(list: &[&str]) -> Vec<PauliString> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}
