//! Text generators shared by the criterion benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn dna(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| b"acgt"[rng.gen_range(0..4)]).collect()
}

/// Prefix of the Fibonacci word, the usual worst case for repeats.
pub fn fibonacci(n: usize) -> Vec<u8> {
    let (mut a, mut b) = (b"a".to_vec(), b"ab".to_vec());
    while b.len() < n {
        let next = [b.as_slice(), a.as_slice()].concat();
        a = std::mem::replace(&mut b, next);
    }
    b.truncate(n);
    b
}

/// `count` random `(p, q)` with `q - p + 1 == ell`.
pub fn queries(n: usize, ell: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let p = rng.gen_range(0..=n - ell);
            (p, p + ell - 1)
        })
        .collect()
}
