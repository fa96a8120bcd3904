use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Generator for stream `stream` of `seed`. Parallel loops give each block its
/// own stream so results do not depend on how blocks map to threads.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples a uniform `k`-subset of `0..n` as a bitmask.
pub fn random_subset_mask(rng: &mut Rng, n: usize, k: usize) -> u128 {
    rand::seq::index::sample(rng, n, k)
        .iter()
        .fold(0u128, |m, i| m | (1u128 << i))
}
