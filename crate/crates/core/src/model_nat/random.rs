use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Piece, ResidueMap};

// Deepest class produced by the generators.
const MAX_DEPTH: u32 = 12;

// A random partition of ℕ into `size` dyadic classes.
fn random_partition(rng: &mut ChaCha8Rng, size: usize) -> Vec<(u32, u64)> {
    let mut classes = vec![(0u32, 0u64)];
    while classes.len() < size {
        let i = rng.gen_range(0..classes.len());
        let (k, r) = classes[i];
        if k >= MAX_DEPTH {
            continue;
        }
        classes[i] = (k + 1, r);
        classes.push((k + 1, r + (1u64 << k)));
    }
    classes
}

/// A total bijection with at most `size` pieces, determined by `seed`.
pub fn random_map(seed: u64, size: usize) -> ResidueMap {
    assert!(size >= 1, "random_map needs at least one piece");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = random_partition(&mut rng, size);
    let mut image = random_partition(&mut rng, size);
    image.shuffle(&mut rng);
    let pieces = domain
        .into_iter()
        .zip(image)
        .map(|((k, r), (ko, ro))| Piece::new(k, r, ko, ro))
        .collect();
    ResidueMap::new(pieces).expect("partitions give a bijection")
}

/// A partial injection: a random bijection with some pieces dropped.
pub fn random_partial_map(seed: u64, size: usize) -> ResidueMap {
    let full = random_map(seed, size.max(2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let kept: Vec<Piece> = full.pieces().iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    ResidueMap::new(kept).expect("subset of a bijection is injective")
}
