use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `k`-th child stream of `seed`.
pub fn derive_seed(seed: u64, k: u64) -> u64 {
    splitmix64(seed ^ splitmix64(k.wrapping_mul(GOLDEN_GAMMA).wrapping_add(1)))
}

/// Seeded, reproducible random stream backed by ChaCha8.
///
/// A stream is single-owner. Parallel work gets its own stream through
/// [`RandomStream::split`], which is a pure function of `(seed, k)`: the
/// child uses a distinct ChaCha key and the ChaCha stream id `k`.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent child stream number `k`. Does not advance `self`.
    pub fn split(&self, k: u64) -> Self {
        let seed = derive_seed(self.seed, k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k);
        Self { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn std_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform index in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// Fair coin.
    pub fn coin(&mut self) -> bool {
        self.rng.random()
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}
