use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded random stream. Identical `(seed, stream)` pairs replay identical
/// sequences; distinct stream ids select non-overlapping ChaCha streams.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives an independent stream for a sub-task, e.g. one chain of a grid sweep.
    pub fn substream(seed: u64, parts: &[u64]) -> Self {
        // splitmix-style fold keeps the derived id well mixed
        let mut id = 0x9E37_79B9_7F4A_7C15u64;
        for &part in parts {
            id ^= part
                .wrapping_add(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(id << 6)
                .wrapping_add(id >> 2);
            id = id.wrapping_mul(0xBF58_476D_1CE4_E5B9);
            id ^= id >> 31;
        }
        Self::new(seed, id)
    }

    /// Uniform draw on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        loop {
            let u = (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            if u > 0.0 {
                return u;
            }
        }
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
