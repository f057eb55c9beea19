//! Seeded random streams.
//!
//! A stream is identified by a replication seed and a stream id. The seed
//! keys a ChaCha8 generator and the stream id selects one of its 2^64
//! independent streams, so draws taken from one stream never shift another
//! and new stream ids can be added without perturbing existing sequences.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StreamId(pub u64);

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of replication `index` under `master`.
pub fn replication_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

fn key_from_seed(seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut x = seed;
    for chunk in key.chunks_exact_mut(8) {
        x = splitmix64(x);
        chunk.copy_from_slice(&x.to_le_bytes());
    }
    key
}

#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    seed: u64,
    stream: StreamId,
}

impl RngStream {
    pub fn new(seed: u64, stream: StreamId) -> Self {
        let mut rng = ChaCha8Rng::from_seed(key_from_seed(seed));
        rng.set_stream(stream.0);
        Self { rng, seed, stream }
    }

    pub fn for_replication(master: u64, replication: u64, stream: StreamId) -> Self {
        Self::new(replication_seed(master, replication), stream)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> StreamId {
        self.stream
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1) with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (0, 1]; safe to take the logarithm of.
    pub fn uniform_open(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_and_stream_repeat() {
        let mut a = RngStream::new(42, StreamId(3));
        let mut b = RngStream::new(42, StreamId(3));
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    const FROZEN: [u64; 3] = [7_059_130_264_946_124_170, 7_490_092_297_549_717_639, 5_558_401_997_516_207_338];

    #[test]
    fn known_sequence_is_stable() {
        // Frozen so that a dependency bump that changes the stream is noticed.
        let mut s = RngStream::new(7, StreamId(0));
        let first: Vec<u64> = (0..3).map(|_| s.next_u64()).collect();
        assert_eq!(first, FROZEN);
    }

    #[test]
    fn streams_do_not_interfere() {
        let mut a = RngStream::new(1, StreamId(0));
        let mut b = RngStream::new(1, StreamId(1));
        let reference: Vec<u64> = (0..100).map(|_| b.next_u64()).collect();

        let mut b2 = RngStream::new(1, StreamId(1));
        let mut out = Vec::new();
        for i in 0..100 {
            // interleave arbitrary consumption of stream 0
            for _ in 0..(i % 7) {
                a.next_u64();
            }
            out.push(b2.next_u64());
        }
        assert_eq!(reference, out);
        assert_ne!(
            RngStream::new(1, StreamId(0)).next_u64(),
            RngStream::new(1, StreamId(1)).next_u64()
        );
    }

    #[test]
    fn uniform_ranges() {
        let mut s = RngStream::new(9, StreamId(2));
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
            let v = s.uniform_open();
            assert!(v > 0.0 && v <= 1.0);
        }
    }

    #[test]
    fn replication_seeds_differ() {
        let seeds: std::collections::HashSet<u64> =
            (0..1000).map(|i| replication_seed(2024, i)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_ne!(replication_seed(1, 0), replication_seed(2, 0));
    }
}
