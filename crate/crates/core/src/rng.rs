//! Counter-based splittable RNG for reproducible parallel batches.
//!
//! Output words are a SplitMix64-style finalizer applied to `key + n * GOLDEN`,
//! so a stream is a pure function of (key, counter) and child streams can be
//! derived without consuming state from the parent. All sampling is integer
//! arithmetic; no floats on the sampling path.

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng {
            key: mix(seed.wrapping_add(GOLDEN)),
            counter: 0,
        }
    }

    /// Derives an independent child stream without touching the parent state.
    pub fn split(&self, stream: u64) -> Self {
        CounterRng {
            key: mix(self.key ^ mix(stream.wrapping_add(GOLDEN))),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, n) via rejection; n must be > 0.
    pub fn gen_range(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Bernoulli with probability num/den.
    pub fn gen_ratio(&mut self, num: u64, den: u64) -> bool {
        debug_assert!(den > 0);
        self.gen_range(den) < num
    }

    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.gen_range(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }

    /// Uniform f64 in [0,1) with 53 bits; used only where a float comparison
    /// is inherent (annealing acceptance), never in geometry sampling.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = CounterRng::new(42);
        let mut b = CounterRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn split_is_independent_of_parent_state() {
        let mut parent = CounterRng::new(7);
        let child_before = parent.split(3);
        parent.next_u64();
        parent.next_u64();
        let mut child_after = parent.split(3);
        let mut c = child_before.clone();
        for _ in 0..10 {
            assert_eq!(c.next_u64(), child_after.next_u64());
        }
    }

    #[test]
    fn distinct_streams_differ() {
        let root = CounterRng::new(9);
        let mut a = root.split(0);
        let mut b = root.split(1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn gen_range_in_bounds() {
        let mut r = CounterRng::new(1);
        for n in [1u64, 2, 3, 7, 1000] {
            for _ in 0..200 {
                assert!(r.gen_range(n) < n);
            }
        }
    }

    #[test]
    fn shuffle_is_permutation() {
        let mut r = CounterRng::new(5);
        let mut xs: Vec<u32> = (0..20).collect();
        r.shuffle(&mut xs);
        let mut sorted = xs.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..20).collect::<Vec<_>>());
    }
}
