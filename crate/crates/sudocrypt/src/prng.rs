//! Deterministic pseudo-random source and permutation derivation.
//!
//! Every shuffle in the system is driven by SplitMix64 so that a recorded
//! seed reproduces the exact same permutations on any machine or
//! implementation. This is a scrambler, not a cryptographically secure
//! generator.

use crate::error::{Error, Result};

/// SplitMix64 generator state.
///
/// The output stream is a pure function of the seed: two generators with the
/// same state produce identical streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Advances the state and returns the next 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish index in `[0, bound)` by modulo reduction.
    ///
    /// The modulo bias is accepted deliberately: reduction without rejection
    /// sampling keeps the stream consumption identical across languages.
    ///
    /// # Panics
    ///
    /// Panics if `bound` is zero.
    pub fn next_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "bound must be non-zero");
        (self.next_u64() % bound as u64) as usize
    }

    /// Fisher-Yates shuffle driven by this generator's stream.
    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for i in (1..slice.len()).rev() {
            let j = self.next_index(i + 1);
            slice.swap(i, j);
        }
    }
}

/// Convenience: the first SplitMix64 output for `seed`, used to derive
/// secondary seeds from a primary one.
pub fn mix_seed(seed: u64) -> u64 {
    SplitMix64::new(seed).next_u64()
}

/// A bijection on `{0..n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from an explicit index map, verifying that it is
    /// a bijection.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &idx in &map {
            if idx >= n || seen[idx] {
                return Err(Error::InvalidArgument(format!(
                    "index map of length {n} is not a bijection"
                )));
            }
            seen[idx] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Derives the permutation of `{0..n-1}` from a seed: identity map,
    /// Fisher-Yates shuffled over SplitMix64. Deterministic in `(seed, n)`.
    pub fn derive(seed: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "permutation length must be at least 1".into(),
            ));
        }
        let mut map: Vec<usize> = (0..n).collect();
        SplitMix64::new(seed).shuffle(&mut map);
        Ok(Self { map })
    }

    /// The inverse permutation: `inverse.map[self.map[i]] == i`.
    pub fn invert(&self) -> Self {
        let mut inv = vec![0usize; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Gathers `src` through the map: `out[i] = src[map[i]]`.
    ///
    /// # Panics
    ///
    /// Panics if `src` length differs from the permutation length.
    pub fn gather<T: Copy>(&self, src: &[T]) -> Vec<T> {
        assert_eq!(src.len(), self.map.len());
        self.map.iter().map(|&j| src[j]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Straight transcription of the SplitMix64 steps, kept independent of
    // the implementation above so golden values have a second derivation.
    fn oracle_next(state: u64) -> (u64, u64) {
        let state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        (state, z ^ (z >> 31))
    }

    #[test]
    fn same_state_same_output() {
        let mut a = SplitMix64::new(123456789);
        let mut b = SplitMix64::new(123456789);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn golden_first_outputs() {
        // Frozen from the transcription oracle; seed 0 also matches the
        // published SplitMix64 reference vector.
        assert_eq!(SplitMix64::new(0).next_u64(), 0xE220A8397B1DCDAF);
        assert_eq!(SplitMix64::new(1).next_u64(), 0x910A2DEC89025CC1);
        assert_eq!(SplitMix64::new(2).next_u64(), 0x975835DE1C9756CE);

        let (_, z) = oracle_next(0);
        assert_eq!(z, 0xE220A8397B1DCDAF);
    }

    #[test]
    fn golden_stream_seed_zero() {
        let mut rng = SplitMix64::new(0);
        let got: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        assert_eq!(
            got,
            vec![0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
        );
    }

    #[test]
    fn distinct_seeds_distinct_outputs() {
        assert_ne!(SplitMix64::new(1).next_u64(), SplitMix64::new(2).next_u64());
    }

    #[test]
    fn derive_single_element() {
        assert_eq!(Permutation::derive(99, 1).unwrap().map(), &[0]);
    }

    #[test]
    fn derive_zero_rejected() {
        assert!(Permutation::derive(0, 0).is_err());
    }

    #[test]
    fn golden_permutation_seed_42() {
        // Frozen from the Fisher-Yates/SplitMix64 oracle.
        let p = Permutation::derive(42, 9).unwrap();
        assert_eq!(p.map(), &[7, 4, 8, 2, 5, 6, 0, 3, 1]);
    }

    #[test]
    fn invert_hand_checked() {
        let p = Permutation::from_map(vec![2, 0, 1]).unwrap();
        assert_eq!(p.invert().map(), &[1, 2, 0]);
        let id = Permutation::identity(4);
        assert_eq!(id.invert().map(), id.map());
    }

    #[test]
    fn from_map_rejects_non_bijections() {
        assert!(Permutation::from_map(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_map(vec![0, 3]).is_err());
    }

    proptest! {
        #[test]
        fn derived_map_is_bijection(seed in any::<u64>(), n in 1usize..300) {
            let p = Permutation::derive(seed, n).unwrap();
            let mut sorted = p.map().to_vec();
            sorted.sort_unstable();
            prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        }

        #[test]
        fn gather_then_inverse_gather_is_identity(seed in any::<u64>(), n in 1usize..200) {
            let p = Permutation::derive(seed, n).unwrap();
            let data: Vec<u64> = (0..n as u64).map(|v| v.wrapping_mul(0x9E37).wrapping_add(seed)).collect();
            let shuffled = p.gather(&data);
            let restored = p.invert().gather(&shuffled);
            prop_assert_eq!(restored, data);
        }

        #[test]
        fn invert_is_involution(seed in any::<u64>(), n in 1usize..200) {
            let p = Permutation::derive(seed, n).unwrap();
            prop_assert_eq!(p.invert().invert(), p);
        }
    }
}
