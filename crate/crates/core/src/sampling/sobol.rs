//! Owen-scrambled Sobol points, addressable by index.
//!
//! Direction numbers are the first rows of the Joe-Kuo `new-joe-kuo-6`
//! table. Scrambling uses the Laine-Karras style hash on bit-reversed values,
//! which only lets higher-significance bits influence lower ones and so is a
//! valid nested uniform scramble.

use std::sync::OnceLock;

/// Number of supported dimensions.
pub const MAX_DIMENSIONS: usize = 21;

const BITS: usize = 32;

// (s, a, m_1..m_s) for dimensions 2..=21.
const JOE_KUO: [(u32, u32, &[u32]); MAX_DIMENSIONS - 1] = [
    (1, 0, &[1]),
    (2, 1, &[1, 3]),
    (3, 1, &[1, 3, 1]),
    (3, 2, &[1, 1, 1]),
    (4, 1, &[1, 1, 3, 3]),
    (4, 4, &[1, 3, 5, 13]),
    (5, 2, &[1, 1, 5, 5, 17]),
    (5, 4, &[1, 1, 5, 5, 5]),
    (5, 7, &[1, 1, 7, 11, 19]),
    (5, 11, &[1, 1, 5, 1, 1]),
    (5, 13, &[1, 1, 1, 3, 11]),
    (5, 14, &[1, 3, 5, 5, 31]),
    (6, 1, &[1, 3, 3, 9, 7, 49]),
    (6, 13, &[1, 1, 1, 15, 21, 21]),
    (6, 16, &[1, 3, 1, 13, 27, 49]),
    (6, 19, &[1, 1, 1, 15, 7, 5]),
    (6, 22, &[1, 3, 1, 15, 13, 25]),
    (6, 25, &[1, 1, 5, 5, 19, 61]),
    (7, 1, &[1, 3, 7, 11, 23, 15, 103]),
    (7, 4, &[1, 3, 7, 13, 13, 15, 69]),
];

fn direction_vectors() -> &'static [[u32; BITS]; MAX_DIMENSIONS] {
    static VECTORS: OnceLock<[[u32; BITS]; MAX_DIMENSIONS]> = OnceLock::new();
    VECTORS.get_or_init(|| {
        let mut out = [[0u32; BITS]; MAX_DIMENSIONS];
        for (i, v) in out[0].iter_mut().enumerate() {
            *v = 1 << (BITS - 1 - i);
        }
        for (d, &(s, a, m)) in JOE_KUO.iter().enumerate() {
            let s = s as usize;
            let v = &mut out[d + 1];
            for i in 0..s {
                v[i] = m[i] << (BITS - 1 - i);
            }
            for i in s..BITS {
                v[i] = v[i - s] ^ (v[i - s] >> s);
                for k in 1..s {
                    if (a >> (s - 1 - k)) & 1 == 1 {
                        v[i] ^= v[i - k];
                    }
                }
            }
        }
        out
    })
}

/// Unscrambled Sobol integer for `index` in `dimension`, in the usual
/// Gray-code order.
fn sobol_u32(index: u32, dimension: usize) -> u32 {
    let v = &direction_vectors()[dimension];
    let mut x = 0u32;
    let mut i = index ^ (index >> 1);
    let mut bit = 0;
    while i != 0 {
        if i & 1 == 1 {
            x ^= v[bit];
        }
        i >>= 1;
        bit += 1;
    }
    x
}

fn lk_hash(mut n: u32, seed: u32) -> u32 {
    n ^= n.wrapping_mul(0x3d20_adea);
    n = n.wrapping_add(seed);
    n = n.wrapping_mul((seed >> 16) | 1);
    n ^= n.wrapping_mul(0x0552_6c56);
    n ^= n.wrapping_mul(0x53a2_2864);
    n
}

fn owen_scramble(x: u32, seed: u32) -> u32 {
    lk_hash(x.reverse_bits(), seed).reverse_bits()
}

/// SplitMix64 finalizer, used to derive per-dimension scramble seeds.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Coordinate `dimension` of scrambled Sobol point `index`, in `(0, 1)`.
///
/// The value sits at the midpoint of its 2^-32 cell, so it is never 0 or 1.
pub fn sample(index: u32, dimension: usize, seed: u64) -> f64 {
    assert!(dimension < MAX_DIMENSIONS, "Sobol dimension {dimension} unsupported");
    let dim_seed = mix64(seed ^ mix64(dimension as u64 + 1)) as u32;
    let x = owen_scramble(sobol_u32(index, dimension), dim_seed);
    (x as f64 + 0.5) / 4_294_967_296.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unscrambled_points_match_reference_table() {
        // Leading Sobol points in units of 1/256, from an independent
        // implementation of the same direction numbers.
        let rows: [(u32, [u32; 21]); 3] = [
            (5, [224, 224, 32, 96, 224, 160, 224, 96, 96, 32, 96, 224, 224, 32, 224, 96, 224, 96, 96, 160, 160]),
            (11, [112, 144, 48, 176, 208, 16, 176, 176, 176, 16, 240, 80, 48, 48, 144, 48, 144, 16, 176, 144, 240]),
            (15, [16, 240, 144, 80, 176, 48, 208, 80, 80, 176, 16, 48, 80, 144, 240, 208, 240, 240, 80, 176, 208]),
        ];
        for (i, row) in rows {
            for (d, &expect) in row.iter().enumerate() {
                assert_eq!(sobol_u32(i, d) >> 24, expect, "index {i} dimension {d}");
            }
        }
        let first: Vec<u32> = (0..8).map(|i| sobol_u32(i, 0) >> 29).collect();
        assert_eq!(first, vec![0, 4, 6, 2, 3, 7, 5, 1]);
    }

    #[test]
    fn scrambled_points_stay_stratified() {
        // Any 2^k prefix of a scrambled (0,m,1)-sequence puts one point in each
        // dyadic interval of length 2^-k, in every dimension.
        for dim in 0..MAX_DIMENSIONS {
            let mut seen = [false; 256];
            for i in 0..256 {
                let x = sample(i, dim, 0xfeed);
                let cell = (x * 256.0) as usize;
                assert!(!seen[cell], "dimension {dim} cell {cell} hit twice");
                seen[cell] = true;
            }
        }
    }

    #[test]
    fn seeds_decorrelate() {
        let a: Vec<f64> = (0..16).map(|i| sample(i, 3, 1)).collect();
        let b: Vec<f64> = (0..16).map(|i| sample(i, 3, 2)).collect();
        assert_ne!(a, b);
    }
}
