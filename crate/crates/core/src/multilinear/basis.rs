//! Bitmask encoding of wedge monomials on a six-dimensional space.
//!
//! Bit `i` of a mask stands for the covector `e^{i+1}`; a mask with `k` bits
//! set is the monomial `e^{i_1} ∧ … ∧ e^{i_k}` with `i_1 < … < i_k`. Within a
//! degree, monomials are ordered lexicographically by their index tuple, which
//! is the order used for dense coefficient storage.

/// Dimension of the underlying vector space.
pub const DIM: usize = 6;

/// Largest number of monomials in a single degree, `C(6,3)`.
pub const MAX_LEN: usize = 20;

/// Binomial coefficients `C(6, k)`.
pub const BINOM: [usize; 7] = [1, 6, 15, 20, 15, 6, 1];

/// The top-degree monomial `e^{123456}`.
pub const TOP: u8 = 0b11_1111;

// Lexicographic order on ascending index tuples of a fixed size is the
// descending order of the bit-reversed mask (index 0 as the high bit).
const fn build_masks() -> ([[u8; MAX_LEN]; 7], [u8; 64]) {
    let mut by_degree = [[0u8; MAX_LEN]; 7];
    let mut rank = [0u8; 64];
    let mut fill = [0usize; 7];
    let mut r = 64usize;
    while r > 0 {
        r -= 1;
        let mut mask = 0u8;
        let mut bit = 0;
        while bit < DIM {
            if r & (1 << (DIM - 1 - bit)) != 0 {
                mask |= 1 << bit;
            }
            bit += 1;
        }
        let k = mask.count_ones() as usize;
        by_degree[k][fill[k]] = mask;
        rank[mask as usize] = fill[k] as u8;
        fill[k] += 1;
    }
    (by_degree, rank)
}

const TABLES: ([[u8; MAX_LEN]; 7], [u8; 64]) = build_masks();

/// Monomial masks of degree `k`, in storage order.
pub fn masks(k: usize) -> &'static [u8] {
    &TABLES.0[k][..BINOM[k]]
}

/// Storage position of `mask` within its degree.
#[inline]
pub fn rank(mask: u8) -> usize {
    TABLES.1[mask as usize] as usize
}

#[inline]
pub fn degree_of(mask: u8) -> usize {
    mask.count_ones() as usize
}

/// Zero-based indices of the set bits, ascending.
pub fn indices(mask: u8) -> impl Iterator<Item = usize> {
    (0..DIM).filter(move |i| mask & (1 << i) != 0)
}

/// Sign of `e^a ∧ e^b` relative to `e^{a|b}`; zero when the monomials share an index.
#[inline]
pub fn wedge_sign(a: u8, b: u8) -> f64 {
    if a & b != 0 {
        return 0.0;
    }
    // count pairs (i in a, j in b) with i > j
    let mut inversions = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Mask of an index tuple together with the sign of the sorting permutation.
/// Returns `None` for repeated indices.
pub fn mask_of_tuple(idx: &[usize]) -> Option<(u8, f64)> {
    let mut mask = 0u8;
    let mut sign = 1.0;
    for &i in idx {
        if i >= DIM || mask & (1 << i) != 0 {
            return None;
        }
        sign *= wedge_sign(mask, 1 << i);
        mask |= 1 << i;
    }
    Some((mask, sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_lexicographic() {
        let two: Vec<Vec<usize>> = masks(2).iter().map(|&m| indices(m).collect()).collect();
        assert_eq!(two[0], vec![0, 1]);
        assert_eq!(two[1], vec![0, 2]);
        assert_eq!(two[5], vec![1, 2]);
        assert_eq!(two[14], vec![4, 5]);
        let three: Vec<Vec<usize>> = masks(3).iter().map(|&m| indices(m).collect()).collect();
        assert_eq!(three[0], vec![0, 1, 2]);
        assert_eq!(three[19], vec![3, 4, 5]);
        for k in 0..=6 {
            assert_eq!(masks(k).len(), BINOM[k]);
            for (pos, &m) in masks(k).iter().enumerate() {
                assert_eq!(rank(m), pos);
                assert_eq!(degree_of(m), k);
            }
        }
    }

    #[test]
    fn sorting_signs() {
        // e2 ∧ e1 = -e12
        assert_eq!(mask_of_tuple(&[1, 0]), Some((0b11, -1.0)));
        // e3 ∧ e1 ∧ e2 = e123 (cyclic)
        assert_eq!(mask_of_tuple(&[2, 0, 1]), Some((0b111, 1.0)));
        assert_eq!(mask_of_tuple(&[0, 0]), None);
        assert_eq!(wedge_sign(0b1, 0b1), 0.0);
    }
}
