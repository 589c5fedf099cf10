//! Multi-index bookkeeping for the bigraded exterior algebra.
//!
//! A strictly increasing multi-index I ⊂ {0,…,n−1} is stored as a bitmask.
//! Bases of Λ^{p,q} are indexed by pairs (I,J) with |I| = p, |J| = q, ordered
//! I-major, each block in lexicographic order of the increasing tuples.

pub type Mask = u32;

/// Binomial coefficient, small arguments only.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All p-element subsets of {0,…,n−1} in lexicographic order of their
/// increasing tuples, e.g. n=4, p=2: 01, 02, 03, 12, 13, 23.
pub fn subsets(n: usize, p: usize) -> Vec<Mask> {
    let mut out = Vec::with_capacity(binomial(n, p));
    let mut tuple: Vec<usize> = (0..p).collect();
    if p > n {
        return out;
    }
    loop {
        out.push(tuple.iter().fold(0, |m, &i| m | (1 << i)));
        // advance to the next combination
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if tuple[i] != i + n - p {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        tuple[i] += 1;
        for j in i + 1..p {
            tuple[j] = tuple[j - 1] + 1;
        }
    }
}

/// Rank of `mask` within `subsets(n, |mask|)`.
pub fn subset_rank(n: usize, mask: Mask) -> usize {
    let p = mask.count_ones() as usize;
    let mut rank = 0;
    let mut remaining = p;
    let mut prev: isize = -1;
    for i in 0..n {
        if mask & (1 << i) != 0 {
            for x in (prev + 1) as usize..i {
                rank += binomial(n - 1 - x, remaining - 1);
            }
            prev = i as isize;
            remaining -= 1;
        }
    }
    rank
}

/// Elements of the mask as an increasing vector.
pub fn elements(mask: Mask) -> Vec<usize> {
    (0..Mask::BITS as usize).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of sorting the concatenation (a, b) of two increasing tuples into one
/// increasing tuple. Returns None when the tuples intersect.
pub fn merge_sign(a: Mask, b: Mask) -> Option<(Mask, i32)> {
    if a & b != 0 {
        return None;
    }
    // inversions = #{ (x, y) : x ∈ a, y ∈ b, x > y }
    let mut inv = 0u32;
    for y in elements(b) {
        let above = a >> (y + 1);
        inv += above.count_ones();
    }
    Some((a | b, if inv % 2 == 0 { 1 } else { -1 }))
}

/// Sign (−1)^{l−1} of deleting the element `j` (0-based, must be present) from
/// the increasing tuple `mask`, where l is its 1-based position.
pub fn deletion_sign(mask: Mask, j: usize) -> i32 {
    let below = mask & ((1 << j) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_lex_order() {
        let s = subsets(4, 2);
        let tuples: Vec<Vec<usize>> = s.iter().map(|&m| elements(m)).collect();
        assert_eq!(
            tuples,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        for (r, &m) in s.iter().enumerate() {
            assert_eq!(subset_rank(4, m), r);
        }
    }

    #[test]
    fn merge_signs() {
        // e0 ∧ e1 in order: no inversion
        assert_eq!(merge_sign(0b01, 0b10), Some((0b11, 1)));
        // e1 ∧ e0: one inversion
        assert_eq!(merge_sign(0b10, 0b01), Some((0b11, -1)));
        // overlap
        assert_eq!(merge_sign(0b11, 0b01), None);
        // (0,2) then (1,3): inversions: 2>1 → one
        assert_eq!(merge_sign(0b0101, 0b1010), Some((0b1111, -1)));
    }

    #[test]
    fn deletion_signs() {
        // delete first slot: +, second: −, third: +
        assert_eq!(deletion_sign(0b111, 0), 1);
        assert_eq!(deletion_sign(0b111, 1), -1);
        assert_eq!(deletion_sign(0b111, 2), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(3, 0), 1);
        assert_eq!(binomial(2, 3), 0);
    }
}
