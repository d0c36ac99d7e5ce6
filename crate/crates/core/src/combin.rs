//! Combinatorics for the sorted-multi-index tensor layout.
//!
//! A symmetric order-`m` dimension-`n` tensor stores one value per sorted
//! index tuple `i_1 <= ... <= i_m` with entries in `{0, ..., n-1}`; there are
//! `C(n+m-1, m)` such tuples. Tuples are ranked by the colexicographic
//! combinadic: the sorted tuple maps to the strictly increasing combination
//! `c_t = i_t + t` and `rank = sum_t C(c_t, t+1)`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Pascal triangle rows cached for the hot rank/unrank paths. Desk scale
/// keeps `n + m` far below the table bound.
const PASCAL_ROWS: usize = 72;

fn pascal() -> &'static Vec<Vec<u128>> {
    static TABLE: OnceLock<Vec<Vec<u128>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(PASCAL_ROWS);
        for n in 0..PASCAL_ROWS {
            let mut row = vec![1u128; n + 1];
            for k in 1..n {
                row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
            }
            rows.push(row);
        }
        rows
    })
}

/// Exact binomial coefficient; table lookup below [`PASCAL_ROWS`], otherwise
/// the incremental product (every intermediate division is exact).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    if n < PASCAL_ROWS {
        return pascal()[n][k];
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Number of sorted index tuples of length `m` over `{0, ..., n-1}`.
pub fn multiset_count(n: usize, m: usize) -> usize {
    binomial(n + m - 1, m) as usize
}

/// Colex rank of a sorted (ascending) index tuple.
pub fn rank_sorted_tuple(idx: &[usize]) -> usize {
    idx.iter()
        .enumerate()
        .map(|(t, &i)| binomial(i + t, t + 1) as usize)
        .sum()
}

/// Inverse of [`rank_sorted_tuple`] for tuples of length `m` over
/// `{0, ..., n-1}`.
pub fn unrank_sorted_tuple(rank: usize, m: usize, n: usize) -> Vec<usize> {
    let mut remaining = rank as u128;
    let mut combo = vec![0usize; m];
    for t in (0..m).rev() {
        // largest c with C(c, t+1) <= remaining
        let mut c = t; // C(t, t+1) = 0, always admissible
        while binomial(c + 1, t + 1) <= remaining && c + 1 < n + m {
            c += 1;
        }
        remaining -= binomial(c, t + 1);
        combo[t] = c - t;
    }
    debug_assert_eq!(remaining, 0);
    debug_assert!(combo.iter().all(|&i| i < n));
    combo
}

/// Iterates all sorted index tuples of length `m` over `{0, ..., n-1}` in
/// rank order.
pub fn sorted_tuples(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..multiset_count(n, m)).map(move |r| unrank_sorted_tuple(r, m, n))
}

/// Number of distinct permutations of a sorted tuple: `m! / prod_v mult_v!`.
/// This is the multiplicity weight of a stored entry inside the full
/// `n^m`-entry tensor.
pub fn permutation_count(sorted_idx: &[usize]) -> u128 {
    let m = sorted_idx.len();
    let mut acc: u128 = 1;
    let mut used = 0usize;
    let mut run_start = 0usize;
    for t in 0..=m {
        if t == m || (t > 0 && sorted_idx[t] != sorted_idx[t - 1]) {
            let run = t - run_start;
            // multiply C(used + run, run) -- incremental multinomial
            acc *= binomial(used + run, run);
            used += run;
            run_start = t;
        }
    }
    acc
}

/// Multinomial coefficient `m! / (j_1! ... j_k! (m - sum j)!)` where the final
/// slot absorbs the remaining `m - sum j` units. Computed as a product of
/// binomials of partial sums, so no intermediate exceeds the result.
pub fn multinomial_coefficient(m: usize, parts: &[usize]) -> Result<u128> {
    let total: usize = parts.iter().sum();
    if total > m {
        return Err(Error::Domain(format!(
            "multinomial parts sum to {total}, exceeding order {m}"
        )));
    }
    let mut acc: u128 = 1;
    let mut used = 0usize;
    for &p in parts {
        used += p;
        acc = acc
            .checked_mul(binomial(used, p))
            .ok_or_else(|| Error::Domain(format!("multinomial overflow at order {m}")))?;
    }
    // the implicit last part (m - total) contributes C(m, m - total)
    acc = acc
        .checked_mul(binomial(m, m - total))
        .ok_or_else(|| Error::Domain(format!("multinomial overflow at order {m}")))?;
    Ok(acc)
}
