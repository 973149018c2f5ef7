//! Reduced permutation tables.
//!
//! The alternating sum defining the cocycle is symmetrized over two argument
//! swaps that leave each summand invariant, so it collapses to a quarter-size
//! table: permutations of `{0..2n}` with the entries at two designated
//! position pairs in ascending order. For n=3 that is the 1260-row table of
//! permutations of `{0..6}` with `p[1] < p[2]` and `p[5] < p[6]`; for n=2 the
//! 30 permutations of `{0..4}` with `p[1] < p[2]` and `p[3] < p[4]`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One table row: a permutation of `{0..2n}` and its parity sign.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermRow {
    pub perm: Vec<u8>,
    pub sign: i8,
}

/// Reduced permutation table for the fast evaluation path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermTable {
    pub n: usize,
    pub rows: Vec<PermRow>,
    /// Adjacent position pairs constrained to ascending order.
    pub constraints: Vec<(usize, usize)>,
}

impl PermTable {
    /// Tuple length `2n+1`.
    pub fn m(&self) -> usize {
        2 * self.n + 1
    }
}

/// Parity of a permutation by counting inversions: +1 even, -1 odd.
pub fn perm_parity_by_inversions(perm: &[u8]) -> i8 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Builds the reduced table for `n` factors (`n` in {2, 3}), rows in
/// lexicographic order.
pub fn reduced_perm_table(n: usize) -> Result<PermTable> {
    let constraints: Vec<(usize, usize)> = match n {
        2 => vec![(1, 2), (3, 4)],
        3 => vec![(1, 2), (5, 6)],
        _ => {
            return Err(Error::Capability(format!(
                "no reduced permutation table for n={n}; use the direct evaluator"
            )))
        }
    };
    let m = 2 * n + 1;
    let rows = (0..m as u8)
        .permutations(m)
        .filter(|p| constraints.iter().all(|&(a, b)| p[a] < p[b]))
        .map(|perm| {
            let sign = perm_parity_by_inversions(&perm);
            PermRow { perm, sign }
        })
        .collect();
    Ok(PermTable {
        n,
        rows,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_counts() {
        assert_eq!(reduced_perm_table(3).unwrap().rows.len(), 1260);
        assert_eq!(reduced_perm_table(2).unwrap().rows.len(), 30);
        assert!(reduced_perm_table(4).is_err());
        assert!(reduced_perm_table(1).is_err());
    }

    #[test]
    fn identity_row_has_positive_sign() {
        let table = reduced_perm_table(3).unwrap();
        let id: Vec<u8> = (0..7).collect();
        let row = table.rows.iter().find(|r| r.perm == id).unwrap();
        assert_eq!(row.sign, 1);
        // lexicographic order puts the identity first
        assert_eq!(table.rows[0].perm, id);
    }

    #[test]
    fn constraints_hold_and_rows_distinct_sorted() {
        for n in [2, 3] {
            let table = reduced_perm_table(n).unwrap();
            for row in &table.rows {
                for &(a, b) in &table.constraints {
                    assert!(row.perm[a] < row.perm[b]);
                }
            }
            for w in table.rows.windows(2) {
                assert!(w[0].perm < w[1].perm);
            }
        }
    }

    /// Independent parity check: cycle decomposition instead of inversions.
    fn parity_by_cycles(perm: &[u8]) -> i8 {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i] as usize;
            }
        }
        if (n - cycles) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn signs_match_cycle_parity() {
        let table = reduced_perm_table(3).unwrap();
        for row in &table.rows {
            assert_eq!(row.sign, parity_by_cycles(&row.perm), "row {:?}", row.perm);
        }
    }
}
