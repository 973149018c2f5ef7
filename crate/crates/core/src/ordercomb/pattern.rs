//! Sorted tie patterns for the first factor.
//!
//! Because the cocycle is alternating, the points can always be relabeled so
//! that the first factor's ranks are weakly increasing. An [`XPattern`] is
//! such a sorted rank vector, e.g. `(1,1,2,3,4,5,6)`; it determines the sign
//! vector fed to the search kernel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::RankVector;

/// A weakly increasing surjective rank sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct XPattern(RankVector);

impl XPattern {
    pub fn new(ranks: Vec<u8>) -> Result<XPattern> {
        let rv = RankVector::new(ranks)?;
        if !rv.ranks().windows(2).all(|w| w[0] <= w[1]) {
            return Err(Error::Validation(format!(
                "pattern {rv:?} is not weakly increasing"
            )));
        }
        Ok(XPattern(rv))
    }

    pub fn ranks(&self) -> &[u8] {
        self.0.ranks()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn distinct(&self) -> usize {
        self.0.distinct()
    }

    pub fn as_rank_vector(&self) -> &RankVector {
        &self.0
    }

    /// The sorted pattern of an arbitrary rank vector.
    pub fn of(rv: &RankVector) -> XPattern {
        let mut ranks = rv.ranks().to_vec();
        ranks.sort_unstable();
        XPattern(RankVector::new(ranks).expect("sorting preserves validity"))
    }
}

impl std::fmt::Debug for XPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(&self.0, f)
    }
}

impl std::fmt::Display for XPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(&self.0, f)
    }
}

/// All x-patterns of length `2n+1`, lexicographically sorted.
///
/// There are `2^(2n)` of them (one per composition of `2n+1`).
pub fn enumerate_x_patterns(n: usize) -> Result<Vec<XPattern>> {
    if n == 0 || n > 5 {
        return Err(Error::SizeLimit(format!("factor count {n} outside 1..=5")));
    }
    let m = 2 * n + 1;
    let mut out = Vec::with_capacity(1 << (m - 1));
    let mut current: Vec<u8> = Vec::with_capacity(m);
    // one pattern per composition of m: part i = multiplicity of rank i
    fn rec(remaining: usize, next_rank: u8, current: &mut Vec<u8>, out: &mut Vec<XPattern>) {
        if remaining == 0 {
            out.push(XPattern(
                RankVector::new(current.clone()).expect("constructed surjective"),
            ));
            return;
        }
        for part in 1..=remaining {
            for _ in 0..part {
                current.push(next_rank);
            }
            rec(remaining - part, next_rank + 1, current, out);
            for _ in 0..part {
                current.pop();
            }
        }
    }
    rec(m, 1, &mut current, &mut out);
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_powers_of_two() {
        assert_eq!(enumerate_x_patterns(1).unwrap().len(), 4);
        assert_eq!(enumerate_x_patterns(2).unwrap().len(), 16);
        assert_eq!(enumerate_x_patterns(3).unwrap().len(), 64);
        assert!(enumerate_x_patterns(6).is_err());
    }

    #[test]
    fn contains_named_patterns() {
        let pats = enumerate_x_patterns(3).unwrap();
        let has = |ranks: &[u8]| pats.iter().any(|p| p.ranks() == ranks);
        assert!(has(&[1, 2, 3, 4, 5, 6, 7]));
        assert!(has(&[1, 1, 1, 1, 2, 3, 4]));
        assert!(has(&[1, 1, 1, 1, 1, 1, 1]));
        // sorted and distinct
        for w in pats.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn rejects_unsorted() {
        assert!(XPattern::new(vec![1, 2, 1]).is_err());
        assert!(XPattern::new(vec![1, 1, 2]).is_ok());
    }
}
