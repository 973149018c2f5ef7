//! Circular weak orders and reduced permutation tables.
//!
//! A configuration of `m` labeled points on a circle is encoded as a
//! [`RankVector`]: cut the circle just below the smallest value and record,
//! for each point, the rank of its value among the distinct values present
//! (1 = smallest, ties share a rank, no gaps). Orientation of any triple of
//! points depends only on these ranks, so the rank vector is the complete
//! combinatorial state of one circle factor.

mod canonical;
mod pattern;
mod perm;
mod weak;

pub use canonical::{canonicalize_cyclic, dihedral_orbit};
pub use pattern::{enumerate_x_patterns, XPattern};
pub use perm::{perm_parity_by_inversions, reduced_perm_table, PermRow, PermTable};
pub use weak::{enumerate_weak_orders, WeakOrderIter, MAX_POINTS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A circular weak order on `m` labeled points, as ranks with ties.
///
/// Invariants: every rank is in `1..=k` for `k = max rank`, and every value in
/// that range occurs (surjective, no gaps).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RankVector {
    ranks: Vec<u8>,
}

impl RankVector {
    pub fn new(ranks: Vec<u8>) -> Result<RankVector> {
        if ranks.is_empty() {
            return Err(Error::Validation("empty rank vector".into()));
        }
        let k = *ranks.iter().max().unwrap() as usize;
        if k > ranks.len() {
            return Err(Error::Validation(format!(
                "max rank {k} exceeds point count {}",
                ranks.len()
            )));
        }
        let mut seen = vec![false; k + 1];
        for &r in &ranks {
            if r == 0 {
                return Err(Error::Validation("ranks are 1-based".into()));
            }
            seen[r as usize] = true;
        }
        if !seen[1..].iter().all(|&s| s) {
            return Err(Error::Validation(format!(
                "ranks {ranks:?} have gaps; must be surjective onto 1..=k"
            )));
        }
        Ok(RankVector { ranks })
    }

    /// Re-ranks arbitrary comparable values into a valid rank vector.
    pub fn from_values<T: Ord + Copy>(values: &[T]) -> Result<RankVector> {
        if values.is_empty() {
            return Err(Error::Validation("empty rank vector".into()));
        }
        let mut distinct: Vec<T> = values.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let ranks = values
            .iter()
            .map(|v| (distinct.binary_search(v).unwrap() + 1) as u8)
            .collect();
        Ok(RankVector { ranks })
    }

    pub fn ranks(&self) -> &[u8] {
        &self.ranks
    }

    /// Point count `m`.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Number of distinct circle points represented.
    pub fn distinct(&self) -> usize {
        *self.ranks.iter().max().unwrap() as usize
    }
}

impl std::fmt::Debug for RankVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

impl std::fmt::Display for RankVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_vector_invariants() {
        assert!(RankVector::new(vec![1, 2, 3]).is_ok());
        assert!(RankVector::new(vec![2, 1]).is_ok());
        assert!(RankVector::new(vec![1, 1, 1]).is_ok());
        // gap: rank 2 missing
        assert!(RankVector::new(vec![1, 3, 3]).is_err());
        // 0 is not a rank
        assert!(RankVector::new(vec![0, 1]).is_err());
        // max rank above point count
        assert!(RankVector::new(vec![4]).is_err());
        assert!(RankVector::new(vec![]).is_err());
    }

    #[test]
    fn from_values_compresses() {
        let rv = RankVector::from_values(&[10, -3, 10, 7]).unwrap();
        assert_eq!(rv.ranks(), &[3, 1, 3, 2]);
        assert_eq!(rv.distinct(), 3);
    }
}
