//! Exact evaluation of the orientation cocycle and its alternating products.
//!
//! `or3` is the basic 2-cocycle on circle triples (+1 positively oriented,
//! -1 negatively oriented, 0 on any tie). The `2n`-cocycle on `n`-fold
//! products of circles is the alternation of the cup product of `n` copies
//! of `or3`; [`theta_direct`] evaluates it by the full `(2n+1)!` sum and is
//! the ground-truth oracle, [`theta_reduced`] by the quarter-size reduced
//! table, and [`kernel`] hosts the bilinear max search over class tables.

mod eval;
pub mod kernel;
mod signmat;

pub use eval::{theta_direct, theta_reduced};
pub use signmat::{build_sign_matrix, SignMatrix, SignRole};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordercomb::RankVector;
use crate::rat::Rat;

/// Maximum factor count for the direct factorial-sum evaluator.
pub const MAX_DIRECT_FACTORS: usize = 6;

/// Orientation of a rank triple: 0 on ties, otherwise the parity of the
/// permutation sorting `(a,b,c)` ascending (+1 for even).
///
/// Invariant under cyclic shifts of the arguments, negated by any swap.
#[inline]
pub fn or3(a: u8, b: u8, c: u8) -> i8 {
    if a == b || b == c || a == c {
        return 0;
    }
    // exactly two of the three cyclic comparisons hold for positive triples
    let cyclic = (a < b) as u8 + (b < c) as u8 + (c < a) as u8;
    if cyclic == 2 {
        1
    } else {
        -1
    }
}

/// A tuple of `2n+1` points in the `n`-fold product of circles, stored as one
/// rank vector per factor (factor `i` holds the circular order of the `i`-th
/// coordinates of all points). Optional exact angle representatives record
/// where the ranks came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    factors: Vec<RankVector>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    angles: Option<Vec<Vec<Rat>>>,
}

impl Configuration {
    /// Builds a configuration from per-factor rank vectors; each must have
    /// length `2n+1` for `n` = number of factors.
    pub fn new(factors: Vec<RankVector>) -> Result<Configuration> {
        if factors.is_empty() {
            return Err(Error::Validation("configuration needs >= 1 factor".into()));
        }
        let n = factors.len();
        let m = 2 * n + 1;
        for (i, f) in factors.iter().enumerate() {
            if f.len() != m {
                return Err(Error::Validation(format!(
                    "factor {} has {} points, expected {m}",
                    i + 1,
                    f.len()
                )));
            }
        }
        Ok(Configuration {
            factors,
            angles: None,
        })
    }

    /// Builds a configuration from exact angles in `[0,1)`, one list per
    /// factor; ranks are derived from the angles.
    pub fn from_angles(angles: Vec<Vec<Rat>>) -> Result<Configuration> {
        let factors = angles
            .iter()
            .enumerate()
            .map(|(i, list)| {
                for a in list {
                    if *a < (0, 1) || *a >= (1, 1) {
                        return Err(Error::Validation(format!(
                            "factor {} angle {a} outside [0,1)",
                            i + 1
                        )));
                    }
                }
                RankVector::from_values(list)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cfg = Configuration::new(factors)?;
        cfg.angles = Some(angles);
        Ok(cfg)
    }

    /// Attaches angle representatives; they must reproduce the stored ranks.
    pub fn with_angles(mut self, angles: Vec<Vec<Rat>>) -> Result<Configuration> {
        if angles.len() != self.factors.len() {
            return Err(Error::Validation("angle factor count mismatch".into()));
        }
        for (i, (list, factor)) in angles.iter().zip(&self.factors).enumerate() {
            let derived = RankVector::from_values(list)?;
            if derived != *factor {
                return Err(Error::Validation(format!(
                    "factor {}: angles imply ranks {derived:?}, stored ranks are {factor:?}",
                    i + 1
                )));
            }
        }
        self.angles = Some(angles);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    /// Point count `2n+1`.
    pub fn points(&self) -> usize {
        2 * self.factors.len() + 1
    }

    pub fn factors(&self) -> &[RankVector] {
        &self.factors
    }

    pub fn angles(&self) -> Option<&[Vec<Rat>]> {
        self.angles.as_deref()
    }

    /// The configuration with factor order permuted (value-preserving).
    pub fn permute_factors(&self, order: &[usize]) -> Result<Configuration> {
        let mut seen = vec![false; self.n()];
        for &i in order {
            if i >= self.n() || seen[i] {
                return Err(Error::Validation("not a factor permutation".into()));
            }
            seen[i] = true;
        }
        if order.len() != self.n() {
            return Err(Error::Validation("not a factor permutation".into()));
        }
        Configuration::new(order.iter().map(|&i| self.factors[i].clone()).collect())
    }

    /// The configuration with points relabeled by `perm` (new point `p` is
    /// old point `perm[p]`); the cocycle changes by the sign of `perm`.
    pub fn permute_points(&self, perm: &[u8]) -> Result<Configuration> {
        if perm.len() != self.points() {
            return Err(Error::Validation("point permutation length mismatch".into()));
        }
        let factors = self
            .factors
            .iter()
            .map(|f| {
                let ranks: Vec<u8> = perm.iter().map(|&p| f.ranks()[p as usize]).collect();
                RankVector::new(ranks)
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(factors)
    }

    /// The regular configuration: factor `k` (1-based) places point `i` at
    /// angle `(k*i mod (2n+1)) / (2n+1)`.
    pub fn regular(n: usize) -> Result<Configuration> {
        if n == 0 || n > MAX_DIRECT_FACTORS {
            return Err(Error::Budget(format!(
                "regular configuration supported for 1..={MAX_DIRECT_FACTORS} factors, got {n}"
            )));
        }
        let m = 2 * n + 1;
        let angles: Vec<Vec<Rat>> = (1..=n)
            .map(|k| {
                (0..m)
                    .map(|i| Rat::new(((k * i) % m) as i64, m as i64))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::from_angles(angles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn or3_examples() {
        assert_eq!(or3(1, 2, 3), 1);
        assert_eq!(or3(2, 1, 3), -1);
        assert_eq!(or3(1, 1, 3), 0);
        assert_eq!(or3(3, 1, 2), 1);
        assert_eq!(or3(2, 3, 1), 1);
        assert_eq!(or3(1, 3, 2), -1);
        assert_eq!(or3(3, 2, 1), -1);
        assert_eq!(or3(2, 2, 2), 0);
    }

    #[test]
    fn or3_cyclic_and_swap_laws() {
        for a in 1..=5u8 {
            for b in 1..=5u8 {
                for c in 1..=5u8 {
                    assert_eq!(or3(a, b, c), or3(b, c, a));
                    assert_eq!(or3(a, b, c), -or3(b, a, c));
                }
            }
        }
    }

    #[test]
    fn regular_configuration_ranks() {
        let cfg = Configuration::regular(3).unwrap();
        assert_eq!(cfg.factors()[0].ranks(), &[1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(cfg.factors()[1].ranks(), &[1, 3, 5, 7, 2, 4, 6]);
        assert_eq!(cfg.factors()[2].ranks(), &[1, 4, 7, 3, 6, 2, 5]);
    }

    #[test]
    fn angle_rank_consistency_enforced() {
        let ranks = vec![
            RankVector::new(vec![1, 2, 3]).unwrap(),
        ];
        let cfg = Configuration::new(ranks).unwrap();
        let good = vec![vec![
            Rat::new(0, 1).unwrap(),
            Rat::new(1, 3).unwrap(),
            Rat::new(2, 3).unwrap(),
        ]];
        assert!(cfg.clone().with_angles(good).is_ok());
        let bad = vec![vec![
            Rat::new(1, 3).unwrap(),
            Rat::new(0, 1).unwrap(),
            Rat::new(2, 3).unwrap(),
        ]];
        assert!(cfg.with_angles(bad).is_err());
    }

    #[test]
    fn angles_outside_unit_interval_rejected() {
        let bad = vec![vec![
            Rat::new(0, 1).unwrap(),
            Rat::new(1, 1).unwrap(),
            Rat::new(1, 2).unwrap(),
        ]];
        assert!(Configuration::from_angles(bad).is_err());
    }
}
