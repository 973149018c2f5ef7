//! Direct and reduced evaluation of the alternating cocycle product.

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::ordercomb::{reduced_perm_table, PermTable};
use crate::rat::Rat;

use super::{or3, Configuration, MAX_DIRECT_FACTORS};

/// Per-factor lookup of `or3` over point indices: `table[(p*m + q)*m + r]`.
pub(crate) struct OrTables {
    m: usize,
    tables: Vec<Vec<i8>>,
}

impl OrTables {
    pub(crate) fn new(cfg: &Configuration) -> OrTables {
        let m = cfg.points();
        let tables = cfg
            .factors()
            .iter()
            .map(|f| {
                let ranks = f.ranks();
                let mut t = vec![0i8; m * m * m];
                for p in 0..m {
                    for q in 0..m {
                        for r in 0..m {
                            t[(p * m + q) * m + r] = or3(ranks[p], ranks[q], ranks[r]);
                        }
                    }
                }
                t
            })
            .collect();
        OrTables { m, tables }
    }

    /// Product of per-factor orientations at the cup positions
    /// `(2f, 2f+1, 2f+2)` of `points`.
    #[inline]
    fn cup_product(&self, points: &[u8]) -> i8 {
        let m = self.m;
        let mut prod = 1i8;
        for (f, t) in self.tables.iter().enumerate() {
            let a = points[2 * f] as usize;
            let b = points[2 * f + 1] as usize;
            let c = points[2 * f + 2] as usize;
            prod *= t[(a * m + b) * m + c];
            if prod == 0 {
                return 0;
            }
        }
        prod
    }

    /// Orientation of factor `f` at three point indices.
    #[inline]
    pub(crate) fn at(&self, f: usize, a: usize, b: usize, c: usize) -> i8 {
        self.tables[f][(a * self.m + b) * self.m + c]
    }
}

fn factorial(m: usize) -> i64 {
    (1..=m as i64).product()
}

/// Ground-truth evaluator: the full `(2n+1)!` alternating sum of cup products
/// of per-factor orientations. Exact; `n <= 6`.
pub fn theta_direct(cfg: &Configuration) -> Result<Rat> {
    let n = cfg.n();
    if n > MAX_DIRECT_FACTORS {
        return Err(Error::Budget(format!(
            "direct evaluation limited to {MAX_DIRECT_FACTORS} factors, got {n}"
        )));
    }
    let m = cfg.points();
    let tables = OrTables::new(cfg);

    // Heap's algorithm: every step is a single transposition, so the
    // permutation sign just alternates.
    let mut points: Vec<u8> = (0..m as u8).collect();
    let mut c = vec![0usize; m];
    let mut sign = 1i64;
    let mut acc: i64 = tables.cup_product(&points) as i64;
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                points.swap(0, i);
            } else {
                points.swap(c[i], i);
            }
            c[i] += 1;
            i = 0;
            sign = -sign;
            let term = tables.cup_product(&points) as i64;
            acc = acc
                .checked_add(sign * term)
                .ok_or_else(|| Error::Overflow("direct sum accumulator".into()))?;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Rat::new(acc, factorial(m))
}

static TABLE_N2: Lazy<PermTable> = Lazy::new(|| reduced_perm_table(2).expect("n=2 supported"));
static TABLE_N3: Lazy<PermTable> = Lazy::new(|| reduced_perm_table(3).expect("n=3 supported"));

pub(crate) fn cached_perm_table(n: usize) -> Result<&'static PermTable> {
    match n {
        2 => Ok(&TABLE_N2),
        3 => Ok(&TABLE_N3),
        _ => Err(Error::Capability(format!(
            "no reduced permutation table for n={n}; use theta_direct"
        ))),
    }
}

/// Reduced-table evaluator for `n` in {2, 3}.
///
/// Two rewrites shrink the sum: the middle/last factor's first argument is
/// substituted from position 2 to position 0 (an index shuffle that leaves
/// the alternating sum unchanged), after which the summand is invariant under
/// swapping positions (1,2) and the trailing pair, collapsing `(2n+1)!` terms
/// to a quarter. Equals [`theta_direct`] on every input; that equality is
/// enforced by the test suites rather than assumed.
pub fn theta_reduced(cfg: &Configuration) -> Result<Rat> {
    let n = cfg.n();
    let table = cached_perm_table(n)?;
    let tables = OrTables::new(cfg);
    let mut acc: i64 = 0;
    for row in &table.rows {
        let p = &row.perm;
        let mut term = tables.at(
            0,
            p[0] as usize,
            p[1] as usize,
            p[2] as usize,
        );
        if term == 0 {
            continue;
        }
        term *= tables.at(1, p[0] as usize, p[3] as usize, p[4] as usize);
        if term == 0 {
            continue;
        }
        if n == 3 {
            term *= tables.at(2, p[4] as usize, p[5] as usize, p[6] as usize);
            if term == 0 {
                continue;
            }
        }
        acc = acc
            .checked_add((row.sign * term) as i64)
            .ok_or_else(|| Error::Overflow("reduced sum accumulator".into()))?;
    }
    Rat::new(acc, table.rows.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordercomb::RankVector;

    fn cfg_from(ranks: &[&[u8]]) -> Configuration {
        Configuration::new(
            ranks
                .iter()
                .map(|r| RankVector::new(r.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn regular_values() {
        let r1 = theta_direct(&Configuration::regular(1).unwrap()).unwrap();
        assert_eq!(r1, Rat::integer(1));
        let r2 = theta_direct(&Configuration::regular(2).unwrap()).unwrap();
        assert_eq!(r2, Rat::new(2, 3).unwrap());
        let r3 = theta_direct(&Configuration::regular(3).unwrap()).unwrap();
        assert_eq!(r3, Rat::new(11, 45).unwrap());
    }

    #[test]
    fn reduced_matches_direct_on_regular() {
        for n in [2, 3] {
            let cfg = Configuration::regular(n).unwrap();
            assert_eq!(
                theta_reduced(&cfg).unwrap(),
                theta_direct(&cfg).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn duplicated_point_column_vanishes() {
        // points 0 and 1 identical in every factor => alternating => 0
        let cfg = cfg_from(&[
            &[1, 1, 2, 3, 4, 5, 6],
            &[2, 2, 3, 1, 4, 6, 5],
            &[1, 1, 3, 2, 5, 4, 6],
        ]);
        assert_eq!(theta_direct(&cfg).unwrap(), Rat::ZERO);
        assert_eq!(theta_reduced(&cfg).unwrap(), Rat::ZERO);
    }

    #[test]
    fn all_ties_factor_vanishes() {
        let cfg = cfg_from(&[
            &[1, 1, 1, 1, 1, 1, 1],
            &[1, 2, 3, 4, 5, 6, 7],
            &[1, 3, 5, 7, 2, 4, 6],
        ]);
        assert_eq!(theta_direct(&cfg).unwrap(), Rat::ZERO);
        assert_eq!(theta_reduced(&cfg).unwrap(), Rat::ZERO);
    }

    #[test]
    fn budget_error_beyond_six_factors() {
        let m = 2 * 7 + 1;
        let factors = vec![RankVector::new((1..=m as u8).collect()).unwrap(); 7];
        let cfg = Configuration::new(factors).unwrap();
        assert!(matches!(theta_direct(&cfg), Err(Error::Budget(_))));
    }
}
