//! Class tables: the column sets the norm search ranges over.
//!
//! The exhaustive tables are all weak orders of `2n+1` points reduced by the
//! circle symmetries (rotation, optionally reflection) to canonical
//! representatives. Two fixed compatibility tables reproduce the historical
//! case analysis for 7 points: the 360 anchored distinct orders (rank 1 at
//! point 0, point 1 before point 2) and the 7710-column stack of those plus
//! every multiset permutation of seven specific tie patterns.

use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cache::{fnv1a64, CacheFile, CacheKind};
use crate::cocycle::{build_sign_matrix, SignMatrix, SignRole};
use crate::error::{Error, Result};
use crate::ordercomb::{
    canonicalize_cyclic, reduced_perm_table, PermTable, RankVector, WeakOrderIter,
};

/// Which class table backs a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    /// Canonical weak orders under rotation + reflection.
    Dihedral,
    /// Canonical weak orders under rotation only.
    Rotation,
    /// Anchored distinct orders (360 columns for 7 points).
    CompatDistinct,
    /// The stacked 7710-column table (7 points only).
    CompatStacked,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::Dihedral => "dihedral",
            TableKind::Rotation => "rotation",
            TableKind::CompatDistinct => "distinct",
            TableKind::CompatStacked => "stacked",
        }
    }
}

/// Canonical weak-order classes of `m` points, lexicographically sorted.
pub fn canonical_classes(m: usize, use_reflection: bool) -> Result<Vec<RankVector>> {
    let mut out: Vec<RankVector> = WeakOrderIter::new(m)?
        .filter_map(|rv| {
            let canon = canonicalize_cyclic(&rv, use_reflection);
            (canon == rv).then_some(rv)
        })
        .collect();
    // WeakOrderIter is lexicographic already; keep the contract explicit.
    debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
    out.shrink_to_fit();
    Ok(out)
}

/// Anchored distinct orders of `m` points: permutations of `1..=m` with rank
/// 1 at point 0 and point 1 ranked before point 2. A complete set of
/// representatives of the dihedral classes of distinct circular orders
/// (360 columns for `m = 7`).
pub fn compat_distinct_table(m: usize) -> Result<Vec<RankVector>> {
    if !(3..=9).contains(&m) {
        return Err(Error::SizeLimit(format!(
            "anchored distinct table for 3..=9 points, got {m}"
        )));
    }
    let rest: Vec<u8> = (2..=m as u8).collect();
    let mut out = Vec::new();
    for perm in rest.iter().copied().permutations(m - 1) {
        if perm[0] < perm[1] {
            let mut ranks = Vec::with_capacity(m);
            ranks.push(1);
            ranks.extend_from_slice(&perm);
            out.push(RankVector::new(ranks)?);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The tie patterns stacked (after the distinct block) in the 7710-column
/// compatibility table, in stacking order.
const STACKED_TIE_PATTERNS: [[u8; 7]; 7] = [
    [1, 1, 2, 3, 4, 5, 6],
    [1, 1, 2, 2, 3, 4, 5],
    [1, 1, 2, 3, 3, 4, 5],
    [1, 1, 1, 2, 3, 4, 5],
    [1, 1, 2, 2, 3, 3, 4],
    [1, 1, 1, 2, 2, 3, 4],
    [1, 1, 1, 2, 3, 3, 4],
];

/// All distinct permutations of a multiset, lexicographically sorted.
fn multiset_permutations(pattern: &[u8]) -> Vec<RankVector> {
    let mut current = pattern.to_vec();
    current.sort_unstable();
    let mut out = Vec::new();
    // next_permutation loop over the sorted multiset
    loop {
        out.push(RankVector::new(current.clone()).expect("permutation of a valid pattern"));
        // find rightmost ascent
        let Some(i) = (0..current.len() - 1).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..current.len())
            .rev()
            .find(|&j| current[j] > current[i])
            .unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// The 7710-column stacked table: 360 anchored distinct orders followed by
/// all multiset permutations of the seven stacked tie patterns, block by
/// block.
pub fn compat_stacked_table() -> Result<Vec<RankVector>> {
    let mut out = compat_distinct_table(7)?;
    for pattern in &STACKED_TIE_PATTERNS {
        out.extend(multiset_permutations(pattern));
    }
    Ok(out)
}

/// Classes for `n` factors (`2n+1` points) under the requested reduction.
pub fn class_table(n: usize, kind: TableKind) -> Result<Vec<RankVector>> {
    let m = 2 * n + 1;
    match kind {
        TableKind::Dihedral => canonical_classes(m, true),
        TableKind::Rotation => canonical_classes(m, false),
        TableKind::CompatDistinct => compat_distinct_table(m),
        TableKind::CompatStacked => {
            if n != 3 {
                return Err(Error::Capability(format!(
                    "stacked table exists for 3 factors only, got {n}"
                )));
            }
            compat_stacked_table()
        }
    }
}

/// A class table with its prebuilt sign matrices, ready for kernel runs.
#[derive(Clone)]
pub struct TableSet {
    pub n: usize,
    pub kind: TableKind,
    pub classes: Arc<Vec<RankVector>>,
    pub perm_table: Arc<PermTable>,
    /// Orientation matrix reading row positions (0,3,4).
    pub middle: Arc<SignMatrix>,
    /// Orientation matrix reading row positions (4,5,6); `None` for n=2.
    pub last: Option<Arc<SignMatrix>>,
    /// FNV-1a 64 over the class payload, hex.
    pub fingerprint: String,
}

impl TableSet {
    /// Builds classes, the reduced permutation table, and both sign matrices.
    pub fn build(n: usize, kind: TableKind) -> Result<TableSet> {
        if !(2..=3).contains(&n) {
            return Err(Error::Capability(format!(
                "class-table search supports 2 or 3 factors, got {n}"
            )));
        }
        let classes = class_table(n, kind)?;
        Self::from_classes(n, kind, classes)
    }

    /// Wraps an externally supplied class list (e.g. loaded from cache).
    pub fn from_classes(n: usize, kind: TableKind, classes: Vec<RankVector>) -> Result<TableSet> {
        let perm_table = Arc::new(reduced_perm_table(n)?);
        let middle = Arc::new(build_sign_matrix(
            SignRole::MiddleFactor,
            &perm_table,
            &classes,
        )?);
        let last = if n == 3 {
            Some(Arc::new(build_sign_matrix(
                SignRole::LastFactor,
                &perm_table,
                &classes,
            )?))
        } else {
            None
        };
        let fingerprint = format!("{:016x}", fnv1a64(&class_payload(&classes)));
        Ok(TableSet {
            n,
            kind,
            classes: Arc::new(classes),
            perm_table,
            middle,
            last,
            fingerprint,
        })
    }

    pub fn columns(&self) -> usize {
        self.classes.len()
    }

    /// Human-readable table name for reports.
    pub fn name(&self) -> String {
        format!("{}-{}pts", self.kind.as_str(), 2 * self.n + 1)
    }

    /// Serializes the pieces of this table set as cache records.
    pub fn to_cache_records(&self) -> Vec<(CacheKind, CacheFile)> {
        let m = 2 * self.n + 1;
        let class_payload: Vec<i8> = self
            .classes
            .iter()
            .flat_map(|rv| rv.ranks().iter().map(|&r| r as i8))
            .collect();
        let mut out = vec![(
            CacheKind::ClassTable,
            CacheFile::new(
                self.n as u8,
                CacheKind::ClassTable,
                m as u32,
                self.columns() as u32,
                class_payload,
            )
            .expect("consistent dimensions"),
        )];
        out.push((
            CacheKind::SignMiddle,
            CacheFile::new(
                self.n as u8,
                CacheKind::SignMiddle,
                self.middle.rows as u32,
                self.middle.cols as u32,
                self.middle.payload().to_vec(),
            )
            .expect("consistent dimensions"),
        ));
        if let Some(last) = &self.last {
            out.push((
                CacheKind::SignLast,
                CacheFile::new(
                    self.n as u8,
                    CacheKind::SignLast,
                    last.rows as u32,
                    last.cols as u32,
                    last.payload().to_vec(),
                )
                .expect("consistent dimensions"),
            ));
        }
        out
    }

    /// Rebuilds a table set from cached records, verifying shapes. The class
    /// record is required; sign matrices are taken from cache when present
    /// and rebuilt otherwise.
    pub fn from_cache_records(
        n: usize,
        kind: TableKind,
        class_record: &CacheFile,
        middle_record: Option<&CacheFile>,
        last_record: Option<&CacheFile>,
    ) -> Result<TableSet> {
        let m = 2 * n + 1;
        if class_record.kind != CacheKind::ClassTable
            || class_record.n as usize != n
            || class_record.rows as usize != m
        {
            return Err(Error::Cache("class record does not match request".into()));
        }
        let classes: Vec<RankVector> = class_record
            .payload
            .chunks_exact(m)
            .map(|chunk| RankVector::new(chunk.iter().map(|&b| b as u8).collect()))
            .collect::<Result<Vec<_>>>()?;
        let perm_table = Arc::new(reduced_perm_table(n)?);
        let rows = perm_table.rows.len();
        let expect_matrix = |record: &CacheFile, kind: CacheKind| -> Result<Vec<i8>> {
            if record.kind != kind
                || record.n as usize != n
                || record.rows as usize != rows
                || record.cols as usize != classes.len()
            {
                return Err(Error::Cache(format!("{kind:?} record does not match request")));
            }
            Ok(record.payload.clone())
        };
        let middle = match middle_record {
            Some(record) => Arc::new(SignMatrix::from_raw(
                SignRole::MiddleFactor,
                rows,
                classes.len(),
                expect_matrix(record, CacheKind::SignMiddle)?,
            )),
            None => Arc::new(build_sign_matrix(
                SignRole::MiddleFactor,
                &perm_table,
                &classes,
            )?),
        };
        let last = if n == 3 {
            Some(match last_record {
                Some(record) => Arc::new(SignMatrix::from_raw(
                    SignRole::LastFactor,
                    rows,
                    classes.len(),
                    expect_matrix(record, CacheKind::SignLast)?,
                )),
                None => Arc::new(build_sign_matrix(
                    SignRole::LastFactor,
                    &perm_table,
                    &classes,
                )?),
            })
        } else {
            None
        };
        let fingerprint = format!("{:016x}", fnv1a64(&class_payload(&classes)));
        Ok(TableSet {
            n,
            kind,
            classes: Arc::new(classes),
            perm_table,
            middle,
            last,
            fingerprint,
        })
    }
}

/// Flat byte payload of a class table (for fingerprints and cache files).
pub fn class_payload(classes: &[RankVector]) -> Vec<u8> {
    classes.iter().flat_map(|rv| rv.ranks().iter().copied()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compat_table_sizes() {
        assert_eq!(compat_distinct_table(7).unwrap().len(), 360);
        assert_eq!(compat_stacked_table().unwrap().len(), 7710);
        assert_eq!(compat_distinct_table(5).unwrap().len(), 12);
    }

    #[test]
    fn stacked_block_sizes() {
        // block sizes: 360 + 2520 + 1260 + 1260 + 840 + 630 + 420 + 420
        let sizes: Vec<usize> = STACKED_TIE_PATTERNS
            .iter()
            .map(|p| multiset_permutations(p).len())
            .collect();
        assert_eq!(sizes, vec![2520, 1260, 1260, 840, 630, 420, 420]);
    }

    #[test]
    fn anchored_constraints_hold() {
        for rv in compat_distinct_table(7).unwrap() {
            let r = rv.ranks();
            assert_eq!(r[0], 1);
            assert!(r[1] < r[2]);
            assert_eq!(rv.distinct(), 7);
        }
    }

    #[test]
    fn three_point_rotation_classes() {
        let classes = class_table(1, TableKind::Rotation).unwrap();
        let want: Vec<RankVector> = [
            vec![1u8, 1, 1],
            vec![1, 1, 2],
            vec![1, 2, 1],
            vec![1, 2, 2],
            vec![1, 2, 3],
            vec![1, 3, 2],
        ]
        .into_iter()
        .map(|r| RankVector::new(r).unwrap())
        .collect();
        assert_eq!(classes, want);
        // reflection merges the two distinct orders
        let dihedral = class_table(1, TableKind::Dihedral).unwrap();
        assert_eq!(dihedral.len(), 5);
    }

    #[test]
    fn canonical_classes_are_canonical_and_sorted() {
        let classes = canonical_classes(5, true).unwrap();
        for c in &classes {
            assert_eq!(&canonicalize_cyclic(c, true), c);
        }
        for w in classes.windows(2) {
            assert!(w[0] < w[1]);
        }
        // distinct orders of 5 points: free dihedral action, 120/10 classes
        let distinct = classes.iter().filter(|c| c.distinct() == 5).count();
        assert_eq!(distinct, 12);
    }

    #[test]
    fn multiset_permutation_counts() {
        assert_eq!(multiset_permutations(&[1, 2, 3]).len(), 6);
        assert_eq!(multiset_permutations(&[1, 1, 2]).len(), 3);
        assert_eq!(multiset_permutations(&[1, 1, 1]).len(), 1);
    }

    #[test]
    fn cache_records_roundtrip() {
        let set = TableSet::build(2, TableKind::CompatDistinct).unwrap();
        let records = set.to_cache_records();
        let class_record = &records[0].1;
        let middle_record = &records[1].1;
        let back = TableSet::from_cache_records(
            2,
            TableKind::CompatDistinct,
            class_record,
            Some(middle_record),
            None,
        )
        .unwrap();
        assert_eq!(back.classes, set.classes);
        assert_eq!(back.middle.payload(), set.middle.payload());
        assert_eq!(back.fingerprint, set.fingerprint);
        // a mismatched record is refused
        assert!(TableSet::from_cache_records(
            3,
            TableKind::CompatDistinct,
            class_record,
            None,
            None
        )
        .is_err());
    }
}
