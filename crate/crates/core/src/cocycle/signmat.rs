//! Sign matrices: per-class orientation vectors over the reduced table.
//!
//! For a fixed reduced permutation table, each configuration class yields a
//! column of orientations in {-1, 0, +1}, one entry per table row. The
//! bilinear kernel combines a first-factor sign vector with a middle- and a
//! last-factor matrix to enumerate all cocycle values in one integer pass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordercomb::{PermTable, RankVector};

use super::or3;

/// Which argument positions of the reduced sum a matrix reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignRole {
    /// `or3` at row positions (0,1,2), unsigned.
    FirstFactor,
    /// `or3` at row positions (0,3,4).
    MiddleFactor,
    /// `or3` at row positions (4,5,6).
    LastFactor,
    /// Permutation sign times `or3` at (0,1,2); the kernel's sign vector.
    CombinedSign,
}

impl SignRole {
    fn positions(self, m: usize) -> Result<[usize; 3]> {
        let pos = match self {
            SignRole::FirstFactor | SignRole::CombinedSign => [0, 1, 2],
            SignRole::MiddleFactor => [0, 3, 4],
            SignRole::LastFactor => [4, 5, 6],
        };
        if pos[2] >= m {
            return Err(Error::Shape(format!(
                "{self:?} reads position {} but table rows have {m} entries",
                pos[2]
            )));
        }
        Ok(pos)
    }
}

/// Column-major matrix of orientation signs: `rows` = table size, one column
/// per configuration class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignMatrix {
    pub role: SignRole,
    pub rows: usize,
    pub cols: usize,
    data: Vec<i8>,
}

impl SignMatrix {
    pub fn column(&self, j: usize) -> &[i8] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.data[col * self.rows + row]
    }

    pub fn payload(&self) -> &[i8] {
        &self.data
    }

    pub(crate) fn from_raw(role: SignRole, rows: usize, cols: usize, data: Vec<i8>) -> SignMatrix {
        debug_assert_eq!(rows * cols, data.len());
        SignMatrix {
            role,
            rows,
            cols,
            data,
        }
    }
}

/// Builds the sign matrix of `role` for `classes` over `table`.
pub fn build_sign_matrix(
    role: SignRole,
    table: &PermTable,
    classes: &[RankVector],
) -> Result<SignMatrix> {
    let m = table.m();
    let pos = role.positions(m)?;
    for (j, class) in classes.iter().enumerate() {
        if class.len() != m {
            return Err(Error::Shape(format!(
                "class column {j} has {} points, table expects {m}",
                class.len()
            )));
        }
    }
    let rows = table.rows.len();
    let mut data = vec![0i8; rows * classes.len()];
    for (j, class) in classes.iter().enumerate() {
        let ranks = class.ranks();
        let col = &mut data[j * rows..(j + 1) * rows];
        for (l, row) in table.rows.iter().enumerate() {
            let a = ranks[row.perm[pos[0]] as usize];
            let b = ranks[row.perm[pos[1]] as usize];
            let c = ranks[row.perm[pos[2]] as usize];
            let v = or3(a, b, c);
            col[l] = if role == SignRole::CombinedSign {
                row.sign * v
            } else {
                v
            };
        }
    }
    Ok(SignMatrix {
        role,
        rows,
        cols: classes.len(),
        data,
    })
}
