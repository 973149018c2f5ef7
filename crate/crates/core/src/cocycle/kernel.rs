//! Bilinear max kernel.
//!
//! The cocycle value of a configuration `(x, y_i, z_j)` is the cell
//! `O[i,j] = (1/R) * sum_l sign[l] * Py[l,i] * Pz[l,j]` over the `R` reduced
//! table rows. This module scans all cells exactly and returns the maximal
//! absolute value with its argmax cells.
//!
//! Entries lie in {-1, 0, +1}, so each column packs into two bitmasks
//! (positive and negative support) over the rows where the sign vector is
//! nonzero; a cell is then four AND/popcount passes. Work is tiled over
//! column blocks; tiles merge in index order, so the result is identical for
//! any thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rat::Rat;

use super::SignMatrix;

/// Columns per work tile dispatched to the thread pool.
const TILE_COLS: usize = 256;

#[derive(Clone, Copy, Debug)]
pub struct KernelOptions {
    /// Keep at most this many argmax cells (the lexicographically first).
    pub witness_cap: usize,
    /// The y and z tables hold the same class columns; compute the upper
    /// triangle only and mirror. Callers must re-verify witnesses against the
    /// direct evaluator (the search layer does).
    pub symmetric: bool,
}

impl Default for KernelOptions {
    fn default() -> Self {
        KernelOptions {
            witness_cap: crate::search::DEFAULT_WITNESS_CAP,
            symmetric: false,
        }
    }
}

/// Result of one kernel run.
#[derive(Clone, Debug)]
pub struct KernelOutcome {
    /// Largest |numerator| over all cells (denominator = table rows).
    pub max_abs_numerator: i64,
    /// Number of reduced-table rows.
    pub denominator: i64,
    /// `max_abs_numerator / denominator`, reduced.
    pub value: Rat,
    /// Lexicographically first argmax cells `(y_col, z_col)`, up to the cap.
    /// Empty when the maximum is 0 (every cell attains it).
    pub cells: Vec<(u32, u32)>,
}

/// Bit-packed sign columns over the nonzero-sign rows.
struct PackedColumns {
    words: usize,
    /// Per column: `words` positive-support words then `words` negative.
    bits: Vec<u64>,
}

impl PackedColumns {
    fn pack(matrix: &SignMatrix, nz_rows: &[u32], sign: Option<&[i8]>) -> PackedColumns {
        let words = nz_rows.len().div_ceil(64);
        let mut bits = vec![0u64; matrix.cols * 2 * words];
        for j in 0..matrix.cols {
            let col = matrix.column(j);
            let base = j * 2 * words;
            let (pos, neg) = bits[base..base + 2 * words].split_at_mut(words);
            for (idx, &l) in nz_rows.iter().enumerate() {
                let mut v = col[l as usize];
                if let Some(s) = sign {
                    v *= s[l as usize];
                }
                match v {
                    1 => pos[idx / 64] |= 1 << (idx % 64),
                    -1 => neg[idx / 64] |= 1 << (idx % 64),
                    _ => {}
                }
            }
        }
        PackedColumns { words, bits }
    }

    #[inline]
    fn column(&self, j: usize) -> (&[u64], &[u64]) {
        let base = j * 2 * self.words;
        let col = &self.bits[base..base + 2 * self.words];
        col.split_at(self.words)
    }
}

/// Exact dot product of two {-1,0,+1} columns in packed form.
#[inline]
fn packed_dot(ypos: &[u64], yneg: &[u64], zpos: &[u64], zneg: &[u64]) -> i32 {
    let mut plus = 0u32;
    let mut minus = 0u32;
    // iterator zips elide the bounds checks; the popcount sums are bounded by
    // 64 * word count <= the row count, so wrapping adds are exact and keep
    // debug overflow instrumentation out of the hot loop
    for (((&yp, &yn), &zp), &zn) in ypos.iter().zip(yneg).zip(zpos).zip(zneg) {
        plus = plus.wrapping_add(((yp & zp) | (yn & zn)).count_ones());
        minus = minus.wrapping_add(((yp & zn) | (yn & zp)).count_ones());
    }
    plus as i32 - minus as i32
}

#[derive(Clone, Debug, Default)]
struct TileResult {
    max_abs: i32,
    cells: Vec<(u32, u32)>,
}

impl TileResult {
    fn push(&mut self, num: i32, i: u32, j: u32, cap: usize) {
        let abs = num.abs();
        if abs > self.max_abs {
            self.max_abs = abs;
            self.cells.clear();
        }
        if abs == self.max_abs && self.cells.len() < cap {
            self.cells.push((i, j));
        }
    }

    /// Order-dependent merge: `self` is the earlier tile.
    fn merge(mut self, later: TileResult, cap: usize) -> TileResult {
        use std::cmp::Ordering::*;
        match self.max_abs.cmp(&later.max_abs) {
            Less => later,
            Greater => self,
            Equal => {
                for cell in later.cells {
                    if self.cells.len() >= cap {
                        break;
                    }
                    self.cells.push(cell);
                }
                self
            }
        }
    }
}

/// Maximum of `|O[i,j]|` over all class pairs, with argmax cells.
///
/// `sign` must be a single combined-sign column; `py`, `pz` and `sign` must
/// share the row count. The integer numerator per cell is accumulation-order
/// independent, and tiles merge in index order, so the outcome is
/// deterministic for any thread count.
pub fn bilinear_max(
    sign: &SignMatrix,
    py: &SignMatrix,
    pz: &SignMatrix,
    opts: &KernelOptions,
) -> Result<KernelOutcome> {
    if sign.cols != 1 {
        return Err(Error::Shape(format!(
            "sign vector must be a single column, got {}",
            sign.cols
        )));
    }
    if sign.rows != py.rows || py.rows != pz.rows {
        return Err(Error::Shape(format!(
            "row counts differ: sign {}, y {}, z {}",
            sign.rows, py.rows, pz.rows
        )));
    }
    if opts.symmetric && py.cols != pz.cols {
        return Err(Error::Shape(format!(
            "symmetric mode needs equal column counts, got {} and {}",
            py.cols, pz.cols
        )));
    }
    let rows = sign.rows as i64;
    let sign_col = sign.column(0);

    // Rows where the sign vector vanishes contribute to no cell.
    let nz_rows: Vec<u32> = (0..sign.rows as u32)
        .filter(|&l| sign_col[l as usize] != 0)
        .collect();
    if nz_rows.is_empty() {
        return Ok(KernelOutcome {
            max_abs_numerator: 0,
            denominator: rows,
            value: Rat::ZERO,
            cells: Vec::new(),
        });
    }

    let packed_y = PackedColumns::pack(py, &nz_rows, Some(sign_col));
    let packed_z = PackedColumns::pack(pz, &nz_rows, None);

    let cap = opts.witness_cap;
    // In symmetric mode each kept triangle cell expands to at most two
    // mirrored cells; collecting `cap` generators is enough to recover the
    // lexicographically first `cap` cells of the full rectangle.
    let tile_cap = cap.max(1);

    let tiles: Vec<TileResult> = (0..py.cols.div_ceil(TILE_COLS))
        .into_par_iter()
        .map(|t| {
            let i_lo = t * TILE_COLS;
            let i_hi = ((t + 1) * TILE_COLS).min(py.cols);
            let mut local = TileResult::default();
            // j is tiled too, so one z block stays cache-resident across the
            // whole i range of the tile; each j block keeps its own lex-first
            // `tile_cap` cells and the blocks merge uncapped
            for jt in 0..pz.cols.div_ceil(TILE_COLS) {
                let j_lo = jt * TILE_COLS;
                let j_hi = ((jt + 1) * TILE_COLS).min(pz.cols);
                if opts.symmetric && j_hi <= i_lo {
                    continue;
                }
                let mut block = TileResult::default();
                for i in i_lo..i_hi {
                    let (ypos, yneg) = packed_y.column(i);
                    let j_start = if opts.symmetric { j_lo.max(i) } else { j_lo };
                    for j in j_start..j_hi {
                        let (zpos, zneg) = packed_z.column(j);
                        let num = packed_dot(ypos, yneg, zpos, zneg);
                        block.push(num, i as u32, j as u32, tile_cap);
                    }
                }
                local = local.merge(block, usize::MAX);
            }
            // blocks were visited out of lexicographic order; each retained
            // its own lex-first cells, so sorting the union and truncating
            // yields the tile's lex-first `tile_cap` cells
            local.cells.sort_unstable();
            local.cells.truncate(tile_cap);
            local
        })
        .collect();

    let merged = tiles
        .into_iter()
        .fold(TileResult::default(), |acc, tile| acc.merge(tile, tile_cap));

    let mut cells = merged.cells;
    if opts.symmetric {
        let mut expanded = Vec::with_capacity(cells.len() * 2);
        for &(i, j) in &cells {
            expanded.push((i, j));
            if i != j {
                expanded.push((j, i));
            }
        }
        expanded.sort_unstable();
        expanded.truncate(cap);
        cells = expanded;
    }
    if merged.max_abs == 0 {
        cells = Vec::new();
    }

    Ok(KernelOutcome {
        max_abs_numerator: merged.max_abs as i64,
        denominator: rows,
        value: Rat::new(merged.max_abs as i64, rows)?,
        cells,
    })
}

/// Degenerate two-factor variant: maximum of `|(1/R) * sum_l sign[l] * Py[l,i]|`
/// over single class columns.
pub fn linear_max(sign: &SignMatrix, py: &SignMatrix, opts: &KernelOptions) -> Result<KernelOutcome> {
    if sign.cols != 1 {
        return Err(Error::Shape(format!(
            "sign vector must be a single column, got {}",
            sign.cols
        )));
    }
    if sign.rows != py.rows {
        return Err(Error::Shape(format!(
            "row counts differ: sign {}, y {}",
            sign.rows, py.rows
        )));
    }
    let rows = sign.rows as i64;
    let sign_col = sign.column(0);
    let mut best = TileResult::default();
    for i in 0..py.cols {
        let col = py.column(i);
        let mut num = 0i32;
        for l in 0..py.rows {
            num += (sign_col[l] * col[l]) as i32;
        }
        best.push(num, i as u32, 0, opts.witness_cap.max(1));
    }
    let cells = if best.max_abs == 0 { Vec::new() } else { best.cells };
    Ok(KernelOutcome {
        max_abs_numerator: best.max_abs as i64,
        denominator: rows,
        value: Rat::new(best.max_abs as i64, rows)?,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{build_sign_matrix, SignRole};
    use crate::ordercomb::{reduced_perm_table, RankVector};

    fn rv(ranks: &[u8]) -> RankVector {
        RankVector::new(ranks.to_vec()).unwrap()
    }

    /// Plain triple-loop reference for small tables.
    fn reference_max(sign: &SignMatrix, py: &SignMatrix, pz: &SignMatrix) -> (i64, Vec<(u32, u32)>) {
        let mut max_abs = 0i64;
        let mut cells = Vec::new();
        for i in 0..py.cols {
            for j in 0..pz.cols {
                let mut num = 0i64;
                for l in 0..sign.rows {
                    num += (sign.entry(l, 0) * py.entry(l, i) * pz.entry(l, j)) as i64;
                }
                let abs = num.abs();
                if abs > max_abs {
                    max_abs = abs;
                    cells.clear();
                }
                if abs == max_abs {
                    cells.push((i as u32, j as u32));
                }
            }
        }
        (max_abs, cells)
    }

    #[test]
    fn matches_reference_on_small_tables() {
        let table = reduced_perm_table(2).unwrap();
        let classes: Vec<RankVector> = crate::ordercomb::enumerate_weak_orders(5)
            .unwrap()
            .into_iter()
            .step_by(7)
            .collect();
        let sign =
            build_sign_matrix(SignRole::CombinedSign, &table, &[rv(&[1, 2, 3, 4, 5])]).unwrap();
        let py = build_sign_matrix(SignRole::MiddleFactor, &table, &classes).unwrap();
        let pz = build_sign_matrix(SignRole::MiddleFactor, &table, &classes).unwrap();
        let opts = KernelOptions {
            witness_cap: 10_000,
            symmetric: false,
        };
        let got = bilinear_max(&sign, &py, &pz, &opts).unwrap();
        let (want_max, want_cells) = reference_max(&sign, &py, &pz);
        assert_eq!(got.max_abs_numerator, want_max);
        assert_eq!(got.cells, want_cells);

        // symmetric traversal agrees when the tables coincide
        let sym = bilinear_max(
            &sign,
            &py,
            &pz,
            &KernelOptions {
                witness_cap: 10_000,
                symmetric: true,
            },
        )
        .unwrap();
        assert_eq!(sym.max_abs_numerator, want_max);
        assert_eq!(sym.cells, want_cells);
    }

    #[test]
    fn zero_sign_vector_gives_zero() {
        let table = reduced_perm_table(3).unwrap();
        // two distinct ranks only: every first-factor triple has a tie
        let sign =
            build_sign_matrix(SignRole::CombinedSign, &table, &[rv(&[1, 1, 1, 1, 1, 2, 2])])
                .unwrap();
        let classes = [rv(&[1, 2, 3, 4, 5, 6, 7]), rv(&[1, 3, 5, 7, 2, 4, 6])];
        let py = build_sign_matrix(SignRole::MiddleFactor, &table, &classes).unwrap();
        let pz = build_sign_matrix(SignRole::LastFactor, &table, &classes).unwrap();
        let out = bilinear_max(&sign, &py, &pz, &KernelOptions::default()).unwrap();
        assert_eq!(out.value, Rat::ZERO);
        assert!(out.cells.is_empty());
    }

    #[test]
    fn shape_mismatch_rejected() {
        let t2 = reduced_perm_table(2).unwrap();
        let t3 = reduced_perm_table(3).unwrap();
        let sign =
            build_sign_matrix(SignRole::CombinedSign, &t2, &[rv(&[1, 2, 3, 4, 5])]).unwrap();
        let py = build_sign_matrix(SignRole::MiddleFactor, &t3, &[rv(&[1, 2, 3, 4, 5, 6, 7])])
            .unwrap();
        let pz = py.clone();
        assert!(bilinear_max(&sign, &py, &pz, &KernelOptions::default()).is_err());
    }
}
