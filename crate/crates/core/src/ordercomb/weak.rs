//! Enumeration of all weak orders (surjective rank assignments) on `m` points.

use crate::error::{Error, Result};

use super::RankVector;

/// Hard cap on the point count for enumeration requests.
pub const MAX_POINTS: usize = 11;

/// Streaming enumerator over all weak orders of `m` labeled points, in
/// lexicographic order of the rank vector.
///
/// The count is the m-th Fubini number (13 for m=3, 47293 for m=7), which
/// grows fast; the iterator form avoids materializing the list when only a
/// scan is needed.
pub struct WeakOrderIter {
    m: usize,
    // DFS state: assigned prefix, per-value usage counts, running max,
    // number of values in 1..=max still unused.
    prefix: Vec<u8>,
    counts: Vec<u32>,
    max_so_far: u8,
    missing: usize,
    done: bool,
}

impl WeakOrderIter {
    pub fn new(m: usize) -> Result<WeakOrderIter> {
        if m == 0 || m > MAX_POINTS {
            return Err(Error::SizeLimit(format!(
                "point count {m} outside 1..={MAX_POINTS}"
            )));
        }
        Ok(WeakOrderIter {
            m,
            prefix: Vec::with_capacity(m),
            counts: vec![0; m + 1],
            max_so_far: 0,
            missing: 0,
            done: false,
        })
    }

    fn push(&mut self, v: u8) {
        self.prefix.push(v);
        if v > self.max_so_far {
            // values strictly between old and new max become gaps to fill
            self.missing += (v - self.max_so_far - 1) as usize;
            self.max_so_far = v;
        } else if self.counts[v as usize] == 0 {
            self.missing -= 1;
        }
        self.counts[v as usize] += 1;
    }

    fn pop(&mut self) -> u8 {
        let v = self.prefix.pop().unwrap();
        self.counts[v as usize] -= 1;
        if v == self.max_so_far {
            if self.counts[v as usize] == 0 {
                // rewind max to the largest still-used value; everything
                // between it and v had been counted as missing
                let mut new_max = v - 1;
                while new_max > 0 && self.counts[new_max as usize] == 0 {
                    new_max -= 1;
                }
                self.missing -= (v - new_max - 1) as usize;
                self.max_so_far = new_max;
            }
        } else if self.counts[v as usize] == 0 {
            self.missing += 1;
        }
        v
    }

    /// Largest value admissible at the current position (feasibility: every
    /// gap must still be fillable by the remaining positions).
    fn value_bound(&self) -> u8 {
        let remaining_after = self.m - self.prefix.len() - 1;
        let by_budget = self.max_so_far as usize + remaining_after + 1 - self.missing;
        by_budget.min(self.m) as u8
    }

    fn feasible(&self, v: u8) -> bool {
        if v > self.value_bound() {
            return false;
        }
        if v <= self.max_so_far && self.counts[v as usize] == 0 {
            return true; // fills a gap
        }
        // not filling a gap: every current gap still needs a slot
        let extra_missing = if v > self.max_so_far {
            (v - self.max_so_far - 1) as usize
        } else {
            0
        };
        self.missing + extra_missing < self.m - self.prefix.len()
    }
}

impl Iterator for WeakOrderIter {
    type Item = RankVector;

    fn next(&mut self) -> Option<RankVector> {
        if self.done {
            return None;
        }
        // Depth-first, smallest value first => lexicographic output order.
        // `resume_from` holds the value to try next at the current depth.
        let mut resume_from: u8 = 1;
        loop {
            if self.prefix.len() == self.m {
                // emitted on arrival; backtrack to find the next leaf
                let v = self.pop();
                resume_from = v + 1;
                continue;
            }
            let mut advanced = false;
            let mut v = resume_from;
            while v <= self.m as u8 {
                if self.feasible(v) {
                    self.push(v);
                    advanced = true;
                    break;
                }
                v += 1;
            }
            if advanced {
                resume_from = 1;
                if self.prefix.len() == self.m {
                    debug_assert_eq!(self.missing, 0);
                    return Some(RankVector {
                        ranks: self.prefix.clone(),
                    });
                }
            } else {
                if self.prefix.is_empty() {
                    self.done = true;
                    return None;
                }
                let v = self.pop();
                resume_from = v + 1;
            }
        }
    }
}

/// All weak orders of `m` labeled points, lexicographically sorted.
///
/// Errors with a size limit for `m` outside `1..=11`. Counts are Fubini
/// numbers, so the materialized list is only reasonable for small `m`;
/// use [`WeakOrderIter`] to stream.
pub fn enumerate_weak_orders(m: usize) -> Result<Vec<RankVector>> {
    Ok(WeakOrderIter::new(m)?.collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let all = enumerate_weak_orders(1).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].ranks(), &[1]);
    }

    #[test]
    fn two_points() {
        let all = enumerate_weak_orders(2).unwrap();
        let got: Vec<&[u8]> = all.iter().map(|rv| rv.ranks()).collect();
        assert_eq!(got, vec![&[1, 1][..], &[1, 2], &[2, 1]]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(enumerate_weak_orders(0).is_err());
        assert!(enumerate_weak_orders(12).is_err());
    }

    #[test]
    fn lexicographic_and_valid() {
        let all = enumerate_weak_orders(5).unwrap();
        for w in all.windows(2) {
            assert!(w[0].ranks() < w[1].ranks());
        }
        for rv in &all {
            RankVector::new(rv.ranks().to_vec()).unwrap();
        }
    }
}
