//! Canonical forms of rank vectors under the circle symmetries.
//!
//! Rotating the underlying circle shifts all rank values cyclically
//! (`r -> ((r-1+s) mod k)+1`); reversing the circle's orientation maps
//! `r -> k+1-r`. Together these generate a dihedral action of order `2k` on
//! rank vectors with `k` distinct values. Rotations leave every triple
//! orientation unchanged and reflections negate all of them, so the absolute
//! cocycle value is constant on each orbit.

use super::RankVector;

fn rotate(ranks: &[u8], k: u8, s: u8) -> Vec<u8> {
    ranks.iter().map(|&r| (r - 1 + s) % k + 1).collect()
}

fn reflect(ranks: &[u8], k: u8) -> Vec<u8> {
    ranks.iter().map(|&r| k + 1 - r).collect()
}

/// Lexicographically least rank vector in the rotation orbit of `rv`
/// (including reflections when `use_reflection` is set). Idempotent and
/// constant on orbits.
pub fn canonicalize_cyclic(rv: &RankVector, use_reflection: bool) -> RankVector {
    let k = rv.distinct() as u8;
    let mut best = rv.ranks().to_vec();
    for s in 1..k {
        let cand = rotate(rv.ranks(), k, s);
        if cand < best {
            best = cand;
        }
    }
    if use_reflection {
        let refl = reflect(rv.ranks(), k);
        for s in 0..k {
            let cand = rotate(&refl, k, s);
            if cand < best {
                best = cand;
            }
        }
    }
    RankVector::new(best).expect("orbit images of a valid rank vector stay valid")
}

/// All distinct images of `rv` under the (dihedral or cyclic) action.
pub fn dihedral_orbit(rv: &RankVector, use_reflection: bool) -> Vec<RankVector> {
    let k = rv.distinct() as u8;
    let mut orbit: Vec<Vec<u8>> = Vec::with_capacity(2 * k as usize);
    for s in 0..k {
        orbit.push(rotate(rv.ranks(), k, s));
    }
    if use_reflection {
        let refl = reflect(rv.ranks(), k);
        for s in 0..k {
            orbit.push(rotate(&refl, k, s));
        }
    }
    orbit.sort_unstable();
    orbit.dedup();
    orbit
        .into_iter()
        .map(|ranks| RankVector::new(ranks).expect("orbit images stay valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rv(ranks: &[u8]) -> RankVector {
        RankVector::new(ranks.to_vec()).unwrap()
    }

    #[test]
    fn rotation_only_examples() {
        // rotate so point 2's value becomes smallest
        assert_eq!(canonicalize_cyclic(&rv(&[2, 3, 1]), false), rv(&[1, 2, 3]));
        // all-ties is a fixed point
        assert_eq!(canonicalize_cyclic(&rv(&[1, 1, 1]), false), rv(&[1, 1, 1]));
        // (1,3,2) is not rotation-equivalent to (1,2,3)
        assert_eq!(canonicalize_cyclic(&rv(&[1, 3, 2]), false), rv(&[1, 3, 2]));
    }

    #[test]
    fn reflection_merges_mirror_orbits() {
        let a = canonicalize_cyclic(&rv(&[1, 2, 3]), true);
        let b = canonicalize_cyclic(&rv(&[3, 2, 1]), true);
        assert_eq!(a, b);
    }

    #[test]
    fn idempotent() {
        for use_reflection in [false, true] {
            let c = canonicalize_cyclic(&rv(&[2, 3, 5, 1, 4, 6, 7]), use_reflection);
            assert_eq!(canonicalize_cyclic(&c, use_reflection), c);
        }
    }

    #[test]
    fn orbit_sizes() {
        // distinct orders of 7 points: free dihedral action of order 14
        assert_eq!(dihedral_orbit(&rv(&[1, 2, 3, 4, 5, 6, 7]), true).len(), 14);
        assert_eq!(dihedral_orbit(&rv(&[1, 2, 3, 4, 5, 6, 7]), false).len(), 7);
        assert_eq!(dihedral_orbit(&rv(&[1, 1, 1]), true).len(), 1);
    }
}
