//! Distances between subspaces and between matrices, and minimum-distance
//! scans over codes.
//!
//! The subspace distance is computed through a single stacked-rank kernel:
//! d_S(U, W) = 2 rank[U; W] - dim U - dim W, which avoids materializing the
//! intersection. The independent verification path in [`crate::verify`]
//! deliberately does not share this kernel.

use rayon::prelude::*;

use crate::matrix::{rank_bits_u64, FqMatrix};
use crate::subspace::{pack_rows_q2, Code, Subspace};

/// rank of the stacked matrix [U; W].
pub fn stacked_rank(u: &Subspace, w: &Subspace) -> usize {
    assert_eq!(u.ambient(), w.ambient(), "ambient spaces differ");
    assert!(u.field().same_field(w.field()), "fields differ");
    if u.field().q() == 2 && u.ambient() <= 64 {
        let a = pack_rows_q2(u);
        let b = pack_rows_q2(w);
        stacked_rank_q2(&a, &b)
    } else {
        u.matrix().vstack(w.matrix()).rank_dense()
    }
}

#[inline]
pub(crate) fn stacked_rank_q2(a: &[u64], b: &[u64]) -> usize {
    let mut buf = [0u64; 32];
    let (la, lb) = (a.len(), b.len());
    debug_assert!(la + lb <= 32);
    buf[..la].copy_from_slice(a);
    buf[la..la + lb].copy_from_slice(b);
    rank_bits_u64(&mut buf[..la + lb])
}

/// Subspace distance d_S(U, W) = dim U + dim W - 2 dim(U cap W).
pub fn subspace_distance(u: &Subspace, w: &Subspace) -> usize {
    2 * stacked_rank(u, w) - u.dim() - w.dim()
}

/// Injection distance d_I(U, W) = max(dim U, dim W) - dim(U cap W); equals
/// d_S / 2 when the dimensions agree.
pub fn injection_distance(u: &Subspace, w: &Subspace) -> usize {
    stacked_rank(u, w) - u.dim().min(w.dim())
}

/// Rank distance of two equal-shape matrices, rank(A - B).
pub fn rank_distance(a: &FqMatrix, b: &FqMatrix) -> usize {
    a.sub(b).rank()
}

/// Hamming distance of the pivot profiles; a lower bound for d_S.
pub fn pivot_distance(u: &Subspace, w: &Subspace) -> usize {
    u.pivots().hamming(w.pivots())
}

/// A violating or minimal pair, by word indices into the sorted code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceWitness {
    pub i: usize,
    pub j: usize,
    pub d: usize,
}

/// Exact minimum distance over all pairs, with the lexicographically first
/// attaining pair. None when the code has fewer than two words. The result
/// is deterministic and independent of the thread schedule.
pub fn min_distance(code: &Code) -> Option<DistanceWitness> {
    let m = code.len();
    if m < 2 {
        return None;
    }
    let best = if code.field().q() == 2 && code.ambient() <= 64 {
        let packed: Vec<Vec<u64>> = code.words().iter().map(pack_rows_q2).collect();
        let dims: Vec<usize> = code.words().iter().map(|w| w.dim()).collect();
        (0..m - 1)
            .into_par_iter()
            .map(|i| {
                let mut local = (usize::MAX, i, i);
                for j in i + 1..m {
                    let d = 2 * stacked_rank_q2(&packed[i], &packed[j]) - dims[i] - dims[j];
                    if (d, i, j) < local {
                        local = (d, i, j);
                    }
                }
                local
            })
            .reduce(|| (usize::MAX, 0, 0), std::cmp::min)
    } else {
        let words = code.words();
        (0..m - 1)
            .into_par_iter()
            .map(|i| {
                let mut local = (usize::MAX, i, i);
                for j in i + 1..m {
                    let d = subspace_distance(&words[i], &words[j]);
                    if (d, i, j) < local {
                        local = (d, i, j);
                    }
                }
                local
            })
            .reduce(|| (usize::MAX, 0, 0), std::cmp::min)
    };
    Some(DistanceWitness { i: best.1, j: best.2, d: best.0 })
}

/// Early-exiting floor check: Ok(()) when every pair is at distance >= d,
/// otherwise the lexicographically first violating pair found in the first
/// violating block of rows. Much faster than [`min_distance`] on failure.
pub fn check_min_distance(code: &Code, d: usize) -> std::result::Result<(), DistanceWitness> {
    let m = code.len();
    if m < 2 {
        return Ok(());
    }
    const BLOCK: usize = 512;
    if code.field().q() == 2 && code.ambient() <= 64 {
        let packed: Vec<Vec<u64>> = code.words().iter().map(pack_rows_q2).collect();
        let dims: Vec<usize> = code.words().iter().map(|w| w.dim()).collect();
        let mut start = 0usize;
        while start < m - 1 {
            let end = (start + BLOCK).min(m - 1);
            let hit = (start..end)
                .into_par_iter()
                .filter_map(|i| {
                    for j in i + 1..m {
                        let dd = 2 * stacked_rank_q2(&packed[i], &packed[j]) - dims[i] - dims[j];
                        if dd < d {
                            return Some((i, j, dd));
                        }
                    }
                    None
                })
                .min();
            if let Some((i, j, dd)) = hit {
                return Err(DistanceWitness { i, j, d: dd });
            }
            start = end;
        }
        Ok(())
    } else {
        let words = code.words();
        let mut start = 0usize;
        while start < m - 1 {
            let end = (start + BLOCK).min(m - 1);
            let hit = (start..end)
                .into_par_iter()
                .filter_map(|i| {
                    for j in i + 1..m {
                        let dd = subspace_distance(&words[i], &words[j]);
                        if dd < d {
                            return Some((i, j, dd));
                        }
                    }
                    None
                })
                .min();
            if let Some((i, j, dd)) = hit {
                return Err(DistanceWitness { i, j, d: dd });
            }
            start = end;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::subspace::enumerate_grassmannian;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    #[test]
    fn metric_axioms_exhaustive() {
        // points of PG(4, 2) and the lines of G_2(4, 2)
        for (n, k) in [(5usize, 1usize), (4, 2)] {
            let all = enumerate_grassmannian(&f2(), n, k, None).unwrap();
            for u in &all {
                assert_eq!(subspace_distance(u, u), 0);
            }
            for (i, u) in all.iter().enumerate() {
                for w in &all[i + 1..] {
                    let d = subspace_distance(u, w);
                    assert!(d > 0, "distinct subspaces at distance 0");
                    assert_eq!(d, subspace_distance(w, u), "symmetry");
                    assert_eq!(d % 2, 0, "equal dimensions force even distance");
                    assert_eq!(d, 2 * injection_distance(u, w));
                }
            }
            // triangle inequality over all ordered triples
            for u in &all {
                for w in &all {
                    for x in &all {
                        assert!(
                            subspace_distance(u, w)
                                <= subspace_distance(u, x) + subspace_distance(x, w)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn same_profile_distance_is_twice_rank_distance() {
        // exhaustive over G_2(5, 2): equal pivot profiles reduce d_S to the
        // rank distance of the free blocks
        let all = enumerate_grassmannian(&f2(), 5, 2, None).unwrap();
        for (i, u) in all.iter().enumerate() {
            for w in &all[i + 1..] {
                if u.pivots() == w.pivots() {
                    let dr = rank_distance(&u.free_columns(), &w.free_columns());
                    assert_eq!(subspace_distance(u, w), 2 * dr);
                }
            }
        }
    }

    #[test]
    fn profile_hamming_bounds_distance() {
        // exhaustive over G_2(5, 2) and PG(4, 2)
        for (n, k) in [(5usize, 2usize), (5, 1)] {
            let all = enumerate_grassmannian(&f2(), n, k, None).unwrap();
            for (i, u) in all.iter().enumerate() {
                for w in &all[i + 1..] {
                    assert!(subspace_distance(u, w) >= pivot_distance(u, w));
                }
            }
        }
    }

    #[test]
    fn mixed_dimension_distances() {
        let f = f2();
        let point = Subspace::from_rows(&f, &[vec![1, 0, 0, 0]]).unwrap();
        let plane =
            Subspace::from_rows(&f, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]])
                .unwrap();
        // point inside the plane: distance dim difference
        assert_eq!(subspace_distance(&point, &plane), 2);
        assert_eq!(injection_distance(&point, &plane), 2);
        let outside = Subspace::from_rows(&f, &[vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(subspace_distance(&outside, &plane), 4);
    }

    #[test]
    fn min_distance_and_floor_check() {
        let f = f2();
        let all = enumerate_grassmannian(&f, 4, 2, None).unwrap();
        let code = Code::new(&f, 4, all.clone()).unwrap();
        let w = min_distance(&code).unwrap();
        assert_eq!(w.d, 2, "full Grassmannian has minimum distance 2");
        assert!(check_min_distance(&code, 2).is_ok());
        let err = check_min_distance(&code, 4).unwrap_err();
        assert_eq!(err.i, 0, "first violating row must be reported");
        assert_eq!(
            subspace_distance(&code.words()[err.i], &code.words()[err.j]),
            err.d
        );

        // two complementary lines form a distance-4 pair
        let c2 = Code::new(
            &f,
            4,
            vec![
                Subspace::from_rows(&f, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap(),
                Subspace::from_rows(&f, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(min_distance(&c2).unwrap().d, 4);
        assert!(min_distance(&Code::empty(&f, 4)).is_none());
    }

    #[test]
    fn generic_and_packed_kernels_agree() {
        // q = 3 exercises the dense path; compare its structural identities
        let f3 = Field::new(3, 1).unwrap();
        let all = enumerate_grassmannian(&f3, 4, 2, None).unwrap();
        for (i, u) in all.iter().enumerate().step_by(3) {
            for w in all[i + 1..].iter().step_by(5) {
                let d = subspace_distance(u, w);
                assert_eq!(d % 2, 0);
                assert!(d >= pivot_distance(u, w));
                assert!(d <= 4);
            }
        }
    }
}
