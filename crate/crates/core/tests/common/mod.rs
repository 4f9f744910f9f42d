//! Exhaustive property checks shared by the property suite and the
//! acceptance gate. Every function panics on the first violation.

use std::collections::HashSet;

use subspace_codes::coset::sorted_pairing_value;
use subspace_codes::gf::Field;
use subspace_codes::metrics;
use subspace_codes::rank::mrd_code;
use subspace_codes::subspace::enumerate_grassmannian;
use subspace_codes::verify;
use subspace_codes::{FqMatrix, Subspace};

/// All subspaces of F_q^n of dimension 1 through n: the points, lines and
/// higher flats of the projective geometry PG(n-1, q).
pub fn projective_subspaces(field: &Field, n: usize) -> Vec<Subspace> {
    let mut all = Vec::new();
    for k in 1..=n {
        all.extend(enumerate_grassmannian(field, n, k, None).unwrap());
    }
    all
}

/// Metric axioms of the subspace distance, exhaustively: identity,
/// positivity, symmetry over all ordered pairs, triangle inequality over
/// all triples.
pub fn check_metric_axioms(spaces: &[Subspace]) {
    let m = spaces.len();
    let mut d = vec![0u8; m * m];
    for i in 0..m {
        for j in 0..m {
            d[i * m + j] = metrics::subspace_distance(&spaces[i], &spaces[j]) as u8;
        }
    }
    for i in 0..m {
        assert_eq!(d[i * m + i], 0, "d(U, U) must vanish");
        for j in 0..m {
            if i != j {
                assert!(d[i * m + j] > 0, "distinct subspaces at distance zero");
            }
            assert_eq!(d[i * m + j], d[j * m + i], "symmetry violated");
        }
    }
    for i in 0..m {
        for j in 0..m {
            let dij = d[i * m + j];
            for k in 0..m {
                assert!(
                    u16::from(dij) <= u16::from(d[i * m + k]) + u16::from(d[k * m + j]),
                    "triangle inequality violated"
                );
            }
        }
    }
}

/// Distance relations, exhaustively over all ordered pairs: the
/// definitional identity through dim(U cap W), the injection distance
/// identity 2 d_I = d_S + |dim U - dim W|, and the pivot Hamming floor
/// d_S >= d_H(p(U), p(W)).
pub fn check_distance_relations(spaces: &[Subspace]) {
    for u in spaces {
        for w in spaces {
            let inter = verify::intersection_dim(u, w);
            let ds = metrics::subspace_distance(u, w);
            let di = metrics::injection_distance(u, w);
            assert_eq!(ds, u.dim() + w.dim() - 2 * inter);
            assert_eq!(di, u.dim().max(w.dim()) - inter);
            assert_eq!(2 * di, ds + u.dim().abs_diff(w.dim()));
            if u.dim() == w.dim() {
                assert_eq!(ds, 2 * di, "equal dimensions tie the two metrics");
            }
            assert!(ds >= u.pivots().hamming(w.pivots()), "pivot floor violated");
        }
    }
}

fn permutations(l: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..l).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(l, &mut cur, &mut out);
    out
}

fn multisets(l: usize, max: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(l: usize, lo: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == l {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            rec(l, v, max, cur, out);
            cur.pop();
        }
    }
    rec(l, 1, max, &mut cur, &mut out);
    out
}

/// The descending-sorted pairing maximizes the sum of products over every
/// injective pairing; exhaustive over all permutations for l <= 6 and all
/// multisets with entries in 1..=4.
pub fn check_sorted_pairing_exhaustive() {
    for l in 1..=6usize {
        let perms = permutations(l);
        let sets = multisets(l, 4);
        for a in &sets {
            for b in &sets {
                let claimed = sorted_pairing_value(a, b);
                let mut best = 0u64;
                for p in &perms {
                    let v: u64 = (0..l).map(|i| a[i] * b[p[i]]).sum();
                    best = best.max(v);
                }
                assert_eq!(claimed, best, "a={a:?} b={b:?}");
            }
        }
    }
}

/// Duality is an involution that complements dimension and preserves
/// subspace distance; exhaustive over all ordered pairs.
pub fn check_dual_involution(spaces: &[Subspace], n: usize) {
    for u in spaces {
        let dual = u.dual();
        assert_eq!(dual.dim(), n - u.dim());
        if u.dim() < n {
            assert_eq!(dual.dual(), *u, "double dual must return the subspace");
        } else {
            assert_eq!(dual.dim(), 0);
        }
    }
    for u in spaces {
        if u.dim() == n {
            continue;
        }
        for w in spaces {
            if w.dim() == n {
                continue;
            }
            assert_eq!(
                metrics::subspace_distance(u, w),
                metrics::subspace_distance(&u.dual(), &w.dual()),
                "duality must preserve distances"
            );
        }
    }
}

/// Canonical form, exhaustively on the planes of F_2^4: every basis of a
/// subspace canonicalizes to the same matrix, that matrix is its own
/// reduced echelon form, and distinct subspaces get distinct forms.
pub fn check_rre_canonicity(field: &Field) {
    let planes = enumerate_grassmannian(field, 4, 2, None).unwrap();
    assert_eq!(planes.len(), 35);
    let mut forms = HashSet::new();
    for s in &planes {
        assert!(forms.insert(s.matrix().clone()), "canonical forms must be distinct");
        let m = s.matrix();
        let rows: Vec<Vec<u32>> =
            (0..2).map(|i| (0..4).map(|j| m.get(i, j)).collect()).collect();
        // every ordered basis of the row space: nonzero combinations of the
        // two rows, pairwise independent
        let combos: Vec<Vec<u32>> = vec![
            rows[0].clone(),
            rows[1].clone(),
            (0..4).map(|j| field.add(rows[0][j], rows[1][j])).collect(),
        ];
        for (i, u) in combos.iter().enumerate() {
            for (j, v) in combos.iter().enumerate() {
                if i == j {
                    continue;
                }
                let again = Subspace::from_rows(field, &[u.clone(), v.clone()]).unwrap();
                assert_eq!(again, *s, "basis change must not move the canonical form");
            }
        }
    }
}

fn rank_bits(rows: &mut [u64; 8], n: usize) -> usize {
    let mut basis = [0u64; 8];
    let mut rank = 0;
    for i in 0..n {
        let mut v = rows[i];
        while v != 0 {
            let b = 63 - v.leading_zeros() as usize;
            if basis[b] == 0 {
                basis[b] = v;
                rank += 1;
                break;
            }
            v ^= basis[b];
        }
    }
    rank
}

/// Exhaustive pairwise minimum rank distance of maximum rank-metric
/// codes: every pair must clear the declared distance and the minimum
/// must attain it exactly. Binary instances are packed into machine
/// words; the largest has 2^14 codewords.
pub fn check_gabidulin_min_distance() {
    let f2 = Field::prime(2).unwrap();
    for (rows, cols, d) in [(4usize, 4usize, 2usize), (4, 4, 3), (4, 4, 4), (5, 4, 4), (7, 7, 6)] {
        let code = mrd_code(&f2, rows, cols, d).unwrap();
        let words: Vec<FqMatrix> = code.words().collect();
        assert!(words.len() <= 1 << 14);
        let packed: Vec<u64> = words
            .iter()
            .flat_map(|m| {
                (0..rows).map(move |i| {
                    (0..cols).fold(0u64, |acc, j| acc << 1 | u64::from(m.get(i, j)))
                })
            })
            .collect();
        let mut min = usize::MAX;
        let mut buf = [0u64; 8];
        for a in 0..words.len() {
            for b in a + 1..words.len() {
                for r in 0..rows {
                    buf[r] = packed[a * rows + r] ^ packed[b * rows + r];
                }
                let rk = rank_bits(&mut buf, rows);
                assert!(rk >= d, "pair below declared rank distance");
                min = min.min(rk);
            }
        }
        assert_eq!(min, d, "maximum codes attain their declared distance");
    }

    let f3 = Field::prime(3).unwrap();
    let code = mrd_code(&f3, 3, 3, 2).unwrap();
    let words: Vec<FqMatrix> = code.words().collect();
    assert_eq!(words.len(), 729);
    let mut min = usize::MAX;
    for a in 0..words.len() {
        for b in a + 1..words.len() {
            let rk = metrics::rank_distance(&words[a], &words[b]);
            assert!(rk >= 2);
            min = min.min(rk);
        }
    }
    assert_eq!(min, 2);
}
