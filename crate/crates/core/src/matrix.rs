//! Dense matrices over a [`Field`], reduced row echelon forms, pivot
//! vectors, Ferrers diagrams and Gaussian binomial coefficients.
//!
//! Entries are `u32` field codes (see [`crate::gf`]). Matrices are row-major
//! and may have zero rows; the column count is always explicit, never
//! inferred from data, so empty matrices keep their shape.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::gf::Field;
use crate::{Error, Result};

/// Row-major matrix over a finite field. Shape errors in arithmetic are
/// programmer errors and panic; validated construction from untrusted data
/// goes through [`FqMatrix::from_rows`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMatrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows of element codes; every row must have the same
    /// length and every code must be reduced (< q).
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<FqMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "ragged rows: {} vs {}",
                    r.len(),
                    cols
                )));
            }
            for &v in r {
                if v >= field.q() {
                    return Err(Error::InvalidParameter(format!(
                        "entry {v} is not an element code of {field}"
                    )));
                }
                data.push(v);
            }
        }
        Ok(FqMatrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn from_fn(
        field: &Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u32,
    ) -> FqMatrix {
        let mut m = FqMatrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(i < self.rows && j < self.cols);
        debug_assert!(v < self.field.q());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_matrices(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.cols.max(1)).take(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub(crate) fn data(&self) -> &[u32] {
        &self.data
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (a, b) = (a.min(b), a.max(b));
        let (top, bot) = self.data.split_at_mut(b * c);
        top[a * c..(a + 1) * c].swap_with_slice(&mut bot[..c]);
    }

    fn scale_row(&mut self, i: usize, s: u32) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, f.mul(v, s));
        }
    }

    /// row[dst] += s * row[src], starting at column `from`.
    fn add_scaled_row(&mut self, dst: usize, src: usize, s: u32, from: usize) {
        let f = self.field.clone();
        for j in from..self.cols {
            let v = f.add(self.get(dst, j), f.mul(s, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    pub fn transpose(&self) -> FqMatrix {
        FqMatrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        assert!(self.field.same_field(&rhs.field));
        let mut out = self.clone();
        for (o, &r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o = self.field.add(*o, r);
        }
        out
    }

    pub fn sub(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        assert!(self.field.same_field(&rhs.field));
        let mut out = self.clone();
        for (o, &r) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o = self.field.sub(*o, r);
        }
        out
    }

    pub fn scale(&self, s: u32) -> FqMatrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o = self.field.mul(*o, s);
        }
        out
    }

    pub fn mul(&self, rhs: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        assert!(self.field.same_field(&rhs.field));
        let f = &self.field;
        let mut out = FqMatrix::zero(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Stack `self` on top of `other` (column counts must agree).
    pub fn vstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        assert!(self.field.same_field(&other.field));
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Place `other` to the right of `self` (row counts must agree).
    pub fn hstack(&self, other: &FqMatrix) -> FqMatrix {
        assert_eq!(self.rows, other.rows, "shape mismatch in hstack");
        assert!(self.field.same_field(&other.field));
        let mut out = FqMatrix::zero(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }

    /// Columns `range` of `self` as a new matrix.
    pub fn column_block(&self, range: std::ops::Range<usize>) -> FqMatrix {
        assert!(range.end <= self.cols);
        FqMatrix::from_fn(&self.field, self.rows, range.len(), |i, j| self.get(i, range.start + j))
    }

    /// Reduced row echelon form in canonical shape: unit pivots, zeros above
    /// and below each pivot, zero rows dropped. Two matrices have the same
    /// row space iff their `rre().matrix` agree.
    pub fn rre(&self) -> RreForm {
        let mut m = self.clone();
        let f = m.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let lead = m.get(r, c);
            if lead != 1 {
                m.scale_row(r, f.inv(lead));
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let s = f.neg(m.get(i, c));
                    m.add_scaled_row(i, r, s, c);
                }
            }
            pivots.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        m.data.truncate(r * m.cols);
        m.rows = r;
        RreForm { matrix: m, pivots, rank: r }
    }

    /// Rank, with a bit-packed elimination for the binary field.
    pub fn rank(&self) -> usize {
        if self.field.q() == 2 && self.cols <= 64 {
            let mut packed: Vec<u64> = self
                .row_matrices()
                .map(|r| r.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64))
                .collect();
            rank_bits_u64(&mut packed)
        } else {
            self.rank_dense()
        }
    }

    /// Forward elimination without back-substitution; generic over q.
    pub(crate) fn rank_dense(&self) -> usize {
        let mut m = self.clone();
        let f = m.field.clone();
        let mut r = 0usize;
        for c in 0..m.cols {
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c));
            for i in r + 1..m.rows {
                if m.get(i, c) != 0 {
                    let s = f.neg(f.mul(m.get(i, c), inv));
                    m.add_scaled_row(i, r, s, c);
                }
            }
            r += 1;
            if r == m.rows {
                break;
            }
        }
        r
    }

    /// A matrix whose rows form a basis of the right kernel
    /// { v : self * v^T = 0 }; it has cols() - rank() rows.
    pub fn nullspace(&self) -> FqMatrix {
        let f = self.field.clone();
        let RreForm { matrix: r, pivots, rank } = self.rre();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = FqMatrix::zero(&f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                out.set(k, pc, f.neg(r.get(i, fc)));
            }
        }
        out
    }
}

impl fmt::Display for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}:", self.rows, self.cols, self.field)?;
        fmt::Display::fmt(self, f)
    }
}

/// Result of [`FqMatrix::rre`]: the canonical matrix (zero rows dropped),
/// pivot column indices and the rank.
#[derive(Clone, Debug)]
pub struct RreForm {
    pub matrix: FqMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

/// Rank of a set of F_2 row vectors packed into u64 words.
pub(crate) fn rank_bits_u64(rows: &mut [u64]) -> usize {
    let mut rank = 0usize;
    for i in 0..rows.len() {
        let mut row = rows[i];
        for &piv in rows[..rank].iter() {
            let lead = 1u64 << (63 - piv.leading_zeros());
            if row & lead != 0 {
                row ^= piv;
            }
        }
        if row != 0 {
            rows[rank] = row;
            rank += 1;
        }
    }
    rank
}

// ---------------------------------------------------------------------------
// Pivot vectors.
// ---------------------------------------------------------------------------

/// The positions of pivot columns of a canonical matrix, as a binary vector
/// of length n. Bit i set means column i is a pivot.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PivotVector {
    n: u16,
    bits: u64,
}

impl PivotVector {
    pub fn from_positions(n: usize, positions: &[usize]) -> PivotVector {
        assert!(n <= 64);
        let mut bits = 0u64;
        for &p in positions {
            assert!(p < n, "pivot {p} out of range for n={n}");
            bits |= 1 << p;
        }
        PivotVector { n: n as u16, bits }
    }

    pub fn from_bits(n: usize, bits: u64) -> PivotVector {
        assert!(n <= 64 && (n == 64 || bits < (1u64 << n)));
        PivotVector { n: n as u16, bits }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.n as usize);
        self.bits >> i & 1 == 1
    }

    /// Number of pivots (the subspace dimension).
    #[inline]
    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Number of pivots among the first `l` coordinates.
    pub fn prefix_weight(&self, l: usize) -> usize {
        debug_assert!(l <= self.n as usize);
        if l == 0 {
            return 0;
        }
        (self.bits & (u64::MAX >> (64 - l))).count_ones() as usize
    }

    pub fn hamming(&self, other: &PivotVector) -> usize {
        assert_eq!(self.n, other.n);
        (self.bits ^ other.bits).count_ones() as usize
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..self.n as usize).filter(|&i| self.bit(i)).collect()
    }

    /// The vector read as a binary number with coordinate 0 most
    /// significant. Enumeration over the Grassmannian runs through pivot
    /// classes in decreasing order of this value, so the identity-prefix
    /// class comes first.
    pub fn as_number(&self) -> u64 {
        let mut v = 0u64;
        for i in 0..self.n as usize {
            v = v << 1 | (self.bits >> i & 1);
        }
        v
    }

    /// All weight-k pivot vectors of length n, in decreasing
    /// [`PivotVector::as_number`] order.
    pub fn all_of_weight(n: usize, k: usize) -> Vec<PivotVector> {
        assert!(n <= 64);
        let mut out: Vec<PivotVector> = Vec::new();
        fn rec(n: usize, k: usize, i: usize, bits: u64, out: &mut Vec<PivotVector>) {
            if k == 0 {
                out.push(PivotVector { n: n as u16, bits });
                return;
            }
            if n - i < k {
                return;
            }
            // placing a pivot at the earliest open coordinate keeps the
            // as_number order decreasing
            rec(n, k - 1, i + 1, bits | 1 << i, out);
            rec(n, k, i + 1, bits, out);
        }
        rec(n, k, 0, 0, &mut out);
        out
    }
}

impl fmt::Display for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n as usize {
            write!(f, "{}", self.bits >> i & 1)?;
        }
        Ok(())
    }
}

impl fmt::Debug for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Ferrers diagrams.
// ---------------------------------------------------------------------------

/// The Ferrers diagram of a pivot vector: a top- and right-aligned dot
/// pattern inside a k x (n - k) grid, row i holding one dot for every
/// non-pivot column to the right of the i-th pivot. Row dot counts are
/// non-increasing from top to bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FerrersDiagram {
    rows: usize,
    cols: usize,
    row_dots: Vec<usize>,
}

impl FerrersDiagram {
    pub fn from_pivots(v: &PivotVector) -> FerrersDiagram {
        let n = v.len();
        let k = v.weight();
        let mut row_dots = Vec::with_capacity(k);
        for p in v.positions() {
            let dots = (p + 1..n).filter(|&j| !v.bit(j)).count();
            row_dots.push(dots);
        }
        debug_assert!(row_dots.windows(2).all(|w| w[0] >= w[1]));
        FerrersDiagram { rows: k, cols: n - k, row_dots }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_dots(&self) -> &[usize] {
        &self.row_dots
    }

    pub fn total_dots(&self) -> usize {
        self.row_dots.iter().sum()
    }

    /// Number of matrices supported on the diagram, q^dots.
    pub fn fill_count(&self, q: u32) -> BigUint {
        BigUint::from(q).pow(self.total_dots() as u32)
    }

    /// Upper bound for the exponent of the size of a rank-metric code
    /// supported on this diagram with minimum rank distance `delta`: the
    /// minimum over i in 0..delta of the number of dots left after deleting
    /// the first i rows and the rightmost delta - 1 - i columns.
    pub fn distance_bound_exponent(&self, delta: usize) -> usize {
        assert!(delta >= 1);
        (0..delta)
            .map(|i| {
                let cut = delta - 1 - i;
                self.row_dots
                    .iter()
                    .skip(i)
                    .map(|&d| d.saturating_sub(cut))
                    .sum::<usize>()
            })
            .min()
            .unwrap()
    }
}

/// A matrix whose columns are scattered into the non-pivot positions of a
/// profile: output column i is zero when i is a pivot of `v`, and otherwise
/// the next unused column of `f`. Requires f.cols() = len(v) - weight(v).
pub fn scatter_columns(v: &PivotVector, f: &FqMatrix) -> FqMatrix {
    let n = v.len();
    assert_eq!(
        f.cols(),
        n - v.weight(),
        "free-column count does not match the pivot profile"
    );
    let mut out = FqMatrix::zero(f.field(), f.rows(), n);
    let mut src = 0usize;
    for j in 0..n {
        if v.bit(j) {
            continue;
        }
        for i in 0..f.rows() {
            out.set(i, j, f.get(i, src));
        }
        src += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Gaussian binomials.
// ---------------------------------------------------------------------------

/// The Gaussian binomial coefficient: the number of k-dimensional subspaces
/// of an n-dimensional space over F_q. Exact, arbitrary precision.
pub fn gaussian_binomial(q: u32, n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let q = BigUint::from(q);
    let mut out = BigUint::one();
    for i in 1..=k {
        // multiply by (q^(n-k+i) - 1)/(q^i - 1); each partial product is
        // itself a Gaussian binomial, so the division is exact
        out *= q.pow((n - k + i) as u32) - 1u32;
        let den = q.pow(i as u32) - 1u32;
        debug_assert!((&out % &den).is_zero());
        out /= den;
    }
    out
}
