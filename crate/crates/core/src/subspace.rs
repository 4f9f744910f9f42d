//! Subspaces of F_q^n in canonical form, sets of subspaces (codes), and
//! enumeration of Grassmannians.
//!
//! Every subspace is stored as its reduced row echelon basis matrix with
//! zero rows dropped, so equality of subspaces is equality of matrices.
//! Enumeration order is fixed everywhere: pivot profiles in decreasing
//! [`PivotVector::as_number`] order (identity-prefix profile first), and
//! within a profile the free entries run as a base-q odometer whose last
//! free position moves fastest. Deterministic order is what makes rebuilt
//! codes byte-identical across runs.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::gf::Field;
use crate::matrix::{gaussian_binomial, FqMatrix, PivotVector};
use crate::{Error, Result};

/// A subspace of F_q^n, held as its canonical basis matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    mat: FqMatrix,
    pivots: PivotVector,
}

impl Subspace {
    /// Canonicalize an arbitrary spanning matrix.
    pub fn from_matrix(m: &FqMatrix) -> Subspace {
        let r = m.rre();
        Subspace {
            pivots: PivotVector::from_positions(m.cols(), &r.pivots),
            mat: r.matrix,
        }
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Subspace> {
        Ok(Subspace::from_matrix(&FqMatrix::from_rows(field, rows)?))
    }

    /// Wrap a matrix that is already reduced row echelon with zero rows
    /// dropped; `pivots` must be its pivot profile.
    pub(crate) fn from_rre_unchecked(mat: FqMatrix, pivots: PivotVector) -> Subspace {
        debug_assert_eq!(pivots.weight(), mat.rows());
        debug_assert_eq!(pivots.len(), mat.cols());
        debug_assert_eq!(mat.rre().matrix, mat, "matrix is not canonical");
        Subspace { mat, pivots }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    #[inline]
    pub fn ambient(&self) -> usize {
        self.mat.cols()
    }

    pub fn field(&self) -> &Field {
        self.mat.field()
    }

    /// The canonical basis matrix (reduced row echelon, full rank).
    pub fn matrix(&self) -> &FqMatrix {
        &self.mat
    }

    pub fn pivots(&self) -> &PivotVector {
        &self.pivots
    }

    /// The orthogonal complement with respect to the standard bilinear form.
    pub fn dual(&self) -> Subspace {
        Subspace::from_matrix(&self.mat.nullspace())
    }

    /// The non-pivot columns of the canonical matrix, as a dim x (n - dim)
    /// matrix. Together with the pivot profile this determines the subspace.
    pub fn free_columns(&self) -> FqMatrix {
        let free: Vec<usize> =
            (0..self.ambient()).filter(|&j| !self.pivots.bit(j)).collect();
        FqMatrix::from_fn(self.field(), self.dim(), free.len(), |i, j| {
            self.mat.get(i, free[j])
        })
    }

    /// Membership of a row vector (given as element codes).
    pub fn contains_vector(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient());
        // reduce v against the canonical basis; membership iff residue is 0
        let f = self.field().clone();
        let mut v = v.to_vec();
        for (i, &p) in self.pivots.positions().iter().enumerate() {
            if v[p] != 0 {
                let s = f.neg(v[p]);
                for j in p..v.len() {
                    v[j] = f.add(v[j], f.mul(s, self.mat.get(i, j)));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient()
            .cmp(&other.ambient())
            .then_with(|| self.dim().cmp(&other.dim()))
            .then_with(|| other.pivots.as_number().cmp(&self.pivots.as_number()))
            .then_with(|| self.mat.data().cmp(other.mat.data()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}-dim in F^{}: ", self.dim(), self.ambient())?;
        let rows: Vec<String> = self
            .mat
            .row_matrices()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        write!(f, "{}>", rows.join(";"))
    }
}

/// A set of subspaces of a common ambient space, sorted and deduplicated.
/// Dimensions may be mixed; [`Code::constant_dim`] reports whether they are
/// not.
#[derive(Clone, PartialEq, Eq)]
pub struct Code {
    field: Field,
    n: usize,
    words: Vec<Subspace>,
}

impl Code {
    pub fn empty(field: &Field, n: usize) -> Code {
        Code { field: field.clone(), n, words: Vec::new() }
    }

    /// Sort, deduplicate and validate. The second component counts the
    /// duplicates that were removed.
    pub fn from_words(field: &Field, n: usize, mut words: Vec<Subspace>) -> Result<(Code, usize)> {
        for w in &words {
            if w.ambient() != n {
                return Err(Error::ShapeMismatch(format!(
                    "word lives in F^{} but the code is over F^{}",
                    w.ambient(),
                    n
                )));
            }
            field.expect_same(w.field())?;
        }
        let before = words.len();
        words.sort_unstable();
        words.dedup();
        let dups = before - words.len();
        Ok((Code { field: field.clone(), n, words }, dups))
    }

    /// Like [`Code::from_words`] but rejects duplicates instead of counting.
    pub fn new(field: &Field, n: usize, words: Vec<Subspace>) -> Result<Code> {
        let (code, dups) = Code::from_words(field, n, words)?;
        if dups > 0 {
            return Err(Error::InvalidParameter(format!("{dups} duplicate words")));
        }
        Ok(code)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Subspace] {
        &self.words
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        self.words.binary_search(s).is_ok()
    }

    /// Some(k) when every word has dimension k (and the code is nonempty).
    pub fn constant_dim(&self) -> Option<usize> {
        let k = self.words.first()?.dim();
        self.words.iter().all(|w| w.dim() == k).then_some(k)
    }

    /// Union of two codes over the same ambient space; the second component
    /// counts words present in both.
    pub fn merge(&self, other: &Code) -> Result<(Code, usize)> {
        self.field.expect_same(&other.field)?;
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "ambient {} vs {}",
                self.n, other.n
            )));
        }
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        Code::from_words(&self.field, self.n, words)
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code[{} words in F_{}^{}]", self.words.len(), self.field.q(), self.n)
    }
}

// ---------------------------------------------------------------------------
// Grassmannian enumeration.
// ---------------------------------------------------------------------------

/// Iterator over all k-dimensional subspaces of F_q^n in the crate-wide
/// canonical order. The order coincides with [`Subspace`]'s `Ord`, so the
/// collected sequence is already sorted.
pub struct GrassmannianIter {
    field: Field,
    q: u32,
    classes: Vec<PivotVector>,
    class_idx: usize,
    state: Option<ClassState>,
}

struct ClassState {
    template: FqMatrix,
    free: Vec<(usize, usize)>,
    counter: Vec<u32>,
    exhausted: bool,
}

/// Row-major free coordinates of the canonical form with pivot profile `v`:
/// position (i, j) is free iff column j is not a pivot and lies right of the
/// i-th pivot.
fn free_positions(v: &PivotVector) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, p) in v.positions().into_iter().enumerate() {
        for j in p + 1..v.len() {
            if !v.bit(j) {
                out.push((i, j));
            }
        }
    }
    out
}

fn pivot_template(field: &Field, v: &PivotVector) -> FqMatrix {
    let mut m = FqMatrix::zero(field, v.weight(), v.len());
    for (i, p) in v.positions().into_iter().enumerate() {
        m.set(i, p, 1);
    }
    m
}

impl GrassmannianIter {
    pub fn new(field: &Field, n: usize, k: usize) -> GrassmannianIter {
        assert!(n <= 64, "ambient dimension above 64 is not supported");
        let classes = if k <= n { PivotVector::all_of_weight(n, k) } else { Vec::new() };
        GrassmannianIter { field: field.clone(), q: field.q(), classes, class_idx: 0, state: None }
    }
}

impl Iterator for GrassmannianIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            if self.class_idx >= self.classes.len() {
                return None;
            }
            let v = self.classes[self.class_idx];
            let q = self.q;
            if self.state.is_none() {
                let free = free_positions(&v);
                self.state = Some(ClassState {
                    template: pivot_template(&self.field, &v),
                    counter: vec![0; free.len()],
                    free,
                    exhausted: false,
                });
            }
            let st = self.state.as_mut().unwrap();
            if st.exhausted {
                self.state = None;
                self.class_idx += 1;
                continue;
            }
            let out = Subspace::from_rre_unchecked(st.template.clone(), v);
            // advance the odometer, last free position fastest
            let mut i = st.free.len();
            loop {
                if i == 0 {
                    st.exhausted = true;
                    break;
                }
                i -= 1;
                let d = st.counter[i] + 1;
                let (r, c) = st.free[i];
                if d < q {
                    st.counter[i] = d;
                    st.template.set(r, c, d);
                    break;
                }
                st.counter[i] = 0;
                st.template.set(r, c, 0);
            }
            return Some(out);
        }
    }
}

/// All k-dimensional subspaces of F_q^n, in canonical order. When `budget`
/// is given and the Grassmannian is larger, returns [`Error::Budget`]
/// without enumerating.
pub fn enumerate_grassmannian(
    field: &Field,
    n: usize,
    k: usize,
    budget: Option<u64>,
) -> Result<Vec<Subspace>> {
    let total = gaussian_binomial(field.q(), n, k);
    if let Some(b) = budget {
        if total > BigUint::from(b) {
            return Err(Error::Budget(format!(
                "Grassmannian G_{}({n},{k}) has {total} elements, budget is {b}",
                field.q()
            )));
        }
    }
    Ok(GrassmannianIter::new(field, n, k).collect())
}

// ---------------------------------------------------------------------------
// Bit-packed scan over a binary Grassmannian, for the large q = 2 searches.
// Rows are packed MSB-first: column j of an n-column matrix is bit n-1-j.
// ---------------------------------------------------------------------------

/// One pivot class of G_2(n, k) with O(1) access to its members by index.
/// Index order equals the canonical odometer order.
pub(crate) struct Q2Class {
    pub v: PivotVector,
    pub size: u64,
    n: usize,
    k: usize,
    base: Vec<u64>,
    /// Bit masks for the free positions in row-major order.
    free: Vec<(usize, u64)>,
}

impl Q2Class {
    pub fn new(v: PivotVector) -> Q2Class {
        let n = v.len();
        let k = v.weight();
        assert!(n <= 64);
        let mut base = vec![0u64; k];
        for (i, p) in v.positions().into_iter().enumerate() {
            base[i] = 1u64 << (n - 1 - p);
        }
        let free: Vec<(usize, u64)> =
            free_positions(&v).into_iter().map(|(i, j)| (i, 1u64 << (n - 1 - j))).collect();
        assert!(free.len() < 63, "class too large to index by u64");
        Q2Class { v, size: 1u64 << free.len(), n, k, base, free }
    }

    /// Write member `idx` into `out` (length k). The last free position is
    /// the least significant index bit, matching the generic odometer.
    #[inline]
    pub fn member(&self, idx: u64, out: &mut [u64]) {
        debug_assert!(idx < self.size);
        out[..self.k].copy_from_slice(&self.base);
        for (t, &(row, mask)) in self.free.iter().rev().enumerate() {
            if idx >> t & 1 == 1 {
                out[row] |= mask;
            }
        }
    }

    /// The member as a [`Subspace`] (used when a candidate is accepted).
    pub fn subspace(&self, field: &Field, idx: u64) -> Subspace {
        let mut rows = vec![0u64; self.k];
        self.member(idx, &mut rows);
        let m = FqMatrix::from_fn(field, self.k, self.n, |i, j| {
            (rows[i] >> (self.n - 1 - j) & 1) as u32
        });
        Subspace::from_rre_unchecked(m, self.v)
    }
}

/// All pivot classes of G_2(n, k) in canonical (decreasing profile) order.
pub(crate) fn q2_classes(n: usize, k: usize) -> Vec<Q2Class> {
    PivotVector::all_of_weight(n, k).into_iter().map(Q2Class::new).collect()
}

/// Pack a canonical basis matrix into MSB-first row words.
pub(crate) fn pack_rows_q2(s: &Subspace) -> Vec<u64> {
    debug_assert_eq!(s.field().q(), 2);
    let n = s.ambient();
    s.matrix()
        .row_matrices()
        .map(|r| r.iter().fold(0u64, |acc, &b| acc << 1 | b as u64))
        .map(|w| w << (64 - n) >> (64 - n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32) -> Field {
        let (p, e) = match q {
            2 => (2, 1),
            3 => (3, 1),
            4 => (2, 2),
            _ => unreachable!(),
        };
        Field::new(p, e).unwrap()
    }

    #[test]
    fn enumeration_counts_match_gaussian_binomials() {
        for (q, n, k, expect) in
            [(2u32, 4usize, 2usize, 35usize), (2, 4, 1, 15), (2, 5, 2, 155), (3, 4, 2, 130)]
        {
            let all = enumerate_grassmannian(&f(q), n, k, None).unwrap();
            assert_eq!(all.len(), expect);
            let mut dedup = all.clone();
            dedup.sort_unstable();
            dedup.dedup();
            assert_eq!(dedup.len(), expect, "enumeration produced duplicates");
        }
    }

    #[test]
    fn enumeration_is_sorted_and_starts_at_identity_prefix() {
        let all = enumerate_grassmannian(&f(2), 4, 2, None).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]), "order must match Ord");
        let first = Subspace::from_rows(&f(2), &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        assert_eq!(all[0], first);
        // within the identity-prefix class the odometer moves the last
        // free entry fastest
        let second = Subspace::from_rows(&f(2), &[vec![1, 0, 0, 0], vec![0, 1, 0, 1]]).unwrap();
        assert_eq!(all[1], second);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_grassmannian(&f(2), 5, 2, Some(100)),
            Err(Error::Budget(_))
        ));
        assert!(enumerate_grassmannian(&f(2), 5, 2, Some(155)).is_ok());
    }

    #[test]
    fn canonicalization_is_stable() {
        let field = f(3);
        for seed in 0u32..60 {
            let m = FqMatrix::from_fn(&field, 3, 5, |i, j| {
                seed.wrapping_mul(0x85ebca6b).rotate_left((i * 5 + j) as u32) % 3
            });
            let s = Subspace::from_matrix(&m);
            assert_eq!(s, Subspace::from_matrix(s.matrix()));
            assert_eq!(s.dim(), m.rank());
            for r in s.matrix().row_matrices() {
                assert!(s.contains_vector(r));
            }
        }
    }

    #[test]
    fn dual_spaces() {
        let field = f(2);
        let s = Subspace::from_rows(&field, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let d = s.dual();
        assert_eq!(d.dim(), 2);
        assert_eq!(
            d,
            Subspace::from_rows(&field, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap()
        );
        for w in enumerate_grassmannian(&f(3), 4, 2, None).unwrap().iter().step_by(7) {
            assert_eq!(w.dual().dual(), *w);
            assert_eq!(w.dual().dim(), 2);
        }
    }

    #[test]
    fn code_construction_checks() {
        let field = f(2);
        let all = enumerate_grassmannian(&field, 4, 2, None).unwrap();
        let mut words = all[..5].to_vec();
        words.push(all[2].clone());
        let (code, dups) = Code::from_words(&field, 4, words.clone()).unwrap();
        assert_eq!(dups, 1);
        assert_eq!(code.len(), 5);
        assert_eq!(code.constant_dim(), Some(2));
        assert!(code.contains(&all[2]));
        assert!(!code.contains(&all[30]));
        assert!(Code::new(&field, 4, words).is_err(), "duplicates must be rejected");

        let bad = Code::from_words(&field, 5, all[..2].to_vec());
        assert!(bad.is_err(), "ambient mismatch must be rejected");

        let (merged, overlap) =
            Code::from_words(&field, 4, all[..5].to_vec()).unwrap().0.merge(
                &Code::from_words(&field, 4, all[3..8].to_vec()).unwrap().0,
            ).unwrap();
        assert_eq!(merged.len(), 8);
        assert_eq!(overlap, 2);
    }

    #[test]
    fn q2_bit_scan_matches_generic_enumeration() {
        let field = f(2);
        let generic: Vec<Vec<u64>> = enumerate_grassmannian(&field, 5, 2, None)
            .unwrap()
            .iter()
            .map(pack_rows_q2)
            .collect();
        let mut packed = Vec::new();
        for class in q2_classes(5, 2) {
            let mut rows = vec![0u64; 2];
            for idx in 0..class.size {
                class.member(idx, &mut rows);
                packed.push(rows.clone());
                // subspace() must agree with member()
                if idx == 0 || idx == class.size - 1 {
                    let s = class.subspace(&field, idx);
                    assert_eq!(pack_rows_q2(&s), rows);
                }
            }
        }
        assert_eq!(generic, packed);
    }
}
