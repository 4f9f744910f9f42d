//! The coset construction: codewords are row spaces of block matrices
//!
//! ```text
//!     [ A  phi_B(F) ]
//!     [ 0     B     ]
//! ```
//!
//! where A runs through a family of k'-spaces in F_q^n', B through a
//! matching family of (k-k')-spaces in F_q^(n-n'), and F through a set of
//! rank-metric matrices whose columns phi_B scatters into the non-pivot
//! positions of B. Pairing l disjoint families on each side yields
//! |F| * Lambda codewords with Lambda = sum |A_i| * |B_i|.
//!
//! Distance bookkeeping: a pair of codewords is at subspace distance >= d
//! when the two subspace parts contribute d_S(A,A') + d_S(B,B') >= d, or
//! when the offsets satisfy d_R(F,F') >= d/2. Blueprint validation checks
//! exactly the invariants that make every pair fall into one of these
//! cases.

use std::collections::HashSet;

use crate::gf::Field;
use crate::matrix::{scatter_columns, FqMatrix, PivotVector};
use crate::metrics;
use crate::rank::mrd_code;
use crate::subspace::{Code, Subspace};
use crate::{Error, Result};

/// A fully specified instance of the coset construction.
#[derive(Clone)]
pub struct CosetBlueprint {
    field: Field,
    n: usize,
    k: usize,
    n_prime: usize,
    k_prime: usize,
    a_families: Vec<Vec<Subspace>>,
    b_families: Vec<Vec<Subspace>>,
    f_set: Vec<FqMatrix>,
    d: usize,
}

impl CosetBlueprint {
    /// Builds a blueprint and checks all cheap shape invariants. The
    /// expensive distance invariants are checked by [`Self::validate`],
    /// which [`Self::assemble`] runs automatically.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: &Field,
        n: usize,
        k: usize,
        n_prime: usize,
        k_prime: usize,
        a_families: Vec<Vec<Subspace>>,
        b_families: Vec<Vec<Subspace>>,
        f_set: Vec<FqMatrix>,
        d: usize,
    ) -> Result<CosetBlueprint> {
        if !(1 <= k && 2 * k <= n) {
            return Err(Error::InvalidParameter(format!("need 1 <= k <= n/2, got k={k}, n={n}")));
        }
        if !(1 <= k_prime && k_prime <= n_prime) {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= k' <= n', got k'={k_prime}, n'={n_prime}"
            )));
        }
        if !(k > k_prime && k - k_prime <= n - n_prime) {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= k - k' <= n - n', got k={k}, k'={k_prime}, n={n}, n'={n_prime}"
            )));
        }
        if d == 0 || d % 2 != 0 {
            return Err(Error::InvalidParameter(format!("distance {d} must be even and positive")));
        }
        if a_families.len() != b_families.len() {
            return Err(Error::Blueprint(format!(
                "{} left families but {} right families",
                a_families.len(),
                b_families.len()
            )));
        }
        if a_families.is_empty() {
            return Err(Error::Blueprint("no families".into()));
        }
        for (i, fam) in a_families.iter().enumerate() {
            if fam.is_empty() {
                return Err(Error::Blueprint(format!("left family {i} is empty")));
            }
            for s in fam {
                field.expect_same(s.field())?;
                if s.ambient() != n_prime || s.dim() != k_prime {
                    return Err(Error::ShapeMismatch(format!(
                        "left family {i} holds a {}-space of F_q^{}, expected {k_prime} in {n_prime}",
                        s.dim(),
                        s.ambient()
                    )));
                }
            }
        }
        for (i, fam) in b_families.iter().enumerate() {
            if fam.is_empty() {
                return Err(Error::Blueprint(format!("right family {i} is empty")));
            }
            for s in fam {
                field.expect_same(s.field())?;
                if s.ambient() != n - n_prime || s.dim() != k - k_prime {
                    return Err(Error::ShapeMismatch(format!(
                        "right family {i} holds a {}-space of F_q^{}, expected {} in {}",
                        s.dim(),
                        s.ambient(),
                        k - k_prime,
                        n - n_prime
                    )));
                }
            }
        }
        let f_cols = n - n_prime - (k - k_prime);
        if f_set.is_empty() {
            return Err(Error::Blueprint("offset set is empty; use a single zero matrix".into()));
        }
        for f in &f_set {
            field.expect_same(f.field())?;
            if f.rows() != k_prime || f.cols() != f_cols {
                return Err(Error::ShapeMismatch(format!(
                    "offset matrix is {}x{}, expected {k_prime}x{f_cols}",
                    f.rows(),
                    f.cols()
                )));
            }
        }
        Ok(CosetBlueprint {
            field: field.clone(),
            n,
            k,
            n_prime,
            k_prime,
            a_families,
            b_families,
            f_set,
            d,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    pub fn k_prime(&self) -> usize {
        self.k_prime
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    /// Number of family pairs.
    pub fn length(&self) -> usize {
        self.a_families.len()
    }

    pub fn a_families(&self) -> &[Vec<Subspace>] {
        &self.a_families
    }

    pub fn b_families(&self) -> &[Vec<Subspace>] {
        &self.b_families
    }

    pub fn f_set(&self) -> &[FqMatrix] {
        &self.f_set
    }

    pub fn family_params(&self) -> CosetFamilyParams {
        CosetFamilyParams {
            n: self.n,
            k: self.k,
            n_prime: self.n_prime,
            k_prime: self.k_prime,
        }
    }

    /// Sum over the families of |A_i| * |B_i|; the assembled code has
    /// |F| * lambda codewords.
    pub fn lambda(&self) -> u64 {
        self.a_families
            .iter()
            .zip(&self.b_families)
            .map(|(a, b)| a.len() as u64 * b.len() as u64)
            .sum()
    }

    pub fn cardinality(&self) -> u64 {
        self.f_set.len() as u64 * self.lambda()
    }

    /// Checks the distance invariants:
    ///
    /// * every family is internally at subspace distance >= d,
    /// * families on each side are pairwise disjoint with no repeats,
    /// * the offset set has pairwise rank distance >= d/2 (or is a single
    ///   matrix),
    /// * for distinct indices i, j the worst cross-family subspace
    ///   distances satisfy min d_S(A_i, A_j) + min d_S(B_i, B_j) >= d.
    ///
    /// Quadratic in the family sizes; [`Self::assemble_unchecked`] skips it
    /// when a downstream verifier certifies the result instead.
    pub fn validate(&self) -> Result<()> {
        self.validate_side(&self.a_families, "left")?;
        self.validate_side(&self.b_families, "right")?;

        if self.f_set.len() > 1 {
            for (i, f) in self.f_set.iter().enumerate() {
                for (j, g) in self.f_set.iter().enumerate().skip(i + 1) {
                    let dr = metrics::rank_distance(f, g);
                    if 2 * dr < self.d {
                        return Err(Error::Blueprint(format!(
                            "offsets {i} and {j} are at rank distance {dr} < {}",
                            self.d.div_ceil(2)
                        )));
                    }
                }
            }
        }

        let min_a = cross_family_minima(&self.a_families);
        let min_b = cross_family_minima(&self.b_families);
        let l = self.length();
        for i in 0..l {
            for j in i + 1..l {
                let (da, wa) = min_a[i][j];
                let (db, wb) = min_b[i][j];
                if da + db < self.d {
                    return Err(Error::Blueprint(format!(
                        "families {i} and {j}: left pair ({},{}) at distance {da} plus right pair ({},{}) at distance {db} stays below {}",
                        wa.0, wa.1, wb.0, wb.1, self.d
                    )));
                }
            }
        }
        Ok(())
    }

    fn validate_side(&self, families: &[Vec<Subspace>], side: &str) -> Result<()> {
        for (i, fam) in families.iter().enumerate() {
            for (x, u) in fam.iter().enumerate() {
                for (y, v) in fam.iter().enumerate().skip(x + 1) {
                    if u == v {
                        return Err(Error::Blueprint(format!(
                            "{side} family {i} repeats member {x} at position {y}"
                        )));
                    }
                    let dist = metrics::subspace_distance(u, v);
                    if dist < self.d {
                        return Err(Error::Blueprint(format!(
                            "{side} family {i}: members {x} and {y} are at distance {dist} < {}",
                            self.d
                        )));
                    }
                }
            }
        }
        let mut seen: HashSet<&Subspace> = HashSet::new();
        for (i, fam) in families.iter().enumerate() {
            for s in fam {
                if !seen.insert(s) {
                    return Err(Error::Blueprint(format!(
                        "{side} families are not disjoint: family {i} repeats an earlier member"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Validates and assembles; the result has subspace distance >= d.
    pub fn assemble(&self) -> Result<Code> {
        self.validate()?;
        self.assemble_unchecked()
    }

    /// Assembles without the distance invariant checks. The cardinality
    /// identity |F| * lambda is still asserted; distances are only as good
    /// as the blueprint, so certify downstream.
    pub fn assemble_unchecked(&self) -> Result<Code> {
        let mut words = Vec::with_capacity(self.cardinality() as usize);
        for (fam_a, fam_b) in self.a_families.iter().zip(&self.b_families) {
            for a in fam_a {
                for b in fam_b {
                    for f in &self.f_set {
                        words.push(coset_word(a, b, f));
                    }
                }
            }
        }
        let expected = words.len() as u64;
        debug_assert_eq!(expected, self.cardinality());
        let (code, dups) = Code::from_words(&self.field, self.n, words)?;
        if dups != 0 {
            return Err(Error::Blueprint(format!(
                "assembly produced {dups} duplicate codewords; families or offsets overlap"
            )));
        }
        assert_eq!(code.len() as u64, self.cardinality());
        Ok(code)
    }

    /// The pivot compatibility test for joining an outside subspace X to
    /// this code: with s pivots of X among the first n' coordinates, every
    /// assembled codeword W satisfies
    /// d_S(X, W) >= |s - k'| + |dim X - s - (k - k')|, so X keeps distance
    /// d whenever that bound reaches d.
    pub fn pivot_compatible(&self, x: &Subspace, d: usize) -> Result<bool> {
        if x.ambient() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "subspace lives in F_q^{}, blueprint in F_q^{}",
                x.ambient(),
                self.n
            )));
        }
        let s = x.pivots().prefix_weight(self.n_prime) as isize;
        let k_t = x.dim() as isize;
        let kp = self.k_prime as isize;
        let k = self.k as isize;
        let floor = (s - kp).unsigned_abs() + (k_t - s - k + kp).unsigned_abs();
        Ok(floor >= d)
    }
}

/// The row space of [A phi_B(F); 0 B]. The ambient dimension is
/// a.ambient() + b.ambient(); phi_B scatters F's columns into the
/// non-pivot positions of B. The blocks are already reduced, so the result
/// is emitted without re-elimination.
pub fn coset_word(a: &Subspace, b: &Subspace, f: &FqMatrix) -> Subspace {
    let n_prime = a.ambient();
    let n = n_prime + b.ambient();
    let phi = scatter_columns(b.pivots(), f);
    let top = a.matrix().hstack(&phi);
    let bottom = FqMatrix::zero(a.field(), b.dim(), n_prime).hstack(b.matrix());
    let mat = top.vstack(&bottom);
    let mut positions = a.pivots().positions();
    positions.extend(b.pivots().positions().into_iter().map(|p| p + n_prime));
    Subspace::from_rre_unchecked(mat, PivotVector::from_positions(n, &positions))
}

/// Distance guarantee for a single pair of coset codewords. `realized` is
/// the exact subspace distance, known when both subspace parts coincide
/// (it is then twice the offset rank distance).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairGuarantee {
    pub guaranteed: bool,
    pub realized: Option<usize>,
}

/// Checks the sufficient distance condition for the codewords built from
/// (a, b, f) and (a2, b2, f2): subspace parts contributing
/// d_S(a,a2) + d_S(b,b2) >= d, or offsets at rank distance >= d/2.
pub fn check_pair_distance(
    a: &Subspace,
    a2: &Subspace,
    b: &Subspace,
    b2: &Subspace,
    f: &FqMatrix,
    f2: &FqMatrix,
    d: usize,
) -> Result<PairGuarantee> {
    if a.ambient() != a2.ambient() || b.ambient() != b2.ambient() {
        return Err(Error::ShapeMismatch("subspace parts live in different ambients".into()));
    }
    if f.rows() != f2.rows() || f.cols() != f2.cols() {
        return Err(Error::ShapeMismatch("offset matrices differ in shape".into()));
    }
    let ds = metrics::subspace_distance(a, a2) + metrics::subspace_distance(b, b2);
    let dr = metrics::rank_distance(f, f2);
    let guaranteed = ds >= d || 2 * dr >= d;
    let realized = if a == a2 && b == b2 { Some(2 * dr) } else { None };
    Ok(PairGuarantee { guaranteed, realized })
}

/// The outer parameters of one coset-construction code, enough to decide
/// whether two such codes can be unioned without re-checking all pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CosetFamilyParams {
    pub n: usize,
    pub k: usize,
    pub n_prime: usize,
    pub k_prime: usize,
}

impl CosetFamilyParams {
    fn check(&self) -> Result<()> {
        if !(1 <= self.k && 2 * self.k <= self.n)
            || !(1 <= self.k_prime && self.k_prime <= self.n_prime)
            || !(self.k > self.k_prime && self.k - self.k_prime <= self.n - self.n_prime)
        {
            return Err(Error::InvalidParameter(format!("invalid coset parameters {self:?}")));
        }
        Ok(())
    }
}

/// The guaranteed pivot-vector Hamming floor between codewords of two
/// coset-construction codes over the same ambient space: the minimum of
/// f(m) = |m - k1'| + |m - gamma| with gamma = k1' + k2 - k1, taken over
/// the feasible pivot counts m of the second code's words in the first
/// code's prefix window. The union keeps subspace distance d whenever the
/// floor reaches d.
pub fn union_pivot_floor(p1: &CosetFamilyParams, p2: &CosetFamilyParams) -> Result<usize> {
    p1.check()?;
    p2.check()?;
    if p1.n != p2.n {
        return Err(Error::ShapeMismatch(format!(
            "codes live in F_q^{} and F_q^{}",
            p1.n, p2.n
        )));
    }
    // the analysis window is the shorter prefix
    let (p1, p2) = if p1.n_prime <= p2.n_prime { (p1, p2) } else { (p2, p1) };
    let k1p = p1.k_prime as isize;
    let gamma = k1p + p2.k as isize - p1.k as isize;
    let lambda = gamma.max(k1p);
    let beta_low = (p2.k_prime as isize - p2.n_prime as isize + p1.n_prime as isize).max(0);
    let beta_high = (p1.n_prime as isize).min(p2.k_prime as isize);
    debug_assert!(beta_low <= beta_high);
    let f = |m: isize| ((m - k1p).abs() + (m - gamma).abs()) as usize;
    let k = if beta_high <= lambda {
        f(beta_high)
    } else if beta_low <= lambda {
        f(lambda)
    } else {
        f(beta_low)
    };
    Ok(k)
}

/// True when the two coset codes can be unioned at distance d on pivot
/// grounds alone.
pub fn check_union_compatibility(
    p1: &CosetFamilyParams,
    p2: &CosetFamilyParams,
    d: usize,
) -> Result<bool> {
    Ok(union_pivot_floor(p1, p2)? >= d)
}

/// The largest product pairing of two size profiles: both sorted
/// descending, truncated to the shorter, and zipped. Among all injective
/// pairings this maximizes the sum of products.
pub fn sorted_pairing_value(a_sizes: &[u64], b_sizes: &[u64]) -> u64 {
    let mut a = a_sizes.to_vec();
    let mut b = b_sizes.to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable_by(|x, y| y.cmp(x));
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

/// Sorts both family lists by size descending (stable) and truncates to
/// the shorter length, the pairing that maximizes lambda.
pub fn pair_families_by_size(
    mut a: Vec<Vec<Subspace>>,
    mut b: Vec<Vec<Subspace>>,
) -> (Vec<Vec<Subspace>>, Vec<Vec<Subspace>>) {
    a.sort_by(|x, y| y.len().cmp(&x.len()));
    b.sort_by(|x, y| y.len().cmp(&x.len()));
    let l = a.len().min(b.len());
    a.truncate(l);
    b.truncate(l);
    (a, b)
}

/// The default offset set: a maximum-size rank-metric code of the given
/// shape with minimum rank distance d/2, linear, so it contains zero.
pub fn default_offset_set(field: &Field, rows: usize, cols: usize, d: usize) -> Result<Vec<FqMatrix>> {
    if d % 2 != 0 || d == 0 {
        return Err(Error::InvalidParameter(format!("distance {d} must be even and positive")));
    }
    if cols == 0 || rows == 0 {
        return Ok(vec![FqMatrix::zero(field, rows, cols)]);
    }
    Ok(mrd_code(field, rows, cols, d / 2)?.words().collect())
}

/// Per-pair minima of cross-family subspace distances along with argmin
/// member indices; entry [i][j] describes families i and j.
fn cross_family_minima(families: &[Vec<Subspace>]) -> Vec<Vec<(usize, (usize, usize))>> {
    let l = families.len();
    let mut out = vec![vec![(usize::MAX, (0, 0)); l]; l];
    for i in 0..l {
        for j in i + 1..l {
            let mut best = (usize::MAX, (0, 0));
            for (x, u) in families[i].iter().enumerate() {
                for (y, v) in families[j].iter().enumerate() {
                    let dist = metrics::subspace_distance(u, v);
                    if dist < best.0 {
                        best = (dist, (x, y));
                    }
                }
            }
            out[i][j] = best;
            out[j][i] = best;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::enumerate_grassmannian;

    fn f2() -> Field {
        Field::new(2, 1).unwrap()
    }

    fn point(field: &Field, n: usize, i: usize) -> Subspace {
        let mut m = FqMatrix::zero(field, 1, n);
        m.set(0, i, 1);
        Subspace::from_matrix(&m)
    }

    #[test]
    fn degenerate_blueprint_is_a_single_subspace() {
        let field = f2();
        let a = point(&field, 3, 0);
        let b = point(&field, 3, 2);
        let f = FqMatrix::zero(&field, 1, 2);
        let bp = CosetBlueprint::new(&field, 6, 2, 3, 1, vec![vec![a]], vec![vec![b]], vec![f], 2)
            .unwrap();
        assert_eq!(bp.lambda(), 1);
        let code = bp.assemble().unwrap();
        assert_eq!(code.len(), 1);
        assert_eq!(code.words()[0].dim(), 2);
        assert_eq!(code.words()[0].pivots().to_string(), "100001");
    }

    #[test]
    fn word_layout_matches_the_block_shape() {
        let field = f2();
        // A = <e0 + e2> in F_2^3, B = rowspace [I_2 | 1 1] style in F_2^4
        let a = Subspace::from_rows(&field, &[vec![1, 0, 1]]).unwrap();
        let b = Subspace::from_rows(&field, &[vec![1, 0, 1, 0], vec![0, 1, 1, 1]]).unwrap();
        assert_eq!(b.pivots().to_string(), "1100");
        // F is 1x2, scattered into B's non-pivot columns 2 and 3
        let f = FqMatrix::from_rows(&field, &[vec![1, 1]]).unwrap();
        let w = coset_word(&a, &b, &f);
        assert_eq!(w.ambient(), 7);
        assert_eq!(w.dim(), 3);
        assert_eq!(w.pivots().to_string(), "1001100");
        let m = w.matrix();
        // top row: A | 0 0 F
        let top: Vec<u32> = (0..7).map(|j| m.get(0, j)).collect();
        assert_eq!(top, vec![1, 0, 1, 0, 0, 1, 1]);
        // bottom rows: 0 | B
        let mid: Vec<u32> = (0..7).map(|j| m.get(1, j)).collect();
        assert_eq!(mid, vec![0, 0, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn singleton_families_with_distance_four() {
        let field = f2();
        // three points paired with three lines; distinct points and
        // distinct lines each contribute distance 2, totalling 4
        let points: Vec<Vec<Subspace>> = (0..3).map(|i| vec![point(&field, 3, i)]).collect();
        let lines_all = enumerate_grassmannian(&field, 3, 2, None).unwrap();
        let lines: Vec<Vec<Subspace>> = lines_all.into_iter().take(3).map(|l| vec![l]).collect();
        let f = FqMatrix::zero(&field, 1, 1);
        let bp =
            CosetBlueprint::new(&field, 6, 3, 3, 1, points, lines, vec![f], 4).unwrap();
        assert_eq!(bp.lambda(), 3);
        let code = bp.assemble().unwrap();
        assert_eq!(code.len(), 3);
        assert!(metrics::min_distance(&code).unwrap().d >= 4);
    }

    #[test]
    fn offset_cosets_realize_twice_the_rank_distance() {
        let field = f2();
        // single A and B, offsets from a 2x2 rank-distance-2 code
        let a = Subspace::from_rows(&field, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let b = Subspace::from_rows(&field, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let f_set = default_offset_set(&field, 2, 2, 4).unwrap();
        assert_eq!(f_set.len(), 4);
        let bp = CosetBlueprint::new(
            &field,
            8,
            4,
            4,
            2,
            vec![vec![a.clone()]],
            vec![vec![b.clone()]],
            f_set.clone(),
            4,
        )
        .unwrap();
        let code = bp.assemble().unwrap();
        assert_eq!(code.len(), 4);
        assert_eq!(metrics::min_distance(&code).unwrap().d, 4);

        // the reported exact distance matches the brute-forced one
        for f in &f_set {
            for g in &f_set {
                let guard = check_pair_distance(&a, &a, &b, &b, f, g, 4).unwrap();
                let w1 = coset_word(&a, &b, f);
                let w2 = coset_word(&a, &b, g);
                assert_eq!(guard.realized, Some(metrics::subspace_distance(&w1, &w2)));
                if f != g {
                    assert!(guard.guaranteed);
                } else {
                    assert!(!guard.guaranteed, "equal words never reach d >= 2");
                }
            }
        }
    }

    #[test]
    fn validation_rejects_bad_blueprints() {
        let field = f2();
        let p0 = point(&field, 3, 0);
        let p1 = point(&field, 3, 1);
        let line = Subspace::from_rows(&field, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        let f = FqMatrix::zero(&field, 1, 1);

        // family internal distance too small: two points in one family are
        // at distance 2 < 4
        let bp = CosetBlueprint::new(
            &field,
            6,
            3,
            3,
            1,
            vec![vec![p0.clone(), p1.clone()]],
            vec![vec![line.clone()]],
            vec![f.clone()],
            4,
        )
        .unwrap();
        assert!(matches!(bp.validate(), Err(Error::Blueprint(_))));

        // overlapping families on the left side
        let bp2 = CosetBlueprint::new(
            &field,
            6,
            3,
            3,
            1,
            vec![vec![p0.clone()], vec![p0.clone()]],
            vec![vec![line.clone()], vec![line.clone()]],
            vec![f.clone()],
            4,
        )
        .unwrap();
        assert!(matches!(bp2.validate(), Err(Error::Blueprint(_))));

        // cross-family distance sum below d: distinct points (distance 2)
        // plus distinct lines (distance 2) only reach 4 < 6
        let line2 = Subspace::from_rows(&field, &[vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let bp3 = CosetBlueprint::new(
            &field,
            6,
            3,
            3,
            1,
            vec![vec![p0.clone()], vec![p1.clone()]],
            vec![vec![line.clone()], vec![line2]],
            vec![f.clone()],
            6,
        )
        .unwrap();
        assert!(matches!(bp3.validate(), Err(Error::Blueprint(_))));

        // offset set with rank distance 1 at d = 4
        let f_one = FqMatrix::from_rows(&field, &[vec![1, 0], vec![0, 0]]).unwrap();
        let f_zero = FqMatrix::zero(&field, 2, 2);
        let a4 = Subspace::from_rows(&field, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]).unwrap();
        let bp4 = CosetBlueprint::new(
            &field,
            8,
            4,
            4,
            2,
            vec![vec![a4.clone()]],
            vec![vec![a4.clone()]],
            vec![f_zero, f_one],
            4,
        )
        .unwrap();
        assert!(matches!(bp4.validate(), Err(Error::Blueprint(_))));

        // shape errors are caught at construction
        assert!(CosetBlueprint::new(
            &field,
            6,
            3,
            3,
            1,
            vec![vec![p0.clone()]],
            vec![vec![p1.clone()]], // wrong dimension: 1 instead of 2
            vec![f.clone()],
            4
        )
        .is_err());
        assert!(
            CosetBlueprint::new(&field, 6, 4, 3, 1, vec![], vec![], vec![f], 4).is_err(),
            "k > n/2"
        );
    }

    #[test]
    fn any_family_permutation_keeps_the_distance() {
        let field = f2();
        let points: Vec<Vec<Subspace>> = (0..3).map(|i| vec![point(&field, 3, i)]).collect();
        let lines_all = enumerate_grassmannian(&field, 3, 2, None).unwrap();
        let lines: Vec<Vec<Subspace>> = lines_all.into_iter().take(3).map(|l| vec![l]).collect();
        let f = FqMatrix::zero(&field, 1, 1);

        // all 6 pairings of three singleton families stay at distance 4
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        for perm in perms {
            let b_perm: Vec<Vec<Subspace>> = perm.iter().map(|&i| lines[i].clone()).collect();
            let bp = CosetBlueprint::new(
                &field,
                6,
                3,
                3,
                1,
                points.clone(),
                b_perm,
                vec![f.clone()],
                4,
            )
            .unwrap();
            let code = bp.assemble().unwrap();
            assert_eq!(code.len(), 3);
            assert!(metrics::min_distance(&code).unwrap().d >= 4);
        }
    }

    #[test]
    fn sorted_pairing_is_optimal_exhaustively() {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for i in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let profiles: [(&[u64], &[u64]); 4] = [
            (&[5, 3, 2], &[4, 4, 1]),
            (&[1, 1, 1, 1], &[7, 1, 1, 1]),
            (&[9, 2, 2, 5, 7], &[3, 8, 8, 1, 2]),
            (&[6, 5, 4, 3, 2, 1], &[1, 2, 3, 4, 5, 6]),
        ];
        for (a, b) in profiles {
            let claimed = sorted_pairing_value(a, b);
            let mut best = 0;
            for perm in permutations(b.len()) {
                let value: u64 = a.iter().zip(perm.iter().map(|&i| b[i])).map(|(x, y)| x * y).sum();
                best = best.max(value);
            }
            assert_eq!(claimed, best);
        }
        // unequal lengths truncate to the shorter profile
        assert_eq!(sorted_pairing_value(&[4, 2], &[3]), 12);
    }

    #[test]
    fn pivot_compatibility_bound() {
        let field = f2();
        // blueprint with n = 10, k = 4, n' = 4, k' = 1
        let a = point(&field, 4, 0);
        let b = Subspace::from_rows(
            &field,
            &[vec![1, 0, 0, 0, 0, 0], vec![0, 1, 0, 0, 0, 0], vec![0, 0, 1, 0, 0, 0]],
        )
        .unwrap();
        let f = FqMatrix::zero(&field, 1, 3);
        let bp = CosetBlueprint::new(&field, 10, 4, 4, 1, vec![vec![a]], vec![vec![b]], vec![f], 6)
            .unwrap();

        // an identity-prefix subspace has all four pivots in the window:
        // |4-1| + |4-4-4+1| = 6
        let x = Subspace::from_rows(
            &field,
            &[
                vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                vec![0, 1, 0, 0, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 1, 0, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 1, 0, 0, 0, 0, 0, 0],
            ],
        )
        .unwrap();
        assert!(bp.pivot_compatible(&x, 6).unwrap());
        assert!(!bp.pivot_compatible(&x, 8).unwrap());

        // s = k' and full dimension k gives floor 0
        let y = Subspace::from_rows(
            &field,
            &[
                vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 1, 0, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 1, 0, 0, 0, 0],
                vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 0],
            ],
        )
        .unwrap();
        assert!(!bp.pivot_compatible(&y, 2).unwrap());

        // the guarantee is honest: every assembled word is at distance >= 6
        // from x
        for w in bp.assemble().unwrap().words() {
            assert!(metrics::subspace_distance(&x, w) >= 6);
        }

        let z = point(&field, 9, 0);
        assert!(bp.pivot_compatible(&z, 2).is_err(), "ambient mismatch");
    }

    #[test]
    fn union_floor_cases() {
        // two copies of the same parameter set with k1' = k2' collapse the
        // floor to zero
        let p = CosetFamilyParams { n: 8, k: 4, n_prime: 4, k_prime: 2 };
        assert_eq!(union_pivot_floor(&p, &p).unwrap(), 0);
        assert!(!check_union_compatibility(&p, &p, 2).unwrap());

        // small example: different inner dimensions on the same window
        let p1 = CosetFamilyParams { n: 6, k: 3, n_prime: 2, k_prime: 1 };
        let p2 = CosetFamilyParams { n: 6, k: 3, n_prime: 2, k_prime: 2 };
        assert_eq!(union_pivot_floor(&p1, &p2).unwrap(), 2);
        assert!(check_union_compatibility(&p1, &p2, 2).unwrap());
        assert!(!check_union_compatibility(&p1, &p2, 4).unwrap());

        // the floor is symmetric in its arguments
        assert_eq!(union_pivot_floor(&p2, &p1).unwrap(), 2);

        // mismatched ambients are rejected
        let p3 = CosetFamilyParams { n: 10, k: 3, n_prime: 2, k_prime: 1 };
        assert!(union_pivot_floor(&p1, &p3).is_err());

        // brute-force the definition on a parameter grid: minimize f over
        // the feasible pivot counts of the second code's prefix window and
        // compare with the case formula
        for n in 4..=10usize {
            for ka in 1..=n / 2 {
                for kb in 1..=n / 2 {
                    for n1 in 1..n {
                        for k1p in 1..=ka.min(n1) {
                            if ka - k1p == 0 || ka - k1p > n - n1 {
                                continue;
                            }
                            for n2 in n1..n {
                                for k2p in 1..=kb.min(n2) {
                                    if kb - k2p == 0 || kb - k2p > n - n2 {
                                        continue;
                                    }
                                    let q1 =
                                        CosetFamilyParams { n, k: ka, n_prime: n1, k_prime: k1p };
                                    let q2 =
                                        CosetFamilyParams { n, k: kb, n_prime: n2, k_prime: k2p };
                                    let got = union_pivot_floor(&q1, &q2).unwrap();
                                    let gamma = k1p as isize + kb as isize - ka as isize;
                                    let lo = (k2p as isize - n2 as isize + n1 as isize).max(0);
                                    let hi = (n1 as isize).min(k2p as isize);
                                    let brute = (lo..=hi)
                                        .map(|m| {
                                            ((m - k1p as isize).abs() + (m - gamma).abs()) as usize
                                        })
                                        .min()
                                        .unwrap();
                                    assert_eq!(got, brute, "{q1:?} vs {q2:?}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
