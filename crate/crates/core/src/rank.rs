//! Rank-metric codes: Gabidulin construction with nested subcodes and
//! cosets, maximum-size formulas, lifting into subspace codes, codes
//! supported on Ferrers diagrams, and the Echelon-Ferrers assembly.
//!
//! A rank-metric code here is a coset `offset + span(basis)` of F_q-linear
//! combinations of basis matrices. Gabidulin codes are built by evaluating
//! linearized polynomials sum a_i X^(q^i) at the power basis points of a
//! field tower and expanding the values over the same basis; ordering the
//! basis monomial-major makes the higher-distance codes literal prefixes,
//! which the coset machinery relies on.

use num_bigint::BigUint;
use num_traits::One;

use crate::gf::{Field, FieldTower};
use crate::matrix::{scatter_columns, FerrersDiagram, FqMatrix, PivotVector};
use crate::subspace::{Code, Subspace};
use crate::{Error, Result};

/// Largest cardinality of a rank-metric code of m x n matrices over F_q
/// with minimum rank distance d; the convention for d > min(m, n) is 1
/// (only a single matrix).
pub fn mrd_size(q: u32, m: usize, n: usize, d: usize) -> BigUint {
    assert!(m >= 1 && n >= 1 && d >= 1);
    if d > m.min(n) {
        return BigUint::one();
    }
    BigUint::from(q).pow((m.max(n) * (m.min(n) - d + 1)) as u32)
}

/// M(q, k, n, d): the cardinality of the lifted MRD code of k-dimensional
/// subspaces of F_q^n with subspace distance d (even).
pub fn lifted_mrd_size(q: u32, k: usize, n: usize, d: usize) -> Result<BigUint> {
    if d % 2 != 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "subspace distance {d} must be even and positive"
        )));
    }
    assert!(k >= 1 && k < n);
    Ok(mrd_size(q, k, n - k, d / 2))
}

// ---------------------------------------------------------------------------
// Generic rank-metric codes.
// ---------------------------------------------------------------------------

/// An affine rank-metric code: { offset + x : x in span(basis) }. Linear
/// codes have a zero offset. The basis is orderly and its prefix structure
/// is meaningful for nested codes.
#[derive(Clone)]
pub struct RankMetricCode {
    field: Field,
    rows: usize,
    cols: usize,
    offset: FqMatrix,
    basis: Vec<FqMatrix>,
    declared_distance: usize,
}

impl RankMetricCode {
    pub fn new(
        field: &Field,
        offset: FqMatrix,
        basis: Vec<FqMatrix>,
        declared_distance: usize,
    ) -> Result<RankMetricCode> {
        let (rows, cols) = (offset.rows(), offset.cols());
        field.expect_same(offset.field())?;
        for b in &basis {
            if (b.rows(), b.cols()) != (rows, cols) {
                return Err(Error::ShapeMismatch(format!(
                    "basis matrix is {}x{}, offset is {rows}x{cols}",
                    b.rows(),
                    b.cols()
                )));
            }
            field.expect_same(b.field())?;
        }
        let code = RankMetricCode {
            field: field.clone(),
            rows,
            cols,
            offset,
            basis,
            declared_distance,
        };
        if code.dimension() > 0 {
            // basis must be F_q-independent: flatten to vectors and rank
            let flat = FqMatrix::from_fn(field, code.basis.len(), rows * cols, |i, t| {
                code.basis[i].get(t / cols.max(1), t % cols.max(1))
            });
            if flat.rank() != code.basis.len() {
                return Err(Error::InvalidParameter(
                    "rank-metric basis matrices are dependent".into(),
                ));
            }
        }
        Ok(code)
    }

    /// The singleton code containing only `offset`.
    pub fn singleton(field: &Field, offset: FqMatrix, declared_distance: usize) -> RankMetricCode {
        RankMetricCode::new(field, offset, Vec::new(), declared_distance).unwrap()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn offset(&self) -> &FqMatrix {
        &self.offset
    }

    pub fn basis(&self) -> &[FqMatrix] {
        &self.basis
    }

    pub fn is_linear(&self) -> bool {
        self.offset.is_zero()
    }

    /// F_q-dimension of the linear part.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn declared_distance(&self) -> usize {
        self.declared_distance
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.field.q()).pow(self.basis.len() as u32)
    }

    /// Translate the whole code by a fixed matrix (rank distances are
    /// translation invariant).
    pub fn translate(&self, t: &FqMatrix) -> RankMetricCode {
        let mut out = self.clone();
        out.offset = self.offset.add(t);
        out
    }

    /// All codewords, in the deterministic odometer order of the basis
    /// coefficients (first basis digit most significant).
    pub fn words(&self) -> RankWords<'_> {
        RankWords {
            code: self,
            digits: vec![0; self.basis.len()],
            current: self.offset.clone(),
            done: false,
        }
    }

    /// Minimum rank distance observed. Linear parts are scanned through
    /// their nonzero codewords (distances are translation invariant);
    /// codes larger than `exhaustive_limit` fall back to seeded sampling.
    /// Singletons return None.
    pub fn observed_min_distance(
        &self,
        exhaustive_limit: u64,
        samples: u64,
        seed: u64,
    ) -> Option<usize> {
        use rand::{Rng, SeedableRng};
        if self.basis.is_empty() {
            return None;
        }
        let card = self.cardinality();
        let mut best = usize::MAX;
        if card <= BigUint::from(exhaustive_limit) {
            let zero_offset = self.linear_part();
            for w in zero_offset.words() {
                if w.is_zero() {
                    continue;
                }
                best = best.min(w.rank());
            }
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = self.field.q();
            for _ in 0..samples {
                let mut w = FqMatrix::zero(&self.field, self.rows, self.cols);
                let mut nonzero = false;
                for b in &self.basis {
                    let c = rng.gen_range(0..q);
                    if c != 0 {
                        nonzero = true;
                        w = w.add(&b.scale(c));
                    }
                }
                if nonzero {
                    best = best.min(w.rank());
                }
            }
        }
        Some(best)
    }

    /// The code translated to contain zero.
    pub fn linear_part(&self) -> RankMetricCode {
        let mut out = self.clone();
        out.offset = FqMatrix::zero(&self.field, self.rows, self.cols);
        out
    }

    /// The sub-code spanned by the first `prefix` basis matrices.
    pub fn prefix_code(&self, prefix: usize, declared_distance: usize) -> RankMetricCode {
        assert!(prefix <= self.basis.len());
        RankMetricCode {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            offset: self.offset.clone(),
            basis: self.basis[..prefix].to_vec(),
            declared_distance,
        }
    }
}

/// Iterator over the words of a [`RankMetricCode`]. Each step adds a single
/// basis matrix; a digit wrapping q -> 0 contributes q identical additions,
/// which vanish in characteristic p.
pub struct RankWords<'a> {
    code: &'a RankMetricCode,
    digits: Vec<u32>,
    current: FqMatrix,
    done: bool,
}

impl Iterator for RankWords<'_> {
    type Item = FqMatrix;

    fn next(&mut self) -> Option<FqMatrix> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let q = self.code.field.q();
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.current = self.current.add(&self.code.basis[i]);
            self.digits[i] += 1;
            if self.digits[i] < q {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

// ---------------------------------------------------------------------------
// Gabidulin codes.
// ---------------------------------------------------------------------------

/// A linear maximum-rank-distance code of `rows x cols` matrices over F_q
/// with minimum rank distance exactly `d`, for d <= min(rows, cols), built
/// from linearized polynomial evaluation. Higher-distance codes over the
/// same shape are prefixes, exposed through [`GabidulinCode::subcode`] and
/// [`GabidulinCode::coset_offsets`].
pub struct GabidulinCode {
    field: Field,
    rows: usize,
    cols: usize,
    d: usize,
    tall: usize,
    short: usize,
    code: RankMetricCode,
}

impl GabidulinCode {
    pub fn new(field: &Field, rows: usize, cols: usize, d: usize) -> Result<GabidulinCode> {
        if rows == 0 || cols == 0 || d == 0 {
            return Err(Error::InvalidParameter(
                "Gabidulin shape and distance must be positive".into(),
            ));
        }
        let (tall, short) = (rows.max(cols), rows.min(cols));
        if d > short {
            return Err(Error::InvalidParameter(format!(
                "rank distance {d} exceeds min({rows},{cols})"
            )));
        }
        let tower = FieldTower::new(field, tall as u32)?;
        let t = short - d + 1;
        // evaluation points: the power basis of the tall extension
        let points: Vec<u32> = (0..short).map(|j| tower.power_point(j as u32)).collect();
        // basis matrix (i, e): the evaluation of g^e * X^(q^i); entry
        // (r, j) is coordinate r of g^e * points[j]^(q^i) over the base
        let mut basis = Vec::with_capacity(t * tall);
        for i in 0..t {
            let frobs: Vec<u32> = points.iter().map(|&p| tower.frobenius(p, i as u32)).collect();
            for e in 0..tall {
                let ge = tower.power_point(e as u32);
                let mut m = FqMatrix::zero(field, tall, short);
                for (j, &fp) in frobs.iter().enumerate() {
                    let val = tower.top().mul(ge, fp);
                    for (r, c) in tower.expand(val).into_iter().enumerate() {
                        m.set(r, j, c);
                    }
                }
                basis.push(if rows < cols { m.transpose() } else { m });
            }
        }
        let offset = FqMatrix::zero(field, rows, cols);
        let code = RankMetricCode::new(field, offset, basis, d)?;
        Ok(GabidulinCode { field: field.clone(), rows, cols, d, tall, short, code })
    }

    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn code(&self) -> &RankMetricCode {
        &self.code
    }

    pub fn into_code(self) -> RankMetricCode {
        self.code
    }

    pub fn cardinality(&self) -> BigUint {
        self.code.cardinality()
    }

    /// The nested subcode with minimum rank distance d2 >= d: the prefix of
    /// the basis over the monomials X^(q^i), i < short - d2 + 1.
    pub fn subcode(&self, d2: usize) -> Result<RankMetricCode> {
        if d2 < self.d || d2 > self.short {
            return Err(Error::InvalidParameter(format!(
                "nested distance {d2} outside [{}, {}]",
                self.d, self.short
            )));
        }
        let t2 = self.short - d2 + 1;
        Ok(self.code.prefix_code(t2 * self.tall, d2))
    }

    /// Representatives of the cosets of the distance-d2 subcode inside this
    /// code: the span of the basis suffix, enumerated deterministically.
    /// The first representative is zero. There are q^((d2 - d) * tall) of
    /// them.
    pub fn coset_offsets(&self, d2: usize) -> Result<Vec<FqMatrix>> {
        let sub = self.subcode(d2)?;
        let suffix = RankMetricCode::new(
            &self.field,
            FqMatrix::zero(&self.field, self.rows, self.cols),
            self.code.basis()[sub.dimension()..].to_vec(),
            self.d,
        )?;
        Ok(suffix.words().collect())
    }
}

/// A maximum-size rank-metric code for any parameters: Gabidulin when
/// d <= min(rows, cols), the zero singleton otherwise.
pub fn mrd_code(field: &Field, rows: usize, cols: usize, d: usize) -> Result<RankMetricCode> {
    if d > rows.min(cols) {
        return Ok(RankMetricCode::singleton(
            field,
            FqMatrix::zero(field, rows, cols),
            d,
        ));
    }
    Ok(GabidulinCode::new(field, rows, cols, d)?.into_code())
}

// ---------------------------------------------------------------------------
// Lifting.
// ---------------------------------------------------------------------------

/// The subspace spanned by [I_k | A] for a k x (n - k) matrix A.
pub fn lift_matrix(a: &FqMatrix) -> Subspace {
    let k = a.rows();
    let n = k + a.cols();
    let v = PivotVector::from_positions(n, &(0..k).collect::<Vec<_>>());
    let mut m = FqMatrix::zero(a.field(), k, n);
    for i in 0..k {
        m.set(i, i, 1);
        for j in 0..a.cols() {
            m.set(i, k + j, a.get(i, j));
        }
    }
    Subspace::from_rre_unchecked(m, v)
}

/// Lift every matrix of a rank-metric code; the result lives in
/// G_q(rows + cols, rows), has the same cardinality, and has subspace
/// distance twice the rank distance.
pub fn lift_code(c: &RankMetricCode) -> Result<Code> {
    let n = c.rows() + c.cols();
    let words: Vec<Subspace> = c.words().map(|m| lift_matrix(&m)).collect();
    let expected = words.len();
    let (code, dups) = Code::from_words(c.field(), n, words)?;
    debug_assert_eq!(dups, 0, "lifting is injective");
    debug_assert_eq!(code.len(), expected);
    Ok(code)
}

/// The lifted MRD code: k-dimensional subspaces of F_q^n at subspace
/// distance d (even), of cardinality M(q, k, n, d).
pub fn lifted_mrd(field: &Field, n: usize, k: usize, d: usize) -> Result<Code> {
    if d % 2 != 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "subspace distance {d} must be even and positive"
        )));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("need 0 < k < n, got k={k}, n={n}")));
    }
    lift_code(&mrd_code(field, k, n - k, d / 2)?)
}

// ---------------------------------------------------------------------------
// Ferrers-diagram codes.
// ---------------------------------------------------------------------------

/// Upper bound for the dimension of a rank-metric code supported on the
/// Ferrers diagram of `v` with minimum rank distance `delta`.
pub fn ferrers_bound(v: &PivotVector, delta: usize) -> usize {
    FerrersDiagram::from_pivots(v).distance_bound_exponent(delta)
}

/// Outcome of [`ferrers_code`]: the constructed code together with the
/// dimension bound. Whether the bound is attainable for all parameters is
/// open; callers must consult `attained` rather than assume it.
pub struct FerrersCodeOutcome {
    pub code: RankMetricCode,
    pub bound_exponent: usize,
    pub achieved_exponent: usize,
    pub attained: bool,
}

/// Budget for the exhaustive fallback search: run it only when the diagram
/// has at most this many fillings.
const FERRERS_SEARCH_LIMIT: u64 = 1 << 20;

/// A linear rank-metric code supported on the Ferrers diagram of `v` (in
/// the k x (n-k) grid, rows right-aligned) with minimum rank distance at
/// least `delta`. Primary construction: intersect a Gabidulin code with the
/// off-diagram vanishing conditions; when that misses the dimension bound
/// and the diagram is small, a greedy exhaustive search tries to close the
/// gap.
pub fn ferrers_code(field: &Field, v: &PivotVector, delta: usize) -> Result<FerrersCodeOutcome> {
    assert!(delta >= 1);
    let diagram = FerrersDiagram::from_pivots(v);
    let (k, c) = (diagram.rows(), diagram.cols());
    let bound = diagram.distance_bound_exponent(delta);
    let zero = FqMatrix::zero(field, k, c);

    // positions allowed by the diagram: row i may use the rightmost
    // row_dots[i] columns
    let allowed = |i: usize, j: usize| j >= c - diagram.row_dots()[i];
    let off_diagram: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .filter(|&(i, j)| !allowed(i, j))
        .collect();

    let mut best: Vec<FqMatrix> = Vec::new();
    if delta <= k.min(c) && k > 0 && c > 0 {
        let gab = GabidulinCode::new(field, k, c, delta)?;
        let gb = gab.code().basis();
        // coefficient combinations of the Gabidulin basis vanishing on all
        // off-diagram positions
        let conditions = FqMatrix::from_fn(field, off_diagram.len(), gb.len(), |r, t| {
            let (i, j) = off_diagram[r];
            gb[t].get(i, j)
        });
        let kernel = conditions.nullspace();
        for r in 0..kernel.rows() {
            let mut m = zero.clone();
            for (t, &coef) in kernel.row(r).iter().enumerate() {
                if coef != 0 {
                    m = m.add(&gb[t].scale(coef));
                }
            }
            best.push(m);
        }
    }

    let mut attained = best.len() >= bound;
    if !attained {
        let fills = BigUint::from(field.q()).pow(diagram.total_dots() as u32);
        if fills <= BigUint::from(FERRERS_SEARCH_LIMIT) {
            let searched = ferrers_greedy_search(field, &diagram, delta);
            if searched.len() > best.len() {
                best = searched;
            }
            attained = best.len() >= bound;
        }
    }

    let achieved = best.len();
    debug_assert!(achieved <= bound, "dimension bound violated");
    let code = RankMetricCode::new(field, zero, best, delta)?;
    Ok(FerrersCodeOutcome { code, bound_exponent: bound, achieved_exponent: achieved, attained })
}

/// Greedy linear-code growth over all diagram fillings in deterministic
/// order: adjoin a matrix when every new nonzero combination keeps rank >=
/// delta.
fn ferrers_greedy_search(field: &Field, diagram: &FerrersDiagram, delta: usize) -> Vec<FqMatrix> {
    let (k, c) = (diagram.rows(), diagram.cols());
    let q = field.q();
    let positions: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .filter(|&(i, j)| j >= c - diagram.row_dots()[i])
        .collect();
    let dots = positions.len();
    let mut basis: Vec<FqMatrix> = Vec::new();
    let mut span: Vec<FqMatrix> = vec![FqMatrix::zero(field, k, c)];
    let mut counter = vec![0u32; dots];
    'outer: loop {
        // advance the odometer first so the zero matrix is skipped
        let mut i = dots;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            counter[i] += 1;
            if counter[i] < q {
                break;
            }
            counter[i] = 0;
        }
        let mut cand = FqMatrix::zero(field, k, c);
        for (t, &(r, cc)) in positions.iter().enumerate() {
            cand.set(r, cc, counter[t]);
        }
        // closing the span with cand must keep all new words at rank >= delta
        let ok = span.iter().all(|w| {
            (1..q).all(|s| {
                let nw = w.add(&cand.scale(s));
                nw.rank() >= delta
            })
        });
        if ok {
            let mut grown = span.clone();
            for w in &span {
                for s in 1..q {
                    grown.push(w.add(&cand.scale(s)));
                }
            }
            span = grown;
            basis.push(cand);
        }
    }
    basis
}

// ---------------------------------------------------------------------------
// Echelon-Ferrers assembly.
// ---------------------------------------------------------------------------

/// A set of pivot profiles with a common length and a known minimum
/// pairwise Hamming distance.
#[derive(Clone, Debug)]
pub struct SkeletonCode {
    n: usize,
    words: Vec<PivotVector>,
    min_hamming: usize,
}

impl SkeletonCode {
    pub fn new(n: usize, mut words: Vec<PivotVector>) -> Result<SkeletonCode> {
        for w in &words {
            if w.len() != n {
                return Err(Error::ShapeMismatch(format!(
                    "skeleton word of length {} in a length-{n} code",
                    w.len()
                )));
            }
        }
        words.sort_by(|a, b| b.as_number().cmp(&a.as_number()));
        words.dedup();
        let mut min_hamming = usize::MAX;
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                min_hamming = min_hamming.min(a.hamming(b));
            }
        }
        Ok(SkeletonCode { n, words, min_hamming })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[PivotVector] {
        &self.words
    }

    /// Minimum pairwise Hamming distance; usize::MAX for fewer than two
    /// words.
    pub fn min_hamming(&self) -> usize {
        self.min_hamming
    }
}

pub struct EchelonFerrersOutcome {
    pub code: Code,
    /// Per-profile construction results, in skeleton order.
    pub classes: Vec<(PivotVector, FerrersCodeOutcome)>,
}

/// The multilevel construction: for each skeleton profile, a Ferrers-
/// supported rank-metric code of rank distance >= d/2 scattered into the
/// profile's free positions. Words from one profile are at subspace
/// distance 2 * rank distance; words from different profiles are at least
/// the profiles' Hamming distance apart, so the union has distance >= d.
pub fn echelon_ferrers(field: &Field, skeleton: &SkeletonCode, d: usize) -> Result<EchelonFerrersOutcome> {
    if d % 2 != 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "target distance {d} must be even and positive"
        )));
    }
    if skeleton.len() >= 2 && skeleton.min_hamming() < d {
        return Err(Error::InvalidParameter(format!(
            "skeleton distance {} is below the target distance {d}",
            skeleton.min_hamming()
        )));
    }
    let delta = d / 2;
    let mut words: Vec<Subspace> = Vec::new();
    let mut classes = Vec::new();
    for v in skeleton.words() {
        let outcome = ferrers_code(field, v, delta)?;
        let template = {
            let mut m = FqMatrix::zero(field, v.weight(), v.len());
            for (i, p) in v.positions().into_iter().enumerate() {
                m.set(i, p, 1);
            }
            m
        };
        for f in outcome.code.words() {
            let m = template.add(&scatter_columns(v, &f));
            words.push(Subspace::from_rre_unchecked(m, *v));
        }
        classes.push((*v, outcome));
    }
    let expected = words.len();
    let (code, dups) = Code::from_words(field, skeleton.ambient(), words)?;
    debug_assert_eq!(dups, 0);
    debug_assert_eq!(code.len(), expected);
    Ok(EchelonFerrersOutcome { code, classes })
}

/// Exhaustive upper bound for the Echelon-Ferrers construction with
/// constant dimension k: the maximum over skeleton codes (weight-k words,
/// pairwise Hamming distance >= d) of the sum of per-profile dimension
/// bounds q^ferrers_bound. Exact branch-and-bound over the compatibility
/// graph; returns the bound and one attaining skeleton.
pub fn echelon_ferrers_profile_bound(
    q: u32,
    n: usize,
    k: usize,
    d: usize,
) -> Result<(BigUint, Vec<PivotVector>)> {
    if d % 2 != 0 || d == 0 {
        return Err(Error::InvalidParameter("distance must be even and positive".into()));
    }
    let delta = d / 2;
    let profiles = PivotVector::all_of_weight(n, k);
    // per-profile cap q^bound as u128; guard against overflow
    let mut weights: Vec<u128> = Vec::with_capacity(profiles.len());
    for v in &profiles {
        let e = ferrers_bound(v, delta) as u32;
        let w = (q as u128)
            .checked_pow(e)
            .ok_or_else(|| Error::Unsupported("profile cap exceeds u128".into()))?;
        weights.push(w);
    }
    // order by weight descending (ties: profile order already canonical)
    let mut order: Vec<usize> = (0..profiles.len()).collect();
    order.sort_by(|&a, &b| weights[b].cmp(&weights[a]));
    let verts: Vec<PivotVector> = order.iter().map(|&i| profiles[i]).collect();
    let w: Vec<u128> = order.iter().map(|&i| weights[i]).collect();

    // suffix weight sums for pruning
    let mut suffix: Vec<u128> = vec![0; verts.len() + 1];
    for i in (0..verts.len()).rev() {
        suffix[i] = suffix[i + 1] + w[i];
    }

    struct Search<'a> {
        verts: &'a [PivotVector],
        w: &'a [u128],
        suffix: &'a [u128],
        best: u128,
        best_set: Vec<usize>,
        cur: Vec<usize>,
        compatible_d: usize,
    }
    impl Search<'_> {
        fn run(&mut self, start: usize, total: u128) {
            if total > self.best {
                self.best = total;
                self.best_set = self.cur.clone();
            }
            for i in start..self.verts.len() {
                if total + self.suffix[i] <= self.best {
                    return; // no remaining set can improve
                }
                if self
                    .cur
                    .iter()
                    .all(|&j| self.verts[j].hamming(&self.verts[i]) >= self.compatible_d)
                {
                    self.cur.push(i);
                    self.run(i + 1, total + self.w[i]);
                    self.cur.pop();
                }
            }
        }
    }
    let mut s = Search {
        verts: &verts,
        w: &w,
        suffix: &suffix,
        best: 0,
        best_set: Vec::new(),
        cur: Vec::new(),
        compatible_d: d,
    };
    s.run(0, 0);
    let mut skeleton: Vec<PivotVector> = s.best_set.iter().map(|&i| verts[i]).collect();
    skeleton.sort_by(|a, b| b.as_number().cmp(&a.as_number()));
    let total = s.best_set.iter().map(|&i| BigUint::from(w[i])).sum();
    Ok((total, skeleton))
}
