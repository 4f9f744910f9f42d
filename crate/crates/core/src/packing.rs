//! Partitions of subspace codes into high-distance parts: spreads and
//! partial spreads, a parallelism of the lines of PG(3, 2), exact and
//! greedy decomposition of a ground code, and the pairing-size program
//! that governs paired coset families.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::coset::{default_offset_set, CosetBlueprint};
use crate::gf::{Field, FieldTower};
use crate::matrix::gaussian_binomial;
use crate::metrics::{check_min_distance, subspace_distance};
use crate::rank::{lift_code, lift_matrix, mrd_code, GabidulinCode};
use crate::subspace::{enumerate_grassmannian, Code, Subspace};
use crate::{Error, Result};

/// How a part of a packing was selected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartMode {
    /// Proved maximum for the set it was drawn from.
    Exact,
    /// Greedy insertion in canonical order; may be smaller than optimal.
    Greedy,
}

/// A split of a ground code into parts with a guaranteed internal minimum
/// distance. Parts are pairwise disjoint; words covered by no part sit in
/// `residual`, so parts plus residual always reconstitute the ground code
/// exactly. All of that is checked on construction.
#[derive(Clone)]
pub struct Packing {
    ground: Code,
    parts: Vec<Code>,
    modes: Vec<PartMode>,
    d: usize,
    residual: Code,
}

impl Packing {
    pub fn new(
        ground: Code,
        parts: Vec<Code>,
        modes: Vec<PartMode>,
        d: usize,
        residual: Code,
    ) -> Result<Packing> {
        if parts.len() != modes.len() {
            return Err(Error::InvalidParameter(format!(
                "{} parts but {} part modes",
                parts.len(),
                modes.len()
            )));
        }
        let mut seen: Vec<&Subspace> = Vec::with_capacity(ground.len());
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidParameter(format!("part {i} is empty")));
            }
            if part.ambient() != ground.ambient() {
                return Err(Error::ShapeMismatch(format!(
                    "part {i} lives in dimension {}, ground in {}",
                    part.ambient(),
                    ground.ambient()
                )));
            }
            if let Err(w) = check_min_distance(part, d) {
                return Err(Error::Infeasible(format!(
                    "part {i} has distance {} < {d} between its words {} and {}",
                    w.d, w.i, w.j
                )));
            }
            for word in part.words() {
                if !ground.contains(word) {
                    return Err(Error::Infeasible(format!(
                        "part {i} contains a word outside the ground code"
                    )));
                }
                seen.push(word);
            }
        }
        for word in residual.words() {
            if !ground.contains(word) {
                return Err(Error::Infeasible(
                    "residual contains a word outside the ground code".into(),
                ));
            }
            seen.push(word);
        }
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Infeasible(
                "parts and residual overlap".into(),
            ));
        }
        if seen.len() != ground.len() {
            return Err(Error::Infeasible(format!(
                "parts and residual cover {} of {} ground words",
                seen.len(),
                ground.len()
            )));
        }
        Ok(Packing { ground, parts, modes, d, residual })
    }

    pub fn ground(&self) -> &Code {
        &self.ground
    }

    pub fn parts(&self) -> &[Code] {
        &self.parts
    }

    pub fn modes(&self) -> &[PartMode] {
        &self.modes
    }

    /// The guaranteed minimum distance inside every part.
    pub fn distance(&self) -> usize {
        self.d
    }

    pub fn residual(&self) -> &Code {
        &self.residual
    }

    /// Number of parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// Total number of words covered by the parts.
    pub fn covered(&self) -> usize {
        self.parts.iter().map(Code::len).sum()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.parts.iter().map(Code::len).collect()
    }

    /// True when the ground code is a full Grassmannian, nothing is left
    /// over, and every part is a spread (pairwise trivial intersections,
    /// so each part covers every point exactly once).
    pub fn is_parallelism(&self) -> bool {
        let Some(k) = self.ground.constant_dim() else {
            return false;
        };
        let n = self.ground.ambient();
        if k == 0 || n % k != 0 || !self.residual.is_empty() {
            return false;
        }
        let q = self.ground.field().q();
        if gaussian_binomial(q, n, k).to_usize() != Some(self.ground.len()) {
            return false;
        }
        let Some(spread_len) = spread_size(q, n, k) else {
            return false;
        };
        self.parts.iter().all(|p| {
            p.len() as u128 == spread_len && check_min_distance(p, 2 * k).is_ok()
        })
    }
}

/// (q^n - 1) / (q^k - 1), the number of members of a k-spread of F_q^n.
fn spread_size(q: u32, n: usize, k: usize) -> Option<u128> {
    let qn = (q as u128).checked_pow(n as u32)?;
    let qk = (q as u128).checked_pow(k as u32)?;
    Some((qn - 1) / (qk - 1))
}

// ---------------------------------------------------------------------------
// Spreads and duals.
// ---------------------------------------------------------------------------

/// The Desarguesian k-spread of F_q^n for k | n: identify F_q^n with
/// F_{q^n} and take the sets alpha * F_{q^k}, one per coset of the
/// multiplicative subgroup. Its (q^n - 1)/(q^k - 1) members cover every
/// point exactly once, so the minimum distance is 2k.
pub fn spread(field: &Field, n: usize, k: usize) -> Result<Code> {
    if n == 0 || k == 0 || n % k != 0 {
        return Err(Error::InvalidParameter(format!(
            "spread needs k | n with k >= 1, got n={n}, k={k}"
        )));
    }
    let tower = FieldTower::new(field, n as u32)?;
    let top = tower.top().clone();
    let count = spread_size(field.q(), n, k)
        .ok_or_else(|| Error::Unsupported("spread size overflows".into()))? as u64;
    let g = top.generator();
    // g^count generates the embedded F_{q^k}*, and its first k powers are a
    // basis of the subfield over F_q.
    let mut words = Vec::with_capacity(count as usize);
    for t in 0..count {
        let rep = top.pow(g, t);
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|j| tower.expand(top.mul(rep, top.pow(g, j as u64 * count))))
            .collect();
        words.push(Subspace::from_rows(field, &rows)?);
    }
    Code::new(field, n, words)
}

/// A maximum partial k-spread of F_q^n for n ≡ 1 (mod k), k >= 2: stack
/// lifted full-rank-distance layers [0 | I_k | A], each layer consuming k
/// coordinates, and close with a single subspace of the trailing
/// (k+1)-space. Size (q^n - q)/(q^k - 1) - q + 1, minimum distance 2k.
pub fn partial_spread(field: &Field, n: usize, k: usize) -> Result<Code> {
    if k < 2 || n % k != 1 {
        return Err(Error::InvalidParameter(format!(
            "partial spread needs k >= 2 and n ≡ 1 (mod k), got n={n}, k={k}"
        )));
    }
    let mut words = Vec::new();
    let mut offset = 0;
    while n - offset > k + 1 {
        let cols = n - offset - k;
        let layer = mrd_code(field, k, cols, k)?;
        for a in layer.words() {
            let rows: Vec<Vec<u32>> = (0..k)
                .map(|i| {
                    let mut row = vec![0u32; n];
                    row[offset + i] = 1;
                    for c in 0..cols {
                        row[offset + k + c] = a.get(i, c);
                    }
                    row
                })
                .collect();
            words.push(Subspace::from_rows(field, &rows)?);
        }
        offset += k;
    }
    // Any k-subspace of the trailing (k+1)-space extends the packing; take
    // the span of the last k unit vectors.
    let rows: Vec<Vec<u32>> = (0..k)
        .map(|i| {
            let mut row = vec![0u32; n];
            row[offset + 1 + i] = 1;
            row
        })
        .collect();
    words.push(Subspace::from_rows(field, &rows)?);
    Code::new(field, n, words)
}

/// Maps every word to its orthogonal complement. Subspace distances are
/// preserved, so an (n, M, d; k) code becomes an (n, M, d; n-k) code and
/// applying the map twice returns the original code.
pub fn dual_code(code: &Code) -> Result<Code> {
    let words = code.words().iter().map(Subspace::dual).collect();
    Code::new(code.field(), code.ambient(), words)
}

// ---------------------------------------------------------------------------
// A parallelism of the lines of PG(3, 2).
// ---------------------------------------------------------------------------

/// All 35 lines of PG(3, 2) split into seven pairwise-disjoint spreads of
/// five lines each. Exact backtracking that always continues with the
/// first unused line and the lowest uncovered point, so the result is
/// deterministic. Only q = 2 is supported.
pub fn parallelism_g42(q: u32) -> Result<Packing> {
    if q != 2 {
        return Err(Error::Unsupported(
            "line parallelisms are only constructed for q = 2".into(),
        ));
    }
    let field = Field::new(2, 1)?;
    let lines = enumerate_grassmannian(&field, 4, 2, None)?;
    // Bit p of a mask is the point whose coordinates read p in binary.
    let masks: Vec<u16> = lines
        .iter()
        .map(|l| {
            let m = l.matrix();
            let pack =
                |r: usize| (0..4).fold(0u16, |acc, c| (acc << 1) | m.get(r, c) as u16);
            let (r0, r1) = (pack(0), pack(1));
            (1u16 << r0) | (1u16 << r1) | (1u16 << (r0 ^ r1))
        })
        .collect();
    let mut used = vec![false; lines.len()];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    if !next_spread(&masks, &mut used, &mut parts) {
        return Err(Error::Infeasible(
            "backtracking failed to resolve PG(3, 2)".into(),
        ));
    }
    let part_codes: Vec<Code> = parts
        .iter()
        .map(|idx| {
            Code::new(&field, 4, idx.iter().map(|&i| lines[i].clone()).collect())
        })
        .collect::<Result<_>>()?;
    let modes = vec![PartMode::Exact; part_codes.len()];
    let ground = Code::new(&field, 4, lines)?;
    let residual = Code::empty(&field, 4);
    Packing::new(ground, part_codes, modes, 4, residual)
}

const G42_ALL_POINTS: u16 = 0xfffe;

fn next_spread(masks: &[u16], used: &mut [bool], parts: &mut Vec<Vec<usize>>) -> bool {
    if parts.len() == 7 {
        return true;
    }
    let first = match (0..masks.len()).find(|&i| !used[i]) {
        Some(i) => i,
        None => return false,
    };
    used[first] = true;
    let mut spread = vec![first];
    let ok = grow_spread(masks, used, parts, &mut spread, masks[first]);
    if !ok {
        used[first] = false;
    }
    ok
}

fn grow_spread(
    masks: &[u16],
    used: &mut [bool],
    parts: &mut Vec<Vec<usize>>,
    spread: &mut Vec<usize>,
    covered: u16,
) -> bool {
    if covered == G42_ALL_POINTS {
        parts.push(spread.clone());
        if next_spread(masks, used, parts) {
            return true;
        }
        parts.pop();
        return false;
    }
    let point = (covered | 1).trailing_ones();
    for i in 0..masks.len() {
        if used[i] || masks[i] & covered != 0 || masks[i] & (1 << point) == 0 {
            continue;
        }
        used[i] = true;
        spread.push(i);
        if grow_spread(masks, used, parts, spread, covered | masks[i]) {
            return true;
        }
        spread.pop();
        used[i] = false;
    }
    false
}

// ---------------------------------------------------------------------------
// Decomposition of a ground code into distance-d parts.
// ---------------------------------------------------------------------------

/// Cap below which a decomposition round extracts a proved-maximum part
/// instead of a greedy one.
pub const EXACT_PART_LIMIT: usize = 120;

/// Splits a ground code into parts of internal minimum distance d by
/// repeatedly extracting one part from what remains. A round that starts
/// with at most [`EXACT_PART_LIMIT`] words extracts a maximum-cardinality
/// part (lexicographically first among the maxima); larger rounds insert
/// greedily in canonical order. After each round, leftover words closer
/// than `d_ground` to the extracted part are dropped to the residual; a
/// ground code whose own minimum distance is at least `d_ground` loses
/// nothing.
pub fn greedy_decompose(ground: &Code, d: usize, d_ground: usize) -> Result<Packing> {
    if d_ground == 0 || d_ground > d {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= d_ground <= d, got d_ground={d_ground}, d={d}"
        )));
    }
    let mut remaining: Vec<Subspace> = ground.words().to_vec();
    let mut parts = Vec::new();
    let mut modes = Vec::new();
    let mut residual = Vec::new();
    while !remaining.is_empty() {
        let (picked, mode) = if remaining.len() <= EXACT_PART_LIMIT {
            (exact_part(&remaining, d), PartMode::Exact)
        } else {
            (greedy_part(&remaining, d), PartMode::Greedy)
        };
        let part: Vec<Subspace> = picked.iter().map(|&i| remaining[i].clone()).collect();
        let mut next = Vec::new();
        for (i, w) in remaining.iter().enumerate() {
            if picked.binary_search(&i).is_ok() {
                continue;
            }
            let dmin = part.iter().map(|u| subspace_distance(u, w)).min().unwrap();
            if dmin < d_ground {
                residual.push(w.clone());
            } else {
                next.push(w.clone());
            }
        }
        parts.push(Code::new(ground.field(), ground.ambient(), part)?);
        modes.push(mode);
        remaining = next;
    }
    let residual = Code::new(ground.field(), ground.ambient(), residual)?;
    Packing::new(ground.clone(), parts, modes, d, residual)
}

/// First-fit part: scan in canonical order, keep every word at distance
/// at least d from everything already kept. Returns sorted indices.
fn greedy_part(remaining: &[Subspace], d: usize) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    for (i, w) in remaining.iter().enumerate() {
        if picked.iter().all(|&j| subspace_distance(&remaining[j], w) >= d) {
            picked.push(i);
        }
    }
    picked
}

/// Maximum-cardinality part via branch and bound on the conflict graph
/// (edges between pairs closer than d). Returns sorted indices.
fn exact_part(remaining: &[Subspace], d: usize) -> Vec<usize> {
    let n = remaining.len();
    let mut conflict = vec![0u128; n];
    for i in 0..n {
        for j in i + 1..n {
            if subspace_distance(&remaining[i], &remaining[j]) < d {
                conflict[i] |= 1 << j;
                conflict[j] |= 1 << i;
            }
        }
    }
    max_independent_set(n, &conflict)
}

fn low_bits(n: usize) -> u128 {
    if n >= 128 {
        !0
    } else {
        (1u128 << n) - 1
    }
}

/// Size of a maximum independent set within the candidate mask.
fn mis_size(p: u128, have: usize, best: &mut usize, conflict: &[u128]) {
    if have + p.count_ones() as usize <= *best {
        return;
    }
    if p == 0 {
        *best = have;
        return;
    }
    let v = p.trailing_zeros() as usize;
    let bit = 1u128 << v;
    mis_size(p & !conflict[v] & !bit, have + 1, best, conflict);
    mis_size(p & !bit, have, best, conflict);
}

/// The lexicographically first maximum independent set: fix the smallest
/// vertex that still allows a maximum completion, then repeat among the
/// larger vertices.
fn max_independent_set(n: usize, conflict: &[u128]) -> Vec<usize> {
    assert!(n <= 128, "exact part extraction is limited to 128 words");
    let all = low_bits(n);
    let mut target = 0;
    mis_size(all, 0, &mut target, conflict);
    let mut chosen = Vec::with_capacity(target);
    let mut avail = all;
    for v in 0..n {
        let bit = 1u128 << v;
        if avail & bit == 0 {
            continue;
        }
        let rest = avail & !conflict[v] & !low_bits(v + 1);
        let mut reach = 0;
        mis_size(rest, 0, &mut reach, conflict);
        if chosen.len() + 1 + reach >= target {
            chosen.push(v);
            avail = rest;
        } else {
            avail &= !bit;
        }
    }
    debug_assert_eq!(chosen.len(), target);
    chosen
}

// ---------------------------------------------------------------------------
// Exact decomposition with a prescribed number of parts.
// ---------------------------------------------------------------------------

/// Result of [`ilp_decompose`].
pub struct DecomposeOutcome {
    pub packing: Packing,
    /// Number of ground words covered by the selected parts.
    pub objective: u64,
    /// Equal to `objective` when `optimal`; otherwise the best bound that
    /// survived the truncated search.
    pub upper_bound: u64,
    /// False when the node budget ran out before the search closed.
    pub optimal: bool,
    /// Largest part size that was considered.
    pub kappa: usize,
    /// census[i] = number of candidate parts of size i + 1.
    pub census: Vec<u64>,
}

/// Default node budget for the decomposition search.
pub const DECOMPOSE_NODE_BUDGET: u64 = 200_000_000;

/// Hard cap on the number of enumerated candidate parts.
const CANDIDATE_LIMIT: usize = 2_000_000;

/// Selects exactly `l` pairwise-disjoint subcodes of the ground code, each
/// with internal minimum distance at least `d` and at most `kappa` words,
/// maximizing the total number of words covered. Candidates are
/// enumerated as cliques of the compatibility graph; `kappa = None` uses
/// the exact maximum clique size. The search is a branch and bound on the
/// lowest unresolved word and is exact unless the node budget runs out,
/// in which case the best incumbent is returned with `optimal = false`.
pub fn ilp_decompose(
    ground: &Code,
    d: usize,
    l: usize,
    kappa: Option<usize>,
    budget: Option<u64>,
) -> Result<DecomposeOutcome> {
    let n = ground.len();
    if l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= l <= |ground|, got l={l}, |ground|={n}"
        )));
    }
    if n > 128 {
        return Err(Error::Unsupported(format!(
            "exact decomposition is limited to 128 ground words, got {n}"
        )));
    }
    let words = ground.words();
    let mut compat = vec![0u128; n];
    for i in 0..n {
        for j in i + 1..n {
            if subspace_distance(&words[i], &words[j]) >= d {
                compat[i] |= 1 << j;
                compat[j] |= 1 << i;
            }
        }
    }
    let kappa = match kappa {
        Some(0) => {
            return Err(Error::InvalidParameter("kappa must be positive".into()));
        }
        Some(c) => c.min(n),
        None => {
            // Cliques in the compatibility graph are independent sets in
            // its complement.
            let all = low_bits(n);
            let conflict: Vec<u128> =
                (0..n).map(|i| !compat[i] & all & !(1u128 << i)).collect();
            let mut best = 0;
            mis_size(all, 0, &mut best, &conflict);
            best
        }
    };
    let mut cands: Vec<u128> = Vec::new();
    enumerate_cliques(&compat, n, kappa, &mut cands)?;
    let mut census = vec![0u64; kappa];
    for c in &cands {
        census[c.count_ones() as usize - 1] += 1;
    }
    // Big parts first so the incumbent starts strong; mask order breaks
    // ties deterministically.
    cands.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    let by_elem: Vec<Vec<u32>> = (0..n)
        .map(|e| {
            (0..cands.len() as u32)
                .filter(|&ci| cands[ci as usize] & (1u128 << e) != 0)
                .collect()
        })
        .collect();
    let mut search = DecompSearch {
        cands: &cands,
        by_elem: &by_elem,
        all: low_bits(n),
        l,
        kappa,
        budget: budget.unwrap_or(DECOMPOSE_NODE_BUDGET),
        nodes: 0,
        exhausted: false,
        best_obj: 0,
        best_set: Vec::new(),
        open_bound: 0,
        chosen: Vec::new(),
    };
    search.dfs(0, 0, 0);
    if search.best_set.is_empty() {
        return Err(Error::Budget(
            "no feasible decomposition found within the node budget".into(),
        ));
    }
    let optimal = !search.exhausted;
    let mut part_masks: Vec<u128> = search.best_set.iter().map(|&ci| cands[ci as usize]).collect();
    part_masks.sort_by(|a, b| a.count_ones().cmp(&b.count_ones()).then(a.cmp(b)));
    let covered = part_masks.iter().fold(0u128, |acc, m| acc | m);
    let parts: Vec<Code> = part_masks
        .iter()
        .map(|m| {
            let ws: Vec<Subspace> = (0..n)
                .filter(|&i| m & (1u128 << i) != 0)
                .map(|i| words[i].clone())
                .collect();
            Code::new(ground.field(), ground.ambient(), ws)
        })
        .collect::<Result<_>>()?;
    let residual: Vec<Subspace> = (0..n)
        .filter(|&i| covered & (1u128 << i) == 0)
        .map(|i| words[i].clone())
        .collect();
    let residual = Code::new(ground.field(), ground.ambient(), residual)?;
    let mode = if optimal { PartMode::Exact } else { PartMode::Greedy };
    let packing = Packing::new(ground.clone(), parts, vec![mode; l], d, residual)?;
    Ok(DecomposeOutcome {
        packing,
        objective: search.best_obj,
        upper_bound: if optimal {
            search.best_obj
        } else {
            search.best_obj.max(search.open_bound)
        },
        optimal,
        kappa,
        census,
    })
}

/// Every clique of size 1..=kappa, each exactly once (members ascending).
fn enumerate_cliques(
    compat: &[u128],
    n: usize,
    kappa: usize,
    out: &mut Vec<u128>,
) -> Result<()> {
    fn rec(
        mask: u128,
        cand: u128,
        size: usize,
        kappa: usize,
        compat: &[u128],
        out: &mut Vec<u128>,
    ) -> Result<()> {
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let bit = 1u128 << v;
            rest &= !bit;
            let next = mask | bit;
            out.push(next);
            if out.len() > CANDIDATE_LIMIT {
                return Err(Error::Budget(format!(
                    "more than {CANDIDATE_LIMIT} candidate parts"
                )));
            }
            if size + 1 < kappa {
                rec(next, rest & compat[v], size + 1, kappa, compat, out)?;
            }
        }
        Ok(())
    }
    rec(0, low_bits(n), 0, kappa, compat, out)
}

struct DecompSearch<'a> {
    cands: &'a [u128],
    by_elem: &'a [Vec<u32>],
    all: u128,
    l: usize,
    kappa: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best_obj: u64,
    best_set: Vec<u32>,
    open_bound: u64,
    chosen: Vec<u32>,
}

impl DecompSearch<'_> {
    /// Branch on the lowest unresolved word: either some candidate part
    /// covers it, or it is banned from every part. Incumbents update on
    /// strict improvement only, so the result is order-deterministic.
    fn dfs(&mut self, covered: u128, banned: u128, count: usize) {
        if count == self.l {
            let obj = covered.count_ones() as u64;
            if obj > self.best_obj {
                self.best_obj = obj;
                self.best_set = self.chosen.clone();
            }
            return;
        }
        let unresolved = self.all & !(covered | banned);
        let need = self.l - count;
        let avail = unresolved.count_ones() as usize;
        if avail < need {
            return;
        }
        let bound = covered.count_ones() as u64 + avail.min(need * self.kappa) as u64;
        if bound <= self.best_obj {
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            self.open_bound = self.open_bound.max(bound);
            return;
        }
        self.nodes += 1;
        let e = unresolved.trailing_zeros() as usize;
        for &ci in &self.by_elem[e] {
            if self.cands[ci as usize] & (covered | banned) != 0 {
                continue;
            }
            self.chosen.push(ci);
            self.dfs(covered | self.cands[ci as usize], banned, count + 1);
            self.chosen.pop();
        }
        self.dfs(covered, banned | (1u128 << e), count);
    }
}

// ---------------------------------------------------------------------------
// The pairing-size program.
// ---------------------------------------------------------------------------

/// Choose family sizes a_i <= alpha_bar and b_i <= beta_bar for
/// i = 1..=l with totals sum(a) <= alpha and sum(b) <= beta, maximizing
/// sum(a_i * b_i). Requires alpha >= l and beta >= l so that every index
/// can be used at all.
#[derive(Clone, Copy, Debug)]
pub struct LambdaProgram {
    pub l: u64,
    pub alpha: u64,
    pub beta: u64,
    pub alpha_bar: u64,
    pub beta_bar: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSolution {
    pub a: Vec<u64>,
    pub b: Vec<u64>,
    pub objective: u64,
}

/// Closed-form optimum of the pairing program. Each side independently
/// saturates at its per-index cap when that fits under the total, and
/// otherwise fills a staircase that front-loads the smallest indices;
/// pairing the two staircases index by index is optimal by the
/// rearrangement inequality. The tests pin this against brute force.
pub fn lambda_ilp_solve(prog: &LambdaProgram) -> Result<LambdaSolution> {
    let LambdaProgram { l, alpha, beta, alpha_bar, beta_bar } = *prog;
    if l == 0 || alpha_bar == 0 || beta_bar == 0 {
        return Err(Error::InvalidParameter(
            "pairing program needs l >= 1 and positive per-index caps".into(),
        ));
    }
    if alpha < l || beta < l {
        return Err(Error::Infeasible(format!(
            "pairing program needs alpha >= l and beta >= l, got alpha={alpha}, beta={beta}, l={l}"
        )));
    }
    let a = side_profile(l, alpha, alpha_bar);
    let b = side_profile(l, beta, beta_bar);
    let objective: u128 = a.iter().zip(&b).map(|(&x, &y)| x as u128 * y as u128).sum();
    let objective = u64::try_from(objective)
        .map_err(|_| Error::Unsupported("pairing objective overflows u64".into()))?;
    Ok(LambdaSolution { a, b, objective })
}

/// One side of the optimum: all entries at the cap when cap * l fits the
/// total, else entry i takes 1 plus whatever of the surplus total - l is
/// left after the first i - 1 entries took cap - 1 each.
fn side_profile(l: u64, total: u64, bar: u64) -> Vec<u64> {
    if (bar as u128) * (l as u128) <= total as u128 {
        return vec![bar; l as usize];
    }
    let surplus = total - l;
    (1..=l)
        .map(|i| 1 + (bar - 1).min(surplus.saturating_sub((i - 1).saturating_mul(bar - 1))))
        .collect()
}

// ---------------------------------------------------------------------------
// Best-known sizes A_q(n, d; k).
// ---------------------------------------------------------------------------

/// Sizes of optimal constant-dimension codes, A_q(n, d; k). Closed-form
/// cases are computed on the fly; everything else must come from the
/// bundled or user-supplied table. Unknown instances surface as
/// [`Error::OracleGap`], never as a silent default.
pub struct AqOracle {
    table: HashMap<(u32, usize, usize, usize), (u64, String)>,
}

impl AqOracle {
    pub fn empty() -> AqOracle {
        AqOracle { table: HashMap::new() }
    }

    /// The oracle backed by the table shipped with the crate.
    pub fn builtin() -> AqOracle {
        AqOracle::parse(include_str!("../data/aq_values.txt"))
            .expect("bundled table parses; covered by tests")
    }

    /// Parses a table: one `q n d k value source...` entry per line, with
    /// blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Result<AqOracle> {
        let mut oracle = AqOracle::empty();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let mut next = |what: &str| {
                it.next().ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    msg: format!("missing {what}"),
                })
            };
            let parse_num = |what: &str, tok: &str| {
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad {what}: {tok}"),
                })
            };
            let q = parse_num("q", next("q")?)? as u32;
            let n = parse_num("n", next("n")?)? as usize;
            let d = parse_num("d", next("d")?)? as usize;
            let k = parse_num("k", next("k")?)? as usize;
            let value = parse_num("value", next("value")?)?;
            let source: String = it.collect::<Vec<_>>().join(" ");
            if source.is_empty() {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: "every table entry needs a source note".into(),
                });
            }
            oracle.insert(q, n, d, k, value, &source);
        }
        Ok(oracle)
    }

    pub fn insert(&mut self, q: u32, n: usize, d: usize, k: usize, value: u64, source: &str) {
        self.table.insert((q, n, d, k), (value, source.to_string()));
    }

    /// Provenance note of a table entry, if the instance is tabled.
    pub fn source(&self, q: u32, n: usize, d: usize, k: usize) -> Option<&str> {
        self.table.get(&(q, n, d, k)).map(|(_, s)| s.as_str())
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// A_q(n, d; k). Distances are normalized up to the next even value
    /// (constant-dimension distances are even) and k is dualized to
    /// min(k, n - k). In order: trivial dimensions give 1, d <= 2 gives
    /// the full Grassmannian, d beyond 2k gives 1, d = 2k gives the
    /// spread or maximum-partial-spread count, and anything else needs a
    /// table entry.
    pub fn value(&self, q: u32, n: usize, d: usize, k: usize) -> Result<u64> {
        if q < 2 || n == 0 || d == 0 {
            return Err(Error::InvalidParameter(format!(
                "bad oracle instance q={q}, n={n}, d={d}, k={k}"
            )));
        }
        if k > n {
            return Err(Error::InvalidParameter(format!(
                "oracle instance needs k <= n, got k={k}, n={n}"
            )));
        }
        let d = if d % 2 == 1 { d + 1 } else { d };
        if k == 0 || k == n {
            return Ok(1);
        }
        let kk = k.min(n - k);
        if d > 2 * kk {
            return Ok(1);
        }
        if d <= 2 {
            return gaussian_binomial(q, n, kk)
                .to_u64()
                .ok_or_else(|| Error::Unsupported("Grassmannian count overflows u64".into()));
        }
        if d == 2 * kk {
            if n % kk == 0 {
                let size = spread_size(q, n, kk)
                    .ok_or_else(|| Error::Unsupported("spread size overflows".into()))?;
                return u64::try_from(size)
                    .map_err(|_| Error::Unsupported("spread size overflows u64".into()));
            }
            if n % kk == 1 && kk >= 2 {
                // Maximum partial spreads for remainder 1 are settled.
                let qq = q as u128;
                let qn = qq
                    .checked_pow(n as u32)
                    .ok_or_else(|| Error::Unsupported("field size overflows".into()))?;
                let size = (qn - qq) / (qq.pow(kk as u32) - 1) - qq + 1;
                return u64::try_from(size)
                    .map_err(|_| Error::Unsupported("partial spread size overflows u64".into()));
            }
        }
        if let Some((v, _)) = self.table.get(&(q, n, d, k)).or_else(|| {
            self.table.get(&(q, n, d, n - k))
        }) {
            return Ok(*v);
        }
        Err(Error::OracleGap { q, n, d, k })
    }
}

// ---------------------------------------------------------------------------
// Pairing-size bounds for coset constructions.
// ---------------------------------------------------------------------------

/// Iteration cap for the split scan in [`lambda_upper_bound`].
const SPLIT_SCAN_LIMIT: u64 = 1_000_000;

/// Upper bound on the pairing size Lambda = sum |A_i| |B_i| of any valid
/// paired-family system for the given parameters: the grid bound (each
/// side's Grassmannian count times the other side's distance-d optimum)
/// intersected with the maximum of the pairing program over every even
/// split distance d' and every feasible family count l.
pub fn lambda_upper_bound(
    q: u32,
    n: usize,
    k: usize,
    n_prime: usize,
    k_prime: usize,
    d: usize,
    oracle: &AqOracle,
) -> Result<u64> {
    if !(1 <= k_prime && k_prime < k && 2 * k <= n && k_prime <= n_prime && n_prime < n) {
        return Err(Error::InvalidParameter(format!(
            "bad pairing parameters n={n}, k={k}, n'={n_prime}, k'={k_prime}"
        )));
    }
    if d < 2 || d % 2 != 0 {
        return Err(Error::InvalidParameter(format!("need even d >= 2, got {d}")));
    }
    let n2 = n - n_prime;
    let k2 = k - k_prime;
    if k2 > n2 {
        return Err(Error::InvalidParameter(format!(
            "need k - k' <= n - n', got {k2} > {n2}"
        )));
    }
    let alpha_bar = oracle.value(q, n_prime, d, k_prime)?;
    let beta_bar = oracle.value(q, n2, d, k2)?;
    let grid_a = gaussian_binomial(q, n_prime, k_prime) * beta_bar;
    let grid_b = gaussian_binomial(q, n2, k2) * alpha_bar;
    let mut best = grid_a
        .min(grid_b)
        .to_u64()
        .ok_or_else(|| Error::Unsupported("grid bound overflows u64".into()))?;
    let mut split_best: Option<u64> = None;
    let mut scanned: u64 = 0;
    let mut d_prime = 2;
    while d_prime + 2 <= d {
        let alpha = oracle.value(q, n_prime, d_prime, k_prime)?;
        let beta = oracle.value(q, n2, d - d_prime, k2)?;
        let l_max = alpha.min(beta);
        scanned += l_max;
        if scanned > SPLIT_SCAN_LIMIT {
            return Err(Error::Unsupported(format!(
                "split scan exceeds {SPLIT_SCAN_LIMIT} pairing programs"
            )));
        }
        for l in 1..=l_max {
            let sol = lambda_ilp_solve(&LambdaProgram { l, alpha, beta, alpha_bar, beta_bar })?;
            split_best = Some(split_best.map_or(sol.objective, |b: u64| b.max(sol.objective)));
        }
        d_prime += 2;
    }
    if let Some(s) = split_best {
        best = best.min(s);
    }
    Ok(best)
}

/// A pairing realized by lifted cosets of nested maximum-rank-distance
/// codes, with the blueprint that materializes it.
pub struct MrdLowerBound {
    pub l: u64,
    pub lambda: u64,
    pub blueprint: CosetBlueprint,
}

/// Builds paired families from MRD codes: the A side is the
/// distance-d' MRD code on the leading block split into cosets of its
/// nested distance-d subcode, the B side the same with distance d - d'
/// on the trailing block, and l is the smaller number of cosets. Every
/// family has internal distance d, distinct cosets keep the outer
/// distances, and the offset set is the default maximum one, so the
/// blueprint assembles into a code of distance d and size |F| * lambda.
pub fn lambda_lower_bound_mrd(
    field: &Field,
    n: usize,
    k: usize,
    n_prime: usize,
    k_prime: usize,
    d: usize,
    d_prime: usize,
) -> Result<MrdLowerBound> {
    if d % 2 != 0 || d_prime % 2 != 0 || d_prime < 2 || d_prime + 2 > d {
        return Err(Error::InvalidParameter(format!(
            "need even split 2 <= d' <= d - 2, got d={d}, d'={d_prime}"
        )));
    }
    if k_prime >= k || k_prime > n_prime || n_prime >= n || k - k_prime > n - n_prime {
        return Err(Error::InvalidParameter(format!(
            "bad pairing parameters n={n}, k={k}, n'={n_prime}, k'={k_prime}"
        )));
    }
    let mut a_families =
        mrd_coset_families(field, k_prime, n_prime - k_prime, d_prime, d)?;
    let mut b_families = mrd_coset_families(
        field,
        k - k_prime,
        (n - n_prime) - (k - k_prime),
        d - d_prime,
        d,
    )?;
    let l = a_families.len().min(b_families.len());
    a_families.truncate(l);
    b_families.truncate(l);
    let lambda: u64 = a_families
        .iter()
        .zip(&b_families)
        .map(|(a, b)| a.len() as u64 * b.len() as u64)
        .sum();
    let f_set = default_offset_set(field, k_prime, (n - n_prime) - (k - k_prime), d)?;
    let blueprint = CosetBlueprint::new(
        field, n, k, n_prime, k_prime, a_families, b_families, f_set, d,
    )?;
    Ok(MrdLowerBound { l: l as u64, lambda, blueprint })
}

/// The cosets of the nested rank-distance-(d/2) subcode inside the
/// rank-distance-(d_outer/2) MRD code of the given shape, each lifted to
/// a family of subspaces of F_q^(rows + cols). When the subcode is the
/// zero singleton the families are the individual words; when the outer
/// code itself is a singleton there is one one-word family.
fn mrd_coset_families(
    field: &Field,
    rows: usize,
    cols: usize,
    d_outer: usize,
    d: usize,
) -> Result<Vec<Vec<Subspace>>> {
    let short = rows.min(cols);
    let dr_outer = d_outer / 2;
    let dr_inner = d / 2;
    if dr_outer > short {
        let code = mrd_code(field, rows, cols, dr_outer)?;
        return Ok(vec![lift_code(&code)?.words().to_vec()]);
    }
    let gab = GabidulinCode::new(field, rows, cols, dr_outer)?;
    if dr_inner > short {
        return Ok(gab
            .code()
            .words()
            .map(|w| vec![lift_matrix(&w)])
            .collect());
    }
    let sub = gab.subcode(dr_inner)?;
    let offsets = gab.coset_offsets(dr_inner)?;
    offsets
        .iter()
        .map(|off| Ok(lift_code(&sub.translate(off))?.words().to_vec()))
        .collect()
}
