//! Arithmetic in the finite fields F_{p^e} with q = p^e <= 2^16.
//!
//! Extension fields are defined by their Conway polynomial, computed on
//! first use (minimal monic primitive polynomial, in the standard word
//! ordering, compatible with the Conway polynomials of all proper
//! subfields) and cached process-wide. Conway compatibility is what makes
//! subfield embeddings across a [`FieldTower`] canonical, which the
//! rank-metric machinery depends on.
//!
//! Elements travel as `u32` codes: the element with coefficient vector
//! (c_0, ..., c_{e-1}) over F_p in the polynomial basis 1, x, ..., x^{e-1}
//! has code sum(c_i * p^i). This code is also the on-disk serialization.
//! Multiplication is table-driven through discrete logs; the generator of
//! the exp table is x itself, which is primitive because the modulus is a
//! Conway polynomial.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use once_cell::sync::Lazy;

use crate::{Error, Result};

/// Largest supported field order q = p^e.
pub const MAX_ORDER: u32 = 1 << 16;

// ---------------------------------------------------------------------------
// Polynomial helpers over F_p. Little-endian coefficient vectors, trailing
// zeros trimmed; the zero polynomial is the empty vector.
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Reduce `a` modulo the monic polynomial `f`.
fn poly_reduce(a: &mut Vec<u32>, f: &[u32], p: u32) {
    let d = f.len() - 1;
    while a.len() > d {
        let top = a.len() - 1;
        let c = a[top] as u64;
        if c != 0 {
            for i in 0..d {
                let idx = top - d + i;
                let sub = (c * f[i] as u64) % p as u64;
                a[idx] = ((a[idx] as u64 + p as u64 - sub) % p as u64) as u32;
            }
        }
        a.pop();
    }
    poly_trim(a);
}

fn poly_mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut acc = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            acc[i + j] += ai as u64 * bj as u64;
        }
    }
    let mut out: Vec<u32> = acc.iter().map(|&v| (v % p as u64) as u32).collect();
    poly_reduce(&mut out, f, p);
    out
}

fn poly_pow_mod(base: &[u32], mut n: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = base.to_vec();
    poly_reduce(&mut b, f, p);
    while n > 0 {
        if n & 1 == 1 {
            result = poly_mul_mod(&result, &b, f, p);
        }
        b = poly_mul_mod(&b, &b, f, p);
        n >>= 1;
    }
    result
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---------------------------------------------------------------------------
// Conway polynomials.
// ---------------------------------------------------------------------------

static CONWAY_CACHE: Lazy<Mutex<HashMap<(u32, u32), Arc<Vec<u32>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

/// The Conway polynomial for F_{p^e}, as a little-endian coefficient vector
/// of length e + 1 (monic). Computed on first use and cached.
///
/// # Panics
///
/// Panics if `p` is not prime or `p^e` exceeds [`MAX_ORDER`]; the public
/// entry point is [`Field::new`], which validates first.
pub fn conway_polynomial(p: u32, e: u32) -> Arc<Vec<u32>> {
    assert!(is_prime(p) && e >= 1);
    assert!((p as u64).pow(e) <= MAX_ORDER as u64);
    if let Some(hit) = CONWAY_CACHE.lock().unwrap().get(&(p, e)) {
        return hit.clone();
    }
    let computed = Arc::new(compute_conway(p, e));
    CONWAY_CACHE
        .lock()
        .unwrap()
        .entry((p, e))
        .or_insert(computed)
        .clone()
}

/// True iff x has multiplicative order exactly `r` in F_p[x]/(f); for
/// r = p^deg(f) - 1 this is equivalent to f being primitive (and hence
/// irreducible).
fn x_has_order(f: &[u32], p: u32, r: u64, factors: &[u64]) -> bool {
    let x = [0u32, 1];
    if poly_pow_mod(&x, r, f, p) != vec![1] {
        return false;
    }
    for &ell in factors {
        if poly_pow_mod(&x, r / ell, f, p) == vec![1] {
            return false;
        }
    }
    true
}

/// Norm compatibility: g(x^stride) = 0 mod f for each subfield Conway
/// polynomial g with its stride (p^e - 1)/(p^m - 1).
fn subfield_compatible(f: &[u32], p: u32, subs: &[(u64, Arc<Vec<u32>>)]) -> bool {
    let x = [0u32, 1];
    for (stride, g) in subs {
        let h = poly_pow_mod(&x, *stride, f, p);
        let mut acc: Vec<u32> = Vec::new();
        for &gc in g.iter().rev() {
            acc = poly_mul_mod(&acc, &h, f, p);
            if gc != 0 {
                if acc.is_empty() {
                    acc.push(gc);
                } else {
                    acc[0] = (acc[0] + gc) % p;
                    poly_trim(&mut acc);
                }
            }
        }
        if !acc.is_empty() {
            return false;
        }
    }
    true
}

fn compute_conway(p: u32, e: u32) -> Vec<u32> {
    let q = (p as u64).pow(e);
    let r = q - 1;
    let factors = distinct_prime_factors(r);
    let subs: Vec<(u64, Arc<Vec<u32>>)> = (1..e)
        .filter(|m| e % m == 0)
        .map(|m| ((q - 1) / ((p as u64).pow(m) - 1), conway_polynomial(p, m)))
        .collect();
    let e = e as usize;
    // Candidates in the Conway word order: the word (w_{e-1}, ..., w_0) with
    // w_i = (-1)^{e-i} c_i runs through base-p counters in increasing order,
    // w_{e-1} most significant.
    for counter in 0..q {
        let mut coeffs = vec![0u32; e + 1];
        coeffs[e] = 1;
        let mut c = counter;
        for (i, slot) in coeffs.iter_mut().enumerate().take(e) {
            let w = (c % p as u64) as u32;
            c /= p as u64;
            *slot = if (e - i) % 2 == 1 { (p - w) % p } else { w };
        }
        if coeffs[0] == 0 {
            continue;
        }
        if !x_has_order(&coeffs, p, r, &factors) {
            continue;
        }
        if !subfield_compatible(&coeffs, p, &subs) {
            continue;
        }
        return coeffs;
    }
    unreachable!("a Conway polynomial exists for every prime power");
}

// ---------------------------------------------------------------------------
// Field.
// ---------------------------------------------------------------------------

struct FieldRepr {
    p: u32,
    e: u32,
    q: u32,
    modulus: Arc<Vec<u32>>,
    /// exp[i] = code of x^i for i in 0..q-1, doubled so products of two
    /// discrete logs index without a modulo.
    exp: Vec<u32>,
    /// log[c] for c in 1..q; log[0] is a sentinel.
    log: Vec<u32>,
}

/// A finite field F_{p^e}. Cheap to clone (shared representation); two
/// `Field` values with equal p and e are interchangeable.
#[derive(Clone)]
pub struct Field {
    repr: Arc<FieldRepr>,
}

static FIELD_CACHE: Lazy<Mutex<HashMap<(u32, u32), Arc<FieldRepr>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn encode_poly(c: &[u32], p: u32) -> u32 {
    let mut out = 0u32;
    for &ci in c.iter().rev() {
        out = out * p + ci;
    }
    out
}

impl Field {
    /// The field with `q = p^e` elements. `p` must be prime and q at most
    /// [`MAX_ORDER`].
    pub fn new(p: u32, e: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("extension degree 0".into()));
        }
        let q = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(Error::Unsupported(format!(
                "field order {p}^{e} exceeds the supported bound 2^16"
            )));
        }
        if let Some(hit) = FIELD_CACHE.lock().unwrap().get(&(p, e)) {
            return Ok(Field { repr: hit.clone() });
        }
        let q = q as u32;
        let modulus = conway_polynomial(p, e);
        let qq = q as usize;
        let mut exp = vec![0u32; 2 * (qq - 1)];
        let mut log = vec![u32::MAX; qq];
        let mut cur = vec![1u32];
        let x = [0u32, 1];
        for i in 0..qq - 1 {
            let code = encode_poly(&cur, p);
            exp[i] = code;
            debug_assert_eq!(log[code as usize], u32::MAX, "generator not primitive");
            log[code as usize] = i as u32;
            cur = poly_mul_mod(&cur, &x, &modulus, p);
        }
        debug_assert_eq!(cur, vec![1u32]);
        for i in 0..qq - 1 {
            exp[qq - 1 + i] = exp[i];
        }
        let repr = Arc::new(FieldRepr { p, e, q, modulus, exp, log });
        let hit = FIELD_CACHE
            .lock()
            .unwrap()
            .entry((p, e))
            .or_insert(repr)
            .clone();
        Ok(Field { repr: hit })
    }

    /// The prime field F_p.
    pub fn prime(p: u32) -> Result<Field> {
        Field::new(p, 1)
    }

    /// The field of order `q`, factoring q = p^e; errors unless q is a
    /// prime power within [`MAX_ORDER`].
    pub fn of_order(q: u32) -> Result<Field> {
        if q < 2 {
            return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
        }
        let p = (2..=q).find(|d| q % d == 0).expect("q >= 2 has a least divisor");
        let mut rest = q;
        let mut e = 0u32;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
        }
        Field::new(p, e)
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.repr.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.repr.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.repr.q
    }

    /// Defining (Conway) polynomial, little-endian, length e + 1.
    pub fn modulus(&self) -> &[u32] {
        &self.repr.modulus
    }

    /// Code of the canonical multiplicative generator (x for e > 1, the
    /// least primitive root for e = 1).
    #[inline]
    pub fn generator(&self) -> u32 {
        self.repr.exp[1 % (self.repr.q as usize - 1).max(1)]
    }

    /// All element codes, 0..q.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.repr.q
    }

    #[inline]
    fn check(&self, a: u32) {
        debug_assert!(a < self.repr.q, "element code {a} out of range");
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.check(a);
        self.check(b);
        let r = &*self.repr;
        if r.p == 2 {
            return a ^ b;
        }
        if r.e == 1 {
            return (a + b) % r.p;
        }
        let p = r.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            out += (a % p + b % p) % p * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.check(a);
        let r = &*self.repr;
        if r.p == 2 {
            return a;
        }
        if r.e == 1 {
            return (r.p - a) % r.p;
        }
        let p = r.p;
        let mut a = a;
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 {
            out += (p - a % p) % p * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.repr.p == 2 {
            self.check(a);
            self.check(b);
            return a ^ b;
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.check(a);
        self.check(b);
        if a == 0 || b == 0 {
            return 0;
        }
        let r = &*self.repr;
        r.exp[(r.log[a as usize] + r.log[b as usize]) as usize]
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics when `a == 0`.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.check(a);
        assert!(a != 0, "inverse of zero");
        let r = &*self.repr;
        r.exp[(r.q - 1 - r.log[a as usize]) as usize]
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, n: u64) -> u32 {
        self.check(a);
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let r = &*self.repr;
        let m = r.q as u64 - 1;
        let l = (r.log[a as usize] as u64 * (n % m)) % m;
        r.exp[l as usize]
    }

    /// The prime-power Frobenius a -> a^(p^t).
    pub fn frobenius(&self, a: u32, t: u32) -> u32 {
        let m = self.repr.q as u64 - 1;
        if m == 1 {
            return a;
        }
        let mut n = 1u64;
        for _ in 0..t {
            n = n * self.repr.p as u64 % m;
        }
        self.pow(a, n)
    }

    /// Coefficient vector (c_0, ..., c_{e-1}) of an element code.
    pub fn coeffs(&self, a: u32) -> Vec<u32> {
        self.check(a);
        let p = self.repr.p;
        let mut a = a;
        (0..self.repr.e)
            .map(|_| {
                let c = a % p;
                a /= p;
                c
            })
            .collect()
    }

    /// Element code from a coefficient vector over F_p (length at most e).
    pub fn from_coeffs(&self, c: &[u32]) -> Result<u32> {
        if c.len() > self.repr.e as usize {
            return Err(Error::InvalidParameter(format!(
                "{} coefficients for extension degree {}",
                c.len(),
                self.repr.e
            )));
        }
        if let Some(&bad) = c.iter().find(|&&ci| ci >= self.repr.p) {
            return Err(Error::InvalidParameter(format!(
                "coefficient {bad} not reduced mod {}",
                self.repr.p
            )));
        }
        Ok(encode_poly(c, self.repr.p))
    }

    /// Validated element wrapper.
    pub fn element(&self, code: u32) -> Result<FieldElement> {
        if code >= self.repr.q {
            return Err(Error::InvalidParameter(format!(
                "element code {code} out of range for {self}"
            )));
        }
        Ok(FieldElement { field: self.clone(), code })
    }

    pub fn same_field(&self, other: &Field) -> bool {
        self.repr.p == other.repr.p && self.repr.e == other.repr.e
    }

    pub(crate) fn expect_same(&self, other: &Field) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{self} vs {other}")))
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.repr.p, self.repr.e).hash(state);
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.repr.e == 1 {
            write!(f, "GF({})", self.repr.p)
        } else {
            write!(f, "GF({}^{})", self.repr.p, self.repr.e)
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// ---------------------------------------------------------------------------
// FieldElement: a code together with its owning field.
// ---------------------------------------------------------------------------

/// An element of a [`Field`]; arithmetic panics when the operands belong to
/// different fields. The integer serialization of an element is its `code`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    code: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn code(&self) -> u32 {
        self.code
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.code)
    }

    pub fn inverse(&self) -> Result<FieldElement> {
        if self.code == 0 {
            return Err(Error::InvalidParameter("inverse of zero".into()));
        }
        Ok(FieldElement { field: self.field.clone(), code: self.field.inv(self.code) })
    }

    pub fn pow(&self, n: u64) -> FieldElement {
        FieldElement { field: self.field.clone(), code: self.field.pow(self.code, n) }
    }

    /// a^(p^t), the prime Frobenius iterated t times.
    pub fn frobenius(&self, t: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), code: self.field.frobenius(self.code, t) }
    }

    fn expect_same(&self, other: &FieldElement) {
        assert!(
            self.field.same_field(&other.field),
            "elements of {} and {} mixed",
            self.field,
            other.field
        );
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.expect_same(&rhs);
        FieldElement { code: self.field.add(self.code, rhs.code), field: self.field }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.expect_same(&rhs);
        FieldElement { code: self.field.sub(self.code, rhs.code), field: self.field }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.expect_same(&rhs);
        FieldElement { code: self.field.mul(self.code, rhs.code), field: self.field }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { code: self.field.neg(self.code), field: self.field }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.code, self.field)
    }
}

// ---------------------------------------------------------------------------
// FieldTower: F_{q^m} over F_q with the canonical Conway embedding.
// ---------------------------------------------------------------------------

/// The extension F_{q^m} / F_q with q = p^e, using the polynomial basis
/// 1, g, ..., g^{m-1} of the top field over the base, where g is the top
/// field's canonical generator.
pub struct FieldTower {
    base: Field,
    top: Field,
    m: u32,
    stride: u32,
    /// Inverse of the F_p change-of-basis matrix from
    /// { embed(x^j) * g^i } to the p-digit basis; row-major, E x E.
    expand_inv: Vec<u32>,
}

impl FieldTower {
    pub fn new(base: &Field, m: u32) -> Result<FieldTower> {
        if m == 0 {
            return Err(Error::InvalidParameter("tower of degree 0".into()));
        }
        let p = base.p();
        let e = base.e();
        let top = Field::new(p, e * m)?;
        let q = base.q() as u64;
        let big_q = top.q() as u64;
        let stride = ((big_q - 1) / (q - 1)) as u32;
        let dim = (e * m) as usize;

        // Column (i*e + j): p-digits of embed(x^j) * g^i.
        let mut cols: Vec<Vec<u32>> = Vec::with_capacity(dim);
        for i in 0..m {
            let gi = top.pow(top.generator(), i as u64);
            for j in 0..e {
                let emb = if q == 2 {
                    1 // F_2 has only the element 1 to embed beyond 0
                } else {
                    // x^j in the base has code p^j and discrete log j
                    top.pow(top.generator(), (j * stride) as u64)
                };
                let v = top.mul(emb, gi);
                let mut digits = top.coeffs(v);
                digits.resize(dim, 0);
                cols.push(digits);
            }
        }
        let mut mat = vec![0u32; dim * dim];
        for (c, col) in cols.iter().enumerate() {
            for (r, &d) in col.iter().enumerate() {
                mat[r * dim + c] = d;
            }
        }
        let expand_inv = invert_fp(&mat, dim, p).ok_or_else(|| {
            Error::InvalidParameter("tower basis is singular (internal)".into())
        })?;
        Ok(FieldTower { base: base.clone(), top, m, stride, expand_inv })
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// The canonical embedding F_q -> F_{q^m}.
    pub fn embed(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        if self.m == 1 {
            return a;
        }
        let l = self.base.repr.log[a as usize] as u64;
        self.top.repr.exp[(l * self.stride as u64) as usize]
    }

    /// Frobenius with respect to the base: a -> a^(q^i).
    pub fn frobenius(&self, a: u32, i: u32) -> u32 {
        self.top.frobenius(a, i * self.base.e())
    }

    /// g^j for the top generator g; for j < m these form the evaluation and
    /// expansion basis of the tower.
    pub fn power_point(&self, j: u32) -> u32 {
        self.top.pow(self.top.generator(), j as u64)
    }

    /// Coordinates (c_0, ..., c_{m-1}) over F_q of a top element in the
    /// basis 1, g, ..., g^{m-1}.
    pub fn expand(&self, alpha: u32) -> Vec<u32> {
        let p = self.base.p();
        let e = self.base.e() as usize;
        let dim = e * self.m as usize;
        let mut digits = self.top.coeffs(alpha);
        digits.resize(dim, 0);
        let mut lambda = vec![0u32; dim];
        for (r, slot) in lambda.iter_mut().enumerate() {
            let mut acc = 0u64;
            for (c, &d) in digits.iter().enumerate() {
                acc += self.expand_inv[r * dim + c] as u64 * d as u64;
            }
            *slot = (acc % p as u64) as u32;
        }
        (0..self.m as usize)
            .map(|i| {
                let mut code = 0u32;
                for j in (0..e).rev() {
                    code = code * p + lambda[i * e + j];
                }
                code
            })
            .collect()
    }

    /// Inverse of [`FieldTower::expand`].
    pub fn combine(&self, coeffs: &[u32]) -> u32 {
        assert!(coeffs.len() <= self.m as usize);
        let mut acc = 0u32;
        for (i, &c) in coeffs.iter().enumerate() {
            let term = self.top.mul(self.embed(c), self.power_point(i as u32));
            acc = self.top.add(acc, term);
        }
        acc
    }
}

/// Invert a dim x dim matrix over F_p (row-major); None when singular.
fn invert_fp(mat: &[u32], dim: usize, p: u32) -> Option<Vec<u32>> {
    let mut a = mat.to_vec();
    let mut inv = vec![0u32; dim * dim];
    for i in 0..dim {
        inv[i * dim + i] = 1;
    }
    let pinv = |x: u32| -> u32 {
        // p <= 2^16 so a scan is fine here; this runs once per tower.
        (1..p).find(|&y| x * y % p == 1).unwrap()
    };
    for col in 0..dim {
        let piv = (col..dim).find(|&r| a[r * dim + col] != 0)?;
        if piv != col {
            for j in 0..dim {
                a.swap(col * dim + j, piv * dim + j);
                inv.swap(col * dim + j, piv * dim + j);
            }
        }
        let s = pinv(a[col * dim + col]);
        if s != 1 {
            for j in 0..dim {
                a[col * dim + j] = a[col * dim + j] * s % p;
                inv[col * dim + j] = inv[col * dim + j] * s % p;
            }
        }
        for r in 0..dim {
            if r == col || a[r * dim + col] == 0 {
                continue;
            }
            let f = a[r * dim + col];
            for j in 0..dim {
                a[r * dim + j] = (a[r * dim + j] + (p - f) * a[col * dim + j] % p) % p;
                inv[r * dim + j] = (inv[r * dim + j] + (p - f) * inv[col * dim + j] % p) % p;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conway_known_values() {
        // Hand-checked small cases plus two standard table entries.
        assert_eq!(*conway_polynomial(2, 1), vec![1, 1]);
        assert_eq!(*conway_polynomial(2, 2), vec![1, 1, 1]);
        assert_eq!(*conway_polynomial(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(*conway_polynomial(2, 4), vec![1, 1, 0, 0, 1]);
        assert_eq!(*conway_polynomial(2, 6), vec![1, 1, 0, 1, 1, 0, 1]);
        assert_eq!(*conway_polynomial(2, 8), vec![1, 0, 1, 1, 1, 0, 0, 0, 1]);
        assert_eq!(*conway_polynomial(3, 1), vec![1, 1]);
        assert_eq!(*conway_polynomial(3, 2), vec![2, 2, 1]);
        assert_eq!(*conway_polynomial(5, 1), vec![3, 1]);
        assert_eq!(*conway_polynomial(7, 1), vec![4, 1]);
    }

    #[test]
    fn of_order_factors_prime_powers() {
        for (q, p, e) in [(2, 2, 1), (3, 3, 1), (4, 2, 2), (8, 2, 3), (9, 3, 2), (25, 5, 2)] {
            let f = Field::of_order(q).unwrap();
            assert_eq!((f.p(), f.e(), f.q()), (p, e, q));
        }
        for q in [0, 1, 6, 12, 100] {
            assert!(Field::of_order(q).is_err(), "q = {q} accepted");
        }
    }

    #[test]
    fn generator_has_full_order() {
        for (p, e) in [(2, 5), (2, 7), (2, 10), (3, 3), (3, 5), (5, 2), (7, 2), (13, 1)] {
            let f = Field::new(p, e).unwrap();
            let g = f.generator();
            let mut seen = vec![false; f.q() as usize];
            let mut cur = 1u32;
            let mut count = 0u32;
            loop {
                assert!(!seen[cur as usize], "period shorter than q-1 in {f}");
                seen[cur as usize] = true;
                count += 1;
                cur = f.mul(cur, g);
                if cur == 1 {
                    break;
                }
            }
            assert_eq!(count, f.q() - 1, "generator of {f} not primitive");
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3)] {
            let f = Field::new(p, e).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert_eq!(f.sub(a, b), f.add(a, f.neg(b)));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_pairs_medium() {
        // Above the triple-loop sizes: pairwise identities only.
        for (p, e) in [(2, 8), (3, 4), (5, 3), (251, 1)] {
            let f = Field::new(p, e).unwrap();
            for a in 0..f.q() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                let b = f.frobenius(a, 1);
                assert_eq!(f.pow(a, p as u64), b);
            }
        }
    }

    #[test]
    fn frobenius_is_additive_and_fixes_prime_field() {
        for (p, e) in [(2, 4), (3, 2), (5, 2)] {
            let f = Field::new(p, e).unwrap();
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(
                        f.frobenius(f.add(a, b), 1),
                        f.add(f.frobenius(a, 1), f.frobenius(b, 1))
                    );
                }
            }
            for c in 0..p {
                assert_eq!(f.frobenius(c, 1), c, "prime subfield must be fixed");
            }
            for a in 0..f.q() {
                assert_eq!(f.frobenius(a, e), a, "Frobenius^e must be identity");
            }
        }
    }

    #[test]
    fn serialization_roundtrip() {
        for (p, e) in [(2, 4), (3, 3), (5, 2)] {
            let f = Field::new(p, e).unwrap();
            for a in 0..f.q() {
                let c = f.coeffs(a);
                assert_eq!(c.len(), e as usize);
                assert_eq!(f.from_coeffs(&c).unwrap(), a);
            }
        }
    }

    #[test]
    fn tower_embedding_is_a_ring_homomorphism() {
        for (p, e, m) in [(2, 1, 4), (2, 2, 2), (3, 1, 3), (3, 2, 2), (2, 3, 2)] {
            let base = Field::new(p, e).unwrap();
            let t = FieldTower::new(&base, m).unwrap();
            for a in 0..base.q() {
                for b in 0..base.q() {
                    assert_eq!(
                        t.embed(base.add(a, b)),
                        t.top().add(t.embed(a), t.embed(b)),
                        "additivity fails for {a},{b} in GF({p}^{e}) -> m={m}"
                    );
                    assert_eq!(t.embed(base.mul(a, b)), t.top().mul(t.embed(a), t.embed(b)));
                }
            }
            // The embedded base generator must satisfy the base modulus.
            let g = t.embed(base.generator());
            let mut acc = 0u32;
            for (i, &c) in base.modulus().iter().enumerate() {
                let term = t.top().mul(t.embed(c % p), t.top().pow(g, i as u64));
                acc = t.top().add(acc, term);
            }
            assert_eq!(acc, 0, "embedded generator must be a root of the base modulus");
        }
    }

    #[test]
    fn tower_expand_combine_roundtrip() {
        for (p, e, m) in [(2, 1, 4), (2, 2, 3), (3, 1, 4), (3, 2, 2)] {
            let base = Field::new(p, e).unwrap();
            let t = FieldTower::new(&base, m).unwrap();
            for alpha in 0..t.top().q() {
                let c = t.expand(alpha);
                assert_eq!(c.len(), m as usize);
                assert!(c.iter().all(|&ci| ci < base.q()));
                assert_eq!(t.combine(&c), alpha);
            }
            // Embedded base elements expand to (a, 0, ..., 0).
            for a in 0..base.q() {
                let c = t.expand(t.embed(a));
                assert_eq!(c[0], a);
                assert!(c[1..].iter().all(|&ci| ci == 0));
            }
        }
    }

    #[test]
    fn tower_frobenius_fixes_embedded_base() {
        let base = Field::new(2, 2).unwrap();
        let t = FieldTower::new(&base, 3).unwrap();
        for a in 0..base.q() {
            assert_eq!(t.frobenius(t.embed(a), 1), t.embed(a));
        }
        // and is q-linear over the base
        let q = t.top().q();
        for a in (0..q).step_by(7) {
            for b in (0..q).step_by(11) {
                assert_eq!(
                    t.frobenius(t.top().add(a, b), 1),
                    t.top().add(t.frobenius(a, 1), t.frobenius(b, 1))
                );
            }
        }
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(1, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(2, 17).is_err());
        assert!(Field::new(257, 3).is_err());
        assert!(Field::new(2, 16).is_ok());
        let f = Field::new(2, 2).unwrap();
        assert!(f.element(4).is_err());
        assert!(f.element(3).is_ok());
        assert!(f.element(0).unwrap().inverse().is_err());
    }

    #[test]
    #[should_panic(expected = "mixed")]
    fn cross_field_arithmetic_panics() {
        let a = Field::new(2, 2).unwrap().element(1).unwrap();
        let b = Field::new(3, 1).unwrap().element(1).unwrap();
        let _ = a + b;
    }
}
