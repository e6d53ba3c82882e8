//! Exact arithmetic in GF(p^m).
//!
//! Elements are stored in polynomial basis as a packed base-`p` integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`, where `c_i` is the coefficient of
//! `t^i` modulo the irreducible modulus. The packed form is canonical, so
//! element equality and ordering are coefficient-wise.
//!
//! Fields with at most [`TABLE_LIMIT`] elements carry exp/log tables for a
//! primitive element; larger fields fall back to schoolbook multiplication.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::upoly::UPoly;

/// Largest field size supported anywhere in the crate.
pub const FIELD_CAP: u64 = 1 << 24;

/// Fields up to this size get exp/log tables.
pub const TABLE_LIMIT: u64 = 1 << 22;

const MAX_DEGREE: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("modulus {modulus:?} is reducible over GF({p})")]
    ReducibleModulus { p: u64, modulus: Vec<u64> },
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    SpecMismatch,
    #[error("GF({p}^{m}) exceeds the 2^24 element cap")]
    CapExceeded { p: u64, m: usize },
}

/// An element of some [`FieldSpec`]. Carries the identity of its field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement {
    field: u64,
    v: u32,
}

impl FieldElement {
    /// Packed base-`p` coefficient value.
    #[inline]
    pub fn value(self) -> u32 {
        self.v
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.v == 0
    }

    #[inline]
    pub fn field_id(self) -> u64 {
        self.field
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    m: usize,
    q: u64,
    modulus: Vec<u64>,
    id: u64,
    pow_p: Vec<u64>,
    tables: Option<Tables>,
}

/// GF(p^m) with an explicit monic irreducible modulus. Cheap to clone.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.0.p, self.0.m, self.0.modulus)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

fn field_id(p: u64, m: usize, modulus: &[u64]) -> u64 {
    // FNV-1a over the defining data, so identical specs interoperate.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in [p, m as u64].iter().chain(modulus.iter()) {
        for b in w.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h
}

/// `C(k, j) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut k: u64, mut j: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while j > 0 || k > 0 {
        let (kd, jd) = (k % p, j % p);
        if jd > kd {
            return 0;
        }
        acc = acc * small_binom_mod(kd, jd, p) % p;
        k /= p;
        j /= p;
    }
    acc
}

// C(n, r) mod p for n < p, via a multiplicative formula and Fermat inversion.
fn small_binom_mod(n: u64, r: u64, p: u64) -> u64 {
    let r = r.min(n - r);
    let (mut num, mut den) = (1u64, 1u64);
    for i in 0..r {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * mod_pow(den, p - 2, p) % p
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (s0, s1) = (s1, s0 - k * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(n as i128) as u64)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FieldSpec {
    /// Builds GF(p^m). Without an explicit modulus the smallest irreducible
    /// monic polynomial is chosen, candidates ordered by the packed value of
    /// `(c_0, ..., c_{m-1})` (so `c_{m-1}` is the most significant digit).
    pub fn new(p: u64, m: usize, modulus: Option<&[u64]>) -> Result<Self, FieldError> {
        if p < 3 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(FieldError::BadModulus(format!("unsupported degree {m}")));
        }
        let q = (p as u128).pow(m as u32);
        if q > FIELD_CAP as u128 {
            return Err(FieldError::CapExceeded { p, m });
        }
        let q = q as u64;
        let modulus = match modulus {
            Some(c) => {
                if c.len() != m + 1 || c[m] != 1 {
                    return Err(FieldError::BadModulus(format!(
                        "expected a monic degree-{m} coefficient list, got {c:?}"
                    )));
                }
                if c.iter().any(|&x| x >= p) {
                    return Err(FieldError::BadModulus(format!(
                        "coefficients of {c:?} must lie in [0, {p})"
                    )));
                }
                if !is_irreducible(p, c) {
                    return Err(FieldError::ReducibleModulus { p, modulus: c.to_vec() });
                }
                c.to_vec()
            }
            None => smallest_irreducible(p, m),
        };
        Ok(Self::build(p, m, q, modulus))
    }

    /// The prime field GF(p) with modulus `X`.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        Self::new(p, 1, None)
    }

    fn build(p: u64, m: usize, q: u64, modulus: Vec<u64>) -> Self {
        let mut pow_p = Vec::with_capacity(m + 1);
        let mut acc = 1u64;
        for _ in 0..=m {
            pow_p.push(acc);
            acc = acc.saturating_mul(p);
        }
        let id = field_id(p, m, &modulus);
        let mut inner = Inner { p, m, q, modulus, id, pow_p, tables: None };
        if q <= TABLE_LIMIT && m > 1 {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec(Arc::new(inner))
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.0.m
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.0.q
    }

    #[inline]
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// `p^(m/2)` when `m` is even.
    pub fn sqrt_q(&self) -> Option<u64> {
        self.0.m.is_multiple_of(2).then(|| self.0.pow_p[self.0.m / 2])
    }

    #[inline]
    fn mk(&self, v: u64) -> FieldElement {
        FieldElement { field: self.0.id, v: v as u32 }
    }

    #[inline]
    fn own(&self, a: FieldElement) -> u64 {
        assert!(a.field == self.0.id, "cross-field arithmetic: element does not belong to {self:?}");
        a.v as u64
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.field == self.0.id
    }

    pub fn zero(&self) -> FieldElement {
        self.mk(0)
    }

    pub fn one(&self) -> FieldElement {
        self.mk(1)
    }

    /// The class of `t` in GF(p)[t]/(modulus).
    pub fn generator(&self) -> FieldElement {
        if self.0.m == 1 {
            self.mk((self.0.p - self.0.modulus[0]) % self.0.p)
        } else {
            self.mk(self.0.p)
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.mk(n.rem_euclid(self.0.p as i64) as u64)
    }

    /// Element with packed value `v`; `None` if `v >= q`.
    pub fn element(&self, v: u64) -> Option<FieldElement> {
        (v < self.0.q).then(|| self.mk(v))
    }

    /// Element from coefficients of `t^0, t^1, ...` of any length; higher powers
    /// are reduced through the modulus.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> FieldElement {
        let t = self.generator();
        let mut acc = self.zero();
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, t), self.from_int(c));
        }
        acc
    }

    /// Coefficient vector (length exactly `m`, low-to-high).
    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut v = self.own(a);
        (0..self.0.m)
            .map(|_| {
                let d = v % self.0.p;
                v /= self.0.p;
                d
            })
            .collect()
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(|v| self.mk(v))
    }

    /// Value as a non-negative integer when the element lies in the prime field.
    pub fn as_prime_int(&self, a: FieldElement) -> Option<u64> {
        let v = self.own(a);
        (v < self.0.p).then_some(v)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (a, b) = (self.own(a), self.own(b));
        let p = self.0.p;
        if self.0.m == 1 {
            let s = a + b;
            return self.mk(if s >= p { s - p } else { s });
        }
        let (mut a, mut b, mut r, mut pw) = (a, b, 0u64, 1u64);
        while a > 0 || b > 0 {
            let s = a % p + b % p;
            r += if s >= p { s - p } else { s } * pw;
            pw *= p;
            a /= p;
            b /= p;
        }
        self.mk(r)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let a = self.own(a);
        let p = self.0.p;
        if self.0.m == 1 {
            return self.mk((p - a) % p);
        }
        let (mut a, mut r, mut pw) = (a, 0u64, 1u64);
        while a > 0 {
            r += ((p - a % p) % p) * pw;
            pw *= p;
            a /= p;
        }
        self.mk(r)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (x, y) = (self.own(a), self.own(b));
        if x == 0 || y == 0 {
            return self.zero();
        }
        if self.0.m == 1 {
            return self.mk(x * y % self.0.p);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let s = t.log[x as usize] as u64 + t.log[y as usize] as u64;
            return self.mk(t.exp[(if s >= n { s - n } else { s }) as usize] as u64);
        }
        self.mk(slow_mul(&self.0, x, y))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        let x = self.own(a);
        if x == 0 {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            return Ok(self.mk(t.exp[((n - t.log[x as usize] as u64) % n) as usize] as u64));
        }
        Ok(self.pow(a, self.0.q - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        let x = self.own(a);
        if e == 0 {
            return self.one();
        }
        if x == 0 {
            return self.zero();
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q - 1;
            let k = (t.log[x as usize] as u128 * (e % n) as u128 % n as u128) as usize;
            return self.mk(t.exp[k] as u64);
        }
        let (mut base, mut e, mut acc) = (a, e, self.one());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute Frobenius `x -> x^p`.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        self.pow(a, self.0.p)
    }

    pub fn try_add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    pub fn try_inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.inv(a)
    }

    pub fn try_pow(&self, a: FieldElement, e: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(self.pow(a, e))
    }

    pub fn check(&self, a: FieldElement) -> Result<(), FieldError> {
        if a.field == self.0.id {
            Ok(())
        } else {
            Err(FieldError::SpecMismatch)
        }
    }

    /// All `x` with `x^n = a`, sorted canonically.
    pub fn nth_roots(&self, a: FieldElement, n: u64) -> Vec<FieldElement> {
        assert!(n > 0, "nth_roots needs n >= 1");
        let x = self.own(a);
        if x == 0 {
            return vec![self.zero()];
        }
        let order = self.0.q - 1;
        let mut out = match (&self.0.tables, self.0.m) {
            (Some(t), _) => {
                let l = t.log[x as usize] as u64;
                let g = gcd(n % order, order);
                let g = if g == 0 { order } else { g };
                if !l.is_multiple_of(g) {
                    return Vec::new();
                }
                let step = order / g;
                let k0 = if step == 1 {
                    0
                } else {
                    let inv = mod_inverse((n / g) % step, step).expect("n/g is a unit mod order/g");
                    ((l / g) as u128 * inv as u128 % step as u128) as u64
                };
                (0..g)
                    .map(|j| self.mk(t.exp[((k0 + j * step) % order) as usize] as u64))
                    .collect::<Vec<_>>()
            }
            _ => self.elements().filter(|&y| self.pow(y, n) == a).collect(),
        };
        out.sort();
        out
    }

    /// Renders an element as a polynomial in `t`, e.g. `3+2t+t^2`.
    pub fn format(&self, a: FieldElement) -> String {
        let c = self.coeffs(a);
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate() {
            if ci == 0 {
                continue;
            }
            let s = match (i, ci) {
                (0, _) => ci.to_string(),
                (1, 1) => "t".to_string(),
                (1, _) => format!("{ci}t"),
                (_, 1) => format!("t^{i}"),
                _ => format!("{ci}t^{i}"),
            };
            parts.push(s);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join("+")
        }
    }

    /// The flattened extension GF(q^k) together with the embedding of `self`.
    pub fn extension(&self, k: usize) -> Result<Extension, FieldError> {
        Extension::new(self, k)
    }
}

fn build_tables(inner: &Inner) -> Tables {
    let q = inner.q;
    let order = q - 1;
    let factors = prime_factors(order);
    let pow_slow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(inner, acc, b);
            }
            b = slow_mul(inner, b, b);
            e >>= 1;
        }
        acc
    };
    let g = (2..q)
        .find(|&g| factors.iter().all(|&l| pow_slow(g, order / l) != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; q as usize];
    let mut acc = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = acc as u32;
        log[acc as usize] = i as u32;
        acc = slow_mul(inner, acc, g);
    }
    Tables { exp, log }
}

fn slow_mul(inner: &Inner, a: u64, b: u64) -> u64 {
    let (p, m) = (inner.p, inner.m);
    let mut da = [0u64; MAX_DEGREE];
    let mut db = [0u64; MAX_DEGREE];
    let (mut x, mut y) = (a, b);
    for i in 0..m {
        da[i] = x % p;
        db[i] = y % p;
        x /= p;
        y /= p;
    }
    let mut prod = [0u64; 2 * MAX_DEGREE];
    for i in 0..m {
        if da[i] == 0 {
            continue;
        }
        for j in 0..m {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for k in (m..2 * m - 1).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..m {
            let s = k - m + i;
            prod[s] = (prod[s] + (p - c) * inner.modulus[i]) % p;
        }
    }
    (0..m).rev().fold(0, |acc, i| acc * p + prod[i])
}

/// Rabin-style test: no factor of degree `k <= m/2`, via `gcd(X^(p^k) - X, f)`.
fn is_irreducible(p: u64, modulus: &[u64]) -> bool {
    let m = modulus.len() - 1;
    if m == 1 {
        return true;
    }
    let gf = FieldSpec::build(p, 1, p, vec![0, 1]);
    let f = UPoly::new(&gf, modulus.iter().map(|&c| gf.from_int(c as i64)).collect());
    let x = UPoly::x(&gf);
    let mut h = x.clone();
    for _ in 1..=m / 2 {
        h = h.powmod(p, &f);
        if f.gcd(&h.sub(&x)).degree() != Some(0) {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, m: usize) -> Vec<u64> {
    let count = p.pow(m as u32);
    for idx in 0..count {
        let mut c: Vec<u64> = Vec::with_capacity(m + 1);
        let mut v = idx;
        for _ in 0..m {
            c.push(v % p);
            v /= p;
        }
        c.push(1);
        if is_irreducible(p, &c) {
            return c;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// GF(q^k) built flat as GF(p^(mk)), with the embedding of GF(q) fixed by the
/// smallest root of the base modulus.
#[derive(Clone)]
pub struct Extension {
    base: FieldSpec,
    big: FieldSpec,
    degree: usize,
    image: Arc<Vec<u32>>,
    preimage: Arc<HashMap<u32, u32>>,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Extension({:?} -> {:?})", self.base, self.big)
    }
}

impl Extension {
    fn new(base: &FieldSpec, k: usize) -> Result<Self, FieldError> {
        if k == 0 {
            return Err(FieldError::BadModulus("extension degree must be >= 1".into()));
        }
        let big = FieldSpec::new(base.p(), base.m() * k, None)?;
        // Prime-field constants have the same packed value in every field of characteristic p.
        let f = UPoly::new(
            &big,
            base.modulus().iter().map(|&c| big.from_int(c as i64)).collect(),
        );
        let root = *f.roots().first().expect("base modulus splits in the extension");
        let mut image = Vec::with_capacity(base.q() as usize);
        let mut preimage = HashMap::with_capacity(base.q() as usize);
        for a in base.elements() {
            let y = base
                .coeffs(a)
                .iter()
                .rev()
                .fold(big.zero(), |acc, &c| big.add(big.mul(acc, root), big.from_int(c as i64)));
            preimage.insert(y.value(), a.value());
            image.push(y.value());
        }
        Ok(Extension {
            base: base.clone(),
            big,
            degree: k,
            image: Arc::new(image),
            preimage: Arc::new(preimage),
        })
    }

    pub fn base(&self) -> &FieldSpec {
        &self.base
    }

    pub fn big(&self) -> &FieldSpec {
        &self.big
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn embed(&self, a: FieldElement) -> FieldElement {
        let v = self.base.own(a);
        self.big.mk(self.image[v as usize] as u64)
    }

    /// Preimage in the base field, if `x` lies in the image of the embedding.
    pub fn restrict(&self, x: FieldElement) -> Option<FieldElement> {
        let v = self.big.own(x) as u32;
        self.preimage.get(&v).map(|&b| self.base.mk(b as u64))
    }

    /// The relative Frobenius `x -> x^q` over the base field.
    pub fn frobenius_q(&self, x: FieldElement) -> FieldElement {
        self.big.pow(x, self.base.q())
    }
}
