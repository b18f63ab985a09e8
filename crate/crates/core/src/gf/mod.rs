//! Exact arithmetic in F_p, F_q = F_{p^m} and a single tower extension
//! F_{q^e}, plus univariate polynomials over those fields.
//!
//! Elements are stored as an index in `[0, q^e)`: the base-`p` digits of the
//! index are the coefficients of `t^i u^j` at digit position `j*m + i`. With
//! that layout `F_p` is the index range `[0, p)` and `F_q` is `[0, q)`, so
//! subfield membership is a comparison.

mod dense;
mod text;
mod unipoly;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use dense::{PrimeScalars, Scalars};

pub use unipoly::UniPoly;

/// Largest supported `q^e`.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Element of a [`Field`], identified by its coefficient index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    m: usize,
    e: usize,
    q: u32,
    order: u32,
    /// Monic modulus over F_p in `t`, empty when `m == 1`.
    modulus_t: Vec<u32>,
    /// Monic modulus over F_q in `u`, empty when `e == 1`.
    modulus_u: Vec<u32>,
    /// `exp[k] = g^k` for a generator `g`, stored twice over to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u16>>,
}

/// A finite field `F_{q^e}` with `q = p^m`, with `F_q` as its distinguished base.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.params() == other.params()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field(p={}, m={}, e={})", self.p(), self.m(), self.e())
    }
}

fn is_prime(n: u64) -> bool {
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

/// Schoolbook multiplication of two indices viewed as polynomials over a
/// subfield of size `sub` with `k` digits, reduced by `modulus`.
struct SlowMul<'a, S: Scalars> {
    sub: &'a S,
    k: usize,
    modulus: &'a [u32],
}

impl<S: Scalars> SlowMul<'_, S> {
    fn decode(&self, mut a: u32) -> Vec<u32> {
        let size = self.sub.size();
        let mut v = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            v.push(a % size);
            a /= size;
        }
        dense::trim(&mut v);
        v
    }

    fn encode(&self, v: &[u32]) -> u32 {
        let size = self.sub.size();
        v.iter().rev().fold(0, |acc, &c| acc * size + c)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            return self.sub.mul(a, b);
        }
        let prod = dense::mul(self.sub, &self.decode(a), &self.decode(b));
        self.encode(&dense::rem(self.sub, &prod, self.modulus))
    }

    fn pow(&self, a: u32, mut n: u64) -> u32 {
        let mut result = 1;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        result
    }
}

fn digits_add(p: u32, digits: usize, mut a: u32, mut b: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..digits {
        out += ((a % p + b % p) % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn digits_neg(p: u32, digits: usize, mut a: u32) -> u32 {
    if p == 2 {
        return a;
    }
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..digits {
        out += ((p - a % p) % p) * scale;
        a /= p;
        scale *= p;
    }
    out
}

impl Field {
    /// Builds `F_{(p^m)^e}`. Moduli are the lexicographically first monic
    /// irreducible polynomials of the required degrees.
    pub fn new(p: u64, m: usize, e: usize) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 || e == 0 {
            return Err(Error::InvalidField(format!(
                "extension degrees must be positive (m={m}, e={e})"
            )));
        }
        let order = (p as u128).checked_pow((m * e) as u32).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::cap("field order", order, MAX_FIELD_ORDER));
        }
        let p = p as u32;
        let prime = PrimeScalars(p);
        let modulus_t = if m > 1 {
            dense::first_irreducible(&prime, m)
        } else {
            Vec::new()
        };
        let base = Self::with_tables(p, m, 1, modulus_t.clone(), Vec::new(), |order| {
            let slow = SlowMul {
                sub: &prime,
                k: m,
                modulus: &modulus_t,
            };
            build_log_tables(order, |a, b| slow.mul(a, b), |a, n| slow.pow(a, n))
        });
        if e == 1 {
            return Ok(base);
        }
        let modulus_u = dense::first_irreducible(&base, e);
        let mu = modulus_u.clone();
        Ok(Self::with_tables(p, m, e, modulus_t, modulus_u, |order| {
            let slow = SlowMul {
                sub: &base,
                k: e,
                modulus: &mu,
            };
            build_log_tables(order, |a, b| slow.mul(a, b), |a, n| slow.pow(a, n))
        }))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, 1)
    }

    fn with_tables(
        p: u32,
        m: usize,
        e: usize,
        modulus_t: Vec<u32>,
        modulus_u: Vec<u32>,
        tables: impl FnOnce(u32) -> (Vec<u32>, Vec<u32>),
    ) -> Field {
        let q = p.pow(m as u32);
        let order = q.pow(e as u32);
        let digits = m * e;
        let (exp, log) = tables(order);
        let neg = (0..order).map(|a| digits_neg(p, digits, a)).collect();
        let add = (order <= 256).then(|| {
            let mut t = vec![0u16; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    t[(a * order + b) as usize] = digits_add(p, digits, a, b) as u16;
                }
            }
            t
        });
        Field(Arc::new(Inner {
            p,
            m,
            e,
            q,
            order,
            modulus_t,
            modulus_u,
            exp,
            log,
            neg,
            add,
        }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> usize {
        self.0.m
    }

    pub fn e(&self) -> usize {
        self.0.e
    }

    /// Cardinality of the base field, `p^m`.
    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Cardinality of the whole field, `q^e`.
    pub fn order(&self) -> u32 {
        self.0.order
    }

    pub fn params(&self) -> (u32, usize, usize) {
        (self.0.p, self.0.m, self.0.e)
    }

    /// Coefficients of the `t`-modulus over F_p, little-endian (empty for `m = 1`).
    pub fn modulus_t(&self) -> &[u32] {
        &self.0.modulus_t
    }

    /// Coefficients (as F_q indices) of the `u`-modulus, little-endian (empty for `e = 1`).
    pub fn modulus_u(&self) -> &[u32] {
        &self.0.modulus_u
    }

    /// The same `p` and `m` with a different tower degree.
    pub fn with_extension(&self, e: usize) -> Result<Field> {
        if e == self.e() {
            return Ok(self.clone());
        }
        Field::new(self.p() as u64, self.m(), e)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// Checked conversion from a raw index.
    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index >= self.order() {
            return Err(Error::InvalidField(format!(
                "index {index} outside field of order {}",
                self.order()
            )));
        }
        Ok(FieldElement(index))
    }

    /// Image of an integer under `Z -> F_p`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p() as i64) as u32)
    }

    /// The generator `t` of F_q over F_p (only when `m > 1`).
    pub fn t(&self) -> Option<FieldElement> {
        (self.m() > 1).then(|| FieldElement(self.p()))
    }

    /// The generator `u` of F_{q^e} over F_q (only when `e > 1`).
    pub fn u(&self) -> Option<FieldElement> {
        (self.e() > 1).then(|| FieldElement(self.q()))
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.order()
    }

    pub fn in_base(&self, a: FieldElement) -> bool {
        a.0 < self.q()
    }

    pub fn in_prime_field(&self, a: FieldElement) -> bool {
        a.0 < self.p()
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order()).map(FieldElement)
    }

    /// Elements of the base field F_q in index order.
    pub fn base_elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(FieldElement)
    }

    /// Coefficients over F_p, `m*e` entries, little-endian in `t` then `u`.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.p();
        let mut x = a.0;
        (0..self.m() * self.e())
            .map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m() * self.e() || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(Error::InvalidField(format!(
                "expected {} coefficients in [0, {})",
                self.m() * self.e(),
                self.p()
            )));
        }
        Ok(FieldElement(
            coeffs.iter().rev().fold(0, |acc, &c| acc * self.p() + c),
        ))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.0;
        if let Some(t) = &inner.add {
            return FieldElement(t[(a.0 * inner.order + b.0) as usize] as u32);
        }
        FieldElement(digits_add(inner.p, inner.m * inner.e, a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.0;
        FieldElement(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElement) -> Option<FieldElement> {
        if a.0 == 0 {
            return None;
        }
        let inner = &*self.0;
        let n = inner.order - 1;
        Some(FieldElement(
            inner.exp[((n - inner.log[a.0 as usize]) % n) as usize],
        ))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Option<FieldElement> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.0;
        let group = (inner.order - 1) as u64;
        let l = (inner.log[a.0 as usize] as u64 * (n % group)) % group;
        FieldElement(inner.exp[l as usize])
    }

    /// `a^(p^j)` by `j` successive p-th powers.
    pub fn frobenius(&self, a: FieldElement, j: usize) -> FieldElement {
        (0..j).fold(a, |x, _| self.pow(x, self.p() as u64))
    }

    pub fn sum<I: IntoIterator<Item = FieldElement>>(&self, it: I) -> FieldElement {
        it.into_iter().fold(FieldElement::ZERO, |acc, x| self.add(acc, x))
    }

    /// Field embedding of `self` into `target`, as a lookup table indexed by
    /// element index. Requires equal `p`, `m` and `self.e() | target.e()`.
    pub fn embedding_into(&self, target: &Field) -> Result<Vec<FieldElement>> {
        if self.p() != target.p() || self.m() != target.m() || !target.e().is_multiple_of(self.e()) {
            return Err(Error::FieldMismatch);
        }
        if self.e() == 1 {
            return Ok(self.elements().collect());
        }
        // Smallest root of the u-modulus inside the target.
        let modulus: Vec<FieldElement> = self.modulus_u().iter().map(|&c| FieldElement(c)).collect();
        let eval = |x: FieldElement| {
            modulus
                .iter()
                .rev()
                .fold(FieldElement::ZERO, |acc, &c| target.add(target.mul(acc, x), c))
        };
        let beta = target
            .elements()
            .find(|&x| eval(x).is_zero())
            .ok_or(Error::FieldMismatch)?;
        let q = self.q();
        let powers: Vec<FieldElement> = (0..self.e()).map(|j| target.pow(beta, j as u64)).collect();
        Ok(self
            .elements()
            .map(|a| {
                let mut x = a.0;
                let mut acc = FieldElement::ZERO;
                for pw in &powers {
                    acc = target.add(acc, target.mul(FieldElement(x % q), *pw));
                    x /= q;
                }
                acc
            })
            .collect())
    }

    /// Uniformly random element of the whole field.
    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.order()))
    }

    /// Uniformly random element of the base field F_q.
    pub fn random_base<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(0..self.q()))
    }

    pub fn random_nonzero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.gen_range(1..self.order()))
    }
}

impl Scalars for Field {
    fn add(&self, a: u32, b: u32) -> u32 {
        Field::add(self, FieldElement(a), FieldElement(b)).0
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        Field::sub(self, FieldElement(a), FieldElement(b)).0
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        Field::mul(self, FieldElement(a), FieldElement(b)).0
    }
    fn inv(&self, a: u32) -> u32 {
        Field::inv(self, FieldElement(a)).map_or(0, |x| x.0)
    }
    fn size(&self) -> u32 {
        self.order()
    }
}

fn build_log_tables(
    order: u32,
    mul: impl Fn(u32, u32) -> u32,
    pow: impl Fn(u32, u64) -> u32,
) -> (Vec<u32>, Vec<u32>) {
    let n = (order - 1) as u64;
    let factors = prime_factors(n);
    let generator = (1..order)
        .find(|&g| factors.iter().all(|&r| pow(g, n / r) != 1))
        .expect("the multiplicative group of a finite field is cyclic");
    let mut exp = Vec::with_capacity(2 * n as usize);
    let mut log = vec![0u32; order as usize];
    let mut x = 1;
    for k in 0..n as u32 {
        exp.push(x);
        log[x as usize] = k;
        x = mul(x, generator);
    }
    exp.extend_from_within(..);
    (exp, log)
}
