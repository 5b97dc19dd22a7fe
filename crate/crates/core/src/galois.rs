//! Arithmetic in GF(p^m) with a polynomial-basis representation.
//!
//! Elements are coefficient vectors `c_0 + c_1 x + ... + c_{m-1} x^{m-1}` reduced
//! modulo a fixed monic irreducible polynomial. The modulus is always the
//! lexicographically least monic irreducible of degree `m`, so a given `(p, m)`
//! produces the same field, and therefore the same codes, on every run.
//!
//! Every element also has a canonical index `sum c_i p^i`. Ordering elements by
//! index puts zero first and is the order used for Kautz-Singleton indicator
//! positions and for Reed-Solomon evaluation points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the limit of {MAX_FIELD_ORDER}")]
    OrderOverflow { p: u32, m: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("element belongs to GF({0}^{1}), expected GF({2}^{3})")]
    MixedFields(u32, u32, u32, u32),
    #[error("malformed element: {0}")]
    Malformed(String),
}

/// Arithmetic operations accepted by [`FieldSpec::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise the first operand to the canonical index of the second, read as an integer.
    Pow,
    /// Inverse of the first operand; the second is ignored.
    Inv,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u32,
    m: u32,
    /// Monic modulus, low degree first, length `m + 1`.
    modulus: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    p: u32,
    m: u32,
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, m)` when `n = p^m` for a prime `p`.
pub fn prime_power(n: u64) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let mut rest = n;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p as u32, m))
}

// Polynomials over GF(p), low degree first, no trailing zeros (zero poly is empty).

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Remainder of `a` modulo `b` over GF(p). `b` must be nonzero.
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p) as u64;
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = r[r.len() - 1] as u64 * lead_inv % p as u64;
        for (i, &bc) in b.iter().enumerate() {
            let sub = factor * bc as u64 % p as u64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn monic_from_index(idx: u64, p: u32, degree: u32) -> Vec<u32> {
    let mut v = Vec::with_capacity(degree as usize + 1);
    let mut rest = idx;
    for _ in 0..degree {
        v.push((rest % p as u64) as u32);
        rest /= p as u64;
    }
    v.push(1);
    v
}

/// Irreducibility over GF(p) by trial division with every monic polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let mut f = poly.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let deg = (f.len() - 1) as u32;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d);
        for idx in 0..count {
            let g = monic_from_index(idx, p, d);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^m) with the lexicographically least monic irreducible modulus.
    ///
    /// Candidates `x^m + c_{m-1} x^{m-1} + ... + c_0` are scanned by the integer
    /// `sum c_i p^i`, the same ordering as canonical element indices.
    pub fn new(p: u32, m: u32) -> Result<Self, GaloisError> {
        if !is_prime(p as u64) {
            return Err(GaloisError::NotPrime(p));
        }
        if m < 1 {
            return Err(GaloisError::ZeroDegree);
        }
        let order = (p as u64).checked_pow(m).filter(|&q| q <= MAX_FIELD_ORDER);
        let order = order.ok_or(GaloisError::OrderOverflow { p, m })?;
        let modulus = (0..order)
            .map(|idx| monic_from_index(idx, p, m))
            .find(|cand| is_irreducible(cand, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self { p, m, modulus })
    }

    /// Field of order `q`, which must be a prime power.
    pub fn with_order(q: u64) -> Result<Self, GaloisError> {
        match prime_power(q) {
            Some((p, m)) => Self::new(p, m),
            None => Err(GaloisError::NotPrimePower(q)),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.m)
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Element with canonical index `idx` (taken modulo the field order).
    pub fn element(&self, idx: usize) -> FieldElement {
        let mut rest = idx % self.order();
        let coeffs = (0..self.m)
            .map(|_| {
                let c = (rest % self.p as usize) as u32;
                rest /= self.p as usize;
                c
            })
            .collect();
        FieldElement {
            p: self.p,
            m: self.m,
            coeffs,
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, GaloisError> {
        if coeffs.len() != self.m as usize {
            return Err(GaloisError::Malformed(format!(
                "expected {} coefficients, got {}",
                self.m,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(GaloisError::Malformed(format!(
                "coefficient {c} not below {}",
                self.p
            )));
        }
        Ok(FieldElement {
            p: self.p,
            m: self.m,
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn index_of(&self, e: &FieldElement) -> usize {
        e.coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * self.p as usize + c as usize)
    }

    /// All `q` elements in canonical order, zero first.
    pub fn elements(&self) -> Vec<FieldElement> {
        (0..self.order()).map(|i| self.element(i)).collect()
    }

    fn check(&self, e: &FieldElement) -> Result<(), GaloisError> {
        if e.p != self.p || e.m != self.m {
            return Err(GaloisError::MixedFields(e.p, e.m, self.p, self.m));
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        Ok(FieldElement { coeffs, ..a.clone() })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_unchecked(a, b))
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GaloisError::DivisionByZero);
        }
        Ok(self.pow_unchecked(a, self.order() as u64 - 2))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        let b_inv = self.inv(b)?;
        Ok(self.mul_unchecked(a, &b_inv))
    }

    pub fn pow(&self, a: &FieldElement, exp: u64) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        Ok(self.pow_unchecked(a, exp))
    }

    pub fn arith(
        &self,
        a: &FieldElement,
        b: &FieldElement,
        op: ArithOp,
    ) -> Result<FieldElement, GaloisError> {
        match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b),
            ArithOp::Pow => {
                self.check(b)?;
                self.pow(a, self.index_of(b) as u64)
            }
            ArithOp::Inv => self.inv(a),
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: &FieldElement) -> Result<u64, GaloisError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(GaloisError::DivisionByZero);
        }
        let one = self.one();
        let mut acc = a.clone();
        let mut k = 1;
        while acc != one {
            acc = self.mul_unchecked(&acc, a);
            k += 1;
        }
        Ok(k)
    }

    /// The generator of the multiplicative group with the smallest canonical index.
    pub fn primitive_element(&self) -> FieldElement {
        let target = self.order() as u64 - 1;
        (1..self.order())
            .map(|i| self.element(i))
            .find(|e| self.element_order(e).ok() == Some(target))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    pub(crate) fn add_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElement { coeffs, ..a.clone() }
    }

    pub(crate) fn mul_unchecked(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let m = self.m as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(m, 0);
        FieldElement { coeffs: r, ..a.clone() }
    }

    pub(crate) fn pow_unchecked(&self, a: &FieldElement, mut exp: u64) -> FieldElement {
        let mut result = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul_unchecked(&result, &base);
            }
            base = self.mul_unchecked(&base, &base);
            exp >>= 1;
        }
        result
    }

    /// Addition and multiplication tables over canonical indices.
    pub(crate) fn tables(&self) -> FieldTables {
        let q = self.order();
        let elems = self.elements();
        let mut add = vec![0u32; q * q];
        let mut mul = vec![0u32; q * q];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate().skip(i) {
                let s = self.index_of(&self.add_unchecked(a, b)) as u32;
                let p = self.index_of(&self.mul_unchecked(a, b)) as u32;
                add[i * q + j] = s;
                add[j * q + i] = s;
                mul[i * q + j] = p;
                mul[j * q + i] = p;
            }
        }
        FieldTables { q, add, mul }
    }
}

/// Dense operation tables for small fields, indexed by canonical index.
pub(crate) struct FieldTables {
    q: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl FieldTables {
    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.q + b as usize]
    }
}
