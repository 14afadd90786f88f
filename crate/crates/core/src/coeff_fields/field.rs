//! Finite fields F_q = F_p[z]/(modulus) with table-driven arithmetic.
//!
//! Elements are stored as compact codes: the code of Σ c_i z^i is Σ c_i p^i.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field size; keeps codes in `u32` and tables small.
pub const MAX_Q: u32 = 1 << 16;

/// Serializable description of F_q: characteristic, degree and a monic modulus
/// given low-degree-first (length e + 1).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

/// Conway polynomials for p ≤ 7, e ≤ 4, low-degree-first and monic.
fn default_modulus(p: u32, e: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match (p, e) {
        (2, 1) => &[1, 1],
        (2, 2) => &[1, 1, 1],
        (2, 3) => &[1, 1, 0, 1],
        (2, 4) => &[1, 1, 0, 0, 1],
        (3, 1) => &[1, 1],
        (3, 2) => &[2, 2, 1],
        (3, 3) => &[1, 2, 0, 1],
        (3, 4) => &[2, 0, 0, 2, 1],
        (5, 1) => &[3, 1],
        (5, 2) => &[2, 4, 1],
        (5, 3) => &[3, 3, 0, 1],
        (5, 4) => &[2, 4, 4, 0, 1],
        (7, 1) => &[4, 1],
        (7, 2) => &[3, 6, 1],
        (7, 3) => &[4, 0, 6, 1],
        (7, 4) => &[3, 4, 5, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Remainder of `a` modulo monic-or-not `b` over F_p (both low-degree-first).
fn fp_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = fp_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = r[dr] * lead_inv % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + p * p - c * b[i] % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut n = p - 2;
    while n > 0 {
        if n & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        n >>= 1;
    }
    r as u32
}

/// Irreducibility over F_p by trial division with every monic polynomial of
/// degree at most e/2.
pub fn is_irreducible_fp(modulus: &[u32], p: u32) -> bool {
    let mut m = modulus.to_vec();
    trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let e = m.len() - 1;
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if fp_poly_rem(&m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

struct Inner {
    desc: FieldDesc,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    frob: Vec<u32>,
    frob_inv: Vec<u32>,
    neg: Vec<u32>,
    add_tab: Vec<u32>,
}

/// A finite field with precomputed log/exp and Frobenius tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.desc == other.0.desc
    }
}

impl Eq for Field {}

impl Field {
    pub fn new(desc: FieldDesc) -> Result<Field> {
        let FieldDesc { p, e, modulus } = desc.clone();
        if !is_prime(p) {
            return Err(Error::user(format!("characteristic {p} is not prime")));
        }
        if e == 0 {
            return Err(Error::user("extension degree must be positive"));
        }
        let q64 = (p as u64).checked_pow(e).unwrap_or(u64::MAX);
        if q64 > MAX_Q as u64 {
            return Err(Error::user(format!("field of size {p}^{e} is too large")));
        }
        if modulus.len() != e as usize + 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::user("modulus must have e + 1 coefficients in F_p"));
        }
        if modulus[e as usize] != 1 {
            return Err(Error::user("modulus must be monic"));
        }
        if !is_irreducible_fp(&modulus, p) {
            return Err(Error::user("modulus is not irreducible over F_p"));
        }
        let q = q64 as u32;
        let ctx = Raw { p, e, modulus: &modulus };
        // Find a primitive element by brute force; q is small.
        let mut exp = Vec::new();
        for g in 1..q {
            let mut x = 1u32;
            let mut seq = Vec::with_capacity(q as usize - 1);
            let mut ok = true;
            for i in 0..q - 1 {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                seq.push(x);
                x = ctx.mul(x, g);
            }
            if ok && x == 1 {
                exp = seq;
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let mut neg = vec![0u32; q as usize];
        for x in 0..q {
            neg[x as usize] = ctx.neg(x);
        }
        let mut add_tab = Vec::new();
        if e > 1 && q <= 256 {
            add_tab = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add_tab[(a * q + b) as usize] = add_digits(a, b, p);
                }
            }
        }
        let mut inner = Inner { desc, q, exp, log, frob: vec![], frob_inv: vec![], neg, add_tab };
        let mut frob = vec![0u32; q as usize];
        for x in 0..q {
            frob[x as usize] = pow_with(&inner, x, p as u64);
        }
        let mut frob_inv = vec![0u32; q as usize];
        for x in 0..q {
            frob_inv[frob[x as usize] as usize] = x;
        }
        inner.frob = frob;
        inner.frob_inv = frob_inv;
        Ok(Field(Arc::new(inner)))
    }

    /// F_{p^e} with the built-in default modulus.
    pub fn default_for(p: u32, e: u32) -> Result<Field> {
        let modulus = default_modulus(p, e).ok_or_else(|| {
            Error::user(format!("no default modulus for p = {p}, e = {e}; pass one explicitly"))
        })?;
        Field::new(FieldDesc { p, e, modulus })
    }

    /// Parses a field tag such as "2", "4", "2^2" or "3^4".
    pub fn from_tag(tag: &str, modulus: Option<Vec<u32>>) -> Result<Field> {
        let tag = tag.trim();
        let (p, e) = if let Some((a, b)) = tag.split_once('^') {
            let p: u32 = a.trim().parse().map_err(|_| Error::user(format!("bad field tag {tag:?}")))?;
            let e: u32 = b.trim().parse().map_err(|_| Error::user(format!("bad field tag {tag:?}")))?;
            (p, e)
        } else {
            let q: u32 = tag.parse().map_err(|_| Error::user(format!("bad field tag {tag:?}")))?;
            prime_power(q).ok_or_else(|| Error::user(format!("{q} is not a prime power")))?
        };
        match modulus {
            Some(m) => Field::new(FieldDesc { p, e, modulus: m }),
            None => Field::default_for(p, e),
        }
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.0.desc
    }
    pub fn p(&self) -> u32 {
        self.0.desc.p
    }
    pub fn e(&self) -> u32 {
        self.0.desc.e
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p();
        if self.e() == 1 {
            return (a + b) % p;
        }
        if !self.0.add_tab.is_empty() {
            return self.0.add_tab[(a * self.0.q + b) as usize];
        }
        add_digits(a, b, p)
    }
    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.0.q - 1;
        let s = (self.0.log[a as usize] + self.0.log[b as usize]) % n;
        self.0.exp[s as usize]
    }
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = self.0.log[a as usize];
        Some(self.0.exp[((n - l) % n) as usize])
    }
    /// a / b; panics on division by zero.
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b).expect("division by zero in F_q"))
    }
    pub fn pow(&self, a: u32, n: u64) -> u32 {
        pow_with(&self.0, a, n)
    }
    /// Frobenius x ↦ x^{p^k}; negative k applies the inverse.
    pub fn frob(&self, a: u32, k: i64) -> u32 {
        let e = self.e() as i64;
        let k = k.rem_euclid(e);
        let mut x = a;
        for _ in 0..k {
            x = self.0.frob[x as usize];
        }
        x
    }
    pub fn frob_inv(&self, a: u32) -> u32 {
        self.0.frob_inv[a as usize]
    }
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p() as i64) as u32
    }
    /// The class of z, i.e. the chosen root of the modulus.
    pub fn gen(&self) -> u32 {
        if self.e() == 1 {
            let m = &self.0.desc.modulus;
            (self.p() - m[0]) % self.p()
        } else {
            self.p()
        }
    }
    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> u32 {
        if self.q() == 2 {
            1
        } else {
            self.0.exp[1]
        }
    }
    /// F_p-coordinates of an element, low degree first, length e.
    pub fn coords(&self, a: u32) -> Vec<u32> {
        let p = self.p();
        let mut v = Vec::with_capacity(self.e() as usize);
        let mut a = a;
        for _ in 0..self.e() {
            v.push(a % p);
            a /= p;
        }
        v
    }
    pub fn from_coords(&self, c: &[u32]) -> Result<u32> {
        if c.len() != self.e() as usize || c.iter().any(|&x| x >= self.p()) {
            return Err(Error::user("coordinate vector does not match the field"));
        }
        Ok(c.iter().rev().fold(0, |acc, &x| acc * self.p() + x))
    }
    pub fn elem(&self, code: u32) -> FqElement {
        assert!(code < self.q());
        FqElement { field: self.clone(), code }
    }
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q()
    }
    /// Human-readable form: F_p integers, or "g^k" powers of `gen` in extensions.
    pub fn fmt_elem(&self, a: u32) -> String {
        if self.e() == 1 || a == 0 {
            return a.to_string();
        }
        let g = self.gen();
        let mut x = 1;
        for k in 0..self.q() {
            if x == a {
                return if k == 0 { "1".into() } else if k == 1 { "g".into() } else { format!("g^{k}") };
            }
            x = self.mul(x, g);
        }
        // gen is not primitive for this modulus: fall back to coordinates.
        format!("{:?}", self.coords(a))
    }
}

fn add_digits(mut a: u32, mut b: u32, p: u32) -> u32 {
    let mut r = 0;
    let mut pw = 1;
    while a > 0 || b > 0 {
        r += ((a % p + b % p) % p) * pw;
        a /= p;
        b /= p;
        pw *= p;
    }
    r
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let (mut r, mut e) = (q, 0);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn pow_with(inner: &Inner, a: u32, n: u64) -> u32 {
    if n == 0 {
        return 1;
    }
    if a == 0 {
        return 0;
    }
    let m = (inner.q - 1) as u64;
    let l = inner.log[a as usize] as u64;
    inner.exp[((l * (n % m)) % m) as usize]
}

/// Schoolbook arithmetic used only while building the tables.
struct Raw<'a> {
    p: u32,
    e: u32,
    modulus: &'a [u32],
}

impl Raw<'_> {
    fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = vec![0; self.e as usize];
        let mut a = a;
        for d in v.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        v
    }
    fn code(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }
    fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).into_iter().map(|x| (self.p - x) % self.p).collect();
        self.code(&d)
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let e = self.e as usize;
        let mut prod = vec![0u32; 2 * e];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % self.p;
            }
        }
        let r = fp_poly_rem(&prod, self.modulus, self.p);
        let mut d = vec![0; e];
        d[..r.len()].copy_from_slice(&r);
        self.code(&d)
    }
}

/// An element of F_q bundled with its field.
#[derive(Clone, PartialEq, Eq)]
pub struct FqElement {
    pub field: Field,
    pub code: u32,
}

impl fmt::Debug for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.fmt_elem(self.code))
    }
}

impl FqElement {
    fn check(&self, other: &FqElement) {
        assert!(self.field == other.field, "mixing elements of different fields");
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
    pub fn inv(&self) -> Option<FqElement> {
        self.field.inv(self.code).map(|c| self.field.elem(c))
    }
    pub fn pow(&self, n: u64) -> FqElement {
        self.field.elem(self.field.pow(self.code, n))
    }
    pub fn frobenius(&self, k: i64) -> FqElement {
        self.field.elem(self.field.frob(self.code, k))
    }
    pub fn coords(&self) -> Vec<u32> {
        self.field.coords(self.code)
    }
}

impl std::ops::Add for FqElement {
    type Output = FqElement;
    fn add(self, o: FqElement) -> FqElement {
        self.check(&o);
        let c = self.field.add(self.code, o.code);
        FqElement { field: self.field, code: c }
    }
}

impl std::ops::Sub for FqElement {
    type Output = FqElement;
    fn sub(self, o: FqElement) -> FqElement {
        self.check(&o);
        let c = self.field.sub(self.code, o.code);
        FqElement { field: self.field, code: c }
    }
}

impl std::ops::Mul for FqElement {
    type Output = FqElement;
    fn mul(self, o: FqElement) -> FqElement {
        self.check(&o);
        let c = self.field.mul(self.code, o.code);
        FqElement { field: self.field, code: c }
    }
}

impl std::ops::Neg for FqElement {
    type Output = FqElement;
    fn neg(self) -> FqElement {
        let c = self.field.neg(self.code);
        FqElement { field: self.field, code: c }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_moduli_are_irreducible() {
        for p in [2, 3, 5, 7] {
            for e in 1..=4 {
                let f = Field::default_for(p, e).unwrap();
                assert_eq!(f.q(), p.pow(e));
            }
        }
    }

    #[test]
    fn reducible_modulus_rejected() {
        let err = Field::new(FieldDesc { p: 2, e: 2, modulus: vec![1, 0, 1] }).unwrap_err();
        assert!(matches!(err, Error::User(_)));
    }

    #[test]
    fn f4_generator() {
        let f = Field::default_for(2, 2).unwrap();
        let g = f.gen();
        let g2 = f.mul(g, g);
        assert_eq!(f.frob(g, 1), g2);
        assert_eq!(f.frob(g, 2), g);
        assert_eq!(f.mul(g2, g), 1);
        assert_eq!(f.frob(1, 1), 1);
    }

    #[test]
    fn tags() {
        assert_eq!(Field::from_tag("4", None).unwrap().q(), 4);
        assert_eq!(Field::from_tag("3^2", None).unwrap().q(), 9);
        assert!(Field::from_tag("6", None).is_err());
    }

    #[test]
    fn mul_matches_schoolbook() {
        for (p, e) in [(2, 3), (3, 2), (5, 2)] {
            let f = Field::default_for(p, e).unwrap();
            let m = f.desc().modulus.clone();
            let raw = Raw { p, e, modulus: &m };
            for a in 0..f.q() {
                for b in 0..f.q() {
                    assert_eq!(f.mul(a, b), raw.mul(a, b));
                }
            }
        }
    }
}
