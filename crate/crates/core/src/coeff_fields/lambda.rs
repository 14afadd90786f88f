//! The perfect field F_p(λ^{1/p^∞}) generated by a transcendental λ.
//!
//! A [`LambdaElement`] is a finite F_p-combination of powers λ^{n/p^k}; a
//! [`LambdaRational`] is a quotient of two such elements.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent n/p^k in canonical form: k = 0 or p ∤ n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Exp {
    pub n: i64,
    pub k: u32,
}

impl Exp {
    pub fn new(n: i64, k: u32, p: u32) -> Exp {
        let (mut n, mut k) = (n, k);
        while k > 0 && n % p as i64 == 0 {
            n /= p as i64;
            k -= 1;
        }
        Exp { n, k }
    }
    pub fn int(n: i64) -> Exp {
        Exp { n, k: 0 }
    }
    pub fn to_ratio(self, p: u32) -> Ratio<i128> {
        Ratio::new(self.n as i128, (p as i128).pow(self.k))
    }
    pub fn from_ratio(r: Ratio<i128>, p: u32) -> Option<Exp> {
        let mut d = *r.denom();
        let mut k = 0;
        while d % p as i128 == 0 {
            d /= p as i128;
            k += 1;
        }
        (d == 1).then(|| Exp::new(*r.numer() as i64, k, p))
    }
    fn add(self, o: Exp, p: u32) -> Exp {
        let k = self.k.max(o.k);
        let a = self.n as i128 * (p as i128).pow(k - self.k);
        let b = o.n as i128 * (p as i128).pow(k - o.k);
        let (mut n, mut k) = (a + b, k);
        while k > 0 && n % p as i128 == 0 {
            n /= p as i128;
            k -= 1;
        }
        Exp { n: i64::try_from(n).expect("λ-exponent overflow"), k }
    }
    fn neg(self) -> Exp {
        Exp { n: -self.n, k: self.k }
    }
    fn cmp_val(self, o: Exp, p: u32) -> std::cmp::Ordering {
        let k = self.k.max(o.k);
        let a = self.n as i128 * (p as i128).pow(k - self.k);
        let b = o.n as i128 * (p as i128).pow(k - o.k);
        a.cmp(&b)
    }
}

/// Key wrapper ordering exponents by value so the map iterates in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Key(Exp, u32);

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.cmp_val(other.0, self.1)
    }
}

/// Σ c_e λ^e with e ∈ Z[1/p] and c_e ∈ F_p \ {0}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LambdaElement {
    p: u32,
    terms: BTreeMap<Key, u32>,
}

impl fmt::Debug for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{}·λ^({}/{}^{})", c, k.0.n, self.p, k.0.k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    num: i64,
    pow: u32,
    coeff: u32,
}

#[derive(Serialize, Deserialize)]
struct LambdaJson {
    p: u32,
    terms: Vec<TermJson>,
}

impl LambdaElement {
    pub fn zero(p: u32) -> LambdaElement {
        LambdaElement { p, terms: BTreeMap::new() }
    }
    pub fn one(p: u32) -> LambdaElement {
        LambdaElement::monomial(p, 1, Exp::int(0))
    }
    /// c·λ^e.
    pub fn monomial(p: u32, c: u32, e: Exp) -> LambdaElement {
        let mut x = LambdaElement::zero(p);
        let c = c % p;
        if c != 0 {
            x.terms.insert(Key(Exp::new(e.n, e.k, p), p), c);
        }
        x
    }
    /// λ^{n/p^k}.
    pub fn lambda_pow(p: u32, n: i64, k: u32) -> LambdaElement {
        LambdaElement::monomial(p, 1, Exp::new(n, k, p))
    }
    pub fn constant(p: u32, c: i64) -> LambdaElement {
        LambdaElement::monomial(p, c.rem_euclid(p as i64) as u32, Exp::int(0))
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> impl Iterator<Item = (Exp, u32)> + '_ {
        self.terms.iter().map(|(k, &c)| (k.0, c))
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    fn insert_add(&mut self, e: Exp, c: u32) {
        let key = Key(e, self.p);
        let cur = self.terms.get(&key).copied().unwrap_or(0);
        let v = (cur + c) % self.p;
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }
    pub fn add(&self, o: &LambdaElement) -> LambdaElement {
        assert_eq!(self.p, o.p);
        let mut r = self.clone();
        for (e, c) in o.terms() {
            r.insert_add(e, c);
        }
        r
    }
    pub fn neg(&self) -> LambdaElement {
        let p = self.p;
        LambdaElement { p, terms: self.terms.iter().map(|(k, &c)| (*k, p - c)).collect() }
    }
    pub fn sub(&self, o: &LambdaElement) -> LambdaElement {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &LambdaElement) -> LambdaElement {
        assert_eq!(self.p, o.p);
        let mut r = LambdaElement::zero(self.p);
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                r.insert_add(e1.add(e2, self.p), c1 * c2 % self.p);
            }
        }
        r
    }
    pub fn scale(&self, c: i64) -> LambdaElement {
        self.mul(&LambdaElement::constant(self.p, c))
    }
    /// x ↦ x^{p^k}; coefficients lie in F_p so only exponents move.
    pub fn frobenius(&self, k: i64) -> LambdaElement {
        let p = self.p;
        let terms = self
            .terms()
            .map(|(e, c)| {
                let ne = if k >= 0 {
                    Exp::new(e.n * (p as i64).pow(k as u32), e.k, p)
                } else {
                    Exp::new(e.n, e.k + (-k) as u32, p)
                };
                (Key(ne, p), c)
            })
            .collect();
        LambdaElement { p, terms }
    }
    fn lead(&self) -> Option<(Exp, u32)> {
        self.terms.iter().next_back().map(|(k, &c)| (k.0, c))
    }
    fn min_exp(&self) -> Option<Exp> {
        self.terms.keys().next().map(|k| k.0)
    }
    /// Exact quotient, or `None` when `o` does not divide `self`.
    pub fn div_exact(&self, o: &LambdaElement) -> Option<LambdaElement> {
        let (lb, cb) = o.lead()?;
        let p = self.p;
        let cb_inv = (1..p).find(|&x| x * cb % p == 1).unwrap();
        let mut rem = self.clone();
        let mut q = LambdaElement::zero(p);
        let (ma, mb) = match (self.min_exp(), o.min_exp()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Some(q),
        };
        let floor = ma.add(mb.neg(), p);
        while let Some((la, ca)) = rem.lead() {
            let qe = la.add(lb.neg(), p);
            if qe.cmp_val(floor, p) == std::cmp::Ordering::Less {
                return None;
            }
            let qc = ca * cb_inv % p;
            let t = LambdaElement::monomial(p, qc, qe);
            rem = rem.sub(&t.mul(o));
            q = q.add(&t);
        }
        Some(q)
    }
    pub fn to_json(&self) -> serde_json::Value {
        let terms = self.terms().map(|(e, c)| TermJson { num: e.n, pow: e.k, coeff: c }).collect();
        serde_json::to_value(LambdaJson { p: self.p, terms }).unwrap()
    }
    pub fn from_json(v: &serde_json::Value) -> Result<LambdaElement> {
        let j: LambdaJson = serde_json::from_value(v.clone()).map_err(|e| Error::user(e.to_string()))?;
        let mut x = LambdaElement::zero(j.p);
        for t in j.terms {
            x.insert_add(Exp::new(t.num, t.pow, j.p), t.coeff % j.p);
        }
        Ok(x)
    }
}

/// Quotient of two λ-polynomials; equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct LambdaRational {
    pub num: LambdaElement,
    pub den: LambdaElement,
}

impl PartialEq for LambdaRational {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl LambdaRational {
    pub fn new(num: LambdaElement, den: LambdaElement) -> Result<LambdaRational> {
        if den.is_zero() {
            return Err(Error::user("zero denominator"));
        }
        Ok(LambdaRational { num, den }.tidy())
    }
    pub fn from_elem(x: LambdaElement) -> LambdaRational {
        let p = x.p();
        LambdaRational { num: x, den: LambdaElement::one(p) }
    }
    /// Cheap partial reduction: monomial denominators are folded into the numerator.
    fn tidy(self) -> LambdaRational {
        if self.den.num_terms() == 1 {
            let (e, c) = self.den.lead().unwrap();
            let p = self.num.p();
            let cinv = (1..p).find(|&x| x * c % p == 1).unwrap();
            let inv = LambdaElement::monomial(p, cinv, e.neg());
            return LambdaRational { num: self.num.mul(&inv), den: LambdaElement::one(p) };
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            let p = q.p();
            return LambdaRational { num: q, den: LambdaElement::one(p) };
        }
        self
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn add(&self, o: &LambdaRational) -> LambdaRational {
        if self.den == o.den {
            return LambdaRational { num: self.num.add(&o.num), den: self.den.clone() }.tidy();
        }
        LambdaRational { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.tidy()
    }
    pub fn neg(&self) -> LambdaRational {
        LambdaRational { num: self.num.neg(), den: self.den.clone() }
    }
    pub fn sub(&self, o: &LambdaRational) -> LambdaRational {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &LambdaRational) -> LambdaRational {
        LambdaRational { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.tidy()
    }
    pub fn div(&self, o: &LambdaRational) -> Result<LambdaRational> {
        if o.is_zero() {
            return Err(Error::user("division by zero"));
        }
        Ok(LambdaRational { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.tidy())
    }
    pub fn frobenius(&self, k: i64) -> LambdaRational {
        LambdaRational { num: self.num.frobenius(k), den: self.den.frobenius(k) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_root() {
        let x = LambdaElement::lambda_pow(3, 1, 1);
        assert_eq!(x.frobenius(1), LambdaElement::lambda_pow(3, 1, 0));
        assert_eq!(x.frobenius(1).frobenius(-1), x);
    }

    #[test]
    fn canonical_exponents() {
        assert_eq!(LambdaElement::lambda_pow(2, 4, 2), LambdaElement::lambda_pow(2, 1, 0));
        let a = LambdaElement::lambda_pow(2, 1, 1);
        assert_eq!(a.mul(&a), LambdaElement::lambda_pow(2, 1, 0));
    }

    #[test]
    fn exact_division() {
        let p = 3;
        let a = LambdaElement::one(p).add(&LambdaElement::lambda_pow(p, 1, 2));
        let b = LambdaElement::lambda_pow(p, 2, 1).sub(&LambdaElement::constant(p, 1));
        let c = a.mul(&b);
        assert_eq!(c.div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&b).is_none());
    }

    #[test]
    fn rational_equality_by_cross_multiplication() {
        let p = 2;
        let a = LambdaElement::one(p).add(&LambdaElement::lambda_pow(p, 1, 1));
        let b = LambdaElement::one(p).add(&LambdaElement::lambda_pow(p, 3, 1));
        let r1 = LambdaRational::new(a.clone(), b.clone()).unwrap();
        let r2 = LambdaRational::new(a.mul(&a), b.mul(&a)).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn json_roundtrip() {
        let x = LambdaElement::lambda_pow(2, 3, 2).add(&LambdaElement::one(2));
        assert_eq!(LambdaElement::from_json(&x.to_json()).unwrap(), x);
    }
}
