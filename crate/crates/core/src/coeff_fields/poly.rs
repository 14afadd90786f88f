//! Univariate polynomials over F_q and the rational function field F_q(t).

use std::fmt;

use super::field::Field;

/// Polynomial in t over F_q, coefficients low degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(pub Vec<u32>);

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.0)
    }
}

impl Poly {
    pub fn new(mut c: Vec<u32>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }
    pub fn one() -> Poly {
        Poly(vec![1])
    }
    pub fn constant(c: u32) -> Poly {
        Poly::new(vec![c])
    }
    pub fn monomial(c: u32, n: usize) -> Poly {
        let mut v = vec![0; n + 1];
        v[n] = c;
        Poly::new(v)
    }
    pub fn t() -> Poly {
        Poly(vec![0, 1])
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }
    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn lead(&self) -> u32 {
        *self.0.last().unwrap_or(&0)
    }
    pub fn coeff(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }
    /// t-adic valuation; `None` for the zero polynomial.
    pub fn val(&self) -> Option<usize> {
        self.0.iter().position(|&c| c != 0)
    }

    pub fn add(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn sub(&self, o: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }
    pub fn neg(&self, f: &Field) -> Poly {
        Poly(self.0.iter().map(|&c| f.neg(c)).collect())
    }
    pub fn scale(&self, c: u32, f: &Field) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|&x| f.mul(x, c)).collect())
    }
    pub fn mul(&self, o: &Poly, f: &Field) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut r = vec![0u32; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                if b != 0 {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        Poly::new(r)
    }
    /// Product truncated modulo t^n.
    pub fn mul_trunc(&self, o: &Poly, n: usize, f: &Field) -> Poly {
        let mut r = vec![0u32; n];
        for (i, &a) in self.0.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate().take(n - i) {
                if b != 0 {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        Poly::new(r)
    }
    pub fn trunc(&self, n: usize) -> Poly {
        Poly::new(self.0.iter().take(n).copied().collect())
    }
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.0);
        Poly(v)
    }
    pub fn divrem(&self, o: &Poly, f: &Field) -> (Poly, Poly) {
        assert!(!o.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let db = o.0.len() - 1;
        if r.len() <= db {
            return (Poly::zero(), self.clone());
        }
        let inv = f.inv(o.lead()).unwrap();
        let mut q = vec![0u32; r.len() - db];
        for i in (db..r.len()).rev() {
            let c = f.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - db] = c;
            for (j, &b) in o.0.iter().enumerate() {
                let idx = i - db + j;
                r[idx] = f.sub(r[idx], f.mul(c, b));
            }
        }
        (Poly::new(q), Poly::new(r))
    }
    pub fn div_exact(&self, o: &Poly, f: &Field) -> Option<Poly> {
        let (q, r) = self.divrem(o, f);
        r.is_zero().then_some(q)
    }
    pub fn monic(&self, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(f.inv(self.lead()).unwrap(), f)
    }
    pub fn gcd(&self, o: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b, f).1;
            a = b;
            b = r;
        }
        a.monic(f)
    }
    pub fn eval(&self, x: u32, f: &Field) -> u32 {
        self.0.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
    pub fn derivative(&self, f: &Field) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, &c)| f.mul(f.from_int(i as i64), c)).collect())
    }
    /// Applies φ^k to every coefficient.
    pub fn map_frob(&self, k: i64, f: &Field) -> Poly {
        Poly(self.0.iter().map(|&c| f.frob(c, k)).collect())
    }
    /// The p^k-th power: coefficients twisted by φ^k and t replaced by t^{p^k}.
    pub fn frob_pow(&self, k: u32, f: &Field) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let step = (f.p() as usize).pow(k);
        let mut v = vec![0u32; (self.0.len() - 1) * step + 1];
        for (i, &c) in self.0.iter().enumerate() {
            v[i * step] = f.frob(c, k as i64);
        }
        Poly(v)
    }
}

/// Element of F_q(t), kept reduced with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly, f: &Field) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.gcd(&den, f);
        let (mut n, mut d) = (num.div_exact(&g, f).unwrap(), den.div_exact(&g, f).unwrap());
        let l = f.inv(d.lead()).unwrap();
        n = n.scale(l, f);
        d = d.scale(l, f);
        RatFn { num: n, den: d }
    }
    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }
    pub fn one() -> RatFn {
        RatFn { num: Poly::one(), den: Poly::one() }
    }
    pub fn from_poly(p: Poly) -> RatFn {
        RatFn { num: p, den: Poly::one() }
    }
    pub fn constant(c: u32) -> RatFn {
        RatFn::from_poly(Poly::constant(c))
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    pub fn add(&self, o: &RatFn, f: &Field) -> RatFn {
        if self.den == o.den {
            return RatFn::new(self.num.add(&o.num, f), self.den.clone(), f);
        }
        RatFn::new(self.num.mul(&o.den, f).add(&o.num.mul(&self.den, f), f), self.den.mul(&o.den, f), f)
    }
    pub fn neg(&self, f: &Field) -> RatFn {
        RatFn { num: self.num.neg(f), den: self.den.clone() }
    }
    pub fn sub(&self, o: &RatFn, f: &Field) -> RatFn {
        self.add(&o.neg(f), f)
    }
    pub fn mul(&self, o: &RatFn, f: &Field) -> RatFn {
        RatFn::new(self.num.mul(&o.num, f), self.den.mul(&o.den, f), f)
    }
    pub fn inv(&self, f: &Field) -> Option<RatFn> {
        (!self.is_zero()).then(|| RatFn::new(self.den.clone(), self.num.clone(), f))
    }
    pub fn div(&self, o: &RatFn, f: &Field) -> RatFn {
        self.mul(&o.inv(f).expect("division by zero rational function"), f)
    }
    pub fn scale(&self, c: u32, f: &Field) -> RatFn {
        RatFn::new(self.num.scale(c, f), self.den.clone(), f)
    }
    /// r(t)^{p^k}.
    pub fn frob_pow(&self, k: u32, f: &Field) -> RatFn {
        RatFn { num: self.num.frob_pow(k, f), den: self.den.frob_pow(k, f) }
    }
    /// Order of vanishing at t = 0 (negative for poles).
    pub fn val(&self) -> Option<i64> {
        let vn = self.num.val()? as i64;
        Some(vn - self.den.val().unwrap() as i64)
    }
    /// Laurent expansion at t = 0: returns (v, c) with r = t^v Σ c_i t^i, for
    /// exponents below `upto` (so c has max(upto - v, 0) entries).
    pub fn laurent(&self, upto: i64, f: &Field) -> (i64, Vec<u32>) {
        if self.is_zero() {
            return (0, Vec::new());
        }
        let vd = self.den.val().unwrap();
        let vn = self.num.val().unwrap();
        let v = vn as i64 - vd as i64;
        let len = (upto - v).max(0) as usize;
        let num = Poly::new(self.num.0[vn..].to_vec());
        let den = Poly::new(self.den.0[vd..].to_vec());
        (v, series_div(&num, &den, len, f))
    }
    pub fn fmt_with(&self, f: &Field) -> String {
        let n = fmt_poly(&self.num, f);
        if self.den.is_one() {
            n
        } else {
            format!("({})/({})", n, fmt_poly(&self.den, f))
        }
    }
}

/// Power-series quotient a / b mod t^n; b must have a nonzero constant term.
pub fn series_div(a: &Poly, b: &Poly, n: usize, f: &Field) -> Vec<u32> {
    let b0inv = f.inv(b.coeff(0)).expect("series_div: non-unit denominator");
    let mut out = vec![0u32; n];
    let mut rem: Vec<u32> = (0..n).map(|i| a.coeff(i)).collect();
    for i in 0..n {
        let c = f.mul(rem[i], b0inv);
        out[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.0.iter().enumerate() {
            if i + j >= n {
                break;
            }
            rem[i + j] = f.sub(rem[i + j], f.mul(c, bj));
        }
    }
    out
}

pub fn fmt_poly(p: &Poly, f: &Field) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (i, &c) in p.0.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let cs = f.fmt_elem(c);
        let mono = match i {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{i}"),
        };
        parts.push(match (cs.as_str(), mono.is_empty()) {
            (_, true) => cs,
            ("1", false) => mono,
            (_, false) => format!("{cs}*{mono}"),
        });
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_roundtrip() {
        let f = Field::default_for(3, 1).unwrap();
        let a = Poly::new(vec![1, 2, 0, 1, 2]);
        let b = Poly::new(vec![2, 1, 1]);
        let (q, r) = a.divrem(&b, &f);
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
        assert!(r.deg().unwrap_or(0) < 2);
    }

    #[test]
    fn rational_reduces() {
        let f = Field::default_for(2, 1).unwrap();
        // (1 + t^2) / (1 + t) = 1 + t over F_2
        let r = RatFn::new(Poly::new(vec![1, 0, 1]), Poly::new(vec![1, 1]), &f);
        assert_eq!(r, RatFn::from_poly(Poly::new(vec![1, 1])));
    }

    #[test]
    fn geometric_expansion() {
        let f = Field::default_for(2, 1).unwrap();
        let r = RatFn::new(Poly::one(), Poly::new(vec![1, 1]), &f);
        let (v, c) = r.laurent(6, &f);
        assert_eq!(v, 0);
        assert_eq!(c, vec![1; 6]);
        let s = RatFn::new(Poly::one(), Poly::new(vec![0, 1, 1]), &f);
        let (v, c) = s.laurent(2, &f);
        assert_eq!(v, -1);
        assert_eq!(c, vec![1, 1, 1]);
    }

    #[test]
    fn frobenius_power() {
        let f = Field::default_for(2, 2).unwrap();
        let g = f.gen();
        let a = Poly::new(vec![g, 1]);
        let sq = a.mul(&a, &f);
        assert_eq!(a.frob_pow(1, &f), sq);
    }
}
