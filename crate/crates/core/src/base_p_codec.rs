//! Base-p words for Z≥0 and Z[1/p]≥0, the bijections |·| and ‖·‖, reversal,
//! and least-significant-digit-first affine transducers.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sym {
    Digit(u32),
    Radix,
}

impl Sym {
    /// Alphabet index: digits map to themselves, the radix mark to p.
    pub fn index(self, p: u32) -> usize {
        match self {
            Sym::Digit(d) => d as usize,
            Sym::Radix => p as usize,
        }
    }
    pub fn from_index(i: usize, p: u32) -> Sym {
        if i == p as usize {
            Sym::Radix
        } else {
            Sym::Digit(i as u32)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    pub p: u32,
    pub syms: Vec<Sym>,
}

/// n / p^k with k = 0 or p ∤ n. The derived order is structural; use `cmp_val` for values.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct PAdicNonneg {
    pub n: u128,
    pub k: u32,
}

impl PAdicNonneg {
    pub fn new(mut n: u128, mut k: u32, p: u32) -> PAdicNonneg {
        while k > 0 && n.is_multiple_of(p as u128) {
            n /= p as u128;
            k -= 1;
        }
        if n == 0 {
            k = 0;
        }
        PAdicNonneg { n, k }
    }
    pub fn int(n: u128) -> PAdicNonneg {
        PAdicNonneg { n, k: 0 }
    }
    /// Exact value as (numerator, denominator).
    pub fn ratio(&self, p: u32) -> (u128, u128) {
        (self.n, (p as u128).pow(self.k))
    }
    pub fn cmp_val(&self, o: &PAdicNonneg, p: u32) -> Ordering {
        let k = self.k.max(o.k);
        let a = self.n * (p as u128).pow(k - self.k);
        let b = o.n * (p as u128).pow(k - o.k);
        a.cmp(&b)
    }
}

impl Word {
    pub fn empty(p: u32) -> Word {
        Word { p, syms: Vec::new() }
    }
    pub fn from_digits(p: u32, digits: &[u32]) -> Word {
        Word { p, syms: digits.iter().map(|&d| Sym::Digit(d)).collect() }
    }
    pub fn len(&self) -> usize {
        self.syms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }
    pub fn radix_pos(&self) -> Option<usize> {
        self.syms.iter().position(|s| *s == Sym::Radix)
    }
    /// Alphabet indices, radix mark as p.
    pub fn indices(&self) -> Vec<usize> {
        self.syms.iter().map(|s| s.index(self.p)).collect()
    }
    /// Digits before and after the radix mark (all digits count as integer part when absent).
    pub fn split(&self) -> (Vec<u32>, Vec<u32>) {
        let digs = |s: &[Sym]| s.iter().filter_map(|x| if let Sym::Digit(d) = x { Some(*d) } else { None }).collect();
        match self.radix_pos() {
            Some(i) => (digs(&self.syms[..i]), digs(&self.syms[i + 1..])),
            None => (digs(&self.syms), Vec::new()),
        }
    }
    pub fn join(p: u32, int: &[u32], frac: &[u32]) -> Word {
        let mut syms: Vec<Sym> = int.iter().map(|&d| Sym::Digit(d)).collect();
        syms.push(Sym::Radix);
        syms.extend(frac.iter().map(|&d| Sym::Digit(d)));
        Word { p, syms }
    }

    /// Parses digits, '.', and bracketed digits such as "[11]".
    pub fn parse(text: &str, p: u32) -> Result<Word> {
        let mut syms = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some((pos, c)) = chars.next() {
            let sym = match c {
                '.' => Sym::Radix,
                '0'..='9' => Sym::Digit(c as u32 - '0' as u32),
                '[' => {
                    let mut num = String::new();
                    loop {
                        match chars.next() {
                            Some((_, ']')) => break,
                            Some((_, d)) if d.is_ascii_digit() => num.push(d),
                            _ => return Err(Error::user(format!("bad bracketed digit at position {}", pos))),
                        }
                    }
                    Sym::Digit(num.parse().map_err(|_| Error::user(format!("bad bracketed digit at position {}", pos)))?)
                }
                _ => return Err(Error::user(format!("unexpected character {:?} at position {}", c, pos))),
            };
            if let Sym::Digit(d) = sym {
                if d >= p {
                    return Err(Error::user(format!("digit {} out of range for p = {} at position {}", d, p, pos)));
                }
            }
            syms.push(sym);
        }
        let w = Word { p, syms };
        if w.syms.iter().filter(|s| **s == Sym::Radix).count() > 1 {
            return Err(Error::user("more than one radix mark"));
        }
        Ok(w)
    }

    pub fn reverse(&self) -> Word {
        let mut syms = self.syms.clone();
        syms.reverse();
        Word { p: self.p, syms }
    }

    /// Membership in L_p (exactly one mark, no leading integer zero, no trailing fractional zero).
    pub fn check_canonical_frac(&self) -> Result<()> {
        let Some(r) = self.radix_pos() else {
            return Err(Error::user(format!("missing radix mark at position {}", self.len())));
        };
        if r > 0 && self.syms[0] == Sym::Digit(0) {
            return Err(Error::user("leading zero at position 0"));
        }
        if r + 1 < self.len() && *self.syms.last().unwrap() == Sym::Digit(0) {
            return Err(Error::user(format!("trailing zero at position {}", self.len() - 1)));
        }
        Ok(())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syms {
            match s {
                Sym::Radix => write!(f, ".")?,
                Sym::Digit(d) if *d < 10 => write!(f, "{}", d)?,
                Sym::Digit(d) => write!(f, "[{}]", d)?,
            }
        }
        Ok(())
    }
}

/// Base-p digits of m, most significant first; 0 gives the empty list.
pub fn int_digits(mut m: u128, p: u32) -> Vec<u32> {
    let mut d = Vec::new();
    while m > 0 {
        d.push((m % p as u128) as u32);
        m /= p as u128;
    }
    d.reverse();
    d
}

pub fn digits_value(digits: &[u32], p: u32) -> u128 {
    digits.iter().fold(0u128, |acc, &d| acc * p as u128 + d as u128)
}

pub fn encode_int(m: u128, p: u32) -> Word {
    Word::from_digits(p, &int_digits(m, p))
}

pub fn decode_int(s: &Word) -> Result<u128> {
    if let Some(i) = s.radix_pos() {
        return Err(Error::user(format!("radix mark at position {} in integer word", i)));
    }
    if s.syms.first() == Some(&Sym::Digit(0)) {
        return Err(Error::user("leading zero at position 0"));
    }
    Ok(digits_value(&s.split().0, s.p))
}

pub fn encode_frac(r: PAdicNonneg, p: u32) -> Word {
    let r = PAdicNonneg::new(r.n, r.k, p);
    let pk = (p as u128).pow(r.k);
    let (int, frac) = r.n.div_rem(&pk);
    let mut fd = int_digits(frac, p);
    while fd.len() < r.k as usize {
        fd.insert(0, 0);
    }
    Word::join(p, &int_digits(int, p), &fd)
}

pub fn decode_frac(s: &Word) -> Result<PAdicNonneg> {
    s.check_canonical_frac()?;
    let (i, f) = s.split();
    let k = f.len() as u32;
    let n = digits_value(&i, s.p) * (s.p as u128).pow(k) + digits_value(&f, s.p);
    Ok(PAdicNonneg::new(n, k, s.p))
}

/// Value of any word with at most one mark, ignoring canonical form.
pub fn raw_value(s: &Word) -> PAdicNonneg {
    let (i, f) = s.split();
    let k = f.len() as u32;
    PAdicNonneg::new(digits_value(&i, s.p) * (s.p as u128).pow(k) + digits_value(&f, s.p), k, s.p)
}

/// Strips leading integer zeros and trailing fractional zeros; adds a mark when absent.
pub fn canonicalize(s: &Word) -> Word {
    let (mut i, mut f) = s.split();
    while i.first() == Some(&0) {
        i.remove(0);
    }
    while f.last() == Some(&0) {
        f.pop();
    }
    Word::join(s.p, &i, &f)
}

pub fn reverse(s: &Word) -> Word {
    s.reverse()
}

/// Transducer for v ↦ a·v + b reading reversed words (least significant digit first).
/// States are carries; b is injected when the radix mark is read.
#[derive(Clone, Debug)]
pub struct AffineTransducer {
    pub p: u32,
    pub a: u64,
    pub b: u64,
}

impl AffineTransducer {
    pub fn new(p: u32, a: u64, b: u64) -> AffineTransducer {
        assert!(a > 0);
        AffineTransducer { p, a, b }
    }
    /// One step: (carry, symbol) → (carry, emitted symbol).
    pub fn step(&self, carry: u64, s: Sym) -> (u64, Sym) {
        match s {
            Sym::Radix => (carry + self.b, Sym::Radix),
            Sym::Digit(d) => {
                let t = self.a * d as u64 + carry;
                (t / self.p as u64, Sym::Digit((t % self.p as u64) as u32))
            }
        }
    }
    /// Digits still owed once input ends (least significant first).
    pub fn flush(&self, mut carry: u64) -> Vec<Sym> {
        let mut out = Vec::new();
        while carry > 0 {
            out.push(Sym::Digit((carry % self.p as u64) as u32));
            carry /= self.p as u64;
        }
        out
    }
    /// Set of carries reachable from 0 on any input.
    pub fn carry_states(&self) -> Vec<u64> {
        let mut seen = std::collections::BTreeSet::new();
        let mut stack = vec![0u64];
        // Carries never exceed a + b; search is finite.
        while let Some(c) = stack.pop() {
            if !seen.insert(c) {
                continue;
            }
            for d in 0..self.p {
                stack.push(self.step(c, Sym::Digit(d)).0);
            }
            if c < self.a + self.b {
                let r = self.step(c, Sym::Radix).0;
                if r <= self.a + self.b {
                    stack.push(r);
                }
            }
        }
        seen.into_iter().collect()
    }
    /// Applies to a reversed word; returns the reversed canonical word of a·v + b.
    pub fn apply(&self, rev_word: &Word) -> Word {
        let mut syms = rev_word.syms.clone();
        if !syms.contains(&Sym::Radix) {
            syms.insert(0, Sym::Radix);
        }
        let mut carry = 0;
        let mut out = Vec::with_capacity(syms.len() + 4);
        for s in syms {
            let (c, o) = self.step(carry, s);
            carry = c;
            out.push(o);
        }
        out.extend(self.flush(carry));
        let w = Word { p: self.p, syms: out }.reverse();
        canonicalize(&w).reverse()
    }
}

pub fn affine_transducer(p: u32, a: u64, b: u64) -> AffineTransducer {
    AffineTransducer::new(p, a, b)
}
