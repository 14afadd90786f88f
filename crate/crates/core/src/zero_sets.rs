//! Zero-set automata for linear recurrent sequences over F_q and for the
//! coefficients of automatic series.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::base_p_codec::int_digits;
use crate::coeff_fields::{Field, FqMat, Poly};
use crate::dfao_engine::{canonical_lp, digit_alphabet, Dfao};
use crate::error::{Error, Result};
use crate::semilinear::{pad_normalize, relation_dfao, STATE_CAP};
use crate::series_core::QuasiAutomaticSeries;

/// a_n = u·Mⁿ·v with M of size d×d.
#[derive(Clone, Debug)]
pub struct LinearRecurrence {
    pub field: Field,
    pub m: FqMat,
    pub u: Vec<u32>,
    pub v: Vec<u32>,
}

impl LinearRecurrence {
    pub fn new(field: Field, m: FqMat, u: Vec<u32>, v: Vec<u32>) -> Result<LinearRecurrence> {
        let d = m.rows;
        if m.cols != d || u.len() != d || v.len() != d || d == 0 {
            return Err(Error::user("recurrence needs a square matrix and vectors of matching size"));
        }
        if m.data.iter().chain(&u).chain(&v).any(|&c| c >= field.q()) {
            return Err(Error::user("recurrence entry outside the field"));
        }
        Ok(LinearRecurrence { field, m, u, v })
    }

    /// Companion form of a_{n+d} = c₀a_n + ⋯ + c_{d−1}a_{n+d−1} with initial terms.
    pub fn from_recurrence(field: Field, coeffs: &[u32], init: &[u32]) -> Result<LinearRecurrence> {
        let d = coeffs.len();
        if d == 0 || init.len() != d {
            return Err(Error::user("need exactly one initial term per recurrence coefficient"));
        }
        let mut m = FqMat::zeros(d, d);
        for i in 0..d - 1 {
            m.set(i, i + 1, 1);
        }
        for (j, &c) in coeffs.iter().enumerate() {
            m.set(d - 1, j, c);
        }
        let mut u = vec![0; d];
        u[0] = 1;
        LinearRecurrence::new(field, m, u, init.to_vec())
    }

    fn value(&self, a: &FqMat) -> u32 {
        let f = &self.field;
        let av = a.mul_vec(&self.v, f);
        self.u.iter().zip(&av).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
    }

    /// Direct evaluation by repeated multiplication; the oracle for the automaton.
    pub fn terms(&self, count: usize) -> Vec<u32> {
        let f = &self.field;
        let mut w = self.v.clone();
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(self.u.iter().zip(&w).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y))));
            w = self.m.mul_vec(&w, f);
        }
        out
    }
}

fn mat_pow(a: &FqMat, mut e: u64, f: &Field) -> FqMat {
    let mut r = FqMat::identity(a.rows);
    let mut b = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            r = r.mul(&b, f);
        }
        b = b.mul(&b, f);
        e >>= 1;
    }
    r
}

/// Automaton over plain base-p digits (MSB first) accepting n iff a_n = 0.
/// States are the matrices M^{prefix value}; each digit maps A to A^p·M^digit.
pub fn lrs_zero_dfao(rec: &LinearRecurrence, p: u32, cap: usize) -> Result<Dfao> {
    let f = &rec.field;
    if f.p() != p {
        return Err(Error::user("digit base must equal the field characteristic"));
    }
    let digit_pows: Vec<FqMat> = (0..p).map(|d| mat_pow(&rec.m, d as u64, f)).collect();
    let id = FqMat::identity(rec.m.rows);
    let mut ids: HashMap<FqMat, u32> = HashMap::new();
    ids.insert(id.clone(), 0);
    let mut states = vec![id];
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let ap = mat_pow(&states[i], p as u64, f);
        let mut row = Vec::with_capacity(p as usize);
        for dp in &digit_pows {
            let next = ap.mul(dp, f);
            let n = states.len() as u32;
            let id = *ids.entry(next.clone()).or_insert_with(|| {
                states.push(next);
                n
            });
            row.push(id);
        }
        if states.len() > cap {
            return Err(Error::resource("matrix monoid of the recurrence", cap));
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states.iter().map(|a| (rec.value(a) == 0) as u32).collect();
    Ok(Dfao::new(p, digit_alphabet(p, false), delta, 0, outputs)?.minimize())
}

/// Zero set of x on Z[1/p]≥0, as an automaton on canonical words.
pub fn algebraic_zero_dfao(x: &QuasiAutomaticSeries) -> Result<Dfao> {
    let f = x.field();
    let coeff = x.inner.coeff_dfao()?;
    // h(s) = X(a·s + b) gives the coefficient of t^s
    let h = if x.a == 1 && x.b == 0 {
        coeff
    } else {
        relation_dfao(&[pad_normalize(&coeff)?], x.a as i64, &[1], -(x.b as i64), f, STATE_CAP)?
    };
    Ok(h.product(&canonical_lp(x.p()), |c, ok| (ok != 0 && c == 0) as u32)?.minimize())
}

/// Accepts 10* over plain digits: the integers 1, p, p², …
pub fn powers_of_p_dfao(p: u32) -> Dfao {
    let r = p as usize;
    let mut delta = vec![vec![2u32; r]; 3];
    delta[0][1] = 1;
    delta[1][0] = 1;
    Dfao::new(p, digit_alphabet(p, false), delta, 0, vec![0, 1, 0]).expect("well-formed automaton")
}

#[derive(Clone, Debug)]
pub struct BinomialGapReport {
    pub p: u32,
    pub bound: u64,
    pub zero_set: Vec<u64>,
    pub dfao: Dfao,
}

impl BinomialGapReport {
    pub fn to_json(&self) -> Value {
        json!({ "p": self.p, "bound": self.bound, "zero_set": self.zero_set, "language": "10*", "dfao": self.dfao.to_json() })
    }
}

/// Zero set of (1+t)ⁿ − 1 − tⁿ over F_p for n < bound, by polynomial
/// arithmetic, checked against {1, p, p², …} and against 10* on encodings.
pub fn binomial_gap_zero_set(p: u32, bound: u64) -> Result<BinomialGapReport> {
    let f = Field::default_for(p, 1)?;
    if bound > 1 << 14 {
        return Err(Error::user("binomial gap bound is capped at 16384"));
    }
    let one_plus_t = Poly::new(vec![1, 1]);
    let mut pw = Poly::one();
    let mut zero_set = Vec::new();
    for n in 0..bound {
        let g = pw.sub(&Poly::one(), &f).sub(&Poly::monomial(1, n as usize), &f);
        if g.is_zero() {
            zero_set.push(n);
        }
        pw = pw.mul(&one_plus_t, &f);
    }
    let expected: Vec<u64> = std::iter::successors(Some(1u64), |&k| Some(k * p as u64)).take_while(|&k| k < bound).collect();
    if zero_set != expected {
        return Err(Error::verification(format!("zero set {:?} differs from the powers of {}", zero_set, p)));
    }
    let dfao = powers_of_p_dfao(p);
    for n in 0..bound {
        let w: Vec<usize> = int_digits(n as u128, p).into_iter().map(|d| d as usize).collect();
        if dfao.accepts(&w) != zero_set.binary_search(&n).is_ok() {
            return Err(Error::verification(format!("10* disagrees with the zero set at n = {}", n)));
        }
    }
    Ok(BinomialGapReport { p, bound, zero_set, dfao })
}

/// Sampled members and non-members of an automaton on plain digits.
pub fn integer_summary(m: &Dfao, limit: u64, show: usize) -> Value {
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    for n in 0..limit {
        let w: Vec<usize> = int_digits(n as u128, m.p).into_iter().map(|d| d as usize).collect();
        let v = if m.accepts(&w) { &mut yes } else { &mut no };
        if v.len() < show {
            v.push(n);
        }
    }
    json!({ "members": yes, "non_members": no })
}
