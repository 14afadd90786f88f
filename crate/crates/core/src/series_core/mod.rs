//! p-automatic series (biautomatic data) and p-quasi-automatic wrappers with
//! an affine support shift, plus their closure operations.

pub mod build;
pub mod ops;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::base_p_codec::PAdicNonneg;
use crate::coeff_fields::{Field, FieldDesc, FqMat};
use crate::dfao_engine::{canonical_lp, Dfao};
use crate::error::{Error, Result};
use crate::semilinear::{dfao_to_series, pad_normalize, BiautomaticData, ComposedFunction, STATE_CAP};

pub use build::{from_padic, to_padic};
pub use ops::*;

/// Exponents and indices.
pub type Q = Ratio<i128>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomaticSeries {
    pub data: BiautomaticData,
    /// Raw evaluation is insensitive to leading integer and trailing fractional zeros.
    pub padding_stable: bool,
}

impl AutomaticSeries {
    pub fn new(data: BiautomaticData) -> Result<AutomaticSeries> {
        let mut s = AutomaticSeries { data, padding_stable: false };
        s.padding_stable = s.padding_certificate()?;
        Ok(s)
    }
    /// For constructions whose padding stability is known by design.
    pub(crate) fn trusted(data: BiautomaticData) -> AutomaticSeries {
        AutomaticSeries { data, padding_stable: true }
    }
    pub fn field(&self) -> &Field {
        &self.data.field
    }
    pub fn p(&self) -> u32 {
        self.data.p()
    }
    pub fn dim(&self) -> usize {
        self.data.dim()
    }
    pub fn coeff_at(&self, j: PAdicNonneg) -> u32 {
        self.data.coeff(j)
    }
    /// Evaluation on an arbitrary word, including non-canonical ones.
    pub fn eval_raw(&self, int: &[u32], frac: &[u32]) -> u32 {
        self.data.eval_raw(int, frac)
    }
    /// Compares raw evaluation against the canonical-form value on every padded word.
    pub fn padding_certificate(&self) -> Result<bool> {
        let raw = self.data.to_dfao(STATE_CAP)?;
        let canon = pad_normalize(&raw)?;
        raw.equivalent(&canon)
    }
    /// Coefficient automaton on canonical words.
    pub fn coeff_dfao(&self) -> Result<Dfao> {
        let m = self.data.to_dfao(STATE_CAP)?;
        let lp = canonical_lp(self.p());
        Ok(m.product(&lp, |c, ok| if ok != 0 { c } else { 0 })?.minimize())
    }
    pub fn from_dfao(m: &Dfao, field: &Field) -> Result<AutomaticSeries> {
        Ok(AutomaticSeries::trusted(dfao_to_series(m, field)?))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiAutomaticSeries {
    pub a: u64,
    pub b: u64,
    pub inner: AutomaticSeries,
}

impl QuasiAutomaticSeries {
    pub fn new(a: u64, b: u64, inner: AutomaticSeries) -> Result<QuasiAutomaticSeries> {
        if a == 0 {
            return Err(Error::user("support scale a must be positive"));
        }
        Ok(QuasiAutomaticSeries { a, b, inner })
    }
    pub fn plain(inner: AutomaticSeries) -> QuasiAutomaticSeries {
        QuasiAutomaticSeries { a: 1, b: 0, inner }
    }
    pub fn field(&self) -> &Field {
        self.inner.field()
    }
    pub fn p(&self) -> u32 {
        self.inner.p()
    }
    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Inner index a·i + b.
    pub fn inner_index(&self, i: &Q) -> Q {
        i * Q::from(self.a as i128) + Q::from(self.b as i128)
    }
    pub fn outer_index(&self, j: &Q) -> Q {
        (j - Q::from(self.b as i128)) / Q::from(self.a as i128)
    }

    pub fn coeff(&self, i: &Q) -> u32 {
        match to_padic(&self.inner_index(i), self.p()) {
            Some(j) => self.inner.coeff_at(j),
            None => 0,
        }
    }

    pub fn zero(field: &Field, p: u32) -> QuasiAutomaticSeries {
        QuasiAutomaticSeries::plain(AutomaticSeries::trusted(BiautomaticData::zero(field, p)))
    }

    /// Σ_{n≥0} t^n.
    pub fn geometric(field: &Field) -> QuasiAutomaticSeries {
        let p = field.p();
        let f1 = ComposedFunction::new(field.clone(), 1, vec![FqMat::identity(1); p as usize]).unwrap();
        QuasiAutomaticSeries::plain(AutomaticSeries::trusted(BiautomaticData::integer(field.clone(), vec![1], vec![1], f1).unwrap()))
    }

    /// Finitely supported series Σ c·t^e with rational exponents.
    pub fn finite(field: &Field, terms: &[(Q, u32)]) -> Result<QuasiAutomaticSeries> {
        let p = field.p();
        let mut a: u64 = 1;
        for (e, c) in terms {
            if *c >= field.q() {
                return Err(Error::user("coefficient outside the field"));
            }
            let mut d = *e.denom();
            while d % p as i128 == 0 {
                d /= p as i128;
            }
            a = num_integer::lcm(a, d as u64);
        }
        let aq = Q::from(a as i128);
        let minv = terms.iter().filter(|(_, c)| *c != 0).map(|(e, _)| e * aq).fold(Q::zero(), |m, x| if x < m { x } else { m });
        let b = (-minv).ceil().to_integer() as u64;
        let mut map: BTreeMap<PAdicNonneg, u32> = BTreeMap::new();
        for (e, c) in terms {
            let j = to_padic(&(e * aq + Q::from(b as i128)), p).expect("shifted exponent lies in Z[1/p]");
            let x = map.entry(j).or_insert(0);
            *x = field.add(*x, *c);
        }
        map.retain(|_, c| *c != 0);
        let m = build::finite_dfao(p, &map);
        Ok(QuasiAutomaticSeries { a, b, inner: AutomaticSeries::from_dfao(&m, field)? })
    }

    pub fn monomial(field: &Field, c: u32, e: Q) -> Result<QuasiAutomaticSeries> {
        QuasiAutomaticSeries::finite(field, &[(e, c)])
    }

    /// Integer-indexed series from a coefficient automaton over plain digits.
    pub fn from_integer_dfao(m: &Dfao, field: &Field) -> Result<QuasiAutomaticSeries> {
        let p = m.p;
        // Extend to digits plus mark: accept s₁. with empty fractional part.
        let r = p as usize;
        let n = m.states as u32;
        let mut delta: Vec<Vec<u32>> = m.delta.iter().map(|row| {
            let mut row = row.clone();
            row.push(n);
            row
        }).collect();
        delta.push(vec![n + 1; r + 1]);
        delta.push(vec![n + 1; r + 1]);
        let mut outputs = vec![0u32; m.states + 2];
        // state n records the value reached just before the mark
        let mut ext = Dfao { p, alphabet: crate::dfao_engine::digit_alphabet(p, true), states: m.states + 2, delta, q0: m.q0, outputs: outputs.clone() };
        // Split the "after mark" state per integer state so the output is preserved.
        let mut d2 = ext.delta.clone();
        let base = ext.states as u32;
        for q in 0..m.states {
            d2[q][r] = base + q as u32;
            outputs.push(m.outputs[q]);
            d2.push(vec![n + 1; r + 1]);
        }
        ext.delta = d2;
        ext.states = ext.delta.len();
        ext.outputs = outputs;
        QuasiAutomaticSeries::from_coeff_dfao(&ext, field)
    }

    pub fn from_coeff_dfao(m: &Dfao, field: &Field) -> Result<QuasiAutomaticSeries> {
        Ok(QuasiAutomaticSeries::plain(AutomaticSeries::from_dfao(m, field)?))
    }

    /// Support points j/a − b/a of the inner series with j = n/p^k, k ≤ max_k, j ≤ max_j.
    pub fn support_points(&self, max_k: u32, max_j: u128) -> Vec<(Q, u32)> {
        let p = self.p();
        let pk = (p as u128).pow(max_k);
        let mut out = Vec::new();
        for n in 0..=max_j * pk {
            let j = PAdicNonneg::new(n, max_k, p);
            let c = self.inner.coeff_at(j);
            if c != 0 {
                out.push((self.outer_index(&from_padic(j, p)), c));
            }
        }
        out
    }

    /// Plain-text listing of the first support points.
    pub fn debug_dump(&self, n: usize, max_k: u32, max_j: u128) -> String {
        let f = self.field();
        let mut s = String::new();
        for (i, c) in self.support_points(max_k, max_j).into_iter().take(n) {
            let _ = writeln!(s, "{} {}", i, f.fmt_elem(c));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.inner.data.to_json();
        let obj = v.as_object_mut().unwrap();
        obj.insert("field".into(), serde_json::to_value(self.field().desc()).unwrap());
        obj.insert("a".into(), json!(self.a));
        obj.insert("b".into(), json!(self.b));
        obj.insert("padding_stable".into(), json!(self.inner.padding_stable));
        v
    }

    pub fn from_json(v: &Value) -> Result<QuasiAutomaticSeries> {
        let desc: FieldDesc = serde_json::from_value(v["field"].clone()).map_err(|e| Error::user(format!("bad field descriptor: {}", e)))?;
        let field = Field::new(desc)?;
        let data = BiautomaticData::from_json(v, &field)?;
        let a = v["a"].as_u64().unwrap_or(1);
        let b = v["b"].as_u64().unwrap_or(0);
        QuasiAutomaticSeries::new(a, b, AutomaticSeries::new(data)?)
    }
}

/// True when every index in the list has a·i+b ≥ 0 in Z[1/p].
pub fn is_representable(x: &QuasiAutomaticSeries, i: &Q) -> bool {
    let j = x.inner_index(i);
    !j.is_negative() && to_padic(&j, x.p()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn geometric_coefficients() {
        let f = Field::default_for(2, 1).unwrap();
        let g = QuasiAutomaticSeries::geometric(&f);
        assert_eq!(g.coeff(&q(7, 1)), 1);
        assert_eq!(g.coeff(&q(1, 2)), 0);
        assert_eq!(g.coeff(&q(-1, 1)), 0);
        assert!(g.inner.padding_certificate().unwrap());
    }

    #[test]
    fn zero_everywhere() {
        let f = Field::default_for(3, 1).unwrap();
        let z = QuasiAutomaticSeries::zero(&f, 3);
        for n in 0..20 {
            assert_eq!(z.coeff(&q(n, 9)), 0);
        }
    }

    #[test]
    fn finite_with_negative_and_thirds() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::finite(&f, &[(q(-1, 2), 1), (q(1, 3), 1), (q(5, 1), 1)]).unwrap();
        assert_eq!(x.coeff(&q(-1, 2)), 1);
        assert_eq!(x.coeff(&q(1, 3)), 1);
        assert_eq!(x.coeff(&q(5, 1)), 1);
        assert_eq!(x.coeff(&q(1, 2)), 0);
        assert!(x.inner.padding_certificate().unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let f = Field::default_for(2, 2).unwrap();
        let x = QuasiAutomaticSeries::finite(&f, &[(q(3, 4), 2), (q(2, 1), 3)]).unwrap();
        let y = QuasiAutomaticSeries::from_json(&x.to_json()).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn integer_dfao_wrapper() {
        let f = Field::default_for(2, 1).unwrap();
        // parity of the number of ones
        let m = Dfao::new(2, crate::dfao_engine::digit_alphabet(2, false), vec![vec![0, 1], vec![1, 0]], 0, vec![0, 1]).unwrap();
        let x = QuasiAutomaticSeries::from_integer_dfao(&m, &f).unwrap();
        for n in 0..40i128 {
            assert_eq!(x.coeff(&q(n, 1)), n.count_ones() % 2);
        }
        assert_eq!(x.coeff(&q(1, 2)), 0);
    }
}
