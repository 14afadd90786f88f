//! Biautomatic data (V′, ι, π, f₁, f₂) and the bridge to automata.
//!
//! The coefficient at s₁.s₂ is π·f₁(rev s₁)(f₂(s₂)(ι)). Concretely, starting
//! from v = ι, fractional digits are consumed last to first by v ← N_b·φ⁻¹(v),
//! then integer digits most significant first by v ← M_c·φ(v), and finally π·v.

use std::collections::HashMap;

use serde_json::{json, Value};

use super::maps::ComposedFunction;
use crate::base_p_codec::{encode_frac, PAdicNonneg, Sym, Word};
use crate::coeff_fields::{Field, FqMat};
use crate::dfao_engine::{digit_alphabet, Dfao};
use crate::error::{Error, Result};

pub const STATE_CAP: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiautomaticData {
    pub field: Field,
    pub iota: Vec<u32>,
    pub pi: Vec<u32>,
    pub f1: ComposedFunction,
    pub f2: ComposedFunction,
}

impl BiautomaticData {
    pub fn new(field: Field, iota: Vec<u32>, pi: Vec<u32>, f1: ComposedFunction, f2: ComposedFunction) -> Result<BiautomaticData> {
        let d = iota.len();
        if d == 0 {
            return Err(Error::user("biautomatic data needs dimension at least 1"));
        }
        if pi.len() != d || f1.dim != d || f2.dim != d {
            return Err(Error::user("biautomatic data dimensions disagree"));
        }
        if f1.sign != 1 || f2.sign != -1 || f1.p() != f2.p() {
            return Err(Error::user("f1 must have twist +1 and f2 twist -1 over one alphabet"));
        }
        if f1.field != field || f2.field != field {
            return Err(Error::user("field mismatch inside biautomatic data"));
        }
        Ok(BiautomaticData { field, iota, pi, f1, f2 })
    }

    pub fn p(&self) -> u32 {
        self.f1.p()
    }
    pub fn dim(&self) -> usize {
        self.iota.len()
    }

    /// Integer support: fractional digit 0 acts as the identity and every
    /// other fractional digit as zero, so trailing zeros are harmless.
    pub fn integer(field: Field, iota: Vec<u32>, pi: Vec<u32>, f1: ComposedFunction) -> Result<BiautomaticData> {
        let d = f1.dim;
        let p = f1.p();
        let mut maps = vec![FqMat::zeros(d, d); p as usize];
        maps[0] = FqMat::identity(d);
        let f2 = ComposedFunction::new(field.clone(), -1, maps)?;
        BiautomaticData::new(field, iota, pi, f1, f2)
    }

    /// The zero series, in dimension 1.
    pub fn zero(field: &Field, p: u32) -> BiautomaticData {
        let f1 = ComposedFunction::new(field.clone(), 1, vec![FqMat::identity(1); p as usize]).unwrap();
        BiautomaticData::integer(field.clone(), vec![1], vec![0], f1).unwrap()
    }

    pub fn frac_vector(&self, frac: &[u32]) -> Vec<u32> {
        self.f2.apply(frac, &self.iota)
    }

    /// Raw evaluation on digit lists, canonical or not.
    pub fn eval_raw(&self, int: &[u32], frac: &[u32]) -> u32 {
        let mut v = self.frac_vector(frac);
        for &c in int {
            v = self.f1.tau(c).apply(&v);
        }
        dot(&self.pi, &v, &self.field)
    }

    pub fn eval_word(&self, w: &Word) -> u32 {
        let (i, f) = w.split();
        self.eval_raw(&i, &f)
    }

    pub fn coeff(&self, j: PAdicNonneg) -> u32 {
        self.eval_word(&encode_frac(j, self.p()))
    }

    pub fn scale(&self, c: u32) -> BiautomaticData {
        let f = &self.field;
        BiautomaticData { pi: self.pi.iter().map(|&x| f.mul(x, c)).collect(), ..self.clone() }
    }

    /// Entrywise φ^k on all data; coefficients become their φ^k images.
    pub fn frob(&self, k: i64) -> BiautomaticData {
        let f = &self.field;
        BiautomaticData {
            field: f.clone(),
            iota: self.iota.iter().map(|&x| f.frob(x, k)).collect(),
            pi: self.pi.iter().map(|&x| f.frob(x, k)).collect(),
            f1: self.f1.frob(k),
            f2: self.f2.frob(k),
        }
    }

    pub fn direct_sum(&self, o: &BiautomaticData) -> Result<BiautomaticData> {
        if self.field != o.field {
            return Err(Error::user("field mismatch"));
        }
        let cat = |a: &[u32], b: &[u32]| a.iter().chain(b).copied().collect::<Vec<_>>();
        BiautomaticData::new(self.field.clone(), cat(&self.iota, &o.iota), cat(&self.pi, &o.pi), self.f1.direct_sum(&o.f1)?, self.f2.direct_sum(&o.f2)?)
    }

    pub fn tensor(&self, o: &BiautomaticData) -> Result<BiautomaticData> {
        if self.field != o.field {
            return Err(Error::user("field mismatch"));
        }
        let f = &self.field;
        let kv = |a: &[u32], b: &[u32]| a.iter().flat_map(|&x| b.iter().map(move |&y| f.mul(x, y))).collect::<Vec<_>>();
        BiautomaticData::new(f.clone(), kv(&self.iota, &o.iota), kv(&self.pi, &o.pi), self.f1.kron(&o.f1)?, self.f2.kron(&o.f2)?)
    }

    /// Nonzero fractional digits act as zero, so every canonical word with a
    /// fractional part has coefficient 0.
    pub fn is_integer_support(&self) -> bool {
        (1..self.p()).all(|b| self.f2.maps[b as usize].is_zero())
    }

    /// Vectors reachable from ι under the fractional maps, with their transition table.
    pub fn frac_orbit(&self, cap: usize) -> Result<(Vec<Vec<u32>>, Vec<Vec<u32>>)> {
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut vecs = vec![self.iota.clone()];
        ids.insert(self.iota.clone(), 0);
        let mut table = Vec::new();
        let mut i = 0;
        while i < vecs.len() {
            let mut row = Vec::new();
            for b in 0..self.p() {
                let w = self.f2.tau(b).apply(&vecs[i]);
                let id = match ids.get(&w) {
                    Some(&id) => id,
                    None => {
                        if vecs.len() >= cap {
                            return Err(Error::resource("fractional orbit", cap));
                        }
                        ids.insert(w.clone(), vecs.len() as u32);
                        vecs.push(w);
                        vecs.len() as u32 - 1
                    }
                };
                row.push(id);
            }
            table.push(row);
            i += 1;
        }
        Ok((vecs, table))
    }

    /// Automaton over digits and the radix mark reproducing eval_raw on words
    /// with one mark (0 on words without exactly one mark).
    pub fn to_dfao(&self, cap: usize) -> Result<Dfao> {
        let p = self.p();
        let f = &self.field;
        let (u, utab) = self.frac_orbit(cap)?;
        let nu = u.len();
        let d = self.dim();
        #[derive(Clone, PartialEq, Eq, Hash)]
        enum St {
            Int(Vec<u32>),
            Frac(Vec<u32>),
            Dead,
        }
        let start = St::Int(u.concat());
        let mut ids: HashMap<St, u32> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut states = vec![start];
        let mut delta: Vec<Vec<u32>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let mut row = Vec::with_capacity(p as usize + 1);
            for a in 0..=p {
                let next = match &states[i] {
                    St::Int(tuple) if a < p => {
                        let tau = self.f1.tau(a);
                        St::Int(tuple.chunks(d).flat_map(|w| tau.apply(w)).collect())
                    }
                    St::Int(tuple) => St::Frac((0..nu).map(|k| dot(&self.pi, &tuple[k * d..(k + 1) * d], f)).collect()),
                    St::Frac(g) if a < p => St::Frac((0..nu).map(|k| g[utab[k][a as usize] as usize]).collect()),
                    _ => St::Dead,
                };
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        if states.len() >= cap {
                            return Err(Error::resource("coefficient automaton states", cap));
                        }
                        ids.insert(next.clone(), states.len() as u32);
                        states.push(next);
                        states.len() as u32 - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let outputs = states.iter().map(|s| if let St::Frac(g) = s { g[0] } else { 0 }).collect();
        Ok(Dfao { p, alphabet: digit_alphabet(p, true), states: states.len(), delta, q0: 0, outputs }.minimize())
    }

    /// Integer-word automaton (digits only, most significant first); states are
    /// the vectors f₁(·)(ι), so there are at most q^d of them.
    pub fn integer_dfao(&self, cap: usize) -> Result<Dfao> {
        let p = self.p();
        let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
        ids.insert(self.iota.clone(), 0);
        let mut vecs = vec![self.iota.clone()];
        let mut delta = Vec::new();
        let mut i = 0;
        while i < vecs.len() {
            let mut row = Vec::new();
            for c in 0..p {
                let w = self.f1.tau(c).apply(&vecs[i]);
                let id = match ids.get(&w) {
                    Some(&id) => id,
                    None => {
                        if vecs.len() >= cap {
                            return Err(Error::resource("integer automaton states", cap));
                        }
                        ids.insert(w.clone(), vecs.len() as u32);
                        vecs.push(w);
                        vecs.len() as u32 - 1
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let outputs = vecs.iter().map(|v| dot(&self.pi, v, &self.field)).collect();
        Ok(Dfao { p, alphabet: digit_alphabet(p, false), states: vecs.len(), delta, q0: 0, outputs })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "iota": self.iota,
            "pi": self.pi,
            "f1": self.f1.to_json(),
            "f2": self.f2.to_json(),
        })
    }

    pub fn from_json(v: &Value, field: &Field) -> Result<BiautomaticData> {
        let bad = || Error::user("bad series JSON");
        let iota: Vec<u32> = serde_json::from_value(v["iota"].clone()).map_err(|_| bad())?;
        let pi: Vec<u32> = serde_json::from_value(v["pi"].clone()).map_err(|_| bad())?;
        if iota.iter().chain(&pi).any(|&x| x >= field.q()) {
            return Err(bad());
        }
        let f1 = ComposedFunction::from_json(&v["f1"], field)?;
        let f2 = ComposedFunction::from_json(&v["f2"], field)?;
        BiautomaticData::new(field.clone(), iota, pi, f1, f2)
    }
}

pub fn dot(a: &[u32], b: &[u32], f: &Field) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| if x == 0 || y == 0 { acc } else { f.add(acc, f.mul(x, y)) })
}

/// Automaton that answers on padded words (leading integer zeros, trailing
/// fractional zeros) with M's value on the canonical form.
pub fn pad_normalize(m: &Dfao) -> Result<Dfao> {
    let p = m.p;
    if m.sigma() != p as usize + 1 {
        return Err(Error::user("pad_normalize needs digits plus the radix mark"));
    }
    let r = p as usize;
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum St {
        Lead,
        Int(u32),
        Frac(u32, u32),
        Dead,
    }
    let mut ids: HashMap<St, u32> = HashMap::new();
    ids.insert(St::Lead, 0);
    let mut states = vec![St::Lead];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::with_capacity(r + 1);
        for a in 0..=r {
            let next = match states[i] {
                St::Lead if a == 0 => St::Lead,
                St::Lead if a < r => St::Int(m.step(m.q0, a)),
                St::Lead => {
                    let q = m.step(m.q0, r);
                    St::Frac(q, q)
                }
                St::Int(q) if a < r => St::Int(m.step(q, a)),
                St::Int(q) => {
                    let t = m.step(q, r);
                    St::Frac(t, t)
                }
                St::Frac(c, cur) if a == 0 => St::Frac(c, m.step(cur, 0)),
                St::Frac(_, cur) if a < r => {
                    let t = m.step(cur, a);
                    St::Frac(t, t)
                }
                _ => St::Dead,
            };
            let l = states.len() as u32;
            let id = *ids.entry(next).or_insert_with(|| {
                states.push(next);
                l
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states.iter().map(|s| if let St::Frac(c, _) = s { m.outputs[*c as usize] } else { 0 }).collect();
    Ok(Dfao { p, alphabet: m.alphabet.clone(), states: states.len(), delta, q0: 0, outputs }.minimize())
}

/// Biautomatic data realizing a coefficient automaton (given correct on
/// canonical words). The automaton is pad-normalized first, so the data is
/// padding-stable.
pub fn dfao_to_series(m: &Dfao, field: &Field) -> Result<BiautomaticData> {
    let p = m.p;
    let m = pad_normalize(m)?;
    if m.outputs.iter().any(|&o| o >= field.q()) {
        return Err(Error::user("automaton outputs are not field elements"));
    }
    let r = p as usize;
    let n = m.states;
    // Fractional phase: functions h: Q → outputs, h_{bs} = h_s ∘ δ_b.
    let mut hid: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut hs = vec![m.outputs.clone()];
    hid.insert(m.outputs.clone(), 0);
    let mut htab: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < hs.len() {
        let mut row = Vec::new();
        for b in 0..r {
            let nh: Vec<u32> = (0..n).map(|q| hs[i][m.step(q as u32, b) as usize]).collect();
            let l = hs.len();
            let id = *hid.entry(nh.clone()).or_insert_with(|| {
                hs.push(nh);
                l
            });
            row.push(id);
        }
        htab.push(row);
        i += 1;
        if hs.len() > STATE_CAP {
            return Err(Error::resource("fractional function table", STATE_CAP));
        }
    }
    // Integer-phase states reachable by nonempty digit words.
    let mut qint: Vec<u32> = Vec::new();
    let mut qid: HashMap<u32, usize> = HashMap::new();
    let mut stack: Vec<u32> = (0..r).map(|c| m.step(m.q0, c)).collect();
    while let Some(q) = stack.pop() {
        if qid.contains_key(&q) {
            continue;
        }
        qid.insert(q, qint.len());
        qint.push(q);
        for c in 0..r {
            stack.push(m.step(q, c));
        }
    }
    let nh = hs.len();
    let dim = nh + nh * qint.len();
    if dim > STATE_CAP {
        return Err(Error::resource("realization dimension", STATE_CAP));
    }
    let pair = |h: usize, q: u32| nh + h * qint.len() + qid[&q];
    let mut f1 = vec![FqMat::zeros(dim, dim); r];
    let mut f2 = vec![FqMat::zeros(dim, dim); r];
    for h in 0..nh {
        for c in 0..r {
            f1[c].set(pair(h, m.step(m.q0, c)), h, 1);
            f2[c].set(htab[h][c], h, 1);
            for &q in &qint {
                f1[c].set(pair(h, m.step(q, c)), pair(h, q), 1);
            }
        }
    }
    let mut pi = vec![0u32; dim];
    for h in 0..nh {
        pi[h] = hs[h][m.step(m.q0, r) as usize];
        for &q in &qint {
            pi[pair(h, q)] = hs[h][m.step(q, r) as usize];
        }
    }
    let mut iota = vec![0u32; dim];
    iota[0] = 1;
    BiautomaticData::new(
        field.clone(),
        iota,
        pi,
        ComposedFunction::new(field.clone(), 1, f1)?,
        ComposedFunction::new(field.clone(), -1, f2)?,
    )
}

/// Evaluates an automaton over digits plus the radix mark on a word.
pub fn run_sym(m: &Dfao, w: &[Sym]) -> u32 {
    let p = m.p;
    let mut q = m.q0;
    for s in w {
        q = m.step(q, s.index(p));
    }
    m.outputs[q as usize]
}
