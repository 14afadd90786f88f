//! Semilinear maps v ↦ M·φ^k(v) and digit-indexed families of them.

use serde_json::{json, Value};

use crate::base_p_codec::Word;
use crate::coeff_fields::{Field, FqMat};
use crate::dfao_engine::Dfao;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    pub field: Field,
    pub mat: FqMat,
    pub twist: i64,
}

impl SemilinearMap {
    pub fn new(field: Field, mat: FqMat, twist: i64) -> SemilinearMap {
        assert_eq!(mat.rows, mat.cols, "semilinear maps are square");
        SemilinearMap { field, mat, twist }
    }
    pub fn identity(field: &Field, d: usize) -> SemilinearMap {
        SemilinearMap::new(field.clone(), FqMat::identity(d), 0)
    }
    pub fn dim(&self) -> usize {
        self.mat.rows
    }
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let f = &self.field;
        let w: Vec<u32> = v.iter().map(|&x| f.frob(x, self.twist)).collect();
        self.mat.mul_vec(&w, f)
    }
    /// self ∘ other: apply other first.
    pub fn compose(&self, o: &SemilinearMap) -> SemilinearMap {
        let f = &self.field;
        let m = self.mat.mul(&o.mat.frob(self.twist, f), f);
        SemilinearMap::new(f.clone(), m, self.twist + o.twist)
    }
    /// Adjoint for the standard pairing: ⟨T(f)w, v⟩ = φ^{-k}⟨w, f v⟩.
    pub fn transpose(&self) -> SemilinearMap {
        SemilinearMap::new(self.field.clone(), self.mat.transpose().frob(-self.twist, &self.field), -self.twist)
    }
    /// Equality with twists compared modulo e (φ has order e on F_q).
    pub fn same_as(&self, o: &SemilinearMap) -> bool {
        let e = self.field.e() as i64;
        self.mat == o.mat && (self.twist - o.twist).rem_euclid(e) == 0
    }
    pub fn kron(&self, o: &SemilinearMap) -> Result<SemilinearMap> {
        if self.twist != o.twist {
            return Err(Error::user("tensor product needs matching twists"));
        }
        Ok(SemilinearMap::new(self.field.clone(), self.mat.kron(&o.mat, &self.field), self.twist))
    }
}

/// τ: Σ_p → semilinear maps, all of twist `sign` (±1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedFunction {
    pub field: Field,
    pub dim: usize,
    pub sign: i64,
    pub maps: Vec<FqMat>,
}

impl ComposedFunction {
    pub fn new(field: Field, sign: i64, maps: Vec<FqMat>) -> Result<ComposedFunction> {
        if sign != 1 && sign != -1 {
            return Err(Error::user("twist sign must be +1 or -1"));
        }
        let dim = maps.first().map_or(0, |m| m.rows);
        if maps.is_empty() || maps.iter().any(|m| m.rows != dim || m.cols != dim) {
            return Err(Error::user("digit maps must share one square dimension"));
        }
        Ok(ComposedFunction { field, dim, sign, maps })
    }
    pub fn p(&self) -> u32 {
        self.maps.len() as u32
    }
    pub fn tau(&self, a: u32) -> SemilinearMap {
        SemilinearMap::new(self.field.clone(), self.maps[a as usize].clone(), self.sign)
    }
    /// τ(a₁)∘⋯∘τ(a_n); the empty word gives the identity with twist 0.
    pub fn evaluate(&self, digits: &[u32]) -> SemilinearMap {
        let mut acc = SemilinearMap::identity(&self.field, self.dim);
        for &a in digits {
            acc = acc.compose(&self.tau(a));
        }
        acc
    }
    pub fn evaluate_word(&self, w: &Word) -> Result<SemilinearMap> {
        if w.radix_pos().is_some() {
            return Err(Error::user("composed functions take words without a radix mark"));
        }
        Ok(self.evaluate(&w.split().0))
    }
    /// Applies f(s) to v, innermost (last) digit first.
    pub fn apply(&self, digits: &[u32], v: &[u32]) -> Vec<u32> {
        let mut v = v.to_vec();
        for &a in digits.iter().rev() {
            v = self.tau(a).apply(&v);
        }
        v
    }
    pub fn transpose(&self) -> ComposedFunction {
        let maps = (0..self.p()).map(|a| self.tau(a).transpose().mat).collect();
        ComposedFunction { field: self.field.clone(), dim: self.dim, sign: -self.sign, maps }
    }
    pub fn kron(&self, o: &ComposedFunction) -> Result<ComposedFunction> {
        if self.sign != o.sign || self.p() != o.p() {
            return Err(Error::user("tensor product needs matching twist signs and alphabets"));
        }
        let maps = self.maps.iter().zip(&o.maps).map(|(a, b)| a.kron(b, &self.field)).collect();
        ComposedFunction::new(self.field.clone(), self.sign, maps)
    }
    pub fn direct_sum(&self, o: &ComposedFunction) -> Result<ComposedFunction> {
        if self.sign != o.sign || self.p() != o.p() {
            return Err(Error::user("direct sum needs matching twist signs and alphabets"));
        }
        let maps = self.maps.iter().zip(&o.maps).map(|(a, b)| a.direct_sum(b)).collect();
        ComposedFunction::new(self.field.clone(), self.sign, maps)
    }
    /// Entrywise φ^k on all matrices.
    pub fn frob(&self, k: i64) -> ComposedFunction {
        ComposedFunction { maps: self.maps.iter().map(|m| m.frob(k, &self.field)).collect(), ..self.clone() }
    }
    pub fn to_json(&self) -> Value {
        let digits: serde_json::Map<String, Value> = self.maps.iter().enumerate().map(|(a, m)| (a.to_string(), json!(m.to_rows()))).collect();
        json!({"dim": self.dim, "twist": self.sign, "digits": digits})
    }
    pub fn from_json(v: &Value, field: &Field) -> Result<ComposedFunction> {
        let bad = || Error::user("bad composed-function JSON");
        let sign = v["twist"].as_i64().ok_or_else(bad)?;
        let digits = v["digits"].as_object().ok_or_else(bad)?;
        let mut maps = Vec::new();
        for a in 0..digits.len() {
            let rows: Vec<Vec<u32>> = serde_json::from_value(digits.get(&a.to_string()).ok_or_else(bad)?.clone()).map_err(|_| bad())?;
            let m = FqMat::from_rows(rows);
            if m.data.iter().any(|&x| x >= field.q()) {
                return Err(bad());
            }
            maps.push(m);
        }
        ComposedFunction::new(field.clone(), sign, maps)
    }
}

/// Maps chosen by the prefix class of the digits read so far.
#[derive(Clone, Debug)]
pub struct AutocomposedFunction {
    pub field: Field,
    pub dim: usize,
    pub sign: i64,
    pub partition: Dfao,
    /// maps[class][digit]
    pub maps: Vec<Vec<FqMat>>,
}

impl AutocomposedFunction {
    pub fn new(field: Field, sign: i64, partition: Dfao, maps: Vec<Vec<FqMat>>) -> Result<AutocomposedFunction> {
        if maps.len() != partition.states || maps.iter().any(|r| r.len() != partition.sigma()) {
            return Err(Error::user("need one map per prefix class and digit"));
        }
        let dim = maps[0][0].rows;
        if maps.iter().flatten().any(|m| m.rows != dim || m.cols != dim) {
            return Err(Error::user("maps must share one square dimension"));
        }
        Ok(AutocomposedFunction { field, dim, sign, partition, maps })
    }
    pub fn evaluate(&self, digits: &[u32]) -> SemilinearMap {
        let mut acc = SemilinearMap::identity(&self.field, self.dim);
        let mut q = self.partition.q0;
        for &a in digits {
            acc = acc.compose(&SemilinearMap::new(self.field.clone(), self.maps[q as usize][a as usize].clone(), self.sign));
            q = self.partition.step(q, a as usize);
        }
        acc
    }
    /// (v_q) ↦ (τ(q,a)(v_{qa}))_q on V^{classes}; ι diagonal, π the copy of the empty prefix.
    pub fn flatten(&self) -> PotentiallyComposed {
        let n = self.partition.states;
        let d = self.dim;
        let mut maps = Vec::new();
        for a in 0..self.partition.sigma() {
            let mut m = FqMat::zeros(n * d, n * d);
            for q in 0..n {
                let t = self.partition.step(q as u32, a) as usize;
                let blk = &self.maps[q][a];
                for i in 0..d {
                    for j in 0..d {
                        m.set(q * d + i, t * d + j, blk.get(i, j));
                    }
                }
            }
            maps.push(m);
        }
        let mut iota = FqMat::zeros(n * d, d);
        let mut pi = FqMat::zeros(d, n * d);
        for q in 0..n {
            for i in 0..d {
                iota.set(q * d + i, i, 1);
            }
        }
        let q0 = self.partition.q0 as usize;
        for i in 0..d {
            pi.set(i, q0 * d + i, 1);
        }
        let inner = ComposedFunction { field: self.field.clone(), dim: n * d, sign: self.sign, maps };
        PotentiallyComposed { inner, iota, pi }
    }
}

/// s ↦ π ∘ f′(s) ∘ ι.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentiallyComposed {
    pub inner: ComposedFunction,
    pub iota: FqMat,
    pub pi: FqMat,
}

impl PotentiallyComposed {
    pub fn new(inner: ComposedFunction, iota: FqMat, pi: FqMat) -> Result<PotentiallyComposed> {
        let f = &inner.field;
        if iota.rows != inner.dim || pi.cols != inner.dim || pi.rows != iota.cols {
            return Err(Error::user("dimension mismatch in potentially composed wrapper"));
        }
        if iota.rank(f) != iota.cols || pi.rank(f) != pi.rows {
            return Err(Error::user("embedding must be injective and projection surjective"));
        }
        Ok(PotentiallyComposed { inner, iota, pi })
    }
    pub fn plain(inner: ComposedFunction) -> PotentiallyComposed {
        let d = inner.dim;
        PotentiallyComposed { inner, iota: FqMat::identity(d), pi: FqMat::identity(d) }
    }
    pub fn dim(&self) -> usize {
        self.iota.cols
    }
    pub fn evaluate(&self, digits: &[u32]) -> SemilinearMap {
        let f = &self.inner.field;
        let m = self.inner.evaluate(digits);
        let mat = self.pi.mul(&m.mat, f).mul(&self.iota.frob(m.twist, f), f);
        SemilinearMap::new(f.clone(), mat, m.twist)
    }
    /// s ↦ T(f(rev s)): transposed digit maps, ι and πᵀ swapped.
    pub fn reverse(&self) -> PotentiallyComposed {
        PotentiallyComposed { inner: self.inner.transpose(), iota: self.pi.transpose(), pi: self.iota.transpose() }
    }
    pub fn tensor(&self, o: &PotentiallyComposed) -> Result<PotentiallyComposed> {
        let f = &self.inner.field;
        Ok(PotentiallyComposed { inner: self.inner.kron(&o.inner)?, iota: self.iota.kron(&o.iota, f), pi: self.pi.kron(&o.pi, f) })
    }
}

pub fn transpose(f: &SemilinearMap) -> SemilinearMap {
    f.transpose()
}

pub fn reverse_composed(f: &PotentiallyComposed) -> PotentiallyComposed {
    f.reverse()
}

pub fn tensor(f: &PotentiallyComposed, g: &PotentiallyComposed) -> Result<PotentiallyComposed> {
    f.tensor(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Field {
        Field::default_for(2, 2).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = f4();
        let g = f.gen();
        let c = ComposedFunction::new(f.clone(), 1, vec![FqMat::from_rows(vec![vec![g]]), FqMat::identity(1)]).unwrap();
        let e = c.evaluate(&[]);
        assert_eq!((e.mat.clone(), e.twist), (FqMat::identity(1), 0));
        let e = c.evaluate(&[0, 0]);
        assert_eq!((e.mat.get(0, 0), e.twist), (1, 2));
        assert!(c.evaluate(&[0]).same_as(&c.tau(0)));
    }

    #[test]
    fn transpose_examples() {
        let f = f4();
        let g = f.gen();
        let t = SemilinearMap::new(f.clone(), FqMat::from_rows(vec![vec![g]]), 1).transpose();
        assert_eq!((t.mat.get(0, 0), t.twist), (f.mul(g, g), -1));
        let id = SemilinearMap::identity(&f, 3);
        assert_eq!(id.transpose(), id);
    }

    #[test]
    fn flatten_trivial_partition() {
        let f = f4();
        let part = Dfao::constant(2, crate::dfao_engine::digit_alphabet(2, false), 0);
        let m0 = FqMat::from_rows(vec![vec![f.gen()]]);
        let a = AutocomposedFunction::new(f.clone(), 1, part, vec![vec![m0.clone(), FqMat::identity(1)]]).unwrap();
        let pc = a.flatten();
        assert_eq!(pc.inner.dim, 1);
        assert_eq!(pc.iota, FqMat::identity(1));
        for w in [vec![], vec![0], vec![0, 1, 0]] {
            assert!(pc.evaluate(&w).same_as(&a.evaluate(&w)));
        }
    }
}
