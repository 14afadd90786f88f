//! Minimal semilinear realizations of integer-support data: restrict to the
//! subspace reachable from ι, then quotient by the unobservable subspace.

use super::biauto::{dot, BiautomaticData};
use super::maps::ComposedFunction;
use crate::coeff_fields::linalg::{rref, solve_fq};
use crate::coeff_fields::{Field, FqMat};
use crate::error::{Error, Result};

/// Incrementally grown row basis with a membership test.
struct Span {
    rows: Vec<Vec<u32>>,
    dim: usize,
}

impl Span {
    fn new(dim: usize) -> Span {
        Span { rows: Vec::new(), dim }
    }
    fn try_add(&mut self, v: Vec<u32>, f: &Field) -> bool {
        if v.iter().all(|&x| x == 0) {
            return false;
        }
        let mut m = self.rows.clone();
        m.push(v.clone());
        let mat = FqMat::from_rows(m);
        if rref(&mat, f).1.len() > self.rows.len() {
            self.rows.push(v);
            true
        } else {
            false
        }
    }
    /// Coordinates of v in the basis; v must lie in the span.
    fn coords(&self, v: &[u32], f: &Field) -> Option<Vec<u32>> {
        if self.rows.is_empty() {
            return v.iter().all(|&x| x == 0).then(Vec::new);
        }
        let bt = FqMat::from_rows(self.rows.clone()).transpose();
        debug_assert_eq!(bt.rows, self.dim);
        solve_fq(&bt, v, f)
    }
}

/// Smallest-dimension data with the same integer-word coefficients.
pub fn minimal_integer(x: &BiautomaticData) -> Result<BiautomaticData> {
    if !x.is_integer_support() {
        return Err(Error::user("minimal realization needs integer support"));
    }
    let f = &x.field;
    let p = x.p();
    let d = x.dim();
    // Reachable subspace.
    let mut span = Span::new(d);
    span.try_add(x.iota.clone(), f);
    let mut k = 0;
    while k < span.rows.len() {
        let r = span.rows[k].clone();
        for c in 0..p {
            span.try_add(x.f1.tau(c).apply(&r), f);
        }
        k += 1;
    }
    if span.rows.is_empty() {
        return Ok(BiautomaticData::zero(f, p));
    }
    let m = span.rows.len();
    let coords = |v: &[u32]| span.coords(v, f).ok_or_else(|| Error::verification("reachable subspace not closed"));
    let mut maps = Vec::new();
    for c in 0..p {
        let mut a = FqMat::zeros(m, m);
        for j in 0..m {
            let col = coords(&x.f1.tau(c).apply(&span.rows[j]))?;
            for i in 0..m {
                a.set(i, j, col[i]);
            }
        }
        maps.push(a);
    }
    let iota = coords(&x.iota)?;
    let pi: Vec<u32> = span.rows.iter().map(|b| dot(&x.pi, b, f)).collect();

    // Observable functionals: closure of π under K ↦ φ⁻¹(K·M_c).
    let mut obs = Span::new(m);
    obs.try_add(pi.clone(), f);
    let mut k = 0;
    while k < obs.rows.len() {
        let row = obs.rows[k].clone();
        for mc in &maps {
            let v: Vec<u32> = mc.vec_mul(&row, f).into_iter().map(|z| f.frob(z, -1)).collect();
            obs.try_add(v, f);
        }
        k += 1;
    }
    if obs.rows.is_empty() {
        return Ok(BiautomaticData::zero(f, p));
    }
    let r = obs.rows.len();
    let kmat = FqMat::from_rows(obs.rows.clone());
    let mut new_maps = Vec::new();
    for mc in &maps {
        let mut xm = FqMat::zeros(r, r);
        for i in 0..r {
            let v: Vec<u32> = mc.vec_mul(&obs.rows[i], f).into_iter().map(|z| f.frob(z, -1)).collect();
            let co = obs.coords(&v, f).ok_or_else(|| Error::verification("observable space not closed"))?;
            for j in 0..r {
                xm.set(i, j, f.frob(co[j], 1));
            }
        }
        new_maps.push(xm);
    }
    let pi2 = obs.coords(&pi, f).ok_or_else(|| Error::verification("projection not observable"))?;
    let iota2 = kmat.mul_vec(&iota, f);
    BiautomaticData::integer(f.clone(), iota2, pi2, ComposedFunction::new(f.clone(), 1, new_maps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_p_codec::PAdicNonneg;

    #[test]
    fn redundant_copy_collapses() {
        let f = Field::default_for(2, 1).unwrap();
        let m0 = FqMat::identity(2);
        let m1 = FqMat::from_rows(vec![vec![0, 1], vec![0, 0]]);
        let f1 = ComposedFunction::new(f.clone(), 1, vec![m0, m1]).unwrap();
        let x = BiautomaticData::integer(f.clone(), vec![0, 1], vec![1, 0], f1).unwrap();
        let doubled = x.direct_sum(&x).unwrap().direct_sum(&x).unwrap();
        let y = minimal_integer(&doubled).unwrap();
        assert_eq!(y.dim(), 2);
        for n in 0..200u128 {
            assert_eq!(y.coeff(PAdicNonneg::int(n)), doubled.coeff(PAdicNonneg::int(n)));
        }
    }
}
