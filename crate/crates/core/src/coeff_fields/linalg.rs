//! Exact linear algebra: dense matrices over F_q and fraction-free null spaces
//! over integral domains (F_q, F_q[t], λ-polynomials).

use std::fmt;

use super::field::{Field, FqElement};
use super::lambda::{LambdaElement, LambdaRational};
use super::poly::{Poly, RatFn};
use crate::error::{Error, Result};

/// Dense row-major matrix of F_q codes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl fmt::Debug for FqMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[u32]> = (0..self.rows).map(|r| self.row(r)).collect();
        write!(f, "{:?}", rows)
    }
}

impl FqMat {
    pub fn zeros(rows: usize, cols: usize) -> FqMat {
        FqMat { rows, cols, data: vec![0; rows * cols] }
    }
    pub fn identity(n: usize) -> FqMat {
        let mut m = FqMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<u32>>) -> FqMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        FqMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }
    pub fn column(v: &[u32]) -> FqMat {
        FqMat { rows: v.len(), cols: 1, data: v.to_vec() }
    }
    pub fn row_vec(v: &[u32]) -> FqMat {
        FqMat { rows: 1, cols: v.len(), data: v.to_vec() }
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn mul(&self, o: &FqMat, f: &Field) -> FqMat {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch");
        let mut r = FqMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b != 0 {
                        let idx = i * o.cols + j;
                        r.data[idx] = f.add(r.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        r
    }
    pub fn mul_vec(&self, v: &[u32], f: &Field) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for (k, &x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if a != 0 && x != 0 {
                        acc = f.add(acc, f.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }
    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32], f: &Field) -> Vec<u32> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0u32; self.cols];
        for (k, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let a = self.get(k, j);
                if a != 0 {
                    *o = f.add(*o, f.mul(x, a));
                }
            }
        }
        out
    }
    pub fn add(&self, o: &FqMat, f: &Field) -> FqMat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        FqMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect() }
    }
    pub fn scale(&self, c: u32, f: &Field) -> FqMat {
        FqMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }
    pub fn transpose(&self) -> FqMat {
        let mut t = FqMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }
    /// Entrywise φ^k.
    pub fn frob(&self, k: i64, f: &Field) -> FqMat {
        if k.rem_euclid(f.e() as i64) == 0 {
            return self.clone();
        }
        FqMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.frob(a, k)).collect() }
    }
    pub fn kron(&self, o: &FqMat, f: &Field) -> FqMat {
        let mut r = FqMat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        r.set(i * o.rows + k, j * o.cols + l, f.mul(a, o.get(k, l)));
                    }
                }
            }
        }
        r
    }
    /// Block-diagonal sum.
    pub fn direct_sum(&self, o: &FqMat) -> FqMat {
        let mut r = FqMat::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                r.set(i, j, self.get(i, j));
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                r.set(self.rows + i, self.cols + j, o.get(i, j));
            }
        }
        r
    }
    pub fn rank(&self, f: &Field) -> usize {
        rref(self, f).1.len()
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &FqMat, f: &Field) -> (FqMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(piv) = (r..a.rows).find(|&i| a.get(i, c) != 0) else { continue };
        if piv != r {
            for j in 0..a.cols {
                let (x, y) = (a.get(piv, j), a.get(r, j));
                a.set(piv, j, y);
                a.set(r, j, x);
            }
        }
        let inv = f.inv(a.get(r, c)).unwrap();
        for j in 0..a.cols {
            a.set(r, j, f.mul(a.get(r, j), inv));
        }
        for i in 0..a.rows {
            if i == r {
                continue;
            }
            let factor = a.get(i, c);
            if factor == 0 {
                continue;
            }
            for j in 0..a.cols {
                let v = f.sub(a.get(i, j), f.mul(factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Basis of the right null space of a matrix over F_q.
pub fn nullspace_fq(m: &FqMat, f: &Field) -> Vec<Vec<u32>> {
    let (a, pivots) = rref(m, f);
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u32; m.cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(a.get(r, free));
        }
        basis.push(v);
    }
    basis
}

/// Solves A x = b over F_q; returns one solution if consistent.
pub fn solve_fq(a: &FqMat, b: &[u32], f: &Field) -> Option<Vec<u32>> {
    let mut aug = FqMat::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j));
        }
        aug.set(i, a.cols, b[i]);
    }
    let (r, pivots) = rref(&aug, f);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![0u32; a.cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = r.get(row, a.cols);
    }
    Some(x)
}

/// Integral domain with exact division, as needed by fraction-free elimination.
pub trait Domain: Clone + PartialEq + fmt::Debug {
    type Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn sub(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn mul(&self, o: &Self, ctx: &Self::Ctx) -> Self;
    fn div_exact(&self, o: &Self, ctx: &Self::Ctx) -> Option<Self>;
}

impl Domain for FqElement {
    type Ctx = Field;
    fn zero(ctx: &Field) -> Self {
        ctx.elem(0)
    }
    fn one(ctx: &Field) -> Self {
        ctx.elem(1)
    }
    fn is_zero(&self) -> bool {
        self.code == 0
    }
    fn add(&self, o: &Self, _: &Field) -> Self {
        self.clone() + o.clone()
    }
    fn sub(&self, o: &Self, _: &Field) -> Self {
        self.clone() - o.clone()
    }
    fn mul(&self, o: &Self, _: &Field) -> Self {
        self.clone() * o.clone()
    }
    fn div_exact(&self, o: &Self, _: &Field) -> Option<Self> {
        o.inv().map(|i| self.clone() * i)
    }
}

impl Domain for Poly {
    type Ctx = Field;
    fn zero(_: &Field) -> Self {
        Poly::zero()
    }
    fn one(_: &Field) -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, o: &Self, f: &Field) -> Self {
        Poly::add(self, o, f)
    }
    fn sub(&self, o: &Self, f: &Field) -> Self {
        Poly::sub(self, o, f)
    }
    fn mul(&self, o: &Self, f: &Field) -> Self {
        Poly::mul(self, o, f)
    }
    fn div_exact(&self, o: &Self, f: &Field) -> Option<Self> {
        Poly::div_exact(self, o, f)
    }
}

impl Domain for LambdaElement {
    type Ctx = u32;
    fn zero(p: &u32) -> Self {
        LambdaElement::zero(*p)
    }
    fn one(p: &u32) -> Self {
        LambdaElement::one(*p)
    }
    fn is_zero(&self) -> bool {
        LambdaElement::is_zero(self)
    }
    fn add(&self, o: &Self, _: &u32) -> Self {
        LambdaElement::add(self, o)
    }
    fn sub(&self, o: &Self, _: &u32) -> Self {
        LambdaElement::sub(self, o)
    }
    fn mul(&self, o: &Self, _: &u32) -> Self {
        LambdaElement::mul(self, o)
    }
    fn div_exact(&self, o: &Self, _: &u32) -> Option<Self> {
        LambdaElement::div_exact(self, o)
    }
}

/// Fraction-free Gauss–Jordan elimination (Bareiss). Returns the pivot columns
/// and the reduced matrix, in which every pivot entry equals the last pivot.
pub fn bareiss_rref<D: Domain>(m: &[Vec<D>], ctx: &D::Ctx) -> (Vec<Vec<D>>, Vec<usize>) {
    let mut a: Vec<Vec<D>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut prev = D::one(ctx);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(piv, r);
        let pr = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let factor = row[c].clone();
            for j in 0..cols {
                let v = pr[c].mul(&row[j], ctx).sub(&factor.mul(&pr[j], ctx), ctx);
                row[j] = v.div_exact(&prev, ctx).expect("fraction-free elimination: inexact division");
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Null-space basis over the fraction field of `D`, with entries scaled into `D`.
pub fn nullspace_domain<D: Domain>(m: &[Vec<D>], ctx: &D::Ctx) -> Vec<Vec<D>> {
    let cols = m.first().map_or(0, |r| r.len());
    let (a, pivots) = bareiss_rref(m, ctx);
    let det = match pivots.last() {
        Some(&c) => a[pivots.len() - 1][c].clone(),
        None => D::one(ctx),
    };
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![D::zero(ctx); cols];
        v[free] = det.clone();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = D::zero(ctx).sub(&a[r][free], ctx);
        }
        basis.push(v);
    }
    basis
}

/// Spec-facing null space over F_q; all entries must share one field.
pub fn solve_homogeneous(m: &[Vec<FqElement>]) -> Result<Vec<Vec<FqElement>>> {
    let Some(first) = m.iter().flatten().next() else {
        return Ok(Vec::new());
    };
    let f = first.field.clone();
    if m.iter().flatten().any(|x| x.field != f) {
        return Err(Error::user("matrix entries belong to different fields"));
    }
    let cols = m[0].len();
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::user("ragged matrix"));
    }
    let mat = FqMat::from_rows(m.iter().map(|r| r.iter().map(|x| x.code).collect()).collect());
    Ok(nullspace_fq(&mat, &f).into_iter().map(|v| v.into_iter().map(|c| f.elem(c)).collect()).collect())
}

/// Null space over F_q(t): rows are cleared of denominators, then eliminated over F_q[t].
pub fn solve_homogeneous_ratfn(m: &[Vec<RatFn>], f: &Field) -> Vec<Vec<Poly>> {
    let rows: Vec<Vec<Poly>> = m
        .iter()
        .map(|row| {
            let mut l = Poly::one();
            for x in row {
                let g = l.gcd(&x.den, f);
                l = l.mul(&x.den.div_exact(&g, f).unwrap(), f);
            }
            row.iter().map(|x| x.num.mul(&l.div_exact(&x.den, f).unwrap(), f)).collect()
        })
        .collect();
    nullspace_domain(&rows, f)
}

/// Null space over F_p(λ^{1/p^∞}); denominators are cleared row by row.
pub fn solve_homogeneous_lambda(m: &[Vec<LambdaRational>], p: u32) -> Vec<Vec<LambdaElement>> {
    let rows: Vec<Vec<LambdaElement>> = m
        .iter()
        .map(|row| {
            let mut l = LambdaElement::one(p);
            for x in row {
                l = l.mul(&x.den);
            }
            row.iter().map(|x| x.num.mul(&l.div_exact(&x.den).unwrap())).collect()
        })
        .collect();
    nullspace_domain(&rows, &p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::default_for(2, 1).unwrap()
    }

    #[test]
    fn trivial_nullspaces() {
        let f = f2();
        assert_eq!(nullspace_fq(&FqMat::from_rows(vec![vec![0]]), &f), vec![vec![1]]);
        assert!(nullspace_fq(&FqMat::identity(3), &f).is_empty());
    }

    #[test]
    fn two_by_three_over_f2() {
        let f = f2();
        let m = FqMat::from_rows(vec![vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(nullspace_fq(&m, &f), vec![vec![1, 1, 1]]);
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = Field::default_for(2, 1).unwrap();
        let b = Field::default_for(3, 1).unwrap();
        let m = vec![vec![a.elem(1), b.elem(1)]];
        assert!(solve_homogeneous(&m).is_err());
    }

    #[test]
    fn bareiss_over_polynomials() {
        let f = Field::default_for(3, 1).unwrap();
        // [[t, 1+t], [t^2, t+t^2]] has kernel spanned by (1+t, -t).
        let m = vec![
            vec![Poly::new(vec![0, 1]), Poly::new(vec![1, 1])],
            vec![Poly::new(vec![0, 0, 1]), Poly::new(vec![0, 1, 1])],
        ];
        let ns = nullspace_domain(&m, &f);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        let r0 = m[0][0].mul(&v[0], &f).add(&m[0][1].mul(&v[1], &f), &f);
        assert!(r0.is_zero());
    }

    #[test]
    fn bareiss_matches_field_elimination() {
        let f = Field::default_for(2, 2).unwrap();
        let rows = vec![vec![1, 2, 3, 0], vec![2, 0, 1, 1], vec![3, 2, 2, 1]];
        let m = FqMat::from_rows(rows.clone());
        let a = nullspace_fq(&m, &f);
        let e: Vec<Vec<FqElement>> = rows.iter().map(|r| r.iter().map(|&c| f.elem(c)).collect()).collect();
        let b = nullspace_domain(&e, &f);
        assert_eq!(a.len(), b.len());
    }
}
