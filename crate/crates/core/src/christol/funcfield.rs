//! Exact arithmetic in F_q(t)[y]/(P) and the decimation operators s_i.

use super::{newton_simple, AlgebraicSeriesRep, BiPoly};
use crate::coeff_fields::linalg::solve_fq;
use crate::coeff_fields::{Field, FqMat, Poly, RatFn};
use crate::error::{Error, Result};
use crate::semilinear::{BiautomaticData, ComposedFunction};
use crate::series_core::{frobenius_series, AutomaticSeries, QuasiAutomaticSeries};

pub const ORBIT_CAP: usize = 512;

/// Coordinates in the basis 1, y, …, y^{d−1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FfElem(pub Vec<RatFn>);

impl FfElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug)]
pub struct FunctionField {
    pub field: Field,
    pub d: usize,
    /// y^d = Σ red[l]·y^l.
    red: Vec<RatFn>,
    /// Inverse of the matrix whose column m holds the coordinates of y^{pm}.
    winv: Vec<Vec<RatFn>>,
    dy: FfElem,
}

fn ratfn_derivative(r: &RatFn, f: &Field) -> RatFn {
    let num = r.num.derivative(f).mul(&r.den, f).sub(&r.num.mul(&r.den.derivative(f), f), f);
    RatFn::new(num, r.den.mul(&r.den, f), f)
}

/// Gauss–Jordan inverse over F_q(t).
pub fn ratfn_inverse(m: &[Vec<RatFn>], f: &Field) -> Option<Vec<Vec<RatFn>>> {
    let n = m.len();
    let mut a: Vec<Vec<RatFn>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { RatFn::one() } else { RatFn::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(piv, c);
        let inv = a[c][c].inv(f).unwrap();
        a[c] = a[c].iter().map(|x| x.mul(&inv, f)).collect();
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let k = a[i][c].clone();
                let rc = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&rc) {
                    *x = x.sub(&k.mul(y, f), f);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn mat_vec(m: &[Vec<RatFn>], v: &[RatFn], f: &Field) -> Vec<RatFn> {
    m.iter().map(|row| row.iter().zip(v).fold(RatFn::zero(), |acc, (a, b)| acc.add(&a.mul(b, f), f))).collect()
}

impl FunctionField {
    /// Requires P separable in y of degree ≥ 1.
    pub fn new(poly: &BiPoly, field: &Field) -> Result<FunctionField> {
        let f = field;
        let d = poly.deg_y();
        if d == 0 {
            return Err(Error::user("equation must involve y"));
        }
        let lead = RatFn::from_poly(poly.coeff(d));
        let red = (0..d).map(|l| RatFn::from_poly(poly.coeff(l)).neg(f).div(&lead, f)).collect();
        let mut ff = FunctionField { field: f.clone(), d, red, winv: Vec::new(), dy: FfElem(Vec::new()) };
        let p = f.p() as usize;
        let yp = ff.pow(&ff.y(), p);
        let mut cols = vec![ff.one()];
        for _ in 1..d {
            cols.push(ff.mul(cols.last().unwrap(), &yp));
        }
        let wt: Vec<Vec<RatFn>> = (0..d).map(|l| (0..d).map(|m| cols[m].0[l].clone()).collect()).collect();
        ff.winv = ratfn_inverse(&wt, f).ok_or_else(|| Error::user("equation is inseparable in y"))?;
        // y' = −P_t(y)/P_y(y)
        let pt = ff.eval_bipoly(&poly.dt(f));
        let py = ff.eval_bipoly(&poly.dy(f));
        let pyi = ff.inv(&py).ok_or_else(|| Error::user("equation is inseparable in y"))?;
        ff.dy = ff.neg(&ff.mul(&pt, &pyi));
        Ok(ff)
    }

    pub fn zero(&self) -> FfElem {
        FfElem(vec![RatFn::zero(); self.d])
    }
    pub fn one(&self) -> FfElem {
        self.constant(RatFn::one())
    }
    pub fn constant(&self, r: RatFn) -> FfElem {
        let mut v = self.zero();
        v.0[0] = r;
        v
    }
    pub fn y(&self) -> FfElem {
        self.gen_y()
    }
    pub fn y_pow(&self, k: usize) -> FfElem {
        if k < self.d {
            return self.basis(k);
        }
        self.pow(&self.gen_y(), k)
    }
    fn gen_y(&self) -> FfElem {
        if self.d == 1 {
            self.constant(self.red[0].clone())
        } else {
            let mut v = self.zero();
            v.0[1] = RatFn::one();
            v
        }
    }
    pub fn add(&self, a: &FfElem, b: &FfElem) -> FfElem {
        FfElem(a.0.iter().zip(&b.0).map(|(x, y)| x.add(y, &self.field)).collect())
    }
    pub fn neg(&self, a: &FfElem) -> FfElem {
        FfElem(a.0.iter().map(|x| x.neg(&self.field)).collect())
    }
    pub fn sub(&self, a: &FfElem, b: &FfElem) -> FfElem {
        self.add(a, &self.neg(b))
    }
    pub fn scale(&self, c: &RatFn, a: &FfElem) -> FfElem {
        FfElem(a.0.iter().map(|x| x.mul(c, &self.field)).collect())
    }
    pub fn mul(&self, a: &FfElem, b: &FfElem) -> FfElem {
        let f = &self.field;
        let d = self.d;
        let mut r = vec![RatFn::zero(); 2 * d - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if !y.is_zero() {
                    r[i + j] = r[i + j].add(&x.mul(y, f), f);
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = std::mem::replace(&mut r[k], RatFn::zero());
            if c.is_zero() {
                continue;
            }
            for l in 0..d {
                r[k - d + l] = r[k - d + l].add(&c.mul(&self.red[l], f), f);
            }
        }
        r.truncate(d);
        FfElem(r)
    }
    pub fn pow(&self, a: &FfElem, mut n: usize) -> FfElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }
    pub fn inv(&self, a: &FfElem) -> Option<FfElem> {
        // column j of the multiplication matrix is a·y^j
        let cols: Vec<FfElem> = (0..self.d).map(|j| self.mul(a, &self.basis(j))).collect();
        let m: Vec<Vec<RatFn>> = (0..self.d).map(|l| (0..self.d).map(|j| cols[j].0[l].clone()).collect()).collect();
        let mi = ratfn_inverse(&m, &self.field)?;
        Some(FfElem((0..self.d).map(|l| mi[l][0].clone()).collect()))
    }
    fn basis(&self, j: usize) -> FfElem {
        let mut v = self.zero();
        v.0[j] = RatFn::one();
        v
    }
    pub fn eval_bipoly(&self, q: &BiPoly) -> FfElem {
        let y = self.gen_y();
        let mut acc = self.zero();
        for c in q.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, &y), &self.constant(RatFn::from_poly(c.clone())));
        }
        acc
    }
    /// d/dt on L.
    pub fn derivative(&self, u: &FfElem) -> FfElem {
        let f = &self.field;
        let mut acc = FfElem(u.0.iter().map(|c| ratfn_derivative(c, f)).collect());
        for l in 1..self.d {
            if u.0[l].is_zero() {
                continue;
            }
            let k = u.0[l].scale(f.from_int(l as i64), f);
            let term = self.mul(&self.scale(&k, &self.basis(l - 1)), &self.dy);
            acc = self.add(&acc, &term);
        }
        acc
    }

    /// u^p = Σ φ(c_l)(t^p)·y^{pl}.
    pub fn frob(&self, u: &FfElem) -> FfElem {
        self.pow(u, self.field.p() as usize)
    }

    /// s_i(u), the unique element with u = Σ_i s_i(u)^p t^i.
    pub fn decimate(&self, u: &FfElem, i: u32) -> FfElem {
        let f = &self.field;
        let p = f.p() as usize;
        let a = mat_vec(&self.winv, &u.0, f);
        FfElem(
            a.iter()
                .map(|am| {
                    if am.is_zero() {
                        return RatFn::zero();
                    }
                    let mut dp = Poly::one();
                    for _ in 1..p {
                        dp = dp.mul(&am.den, f);
                    }
                    let n = am.num.mul(&dp, f);
                    let len = n.0.len().div_ceil(p);
                    let ni = Poly::new((0..len).map(|k| f.frob(n.coeff(p * k + i as usize), -1)).collect());
                    RatFn::new(ni, am.den.clone(), f)
                })
                .collect(),
        )
    }

    /// Power series of u along a branch y ↦ ybr, modulo t^n. Fails if u has a pole.
    pub fn to_series(&self, u: &FfElem, ybr: &[u32], n: usize) -> Result<Vec<u32>> {
        let f = &self.field;
        let vmin = u.0.iter().filter_map(|c| c.val()).min().unwrap_or(0).min(0);
        let width = (n as i64 - vmin) as usize;
        let mut acc = vec![0u32; width];
        let ys = Poly::new(ybr.iter().take(width).copied().collect());
        if ybr.len() < width {
            return Err(Error::verification("branch precision too low for this element"));
        }
        let mut ypow = Poly::one();
        for (l, c) in u.0.iter().enumerate() {
            if l > 0 {
                ypow = ypow.mul_trunc(&ys, width, f);
            }
            if c.is_zero() {
                continue;
            }
            let (v, lc) = c.laurent(n as i64, f);
            let prod = Poly::new(lc).mul_trunc(&ypow, (n as i64 - v).max(0) as usize, f);
            for (k, &x) in prod.0.iter().enumerate() {
                let e = v + k as i64;
                if e < n as i64 {
                    let idx = (e - vmin) as usize;
                    acc[idx] = f.add(acc[idx], x);
                }
            }
        }
        if acc[..(-vmin) as usize].iter().any(|&x| x != 0) {
            return Err(Error::verification("element has a pole at t = 0 along the branch"));
        }
        Ok(acc[(-vmin) as usize..].to_vec())
    }

    /// Largest pole order at t = 0 among the coordinates.
    pub fn pole_order(&self, u: &FfElem) -> usize {
        u.0.iter().filter_map(|c| c.val()).map(|v| (-v).max(0) as usize).max().unwrap_or(0)
    }
}

/// F_q-linear span of function-field elements with exact membership tests.
struct FqSpan {
    elems: Vec<FfElem>,
}

impl FqSpan {
    /// Clears all denominators jointly and flattens to F_q vectors.
    fn flatten(&self, extra: &FfElem, f: &Field) -> (Vec<Vec<u32>>, Vec<u32>) {
        let mut l = Poly::one();
        for e in self.elems.iter().chain(std::iter::once(extra)) {
            for c in &e.0 {
                let g = l.gcd(&c.den, f);
                l = l.mul(&c.den.div_exact(&g, f).unwrap(), f);
            }
        }
        let polys = |e: &FfElem| -> Vec<Poly> { e.0.iter().map(|c| c.num.mul(&l.div_exact(&c.den, f).unwrap(), f)).collect() };
        let all: Vec<Vec<Poly>> = self.elems.iter().chain(std::iter::once(extra)).map(polys).collect();
        let width = all.iter().flatten().map(|p| p.0.len()).max().unwrap_or(0);
        let flat = |ps: &Vec<Poly>| -> Vec<u32> { ps.iter().flat_map(|p| (0..width).map(move |i| p.coeff(i))).collect() };
        let mut vs: Vec<Vec<u32>> = all.iter().map(flat).collect();
        let last = vs.pop().unwrap();
        (vs, last)
    }
    fn coords(&self, u: &FfElem, f: &Field) -> Option<Vec<u32>> {
        if self.elems.is_empty() {
            return u.is_zero().then(Vec::new);
        }
        let (cols, target) = self.flatten(u, f);
        let rows = target.len();
        let mut a = FqMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                a.set(i, j, c[i]);
            }
        }
        solve_fq(&a, &target, f)
    }
}

#[derive(Clone, Debug)]
pub struct ChristolOutput {
    pub series: QuasiAutomaticSeries,
    pub basis: Vec<FfElem>,
    /// Number of Frobenius deflations applied to reach a separable equation.
    pub twists: u32,
    pub ff: FunctionField,
}

pub fn christol_forward(rep: &AlgebraicSeriesRep) -> Result<ChristolOutput> {
    christol_forward_capped(rep, ORBIT_CAP)
}

/// Orbit of the root under s_0..s_{p−1}, emitted as integer-support data.
pub fn christol_forward_capped(rep: &AlgebraicSeriesRep, cap: usize) -> Result<ChristolOutput> {
    let (twists, sep) = rep.separable_form()?;
    let f = &rep.field;
    let p = f.p();
    let ff = FunctionField::new(&sep.poly, f)?;
    let mut span = FqSpan { elems: vec![ff.y()] };
    // columns[a][j] = coordinates of s_a(b_j)
    let mut cols: Vec<Vec<Vec<u32>>> = vec![Vec::new(); p as usize];
    let mut j = 0;
    while j < span.elems.len() {
        let b = span.elems[j].clone();
        for a in 0..p {
            let s = ff.decimate(&b, a);
            let c = match span.coords(&s, f) {
                Some(c) => c,
                None => {
                    if span.elems.len() >= cap {
                        return Err(Error::resource("decimation orbit dimension", cap));
                    }
                    span.elems.push(s);
                    let mut c = vec![0u32; span.elems.len()];
                    c[span.elems.len() - 1] = 1;
                    c
                }
            };
            cols[a as usize].push(c);
        }
        j += 1;
    }
    let r = span.elems.len();
    let mut maps = Vec::new();
    for a in 0..p as usize {
        // M_a = φ(A_aᵀ)
        let mut m = FqMat::zeros(r, r);
        for (jj, c) in cols[a].iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                m.set(jj, i, f.frob(x, 1));
            }
        }
        maps.push(m);
    }
    let poles = span.elems.iter().map(|e| ff.pole_order(e)).max().unwrap_or(0);
    let ybr = newton_simple(&sep, poles + 2)?;
    let mut iota = Vec::with_capacity(r);
    for e in &span.elems {
        iota.push(ff.to_series(e, &ybr, 1)?[0]);
    }
    let mut pi = vec![0u32; r];
    pi[0] = 1;
    let data = BiautomaticData::integer(f.clone(), iota, pi, ComposedFunction::new(f.clone(), 1, maps)?)?;
    let mut series = QuasiAutomaticSeries::plain(AutomaticSeries::new(data)?);
    if twists > 0 {
        series = frobenius_series(&series, -(twists as i64))?;
    }
    Ok(ChristolOutput { series, basis: span.elems, twists, ff })
}
