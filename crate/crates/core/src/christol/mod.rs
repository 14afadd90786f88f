//! Algebraic power series over F_q and their automata: branch expansion,
//! decimation in the function field, the forward orbit construction and the
//! Ore-type annihilator in the reverse direction.

pub mod funcfield;
pub mod ore;
pub mod parse;

use std::fmt;

use crate::coeff_fields::{Field, Poly};
use crate::error::{Error, Result};

pub use funcfield::{christol_forward, christol_forward_capped, ChristolOutput, FfElem, FunctionField, ORBIT_CAP};
pub use ore::{ore_annihilator, OreRelation};
pub use parse::parse_bipoly;

/// P(t, y) = Σ_k coeffs[k](t)·y^k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly {
    pub coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> BiPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }
    pub fn zero() -> BiPoly {
        BiPoly { coeffs: Vec::new() }
    }
    pub fn from_t(p: Poly) -> BiPoly {
        BiPoly::new(vec![p])
    }
    pub fn y() -> BiPoly {
        BiPoly::new(vec![Poly::zero(), Poly::one()])
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    pub fn deg_y(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
    pub fn coeff(&self, k: usize) -> Poly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }
    pub fn max_deg_t(&self) -> usize {
        self.coeffs.iter().filter_map(|c| c.deg()).max().unwrap_or(0)
    }
    pub fn add(&self, o: &BiPoly, f: &Field) -> BiPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        BiPoly::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k), f)).collect())
    }
    pub fn neg(&self, f: &Field) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|c| c.neg(f)).collect())
    }
    pub fn mul(&self, o: &BiPoly, f: &Field) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        let mut r = vec![Poly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].add(&a.mul(b, f), f);
            }
        }
        BiPoly::new(r)
    }
    /// ∂P/∂y.
    pub fn dy(&self, f: &Field) -> BiPoly {
        BiPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(f.from_int(k as i64), f)).collect())
    }
    /// ∂P/∂t.
    pub fn dt(&self, f: &Field) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|c| c.derivative(f)).collect())
    }
    /// P(t, x) mod t^n for a truncated series x.
    pub fn eval_series(&self, x: &[u32], n: usize, f: &Field) -> Vec<u32> {
        let xs = Poly::new(x.iter().take(n).copied().collect());
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_trunc(&xs, n, f).add(&c.trunc(n), f);
        }
        (0..n).map(|i| acc.coeff(i)).collect()
    }
    /// Q with P(t, y) = Q(t, y^p), when P is a polynomial in y^p.
    pub fn deflate(&self, f: &Field) -> Option<BiPoly> {
        let p = f.p() as usize;
        if self.coeffs.iter().enumerate().any(|(k, c)| k % p != 0 && !c.is_zero()) {
            return None;
        }
        Some(BiPoly::new(self.coeffs.iter().step_by(p).cloned().collect()))
    }
    pub fn fmt_with(&self, f: &Field) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = crate::coeff_fields::poly::fmt_poly(c, f);
            let ys = match k {
                0 => String::new(),
                1 => "y".into(),
                _ => format!("y^{}", k),
            };
            parts.push(match (k, cs.as_str()) {
                (0, _) => cs,
                (_, "1") => ys,
                _ if c.0.iter().filter(|&&x| x != 0).count() > 1 => format!("({})*{}", cs, ys),
                _ => format!("{}*{}", cs, ys),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// A bivariate equation together with a segment isolating one power-series root.
#[derive(Clone, Debug)]
pub struct AlgebraicSeriesRep {
    pub field: Field,
    pub poly: BiPoly,
    pub segment: Vec<u32>,
}

impl fmt::Display for AlgebraicSeriesRep {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{} = 0 with x0..: {:?}", self.poly.fmt_with(&self.field), self.segment)
    }
}

impl AlgebraicSeriesRep {
    /// Checks the branch certificate: P(t, segment) ≡ 0 mod t^len and
    /// ∂P/∂y is a unit there. Polynomials in y^p are accepted when the
    /// certificate holds after Frobenius deflation.
    pub fn new(field: Field, poly: BiPoly, segment: Vec<u32>) -> Result<AlgebraicSeriesRep> {
        if poly.is_zero() || poly.deg_y() == 0 {
            return Err(Error::user("equation must involve y"));
        }
        if segment.is_empty() {
            return Err(Error::user("branch segment must contain at least x0"));
        }
        if segment.iter().any(|&c| c >= field.q()) {
            return Err(Error::user("segment entry outside the field"));
        }
        let rep = AlgebraicSeriesRep { field, poly, segment };
        rep.separable_form()?;
        Ok(rep)
    }

    pub fn parse(text: &str, field: &Field, segment: Vec<u32>) -> Result<AlgebraicSeriesRep> {
        AlgebraicSeriesRep::new(field.clone(), parse_bipoly(text, field)?, segment)
    }

    /// The root is x = φ^{-k}(z) with z a certified simple root of the returned equation.
    pub fn separable_form(&self) -> Result<(u32, AlgebraicSeriesRep)> {
        let f = &self.field;
        let mut poly = self.poly.clone();
        let mut seg = self.segment.clone();
        let mut k = 0;
        loop {
            if !poly.dy(f).is_zero() {
                break;
            }
            poly = poly.deflate(f).ok_or_else(|| Error::user("equation has zero y-derivative but is not a polynomial in y^p"))?;
            if poly.deg_y() == 0 {
                return Err(Error::user("equation degenerates to a constant after deflation"));
            }
            // z = x^p: coefficient at p·n is x_n^p.
            let p = f.p() as usize;
            let mut z = vec![0u32; (seg.len() - 1) * p + 1];
            for (n, &c) in seg.iter().enumerate() {
                z[n * p] = f.frob(c, 1);
            }
            seg = z;
            k += 1;
        }
        let n = seg.len();
        if poly.eval_series(&seg, n, f).iter().any(|&c| c != 0) {
            return Err(Error::user("segment does not satisfy the equation to its own length"));
        }
        let d0 = poly.dy(f).eval_series(&seg, 1, f)[0];
        if d0 == 0 {
            return Err(Error::user("branch is not isolated: y-derivative vanishes at t = 0"));
        }
        Ok((k, AlgebraicSeriesRep { field: f.clone(), poly, segment: seg }))
    }

    /// Convenience constructor from a single starting value x0.
    pub fn with_x0(field: &Field, poly: BiPoly, x0: u32) -> Result<AlgebraicSeriesRep> {
        AlgebraicSeriesRep::new(field.clone(), poly, vec![x0])
    }
}

/// Coefficients x_0..x_{n-1} of the isolated root.
pub fn newton_expand(rep: &AlgebraicSeriesRep, n: usize) -> Result<Vec<u32>> {
    let f = &rep.field;
    let (k, sep) = rep.separable_form()?;
    let p = f.p() as usize;
    let need = (n.max(1) - 1) * p.pow(k) + 1;
    let z = newton_simple(&sep, need)?;
    if z.iter().enumerate().any(|(i, &c)| c != 0 && i % p.pow(k) != 0) {
        return Err(Error::user("deflated root is not a p-th power: the equation has no power-series root on this branch"));
    }
    Ok((0..n).map(|i| f.frob(z[i * p.pow(k)], -(k as i64))).collect())
}

/// Newton iteration z ← z − P(z)/P_y(z), doubling the precision each step.
pub(crate) fn newton_simple(rep: &AlgebraicSeriesRep, n: usize) -> Result<Vec<u32>> {
    let f = &rep.field;
    let dp = rep.poly.dy(f);
    let mut prec = rep.segment.len();
    let mut z: Vec<u32> = rep.segment.clone();
    while prec < n {
        let np = (2 * prec).min(n);
        z.resize(np, 0);
        let num = Poly::new(rep.poly.eval_series(&z, np, f));
        let den = Poly::new(dp.eval_series(&z, np, f));
        let corr = crate::coeff_fields::poly::series_div(&num, &den, np, f);
        for i in 0..np {
            z[i] = f.sub(z[i], corr[i]);
        }
        prec = np;
    }
    z.truncate(n);
    if rep.poly.eval_series(&z, n, f).iter().any(|&c| c != 0) {
        return Err(Error::verification("Newton lift does not satisfy the equation"));
    }
    Ok(z)
}
