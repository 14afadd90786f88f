//! Reverse direction: a twisted-polynomial relation Σ P_j·x^{p^j} = 0 with
//! P_j ∈ F_q(t) for an integer-support automatic series.
//!
//! With a minimal realization (ι, π, M_c) and G(t) = Σ_n v_n t^n the state
//! series, G = δ + A(t)·G^{(p)} where A = Σ_c M_c t^c and δ = ι − M_0 φ(ι).
//! Adjoining the constant 1 makes this homogeneous, G̃ = Ã·G̃^{(p)}, so every
//! x^{p^j} is an explicit F_q[t]-combination of the entries of G̃^{(p^D)}.
//! A polynomial null vector of those combinations is the relation.

use std::fmt;

use crate::coeff_fields::linalg::nullspace_domain;
use crate::coeff_fields::{Field, Poly, RatFn};
use crate::dfao_engine::{digit_alphabet, Dfao};
use crate::error::{Error, Result};
use crate::semilinear::realize::minimal_integer;
use crate::semilinear::BiautomaticData;
use crate::series_core::{support_dfao, QuasiAutomaticSeries};
use crate::base_p_codec::PAdicNonneg;

use super::BiPoly;

/// Largest polynomial degree allowed in the intermediate products.
pub const DEGREE_CAP: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreRelation {
    pub field: Field,
    /// Monic: coeffs.last() == 1.
    pub coeffs: Vec<RatFn>,
    /// The same relation with denominators cleared.
    pub numerators: Vec<Poly>,
    /// t-adic precision at which the residual was checked to vanish.
    pub precision: usize,
}

impl OreRelation {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
    /// Σ Q_j·y^{p^j} as a bivariate polynomial.
    pub fn to_bipoly(&self) -> BiPoly {
        let p = self.field.p() as usize;
        let top = p.pow(self.degree() as u32);
        let mut c = vec![Poly::zero(); top + 1];
        for (j, q) in self.numerators.iter().enumerate() {
            c[p.pow(j as u32)] = q.clone();
        }
        BiPoly::new(c)
    }
    /// Σ Q_j x^{p^j} mod t^n for the coefficient list x (length ≥ n).
    pub fn residual(&self, x: &[u32], n: usize) -> Vec<u32> {
        residual(&self.numerators, x, n, &self.field)
    }
}

impl fmt::Display for OreRelation {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(format!("({})·T^{}", c.fmt_with(&self.field), j));
        }
        write!(fm, "{}", parts.join(" + "))
    }
}

fn residual(q: &[Poly], x: &[u32], n: usize, f: &Field) -> Vec<u32> {
    let p = f.p() as usize;
    let mut acc = vec![0u32; n];
    for (j, qj) in q.iter().enumerate() {
        if qj.is_zero() {
            continue;
        }
        let pj = p.pow(j as u32);
        // x^{p^j}: coefficient at p^j·m is φ^j(x_m)
        let xs = Poly::new((0..n).map(|i| if i % pj == 0 { f.frob(x[i / pj], j as i64) } else { 0 }).collect());
        let prod = qj.mul_trunc(&xs, n, f);
        for (i, &c) in prod.0.iter().enumerate() {
            acc[i] = f.add(acc[i], c);
        }
    }
    acc
}

/// Accepts canonical words with at least one fractional digit.
fn has_fraction(p: u32) -> Dfao {
    let r = p as usize;
    let mut d = vec![vec![0u32; r + 1], vec![2u32; r + 1], vec![2u32; r + 1]];
    d[0][r] = 1;
    Dfao::new(p, digit_alphabet(p, true), d, 0, vec![0, 0, 1]).unwrap()
}

/// Integer-digit data for a series whose inner support lies in Z≥0.
pub fn integer_part(x: &QuasiAutomaticSeries) -> Result<BiautomaticData> {
    let s = support_dfao(x)?;
    let frac = s.product(&has_fraction(x.p()), |a, b| a & b)?;
    if !frac.is_empty_language() {
        return Err(Error::user("series has non-integer support; apply the (a, b) reduction first"));
    }
    let d = &x.inner.data;
    BiautomaticData::integer(d.field.clone(), d.iota.clone(), d.pi.clone(), d.f1.clone())
}

type PMat = Vec<Vec<Poly>>;

fn pmat_mul(a: &PMat, b: &PMat, f: &Field) -> PMat {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..b.len()).fold(Poly::zero(), |acc, k| if a[i][k].is_zero() || b[k][j].is_zero() { acc } else { acc.add(&a[i][k].mul(&b[k][j], f), f) }))
                .collect()
        })
        .collect()
}

/// Relation for the inner series Σ X_j t^j (equal to x when a = 1, b = 0).
pub fn ore_annihilator(x: &QuasiAutomaticSeries) -> Result<OreRelation> {
    let f = x.field().clone();
    let p = f.p() as usize;
    let data = minimal_integer(&integer_part(x)?)?;
    let d = data.dim();
    // Ã
    let mut at: PMat = vec![vec![Poly::zero(); d + 1]; d + 1];
    at[0][0] = Poly::one();
    let m0i = data.f1.tau(0).apply(&data.iota);
    for i in 0..d {
        at[i + 1][0] = Poly::constant(f.sub(data.iota[i], m0i[i]));
        for j in 0..d {
            at[i + 1][j + 1] = Poly::new((0..p).map(|c| data.f1.maps[c].get(i, j)).collect());
        }
    }
    let mut pit = vec![0u32];
    pit.extend_from_slice(&data.pi);

    let mut found: Option<Vec<Poly>> = None;
    for big_d in 1..=d + 1 {
        if p.checked_pow(big_d as u32).is_none_or(|v| v > DEGREE_CAP) {
            return Err(Error::resource("annihilator polynomial degree", DEGREE_CAP));
        }
        // rows r_j = φ^j(π̃)·Ã^{(p^j)}⋯Ã^{(p^{D−1})}
        let mut suffix: PMat = (0..=d).map(|i| (0..=d).map(|j| if i == j { Poly::one() } else { Poly::zero() }).collect()).collect();
        let mut rows: Vec<Vec<Poly>> = vec![Vec::new(); big_d + 1];
        for j in (0..=big_d).rev() {
            if j < big_d {
                let aj: PMat = at.iter().map(|r| r.iter().map(|e| e.frob_pow(j as u32, &f)).collect()).collect();
                suffix = pmat_mul(&aj, &suffix, &f);
            }
            let pij: Vec<Vec<Poly>> = vec![pit.iter().map(|&c| Poly::constant(f.frob(c, j as i64))).collect()];
            rows[j] = pmat_mul(&pij, &suffix, &f).remove(0);
        }
        let m: Vec<Vec<Poly>> = (0..=d).map(|k| (0..=big_d).map(|j| rows[j][k].clone()).collect()).collect();
        if let Some(v) = nullspace_domain(&m, &f).into_iter().next() {
            found = Some(v);
            break;
        }
    }
    let mut q = found.ok_or_else(|| Error::verification("no relation found within the dimension bound"))?;
    while q.last().is_some_and(|c| c.is_zero()) {
        q.pop();
    }
    // content removal keeps the numerators small
    let g = q.iter().filter(|c| !c.is_zero()).fold(Poly::zero(), |acc, c| if acc.is_zero() { c.monic(&f) } else { acc.gcd(c, &f) });
    let q: Vec<Poly> = q.iter().map(|c| c.div_exact(&g, &f).unwrap()).collect();
    let lead = q.last().unwrap().clone();
    let q: Vec<Poly> = {
        let l = f.inv(lead.lead()).unwrap();
        q.iter().map(|c| c.scale(l, &f)).collect()
    };
    let lead = q.last().unwrap().clone();
    let coeffs: Vec<RatFn> = q.iter().map(|c| RatFn::new(c.clone(), lead.clone(), &f)).collect();

    let top = q.len() - 1;
    let maxdeg = q.iter().filter_map(|c| c.deg()).max().unwrap_or(0);
    let mut n = 2 * top.max(1) * maxdeg + 64;
    for attempt in 0..2 {
        let xs: Vec<u32> = (0..n as u128).map(|k| x.inner.coeff_at(PAdicNonneg::int(k))).collect();
        if residual(&q, &xs, n, &f).iter().all(|&c| c == 0) {
            return Ok(OreRelation { field: f, coeffs, numerators: q, precision: n });
        }
        if attempt == 0 {
            n *= 2;
        }
    }
    Err(Error::verification(format!("annihilator residual nonzero at precision {}", n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::christol::{christol_forward, newton_expand, AlgebraicSeriesRep};
    use crate::series_core::{truncate, Q};

    fn series_of(text: &str, p: u32, e: u32, x0: u32) -> (AlgebraicSeriesRep, QuasiAutomaticSeries) {
        let f = Field::default_for(p, e).unwrap();
        let r = AlgebraicSeriesRep::parse(text, &f, vec![x0]).unwrap();
        let s = christol_forward(&r).unwrap().series;
        (r, s)
    }

    #[test]
    fn geometric_relation() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::geometric(&f);
        let rel = ore_annihilator(&x).unwrap();
        assert_eq!(rel.degree(), 1);
        // x^2 + x/(1+t) = 0
        assert_eq!(rel.coeffs[0], RatFn::new(Poly::one(), Poly::new(vec![1, 1]), &f));
        let xs = vec![1u32; 64];
        assert!(rel.residual(&xs, 64).iter().all(|&c| c == 0));
    }

    #[test]
    fn polynomial_relation() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::monomial(&f, 1, Q::from(1)).unwrap();
        let rel = ore_annihilator(&x).unwrap();
        assert_eq!(rel.degree(), 1);
        // t^2 = t·t
        assert_eq!(rel.coeffs[0], RatFn::from_poly(Poly::t()).neg(&f));
    }

    #[test]
    fn powers_of_two_relation() {
        let (_, x) = series_of("y^2 + y + t", 2, 1, 0);
        let rel = ore_annihilator(&x).unwrap();
        assert_eq!(rel.degree(), 2);
        // squaring x^2 + x + t = 0 and eliminating t gives x^4 + (1+t)x^2 + t x = 0
        let f = x.field().clone();
        assert_eq!(rel.coeffs, vec![RatFn::from_poly(Poly::t()), RatFn::from_poly(Poly::new(vec![1, 1])), RatFn::one()]);
        let xs: Vec<u32> = (0..128).map(|n| x.coeff(&Q::from(n))).collect();
        assert!(rel.residual(&xs, 128).iter().all(|&c| c == 0));
        let _ = f;
    }

    #[test]
    fn relation_recovers_rep() {
        // the relation is itself an equation with the series as a simple root
        let (r, x) = series_of("(1+t)*y + 1", 2, 1, 1);
        let rel = ore_annihilator(&x).unwrap();
        let back = AlgebraicSeriesRep::new(r.field.clone(), rel.to_bipoly(), vec![1]).unwrap();
        let y = christol_forward(&back).unwrap().series;
        let want = newton_expand(&r, 64).unwrap();
        for n in 0..64 {
            assert_eq!(y.coeff(&Q::from(n as i128)), want[n]);
        }
    }

    #[test]
    fn degree_three_and_truncation() {
        let (r, x) = series_of("y^3 + 2*y + 2*t", 3, 1, 0);
        let rel = ore_annihilator(&x).unwrap();
        let n = rel.precision;
        let xs = newton_expand(&r, n).unwrap();
        assert!(rel.residual(&xs, n).iter().all(|&c| c == 0));
        let tr = truncate(&x, &Q::from(10)).unwrap();
        let rt = ore_annihilator(&tr).unwrap();
        let ts: Vec<u32> = (0..rt.precision).map(|k| if k < 10 { xs[k] } else { 0 }).collect();
        assert!(rt.residual(&ts, rt.precision).iter().all(|&c| c == 0));
    }

    #[test]
    fn fractional_support_rejected() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::finite(&f, &[(Q::new(1, 2), 1)]).unwrap();
        assert!(ore_annihilator(&x).is_err());
    }
}
