//! Linearized recurrence relations d₀c_n + d₁c_{n+1}^p + ⋯ + d_k c_{n+k}^{p^k} = 0.

use crate::coeff_fields::linalg::{nullspace_domain, Domain};
use crate::coeff_fields::Frobenius;
use crate::error::{Error, Result};

/// Coefficient domains an LRR can live over.
pub trait Scalar: Domain + Frobenius {}
impl<T: Domain + Frobenius> Scalar for T {}

#[derive(Clone, Debug, PartialEq)]
pub struct Lrr<D: Scalar> {
    pub coeffs: Vec<D>,
}

impl<D: Scalar> Lrr<D> {
    pub fn new(coeffs: Vec<D>) -> Result<Lrr<D>> {
        if coeffs.iter().all(|d| d.is_zero()) {
            return Err(Error::user("an LRR needs a nonzero coefficient"));
        }
        Ok(Lrr { coeffs })
    }

    /// Length k: the relation reaches k terms ahead.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Σ d_i c_{n+i}^{p^i}.
    pub fn residual(&self, c: &[D], n: usize, ctx: &D::Ctx) -> D {
        self.coeffs.iter().enumerate().fold(D::zero(ctx), |acc, (i, d)| {
            if d.is_zero() {
                acc
            } else {
                acc.add(&d.mul(&c[n + i].frobenius(i as i64), ctx), ctx)
            }
        })
    }

    /// Relation satisfied by {c_n} whenever this one holds for {c_{n+1}^p − c_n}:
    /// coefficients −d₀, d₀ − d₁, …, d_{k−1} − d_k, d_k.
    pub fn lift_difference(&self, ctx: &D::Ctx) -> Lrr<D> {
        let k = self.order();
        let zero = D::zero(ctx);
        let mut out = Vec::with_capacity(k + 2);
        for i in 0..=k + 1 {
            let prev = if i == 0 { &zero } else { &self.coeffs[i - 1] };
            let cur = self.coeffs.get(i).unwrap_or(&zero);
            out.push(prev.sub(cur, ctx));
        }
        Lrr { coeffs: out }
    }

    /// Relation satisfied by {α·c_n}: the old one multiplied through by
    /// α·Π_i α^{p^i}, then d_j divided by α^{p^j}. Equivalent to d_j·α/α^{p^j}
    /// up to a common factor.
    pub fn scaled(&self, alpha: &D, ctx: &D::Ctx) -> Lrr<D> {
        let pows: Vec<D> = (0..self.coeffs.len()).map(|j| alpha.frobenius(j as i64)).collect();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, d)| {
                pows.iter().enumerate().filter(|&(i, _)| i != j).fold(d.mul(alpha, ctx), |acc, (_, a)| acc.mul(a, ctx))
            })
            .collect();
        Lrr { coeffs }
    }
}

/// Checks the relation for n = 0..n_terms−1; the stream must supply n_terms + k values.
pub fn lrr_check<D: Scalar>(r: &Lrr<D>, seq: impl IntoIterator<Item = D>, n_terms: usize, ctx: &D::Ctx) -> Result<bool> {
    let need = n_terms + r.order();
    let c: Vec<D> = seq.into_iter().take(need).collect();
    if c.len() < need {
        return Err(Error::user(format!("stream exhausted after {} terms; {} needed", c.len(), need)));
    }
    Ok((0..n_terms).all(|n| r.residual(&c, n, ctx).is_zero()))
}

/// Rows [c_n, c_{n+1}^p, …, c_{n+k}^{p^k}] for n < window, across all streams.
pub fn lrr_rows<D: Scalar>(streams: &[Vec<D>], k: usize, window: usize) -> Vec<Vec<D>> {
    let mut rows = Vec::new();
    for s in streams {
        for n in 0..window {
            if n + k >= s.len() {
                break;
            }
            let row: Vec<D> = (0..=k).map(|i| s[n + i].frobenius(i as i64)).collect();
            if row.iter().any(|x| !x.is_zero()) && !rows.contains(&row) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Basis of all order-k relations valid on every window.
pub fn lrr_nullspace<D: Scalar>(streams: &[Vec<D>], k: usize, window: usize, ctx: &D::Ctx) -> Vec<Vec<D>> {
    let rows = lrr_rows(streams, k, window);
    if rows.is_empty() {
        return (0..=k).map(|i| (0..=k).map(|j| if i == j { D::one(ctx) } else { D::zero(ctx) }).collect()).collect();
    }
    nullspace_domain(&rows, ctx)
}

/// Lowest-order relation (order ≤ max_order) shared by all streams on the window.
pub fn lrr_fit<D: Scalar>(streams: &[Vec<D>], max_order: usize, window: usize, ctx: &D::Ctx) -> Option<Lrr<D>> {
    (0..=max_order).find_map(|k| lrr_nullspace(streams, k, window, ctx).into_iter().next().map(|coeffs| Lrr { coeffs }))
}
