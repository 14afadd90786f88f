//! Constructive replay of the bounded-support induction: at radius r, form
//! c = min_j(v(P_j) + r·p^j) and the boundary polynomial Q, solve the boundary
//! equation when Q splits, and extend the certified truncation.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use super::{additive_solve, AdditivePoly};
use crate::coeff_fields::{Field, FieldDesc, Poly};
use crate::error::{Error, Result};
use crate::series_core::{add, frobenius_series, is_zero, min_support, shift, sub, truncate, QuasiAutomaticSeries, Q};

/// Laurent polynomial over F_q known for exponents below `prec` (None: exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncLaurent {
    pub terms: BTreeMap<i64, u32>,
    pub prec: Option<i64>,
}

impl TruncLaurent {
    pub fn exact(terms: &[(i64, u32)]) -> TruncLaurent {
        TruncLaurent { terms: terms.iter().copied().filter(|&(_, c)| c != 0).collect(), prec: None }
    }
    pub fn with_prec(terms: &[(i64, u32)], prec: i64) -> TruncLaurent {
        TruncLaurent { prec: Some(prec), ..TruncLaurent::exact(&terms.iter().copied().filter(|&(e, _)| e < prec).collect::<Vec<_>>()) }
    }
    fn coeff(&self, e: i64) -> u32 {
        self.terms.get(&e).copied().unwrap_or(0)
    }
    fn val(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
    pub fn to_series(&self, f: &Field) -> Result<QuasiAutomaticSeries> {
        let t: Vec<(Q, u32)> = self.terms.iter().map(|(&e, &c)| (Q::from(e as i128), c)).collect();
        QuasiAutomaticSeries::finite(f, &t)
    }
    fn to_json(&self) -> Value {
        json!({"terms": self.terms.iter().map(|(e, c)| json!([e, c])).collect::<Vec<_>>(), "prec": self.prec})
    }
    fn from_json(v: &Value) -> Result<TruncLaurent> {
        let bad = || Error::user("malformed Laurent polynomial");
        let mut terms = BTreeMap::new();
        for t in v["terms"].as_array().ok_or_else(bad)? {
            let e = t[0].as_i64().ok_or_else(bad)?;
            let c = t[1].as_u64().ok_or_else(bad)? as u32;
            if c != 0 {
                terms.insert(e, c);
            }
        }
        let prec = if v["prec"].is_null() { None } else { Some(v["prec"].as_i64().ok_or_else(bad)?) };
        Ok(TruncLaurent { terms, prec })
    }
}

/// Σ_j P_j T^j over F_q((t)) with P_d = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPoly {
    pub field: Field,
    pub coeffs: Vec<TruncLaurent>,
}

impl TwistedPoly {
    pub fn new(field: &Field, coeffs: Vec<TruncLaurent>) -> Result<TwistedPoly> {
        match coeffs.last() {
            Some(top) if top.prec.is_none() && top.terms.len() == 1 && top.coeff(0) == 1 => {}
            _ => return Err(Error::user("twisted polynomial must be monic with an exact leading coefficient")),
        }
        if coeffs.iter().flat_map(|c| c.terms.values()).any(|&c| c >= field.q()) {
            return Err(Error::user("coefficient outside the field"));
        }
        Ok(TwistedPoly { field: field.clone(), coeffs })
    }
    fn to_json(&self) -> Value {
        json!({"field": serde_json::to_value(self.field.desc()).unwrap(), "coeffs": self.coeffs.iter().map(|c| c.to_json()).collect::<Vec<_>>()})
    }
    fn from_json(v: &Value) -> Result<TwistedPoly> {
        let desc: FieldDesc = serde_json::from_value(v["field"].clone()).map_err(|e| Error::user(format!("bad field descriptor: {}", e)))?;
        let field = Field::new(desc)?;
        let coeffs = v["coeffs"].as_array().ok_or_else(|| Error::user("malformed twisted polynomial"))?;
        TwistedPoly::new(&field, coeffs.iter().map(TruncLaurent::from_json).collect::<Result<_>>()?)
    }
    /// Σ_j P_j·y^{p^j}, correct wherever the truncated coefficients are.
    fn apply(&self, y: &QuasiAutomaticSeries) -> Result<QuasiAutomaticSeries> {
        let f = &self.field;
        let mut acc = QuasiAutomaticSeries::zero(f, f.p());
        for (j, pj) in self.coeffs.iter().enumerate() {
            if pj.terms.is_empty() {
                continue;
            }
            let yj = frobenius_series(y, j as i64)?;
            for (&e, &c) in &pj.terms {
                acc = add(&acc, &shift(&yj, c, &Q::from(e as i128))?)?;
            }
        }
        Ok(acc)
    }
}

/// Why a witness run ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// The step budget ran out; the run can resume from the checkpoint.
    Budget,
    /// The boundary polynomial does not split; all of its roots lie in the
    /// extension of this degree (None if it exceeds the search bound).
    NotSplit { boundary: Vec<u32>, extension_degree: Option<u32> },
    /// The known precision of P does not determine the next step.
    Precision,
    /// The supplied leading data contradict the equation.
    Inconsistent(String),
}

#[derive(Clone, Debug)]
pub struct WitnessStep {
    pub r: Q,
    pub c: Q,
    pub boundary: Vec<u32>,
    /// Root of the boundary polynomial added to select the branch.
    pub branch: u32,
    pub next_r: Q,
}

/// Resumable state: certified truncation below r of a root of P(φ)(x) = s.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub r: Q,
    pub certified: QuasiAutomaticSeries,
    pub pending: TwistedPoly,
    pub rhs: QuasiAutomaticSeries,
}

impl Checkpoint {
    pub fn start(poly: TwistedPoly, rhs: QuasiAutomaticSeries) -> Checkpoint {
        let certified = QuasiAutomaticSeries::zero(&poly.field, poly.field.p());
        Checkpoint { r: Q::zero(), certified, pending: poly, rhs }
    }
    pub fn to_json(&self) -> Value {
        json!({"r": self.r.to_string(), "certified": self.certified.to_json(), "pending": self.pending.to_json(), "rhs": self.rhs.to_json()})
    }
    pub fn from_json(v: &Value) -> Result<Checkpoint> {
        let r: Q = v["r"].as_str().and_then(|s| s.parse().ok()).ok_or_else(|| Error::user("malformed checkpoint radius"))?;
        Ok(Checkpoint {
            r,
            certified: QuasiAutomaticSeries::from_json(&v["certified"])?,
            pending: TwistedPoly::from_json(&v["pending"])?,
            rhs: QuasiAutomaticSeries::from_json(&v["rhs"])?,
        })
    }
}

#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// (r, x truncated below r) after each step.
    pub truncations: Vec<(Q, QuasiAutomaticSeries)>,
    pub steps: Vec<WitnessStep>,
    pub stop: StopReason,
    pub checkpoint: Checkpoint,
}

/// Smallest n ≤ 64 with every root of z ↦ Σ Q_j z^{p^j} (Q_0 ≠ 0) in F_{q^n}.
fn splitting_degree(qs: &[u32], f: &Field) -> Option<u32> {
    let p = f.p() as usize;
    let mut c = vec![0u32; p.pow(qs.len() as u32 - 1) + 1];
    for (j, &d) in qs.iter().enumerate() {
        c[p.pow(j as u32)] = d;
    }
    let a = Poly::new(c);
    let z = Poly::t();
    let powmod = |b: &Poly, mut e: u64| {
        let mut r = Poly::one();
        let mut b = b.divrem(&a, f).1;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, f).divrem(&a, f).1;
            }
            b = b.mul(&b, f).divrem(&a, f).1;
            e >>= 1;
        }
        r
    };
    let mut x = z.clone();
    for n in 1..=64 {
        x = powmod(&x, f.q() as u64);
        if x == z.divrem(&a, f).1 {
            return Some(n);
        }
    }
    None
}

/// Runs up to `budget` steps. `leading` fixes the branch at every step whose
/// radius lies below its own radius; elsewhere the smallest-code root is used.
pub fn truncation_witness(start: Checkpoint, leading: Option<(&QuasiAutomaticSeries, &Q)>, budget: usize) -> Result<WitnessReport> {
    let mut cp = start;
    let f = cp.pending.field.clone();
    let p = f.p() as i128;
    let mut truncations = Vec::new();
    let mut steps = Vec::new();
    let stop = loop {
        if steps.len() >= budget {
            break StopReason::Budget;
        }
        let r = cp.r;
        let pp = &cp.pending;
        let pows: Vec<Q> = (0..pp.coeffs.len()).map(|j| r * Q::from(p.pow(j as u32))).collect();
        // c from known valuations; an unknown coefficient must not undercut it
        let c = pp.coeffs.iter().zip(&pows).filter_map(|(pj, rp)| pj.val().map(|v| Q::from(v as i128) + rp)).min().expect("monic");
        if pp.coeffs.iter().zip(&pows).any(|(pj, rp)| pj.val().is_none() && pj.prec.is_some_and(|pr| Q::from(pr as i128) + rp <= c)) {
            break StopReason::Precision;
        }
        let boundary: Vec<u32> = pp
            .coeffs
            .iter()
            .zip(&pows)
            .map(|(pj, rp)| {
                let e = c - rp;
                if e.is_integer() { pj.coeff(e.to_integer() as i64) } else { 0 }
            })
            .collect();
        // gap to the next contribution, and the window where R is known
        let xmin = min_support(&cp.certified)?;
        let mut g: Option<Q> = None;
        let mut bump = |v: Q| g = Some(g.map_or(v, |g: Q| g.min(v)));
        for (j, (pj, rp)) in pp.coeffs.iter().zip(&pows).enumerate() {
            for &e in pj.terms.keys() {
                let v = Q::from(e as i128) + rp - c;
                if v.is_positive() {
                    bump(v);
                }
            }
            if let Some(pr) = pj.prec {
                bump(Q::from(pr as i128) + rp - c);
                if let Some(m) = xmin {
                    bump(Q::from(pr as i128) + m * Q::from(p.pow(j as u32)) - c);
                }
            }
        }
        let g = match g {
            Some(g) if !g.is_positive() => break StopReason::Precision,
            Some(g) => g,
            // nothing beyond the boundary; grow the radius geometrically
            None => r.max(Q::from(1)),
        };
        let resid = sub(&cp.rhs, &pp.apply(&cp.certified)?)?;
        if !is_zero(&truncate(&resid, &c)?)? {
            break StopReason::Inconsistent(format!("residual has support below c = {}", c));
        }
        let h = truncate(&shift(&resid, 1, &-c)?, &g)?;
        let lowest = boundary.iter().position(|&d| d != 0).expect("boundary polynomial is nonzero");
        let top = boundary.iter().rposition(|&d| d != 0).unwrap();
        let qpoly = AdditivePoly::new(&f, boundary[..=top].to_vec())?;
        let Some(split) = qpoly.find_split() else {
            break StopReason::NotSplit { extension_degree: splitting_degree(&boundary[lowest..=top], &f), boundary };
        };
        let zeros = lowest as i32;
        let rho = g / Q::from(p).pow(zeros);
        let flags = vec![0; split.degree()];
        let w = additive_solve(&split, &h, &flags, &rho)?;
        let mut w = truncate(&w.y, &rho)?;
        // pick the homogeneous root matching the leading data
        let mut branch = 0;
        if let Some((lead, lr)) = leading {
            if r < *lr {
                let want = lead.coeff(&r);
                let have = w.coeff(&Q::zero());
                let roots = qpoly.roots();
                branch = match roots.iter().find(|&&z| f.add(have, z) == want) {
                    Some(&z) => z,
                    None => break StopReason::Inconsistent(format!("no branch matches the leading coefficient at {}", r)),
                };
                w = add(&w, &QuasiAutomaticSeries::monomial(&f, branch, Q::zero())?)?;
            }
        }
        let next_r = r + rho;
        cp.certified = truncate(&add(&cp.certified, &shift(&w, 1, &r)?)?, &next_r)?;
        cp.r = next_r;
        steps.push(WitnessStep { r, c, boundary, branch, next_r });
        truncations.push((next_r, cp.certified.clone()));
    };
    Ok(WitnessReport { truncations, steps, stop, checkpoint: cp })
}
