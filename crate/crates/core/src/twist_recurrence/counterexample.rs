//! y = Σ_{m≥1} λ^{p^{−1}+⋯+p^{−m}} t^{−p^{−1}−p^{−1−m}} and x = Σ_{n≥1} y^{p^{−n}}
//! over F_p(λ^{1/p^∞}). They satisfy t·y^p − λt^{1/p}·y = λt^{−1/p} and
//! x^p − x = y, so x is algebraic, yet no LRR fits all of x's sequences.

use serde_json::{json, Value};

use super::lrr::lrr_nullspace;
use super::support::{p_adic_parts, sabc_member};
use super::{tc_sequence, CoeffOracle, Family, SupportSpec};
use crate::coeff_fields::field::is_prime;
use crate::coeff_fields::LambdaElement;
use crate::error::{Error, Result};
use crate::series_core::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CounterexampleSeries {
    Y,
    X,
}

#[derive(Clone, Debug)]
pub struct CounterexampleOracle {
    p: u32,
    which: CounterexampleSeries,
}

fn pk(p: u32, k: u32) -> i128 {
    (p as i128).pow(k)
}

/// λ^{(p^{−1}+⋯+p^{−m})/p^n}.
fn lambda_weight(p: u32, m: u32, n: u32) -> LambdaElement {
    let num = (pk(p, m) - 1) / (p as i128 - 1);
    LambdaElement::lambda_pow(p, num as i64, m + n)
}

impl CounterexampleOracle {
    /// The (m, n) index of a support point, n = 0 for y.
    pub fn decode(&self, e: &Q) -> Option<(u32, u32)> {
        let p = self.p;
        match self.which {
            CounterexampleSeries::Y => {
                // −e − 1/p = p^{−1−m}
                let (num, k) = p_adic_parts(&(-e - Q::new(1, p as i128)), p)?;
                (num == 1 && k >= 2).then(|| (k - 1, 0))
            }
            CounterexampleSeries::X => {
                // −e = (p^m + 1)/p^{1+m+n}
                let (num, k) = p_adic_parts(&-e, p)?;
                let mut r = num - 1;
                let mut m = 0;
                while r > 1 && r % p as i128 == 0 {
                    r /= p as i128;
                    m += 1;
                }
                (r == 1 && m >= 1 && k >= m + 2).then(|| (m, k - 1 - m))
            }
        }
    }

    /// Exponents of the terms with m, n ≤ depth.
    pub fn support(&self, depth: u32) -> Vec<Q> {
        let p = self.p as i128;
        let ns = match self.which {
            CounterexampleSeries::Y => 0..=0,
            CounterexampleSeries::X => 1..=depth,
        };
        let mut out = Vec::new();
        for n in ns {
            for m in 1..=depth {
                out.push(-(Q::new(1, p) + Q::new(1, p.pow(m + 1))) / Q::from(p.pow(n)));
            }
        }
        out
    }
}

impl CoeffOracle for CounterexampleOracle {
    type Elem = LambdaElement;
    fn p(&self) -> u32 {
        self.p
    }
    fn ctx(&self) -> &u32 {
        &self.p
    }
    fn coeff(&self, e: &Q) -> LambdaElement {
        match self.decode(e) {
            Some((m, n)) => lambda_weight(self.p, m, n),
            None => LambdaElement::zero(self.p),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub p: u32,
    pub depth: u32,
    pub y: CounterexampleOracle,
    pub x: CounterexampleOracle,
    /// Exponents at which each relation was checked.
    pub checked: [usize; 2],
}

impl Counterexample {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "depth": self.depth,
            "relations": [
                { "relation": "t*y^p - lambda*t^(1/p)*y = lambda*t^(-1/p)", "exponents_checked": self.checked[0], "residual_zero": true },
                { "relation": "x^p - x = y", "exponents_checked": self.checked[1], "residual_zero": true },
            ],
        })
    }
}

fn dedup(v: &mut Vec<Q>) {
    v.sort();
    v.dedup();
}

/// Both oracles, with the defining relations verified exactly at every
/// exponent touched by a term with m, n ≤ depth.
pub fn build_counterexample(p: u32, depth: u32) -> Result<Counterexample> {
    if !is_prime(p) {
        return Err(Error::user(format!("{} is not prime", p)));
    }
    if depth == 0 || depth > 12 {
        return Err(Error::user("counterexample depth must lie in 1..=12"));
    }
    let y = CounterexampleOracle { p, which: CounterexampleSeries::Y };
    let x = CounterexampleOracle { p, which: CounterexampleSeries::X };
    let pq = Q::from(p as i128);
    let inv_p = Q::new(1, p as i128);
    let lam = LambdaElement::lambda_pow(p, 1, 0);
    let spec = SupportSpec { a: 1, b: 0, c: 2 };
    for e in y.support(depth).iter().chain(&x.support(depth)) {
        if !sabc_member(&spec, p, e) {
            return Err(Error::verification(format!("exponent {} outside S_(1,0,2)", e)));
        }
    }

    // coefficient of t^e in t·y^p − λt^{1/p}·y − λt^{−1/p}
    let mut e1: Vec<Q> = vec![-inv_p];
    for s in y.support(depth) {
        e1.push(Q::from(1) + s * pq);
        e1.push(inv_p + s);
    }
    dedup(&mut e1);
    for e in &e1 {
        let mut r = y.coeff(&((e - Q::from(1)) / pq)).frobenius(1).sub(&lam.mul(&y.coeff(&(e - inv_p))));
        if *e == -inv_p {
            r = r.sub(&lam);
        }
        if !r.is_zero() {
            return Err(Error::verification(format!("first relation fails at exponent {}: {:?}", e, r)));
        }
    }

    // coefficient of t^e in x^p − x − y
    let mut e2: Vec<Q> = y.support(depth);
    for s in x.support(depth) {
        e2.push(s * pq);
        e2.push(s);
    }
    dedup(&mut e2);
    for e in &e2 {
        let r = x.coeff(&(e / pq)).frobenius(1).sub(&x.coeff(e)).sub(&y.coeff(e));
        if !r.is_zero() {
            return Err(Error::verification(format!("x^p − x = y fails at exponent {}: {:?}", e, r)));
        }
    }
    Ok(Counterexample { p, depth, y, x, checked: [e1.len(), e2.len()] })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub order: usize,
    pub families: Vec<Family>,
    pub nullspace_dim: usize,
}

impl Refutation {
    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "families": self.families.iter().map(Family::to_json).collect::<Vec<_>>(),
            "nullspace_dim": self.nullspace_dim,
        })
    }
}

/// Joint order-k LRR system over the families b_{j−1} = b_j = 1 for
/// j = 2..k+3, solved exactly over the λ-field.
pub fn refute_counterexample(cx: &Counterexample, k: usize) -> Result<Refutation> {
    let p = cx.p;
    let window = 2;
    let families: Vec<Family> = (2..=k + 3)
        .map(|j| {
            let mut d = vec![0; j];
            d[j - 2] = 1;
            d[j - 1] = 1;
            Family::new(j, d, p, 2)
        })
        .collect::<Result<_>>()?;
    let streams: Vec<Vec<LambdaElement>> =
        families.iter().map(|fam| tc_sequence(|z| cx.x.coeff(z), p, 2, fam, window + k)).collect::<Result<_>>()?;
    let null = lrr_nullspace(&streams, k, window, &p);
    Ok(Refutation { order: k, families, nullspace_dim: null.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twist_recurrence::{twist_recurrent_check, TrBudget, TrVerdict};

    #[test]
    fn relations_hold_at_depth_six() {
        for p in [2u32, 3, 5] {
            let cx = build_counterexample(p, 6).unwrap();
            assert!(cx.checked[0] > 6 && cx.checked[1] > 36);
        }
        assert!(build_counterexample(4, 3).is_err());
    }

    #[test]
    fn leading_double_sum_term() {
        for p in [2u32, 3] {
            let cx = build_counterexample(p, 3).unwrap();
            let pp = p as i128;
            let e = -Q::new(1, pp * pp) - Q::new(1, pp * pp * pp);
            assert_eq!(cx.x.decode(&e), Some((1, 1)));
            assert_eq!(cx.x.coeff(&e), LambdaElement::lambda_pow(p, 1, 2));
            assert!(cx.x.coeff(&(-Q::new(1, pp))).is_zero());
            assert!(cx.y.coeff(&(e * Q::from(pp))).num_terms() == 1);
        }
    }

    #[test]
    fn family_sequences_match_closed_form() {
        // c_n = λ^{p^{1−j}+⋯+p^{1−j−n}} for j ≥ 3; the j = 2 family misses x
        for p in [2u32, 3] {
            let cx = build_counterexample(p, 4).unwrap();
            for j in 2..7usize {
                let mut d = vec![0; j];
                d[j - 2] = 1;
                d[j - 1] = 1;
                let fam = Family::new(j, d, p, 2).unwrap();
                let s = tc_sequence(|z| cx.x.coeff(z), p, 2, &fam, 6).unwrap();
                for (n, c) in s.iter().enumerate() {
                    if j == 2 {
                        assert!(c.is_zero());
                    } else {
                        let num = (pk(p, n as u32 + 1) - 1) / (p as i128 - 1);
                        assert_eq!(*c, LambdaElement::lambda_pow(p, num as i64, (j - 1 + n) as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn no_relation_up_to_order_four() {
        for p in [2u32, 3] {
            let cx = build_counterexample(p, 6).unwrap();
            for k in 1..=4 {
                let r = refute_counterexample(&cx, k).unwrap();
                assert_eq!(r.nullspace_dim, 0, "p={} k={}", p, k);
                assert_eq!(r.families.len(), k + 2);
                // monotone: every shorter order fails on the prefix
                for k2 in 0..k {
                    let r2 = refute_counterexample(&cx, k2).unwrap();
                    assert_eq!(r2.nullspace_dim, 0);
                    assert_eq!(r2.families[..], r.families[..k2 + 2]);
                }
            }
        }
    }

    #[test]
    fn bounded_check_fails_with_witness() {
        let cx = build_counterexample(2, 6).unwrap();
        let spec = SupportSpec { a: 1, b: 0, c: 2 };
        let budget = TrBudget { max_order: 3, depth: 6, digit_len: 6, m_count: 2 };
        match twist_recurrent_check(&cx.x, &spec, &budget).unwrap() {
            TrVerdict::Fail(w) => {
                assert_eq!((w.order, w.m, w.nullspace_dim), (3, 0, 0));
                assert!(w.families.len() <= 4);
                let s: Vec<Vec<LambdaElement>> =
                    w.families.iter().map(|f| tc_sequence(|z| cx.x.coeff(z), 2, 2, f, 6).unwrap()).collect();
                assert!(lrr_nullspace(&s, 3, 3, &2).is_empty());
            }
            v => panic!("expected a failure, got {:?}", v),
        }
    }
}
