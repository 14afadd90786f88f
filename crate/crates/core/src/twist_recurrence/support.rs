//! The support sets S_{a,b,c}: rationals s for which the fractional part of
//! −as has base-p digit sum at most c, with ⌈as⌉ ≥ −b.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::base_p_codec::int_digits;
use crate::coeff_fields::Field;
use crate::dfao_engine::{canonical_lp, digit_alphabet, Dfao};
use crate::error::{Error, Result};
use crate::semilinear::{pad_normalize, relation_dfao, STATE_CAP};
use crate::series_core::{min_support, shift, support_dfao, to_plain, QuasiAutomaticSeries, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportSpec {
    pub a: u64,
    pub b: i64,
    pub c: u32,
}

impl SupportSpec {
    pub fn new(a: u64, b: i64, c: u32) -> Result<SupportSpec> {
        if a == 0 {
            return Err(Error::user("support parameter a must be positive"));
        }
        Ok(SupportSpec { a, b, c })
    }
}

/// Splits q = N/p^k with p ∤ N unless k = 0; None if the denominator has
/// another prime factor.
pub(crate) fn p_adic_parts(q: &Q, p: u32) -> Option<(i128, u32)> {
    let mut d = *q.denom();
    let mut k = 0;
    while d % p as i128 == 0 {
        d /= p as i128;
        k += 1;
    }
    (d == 1).then(|| (*q.numer(), k))
}

pub fn sabc_member(spec: &SupportSpec, p: u32, s: &Q) -> bool {
    let v = -(s * Q::from(spec.a as i128));
    let fl = v.floor();
    let n = -fl.to_integer();
    if n < -(spec.b as i128) {
        return false;
    }
    let Some((num, _)) = p_adic_parts(&(v - fl), p) else { return false };
    debug_assert!(!num.is_negative());
    let sum: u64 = int_digits(num as u128, p).iter().map(|&d| d as u64).sum();
    sum <= spec.c as u64
}

/// Canonical-word automaton for a = 1. For a fraction 0.u₁…u_k with u_k ≠ 0
/// the digits of 1 − u sum to 1 + Σ(p − 1 − u_i).
fn unit_dfao(p: u32, b: i64, c: u32) -> Result<Dfao> {
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum St {
        Int(i64),
        Frac(i64, u32, bool),
    }
    let r = p as usize;
    let bound = (-b).max(0);
    let mut ids: HashMap<St, u32> = HashMap::new();
    let mut states = vec![St::Int(0)];
    ids.insert(St::Int(0), 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::with_capacity(r + 1);
        for a in 0..=r {
            let next = match states[i] {
                St::Int(v) if a < r => St::Int((v * p as i64 + a as i64).min(bound)),
                St::Int(v) => St::Frac(v, 0, false),
                // a second mark never reaches canonical words; park it anywhere
                St::Frac(v, t, any) if a == r => St::Frac(v, t, any),
                St::Frac(v, t, _) => St::Frac(v, (t + p - 1 - a as u32).min(c), true),
            };
            let l = states.len() as u32;
            row.push(*ids.entry(next).or_insert_with(|| {
                states.push(next);
                l
            }));
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states
        .iter()
        .map(|s| match *s {
            St::Frac(v, t, any) => (v + any as i64 >= bound && (!any || t < c)) as u32,
            St::Int(_) => 0,
        })
        .collect();
    let raw = Dfao::new(p, digit_alphabet(p, true), delta, 0, outputs)?;
    Ok(raw.product(&canonical_lp(p), |x, y| x & y)?.minimize())
}

/// Membership automaton on canonical words of nonnegative values.
pub fn sabc_dfao(spec: &SupportSpec, p: u32) -> Result<Dfao> {
    let unit = unit_dfao(p, spec.b, spec.c)?;
    if spec.a == 1 {
        return Ok(unit);
    }
    // s ∈ S_{a,b,c} iff a·s ∈ S_{1,b,c}
    let f = Field::default_for(p, 1)?;
    let a = i64::try_from(spec.a).map_err(|_| Error::user("support parameter a too large"))?;
    let h = relation_dfao(&[pad_normalize(&unit)?], a, &[1], 0, &f, STATE_CAP)?;
    Ok(h.map_outputs(|o| (o != 0) as u32).minimize())
}

/// Exact containment of supp x in S_{a,b,c}. Negative supports are shifted
/// by an integer k first, using S_{a,b,c} + k = S_{a,b−ak,c}.
pub fn support_within(x: &QuasiAutomaticSeries, spec: &SupportSpec) -> Result<bool> {
    let Some(lo) = min_support(x)? else { return Ok(true) };
    let k = if lo.is_negative() { (-lo).ceil().to_integer() } else { 0 };
    let xs = if k.is_zero() { x.clone() } else { shift(x, 1, &Q::from(k))? };
    let plain = QuasiAutomaticSeries::plain(to_plain(&xs)?);
    let shifted = SupportSpec { b: spec.b - (spec.a as i128 * k) as i64, ..*spec };
    let outside = support_dfao(&plain)?.product(&sabc_dfao(&shifted, x.p())?, |s, m| s & (1 - m))?;
    Ok(outside.is_empty_language())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_p_codec::{encode_frac, PAdicNonneg};

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    #[test]
    fn member_examples() {
        let s = SupportSpec::new(1, 0, 2).unwrap();
        assert!(sabc_member(&s, 2, &q(-3, 4)));
        assert!(!sabc_member(&s, 2, &q(-7, 8)));
        assert!(sabc_member(&s, 2, &q(5, 1)));
        assert!(!sabc_member(&s, 2, &q(-5, 4)), "⌈s⌉ = −1 < −b");
        assert!(!sabc_member(&s, 3, &q(1, 2)));
        // −p^{−1−n} − p^{−1−m−n} has digit sum 2
        for p in [2u32, 3] {
            for n in 1..5u32 {
                for m in 1..5u32 {
                    let e = -q(1, (p as i128).pow(1 + n)) - q(1, (p as i128).pow(1 + m + n));
                    assert!(sabc_member(&s, p, &e));
                }
            }
        }
    }

    #[test]
    fn automaton_matches_membership() {
        let specs = [(1, 0, 2), (1, -3, 1), (3, 0, 2), (2, -1, 0), (5, 2, 3), (1, 0, 0)];
        for p in [2u32, 3] {
            for &(a, b, c) in &specs {
                let spec = SupportSpec::new(a, b, c).unwrap();
                let m = sabc_dfao(&spec, p).unwrap();
                for k in 0..=6u32 {
                    for n in 0..512u128 {
                        let v = PAdicNonneg::new(n, k, p);
                        let w = encode_frac(v, p);
                        let want = sabc_member(&spec, p, &q(n as i128, (p as i128).pow(k)));
                        assert_eq!(m.run_word(&w).unwrap() != 0, want, "p={} spec={:?} {}/{}^{}", p, spec, n, p, k);
                    }
                }
            }
        }
    }

    #[test]
    fn containment_of_series_support() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::finite(&f, &[(q(-3, 4), 1), (q(2, 1), 1)]).unwrap();
        assert!(support_within(&x, &SupportSpec::new(1, 0, 2).unwrap()).unwrap());
        assert!(!support_within(&x, &SupportSpec::new(1, 0, 1).unwrap()).unwrap());
        let y = QuasiAutomaticSeries::finite(&f, &[(q(-7, 8), 1)]).unwrap();
        assert!(!support_within(&y, &SupportSpec::new(1, 0, 2).unwrap()).unwrap());
        assert!(support_within(&y, &SupportSpec::new(1, 0, 3).unwrap()).unwrap());
    }
}
