//! Coefficient automata for elementary series: finite supports, Dedekind
//! cuts, and the power function j ↦ ν^j.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use super::Q;
use crate::base_p_codec::{encode_frac, int_digits, PAdicNonneg};
use crate::coeff_fields::Field;
use crate::dfao_engine::{digit_alphabet, Dfao};

/// Value of j as n/p^k, if j ∈ Z[1/p]≥0.
pub fn to_padic(j: &Q, p: u32) -> Option<PAdicNonneg> {
    if *j.numer() < 0 {
        return None;
    }
    let mut d = *j.denom();
    let mut k = 0;
    while d % p as i128 == 0 {
        d /= p as i128;
        k += 1;
    }
    (d == 1).then(|| PAdicNonneg::new(*j.numer() as u128, k, p))
}

pub fn from_padic(v: PAdicNonneg, p: u32) -> Q {
    Q::new(v.n as i128, (p as i128).pow(v.k))
}

/// Trie automaton on canonical words with the given coefficients.
pub fn finite_dfao(p: u32, terms: &BTreeMap<PAdicNonneg, u32>) -> Dfao {
    let r = p as usize + 1;
    let mut delta: Vec<Vec<u32>> = vec![vec![u32::MAX; r]];
    let mut outputs = vec![0u32];
    for (v, &c) in terms {
        let w = encode_frac(*v, p);
        let mut q = 0usize;
        for s in &w.syms {
            let a = s.index(p);
            if delta[q][a] == u32::MAX {
                delta.push(vec![u32::MAX; r]);
                outputs.push(0);
                delta[q][a] = delta.len() as u32 - 1;
            }
            q = delta[q][a] as usize;
        }
        outputs[q] = c;
    }
    let dead = delta.len() as u32;
    delta.push(vec![dead; r]);
    outputs.push(0);
    for row in delta.iter_mut() {
        for t in row.iter_mut() {
            if *t == u32::MAX {
                *t = dead;
            }
        }
    }
    Dfao { p, alphabet: digit_alphabet(p, true), states: delta.len(), delta, q0: 0, outputs }.minimize()
}

/// Indicator of ‖s‖ < θ on canonical words, θ ≥ 0 rational.
pub fn cut_dfao(p: u32, theta: &Q) -> Dfao {
    let r = p as usize;
    let dn = *theta.denom();
    let (kint, rem) = theta.numer().div_rem(&dn);
    let kd: Vec<u32> = int_digits(kint as u128, p);
    let lk = kd.len();
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum St {
        // digits read (capped at lk + 1) and lexicographic comparison with the prefix of ⌊θ⌋
        Int(usize, i8),
        // p^m·(Dn·f_m − R), always in (−Dn, 0)
        Frac(i128),
        Yes,
        No,
        Dead,
    }
    let start = St::Int(0, 0);
    let mut ids: HashMap<St, u32> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::new();
        for a in 0..=r {
            let next = match states[i] {
                St::Int(n, c) if a < r => {
                    if n >= lk {
                        St::Int(lk + 1, 1)
                    } else {
                        let c2 = if c != 0 { c } else { (a as i64 - kd[n] as i64).signum() as i8 };
                        St::Int(n + 1, c2)
                    }
                }
                St::Int(n, c) => {
                    if n < lk || (n == lk && c < 0) {
                        St::Yes
                    } else if n == lk && c == 0 {
                        if rem == 0 {
                            St::No
                        } else {
                            St::Frac(-rem)
                        }
                    } else {
                        St::No
                    }
                }
                St::Frac(e) if a < r => {
                    let e2 = p as i128 * e + dn * a as i128;
                    if e2 >= 0 {
                        St::No
                    } else if e2 <= -dn {
                        St::Yes
                    } else {
                        St::Frac(e2)
                    }
                }
                St::Yes if a < r => St::Yes,
                St::No if a < r => St::No,
                _ => St::Dead,
            };
            let l = states.len() as u32;
            let id = *ids.entry(next).or_insert_with(|| {
                states.push(next);
                l
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states.iter().map(|s| matches!(s, St::Frac(_) | St::Yes) as u32).collect();
    Dfao { p, alphabet: digit_alphabet(p, true), states: states.len(), delta, q0: 0, outputs }.minimize()
}

/// j ↦ ν^j with the p-power roots taken inside F_q.
pub fn power_dfao(field: &Field, nu: u32) -> Dfao {
    let p = field.p();
    let e = field.e() as i64;
    let r = p as usize;
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum St {
        Int(u32),
        Frac(u32, i64),
        Dead,
    }
    let start = St::Int(1);
    let mut ids: HashMap<St, u32> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let mut row = Vec::new();
        for a in 0..=r {
            let next = match states[i] {
                St::Int(acc) if a < r => St::Int(field.mul(field.pow(acc, p as u64), field.pow(nu, a as u64))),
                St::Int(acc) => St::Frac(acc, 0),
                St::Frac(acc, pos) if a < r => {
                    let pos = pos + 1;
                    let root = field.frob(nu, -pos);
                    St::Frac(field.mul(acc, field.pow(root, a as u64)), pos.rem_euclid(e))
                }
                _ => St::Dead,
            };
            let l = states.len() as u32;
            let id = *ids.entry(next).or_insert_with(|| {
                states.push(next);
                l
            });
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }
    let outputs = states.iter().map(|s| if let St::Frac(acc, _) = s { *acc } else { 0 }).collect();
    Dfao { p, alphabet: digit_alphabet(p, true), states: states.len(), delta, q0: 0, outputs }.minimize()
}
