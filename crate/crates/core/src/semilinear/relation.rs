//! Relation sums over base-p words:
//!
//!   h(s) = Σ { Π g_i(t_i) : c₀‖s‖ = Σ c_i‖t_i‖ + b }
//!
//! computed by an automaton reading s most significant digit first while
//! guessing the digits of every t_i in the same column. The running quantity
//! D = c₀·(prefix of s) − Σ c_i·(prefix of t_i), shifted by b at the radix
//! mark, is a bounded borrow; a tuple is counted when D ends at 0. This is
//! the reversal of the least-significant-first carry transducer, and reading
//! in this direction lets fractional tails of the t_i be summed in closed form.

use std::collections::HashMap;

use super::biauto::{dfao_to_series, pad_normalize, BiautomaticData};
use crate::coeff_fields::Field;
use crate::dfao_engine::{digit_alphabet, Dfao};
use crate::error::{Error, Result};

pub const ITER_CAP: usize = 1 << 16;

struct Engine<'a> {
    inputs: &'a [Dfao],
    p: u32,
    c0: i64,
    c: &'a [i64],
    b: i64,
    int_bound: i64,
    frac_bound: i64,
    field: &'a Field,
    cfg_ids: HashMap<(Vec<u32>, i64), u32>,
    cfgs: Vec<(Vec<u32>, i64)>,
    memo: HashMap<(u32, u32, bool, bool), Vec<u32>>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Phase {
    Int,
    Frac,
    Dead,
}

type Weights = Vec<(u32, u32)>;

impl<'a> Engine<'a> {
    fn intern(&mut self, states: Vec<u32>, d: i64) -> u32 {
        let key = (states, d);
        if let Some(&id) = self.cfg_ids.get(&key) {
            return id;
        }
        let id = self.cfgs.len() as u32;
        self.cfgs.push(key.clone());
        self.cfg_ids.insert(key, id);
        id
    }

    /// Successor configurations (with multiplicity) on s-digit `sd`.
    fn succ(&mut self, cfg: u32, sd: u32, frac: bool, nonzero_only: bool) -> Vec<u32> {
        if let Some(v) = self.memo.get(&(cfg, sd, frac, nonzero_only)) {
            return v.clone();
        }
        let (states, d) = self.cfgs[cfg as usize].clone();
        let r = self.inputs.len();
        let bound = if frac { self.frac_bound } else { self.int_bound };
        let p = self.p as usize;
        let mut out = Vec::new();
        let mut t = vec![0usize; r];
        loop {
            if !(nonzero_only && t.iter().all(|&x| x == 0)) {
                let mut nd = self.p as i64 * d + self.c0 * sd as i64;
                for i in 0..r {
                    nd -= self.c[i] * t[i] as i64;
                }
                if nd.abs() <= bound {
                    let ns: Vec<u32> = (0..r).map(|i| self.inputs[i].step(states[i], t[i])).collect();
                    out.push(self.intern(ns, nd));
                }
            }
            let mut k = 0;
            while k < r {
                t[k] += 1;
                if t[k] < p {
                    break;
                }
                t[k] = 0;
                k += 1;
            }
            if k == r {
                break;
            }
        }
        self.memo.insert((cfg, sd, frac, nonzero_only), out.clone());
        out
    }

    fn radix(&mut self, cfg: u32) -> Option<u32> {
        let (states, d) = self.cfgs[cfg as usize].clone();
        let nd = d - self.b;
        if nd.abs() > self.frac_bound {
            return None;
        }
        let ns: Vec<u32> = (0..self.inputs.len()).map(|i| self.inputs[i].step(states[i], self.p as usize)).collect();
        Some(self.intern(ns, nd))
    }

    fn apply(&mut self, w: &Weights, f: impl Fn(&mut Self, u32) -> Vec<u32>) -> Weights {
        let mut acc: HashMap<u32, u32> = HashMap::new();
        for &(cfg, wt) in w {
            for n in f(self, cfg) {
                let e = acc.entry(n).or_insert(0);
                *e = self.field.add(*e, wt);
            }
        }
        let mut v: Weights = acc.into_iter().filter(|&(_, x)| x != 0).collect();
        v.sort_unstable();
        v
    }

    fn output(&self, cfg: u32) -> u32 {
        let (states, d) = &self.cfgs[cfg as usize];
        if *d != 0 {
            return 0;
        }
        let f = self.field;
        states.iter().enumerate().fold(1, |acc, (i, &q)| f.mul(acc, self.inputs[i].outputs[q as usize]))
    }
}

/// Automaton computing h on canonical words. Inputs must answer correctly on
/// padded words (see [`pad_normalize`]); the coefficients c_i must be positive.
pub fn relation_dfao(inputs: &[Dfao], c0: i64, c: &[i64], b: i64, field: &Field, cap: usize) -> Result<Dfao> {
    let p = inputs.first().map(|m| m.p).ok_or_else(|| Error::user("relation needs at least one input"))?;
    if c.len() != inputs.len() || c0 <= 0 || c.iter().any(|&x| x <= 0) {
        return Err(Error::user("relation coefficients must be positive, one per input"));
    }
    if inputs.iter().any(|m| m.p != p || m.sigma() != p as usize + 1) {
        return Err(Error::user("relation inputs must share the digit-plus-radix alphabet"));
    }
    let csum = c0 + c.iter().sum::<i64>();
    let mut e = Engine {
        inputs,
        p,
        c0,
        c,
        b,
        int_bound: 2 * csum + b.abs(),
        frac_bound: csum,
        field,
        cfg_ids: HashMap::new(),
        cfgs: Vec::new(),
        memo: HashMap::new(),
    };
    let init_cfg = e.intern(inputs.iter().map(|m| m.q0).collect(), 0);
    // Heads: columns where s has a leading zero and some t_i does not.
    let mut init: HashMap<u32, u32> = HashMap::from([(init_cfg, 1)]);
    let mut layer = e.apply(&vec![(init_cfg, 1)], |e, cfg| e.succ(cfg, 0, false, true));
    let mut iters = 0;
    while !layer.is_empty() {
        for &(cfg, w) in &layer {
            let x = init.entry(cfg).or_insert(0);
            *x = field.add(*x, w);
        }
        layer = e.apply(&layer, |e, cfg| e.succ(cfg, 0, false, false));
        iters += 1;
        if iters > ITER_CAP {
            return Err(Error::resource("relation head expansion", ITER_CAP));
        }
    }
    let mut init: Weights = init.into_iter().filter(|&(_, w)| w != 0).collect();
    init.sort_unstable();

    let start = (Phase::Int, init);
    let mut ids: HashMap<(Phase, Weights), u32> = HashMap::new();
    ids.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (phase, w) = states[i].clone();
        let mut row = Vec::with_capacity(p as usize + 1);
        for a in 0..=p {
            let next = match phase {
                Phase::Int if a < p => (Phase::Int, e.apply(&w, |e, cfg| e.succ(cfg, a, false, false))),
                Phase::Int => (Phase::Frac, e.apply(&w, |e, cfg| e.radix(cfg).into_iter().collect())),
                Phase::Frac if a < p => (Phase::Frac, e.apply(&w, |e, cfg| e.succ(cfg, a, true, false))),
                _ => (Phase::Dead, Vec::new()),
            };
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::resource("relation automaton states", cap));
                    }
                    let id = states.len() as u32;
                    ids.insert(next.clone(), id);
                    states.push(next);
                    id
                }
            };
            row.push(id);
        }
        delta.push(row);
        i += 1;
    }

    // Tails: trailing columns where s has run out of fractional digits.
    let mut fcfgs: Vec<u32> = states.iter().filter(|(ph, _)| *ph == Phase::Frac).flat_map(|(_, w)| w.iter().map(|&(c, _)| c)).collect();
    fcfgs.sort_unstable();
    fcfgs.dedup();
    let mut index: HashMap<u32, usize> = fcfgs.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut k = 0;
    while k < fcfgs.len() {
        for n in e.succ(fcfgs[k], 0, true, false) {
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(n) {
                e.insert(fcfgs.len());
                fcfgs.push(n);
            }
        }
        k += 1;
        if fcfgs.len() > cap {
            return Err(Error::resource("relation tail configurations", cap));
        }
    }
    let nf = fcfgs.len();
    let all: Vec<Vec<usize>> = (0..nf).map(|k| e.succ(fcfgs[k], 0, true, false).iter().map(|c| index[c]).collect()).collect();
    let nz: Vec<Vec<usize>> = (0..nf).map(|k| e.succ(fcfgs[k], 0, true, true).iter().map(|c| index[c]).collect()).collect();
    let o: Vec<u32> = fcfgs.iter().map(|&c| e.output(c)).collect();
    let push = |u: &[u32], succ: &[Vec<usize>]| -> Vec<u32> { succ.iter().map(|s| s.iter().fold(0, |acc, &j| field.add(acc, u[j]))).collect() };
    let u0 = push(&o, &nz);
    let step = |u: &Vec<u32>| push(u, &all);
    let (mu, lambda) = brent(&u0, &step, ITER_CAP)?;
    let mut tail = o.clone();
    let mut u = u0.clone();
    for _ in 0..mu {
        for j in 0..nf {
            tail[j] = field.add(tail[j], u[j]);
        }
        u = step(&u);
    }
    let mut undefined = vec![false; nf];
    for _ in 0..lambda {
        for j in 0..nf {
            undefined[j] |= u[j] != 0;
        }
        u = step(&u);
    }

    let mut outputs = Vec::with_capacity(states.len());
    for (ph, w) in &states {
        if *ph != Phase::Frac {
            outputs.push(0);
            continue;
        }
        let mut acc = 0;
        for &(c, wt) in w {
            let j = index[&c];
            if undefined[j] {
                return Err(Error::user("relation sum has infinitely many nonzero terms (input support is not well ordered)"));
            }
            acc = field.add(acc, field.mul(wt, tail[j]));
        }
        outputs.push(acc);
    }
    Ok(Dfao { p, alphabet: digit_alphabet(p, true), states: states.len(), delta, q0: 0, outputs }.minimize())
}

/// Brent's cycle detection: returns (preperiod, period) of x₀, f(x₀), ….
fn brent<T: PartialEq + Clone>(x0: &T, f: &dyn Fn(&T) -> T, cap: usize) -> Result<(usize, usize)> {
    let mut power = 1;
    let mut lam = 1;
    let mut tortoise = x0.clone();
    let mut hare = f(x0);
    let mut steps = 0;
    while tortoise != hare {
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = f(&hare);
        lam += 1;
        steps += 1;
        if steps > cap {
            return Err(Error::resource("tail iteration", cap));
        }
    }
    let mut tortoise = x0.clone();
    let mut hare = x0.clone();
    for _ in 0..lam {
        hare = f(&hare);
    }
    let mut mu = 0;
    while tortoise != hare {
        tortoise = f(&tortoise);
        hare = f(&hare);
        mu += 1;
    }
    Ok((mu, lam))
}

/// g′(s) = g(t) when ‖s‖ = a‖t‖ + b, else 0. The input is trusted on canonical words only.
pub fn affine_reindex_dfao(g: &Dfao, a: u64, b: u64, field: &Field) -> Result<Dfao> {
    if a == 0 {
        return Err(Error::user("affine reindex needs a > 0"));
    }
    if a == 1 && b == 0 {
        return Ok(g.minimize());
    }
    let padded = pad_normalize(g)?;
    relation_dfao(&[padded], 1, &[a as i64], b as i64, field, super::biauto::STATE_CAP)
}

pub fn affine_reindex(x: &BiautomaticData, a: u64, b: u64) -> Result<BiautomaticData> {
    if a == 1 && b == 0 {
        return Ok(x.clone());
    }
    let g = x.to_dfao(super::biauto::STATE_CAP)?;
    dfao_to_series(&affine_reindex_dfao(&g, a, b, &x.field)?, &x.field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base_p_codec::{encode_frac, PAdicNonneg};
    use crate::semilinear::biauto::run_sym;

    fn indicator(p: u32, v: PAdicNonneg) -> Dfao {
        // accepts exactly the canonical word of v
        let w = encode_frac(v, p);
        let n = w.len();
        let dead = n as u32 + 1;
        let mut delta = vec![vec![dead; p as usize + 1]; n + 2];
        for (i, s) in w.syms.iter().enumerate() {
            delta[i][s.index(p)] = i as u32 + 1;
        }
        let mut out = vec![0; n + 2];
        out[n] = 1;
        Dfao::new(p, digit_alphabet(p, true), delta, 0, out).unwrap()
    }

    #[test]
    fn reindex_point_mass() {
        let f = Field::default_for(2, 1).unwrap();
        let g = indicator(2, PAdicNonneg::int(2));
        let h = affine_reindex_dfao(&g, 3, 1, &f).unwrap();
        for n in 0..32u128 {
            let w = encode_frac(PAdicNonneg::int(n), 2);
            assert_eq!(run_sym(&h, &w.syms), (n == 7) as u32, "n = {}", n);
        }
        assert_eq!(run_sym(&h, &encode_frac(PAdicNonneg::int(4), 2).syms), 0);
    }

    #[test]
    fn reindex_fractional_point() {
        let f = Field::default_for(2, 1).unwrap();
        let g = indicator(2, PAdicNonneg::new(5, 2, 2));
        let h = affine_reindex_dfao(&g, 3, 1, &f).unwrap();
        assert_eq!(run_sym(&h, &encode_frac(PAdicNonneg::new(19, 2, 2), 2).syms), 1);
        assert_eq!(run_sym(&h, &encode_frac(PAdicNonneg::new(15, 2, 2), 2).syms), 0);
    }

    #[test]
    fn sum_of_two_points_counts_pairs() {
        // h(s) = #{(t1, t2) : s = t1 + t2, t1 ∈ {1/3, 1}, t2 ∈ {1/9, 1}} mod 3
        let f = Field::default_for(3, 1).unwrap();
        let p = 3;
        let pt = |n, k| PAdicNonneg::new(n, k, p);
        let a = indicator(p, pt(1, 1)).product(&indicator(p, pt(1, 0)), |x, y| x + y).unwrap();
        let b = indicator(p, pt(1, 2)).product(&indicator(p, pt(1, 0)), |x, y| x + y).unwrap();
        let h = relation_dfao(&[pad_normalize(&a).unwrap(), pad_normalize(&b).unwrap()], 1, &[1, 1], 0, &f, 1 << 16).unwrap();
        let at = |n, k| run_sym(&h, &encode_frac(pt(n, k), p).syms);
        assert_eq!(at(2, 0), 1);
        assert_eq!(at(4, 2), 1);
        assert_eq!(at(4, 1), 1);
        assert_eq!(at(10, 2), 1);
        assert_eq!(at(5, 1), 0);
    }
    #[test]
    fn reindex_agrees_with_transducer() {
        // independent route: push each canonical word through the LSD-first transducer
        use crate::base_p_codec::affine_transducer;
        let f = Field::default_for(3, 1).unwrap();
        let p = 3;
        let delta = vec![vec![1, 2, 0, 3], vec![2, 2, 1, 3], vec![0, 1, 2, 3], vec![3, 4, 3, 3], vec![4, 3, 4, 4]];
        let g = Dfao::new(p, digit_alphabet(p, true), delta, 0, vec![0, 1, 2, 1, 2]).unwrap();
        let g = pad_normalize(&g).unwrap();
        for (a, b) in [(1u64, 2u64), (2, 0), (4, 1), (3, 5)] {
            let h = affine_reindex_dfao(&g, a, b, &f).unwrap();
            let tr = affine_transducer(p, a, b);
            for k in 0..3u32 {
                for n in 0..(81 * 3u128.pow(k)) {
                    let w = encode_frac(PAdicNonneg::new(n, k, p), p);
                    let img = tr.apply(&w.reverse()).reverse();
                    assert_eq!(run_sym(&h, &img.syms), run_sym(&g, &w.syms), "a={} b={} n={} k={}", a, b, n, k);
                }
            }
        }
    }
}
