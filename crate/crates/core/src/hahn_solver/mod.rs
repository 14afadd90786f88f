//! Solvers producing generalized power series: Artin–Schreier equations,
//! additive equations P(φ)(y) = x in split form, and truncation witnesses for
//! bounded-support roots of twisted polynomials.

mod witness;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::coeff_fields::Field;
use crate::dfao_engine::{digit_alphabet, Dfao};
use crate::error::{Error, Result};
use crate::semilinear::STATE_CAP;
use crate::series_core::{
    add, compact, frobenius_series, is_zero, is_zero_below, min_support, reindexed, scalar_mul, shift, sub, subst_power, to_plain, truncate, AutomaticSeries,
    QuasiAutomaticSeries, Q,
};

pub use witness::{truncation_witness, Checkpoint, StopReason, TruncLaurent, TwistedPoly, WitnessReport, WitnessStep};

/// Twisted polynomial P(T) = Σ d_j T^j over F_q, acting as P(φ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivePoly {
    pub field: Field,
    pub coeffs: Vec<u32>,
    /// μ_1..μ_k with P = u·(T − μ_1)⋯(T − μ_k), u = d_k.
    pub split: Option<Vec<u32>>,
}

/// Product in F_q[T; φ], where T·c = φ(c)·T.
fn twisted_mul(a: &[u32], b: &[u32], f: &Field) -> Vec<u32> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, f.frob(bj, i as i64)));
        }
    }
    out
}

/// Right division by T − μ; returns the quotient when the remainder vanishes.
fn right_divide_linear(a: &[u32], mu: u32, f: &Field) -> Option<Vec<u32>> {
    // q·(T − μ) = Σ q_j T^{j+1} − Σ q_j φ^j(μ) T^j
    let k = a.len() - 1;
    let mut q = vec![0u32; k];
    let mut rem = a.to_vec();
    for j in (0..k).rev() {
        q[j] = rem[j + 1];
        rem[j + 1] = 0;
        rem[j] = f.add(rem[j], f.mul(q[j], f.frob(mu, j as i64)));
    }
    (rem[0] == 0).then_some(q)
}

impl AdditivePoly {
    pub fn new(field: &Field, coeffs: Vec<u32>) -> Result<AdditivePoly> {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::user("additive polynomial is zero"));
        }
        if coeffs.iter().any(|&c| c >= field.q()) {
            return Err(Error::user("coefficient outside the field"));
        }
        Ok(AdditivePoly { field: field.clone(), coeffs, split: None })
    }

    /// u·(T − μ_1)⋯(T − μ_k).
    pub fn from_split(field: &Field, unit: u32, mus: &[u32]) -> Result<AdditivePoly> {
        if unit == 0 || unit >= field.q() || mus.iter().any(|&m| m >= field.q()) {
            return Err(Error::user("split form needs a nonzero unit and field elements"));
        }
        let mut c = vec![unit];
        for &m in mus {
            c = twisted_mul(&c, &[field.neg(m), 1], field);
        }
        Ok(AdditivePoly { field: field.clone(), coeffs: c, split: Some(mus.to_vec()) })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn unit(&self) -> u32 {
        *self.coeffs.last().unwrap()
    }

    /// Multiplies the split form back out and compares.
    pub fn check_split(&self) -> Result<()> {
        if let Some(mus) = &self.split {
            let back = AdditivePoly::from_split(&self.field, self.unit(), mus)?;
            if back.coeffs != self.coeffs {
                return Err(Error::user("split form does not multiply back to the polynomial"));
            }
        }
        Ok(())
    }

    /// Roots of z ↦ Σ d_j z^{p^j} in F_q.
    pub fn roots(&self) -> Vec<u32> {
        let f = &self.field;
        f.elements().filter(|&z| self.eval(z) == 0).collect()
    }

    pub fn eval(&self, z: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().enumerate().fold(0, |acc, (j, &d)| f.add(acc, f.mul(d, f.frob(z, j as i64))))
    }

    /// Splits over F_q by peeling right factors T − λ^{p−1} for roots λ.
    pub fn find_split(&self) -> Option<AdditivePoly> {
        let f = &self.field;
        let mut rest = self.coeffs.clone();
        let mut mus = Vec::new();
        while rest.len() > 1 {
            let mu = if rest[0] == 0 {
                0
            } else {
                let part = AdditivePoly { field: f.clone(), coeffs: rest.clone(), split: None };
                let lam = part.roots().into_iter().find(|&z| z != 0)?;
                f.pow(lam, f.p() as u64 - 1)
            };
            rest = right_divide_linear(&rest, mu, f)?;
            mus.push(mu);
        }
        mus.reverse();
        Some(AdditivePoly { split: Some(mus), ..self.clone() })
    }

    /// P(φ)(y).
    pub fn apply(&self, y: &QuasiAutomaticSeries) -> Result<QuasiAutomaticSeries> {
        let mut acc = QuasiAutomaticSeries::zero(&self.field, self.field.p());
        for (j, &d) in self.coeffs.iter().enumerate() {
            if d != 0 {
                acc = compact(&add(&acc, &scalar_mul(d, &frobenius_series(y, j as i64)?)?)?)?;
            }
        }
        Ok(acc)
    }
}

/// Output of the negative-support Artin–Schreier solver.
#[derive(Clone, Debug)]
pub struct AsNegative {
    pub y: QuasiAutomaticSeries,
    /// t·x after the support reduction, as a plain automatic series.
    pub x_tilde: AutomaticSeries,
    /// t^{1/p}·y after the support reduction, supported in (0, 1/p).
    pub y_tilde: AutomaticSeries,
    /// k such that the problem was solved for x(t^{1/p^k}).
    pub shift: u32,
}

/// c = 0 branch y = x^{1/p} + x^{1/p²} + ⋯ of y^p − y = x for x supported in
/// (−∞, 0) with bounded-below support.
pub fn artin_schreier_neg(x: &QuasiAutomaticSeries) -> Result<AsNegative> {
    let f = x.field().clone();
    let p = x.p();
    let Some(m) = min_support(x)? else {
        let z = QuasiAutomaticSeries::zero(&f, p);
        return Ok(AsNegative { x_tilde: z.inner.clone(), y_tilde: z.inner.clone(), y: z, shift: 0 });
    };
    if !is_zero(&sub(x, &truncate(x, &Q::zero())?)?)? {
        return Err(Error::user("Artin–Schreier input must be supported on negative exponents"));
    }
    let mut k = 0u32;
    let mut pk = Q::from(1);
    while -m >= pk {
        k += 1;
        pk *= Q::from(p as i128);
    }
    let xr = compact(&if k == 0 { x.clone() } else { subst_power(x, &pk.recip())? })?;
    let x_tilde = to_plain(&shift(&xr, 1, &Q::from(1))?)
        .map_err(|_| Error::user("t·x is not p-automatic after the support reduction"))?;
    let y_tilde = window_solve(&x_tilde, &f)?;
    // y_i = ỹ_{i+1/p}, so y = Quasi(p, 1, ỹ(·/p))
    let yr = QuasiAutomaticSeries::new(p as u64, 1, reindexed(&y_tilde, p as u64, 0)?)?;
    let y = if k == 0 { yr } else { subst_power(&yr, &pk)? };
    let out = AsNegative { y, x_tilde, y_tilde, shift: k };
    verify_negative(&out, x)?;
    Ok(out)
}

/// Exact certificates: y^p − y = x and ỹ^p − t^{(p−1)/p}ỹ = x̃.
fn verify_negative(s: &AsNegative, x: &QuasiAutomaticSeries) -> Result<()> {
    let lhs = sub(&frobenius_series(&s.y, 1)?, &s.y)?;
    if !is_zero(&sub(&lhs, x)?)? {
        return Err(Error::verification("y^p − y differs from x"));
    }
    if tilde_residual_zero(s)? {
        Ok(())
    } else {
        Err(Error::verification("shifted equation fails for ỹ"))
    }
}

/// ỹ^p − t^{(p−1)/p}·ỹ − x̃ = 0.
pub fn tilde_residual_zero(s: &AsNegative) -> Result<bool> {
    let yt = QuasiAutomaticSeries::plain(s.y_tilde.clone());
    let xt = QuasiAutomaticSeries::plain(s.x_tilde.clone());
    let p = yt.p() as i128;
    let lhs = sub(&frobenius_series(&yt, 1)?, &shift(&yt, 1, &Q::new(p - 1, p))?)?;
    is_zero(&sub(&lhs, &xt)?)
}

/// Coefficient automaton of ỹ on canonical words:
/// ỹ_{.0b₂…b_m} = Σ_{K≥2, b₂=⋯=b_{K−1}=p−1} φ^{−(K−1)}(x̃_{.b_K…b_m}).
fn window_solve(x_tilde: &AutomaticSeries, f: &Field) -> Result<AutomaticSeries> {
    let md = x_tilde.coeff_dfao()?;
    let p = md.p as usize;
    let e = f.e();
    let live = live_states(&md);
    let after_mark = md.step(md.q0, p);
    #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
    enum St {
        Start,
        Mark,
        // prefix b₂… still all p−1, digits read mod e, thread counts by (state, twist class)
        Run(bool, u32, Vec<((u32, u32), u32)>),
        Dead,
    }
    let mut ids: std::collections::HashMap<St, u32> = std::collections::HashMap::new();
    let mut states = vec![St::Start];
    ids.insert(St::Start, 0);
    let mut delta: Vec<Vec<u32>> = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let st = states[i].clone();
        let mut row = Vec::with_capacity(p + 1);
        for a in 0..=p {
            let next = match (&st, a) {
                (St::Start, a) if a == p => St::Mark,
                (St::Mark, 0) => St::Run(true, 1 % e, Vec::new()),
                (St::Run(flag, k, th), a) if a < p => {
                    let mut m: BTreeMap<(u32, u32), u32> = BTreeMap::new();
                    let mut push = |s: u32, c: u32, w: u32| {
                        if live[s as usize] {
                            let v = m.entry((s, c)).or_insert(0);
                            *v = (*v + w) % md.p;
                        }
                    };
                    for &((s, c), w) in th {
                        push(md.step(s, a), c, w);
                    }
                    if *flag {
                        push(md.step(after_mark, a), *k, 1);
                    }
                    let th: Vec<_> = m.into_iter().filter(|&(_, w)| w != 0).collect();
                    St::Run(*flag && a == p - 1, (k + 1) % e, th)
                }
                _ => St::Dead,
            };
            let id = match ids.get(&next) {
                Some(&id) => id,
                None => {
                    if states.len() >= STATE_CAP {
                        return Err(Error::resource("Artin–Schreier automaton states", STATE_CAP));
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
    let outputs = states
        .iter()
        .map(|st| match st {
            St::Run(_, _, th) => th.iter().fold(0, |acc, &((s, c), w)| {
                let v = f.frob(md.outputs[s as usize], -(c as i64));
                f.add(acc, f.mul(f.from_int(w as i64), v))
            }),
            _ => 0,
        })
        .collect();
    let m = Dfao { p: md.p, alphabet: digit_alphabet(md.p, true), states: states.len(), delta, q0: 0, outputs }.minimize();
    AutomaticSeries::from_dfao(&m, f)
}

/// States from which a nonzero output is reachable.
fn live_states(m: &Dfao) -> Vec<bool> {
    let mut live: Vec<bool> = m.outputs.iter().map(|&o| o != 0).collect();
    loop {
        let mut changed = false;
        for q in 0..m.states {
            if !live[q] && m.delta[q].iter().any(|&t| live[t as usize]) {
                live[q] = true;
                changed = true;
            }
        }
        if !changed {
            return live;
        }
    }
}

/// A truncated series: the equation it solves holds below `radius`, or
/// everywhere when `radius` is None.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub y: QuasiAutomaticSeries,
    pub radius: Option<Q>,
}

fn min_radius(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, None) => a,
        (None, b) => b,
    }
}

fn check_prime_field_elem(f: &Field, c: u32) -> Result<()> {
    if c >= f.q() || f.frob(c, 1) != c {
        return Err(Error::user("branch constant must lie in F_p"));
    }
    Ok(())
}

/// y = c − x − x^p − ⋯ − x^{p^{N−1}}, truncated at the radius p^N·v(x) where
/// the dropped terms start.
pub fn artin_schreier_pos(x: &QuasiAutomaticSeries, c: u32, n: u32) -> Result<Truncated> {
    let f = x.field().clone();
    check_prime_field_elem(&f, c)?;
    let constant = QuasiAutomaticSeries::monomial(&f, c, Q::zero())?;
    let Some(v) = min_support(x)? else {
        return Ok(Truncated { y: constant, radius: None });
    };
    if !v.is_positive() {
        return Err(Error::user("Artin–Schreier input must be supported on positive exponents"));
    }
    let r = v * Q::from((x.p() as i128).checked_pow(n).ok_or_else(|| Error::user("term budget too large"))?);
    let mut acc = QuasiAutomaticSeries::zero(&f, x.p());
    for k in 0..n {
        acc = compact(&add(&acc, &frobenius_series(x, k as i64)?)?)?;
    }
    let y = sub(&constant, &truncate(&acc, &r)?)?;
    Ok(Truncated { y, radius: Some(r) })
}

/// Smallest term budget whose certified radius reaches `r`.
fn terms_for(x: &QuasiAutomaticSeries, r: &Q) -> Result<u32> {
    let Some(v) = min_support(x)? else { return Ok(0) };
    let p = Q::from(x.p() as i128);
    let mut n = 0;
    let mut reach = v;
    while reach < *r {
        reach *= p;
        n += 1;
    }
    Ok(n)
}

/// All solutions of y^p − y = x with branch constant c, positive part solved below r.
fn artin_schreier(x: &QuasiAutomaticSeries, c: u32, r: &Q) -> Result<Truncated> {
    let f = x.field().clone();
    let negp = compact(&truncate(x, &Q::zero())?)?;
    let x0 = x.coeff(&Q::zero());
    let c0 = f
        .elements()
        .find(|&z| f.sub(f.frob(z, 1), z) == x0)
        .ok_or_else(|| Error::user(format!("y^p − y = {} has no root in the field", f.fmt_elem(x0))))?;
    let pos = compact(&sub(&sub(x, &negp)?, &QuasiAutomaticSeries::monomial(&f, x0, Q::zero())?)?)?;
    let yp = artin_schreier_pos(&pos, c, terms_for(&pos, r)?)?;
    let yn = artin_schreier_neg(&negp)?;
    let y = compact(&add(&add(&yn.y, &yp.y)?, &QuasiAutomaticSeries::monomial(&f, c0, Q::zero())?)?)?;
    Ok(Truncated { y, radius: yp.radius })
}

/// y with P(φ)(y) = x, one F_p branch flag per linear factor. The positive
/// part is solved far enough that the equation holds below `r`; the returned
/// radius is None when no truncation was needed.
pub fn additive_solve(poly: &AdditivePoly, x: &QuasiAutomaticSeries, flags: &[u32], r: &Q) -> Result<Truncated> {
    let f = poly.field.clone();
    if x.field() != &f {
        return Err(Error::user("series and polynomial are over different fields"));
    }
    poly.check_split()?;
    let mus = poly.split.as_ref().ok_or_else(|| Error::user("polynomial is not in split form over the field"))?;
    if flags.len() != mus.len() {
        return Err(Error::user(format!("expected {} branch flags, got {}", mus.len(), flags.len())));
    }
    let p = Q::from(f.p() as i128);
    let mut z = scalar_mul(f.inv(poly.unit()).unwrap(), x)?;
    let mut radius: Option<Q> = None;
    for (j, (&mu, &flag)) in mus.iter().zip(flags).enumerate() {
        check_prime_field_elem(&f, flag)?;
        // later T factors shrink the radius by p each
        let later = mus[j + 1..].iter().filter(|&&m| m == 0).count() as i32;
        let target = r * p.pow(later);
        if mu == 0 {
            if flag != 0 {
                return Err(Error::user("the factor T has no nonzero homogeneous solutions; its flag must be 0"));
            }
            z = frobenius_series(&z, -1)?;
            radius = radius.map(|q| q / p);
            continue;
        }
        // y = λz with λ^{p−1} = μ turns y^p − μy = w into z^p − z = λ^{−p}w
        let lam = f
            .elements()
            .find(|&l| l != 0 && f.pow(l, f.p() as u64 - 1) == mu)
            .ok_or_else(|| Error::user(format!("T − {} does not split over the field", f.fmt_elem(mu))))?;
        let w = scalar_mul(f.inv(f.frob(lam, 1)).unwrap(), &z)?;
        let s = artin_schreier(&w, flag, &target)?;
        z = compact(&scalar_mul(lam, &s.y)?)?;
        radius = min_radius(radius, s.radius);
    }
    let resid = sub(&poly.apply(&z)?, x)?;
    let ok = match &radius {
        Some(q) => is_zero_below(&resid, q)?,
        None => is_zero(&resid)?,
    };
    if !ok {
        return Err(Error::verification("additive equation fails on the certified range"));
    }
    Ok(Truncated { y: z, radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i128, d: i128) -> Q {
        Q::new(n, d)
    }

    /// y = (x + y)^{1/p} iterated on the grid −n/p^d, 0 < n < p^d.
    fn oracle(x: &QuasiAutomaticSeries, d: u32) -> Vec<u32> {
        let f = x.field();
        let pd = (x.p() as i128).pow(d);
        let xs: Vec<u32> = (0..pd).map(|n| x.coeff(&q(-n, pd))).collect();
        let mut y = vec![0u32; pd as usize];
        loop {
            let mut next = vec![0u32; pd as usize];
            for n in 1..pd {
                let m = n * x.p() as i128;
                if m < pd {
                    next[n as usize] = f.frob(f.add(xs[m as usize], y[m as usize]), -1);
                }
            }
            if next == y {
                return y;
            }
            y = next;
        }
    }

    fn grid(y: &QuasiAutomaticSeries, d: u32) -> Vec<u32> {
        let pd = (y.p() as i128).pow(d);
        (0..pd).map(|n| y.coeff(&q(-n, pd))).collect()
    }

    #[test]
    fn as_negative_monomial() {
        for p in [2u32, 3] {
            let f = Field::default_for(p, 1).unwrap();
            let pi = p as i128;
            let x = QuasiAutomaticSeries::monomial(&f, 1, q(-1, pi)).unwrap();
            let s = artin_schreier_neg(&x).unwrap();
            for k in 1..6u32 {
                assert_eq!(s.y.coeff(&q(-1, pi.pow(k + 1))), 1);
            }
            assert_eq!(s.y.coeff(&q(-1, pi)), 0);
            assert_eq!(s.y.coeff(&q(-pi - 1, pi.pow(3))), 0);
            assert!(tilde_residual_zero(&s).unwrap());
            // ỹ lives in (0, 1/p)
            let yt = QuasiAutomaticSeries::plain(s.y_tilde.clone());
            assert!(min_support(&yt).unwrap().unwrap().is_positive());
            assert!(is_zero(&sub(&yt, &truncate(&yt, &q(1, pi)).unwrap()).unwrap()).unwrap());
        }
        let f = Field::default_for(2, 1).unwrap();
        let z = artin_schreier_neg(&QuasiAutomaticSeries::zero(&f, 2)).unwrap();
        assert!(is_zero(&z.y).unwrap());
    }

    #[test]
    fn as_negative_rejects_bad_support() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::finite(&f, &[(q(-1, 2), 1), (q(1, 4), 1)]).unwrap();
        assert!(artin_schreier_neg(&x).is_err());
    }

    /// Random coefficient automaton restricted to (−1, 0).
    fn random_window(f: &Field, rng: &mut ChaCha8Rng) -> QuasiAutomaticSeries {
        let p = f.p();
        let n = rng.gen_range(2..5u32);
        let delta = (0..n).map(|_| (0..=p).map(|_| rng.gen_range(0..n)).collect()).collect();
        let outputs = (0..n).map(|_| rng.gen_range(0..f.q())).collect();
        let m = Dfao { p, alphabet: digit_alphabet(p, true), states: n as usize, delta, q0: 0, outputs };
        let g = QuasiAutomaticSeries::from_coeff_dfao(&m, f).unwrap();
        let g = truncate(&g, &q(1, 1)).unwrap();
        let g = sub(&g, &QuasiAutomaticSeries::monomial(f, g.coeff(&Q::zero()), Q::zero()).unwrap()).unwrap();
        shift(&g, 1, &q(-1, 1)).unwrap()
    }

    /// Random window series whose support is well-ordered.
    fn random_hahn_window(f: &Field, rng: &mut ChaCha8Rng) -> QuasiAutomaticSeries {
        loop {
            let x = random_window(f, rng);
            if min_support(&x).is_ok() && crate::series_core::certify_support(&x).is_ok() {
                return x;
            }
        }
    }

    #[test]
    fn as_negative_matches_fixed_point_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, e, d) in [(2u32, 1u32, 6u32), (2, 2, 6), (3, 1, 4)] {
            let f = Field::default_for(p, e).unwrap();
            for _ in 0..6 {
                let x = random_hahn_window(&f, &mut rng);
                let s = artin_schreier_neg(&x).unwrap();
                assert_eq!(grid(&s.y, d), oracle(&x, d));
                assert!(tilde_residual_zero(&s).unwrap());
            }
        }
    }

    #[test]
    fn as_negative_reduces_wide_support() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::finite(&f, &[(q(-5, 2), 1), (q(-1, 8), 1)]).unwrap();
        let s = artin_schreier_neg(&x).unwrap();
        assert_eq!(s.shift, 2);
        let lhs = sub(&frobenius_series(&s.y, 1).unwrap(), &s.y).unwrap();
        assert!(is_zero(&sub(&lhs, &x).unwrap()).unwrap());
        assert_eq!(s.y.coeff(&q(-5, 4)), 1);
    }

    #[test]
    fn as_positive_examples() {
        let f2 = Field::default_for(2, 1).unwrap();
        let t = QuasiAutomaticSeries::monomial(&f2, 1, q(1, 1)).unwrap();
        let s = artin_schreier_pos(&t, 0, 4).unwrap();
        assert_eq!(s.radius, Some(q(16, 1)));
        let want: Vec<u32> = (0..20).map(|n| [1, 2, 4, 8].contains(&n) as u32).collect();
        assert_eq!(crate::series_core::dense(&s.y, 1, 20), want);
        let one = artin_schreier_pos(&QuasiAutomaticSeries::zero(&f2, 2), 1, 3).unwrap();
        assert_eq!(one.radius, None);
        assert_eq!(crate::series_core::dense(&one.y, 1, 3), vec![1, 0, 0]);
        let f3 = Field::default_for(3, 1).unwrap();
        let t2 = QuasiAutomaticSeries::monomial(&f3, 1, q(2, 1)).unwrap();
        let s = artin_schreier_pos(&t2, 0, 3).unwrap();
        assert_eq!(s.radius, Some(q(54, 1)));
        for n in 0..60 {
            assert_eq!(s.y.coeff(&q(n, 1)), if [2, 6, 18].contains(&n) { 2 } else { 0 });
        }
        // y^p − y = x below the radius
        let r = s.radius.unwrap();
        let resid = sub(&sub(&frobenius_series(&s.y, 1).unwrap(), &s.y).unwrap(), &t2).unwrap();
        assert!(is_zero(&truncate(&resid, &r).unwrap()).unwrap());
        assert!(artin_schreier_pos(&t2, 2, 1).is_ok());
        let f4 = Field::default_for(2, 2).unwrap();
        assert!(artin_schreier_pos(&QuasiAutomaticSeries::zero(&f4, 2), f4.gen(), 1).is_err());
    }

    #[test]
    fn split_forms() {
        let f4 = Field::default_for(2, 2).unwrap();
        let g = f4.gen();
        let p = AdditivePoly::from_split(&f4, 1, &[g, 1]).unwrap();
        assert!(p.check_split().is_ok());
        let found = p.find_split().unwrap();
        let back = AdditivePoly::from_split(&f4, 1, found.split.as_ref().unwrap()).unwrap();
        assert_eq!(back.coeffs, p.coeffs);
        // T² + T + 1 over F_2 has no nonzero root
        let f2 = Field::default_for(2, 1).unwrap();
        assert!(AdditivePoly::new(&f2, vec![1, 1, 1]).unwrap().find_split().is_none());
        let mut bad = p.clone();
        bad.split = Some(vec![1, 1]);
        assert!(bad.check_split().is_err());
    }

    #[test]
    fn additive_examples() {
        let f = Field::default_for(2, 1).unwrap();
        let x = QuasiAutomaticSeries::monomial(&f, 1, q(-1, 2)).unwrap();
        let r = q(4, 1);
        let tp = AdditivePoly::from_split(&f, 1, &[0]).unwrap();
        let y = additive_solve(&tp, &x, &[0], &r).unwrap();
        assert!(is_zero(&sub(&y.y, &frobenius_series(&x, -1).unwrap()).unwrap()).unwrap());
        let as1 = AdditivePoly::from_split(&f, 1, &[1]).unwrap();
        let y = additive_solve(&as1, &x, &[0], &r).unwrap();
        assert!(is_zero(&sub(&y.y, &artin_schreier_neg(&x).unwrap().y).unwrap()).unwrap());
        let y1 = additive_solve(&as1, &x, &[1], &r).unwrap();
        assert_eq!(y1.y.coeff(&Q::zero()), 1);
        let sq = AdditivePoly::from_split(&f, 1, &[1, 1]).unwrap();
        let y = additive_solve(&sq, &x, &[0, 0], &r).unwrap();
        assert!(is_zero(&sub(&sq.apply(&y.y).unwrap(), &x).unwrap()).unwrap());
        assert!(additive_solve(&sq, &x, &[0], &r).is_err());
    }

    #[test]
    fn branch_differences_are_homogeneous() {
        let f4 = Field::default_for(2, 2).unwrap();
        let g = f4.gen();
        // T² − 1: every homogeneous solution lies in F_4
        let poly = AdditivePoly::new(&f4, vec![1, 0, 1]).unwrap().find_split().unwrap();
        let x = add(
            &QuasiAutomaticSeries::finite(&f4, &[(q(-3, 4), 1), (q(0, 1), 0), (q(3, 2), g)]).unwrap(),
            &shift(&QuasiAutomaticSeries::geometric(&f4), 1, &q(1, 1)).unwrap(),
        )
        .unwrap();
        let r = q(8, 1);
        let base = additive_solve(&poly, &x, &[0, 0], &r).unwrap();
        for flags in [[1, 0], [0, 1], [1, 1]] {
            let other = additive_solve(&poly, &x, &flags, &r).unwrap();
            let d = sub(&other.y, &base.y).unwrap();
            let rad = min_radius(base.radius, other.radius).unwrap();
            assert!(!is_zero(&d).unwrap());
            assert!(is_zero(&truncate(&poly.apply(&d).unwrap(), &rad).unwrap()).unwrap());
        }
    }
}
