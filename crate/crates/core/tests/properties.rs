use proptest::prelude::*;

use autoseries::base_p_codec::{canonicalize, decode_frac, decode_int, encode_frac, encode_int, PAdicNonneg};
use autoseries::coeff_fields::{Field, FqElement, FqMat, LambdaElement};
use autoseries::dfao_engine::{digit_alphabet, Dfao};
use autoseries::semilinear::ComposedFunction;
use autoseries::series_core::{add, hadamard, mul_fq_capped, QuasiAutomaticSeries, Q};
use autoseries::Error;
use autoseries::twist_recurrence::{lrr_check, sabc_dfao, sabc_member, Lrr, SupportSpec};
use autoseries::zero_sets::{lrs_zero_dfao, LinearRecurrence};

const FIELDS: [(u32, u32); 6] = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)];

fn field(i: usize) -> Field {
    let (p, e) = FIELDS[i % FIELDS.len()];
    Field::default_for(p, e).unwrap()
}

fn digits(mut n: u64, p: u32) -> Vec<usize> {
    let mut d = Vec::new();
    while n > 0 {
        d.push((n % p as u64) as usize);
        n /= p as u64;
    }
    d.reverse();
    d
}

fn integer_series(f: &Field, delta: &[Vec<u32>], outputs: &[u32]) -> QuasiAutomaticSeries {
    let n = delta.len() as u32;
    let p = f.p();
    let delta: Vec<Vec<u32>> = delta.iter().map(|r| r.iter().take(p as usize).map(|&s| s % n).collect()).collect();
    let mut outputs: Vec<u32> = outputs.iter().map(|&o| o % f.q()).collect();
    outputs[0] = 0;
    let m = Dfao::new(p, digit_alphabet(p, false), delta, 0, outputs).unwrap();
    QuasiAutomaticSeries::from_integer_dfao(&m, f).unwrap()
}

fn dfao_parts() -> impl Strategy<Value = (Vec<Vec<u32>>, Vec<u32>)> {
    (1usize..5).prop_flat_map(|n| (prop::collection::vec(prop::collection::vec(0u32..16, 8), n), prop::collection::vec(0u32..64, n)))
}

fn matrices(f: &Field, d: usize, raw: &[u32]) -> FqMat {
    FqMat::from_rows((0..d).map(|i| (0..d).map(|j| raw[(i * d + j) % raw.len()] % f.q()).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(fi in 0usize..6, a in 0u32..1024, b in 0u32..1024, c in 0u32..1024) {
        let f = field(fi);
        let (a, b, c) = (f.elem(a % f.q()), f.elem(b % f.q()), f.elem(c % f.q()));
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        if !a.is_zero() {
            prop_assert_eq!(a.clone() * a.inv().unwrap(), f.elem(1));
        }
        // Frobenius is a ring automorphism
        prop_assert_eq!((a.clone() + b.clone()).frobenius(1), a.frobenius(1) + b.frobenius(1));
        prop_assert_eq!((a.clone() * b.clone()).frobenius(1), a.frobenius(1) * b.frobenius(1));
        prop_assert_eq!(a.frobenius(1).frobenius(-1), a);
    }

    #[test]
    fn lambda_frobenius_inverts(p in prop::sample::select(vec![2u32, 3, 5]), terms in prop::collection::vec((-20i64..20, 0u32..4, 1i64..5), 0..4)) {
        let x = terms.iter().fold(LambdaElement::zero(p), |acc, &(n, k, c)| acc.add(&LambdaElement::lambda_pow(p, n, k).scale(c)));
        prop_assert_eq!(x.frobenius(1).frobenius(-1), x.clone());
        prop_assert_eq!(x.frobenius(-1).frobenius(1), x.clone());
        let y = x.mul(&x).add(&LambdaElement::one(p));
        prop_assert_eq!(x.mul(&y).frobenius(1), x.frobenius(1).mul(&y.frobenius(1)));
    }

    #[test]
    fn codec_round_trips(p in prop::sample::select(vec![2u32, 3, 5, 7]), m in 0u128..10_000, n in 0u128..512, k in 0u32..6) {
        prop_assert_eq!(decode_int(&encode_int(m, p)).unwrap(), m);
        let v = PAdicNonneg::new(n, k, p);
        let w = encode_frac(v, p);
        prop_assert_eq!(decode_frac(&w).unwrap(), v);
        prop_assert_eq!(canonicalize(&w), w);
        // shortlex order agrees with numeric order on integers
        let (a, b) = (encode_int(m, p), encode_int(m + 1, p));
        prop_assert!(a.len() < b.len() || (a.len() == b.len() && a.indices() < b.indices()));
    }

    #[test]
    fn minimize_preserves_runs((delta, outputs) in dfao_parts(), words in prop::collection::vec(prop::collection::vec(0usize..3, 0..8), 16)) {
        let n = delta.len() as u32;
        let delta: Vec<Vec<u32>> = delta.iter().map(|r| r.iter().take(3).map(|&s| s % n).collect()).collect();
        let outputs: Vec<u32> = outputs.iter().map(|&o| o % 3).collect();
        let m = Dfao::new(2, digit_alphabet(2, true), delta, 0, outputs).unwrap();
        let min = m.minimize();
        prop_assert!(min.states <= m.states);
        for w in &words {
            prop_assert_eq!(min.run(w).unwrap(), m.run(w).unwrap());
        }
        let again = min.minimize();
        prop_assert_eq!(again.states, min.states);
        prop_assert!(again.equivalent(&min).unwrap());
        let b = m.map_outputs(|o| (o != 0) as u32);
        prop_assert!(b.reverse_language().unwrap().reverse_language().unwrap().equivalent(&b.minimize()).unwrap());
    }

    #[test]
    fn composition_and_transpose(fi in prop::sample::select(vec![3usize, 4]), d in 1usize..4, raw in prop::collection::vec(0u32..64, 9), s in prop::collection::vec(0u32..2, 0..6)) {
        let f = field(fi);
        let maps: Vec<FqMat> = (0..2).map(|a| matrices(&f, d, &raw[a * 3..])).collect();
        let c = ComposedFunction::new(f.clone(), 1, maps).unwrap();
        let (a, b, e) = (c.tau(0), c.tau(1), c.evaluate(&s));
        prop_assert!(a.compose(&b).compose(&e).same_as(&a.compose(&b.compose(&e))));
        prop_assert_eq!(a.compose(&e).twist, 1 + s.len() as i64);
        prop_assert!(a.compose(&e).transpose().same_as(&e.transpose().compose(&a.transpose())));
        prop_assert!(e.transpose().transpose().same_as(&e));
    }

    #[test]
    fn pointwise_closure(fi in 0usize..6, (d1, o1) in dfao_parts(), (d2, o2) in dfao_parts()) {
        let f = field(fi);
        let x = integer_series(&f, &d1, &o1);
        let y = integer_series(&f, &d2, &o2);
        let s = add(&x, &y).unwrap();
        let h = hadamard(&x, &y).unwrap();
        for n in 0..64i128 {
            let i = Q::from(n);
            prop_assert_eq!(s.coeff(&i), f.add(x.coeff(&i), y.coeff(&i)));
            prop_assert_eq!(h.coeff(&i), f.mul(x.coeff(&i), y.coeff(&i)));
            prop_assert_eq!(s.coeff(&Q::new(2 * n + 1, 2)), 0);
        }
    }

    #[test]
    fn sabc_automaton_agrees(p in prop::sample::select(vec![2u32, 3]), a in 1u64..5, b in -3i64..3, c in 0u32..4, n in 0u128..512, k in 0u32..6) {
        let spec = SupportSpec::new(a, b, c).unwrap();
        let m = sabc_dfao(&spec, p).unwrap();
        let w = encode_frac(PAdicNonneg::new(n, k, p), p);
        prop_assert_eq!(m.run_word(&w).unwrap() != 0, sabc_member(&spec, p, &Q::new(n as i128, (p as i128).pow(k))));
    }

    #[test]
    fn lrr_solutions_are_linear_and_scale(d in prop::collection::vec(0u32..4, 2..4), init1 in prop::collection::vec(0u32..4, 3), init2 in prop::collection::vec(0u32..4, 3), alpha in 1u32..4, c in 0u32..2) {
        // F_4; sequences generated by solving the relation forward from a nonzero last coefficient
        let f = Field::default_for(2, 2).unwrap();
        let mut d: Vec<FqElement> = d.iter().map(|&x| f.elem(x)).collect();
        let k = d.len() - 1;
        if d[k].is_zero() {
            d[k] = f.elem(1);
        }
        let r = Lrr::new(d.clone()).unwrap();
        let gen = |init: &[u32]| -> Vec<FqElement> {
            let mut s: Vec<FqElement> = init[..k].iter().map(|&x| f.elem(x)).collect();
            while s.len() < 16 {
                let n = s.len() - k;
                // d_k c_{n+k}^{p^k} = −Σ_{i<k} d_i c_{n+i}^{p^i}
                let rest = (0..k).fold(f.elem(0), |acc, i| acc + d[i].clone() * s[n + i].frobenius(i as i64));
                let top = -rest * d[k].inv().unwrap();
                s.push(top.frobenius(-(k as i64)));
            }
            s
        };
        let (u, v) = (gen(&init1), gen(&init2));
        prop_assert!(lrr_check(&r, u.clone(), 16 - k, &f).unwrap());
        let cp = f.elem(c);
        let w: Vec<FqElement> = u.iter().zip(&v).map(|(a, b)| a.clone() + cp.clone() * b.clone()).collect();
        prop_assert!(lrr_check(&r, w.clone(), 16 - k, &f).unwrap());
        let al = f.elem(alpha);
        let scaled: Vec<FqElement> = w.iter().map(|x| al.clone() * x.clone()).collect();
        prop_assert!(lrr_check(&r.scaled(&al, &f), scaled, 16 - k, &f).unwrap());
    }

    #[test]
    fn recurrence_zero_sets(fi in prop::sample::select(vec![0usize, 1, 2, 3]), coeffs in prop::collection::vec(0u32..64, 1..4), init in prop::collection::vec(0u32..64, 4)) {
        let f = field(fi);
        let coeffs: Vec<u32> = coeffs.iter().map(|&c| c % f.q()).collect();
        let init: Vec<u32> = init[..coeffs.len()].iter().map(|&c| c % f.q()).collect();
        let rec = LinearRecurrence::from_recurrence(f.clone(), &coeffs, &init).unwrap();
        let m = lrs_zero_dfao(&rec, f.p(), 1 << 16).unwrap();
        let mut a = init.clone();
        let dd = coeffs.len();
        while a.len() < 512 {
            let n = a.len() - dd;
            a.push((0..dd).fold(0, |acc, i| f.add(acc, f.mul(coeffs[i], a[n + i]))));
        }
        for (n, &an) in a.iter().enumerate() {
            prop_assert_eq!(m.accepts(&digits(n as u64, f.p())), an == 0);
        }
    }
}

fn small_dfao_parts() -> impl Strategy<Value = (Vec<Vec<u32>>, Vec<u32>)> {
    (1usize..4).prop_flat_map(|n| (prop::collection::vec(prop::collection::vec(0u32..16, 2), n), prop::collection::vec(0u32..2, n)))
}

/// Product under a monoid cap; inputs whose product exceeds it are discarded.
fn capped_mul(x: &QuasiAutomaticSeries, y: &QuasiAutomaticSeries) -> Option<QuasiAutomaticSeries> {
    match mul_fq_capped(x, y, 1 << 12) {
        Ok(s) => Some(s),
        Err(Error::Resource { .. }) => None,
        Err(e) => panic!("{}", e),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn product_is_a_truncated_convolution((d1, o1) in small_dfao_parts(), (d2, o2) in small_dfao_parts(), (d3, o3) in small_dfao_parts()) {
        let f = field(0);
        let x = integer_series(&f, &d1, &o1);
        let y = integer_series(&f, &d2, &o2);
        let z = integer_series(&f, &d3, &o3);
        let c = |s: &QuasiAutomaticSeries| -> Vec<u32> { (0..32).map(|n| s.coeff(&Q::from(n))).collect() };
        let conv = |a: &[u32], b: &[u32]| -> Vec<u32> {
            (0..32).map(|n| (0..=n).fold(0, |acc, k| f.add(acc, f.mul(a[k], b[n - k])))).collect()
        };
        let (Some(xy), Some(xz), Some(lhs)) = (capped_mul(&x, &y), capped_mul(&x, &z), capped_mul(&x, &add(&y, &z).unwrap())) else {
            return Ok(());
        };
        prop_assert_eq!(c(&xy), conv(&c(&x), &c(&y)));
        // distributivity and associativity mod t^32
        prop_assert_eq!(c(&lhs), c(&add(&xy, &xz).unwrap()));
        prop_assert_eq!(conv(&c(&xy), &c(&z)), conv(&c(&x), &conv(&c(&y), &c(&z))));
    }
}
