mod common;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;

use padic_iter::analysis::{term_valuation, LinearMapProfile};
use padic_iter::orbit::poly_roots_mod;
use padic_iter::{
    binom_padic, falling_factorial_poly, mahler_terms, AnalyticMap, MultiSeries, PAdicInt,
    PrimeContext, Valuation,
};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11])
}

fn vp_int(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut x = x.clone();
    while (&x % p).is_zero() {
        x /= p;
        v += 1;
    }
    Some(v)
}

fn series_strategy(
    nvars: usize,
    max_deg: u32,
) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_deg, nvars), -500i64..500),
        0..5,
    )
    .prop_map(move |terms| {
        terms
            .into_iter()
            .map(|(mut e, c)| {
                while e.iter().sum::<u32>() > max_deg {
                    let i = e.iter().position(|&k| k > 0).unwrap();
                    e[i] -= 1;
                }
                (e, c)
            })
            .collect()
    })
}

fn build(ctx: &PrimeContext, nvars: usize, cap: u32, terms: &[(Vec<u32>, i64)]) -> MultiSeries {
    MultiSeries::from_terms(
        ctx,
        nvars,
        cap,
        terms.iter().map(|(e, c)| (e.clone(), BigInt::from(*c))),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn valuation_is_ultrametric(p in prime(), n in 1u32..8, a in any::<i64>(), b in any::<i64>()) {
        let ctx = PrimeContext::new(p, n).unwrap();
        let x = PAdicInt::from_i64(&ctx, a);
        let y = PAdicInt::from_i64(&ctx, b);
        let lb = |v: Valuation| v.lower_bound().unwrap_or(n).min(n);
        let s = x.add(&y).unwrap();
        prop_assert!(lb(s.valuation()) >= lb(x.valuation()).min(lb(y.valuation())));
        let prod = x.mul(&y).unwrap();
        prop_assert_eq!(lb(prod.valuation()), (lb(x.valuation()) + lb(y.valuation())).min(n));
        // Agreement with the integer valuation.
        let direct = vp_int(&BigInt::from(a), p).unwrap_or(n).min(n);
        prop_assert_eq!(lb(x.valuation()), direct);
    }

    #[test]
    fn binomials_agree_with_integers(p in prime(), k in 0u64..=30, m in 0u64..=30) {
        let ctx = PrimeContext::new(p, 40).unwrap();
        let b = binom_padic(&PAdicInt::from_i64(&ctx, k as i64), m).unwrap();
        let exact = if m > k {
            BigInt::zero()
        } else {
            (0..m).fold(BigInt::one(), |acc, i| acc * (k - i)) / (1..=m).fold(BigInt::one(), |acc, i| acc * i)
        };
        prop_assert!(b.eq_at(&PAdicInt::from_bigint(&ctx, &exact), b.known_precision()));
    }

    #[test]
    fn division_round_trips(p in prime(), n in 2u32..10, a in any::<i64>(), u in any::<i64>(), shift in 0u32..3) {
        let ctx = PrimeContext::new(p, n).unwrap();
        prop_assume!(shift < n && u % p as i64 != 0);
        let b = BigInt::from(u) * BigInt::from(p).pow(shift);
        let b = PAdicInt::from_bigint(&ctx, &b);
        let x = PAdicInt::from_i64(&ctx, a);
        let prod = x.mul(&b).unwrap();
        let q = prod.div_tracked(&b).unwrap();
        prop_assert_eq!(q.known_precision(), n - shift);
        prop_assert!(q.eq_at(&x, q.known_precision()));
    }

    #[test]
    fn falling_factorial_counts_arrangements(m in 0usize..=12, k in 0u64..=20) {
        let poly = falling_factorial_poly(m);
        let value = poly
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * BigInt::from(k) + c);
        let expect = if (m as u64) > k {
            BigInt::zero()
        } else {
            ((k - m as u64 + 1)..=k).fold(BigInt::one(), |acc, i| acc * i)
        };
        prop_assert_eq!(value, expect);
    }

    #[test]
    fn composition_is_a_ring_homomorphism(
        p in prime(),
        s in series_strategy(2, 2),
        t in series_strategy(2, 2),
        u in series_strategy(2, 2),
        w in series_strategy(2, 2),
    ) {
        let ctx = PrimeContext::new(p, 6).unwrap();
        let cap = 8;
        let s = build(&ctx, 2, cap, &s);
        let t = build(&ctx, 2, cap, &t);
        let sub = vec![build(&ctx, 2, cap, &u), build(&ctx, 2, cap, &w)];
        let sum = s.add(&t).unwrap().compose_with(&sub).unwrap();
        prop_assert_eq!(sum, s.compose_with(&sub).unwrap().add(&t.compose_with(&sub).unwrap()).unwrap());
        let prod = s.mul(&t).unwrap().compose_with(&sub).unwrap();
        prop_assert_eq!(prod, s.compose_with(&sub).unwrap().mul(&t.compose_with(&sub).unwrap()).unwrap());
    }

    #[test]
    fn evaluation_commutes_with_composition(
        p in prime(),
        s in series_strategy(2, 3),
        u in series_strategy(2, 2),
        w in series_strategy(2, 2),
        x in any::<i32>(),
        y in any::<i32>(),
    ) {
        let ctx = PrimeContext::new(p, 5).unwrap();
        let cap = 6;
        let s = build(&ctx, 2, cap, &s);
        let f = AnalyticMap::new(vec![build(&ctx, 2, cap, &u), build(&ctx, 2, cap, &w)]).unwrap();
        let pt = [PAdicInt::from_i64(&ctx, x as i64), PAdicInt::from_i64(&ctx, y as i64)];
        let lhs = s.compose(&f).unwrap().eval_point(&pt).unwrap();
        let rhs = s.eval_point(&f.apply(&pt).unwrap()).unwrap();
        prop_assert_eq!(lhs.residue(), rhs.residue());
    }

    #[test]
    fn multiples_of_the_modulus_are_pruned(p in prime(), n in 1u32..6, s in series_strategy(2, 3), t in series_strategy(2, 3)) {
        let ctx = PrimeContext::new(p, n).unwrap();
        let s = build(&ctx, 2, 3, &s);
        let t = build(&ctx, 2, 3, &t);
        let pn = PAdicInt::from_bigint(&ctx, &BigInt::from(p).pow(n));
        prop_assert!(t.scalar_mul(&pn).unwrap().is_zero());
        prop_assert_eq!(s.add(&t.scalar_mul(&pn).unwrap()).unwrap(), s.clone());
        prop_assert!(s.terms().all(|(_, c)| !c.is_zero()));
    }

    #[test]
    fn gauss_norm_is_multiplicative(p in prime(), s in series_strategy(2, 3), t in series_strategy(2, 3)) {
        let n = 12;
        let ctx = PrimeContext::new(p, n).unwrap();
        let s = build(&ctx, 2, 6, &s);
        let t = build(&ctx, 2, 6, &t);
        let vs = s.gauss_norm_valuation();
        let vt = t.gauss_norm_valuation();
        let vst = s.mul(&t).unwrap().gauss_norm_valuation();
        if let (Valuation::Finite(a), Valuation::Finite(b)) = (vs, vt) {
            if a + b < n {
                prop_assert_eq!(vst, Valuation::Finite(a + b));
            }
        }
        let lb = |v: Valuation| v.lower_bound().unwrap_or(n);
        prop_assert!(lb(s.add(&t).unwrap().gauss_norm_valuation()) >= lb(vs).min(lb(vt)));
    }

    #[test]
    fn roots_match_brute_force(
        p in prop::sample::select(vec![2u64, 3, 5]),
        k in 1u32..5,
        coeffs in prop::collection::vec(0u64..1000, 1..5),
    ) {
        let ctx = PrimeContext::new(p, k).unwrap();
        let size = p.pow(k);
        let q: Vec<BigUint> = coeffs.iter().map(|c| BigUint::from(c % size)).collect();
        let classes = poly_roots_mod(&ctx, &q);
        for n in 0..size {
            let v = q.iter().rev().fold(BigUint::zero(), |acc, c| (acc * n + c) % size);
            let covered = classes.iter().any(|c| c.contains(&BigUint::from(n), p));
            prop_assert_eq!(v.is_zero(), covered, "n = {}", n);
        }
    }
}

#[test]
fn term_valuations_grow_linearly() {
    for p in [2u64, 3, 5, 7] {
        let boundary = Ratio::new(1, p as i64 - 1);
        for v in [Ratio::new(1, 1), Ratio::new(2, 1), boundary * 2, boundary + Ratio::new(1, 2)] {
            let Ok(profile) = LinearMapProfile::new(p, v) else { continue };
            for m in 0..=10_000u64 {
                let t = term_valuation(&profile, m);
                assert!(t >= Ratio::from_integer(m as i64) * (v - boundary), "p={p} v={v} m={m}");
            }
        }
    }
}

#[test]
fn integer_valuations_match_difference_terms() {
    // For f = (1 + p^v) x the m-th difference is (p^v)^m x exactly, so its
    // Gauss norm is m v, and t_m adds the loss of dividing by m!.
    for (p, v) in [(3u64, 1u32), (5, 1), (3, 2), (2, 2), (7, 1)] {
        let n = 12;
        let ctx = PrimeContext::new(p, n).unwrap();
        let lambda = BigInt::one() + BigInt::from(p).pow(v);
        let f = AnalyticMap::new(vec![
            MultiSeries::from_terms(&ctx, 1, 1, [(vec![1], lambda)]).unwrap(),
        ])
        .unwrap();
        let exp = mahler_terms(&f, n).unwrap();
        let profile = LinearMapProfile::new(p, Ratio::from_integer(v as i64)).unwrap();
        for (m, term) in exp.terms.iter().enumerate() {
            let mv = m as u32 * v;
            if mv >= exp.working_precision() {
                continue;
            }
            assert_eq!(term[0].gauss_norm_valuation(), Valuation::Finite(mv));
            let t = term_valuation(&profile, m as u64);
            let loss = padic_iter::factorial_valuation(m as u64, p) as i64;
            assert_eq!(t, Ratio::from_integer(mv as i64 - loss));
        }
    }
}

#[test]
fn square_root_flow_of_four_x() {
    // Compositional square root of 4x over Z_3: the flow at n = 1/2 sends
    // x to the root of 4 that is 1 mod 3 times x.
    let ctx = PrimeContext::new(3, 3).unwrap();
    let f = AnalyticMap::new(vec![
        MultiSeries::from_terms(&ctx, 1, 1, [(vec![1], BigInt::from(4))]).unwrap(),
    ])
    .unwrap();
    let flow = padic_iter::interpolate(&f, 3).unwrap();
    let half = PAdicInt::from_ratio(&ctx, &BigInt::one(), &BigInt::from(2)).unwrap();
    for x in 0..27i64 {
        let v = padic_iter::eval_flow_symbolic(&flow, &[PAdicInt::from_i64(&ctx, x)], &half).unwrap();
        let expect = (25 * x).mod_floor(&27);
        assert_eq!(v.point[0].residue(), &BigUint::from(expect as u64), "x = {x}");
    }
}
