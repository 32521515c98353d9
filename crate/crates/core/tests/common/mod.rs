//! Random map corpus and library-independent oracles shared by the
//! integration tests.

#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

use padic_iter::{AnalyticMap, MultiSeries, PAdicInt, PrimeContext};

/// An integer polynomial map `x ↦ (Σ c x^e)_i`, kept in raw form so the
/// oracle never touches library arithmetic.
#[derive(Clone, Debug)]
pub struct RawMap {
    pub p: u64,
    pub d: usize,
    pub components: Vec<Vec<(Vec<u32>, BigInt)>>,
}

impl RawMap {
    pub fn to_map(&self, precision: u32) -> AnalyticMap {
        let ctx = PrimeContext::new(self.p, precision).unwrap();
        let cap = self
            .components
            .iter()
            .flat_map(|c| c.iter().map(|(e, _)| e.iter().sum::<u32>()))
            .max()
            .unwrap_or(1)
            .max(1);
        let comps = self
            .components
            .iter()
            .map(|c| MultiSeries::from_terms(&ctx, self.d, cap, c.clone()).unwrap())
            .collect();
        AnalyticMap::new(comps).unwrap()
    }

    /// `f(x)` modulo `modulus`, by plain integer arithmetic.
    pub fn apply_mod(&self, x: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
        self.components
            .iter()
            .map(|terms| {
                let mut acc = BigInt::zero();
                for (e, c) in terms {
                    let mut t = c.clone();
                    for (xi, &k) in x.iter().zip(e) {
                        t *= xi.modpow(&BigInt::from(k), modulus);
                    }
                    acc += t;
                }
                acc.mod_floor(modulus)
            })
            .collect()
    }

    /// `f^n(x)` modulo `modulus` by direct iteration.
    pub fn iterate_mod(&self, x: &[BigInt], n: u64, modulus: &BigInt) -> Vec<BigInt> {
        let mut y: Vec<BigInt> = x.iter().map(|v| v.mod_floor(modulus)).collect();
        for _ in 0..n {
            y = self.apply_mod(&y, modulus);
        }
        y
    }
}

/// A random map `x_i + p u_i(x)` with `u_i` of degree at most 3, so
/// `f ≡ x (mod p)`.
pub fn random_map<R: Rng>(rng: &mut R, p: u64, d: usize) -> RawMap {
    let pb = BigInt::from(p);
    let mut components = Vec::with_capacity(d);
    for i in 0..d {
        let mut terms = Vec::new();
        let mut lin = vec![0u32; d];
        lin[i] = 1;
        terms.push((lin, BigInt::one()));
        let extra = rng.gen_range(1..=3);
        for _ in 0..extra {
            let deg = rng.gen_range(0..=3u32);
            let mut e = vec![0u32; d];
            for _ in 0..deg {
                e[rng.gen_range(0..d)] += 1;
            }
            let c: i64 = rng.gen_range(-40..=40);
            let c = if c == 0 { 1 } else { c };
            terms.push((e, &pb * BigInt::from(c)));
        }
        components.push(terms);
    }
    RawMap { p, d, components }
}

/// Random element of `[0, p^k)`.
pub fn random_residue<R: Rng>(rng: &mut R, p: u64, k: u32) -> BigInt {
    let m = BigUint::from(p).pow(k);
    let m64 = m.iter_u64_digits().next().unwrap_or(1);
    if m.bits() <= 63 {
        BigInt::from(rng.gen_range(0..m64))
    } else {
        let mut x = BigUint::zero();
        for _ in 0..k {
            x = x * p + rng.gen_range(0..p);
        }
        BigInt::from(x)
    }
}

pub fn padic(ctx: &PrimeContext, x: &BigInt) -> PAdicInt {
    PAdicInt::from_bigint(ctx, x)
}

pub fn as_bigint(x: &PAdicInt) -> BigInt {
    BigInt::from(x.residue().clone())
}

/// `v_p(m!)` by factoring every `k <= m` with trial division.
pub fn factorial_valuation_direct(m: u64, p: u64) -> u64 {
    (1..=m)
        .map(|mut k| {
            let mut v = 0;
            while k % p == 0 {
                k /= p;
                v += 1;
            }
            v
        })
        .sum()
}
