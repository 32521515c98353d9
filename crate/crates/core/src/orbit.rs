//! Orbit enumeration and orbit-hitting queries `f^n(x0) ≡ target (mod p^M)`.
//!
//! The interpolated flow turns the question into root finding for the
//! polynomials `g_i(x0, n) - target_i` over `Z/p^M`. Surviving residue classes
//! of `n` are necessary conditions only: a class may contain no actual hit.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::mahler::interpolate;
use crate::padic::{valuation_capped, PAdicInt, PrimeContext};
use crate::series::AnalyticMap;

/// `[x0, f(x0), .., f^k(x0)]` by direct evaluation.
pub fn orbit(f: &AnalyticMap, x0: &[PAdicInt], k: usize) -> Result<Vec<Vec<PAdicInt>>> {
    if x0.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x0.len(),
        });
    }
    let ctx = f.ctx();
    let mut out = Vec::with_capacity(k + 1);
    out.push(x0.iter().map(|x| x.rebase(ctx)).collect::<Result<Vec<_>>>()?);
    for _ in 0..k {
        let next = f.apply(out.last().expect("nonempty"))?;
        out.push(next);
    }
    Ok(out)
}

/// The set `{ n : n ≡ residue (mod p^exponent) }`; exponent 0 is all of `Z_p`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResidueClass {
    pub residue: BigUint,
    pub exponent: u32,
}

impl ResidueClass {
    pub fn contains(&self, n: &BigUint, p: u64) -> bool {
        let m = BigUint::from(p).pow(self.exponent);
        n % &m == &self.residue % &m
    }

    /// Intersection of two classes; nested or disjoint.
    pub fn intersect(&self, other: &ResidueClass, p: u64) -> Option<ResidueClass> {
        let (coarse, fine) = if self.exponent <= other.exponent {
            (self, other)
        } else {
            (other, self)
        };
        coarse.contains(&fine.residue, p).then(|| fine.clone())
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n ≡ {} (mod p^{})", self.residue, self.exponent)
    }
}

/// Coefficients of `q(b + t)`.
fn taylor_shift(q: &[BigUint], b: &BigUint, modulus: &BigUint) -> Vec<BigUint> {
    let mut c = q.to_vec();
    let n = c.len();
    // repeated synthetic division by (t - b)
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let add = (&c[j + 1] * b) % modulus;
            c[j] = (&c[j] + add) % modulus;
        }
    }
    c
}

/// Maximal residue classes of `n` on which `q(n) ≡ 0 (mod p^M)`, found by
/// lifting one p-adic digit at a time. `q` holds coefficients in ascending
/// powers of `n`, interpreted modulo `p^M` with `M = ctx.precision()`.
pub fn poly_roots_mod(ctx: &PrimeContext, q: &[BigUint]) -> Vec<ResidueClass> {
    let modulus = ctx.modulus();
    let q: Vec<BigUint> = q.iter().map(|c| c % modulus).collect();
    let mut out = lift(ctx, &q, &BigUint::zero(), 0);
    out.sort();
    out
}

fn lift(ctx: &PrimeContext, q: &[BigUint], a: &BigUint, j: u32) -> Vec<ResidueClass> {
    let here = ResidueClass {
        residue: a.clone(),
        exponent: j,
    };
    if q.iter().all(Zero::is_zero) {
        return vec![here];
    }
    let p = ctx.p();
    let n = ctx.precision();
    let v0 = valuation_capped(&q[0], p, n);
    let v_rest = q[1..]
        .iter()
        .map(|c| valuation_capped(c, p, n))
        .min()
        .unwrap_or(n);
    if v0 < v_rest {
        // q(a + p^j t) has valuation exactly v0 < M throughout the class
        return Vec::new();
    }
    let modulus = ctx.modulus();
    let pj = ctx.pow(j);
    let pb = BigUint::from(p);
    let mut found = Vec::new();
    let mut all_full = true;
    for b in 0..p {
        let bb = BigUint::from(b);
        let shifted = taylor_shift(q, &bb, modulus);
        let mut scale = BigUint::from(1u32);
        let child_q: Vec<BigUint> = shifted
            .into_iter()
            .map(|c| {
                let v = (c * &scale) % modulus;
                scale = (&scale * &pb) % modulus;
                v
            })
            .collect();
        let child_a = a + &pj * &bb;
        let child = lift(ctx, &child_q, &child_a, j + 1);
        let full = child.len() == 1 && child[0].exponent == j + 1;
        all_full &= full;
        found.extend(child);
    }
    if all_full {
        vec![here]
    } else {
        found
    }
}

/// What the query asks to hit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Point(Vec<PAdicInt>),
    Coordinate { index: usize, value: PAdicInt },
}

#[derive(Clone, Debug)]
pub struct OrbitQuery {
    pub f: AnalyticMap,
    pub x0: Vec<PAdicInt>,
    pub target: Target,
    pub precision: u32,
    /// Every `n <= search_bound` is checked by direct iteration.
    pub search_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionReport {
    pub p: u64,
    pub precision: u32,
    pub verified: Vec<u64>,
    pub residue_classes: Vec<ResidueClass>,
    pub obstruction: bool,
}

impl SolutionReport {
    pub fn summary(&self) -> String {
        let mut s = String::new();
        if self.obstruction {
            s.push_str(&format!(
                "obstruction: no n >= 0 reaches the target mod {}^{}\n",
                self.p, self.precision
            ));
        } else {
            s.push_str(&format!(
                "necessary conditions on n (mod {}^{} hits):\n",
                self.p, self.precision
            ));
            for c in &self.residue_classes {
                s.push_str(&format!(
                    "  n ≡ {} (mod {}^{})\n",
                    c.residue, self.p, c.exponent
                ));
            }
            s.push_str("  (a class may contain no actual hit)\n");
        }
        let hits: Vec<String> = self.verified.iter().map(u64::to_string).collect();
        s.push_str(&format!("verified hits: [{}]\n", hits.join(", ")));
        s
    }
}

/// Intersect two class lists.
fn intersect_all(a: &[ResidueClass], b: &[ResidueClass], p: u64) -> Vec<ResidueClass> {
    let mut out: Vec<ResidueClass> = a
        .iter()
        .flat_map(|x| b.iter().filter_map(move |y| x.intersect(y, p)))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn solve_hit(query: &OrbitQuery) -> Result<SolutionReport> {
    let f = &query.f;
    let d = f.dim();
    if query.x0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: query.x0.len(),
        });
    }
    let m = query.precision;
    let ctx = f.ctx().with_precision(m)?;
    let p = ctx.p();
    let conditions: Vec<(usize, PAdicInt)> = match &query.target {
        Target::Point(t) => {
            if t.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: t.len(),
                });
            }
            t.iter()
                .enumerate()
                .map(|(i, v)| Ok((i, v.rebase(&ctx)?)))
                .collect::<Result<_>>()?
        }
        Target::Coordinate { index, value } => {
            if *index >= d {
                return Err(Error::InvalidInput(format!(
                    "coordinate {index} out of range for dimension {d}"
                )));
            }
            vec![(*index, value.rebase(&ctx)?)]
        }
    };

    let flow = interpolate(f, m)?;
    let x0: Vec<PAdicInt> = query
        .x0
        .iter()
        .map(|x| Ok(x.rebase(&ctx)?.lift_exact()))
        .collect::<Result<_>>()?;
    let polys = flow.specialize(&x0)?;
    let mut classes = vec![ResidueClass {
        residue: BigUint::zero(),
        exponent: 0,
    }];
    for (i, value) in &conditions {
        let mut q: Vec<BigUint> = polys[*i].iter().map(|c| c.residue().clone()).collect();
        q[0] = PAdicInt::new(&ctx, q[0].clone())
            .sub(&value.lift_exact())?
            .residue()
            .clone();
        let roots = poly_roots_mod(&ctx, &q);
        classes = intersect_all(&classes, &roots, p);
    }

    let f_m = f.rebase(&ctx)?;
    let mut verified = Vec::new();
    let mut y = x0.clone();
    for n in 0..=query.search_bound {
        if conditions.iter().all(|(i, v)| y[*i].eq_at(v, m)) {
            verified.push(n);
        }
        if n < query.search_bound {
            y = f_m.apply(&y)?;
        }
    }
    let obstruction = classes.is_empty();
    Ok(SolutionReport {
        p,
        precision: m,
        verified,
        residue_classes: classes,
        obstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::MultiSeries;
    use num_bigint::BigInt;

    fn ctx(p: u64, n: u32) -> PrimeContext {
        PrimeContext::new(p, n).unwrap()
    }

    fn map1(c: &PrimeContext, terms: &[(u32, i64)]) -> AnalyticMap {
        AnalyticMap::new(vec![MultiSeries::from_terms(
            c,
            1,
            16,
            terms.iter().map(|&(e, k)| (vec![e], BigInt::from(k))),
        )
        .unwrap()])
        .unwrap()
    }

    fn residues(points: &[Vec<PAdicInt>]) -> Vec<u64> {
        points
            .iter()
            .map(|p| p[0].residue().iter_u64_digits().next().unwrap_or(0))
            .collect()
    }

    fn big(v: &[i64], c: &PrimeContext) -> Vec<BigUint> {
        v.iter().map(|&x| c.reduce(&BigInt::from(x))).collect()
    }

    fn class(r: u64, e: u32) -> ResidueClass {
        ResidueClass {
            residue: BigUint::from(r),
            exponent: e,
        }
    }

    #[test]
    fn orbit_examples() {
        let c = ctx(3, 3);
        let x0 = [PAdicInt::zero(&c)];
        let o = orbit(&map1(&c, &[(1, 1), (0, 3)]), &x0, 3).unwrap();
        assert_eq!(residues(&o), vec![0, 3, 6, 9]);
        let o = orbit(&map1(&c, &[(1, 1)]), &[PAdicInt::from_i64(&c, 5)], 4).unwrap();
        assert_eq!(residues(&o), vec![5; 5]);
        let o = orbit(&map1(&c, &[(1, 1), (2, 3)]), &[PAdicInt::one(&c)], 2).unwrap();
        assert_eq!(residues(&o), vec![1, 4, 25]);
    }

    #[test]
    fn roots_examples() {
        let c = ctx(3, 3);
        assert_eq!(poly_roots_mod(&c, &big(&[-12, 3], &c)), vec![class(4, 2)]);
        let c5 = ctx(5, 2);
        assert_eq!(poly_roots_mod(&c5, &big(&[0, 1], &c5)), vec![class(0, 2)]);
        assert!(poly_roots_mod(&c5, &big(&[1], &c5)).is_empty());
        assert_eq!(poly_roots_mod(&c5, &big(&[0, 25], &c5)), vec![class(0, 0)]);
    }

    #[test]
    fn roots_merge_function_zero() {
        // 9 (n^3 - n) vanishes on all of Z_3 mod 27 without being the zero polynomial
        let c = ctx(3, 3);
        assert_eq!(poly_roots_mod(&c, &big(&[0, -9, 0, 9], &c)), vec![class(0, 0)]);
    }

    #[test]
    fn class_intersection() {
        assert_eq!(class(1, 1).intersect(&class(4, 2), 3), Some(class(4, 2)));
        assert_eq!(class(2, 1).intersect(&class(4, 2), 3), None);
        assert_eq!(class(0, 0).intersect(&class(7, 3), 3), Some(class(7, 3)));
    }

    #[test]
    fn solve_examples() {
        let c = ctx(3, 3);
        let f = map1(&c, &[(1, 1), (0, 3)]);
        let q = OrbitQuery {
            f: f.clone(),
            x0: vec![PAdicInt::zero(&c)],
            target: Target::Point(vec![PAdicInt::from_i64(&c, 12)]),
            precision: 3,
            search_bound: 10,
        };
        let r = solve_hit(&q).unwrap();
        assert_eq!(r.verified, vec![4]);
        assert_eq!(r.residue_classes, vec![class(4, 2)]);
        assert!(!r.obstruction);

        let q = OrbitQuery {
            target: Target::Point(vec![PAdicInt::one(&c)]),
            ..q
        };
        let r = solve_hit(&q).unwrap();
        assert!(r.obstruction);
        assert!(r.verified.is_empty());

        let id = map1(&c, &[(1, 1)]);
        let q = OrbitQuery {
            f: id,
            x0: vec![PAdicInt::from_i64(&c, 5)],
            target: Target::Coordinate {
                index: 0,
                value: PAdicInt::from_i64(&c, 5),
            },
            precision: 3,
            search_bound: 3,
        };
        let r = solve_hit(&q).unwrap();
        assert_eq!(r.residue_classes, vec![class(0, 0)]);
        assert_eq!(r.verified, vec![0, 1, 2, 3]);
    }

    #[test]
    fn solve_rejects_bad_coordinate() {
        let c = ctx(3, 3);
        let q = OrbitQuery {
            f: map1(&c, &[(1, 1)]),
            x0: vec![PAdicInt::zero(&c)],
            target: Target::Coordinate {
                index: 2,
                value: PAdicInt::zero(&c),
            },
            precision: 3,
            search_bound: 0,
        };
        assert!(solve_hit(&q).is_err());
    }
}
