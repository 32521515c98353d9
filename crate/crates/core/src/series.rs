//! Truncated multivariate series over `Z/p^N`, standing in for elements of
//! the Tate algebra `Z_p<x_1, ..., x_d>`.
//!
//! A [`MultiSeries`] stores only coefficients that are nonzero modulo `p^N`,
//! and every stored monomial has total degree at most `degree_cap`. Any ring
//! operation that would produce a nonzero coefficient above the cap fails
//! with [`Error::DegreeCapExceeded`] instead of truncating silently.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::padic::{balanced, valuation_capped, PAdicInt, PrimeContext, Valuation};

/// Exponent vector of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then larger powers
/// of earlier variables first (`1, x1, x2, x1^2, x1 x2, x2^2, ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

/// A truncated series in `nvars` variables with coefficients in `Z/p^N`.
///
/// Equality compares values only; the degree cap is a storage bound.
#[derive(Clone, Debug)]
pub struct MultiSeries {
    ctx: PrimeContext,
    nvars: usize,
    degree_cap: u32,
    terms: BTreeMap<Monomial, BigUint>,
}

impl PartialEq for MultiSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.nvars == other.nvars && self.terms == other.terms
    }
}

impl Eq for MultiSeries {}

impl MultiSeries {
    pub fn zero(ctx: &PrimeContext, nvars: usize, degree_cap: u32) -> Self {
        Self {
            ctx: ctx.clone(),
            nvars,
            degree_cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ctx: &PrimeContext, nvars: usize, degree_cap: u32, c: &BigInt) -> Self {
        let mut s = Self::zero(ctx, nvars, degree_cap);
        let r = ctx.reduce(c);
        if !r.is_zero() {
            s.terms.insert(Monomial::one(nvars), r);
        }
        s
    }

    /// The coordinate function `x_i`.
    pub fn var(ctx: &PrimeContext, nvars: usize, degree_cap: u32, i: usize) -> Self {
        let mut s = Self::zero(ctx, nvars, degree_cap);
        if ctx.modulus() > &BigUint::from(1u32) {
            s.terms.insert(Monomial::var(nvars, i), BigUint::from(1u32));
        }
        s
    }

    /// Build from `(exponents, integer coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(ctx: &PrimeContext, nvars: usize, degree_cap: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (exps, c) in terms {
            if exps.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: exps.len(),
                });
            }
            *acc.entry(Monomial::new(&exps)).or_insert_with(BigInt::zero) += c;
        }
        let mut s = Self::zero(ctx, nvars, degree_cap);
        for (m, c) in acc {
            let r = ctx.reduce(&c);
            if r.is_zero() {
                continue;
            }
            if m.degree() > degree_cap {
                return Err(Error::DegreeCapExceeded {
                    cap: degree_cap,
                    degree: m.degree(),
                });
            }
            s.terms.insert(m, r);
        }
        Ok(s)
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> PAdicInt {
        PAdicInt::new(
            &self.ctx,
            self.terms.get(m).cloned().unwrap_or_else(BigUint::zero),
        )
    }

    /// Largest total degree among stored terms (0 for the zero series).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn with_degree_cap(&self, degree_cap: u32) -> Result<Self> {
        let top = self.total_degree();
        if top > degree_cap {
            return Err(Error::DegreeCapExceeded {
                cap: degree_cap,
                degree: top,
            });
        }
        let mut s = self.clone();
        s.degree_cap = degree_cap;
        Ok(s)
    }

    /// Re-express in another precision of the same prime. Reducing is exact;
    /// raising treats the coefficients as the integers given by their
    /// balanced representatives.
    pub fn rebase(&self, ctx: &PrimeContext) -> Result<Self> {
        if ctx.p() != self.ctx.p() {
            return Err(Error::ContextMismatch(format!(
                "p = {} vs p = {}",
                self.ctx.p(),
                ctx.p()
            )));
        }
        let lift = ctx.precision() > self.ctx.precision();
        let terms = self.terms.iter().map(|(m, c)| {
            let v = if lift {
                balanced(c, self.ctx.modulus())
            } else {
                BigInt::from(c.clone())
            };
            (m.exps().to_vec(), v)
        });
        Self::from_terms(ctx, self.nvars, self.degree_cap, terms)
    }

    /// Append `extra` new variables (in last position) that do not occur.
    pub fn extend_vars(&self, extra: usize, degree_cap: u32) -> Result<Self> {
        let mut s = Self::zero(&self.ctx, self.nvars + extra, degree_cap);
        for (m, c) in &self.terms {
            if m.degree() > degree_cap {
                return Err(Error::DegreeCapExceeded {
                    cap: degree_cap,
                    degree: m.degree(),
                });
            }
            let mut e = m.0.clone();
            e.extend(std::iter::repeat_n(0, extra));
            s.terms.insert(Monomial(e), c.clone());
        }
        Ok(s)
    }

    fn check_compatible(&self, other: &MultiSeries) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "(p = {}, N = {}) vs (p = {}, N = {})",
                self.ctx.p(),
                self.ctx.precision(),
                other.ctx.p(),
                other.ctx.precision()
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiSeries) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.degree_cap = self.degree_cap.max(other.degree_cap);
        out.add_assign_terms(other);
        Ok(out)
    }

    fn add_assign_terms(&mut self, other: &MultiSeries) {
        let modulus = self.ctx.modulus().clone();
        for (m, c) in &other.terms {
            match self.terms.get_mut(m) {
                Some(e) => {
                    *e += c;
                    if *e >= modulus {
                        *e -= &modulus;
                    }
                    if e.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), c.clone());
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        let modulus = self.ctx.modulus();
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = modulus - &*c;
        }
        out
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, s: &PAdicInt) -> Result<Self> {
        if s.ctx().p() != self.ctx.p() {
            return Err(Error::ContextMismatch("scalar from another prime".into()));
        }
        let s = s.residue() % self.ctx.modulus();
        Ok(self.scale(&s))
    }

    pub(crate) fn scale(&self, s: &BigUint) -> Self {
        let modulus = self.ctx.modulus();
        let mut out = Self::zero(&self.ctx, self.nvars, self.degree_cap);
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let v = (c * s) % modulus;
            if !v.is_zero() {
                out.terms.insert(m.clone(), v);
            }
        }
        out
    }

    /// Product; the result's cap is the larger of the two caps.
    pub fn mul(&self, other: &MultiSeries) -> Result<Self> {
        self.check_compatible(other)?;
        let cap = self.degree_cap.max(other.degree_cap);
        self.mul_capped(other, cap)
    }

    pub(crate) fn mul_capped(&self, other: &MultiSeries, cap: u32) -> Result<Self> {
        let mut out = Self::zero(&self.ctx, self.nvars, cap);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let raw: Vec<(Monomial, BigUint)> = match self.ctx.small_modulus() {
            Some(m) => mul_small(&self.terms, &other.terms, m),
            None => mul_big(&self.terms, &other.terms, self.ctx.modulus()),
        };
        for (mono, c) in raw {
            if mono.degree() > cap {
                return Err(Error::DegreeCapExceeded {
                    cap,
                    degree: mono.degree(),
                });
            }
            out.terms.insert(mono, c);
        }
        Ok(out)
    }

    /// Minimum coefficient valuation; `AtLeast(N)` for the zero series.
    pub fn gauss_norm_valuation(&self) -> Valuation {
        let p = self.ctx.p();
        let n = self.ctx.precision();
        self.terms
            .values()
            .map(|c| valuation_capped(c, p, n))
            .min()
            .map_or(Valuation::AtLeast(n), Valuation::Finite)
    }

    /// Evaluate at a point of `Z_p^d`. Coefficients are integral, so the
    /// result is known to the smallest precision among the coordinates.
    pub fn eval_point(&self, x0: &[PAdicInt]) -> Result<PAdicInt> {
        if x0.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: x0.len(),
            });
        }
        let mut prec = self.ctx.precision();
        for x in x0 {
            if x.ctx().p() != self.ctx.p() {
                return Err(Error::ContextMismatch("point from another prime".into()));
            }
            prec = prec.min(x.known_precision());
        }
        let modulus = self.ctx.modulus();
        let mut powers: Vec<Vec<BigUint>> = Vec::with_capacity(self.nvars);
        for (i, x) in x0.iter().enumerate() {
            let top = self.degree_in(i) as usize;
            let base = x.residue() % modulus;
            let mut pw = vec![BigUint::from(1u32) % modulus];
            for k in 1..=top {
                let next = (&pw[k - 1] * &base) % modulus;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut acc = BigUint::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = (t * &powers[i][e as usize]) % modulus;
                }
            }
            acc += t;
        }
        Ok(PAdicInt::with_precision(&self.ctx, acc % modulus, prec))
    }

    /// Substitute `subs[i]` for `x_i`. All substituted series share a
    /// context and variable count; the result uses their degree cap.
    ///
    /// Substitution is Horner-style in each variable in turn, so every
    /// intermediate value is itself the substitution of a sub-sum of `self`.
    pub fn compose_with(&self, subs: &[MultiSeries]) -> Result<MultiSeries> {
        if subs.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: subs.len(),
            });
        }
        let Some(first) = subs.first() else {
            // a series in zero variables is a constant
            return Err(Error::InvalidInput(
                "cannot substitute into a series with no variables".into(),
            ));
        };
        for s in subs {
            first.check_compatible(s)?;
        }
        if first.ctx != self.ctx {
            return Err(Error::ContextMismatch(
                "substituted series and target live in different contexts".into(),
            ));
        }
        let cap = subs.iter().map(|s| s.degree_cap).max().unwrap_or(0);
        let terms: Vec<(&Monomial, &BigUint)> = self.terms.iter().collect();
        horner(&terms, 0, subs, cap, &first.ctx, first.nvars)
    }

    /// `h o f` for an analytic self-map `f`.
    pub fn compose(&self, f: &AnalyticMap) -> Result<MultiSeries> {
        self.compose_with(f.components())
    }

    /// Re-expand `self(x_1, .., x_k + shift, ..)` exactly (a Taylor shift in
    /// one variable). Degrees do not grow.
    pub fn shift_var(&self, i: usize, shift: &BigInt) -> Result<MultiSeries> {
        let subs: Vec<MultiSeries> = (0..self.nvars)
            .map(|j| {
                let v = MultiSeries::var(&self.ctx, self.nvars, self.degree_cap, j);
                if j == i {
                    v.add(&MultiSeries::constant(
                        &self.ctx,
                        self.nvars,
                        self.degree_cap,
                        shift,
                    ))
                    .expect("same context")
                } else {
                    v
                }
            })
            .collect();
        self.compose_with(&subs)
    }
}

fn horner(
    terms: &[(&Monomial, &BigUint)],
    var: usize,
    subs: &[MultiSeries],
    cap: u32,
    ctx: &PrimeContext,
    out_vars: usize,
) -> Result<MultiSeries> {
    if terms.is_empty() {
        return Ok(MultiSeries::zero(ctx, out_vars, cap));
    }
    if var == subs.len() {
        let sum = terms
            .iter()
            .fold(BigUint::zero(), |acc, (_, c)| acc + *c)
            % ctx.modulus();
        return Ok(MultiSeries::constant(ctx, out_vars, cap, &BigInt::from(sum)));
    }
    let mut buckets: BTreeMap<u32, Vec<(&Monomial, &BigUint)>> = BTreeMap::new();
    for &(m, c) in terms {
        buckets.entry(m.exps()[var]).or_default().push((m, c));
    }
    let top = *buckets.keys().next_back().expect("nonempty");
    let mut acc = MultiSeries::zero(ctx, out_vars, cap);
    for e in (0..=top).rev() {
        if !acc.is_zero() {
            acc = acc.mul_capped(&subs[var], cap)?;
        }
        if let Some(bucket) = buckets.get(&e) {
            let inner = horner(bucket, var + 1, subs, cap, ctx, out_vars)?;
            acc.add_assign_terms(&inner);
        }
    }
    Ok(acc)
}

fn mul_small(
    a: &BTreeMap<Monomial, BigUint>,
    b: &BTreeMap<Monomial, BigUint>,
    modulus: u64,
) -> Vec<(Monomial, BigUint)> {
    let to_words = |t: &BTreeMap<Monomial, BigUint>| -> Vec<(Monomial, u64)> {
        t.iter()
            .map(|(m, c)| (m.clone(), c.to_u64().expect("residue below small modulus")))
            .collect()
    };
    let (a, b) = (to_words(a), to_words(b));
    let m = modulus as u128;
    let mut acc: HashMap<Monomial, u64> = HashMap::with_capacity(a.len() * b.len().min(64));
    for (ma, ca) in &a {
        for (mb, cb) in &b {
            let prod = ((*ca as u128 * *cb as u128) % m) as u64;
            let e = acc.entry(ma.mul(mb)).or_insert(0);
            *e += prod;
            if *e >= modulus {
                *e -= modulus;
            }
        }
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|(mono, c)| (mono, BigUint::from(c)))
        .collect()
}

fn mul_big(
    a: &BTreeMap<Monomial, BigUint>,
    b: &BTreeMap<Monomial, BigUint>,
    modulus: &BigUint,
) -> Vec<(Monomial, BigUint)> {
    let mut acc: HashMap<Monomial, BigUint> = HashMap::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            *acc.entry(ma.mul(mb)).or_insert_with(BigUint::zero) += ca * cb;
        }
    }
    acc.into_iter()
        .map(|(mono, c)| (mono, c % modulus))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, e)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c == &BigUint::from(1u32) {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", c, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Degree cap that provably loses nothing modulo `p^N` when iterating `h ↦ h∘f`
/// (or composing iterates) for a polynomial map of degree `max_degree` with
/// contraction `c`: monomials of degree `t` carry valuation at least
/// `c (t - 1) / (D - 1)`.
pub fn effective_degree_bound(max_degree: u32, precision: u32, c: u32) -> u32 {
    let c = c.max(1);
    1 + max_degree.saturating_sub(1) * precision.div_ceil(c)
}

/// [`effective_degree_bound`] plus a slack of 8.
pub fn pipeline_degree_cap(max_degree: u32, precision: u32, c: u32) -> u32 {
    effective_degree_bound(max_degree, precision, c) + 8
}

/// A polynomial self-map of the closed unit polydisk, `f = (f_1, .., f_d)`.
///
/// The contraction level (minimum valuation of `f(x) - x`) is always
/// recomputed from the components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticMap {
    components: Vec<MultiSeries>,
    contraction: Valuation,
}

impl AnalyticMap {
    pub fn new(components: Vec<MultiSeries>) -> Result<Self> {
        let d = components.len();
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput("a map needs at least one component".into()));
        };
        for c in &components {
            first.check_compatible(c)?;
            if c.nvars != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: c.nvars,
                });
            }
        }
        let contraction = contraction_of(&components)?;
        Ok(Self {
            components,
            contraction,
        })
    }

    pub fn identity(ctx: &PrimeContext, d: usize, degree_cap: u32) -> Self {
        let components = (0..d)
            .map(|i| MultiSeries::var(ctx, d, degree_cap, i))
            .collect();
        Self {
            components,
            contraction: Valuation::Infinite,
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn ctx(&self) -> &PrimeContext {
        self.components[0].ctx()
    }

    pub fn components(&self) -> &[MultiSeries] {
        &self.components
    }

    /// Certified contraction level `c`: `f(x) ≡ x (mod p^c)`.
    pub fn contraction(&self) -> Valuation {
        self.contraction
    }

    pub fn max_degree(&self) -> u32 {
        self.components
            .iter()
            .map(MultiSeries::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn degree_cap(&self) -> u32 {
        self.components
            .iter()
            .map(MultiSeries::degree_cap)
            .max()
            .unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.contraction.is_infinite()
    }

    pub fn with_degree_cap(&self, cap: u32) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.with_degree_cap(cap))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            components,
            contraction: self.contraction,
        })
    }

    /// See [`MultiSeries::rebase`].
    pub fn rebase(&self, ctx: &PrimeContext) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.rebase(ctx))
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    /// `f(x0)`.
    pub fn apply(&self, x0: &[PAdicInt]) -> Result<Vec<PAdicInt>> {
        self.components.iter().map(|c| c.eval_point(x0)).collect()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose_map(&self, inner: &AnalyticMap) -> Result<AnalyticMap> {
        let components = self
            .components
            .iter()
            .map(|c| c.compose(inner))
            .collect::<Result<Vec<_>>>()?;
        Self::new(components)
    }

    /// The `k`-fold iterate `f^k` by repeated composition (`k >= 1`).
    pub fn iterate(&self, k: u64) -> Result<AnalyticMap> {
        if k == 0 {
            return Ok(Self::identity(self.ctx(), self.dim(), self.degree_cap()));
        }
        let mut g = self.clone();
        for _ in 1..k {
            g = self.compose_map(&g)?;
        }
        Ok(g)
    }
}

fn contraction_of(components: &[MultiSeries]) -> Result<Valuation> {
    let d = components.len();
    let ctx = components[0].ctx();
    let mut c = Valuation::Infinite;
    for (i, comp) in components.iter().enumerate() {
        let x = MultiSeries::var(ctx, d, comp.degree_cap(), i);
        let diff = comp.sub(&x)?;
        if !diff.is_zero() {
            c = c.min(diff.gauss_norm_valuation());
        }
    }
    Ok(c)
}

/// Largest `c` with `f(x) ≡ x (mod p^c)`; infinite for the identity.
pub fn certify_contraction(f: &AnalyticMap) -> Valuation {
    f.contraction()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64, n: u32) -> PrimeContext {
        PrimeContext::new(p, n).unwrap()
    }

    fn series(c: &PrimeContext, nvars: usize, terms: &[(&[u32], i64)]) -> MultiSeries {
        MultiSeries::from_terms(
            c,
            nvars,
            32,
            terms.iter().map(|(e, k)| (e.to_vec(), BigInt::from(*k))),
        )
        .unwrap()
    }

    fn map1(c: &PrimeContext, terms: &[(&[u32], i64)]) -> AnalyticMap {
        AnalyticMap::new(vec![series(c, 1, terms)]).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let mut ms = [Monomial::new(&[0, 2]),
            Monomial::new(&[1, 0]),
            Monomial::new(&[0, 0]),
            Monomial::new(&[1, 1]),
            Monomial::new(&[0, 1]),
            Monomial::new(&[2, 0])];
        ms.sort();
        let exps: Vec<&[u32]> = ms.iter().map(|m| m.exps()).collect();
        assert_eq!(
            exps,
            vec![&[0, 0][..], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]]
        );
    }

    #[test]
    fn ring_examples() {
        let c = ctx(3, 3);
        let x = series(&c, 1, &[(&[1], 1)]);
        assert!(x.add(&x.neg()).unwrap().is_zero());
        let x3 = series(&c, 1, &[(&[1], 1), (&[0], 3)]);
        assert_eq!(
            x3.mul(&x).unwrap(),
            series(&c, 1, &[(&[2], 1), (&[1], 3)])
        );
        assert!(x3.scalar_mul(&PAdicInt::zero(&c)).unwrap().is_zero());
    }

    #[test]
    fn pruning_after_mul() {
        let c = ctx(3, 2);
        let a = series(&c, 1, &[(&[1], 3)]);
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn degree_cap_is_loud() {
        let c = ctx(5, 2);
        let a = MultiSeries::from_terms(&c, 1, 2, vec![(vec![2], BigInt::from(1))]).unwrap();
        assert_eq!(
            a.mul(&a),
            Err(Error::DegreeCapExceeded { cap: 2, degree: 4 })
        );
        // excess coefficients that vanish mod p^N are fine
        let b = MultiSeries::from_terms(&c, 1, 2, vec![(vec![2], BigInt::from(5))]).unwrap();
        assert!(b.mul(&b).unwrap().is_zero());
        assert!(MultiSeries::from_terms(&c, 1, 1, vec![(vec![2], BigInt::from(1))]).is_err());
    }

    #[test]
    fn gauss_norm_examples() {
        let c = ctx(3, 4);
        assert_eq!(
            series(&c, 1, &[(&[1], 3), (&[2], 9)]).gauss_norm_valuation(),
            Valuation::Finite(1)
        );
        assert_eq!(
            MultiSeries::zero(&c, 1, 4).gauss_norm_valuation(),
            Valuation::AtLeast(4)
        );
        assert_eq!(
            series(&c, 1, &[(&[1], 1)]).gauss_norm_valuation(),
            Valuation::Finite(0)
        );
    }

    #[test]
    fn compose_examples() {
        let c = ctx(3, 3);
        let h = series(&c, 1, &[(&[2], 1)]);
        let f = map1(&c, &[(&[1], 1), (&[0], 3)]);
        assert_eq!(
            h.compose(&f).unwrap(),
            series(&c, 1, &[(&[2], 1), (&[1], 6), (&[0], 9)])
        );

        let g = map1(&c, &[(&[1], 4), (&[3], 3), (&[0], 1)]);
        let x = series(&c, 1, &[(&[1], 1)]);
        assert_eq!(x.compose(&g).unwrap(), g.components()[0]);

        let c2 = ctx(3, 2);
        let h2 = series(&c2, 2, &[(&[1, 1], 1)]);
        let f2 = AnalyticMap::new(vec![
            series(&c2, 2, &[(&[1, 0], 1), (&[0, 0], 3)]),
            series(&c2, 2, &[(&[0, 1], 1)]),
        ])
        .unwrap();
        assert_eq!(
            h2.compose(&f2).unwrap(),
            series(&c2, 2, &[(&[1, 1], 1), (&[0, 1], 3)])
        );
    }

    #[test]
    fn eval_examples() {
        let c = ctx(3, 3);
        let a = series(&c, 1, &[(&[2], 1), (&[0], 1)]);
        let v = a.eval_point(&[PAdicInt::from_i64(&c, 3)]).unwrap();
        assert_eq!(v.residue(), &BigUint::from(10u32));
        let z = MultiSeries::zero(&c, 1, 3);
        assert!(z.eval_point(&[PAdicInt::from_i64(&c, 5)]).unwrap().is_zero());
        let s = series(&c, 2, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let v = s
            .eval_point(&[PAdicInt::from_i64(&c, 1), PAdicInt::from_i64(&c, 2)])
            .unwrap();
        assert_eq!(v.residue(), &BigUint::from(3u32));
        assert!(s.eval_point(&[PAdicInt::from_i64(&c, 1)]).is_err());
    }

    #[test]
    fn eval_precision_follows_point() {
        let c = ctx(5, 4);
        let a = series(&c, 1, &[(&[2], 1)]);
        let x = PAdicInt::from_i64(&c, 7).truncate(2);
        assert_eq!(a.eval_point(&[x]).unwrap().known_precision(), 2);
    }

    #[test]
    fn contraction_examples() {
        let c3 = ctx(3, 5);
        assert_eq!(
            certify_contraction(&map1(&c3, &[(&[1], 1), (&[2], 3)])),
            Valuation::Finite(1)
        );
        let c2 = ctx(2, 5);
        assert_eq!(
            certify_contraction(&map1(&c2, &[(&[1], -1)])),
            Valuation::Finite(1)
        );
        assert_eq!(
            certify_contraction(&map1(&c2, &[(&[1], 1)])),
            Valuation::Infinite
        );
    }

    #[test]
    fn rebase_lifts_balanced() {
        let c = ctx(2, 3);
        let s = series(&c, 1, &[(&[1], -1)]);
        let up = s.rebase(&ctx(2, 6)).unwrap();
        assert_eq!(up.coefficient(&Monomial::new(&[1])).residue(), &BigUint::from(63u32));
        let down = up.rebase(&ctx(2, 2)).unwrap();
        assert_eq!(down.coefficient(&Monomial::new(&[1])).residue(), &BigUint::from(3u32));
    }

    #[test]
    fn shift_var_is_taylor_shift() {
        let c = ctx(5, 3);
        // n^2 -> (n+1)^2
        let s = series(&c, 1, &[(&[2], 1)]);
        assert_eq!(
            s.shift_var(0, &BigInt::from(1)).unwrap(),
            series(&c, 1, &[(&[2], 1), (&[1], 2), (&[0], 1)])
        );
    }

    #[test]
    fn iterate_composes() {
        let c = ctx(2, 6);
        let f = map1(&c, &[(&[1], -1)]);
        assert!(f.iterate(2).unwrap().is_identity());
        let g = map1(&c, &[(&[1], 1), (&[2], 2)]);
        // (x + 2x^2) o (x + 2x^2) = x + 4x^2 + 8x^3 + 8x^4
        assert_eq!(
            g.iterate(2).unwrap().components()[0],
            series(&c, 1, &[(&[1], 1), (&[2], 4), (&[3], 8), (&[4], 8)])
        );
    }
}
