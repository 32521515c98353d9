//! Fixed-precision arithmetic in `Z/p^N` with explicit precision tracking,
//! plus the combinatorics (factorial valuations, binomials at p-adic points,
//! falling factorials) used by the Mahler construction.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A prime `p` together with a working precision `N`; values live in `Z/p^N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrimeContext {
    p: u64,
    precision: u32,
    modulus: BigUint,
}

impl PrimeContext {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(Self {
            p,
            precision,
            modulus: BigUint::from(p).pow(precision),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The working precision `N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `p^N`.
    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `p^k` as an integer.
    pub fn pow(&self, k: u32) -> BigUint {
        BigUint::from(self.p).pow(k)
    }

    /// The same prime at another precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidPrecision(precision));
        }
        Ok(Self {
            p: self.p,
            precision,
            modulus: self.pow(precision),
        })
    }

    /// `p^N` as a machine word when it fits comfortably (products of two
    /// residues must fit in `u128`).
    pub fn small_modulus(&self) -> Option<u64> {
        self.modulus.to_u64().filter(|&m| m < (1u64 << 63))
    }

    /// Canonical residue of a signed integer in `[0, p^N)`.
    pub fn reduce(&self, x: &BigInt) -> BigUint {
        reduce_signed(x, &self.modulus)
    }

    /// Exact p-adic valuation of a residue, capped at `N` for zero.
    pub fn residue_valuation(&self, r: &BigUint) -> u32 {
        valuation_capped(r, self.p, self.precision)
    }
}

pub(crate) fn reduce_signed(x: &BigInt, modulus: &BigUint) -> BigUint {
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    x.mod_floor(&m).to_biguint().expect("mod_floor is nonnegative")
}

/// Balanced representative of `r` modulo `modulus`, in `(-modulus/2, modulus/2]`.
pub(crate) fn balanced(r: &BigUint, modulus: &BigUint) -> BigInt {
    let r = BigInt::from_biguint(Sign::Plus, r.clone());
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    if &r * 2 > m {
        r - m
    } else {
        r
    }
}

/// Largest `k <= cap` with `p^k | r`; `cap` when `r` is zero.
pub(crate) fn valuation_capped(r: &BigUint, p: u64, cap: u32) -> u32 {
    if r.is_zero() {
        return cap;
    }
    if let Some(mut x) = r.to_u64() {
        let mut k = 0;
        while k < cap && x % p == 0 {
            x /= p;
            k += 1;
        }
        return k;
    }
    let pb = BigUint::from(p);
    let mut x = r.clone();
    let mut k = 0;
    while k < cap {
        let (q, rem) = x.div_rem(&pb);
        if !rem.is_zero() {
            break;
        }
        x = q;
        k += 1;
    }
    k
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    if m.is_one() {
        return Some(BigUint::zero());
    }
    let a = BigInt::from_biguint(Sign::Plus, a.clone());
    let mi = BigInt::from_biguint(Sign::Plus, m.clone());
    let e = a.extended_gcd(&mi);
    if !e.gcd.is_one() {
        return None;
    }
    Some(reduce_signed(&e.x, m))
}

/// A p-adic valuation as seen through finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    /// Exactly this many factors of `p`.
    Finite(u32),
    /// The value is zero to the known precision, so the valuation is at
    /// least this much.
    AtLeast(u32),
    /// The value is exactly zero (e.g. `f - x` for the identity map).
    Infinite,
}

impl Valuation {
    /// Lower bound on the valuation; `None` for infinity.
    pub fn lower_bound(&self) -> Option<u32> {
        match *self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// True when the valuation is certainly `>= k`.
    pub fn is_at_least(&self, k: u32) -> bool {
        self.lower_bound().is_none_or(|v| v >= k)
    }

    /// Minimum of two valuations, keeping the weaker kind on ties.
    pub fn min(self, other: Valuation) -> Valuation {
        use Valuation::*;
        match (self, other) {
            (Infinite, x) | (x, Infinite) => x,
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
            (Finite(a), AtLeast(b)) | (AtLeast(b), Finite(a)) => {
                if a <= b {
                    Finite(a)
                } else {
                    AtLeast(b)
                }
            }
        }
    }

    fn sort_key(&self) -> (u64, u8) {
        match *self {
            Valuation::Finite(v) => (v as u64, 0),
            Valuation::AtLeast(v) => (v as u64, 1),
            Valuation::Infinite => (u64::MAX, 2),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, "capped({v})"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// An element of `Z_p` known modulo `p^known_precision`.
///
/// The residue is kept reduced modulo `p^known_precision`, which is a
/// canonical representative in `[0, p^N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    ctx: PrimeContext,
    residue: BigUint,
    known_precision: u32,
}

impl PAdicInt {
    /// A value known to the full working precision.
    pub fn new(ctx: &PrimeContext, residue: BigUint) -> Self {
        Self::with_precision(ctx, residue, ctx.precision)
    }

    /// A value known only modulo `p^known_precision` (clamped to `N`).
    pub fn with_precision(ctx: &PrimeContext, residue: BigUint, known_precision: u32) -> Self {
        let known_precision = known_precision.min(ctx.precision);
        let residue = residue % ctx.pow(known_precision);
        Self {
            ctx: ctx.clone(),
            residue,
            known_precision,
        }
    }

    pub fn from_i64(ctx: &PrimeContext, x: i64) -> Self {
        Self::from_bigint(ctx, &BigInt::from(x))
    }

    pub fn from_bigint(ctx: &PrimeContext, x: &BigInt) -> Self {
        Self::new(ctx, ctx.reduce(x))
    }

    /// `num/den` for `den` prime to `p`, by modular inversion.
    pub fn from_ratio(ctx: &PrimeContext, num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let d = ctx.reduce(den);
        let inv = mod_inverse(&d, ctx.modulus()).ok_or_else(|| {
            Error::InvalidInput(format!("denominator {den} is divisible by p = {}", ctx.p))
        })?;
        Ok(Self::new(ctx, (ctx.reduce(num) * inv) % ctx.modulus()))
    }

    pub fn zero(ctx: &PrimeContext) -> Self {
        Self::new(ctx, BigUint::zero())
    }

    pub fn one(ctx: &PrimeContext) -> Self {
        Self::new(ctx, BigUint::one())
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn known_precision(&self) -> u32 {
        self.known_precision
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// The largest `k <= known_precision` with `p^k | residue`.
    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            Valuation::AtLeast(self.known_precision)
        } else {
            Valuation::Finite(valuation_capped(
                &self.residue,
                self.ctx.p,
                self.known_precision,
            ))
        }
    }

    fn valuation_floor(&self) -> u32 {
        self.valuation().lower_bound().unwrap_or(self.known_precision)
    }

    /// Forget digits beyond `k`.
    pub fn truncate(&self, k: u32) -> Self {
        Self::with_precision(&self.ctx, self.residue.clone(), k.min(self.known_precision))
    }

    /// Treat the stored representative as exact at full working precision.
    pub fn lift_exact(&self) -> Self {
        Self::new(&self.ctx, self.residue.clone())
    }

    /// Move to another context with the same prime, keeping the representative.
    pub fn rebase(&self, ctx: &PrimeContext) -> Result<Self> {
        self.check_prime(ctx)?;
        Ok(Self::with_precision(ctx, self.residue.clone(), self.known_precision))
    }

    /// True when both values agree modulo `p^k`.
    pub fn eq_at(&self, other: &PAdicInt, k: u32) -> bool {
        let m = self.ctx.pow(k);
        &self.residue % &m == &other.residue % &m
    }

    /// Balanced integer representative modulo `p^known_precision`.
    pub fn to_balanced(&self) -> BigInt {
        balanced(&self.residue, &self.ctx.pow(self.known_precision))
    }

    fn check_prime(&self, ctx: &PrimeContext) -> Result<()> {
        if self.ctx.p != ctx.p {
            return Err(Error::ContextMismatch(format!(
                "p = {} vs p = {}",
                self.ctx.p, ctx.p
            )));
        }
        Ok(())
    }

    fn check_same(&self, other: &PAdicInt) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!(
                "(p = {}, N = {}) vs (p = {}, N = {})",
                self.ctx.p, self.ctx.precision, other.ctx.p, other.ctx.precision
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PAdicInt) -> Result<Self> {
        self.check_same(other)?;
        let k = self.known_precision.min(other.known_precision);
        Ok(Self::with_precision(
            &self.ctx,
            &self.residue + &other.residue,
            k,
        ))
    }

    pub fn neg(&self) -> Self {
        let m = self.ctx.pow(self.known_precision);
        let r = (&m - &self.residue % &m) % &m;
        Self {
            ctx: self.ctx.clone(),
            residue: r,
            known_precision: self.known_precision,
        }
    }

    pub fn sub(&self, other: &PAdicInt) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Product; digits known = `min(k_a + v(b), k_b + v(a))`, capped at `N`.
    pub fn mul(&self, other: &PAdicInt) -> Result<Self> {
        self.check_same(other)?;
        let k = (self.known_precision + other.valuation_floor())
            .min(other.known_precision + self.valuation_floor())
            .min(self.ctx.precision);
        Ok(Self::with_precision(
            &self.ctx,
            &self.residue * &other.residue,
            k,
        ))
    }

    /// Exact quotient `q` with `q * b = a`; precision drops by `v(b)`.
    pub fn div_tracked(&self, b: &PAdicInt) -> Result<Self> {
        self.check_same(b)?;
        let vb = match b.valuation() {
            Valuation::Finite(v) => v,
            _ => {
                return Err(Error::ValuationError(
                    "divisor has no finite valuation at its precision".into(),
                ))
            }
        };
        if let Valuation::Finite(va) = self.valuation() {
            if va < vb {
                return Err(Error::ValuationError(format!(
                    "v(a) = {va} < v(b) = {vb}"
                )));
            }
        }
        let base = self.known_precision.min(b.known_precision);
        if base <= vb {
            return Err(Error::PrecisionUnderflow(format!(
                "dividing by an element of valuation {vb} leaves no digits of {base}"
            )));
        }
        let k = base - vb;
        let pv = self.ctx.pow(vb);
        let modk = self.ctx.pow(k);
        let num = &self.residue / &pv;
        let unit = (&b.residue / &pv) % &modk;
        let inv = mod_inverse(&unit, &modk).expect("unit part is invertible");
        Ok(Self::with_precision(&self.ctx, num * inv, k))
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} mod {}^{}",
            self.residue, self.ctx.p, self.known_precision
        )
    }
}

/// Sum of the base-`p` digits of `m`.
pub fn digit_sum(mut m: u64, p: u64) -> u64 {
    let mut s = 0;
    while m > 0 {
        s += m % p;
        m /= p;
    }
    s
}

/// `v_p(m!)` by Legendre's formula `(m - s_p(m)) / (p - 1)`.
pub fn factorial_valuation(m: u64, p: u64) -> u64 {
    (m - digit_sum(m, p)) / (p - 1)
}

/// Coefficients (ascending powers of `n`) of `n (n-1) ... (n-m+1)`.
pub fn falling_factorial_poly(m: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for k in 0..m {
        // multiply by (n - k)
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * BigInt::from(k);
        }
        coeffs = next;
    }
    coeffs
}

/// `m!` as an integer.
pub(crate) fn factorial(m: u64) -> BigUint {
    (1..=m).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `binom(a, m) = a (a-1) ... (a-m+1) / m!` at a p-adic point `a`.
///
/// The numerator is formed exactly from the nonnegative representative of
/// `a`, so the division by `m!` is exact; the result is known modulo
/// `p^(k_a - v_p(m!))`.
pub fn binom_padic(a: &PAdicInt, m: u64) -> Result<PAdicInt> {
    let ctx = a.ctx();
    let loss = factorial_valuation(m, ctx.p) as u32;
    if a.known_precision <= loss {
        return Err(Error::PrecisionUnderflow(format!(
            "binomial of order {m} needs more than {loss} digits, have {}",
            a.known_precision
        )));
    }
    let k = BigInt::from_biguint(Sign::Plus, a.residue.clone());
    let mut num = BigInt::one();
    for i in 0..m {
        num *= &k - BigInt::from(i);
        if num.is_zero() {
            break;
        }
    }
    let fact = BigInt::from_biguint(Sign::Plus, factorial(m));
    let (q, r) = num.div_rem(&fact);
    debug_assert!(r.is_zero());
    Ok(PAdicInt::with_precision(
        ctx,
        ctx.reduce(&q),
        a.known_precision - loss,
    ))
}

/// Parse `"a"`, `"-a"` or `"a/b"` into a numerator/denominator pair.
pub fn parse_rational(s: &str) -> Result<(BigInt, BigInt)> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = n
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not an integer: {n:?}")))?;
    let den: BigInt = d
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not an integer: {d:?}")))?;
    if den.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    if den.is_negative() {
        Ok((-num, -den))
    } else {
        Ok((num, den))
    }
}

/// Parse an integer or rational literal into `Z/p^N`.
pub fn parse_padic(ctx: &PrimeContext, s: &str) -> Result<PAdicInt> {
    let (num, den) = parse_rational(s)?;
    PAdicInt::from_ratio(ctx, &num, &den)
}
