//! Interpolation of iterates by the Mahler series
//! `g(x, n) = Σ_m binom(n, m) Δ^m x`, where `(Δh)(x) = h(f(x)) - h(x)`.
//!
//! When `f(x) ≡ x (mod p^c)` with `c > 1/(p-1)`, `Δ^m x` is divisible by
//! `p^(mc)` while `m!` only removes `v_p(m!) <= m/(p-1)` digits, so the series
//! converges and only finitely many terms matter modulo `p^M`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{
    binom_padic, factorial, factorial_valuation, falling_factorial_poly, PAdicInt, PrimeContext,
    Valuation,
};
use crate::series::{effective_degree_bound, pipeline_degree_cap, AnalyticMap, Monomial, MultiSeries};

/// Outcome of the contraction test `c > 1/(p-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hypothesis {
    pub c: Valuation,
    pub satisfied: bool,
}

/// Integer `c` passes iff `c (p-1) > 1`: `c >= 1` for odd `p`, `c >= 2` for `p = 2`.
pub fn contraction_passes(c: Valuation, p: u64) -> bool {
    match c {
        Valuation::Infinite => true,
        Valuation::Finite(c) | Valuation::AtLeast(c) => (c as u64) * (p - 1) > 1,
    }
}

pub fn check_hypothesis(f: &AnalyticMap) -> Hypothesis {
    let c = f.contraction();
    Hypothesis {
        c,
        satisfied: contraction_passes(c, f.ctx().p()),
    }
}

fn require_hypothesis(f: &AnalyticMap) -> Result<u32> {
    let h = check_hypothesis(f);
    if !h.satisfied {
        return Err(Error::HypothesisFailed {
            p: f.ctx().p(),
            c: h.c.to_string(),
        });
    }
    Ok(h.c.lower_bound().unwrap_or(u32::MAX))
}

/// Whether [`delta`] insists on the contraction hypothesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DeltaMode {
    #[default]
    Certified,
    /// Allow maps failing the hypothesis (sharpness demonstrations).
    Uncertified,
}

/// `Δh = h∘f - h`, componentwise.
///
/// In certified mode the contraction bound `v(Δh_i) >= v(h_i) + c` is checked
/// on every component.
pub fn delta(h: &[MultiSeries], f: &AnalyticMap, mode: DeltaMode) -> Result<Vec<MultiSeries>> {
    let c = match mode {
        DeltaMode::Certified => Some(require_hypothesis(f)?),
        DeltaMode::Uncertified => None,
    };
    let n = f.ctx().precision();
    h.iter()
        .map(|hi| {
            let out = hi.compose(f)?.sub(hi)?;
            if let (Some(c), Some(vh)) = (c, hi.gauss_norm_valuation().lower_bound()) {
                let need = vh.saturating_add(c).min(n);
                if !out.gauss_norm_valuation().is_at_least(need) {
                    return Err(Error::CertificateViolation {
                        m: 0,
                        detail: format!(
                            "Δh has valuation {} below {need}",
                            out.gauss_norm_valuation()
                        ),
                    });
                }
            }
            Ok(out)
        })
        .collect()
}

/// Exact term valuation `m c - v_p(m!)` of the m-th Mahler coefficient bound.
fn term_floor(m: u64, c: u64, p: u64) -> u64 {
    m * c - factorial_valuation(m, p)
}

/// Largest `m` whose Mahler term can still be nonzero modulo `p^M`, i.e.
/// the largest `m` with `m c - v_p(m!) < M`; every larger `m` is omitted.
pub fn truncation_order(p: u64, c: u32, target: u32) -> usize {
    let c = c as u64;
    let target = target as u64;
    // m c - v_p(m!) >= m (c - 1/(p-1)), so beyond this every term is small
    let slope_num = c * (p - 1) - 1;
    let bound = (target * (p - 1)).div_ceil(slope_num) + p;
    (0..=bound)
        .filter(|&m| term_floor(m, c, p) < target)
        .max()
        .unwrap_or(0) as usize
}

/// Truncation order, working precision and degree cap for one pipeline run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schedule {
    /// `None` for the identity map.
    pub c: Option<u32>,
    pub m_max: usize,
    pub target_precision: u32,
    /// `M + max_{m <= M_max} v_p(m!)`.
    pub working_precision: u32,
    pub degree_cap: u32,
}

impl Schedule {
    pub fn new(f: &AnalyticMap, target: u32, degree_cap: Option<u32>) -> Result<Self> {
        if target == 0 {
            return Err(Error::InvalidPrecision(0));
        }
        let c = require_hypothesis(f)?;
        let p = f.ctx().p();
        if f.is_identity() {
            return Ok(Self {
                c: None,
                m_max: 1,
                target_precision: target,
                working_precision: target,
                degree_cap: degree_cap.unwrap_or(1),
            });
        }
        let m_max = truncation_order(p, c, target);
        let working = target + factorial_valuation(m_max as u64, p) as u32;
        let cap = degree_cap
            .unwrap_or_else(|| pipeline_degree_cap(f.max_degree(), working, c))
            .max(f.max_degree());
        Ok(Self {
            c: Some(c),
            m_max,
            target_precision: target,
            working_precision: working,
            degree_cap: cap,
        })
    }
}

/// Options shared by the interpolation entry points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InterpolationOptions {
    /// Override the degree cap of the `Δ` iteration.
    pub degree_cap: Option<u32>,
}

/// The list `Δ^0 x, .., Δ^{M_max} x` with per-term valuation certificates.
#[derive(Clone, Debug)]
pub struct MahlerExpansion {
    /// `f` at the working precision.
    pub f: AnalyticMap,
    pub terms: Vec<Vec<MultiSeries>>,
    /// Observed Gauss-norm valuation of each `Δ^m x`, certified `>= m c`.
    pub certificates: Vec<Valuation>,
    pub schedule: Schedule,
}

impl MahlerExpansion {
    pub fn m_max(&self) -> usize {
        self.schedule.m_max
    }

    pub fn target_precision(&self) -> u32 {
        self.schedule.target_precision
    }

    pub fn working_precision(&self) -> u32 {
        self.schedule.working_precision
    }
}

pub fn mahler_terms(f: &AnalyticMap, target: u32) -> Result<MahlerExpansion> {
    mahler_terms_with(f, target, InterpolationOptions::default())
}

pub fn mahler_terms_with(
    f: &AnalyticMap,
    target: u32,
    opts: InterpolationOptions,
) -> Result<MahlerExpansion> {
    let schedule = Schedule::new(f, target, opts.degree_cap)?;
    let d = f.dim();
    let ctx = f.ctx().with_precision(schedule.working_precision)?;
    let cap = schedule.degree_cap;
    let f_n = f.rebase(&ctx)?.with_degree_cap(cap)?;
    let identity: Vec<MultiSeries> = (0..d).map(|i| MultiSeries::var(&ctx, d, cap, i)).collect();

    let Some(c) = schedule.c else {
        let zero = vec![MultiSeries::zero(&ctx, d, cap); d];
        return Ok(MahlerExpansion {
            f: f_n,
            terms: vec![identity, zero],
            certificates: vec![Valuation::Finite(0), Valuation::Infinite],
            schedule,
        });
    };

    let n = ctx.precision();
    let degree_bound = effective_degree_bound(f.max_degree(), n, c);
    let mut terms = vec![identity];
    let mut certificates = vec![Valuation::Finite(0)];
    for m in 1..=schedule.m_max {
        let next = delta(&terms[m - 1], &f_n, DeltaMode::Uncertified)?;
        let norm = next
            .iter()
            .map(MultiSeries::gauss_norm_valuation)
            .fold(Valuation::Infinite, Valuation::min);
        let need = (m as u64 * c as u64).min(n as u64) as u32;
        if !norm.is_at_least(need) {
            return Err(Error::CertificateViolation {
                m,
                detail: format!("Gauss norm valuation {norm} < m c = {need}"),
            });
        }
        if let Some(t) = next.iter().map(MultiSeries::total_degree).max() {
            if t > degree_bound {
                return Err(Error::CertificateViolation {
                    m,
                    detail: format!("nonzero monomial of degree {t} beyond effective bound {degree_bound}"),
                });
            }
        }
        terms.push(next);
        certificates.push(norm);
    }
    Ok(MahlerExpansion {
        f: f_n,
        terms,
        certificates,
        schedule,
    })
}

/// `g(x, n)` as a polynomial in `n` with series coefficients in `x`,
/// certified modulo `p^M`. Each component is stored as a series in
/// `d + 1` variables, the last one being `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolatedFlow {
    g: Vec<MultiSeries>,
    guaranteed_precision: u32,
    working_precision: u32,
    n_degree: usize,
}

impl InterpolatedFlow {
    /// Assemble a flow from its components (used by deserialization).
    pub fn from_parts(
        g: Vec<MultiSeries>,
        working_precision: u32,
        n_degree: usize,
    ) -> Result<Self> {
        let Some(first) = g.first() else {
            return Err(Error::InvalidInput("flow needs at least one component".into()));
        };
        let d = g.len();
        for gi in &g {
            if gi.nvars() != d + 1 || gi.ctx() != first.ctx() {
                return Err(Error::InvalidInput(
                    "flow components must share a context and have d + 1 variables".into(),
                ));
            }
            if gi.degree_in(d) as usize > n_degree {
                return Err(Error::InvalidInput("n-degree exceeds declared bound".into()));
            }
        }
        let m = first.ctx().precision();
        Ok(Self {
            guaranteed_precision: m,
            g,
            working_precision: working_precision.max(m),
            n_degree,
        })
    }

    pub fn dim(&self) -> usize {
        self.g.len()
    }

    pub fn ctx(&self) -> &PrimeContext {
        self.g[0].ctx()
    }

    pub fn components(&self) -> &[MultiSeries] {
        &self.g
    }

    pub fn guaranteed_precision(&self) -> u32 {
        self.guaranteed_precision
    }

    pub fn working_precision(&self) -> u32 {
        self.working_precision
    }

    /// Declared degree bound in `n` (the truncation order `M_max`).
    pub fn n_degree(&self) -> usize {
        self.n_degree
    }

    /// Coefficient of `n^k` in component `i`, as a series in `x`.
    pub fn n_coefficient(&self, i: usize, k: u32) -> MultiSeries {
        let d = self.dim();
        let gi = &self.g[i];
        let terms = gi
            .terms()
            .filter(|(m, _)| m.exps()[d] == k)
            .map(|(m, c)| (m.exps()[..d].to_vec(), BigInt::from(c.clone())));
        MultiSeries::from_terms(gi.ctx(), d, gi.degree_cap(), terms)
            .expect("restriction keeps degrees")
    }

    /// `g(x, n + 1)`.
    pub fn shift_n(&self) -> Result<Vec<MultiSeries>> {
        let d = self.dim();
        self.g
            .iter()
            .map(|gi| gi.shift_var(d, &BigInt::one()))
            .collect()
    }

    /// `f(g(x, n))` modulo `p^M`.
    pub fn compose_after(&self, f: &AnalyticMap) -> Result<Vec<MultiSeries>> {
        let ctx = self.ctx();
        let f_m = f.rebase(ctx)?;
        let g_deg = self.g.iter().map(MultiSeries::total_degree).max().unwrap_or(0);
        let cap = f_m.max_degree().max(1) * g_deg.max(1);
        let subs = self
            .g
            .iter()
            .map(|gi| gi.with_degree_cap(cap))
            .collect::<Result<Vec<_>>>()?;
        f_m.components()
            .iter()
            .map(|fi| fi.compose_with(&subs))
            .collect()
    }

    /// Substitute a polynomial in `n` for the time variable at a fixed point
    /// `x0`: returns, per component, the coefficients of `g_i(x0, n)`
    /// (ascending powers of `n`) in `Z/p^M`.
    pub fn specialize(&self, x0: &[PAdicInt]) -> Result<Vec<Vec<PAdicInt>>> {
        let d = self.dim();
        if x0.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x0.len(),
            });
        }
        let ctx = self.ctx();
        let point = x0
            .iter()
            .map(|x| x.rebase(ctx))
            .collect::<Result<Vec<_>>>()?;
        (0..d)
            .map(|i| {
                (0..=self.n_degree as u32)
                    .map(|k| self.n_coefficient(i, k).eval_point(&point))
                    .collect()
            })
            .collect()
    }
}

/// `g(x, n) = Σ_{m <= M_max} Δ^m x · n(n-1)..(n-m+1) / m!`, expanded in powers of `n`.
pub fn interpolate(f: &AnalyticMap, target: u32) -> Result<InterpolatedFlow> {
    interpolate_with(f, target, InterpolationOptions::default())
}

pub fn interpolate_with(
    f: &AnalyticMap,
    target: u32,
    opts: InterpolationOptions,
) -> Result<InterpolatedFlow> {
    let expansion = mahler_terms_with(f, target, opts)?;
    flow_from_expansion(&expansion)
}

pub fn flow_from_expansion(expansion: &MahlerExpansion) -> Result<InterpolatedFlow> {
    let schedule = expansion.schedule;
    let d = expansion.f.dim();
    let ctx_n = expansion.f.ctx().clone();
    let ctx_m = ctx_n.with_precision(schedule.target_precision)?;
    let p = ctx_n.p();
    let m_max = if schedule.c.is_none() { 0 } else { schedule.m_max };
    let cap = schedule.degree_cap + m_max as u32;

    let mut collected: Vec<Vec<(Vec<u32>, BigInt)>> = vec![Vec::new(); d];
    for m in 0..=m_max {
        let fact = PAdicInt::new(&ctx_n, factorial(m as u64) % ctx_n.modulus());
        let falling = falling_factorial_poly(m);
        for (i, comp) in expansion.terms[m].iter().enumerate() {
            for (mono, coef) in comp.terms() {
                let q = PAdicInt::new(&ctx_n, coef.clone())
                    .div_tracked(&fact)
                    .map_err(|e| Error::CertificateViolation {
                        m,
                        detail: format!("division by {m}! failed: {e}"),
                    })?;
                if q.known_precision() < schedule.target_precision {
                    return Err(Error::PrecisionUnderflow(format!(
                        "term {m} keeps {} digits, {} promised",
                        q.known_precision(),
                        schedule.target_precision
                    )));
                }
                let q = BigInt::from(q.residue().clone());
                for (k, s) in falling.iter().enumerate() {
                    if s.is_zero() {
                        continue;
                    }
                    let mut exps = mono.exps().to_vec();
                    exps.push(k as u32);
                    collected[i].push((exps, &q * s));
                }
            }
        }
    }
    debug_assert!(factorial_valuation(m_max as u64, p) + schedule.target_precision as u64
        <= schedule.working_precision as u64);
    let g = collected
        .into_iter()
        .map(|terms| MultiSeries::from_terms(&ctx_m, d + 1, cap, terms))
        .collect::<Result<Vec<_>>>()?;
    Ok(InterpolatedFlow {
        g,
        guaranteed_precision: schedule.target_precision,
        working_precision: schedule.working_precision,
        n_degree: m_max,
    })
}

/// A point of `Z_p^d` with the number of digits that are certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowValue {
    pub point: Vec<PAdicInt>,
    pub guaranteed_precision: u32,
}

/// Finite differences `Δ^m(x0) = Σ_j (-1)^(m-j) C(m, j) f^j(x0)` of an
/// orbit, for `m = 0..orbit.len()`, coordinate by coordinate.
fn orbit_differences(orbit: &[Vec<PAdicInt>]) -> Result<Vec<Vec<PAdicInt>>> {
    let mut row: Vec<Vec<PAdicInt>> = orbit.to_vec();
    let mut out = Vec::with_capacity(orbit.len());
    while let Some(first) = row.first() {
        out.push(first.clone());
        row = row
            .windows(2)
            .map(|w| {
                w[1].iter()
                    .zip(&w[0])
                    .map(|(b, a)| b.sub(a))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
    }
    Ok(out)
}

/// `g(x0, a)` by the pointwise Mahler sum, using only the orbit
/// `x0, f(x0), .., f^{M_max}(x0)`.
///
/// The stored representatives of `x0` and `a` are treated as exact; since
/// `g` has integral coefficients the answer is then valid to the smallest of
/// `M` and the known precisions of the inputs.
pub fn eval_flow(
    f: &AnalyticMap,
    x0: &[PAdicInt],
    a: &PAdicInt,
    target: u32,
) -> Result<FlowValue> {
    let d = f.dim();
    if x0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x0.len(),
        });
    }
    let schedule = Schedule::new(f, target, None)?;
    let ctx_n = f.ctx().with_precision(schedule.working_precision)?;
    let ctx_m = ctx_n.with_precision(target)?;
    let mut guaranteed = target.min(a.known_precision());
    for x in x0 {
        guaranteed = guaranteed.min(x.known_precision());
    }
    if guaranteed == 0 {
        return Err(Error::PrecisionUnderflow(
            "inputs carry no known digits".into(),
        ));
    }
    let start = x0
        .iter()
        .map(|x| Ok(x.rebase(&ctx_n)?.lift_exact()))
        .collect::<Result<Vec<_>>>()?;
    let Some(c) = schedule.c else {
        return Ok(FlowValue {
            point: start
                .iter()
                .map(|x| x.rebase(&ctx_m).map(|y| y.truncate(guaranteed)))
                .collect::<Result<_>>()?,
            guaranteed_precision: guaranteed,
        });
    };
    let f_n = f.rebase(&ctx_n)?;
    let mut orbit = vec![start];
    for _ in 0..schedule.m_max {
        let next = f_n.apply(orbit.last().expect("nonempty"))?;
        orbit.push(next);
    }
    let diffs = orbit_differences(&orbit)?;
    let time = a.rebase(&ctx_n)?.lift_exact();

    let mut acc = vec![PAdicInt::zero(&ctx_n); d];
    for (m, dm) in diffs.iter().enumerate() {
        let need = (m as u64 * c as u64).min(ctx_n.precision() as u64) as u32;
        let b = binom_padic(&time, m as u64)?;
        for (i, v) in dm.iter().enumerate() {
            if !v.valuation().is_at_least(need) {
                return Err(Error::CertificateViolation {
                    m,
                    detail: format!("pointwise difference has valuation {} < {need}", v.valuation()),
                });
            }
            acc[i] = acc[i].add(&b.mul(v)?)?;
        }
    }
    for v in &acc {
        guaranteed = guaranteed.min(v.known_precision());
    }
    let point = acc
        .iter()
        .map(|v| v.rebase(&ctx_m).map(|y| y.truncate(guaranteed)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowValue {
        point,
        guaranteed_precision: guaranteed,
    })
}

/// `g(x0, a)` by direct substitution into the symbolic flow.
pub fn eval_flow_symbolic(
    flow: &InterpolatedFlow,
    x0: &[PAdicInt],
    a: &PAdicInt,
) -> Result<FlowValue> {
    let d = flow.dim();
    if x0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x0.len(),
        });
    }
    let ctx = flow.ctx();
    let mut point = x0
        .iter()
        .map(|x| x.rebase(ctx))
        .collect::<Result<Vec<_>>>()?;
    point.push(a.rebase(ctx)?);
    let values = flow
        .g
        .iter()
        .map(|gi| gi.eval_point(&point))
        .collect::<Result<Vec<_>>>()?;
    let guaranteed = values
        .iter()
        .map(PAdicInt::known_precision)
        .min()
        .unwrap_or(flow.guaranteed_precision);
    Ok(FlowValue {
        point: values,
        guaranteed_precision: guaranteed,
    })
}

/// Result of raising a map to a `p`-power iterate until the hypothesis holds.
#[derive(Clone, Debug)]
pub struct PowerUp {
    pub r: u32,
    pub map: AnalyticMap,
}

pub const DEFAULT_POWER_BUDGET: u32 = 8;

/// Smallest `r` such that `f^(p^r)` satisfies the contraction hypothesis.
/// Requires `f ≡ x (mod p)`.
pub fn power_up(f: &AnalyticMap, budget: u32) -> Result<PowerUp> {
    let c = f.contraction();
    if !c.is_at_least(1) {
        return Err(Error::InvalidInput(format!(
            "power-up needs f(x) ≡ x (mod p), contraction is {c}"
        )));
    }
    let p = f.ctx().p();
    let cap = pipeline_degree_cap(f.max_degree(), f.ctx().precision(), 1).max(f.degree_cap());
    let mut g = f.with_degree_cap(cap)?;
    let mut r = 0;
    while !check_hypothesis(&g).satisfied {
        if r >= budget {
            return Err(Error::BudgetExceeded(format!(
                "no p-power iterate up to p^{budget} satisfies the hypothesis"
            )));
        }
        g = g.iterate(p)?;
        r += 1;
    }
    Ok(PowerUp { r, map: g })
}

/// Matrix of the linear part of `f` reduced mod `p`, after checking that the
/// reduction is linear.
fn linear_part_mod_p(f: &AnalyticMap) -> Result<Vec<Vec<u64>>> {
    let d = f.dim();
    let p = f.ctx().p();
    let pb = BigUint::from(p);
    let mut a = vec![vec![0u64; d]; d];
    for (i, comp) in f.components().iter().enumerate() {
        for (mono, coef) in comp.terms() {
            let r = (coef % &pb).iter_u64_digits().next().unwrap_or(0);
            if mono.degree() == 1 {
                let j = mono.exps().iter().position(|&e| e == 1).expect("degree one");
                a[i][j] = r;
            } else if r != 0 {
                return Err(Error::NotLinearModP(format!(
                    "component {} has a unit coefficient on {:?}",
                    i + 1,
                    mono.exps()
                )));
            }
        }
    }
    Ok(a)
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut out = vec![vec![0u64; d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..d {
                out[i][j] = (out[i][j] + a[i][k] * b[k][j]) % p;
            }
        }
    }
    out
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let d = a.len();
    let mut det = 1u64;
    for col in 0..d {
        let Some(piv) = (col..d).find(|&r| !a[r][col].is_multiple_of(p)) else {
            return 0;
        };
        if piv != col {
            a.swap(piv, col);
            det = (p - det) % p;
        }
        det = det * a[col][col] % p;
        let inv = BigUint::from(a[col][col])
            .modpow(&BigUint::from(p - 2), &BigUint::from(p))
            .iter_u64_digits()
            .next()
            .unwrap_or(0);
        for r in col + 1..d {
            let factor = a[r][col] * inv % p;
            if factor == 0 {
                continue;
            }
            for j in col..d {
                a[r][j] = (a[r][j] + (p - factor) * a[col][j]) % p;
            }
        }
    }
    det
}

/// `|GL_d(F_p)|`, saturating.
fn gl_order(d: usize, p: u64) -> u64 {
    let pd = (p as u128).saturating_pow(d as u32);
    let mut n: u128 = 1;
    let mut pi: u128 = 1;
    for _ in 0..d {
        n = n.saturating_mul(pd - pi);
        pi = pi.saturating_mul(p as u128);
    }
    n.min(u64::MAX as u128) as u64
}

/// Multiplicative order of the linear part `A ∈ GL_d(F_p)` of `f mod p`.
pub fn linear_part_order(f: &AnalyticMap) -> Result<u64> {
    let p = f.ctx().p();
    let a = linear_part_mod_p(f)?;
    if det_mod(a.clone(), p) == 0 {
        return Err(Error::NotInvertible);
    }
    let d = a.len();
    let id: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    let limit = gl_order(d, p);
    let mut pow = a.clone();
    let mut s = 1u64;
    while pow != id {
        if s >= limit {
            return Err(Error::BudgetExceeded(
                "matrix order exceeds |GL_d(F_p)|".into(),
            ));
        }
        pow = mat_mul_mod(&pow, &a, p);
        s += 1;
    }
    Ok(s)
}

/// Outcome of the full reduction `f ↦ f^(s p^r)`.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub s: u64,
    pub r: u32,
    pub map: AnalyticMap,
}

/// Find `s` (order of the linear part mod `p`) and `r` such that
/// `f^(s p^r)` satisfies the contraction hypothesis.
pub fn stabilize(f: &AnalyticMap, budget: u32) -> Result<Stabilized> {
    let s = linear_part_order(f)?;
    let cap = pipeline_degree_cap(f.max_degree(), f.ctx().precision(), 1).max(f.degree_cap());
    let f_s = f.with_degree_cap(cap)?.iterate(s)?;
    let up = power_up(&f_s, budget)?;
    Ok(Stabilized {
        s,
        r: up.r,
        map: up.map,
    })
}

/// Identity-vector helper used by tests and callers building `terms[0]`.
pub fn identity_vector(ctx: &PrimeContext, d: usize, cap: u32) -> Vec<MultiSeries> {
    (0..d).map(|i| MultiSeries::var(ctx, d, cap, i)).collect()
}

/// Monomial `x_1^{e_1} .. x_d^{e_d} n^k` helper.
pub fn flow_monomial(x_exps: &[u32], k: u32) -> Monomial {
    let mut e = x_exps.to_vec();
    e.push(k);
    Monomial::new(&e)
}
