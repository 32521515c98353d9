//! Symbolic term-valuation analysis for linear maps `f(x) = λx`.
//!
//! For such maps `Δ^m x = (λ - 1)^m x`, so the m-th Mahler coefficient has
//! valuation `t_m = m v - v_p(m!)` with `v = v(λ - 1)`. Valuations here are
//! rational, which covers `λ` a primitive p-th root of unity
//! (`v = 1/(p-1)`) without doing arithmetic in a ramified extension.

use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{digit_sum, factorial_valuation, is_prime};

pub type Rational = Ratio<i64>;

/// `f(x) = λx` described by `p` and `v = v(λ - 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearMapProfile {
    p: u64,
    v: Rational,
}

impl LinearMapProfile {
    pub fn new(p: u64, v: Rational) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if v < Rational::zero() {
            return Err(Error::InvalidInput(format!("valuation {v} is negative")));
        }
        if (p as i64 - 1) % v.denom() != 0 {
            return Err(Error::InvalidInput(format!(
                "valuation {v} is not realizable in Q_p(ζ_p): denominator must divide {}",
                p - 1
            )));
        }
        Ok(Self { p, v })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn v(&self) -> Rational {
        self.v
    }
}

/// `1/(p-1)`: the contraction must strictly exceed this.
pub fn hypothesis_boundary(p: u64) -> Rational {
    Rational::new(1, p as i64 - 1)
}

/// `t_m = m v - (m - s_p(m)) / (p - 1)`.
pub fn term_valuation(profile: &LinearMapProfile, m: u64) -> Rational {
    Rational::from_integer(m as i64) * profile.v
        - Rational::from_integer(factorial_valuation(m, profile.p) as i64)
}

/// One row of the term-valuation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TermRow {
    pub m: u64,
    pub digit_sum: u64,
    pub factorial_valuation: u64,
    pub t: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermValuationSeries {
    pub profile: LinearMapProfile,
    pub entries: Vec<TermRow>,
}

pub fn term_valuation_profile(profile: &LinearMapProfile, m_max: u64) -> Result<TermValuationSeries> {
    if m_max < 1 {
        return Err(Error::InvalidInput("m_max must be at least 1".into()));
    }
    let entries = (0..=m_max)
        .map(|m| TermRow {
            m,
            digit_sum: digit_sum(m, profile.p),
            factorial_valuation: factorial_valuation(m, profile.p),
            t: term_valuation(profile, m),
        })
        .collect();
    Ok(TermValuationSeries {
        profile: *profile,
        entries,
    })
}

/// Why the Mahler series of `λx` does or does not converge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `t_m >= m (v - 1/(p-1))`, a linear lower bound with positive slope.
    LinearLowerBound { slope: Rational },
    /// Along `m = p^k` the term valuations equal `p^k (v - 1/(p-1)) + 1/(p-1)`,
    /// which does not tend to infinity (constant at the boundary).
    BoundedSubsequence { value_at_boundary: Rational, gap: Rational },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::LinearLowerBound { slope } => {
                write!(f, "t_m >= m * {slope} for all m")
            }
            Witness::BoundedSubsequence { value_at_boundary, gap } => {
                if gap.is_zero() {
                    write!(f, "t_(p^k) = {value_at_boundary} for all k")
                } else {
                    write!(
                        f,
                        "t_(p^k) = p^k * ({gap}) + {value_at_boundary} does not tend to infinity"
                    )
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub converges: bool,
    pub witness: Witness,
}

/// Converges iff `v > 1/(p-1)`.
pub fn divergence_check(profile: &LinearMapProfile) -> Verdict {
    let boundary = hypothesis_boundary(profile.p);
    let gap = profile.v - boundary;
    if gap > Rational::zero() {
        Verdict {
            converges: true,
            witness: Witness::LinearLowerBound { slope: gap },
        }
    } else {
        Verdict {
            converges: false,
            witness: Witness::BoundedSubsequence {
                value_at_boundary: boundary,
                gap,
            },
        }
    }
}

/// Render the table as CSV (`m,s_p(m),v_p(m!),t_m`) or aligned text, followed
/// by the verdict line.
pub fn render_table(series: &TermValuationSeries, verdict: &Verdict, csv: bool) -> String {
    let mut out = String::new();
    if csv {
        out.push_str("m,s_p(m),v_p(m!),t_m\n");
        for r in &series.entries {
            out.push_str(&format!("{},{},{},{}\n", r.m, r.digit_sum, r.factorial_valuation, r.t));
        }
    } else {
        out.push_str(&format!("{:>8} {:>8} {:>8} {:>12}\n", "m", "s_p(m)", "v_p(m!)", "t_m"));
        for r in &series.entries {
            out.push_str(&format!(
                "{:>8} {:>8} {:>8} {:>12}\n",
                r.m,
                r.digit_sum,
                r.factorial_valuation,
                r.t.to_string()
            ));
        }
    }
    let p = series.profile.p;
    let v = series.profile.v;
    let boundary = hypothesis_boundary(p);
    if verdict.converges {
        out.push_str(&format!(
            "p={p} v={v} > 1/(p-1)={boundary}: CONVERGES ({})\n",
            verdict.witness
        ));
    } else {
        out.push_str(&format!(
            "p={p} v={v} <= 1/(p-1)={boundary}: DIVERGES ({})\n",
            verdict.witness
        ));
    }
    out
}
