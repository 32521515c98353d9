//! p-adic interpolation of iterates.
//!
//! For a polynomial self-map `f` of the closed unit polydisk over `Z_p` with
//! `f(x) ≡ x (mod p^c)` and `c > 1/(p-1)`, this crate computes a two-variable
//! interpolant `g(x, n)` with `g(x, n) = f^n(x)` for every integer `n >= 0`,
//! certified modulo a chosen `p^M`, and evaluates it at arbitrary p-adic
//! times `n ∈ Z_p` (fractional iterates such as `n = 1/2`).
//!
//! Modules:
//! - [`padic`]: `Z/p^N` arithmetic with tracked precision and factorial valuations.
//! - [`series`]: truncated multivariate series, composition, Gauss norm.
//! - [`mahler`]: the difference operator, Mahler expansion, interpolation, evaluation.
//! - [`analysis`]: rational term-valuation profiles for linear maps.
//! - [`orbit`]: orbit enumeration and orbit-hitting queries.
//! - [`wire`]: JSON formats; [`cli`]: the command-line front end.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod mahler;
pub mod orbit;
pub mod padic;
pub mod series;
pub mod wire;

pub use error::{Error, Result};
pub use mahler::{
    check_hypothesis, delta, eval_flow, eval_flow_symbolic, interpolate, interpolate_with,
    linear_part_order, mahler_terms, mahler_terms_with, power_up, stabilize, DeltaMode, FlowValue,
    Hypothesis, InterpolatedFlow, InterpolationOptions, MahlerExpansion,
};
pub use padic::{
    binom_padic, digit_sum, factorial_valuation, falling_factorial_poly, PAdicInt, PrimeContext,
    Valuation,
};
pub use series::{certify_contraction, AnalyticMap, Monomial, MultiSeries};
