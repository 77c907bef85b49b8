//! Crate-wide error type.

use std::fmt;

/// Errors surfaced by the equilibrium and epidemic computations.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Recovery outpaces transmission; the epidemic has no endemic equilibrium.
    NonEndemic { gamma: f64, beta_eff: f64 },
    /// A bisection bracket did not straddle a sign change.
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    /// The infected-signal margin has no interior root: `g` does not change
    /// sign on [0, 1].
    NoInteriorRoot { g_at_zero: f64, g_at_one: f64 },
    /// The interior unprotected fraction among susceptible-signal recipients
    /// is undefined when the susceptible signal is never sent.
    MuSZero,
    /// The analytic classifier requires the truthful-infected-signal regime
    /// (`mu_i = 1`, `c_p < c_u`, `gamma < alpha * beta_p`) and valid ranges.
    AssumptionViolated { violations: Vec<String> },
    /// None of the five equilibrium characterizations matched; kept as an
    /// audit surface, unreachable for valid inputs.
    NoCaseMatched { g_at_zero: f64, g_at_one: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonEndemic { gamma, beta_eff } => write!(
                f,
                "no endemic equilibrium: gamma = {gamma} >= effective infection rate = {beta_eff}"
            ),
            Error::Bracket { lo, hi, f_lo, f_hi } => write!(
                f,
                "root not bracketed on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
            ),
            Error::NoInteriorRoot { g_at_zero, g_at_one } => write!(
                f,
                "no interior root: g(0) = {g_at_zero}, g(1) = {g_at_one} do not bracket zero"
            ),
            Error::MuSZero => {
                write!(f, "interior susceptible-signal fraction undefined at mu_s = 0")
            }
            Error::AssumptionViolated { violations } => {
                write!(f, "assumption violated: {}", violations.join("; "))
            }
            Error::NoCaseMatched { g_at_zero, g_at_one } => write!(
                f,
                "no equilibrium case matched (g(0) = {g_at_zero}, g(1) = {g_at_one})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
