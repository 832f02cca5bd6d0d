use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its documented invariant.
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("wave speed c = {c} is below the Chapman-Jouguet velocity {c_cj}")]
    BelowCjVelocity { c: f64, c_cj: f64 },

    #[error("out of domain: {0}")]
    Domain(String),

    #[error("kinetics violates (H-infinity): {0}")]
    KineticsHypothesis(String),

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudgetExhausted { max_steps: usize, t: f64 },

    #[error("step size underflow (h = {h:e}) at t = {t}")]
    StepUnderflow { h: f64, t: f64 },

    #[error("non-finite state encountered at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("orbit never reached the ignition line T = {ti} (start T = {t_start})")]
    NoCrossing { t_start: f64, ti: f64 },

    #[error("no traveling wave exists at beta = {beta}, c = {c}")]
    ProfileUndefined { beta: f64, c: f64 },

    #[error("orbit left the asymptotic window before one decade of U was collected")]
    InsufficientRange,

    #[error("could not bracket the root at c = {c} after {expansions} expansions")]
    BracketFailure { c: f64, expansions: usize },

    #[error("root exceeds beta cap {cap} at c = {c}")]
    Diverged { c: f64, cap: f64 },

    #[error("curve minimum is not interior (grid too short)")]
    NoInteriorMinimum,

    #[error("Kummer parameter b = {0} is a non-positive integer")]
    Pole(f64),

    #[error("series did not converge within {0} terms")]
    NoConvergence(usize),

    #[error("beta = {beta} outside the validated envelope [{lo}, {hi}]")]
    Envelope { beta: f64, lo: f64, hi: f64 },

    #[error("no root of the implicit equation in the validated envelope at c = {c}")]
    NoRootInEnvelope { c: f64 },

    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}
