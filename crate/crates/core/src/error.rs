use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input parameters violate an operation precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The spectrum is gapless where a gapped phase was required.
    #[error("gapless input: minimum gap {min_gap:e} at k = {k0}")]
    GaplessInput { min_gap: f64, k0: f64 },

    /// The spectrum is gapped where a critical (gapless) input was required.
    #[error("gapped sub-domain: no gap-closing momenta found")]
    GappedSubdomain,

    /// Evaluation lands on (or too close to) a gap-closing momentum.
    #[error("evaluation at gap-closing momentum k = {k}")]
    GapClosingEvaluation { k: f64 },

    /// Quasi-energy bands are degenerate at this momentum.
    #[error("degenerate input: gap {gap:e} below threshold at k = {k}")]
    DegenerateInput { gap: f64, k: f64 },

    /// |d0| exceeded 1 by more than rounding allows.
    #[error("arccos argument {value} outside [-1, 1] beyond tolerance")]
    ArccosOutOfRange { value: f64 },

    /// A least-squares fit fell below the acceptance quality.
    #[error("fit rejected: {reason} (r^2 = {r_squared})")]
    FitRejected { reason: String, r_squared: f64 },

    /// The requested multicritical point hosts no gapless-gapless transition.
    #[error("multicritical point at theta1 = {theta1} hosts no transition on this line family")]
    NonTransitionPoint { theta1: f64 },

    /// Denominator of the flow equation vanished (fixed-point locus).
    #[error("vanishing flow denominator at theta1 = {theta1}")]
    VanishingDenominator { theta1: f64 },

    /// Closed-form expression evaluated exactly at one of its poles.
    #[error("singular point of closed form at theta1 = {theta1}")]
    SingularPoint { theta1: f64 },
}
