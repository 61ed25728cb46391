//! Shared error taxonomy for game construction and analysis.

use crate::game::DegeneracyWitness;
use thiserror::Error;

/// Everything that can go wrong while building or analyzing a game.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Tensor shape disagrees with the declared players/actions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Profile space exceeds the supported size cap.
    #[error("game too large: {profiles} profiles exceeds cap {cap}")]
    SizeLimit { profiles: u128, cap: u128 },

    /// An argmax scan tied under the strict tie policy.
    /// Witnesses list every tie found, not just the first.
    #[error("degenerate game: {} tied argmax scan(s)", .0.len())]
    DegenerateGame(Vec<DegeneracyWitness>),

    /// A claimed zero-sum matrix fails `u_B = -u_A` cellwise.
    #[error("not zero-sum at profile {profile:?}")]
    NotZeroSum { profile: Vec<usize> },

    /// Prior fails validation: wrong support, negative mass, does not sum
    /// to one, or a type with zero marginal probability.
    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    /// Operation requires a common prior but the game carries only interim
    /// conditional beliefs.
    #[error("operation requires a common prior")]
    NoCommonPrior,

    /// Two independent analyses assign the same variable incompatible values.
    #[error("conflicting assignment for {variable}: {first} vs {second}")]
    ConflictError {
        variable: String,
        first: String,
        second: String,
    },

    /// Cycle input is not a closed alternating sequence of the expected shape.
    #[error("malformed cycle: {0}")]
    MalformedCycle(String),

    /// Cycle fails the mutual best-response check, so no epistemic model
    /// supports it.
    #[error("cycle is not a best-response cycle: {0}")]
    NotRationalizableCycle(String),

    /// A closed-form denominator vanished where a point solution was required.
    #[error("degenerate denominator in {context}")]
    DegenerateDenominator { context: String },

    /// Quadratic payoff has zero curvature where a maximizer is needed.
    #[error("zero curvature: {0}")]
    ZeroCurvature(String),
}
