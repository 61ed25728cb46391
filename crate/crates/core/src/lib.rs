//! Exact analysis of periodic strategies in finite games.
//!
//! A periodic strategy is a fixed point of composed "converse best response"
//! maps: `phi_1(x)` is the opponent action maximizing player 1's own payoff at
//! `x`, and an action is periodic when iterating the maps returns to it. This
//! crate computes those maps and cycles exactly (arbitrary precision
//! rationals), together with the classical companions needed to compare them:
//! pure and 2x2 mixed Nash equilibria, point rationalizability, iterated
//! strict dominance, cooperative-competitive (CoCo) values, Bayesian game
//! transforms, quadratic-payoff closed forms, and epistemic models supporting
//! periodic cycles.
//!
//! All game values are immutable after construction and every operation is a
//! pure function of its inputs.

pub mod bayes;
pub mod coco;
pub mod epistemic;
pub mod error;
pub mod game;
pub mod mixedper;
pub mod periodicity;
pub mod quadratic;
pub mod rational;
pub mod solutions;

pub use error::Error;
pub use game::{DegeneracyWitness, Game, MixedProfile2x2};
pub use rational::Rational;
