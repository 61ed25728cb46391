//! Cooperative-competitive decomposition and value for two-player games.
//!
//! Any two-player payoff pair splits into a common-interest part and a pure
//! conflict part: `team = (u_A + u_B) / 2` played by both, and
//! `zero_sum = (u_A - u_B) / 2` against its negation. The value pair is
//! `(V#/2 + V_S, V#/2 - V_S)` where `V#` is the best total payoff and `V_S`
//! the zero-sum value of the conflict part; the side payment reconciles the
//! value with what the maximizing profile actually pays out.

use crate::error::Error;
use crate::game::{validate_nondegenerate, Game};
use crate::rational::{int, rat, Rational};
use num_traits::Zero;

/// The two halves of the decomposition. `team` pays both players the
/// average; `zero_sum` pays the difference to A and its negation to B.
/// Cellwise, `team + zero_sum` recomposes the original game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocoDecomposition {
    pub team: Game,
    pub zero_sum: Game,
}

/// Splits a two-player game into team and zero-sum parts.
pub fn coco_decompose(game: &Game) -> Result<CocoDecomposition, Error> {
    if game.num_players() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "decomposition needs exactly 2 players, got {}",
            game.num_players()
        )));
    }
    let half = rat(1, 2);
    let mut team_rows = Vec::new();
    let mut zs_rows = Vec::new();
    for i in 0..game.num_actions(0) {
        let mut trow = Vec::new();
        let mut zrow = Vec::new();
        for j in 0..game.num_actions(1) {
            let avg = (game.u(0, i, j) + game.u(1, i, j)) * &half;
            let diff = (game.u(0, i, j) - game.u(1, i, j)) * &half;
            trow.push((avg.clone(), avg));
            zrow.push((diff.clone(), -diff));
        }
        team_rows.push(trow);
        zs_rows.push(zrow);
    }
    let labels = |p: usize| game.action_labels(p).to_vec();
    Ok(CocoDecomposition {
        team: Game::two_player(labels(0), labels(1), team_rows)?,
        zero_sum: Game::two_player(labels(0), labels(1), zs_rows)?,
    })
}

/// How the zero-sum value is attained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZeroSumAttainment {
    /// Pure saddle point: maximin equals minimax at this cell.
    PureSaddle { row: usize, col: usize },
    /// Fully mixed optimal strategies; `p` and `q` weight the first
    /// actions.
    Mixed { p: Rational, q: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroSumValue2x2 {
    pub value: Rational,
    pub attainment: ZeroSumAttainment,
}

/// Value of a 2x2 zero-sum game from player A's side. The input must
/// satisfy `u_B = -u_A` cellwise. A pure saddle (maximin = minimax, lowest
/// indices on ties) wins; otherwise the game is solved by the standard
/// mixed closed form `v = (ad - bc) / (a + d - b - c)`.
pub fn zero_sum_value_2x2(game: &Game) -> Result<ZeroSumValue2x2, Error> {
    game.require_2x2()?;
    for profile in game.profiles() {
        if &(-game.payoff(&profile, 0)) != game.payoff(&profile, 1) {
            return Err(Error::NotZeroSum { profile });
        }
    }
    let a = |i: usize, j: usize| game.u(0, i, j).clone();

    let mut maximin: Option<(Rational, usize)> = None;
    for i in 0..2 {
        let row_min = if a(i, 0) <= a(i, 1) { a(i, 0) } else { a(i, 1) };
        if maximin.as_ref().is_none_or(|(v, _)| row_min > *v) {
            maximin = Some((row_min, i));
        }
    }
    let mut minimax: Option<(Rational, usize)> = None;
    for j in 0..2 {
        let col_max = if a(0, j) >= a(1, j) { a(0, j) } else { a(1, j) };
        if minimax.as_ref().is_none_or(|(v, _)| col_max < *v) {
            minimax = Some((col_max, j));
        }
    }
    let (lower, row) = maximin.expect("two rows scanned");
    let (upper, col) = minimax.expect("two columns scanned");
    if lower == upper {
        return Ok(ZeroSumValue2x2 {
            value: lower,
            attainment: ZeroSumAttainment::PureSaddle { row, col },
        });
    }

    let denom = a(0, 0) + a(1, 1) - a(0, 1) - a(1, 0);
    if denom.is_zero() {
        return Err(Error::DegenerateGame(validate_nondegenerate(game)));
    }
    let value = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / &denom;
    let p = (a(1, 1) - a(1, 0)) / &denom;
    let q = (a(1, 1) - a(0, 1)) / &denom;
    debug_assert!(p >= int(0) && p <= int(1) && q >= int(0) && q <= int(1));
    Ok(ZeroSumValue2x2 {
        value,
        attainment: ZeroSumAttainment::Mixed { p, q },
    })
}

/// Cooperative-competitive value of a 2x2 game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocoSolution {
    /// Best achievable payoff total `V#`.
    pub team_value: Rational,
    /// Profile attaining `V#`; lowest rank wins ties.
    pub team_profile: (usize, usize),
    pub team_tie_broken: bool,
    /// Zero-sum value `V_S` of the conflict part.
    pub zero_sum_value: Rational,
    pub attainment: ZeroSumAttainment,
    /// `V#/2 + V_S`.
    pub value_a: Rational,
    /// `V#/2 - V_S`.
    pub value_b: Rational,
    /// Transfer from A to B reconciling the played profile with the value:
    /// `u_A(team profile) + side_payment = value_a`.
    pub side_payment: Rational,
}

/// Computes the full cooperative-competitive solution of a 2x2 game.
pub fn coco_solution(game: &Game) -> Result<CocoSolution, Error> {
    game.require_2x2()?;
    let decomp = coco_decompose(game)?;

    let mut best: Option<(Rational, (usize, usize))> = None;
    let mut tie = false;
    for profile in game.profiles() {
        let total = game.payoff(&profile, 0) + game.payoff(&profile, 1);
        match &best {
            Some((v, _)) if total == *v => tie = true,
            Some((v, _)) if total > *v => {
                best = Some((total, (profile[0], profile[1])));
                tie = false;
            }
            None => best = Some((total, (profile[0], profile[1]))),
            _ => {}
        }
    }
    let (team_value, team_profile) = best.expect("2x2 game has profiles");

    let zs = zero_sum_value_2x2(&decomp.zero_sum)?;
    let half_pot = &team_value * rat(1, 2);
    let value_a = &half_pot + &zs.value;
    let value_b = &half_pot - &zs.value;
    let played_a = game.u(0, team_profile.0, team_profile.1);
    let side_payment = &value_a - played_a;

    Ok(CocoSolution {
        team_value,
        team_profile,
        team_tie_broken: tie,
        zero_sum_value: zs.value,
        attainment: zs.attainment,
        value_a,
        value_b,
        side_payment,
    })
}
