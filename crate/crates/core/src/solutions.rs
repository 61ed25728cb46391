//! Classical solution concepts used as companions to the periodicity scan:
//! pure Nash profiles, point rationalizability, iterated strict dominance,
//! and the closed-form mixed equilibrium of 2x2 games.

use crate::error::Error;
use crate::game::{validate_nondegenerate, Game, MixedProfile2x2};
use crate::game::expected_utility_2x2;
use crate::rational::Rational;
use num_traits::{One, Zero};

/// All pure Nash equilibria (weak inequality: no strictly improving
/// unilateral deviation), in profile rank order.
pub fn pure_nash(game: &Game) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    'profiles: for profile in game.profiles() {
        for player in 0..game.num_players() {
            let current = game.payoff(&profile, player);
            for alt in 0..game.num_actions(player) {
                if alt == profile[player] {
                    continue;
                }
                let mut dev = profile.clone();
                dev[player] = alt;
                if game.payoff(&dev, player) > current {
                    continue 'profiles;
                }
            }
        }
        out.push(profile);
    }
    out
}

/// Surviving action indices per player after an iterated elimination,
/// sorted ascending. At least one action per player always survives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorSets {
    pub actions: Vec<Vec<usize>>,
}

impl SurvivorSets {
    pub fn contains(&self, player: usize, action: usize) -> bool {
        self.actions[player].binary_search(&action).is_ok()
    }
}

/// Joint assignments over the given per-player index lists, for the
/// opponents of `player`, in lexicographic order.
fn restricted_opponent_profiles(survivors: &[Vec<usize>], player: usize) -> Vec<Vec<usize>> {
    let opp_sets: Vec<&Vec<usize>> = survivors
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != player)
        .map(|(_, s)| s)
        .collect();
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for set in opp_sets {
        let mut next = Vec::with_capacity(out.len() * set.len());
        for partial in &out {
            for &a in set {
                let mut ext = partial.clone();
                ext.push(a);
                next.push(ext);
            }
        }
        out = next;
    }
    out
}

/// Iterated elimination of actions that are never a pure best response to
/// any surviving joint opponent profile. Best responses are taken within
/// the player's own surviving actions; the weak argmax set counts, so ties
/// need no policy. The fixpoint does not depend on the player scan order,
/// which is asserted by recomputing with the order reversed.
pub fn point_rationalizable(game: &Game) -> SurvivorSets {
    let forward: Vec<usize> = (0..game.num_players()).collect();
    let reversed: Vec<usize> = forward.iter().rev().copied().collect();
    let result = eliminate_never_best_responses(game, &forward);
    debug_assert_eq!(
        result,
        eliminate_never_best_responses(game, &reversed),
        "elimination fixpoint must not depend on scan order"
    );
    result
}

fn eliminate_never_best_responses(game: &Game, order: &[usize]) -> SurvivorSets {
    let mut survivors: Vec<Vec<usize>> = (0..game.num_players())
        .map(|p| (0..game.num_actions(p)).collect())
        .collect();
    loop {
        let mut changed = false;
        for &player in order {
            let opp_profiles = restricted_opponent_profiles(&survivors, player);
            let mut keep: Vec<usize> = Vec::new();
            for &own in &survivors[player] {
                let mut justified = false;
                'search: for opp in &opp_profiles {
                    let u_own = game.payoff(&game.splice(player, own, opp), player);
                    let mut is_best = true;
                    for &alt in &survivors[player] {
                        let u_alt = game.payoff(&game.splice(player, alt, opp), player);
                        if u_alt > u_own {
                            is_best = false;
                            break;
                        }
                    }
                    if is_best {
                        justified = true;
                        break 'search;
                    }
                }
                if justified {
                    keep.push(own);
                }
            }
            if keep.len() != survivors[player].len() {
                survivors[player] = keep;
                changed = true;
            }
        }
        if !changed {
            return SurvivorSets { actions: survivors };
        }
    }
}

/// Iterated elimination of actions strictly dominated by another surviving
/// pure action against every surviving joint opponent profile.
pub fn iterated_strict_dominance(game: &Game) -> SurvivorSets {
    let mut survivors: Vec<Vec<usize>> = (0..game.num_players())
        .map(|p| (0..game.num_actions(p)).collect())
        .collect();
    loop {
        let mut changed = false;
        for player in 0..game.num_players() {
            let opp_profiles = restricted_opponent_profiles(&survivors, player);
            let dominated: Vec<usize> = survivors[player]
                .iter()
                .copied()
                .filter(|&own| {
                    survivors[player].iter().any(|&by| {
                        by != own
                            && opp_profiles.iter().all(|opp| {
                                game.payoff(&game.splice(player, by, opp), player)
                                    > game.payoff(&game.splice(player, own, opp), player)
                            })
                    })
                })
                .collect();
            if !dominated.is_empty() {
                survivors[player].retain(|a| !dominated.contains(a));
                changed = true;
            }
        }
        if !changed {
            return SurvivorSets { actions: survivors };
        }
    }
}

/// Mixed equilibrium of a 2x2 game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedNash2x2 {
    pub profile: MixedProfile2x2,
    /// True when both indifference fractions were well defined and landed
    /// in [0,1]; false when the result is a pure corner fallback.
    pub interior: bool,
    pub payoff_a: Rational,
    pub payoff_b: Rational,
    /// Set on the fallback path: the pure profile used, plus any further
    /// pure equilibria that were passed over (lowest rank wins).
    pub corner_from: Option<(usize, usize)>,
    pub corner_alternatives: Vec<(usize, usize)>,
}

/// Solves a 2x2 game by opponent-indifference closed forms. Writing the
/// row player's payoffs `u_ij` and the column player's `v_ij` (1-based),
/// the interior equilibrium is
/// `q* = (u22 - u12) / (u11 - u12 - u21 + u22)` and
/// `p* = (v22 - v21) / (v11 - v12 - v21 + v22)`.
/// When either fraction is undefined or falls outside [0,1] the result is
/// the lowest-ranked pure equilibrium instead.
pub fn mixed_nash_2x2(game: &Game) -> Result<MixedNash2x2, Error> {
    game.require_2x2()?;
    let u = |i: usize, j: usize| game.u(0, i, j);
    let v = |i: usize, j: usize| game.u(1, i, j);
    let alpha_a = u(0, 0) - u(0, 1) - u(1, 0) + u(1, 1);
    let alpha_b = v(0, 0) - v(0, 1) - v(1, 0) + v(1, 1);

    let q_star = if alpha_a.is_zero() {
        None
    } else {
        Some((u(1, 1) - u(0, 1)) / &alpha_a)
    };
    let p_star = if alpha_b.is_zero() {
        None
    } else {
        Some((v(1, 1) - v(1, 0)) / &alpha_b)
    };

    let in_unit = |r: &Rational| r >= &Rational::zero() && r <= &Rational::one();
    if let (Some(p), Some(q)) = (&p_star, &q_star) {
        if in_unit(p) && in_unit(q) {
            let profile = MixedProfile2x2::new(p.clone(), q.clone())?;
            let payoff_a = expected_utility_2x2(game, &profile, 0)?;
            let payoff_b = expected_utility_2x2(game, &profile, 1)?;
            return Ok(MixedNash2x2 {
                profile,
                interior: true,
                payoff_a,
                payoff_b,
                corner_from: None,
                corner_alternatives: Vec::new(),
            });
        }
    }

    let mut pure = pure_nash(game).into_iter().map(|p| (p[0], p[1]));
    match pure.next() {
        Some((x, y)) => {
            let to_prob = |idx: usize| {
                if idx == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            };
            let profile = MixedProfile2x2::new(to_prob(x), to_prob(y))?;
            let payoff_a = expected_utility_2x2(game, &profile, 0)?;
            let payoff_b = expected_utility_2x2(game, &profile, 1)?;
            Ok(MixedNash2x2 {
                profile,
                interior: false,
                payoff_a,
                payoff_b,
                corner_from: Some((x, y)),
                corner_alternatives: pure.collect(),
            })
        }
        // Every 2x2 game has an equilibrium, so reaching this arm requires
        // a vanished denominator; report the game's ties as evidence.
        None => Err(Error::DegenerateGame(validate_nondegenerate(game))),
    }
}
