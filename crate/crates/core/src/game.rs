//! Finite games in normal form with exact rational payoffs.
//!
//! Payoffs live in one dense tensor indexed by pure strategy profiles.
//! Profile ranks use mixed radix with player 0 outermost, so for two players
//! the tensor reads row-major with player 1's action as the column. A game is
//! immutable after construction.

use crate::error::Error;
use crate::rational::{format_rational, Rational};
use num_traits::{One, Zero};

/// Hard cap on the number of pure strategy profiles.
pub const PROFILE_CAP: u128 = 1_000_000;

/// A tied argmax scan found while checking non-degeneracy: conditioning on
/// `player` holding `action`, the listed joint opponent profiles all attain
/// the same maximal payoff for `player`.
///
/// Opponent profiles list the other players' actions in player order with
/// `player` skipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegeneracyWitness {
    pub player: usize,
    pub action: usize,
    pub tied: Vec<Vec<usize>>,
}

/// An immutable finite N-player game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Game {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    payoffs: Vec<Vec<Rational>>,
}

impl Game {
    /// Builds a game from labels and a flat payoff tensor.
    ///
    /// `payoffs[rank]` holds one rational per player for the profile with
    /// that rank. Ranks enumerate profiles with player 0 as the most
    /// significant digit.
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        payoffs: Vec<Vec<Rational>>,
    ) -> Result<Self, Error> {
        if players.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "need at least 2 players, got {}",
                players.len()
            )));
        }
        if players.len() != actions.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} players but {} action lists",
                players.len(),
                actions.len()
            )));
        }
        let mut profiles: u128 = 1;
        for (i, acts) in actions.iter().enumerate() {
            if acts.is_empty() {
                return Err(Error::DimensionMismatch(format!(
                    "player {i} has an empty action set"
                )));
            }
            profiles = profiles.saturating_mul(acts.len() as u128);
        }
        if profiles > PROFILE_CAP {
            return Err(Error::SizeLimit {
                profiles,
                cap: PROFILE_CAP,
            });
        }
        if payoffs.len() as u128 != profiles {
            return Err(Error::DimensionMismatch(format!(
                "expected {} profile entries, got {}",
                profiles,
                payoffs.len()
            )));
        }
        for (rank, entry) in payoffs.iter().enumerate() {
            if entry.len() != players.len() {
                return Err(Error::DimensionMismatch(format!(
                    "profile {} has {} payoffs for {} players",
                    rank,
                    entry.len(),
                    players.len()
                )));
            }
        }
        Ok(Game {
            players,
            actions,
            payoffs,
        })
    }

    /// Convenience constructor for two-player games from a payoff matrix.
    /// `rows[i][j]` is `(u_A, u_B)` when player A plays action `i` and
    /// player B plays action `j`.
    pub fn two_player(
        a_actions: Vec<String>,
        b_actions: Vec<String>,
        rows: Vec<Vec<(Rational, Rational)>>,
    ) -> Result<Self, Error> {
        let na = a_actions.len();
        let nb = b_actions.len();
        if rows.len() != na || rows.iter().any(|r| r.len() != nb) {
            return Err(Error::DimensionMismatch(format!(
                "payoff matrix is not {na} x {nb}"
            )));
        }
        let mut payoffs = Vec::with_capacity(na * nb);
        for row in rows {
            for (ua, ub) in row {
                payoffs.push(vec![ua, ub]);
            }
        }
        Game::new(
            vec!["A".to_string(), "B".to_string()],
            vec![a_actions, b_actions],
            payoffs,
        )
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player].len()
    }

    pub fn player_label(&self, player: usize) -> &str {
        &self.players[player]
    }

    pub fn action_label(&self, player: usize, action: usize) -> &str {
        &self.actions[player][action]
    }

    pub fn player_labels(&self) -> &[String] {
        &self.players
    }

    pub fn action_labels(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    /// Rank of a full profile (one action index per player).
    pub fn profile_rank(&self, profile: &[usize]) -> usize {
        debug_assert_eq!(profile.len(), self.players.len());
        let mut rank = 0usize;
        for (i, &a) in profile.iter().enumerate() {
            debug_assert!(a < self.actions[i].len());
            rank = rank * self.actions[i].len() + a;
        }
        rank
    }

    /// Payoff of `player` at a pure profile.
    pub fn payoff(&self, profile: &[usize], player: usize) -> &Rational {
        &self.payoffs[self.profile_rank(profile)][player]
    }

    /// All pure profiles in rank order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let radices: Vec<usize> = self.actions.iter().map(|a| a.len()).collect();
        MixedRadix::new(radices)
    }

    /// All joint opponent assignments for `player`, each listing the other
    /// players' actions in player order with `player` skipped.
    pub fn opponent_profiles(&self, player: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        let radices: Vec<usize> = self
            .actions
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != player)
            .map(|(_, a)| a.len())
            .collect();
        MixedRadix::new(radices)
    }

    /// Splices an opponent assignment and an own action into a full profile.
    pub fn splice(&self, player: usize, own: usize, opponents: &[usize]) -> Vec<usize> {
        debug_assert_eq!(opponents.len(), self.players.len() - 1);
        let mut profile = Vec::with_capacity(self.players.len());
        let mut k = 0;
        for i in 0..self.players.len() {
            if i == player {
                profile.push(own);
            } else {
                profile.push(opponents[k]);
                k += 1;
            }
        }
        profile
    }

    /// Argmax set of joint opponent profiles for `player`'s payoff with the
    /// own action held fixed. The returned list is in rank order and never
    /// empty.
    pub fn conditional_argmax(&self, player: usize, own: usize) -> Vec<Vec<usize>> {
        let mut best: Option<Rational> = None;
        let mut arg: Vec<Vec<usize>> = Vec::new();
        for opp in self.opponent_profiles(player) {
            let profile = self.splice(player, own, &opp);
            let u = self.payoff(&profile, player);
            match &best {
                Some(b) if u < b => {}
                Some(b) if u == b => arg.push(opp),
                _ => {
                    best = Some(u.clone());
                    arg = vec![opp];
                }
            }
        }
        arg
    }

    /// Argmax set of own actions against a fixed joint opponent assignment.
    pub fn best_response_set(&self, player: usize, opponents: &[usize]) -> Vec<usize> {
        let mut best: Option<Rational> = None;
        let mut arg: Vec<usize> = Vec::new();
        for own in 0..self.num_actions(player) {
            let profile = self.splice(player, own, opponents);
            let u = self.payoff(&profile, player);
            match &best {
                Some(b) if u < b => {}
                Some(b) if u == b => arg.push(own),
                _ => {
                    best = Some(u.clone());
                    arg = vec![own];
                }
            }
        }
        arg
    }

    /// Human-readable rendering of a degeneracy witness using game labels.
    pub fn describe_witness(&self, w: &DegeneracyWitness) -> String {
        let opp_players: Vec<usize> = (0..self.num_players()).filter(|i| *i != w.player).collect();
        let ties: Vec<String> = w
            .tied
            .iter()
            .map(|opp| {
                let parts: Vec<String> = opp
                    .iter()
                    .zip(&opp_players)
                    .map(|(a, p)| self.action_label(*p, *a).to_string())
                    .collect();
                parts.join(",")
            })
            .collect();
        format!(
            "player {} at {}: tied opponent profiles {{{}}}",
            self.player_label(w.player),
            self.action_label(w.player, w.action),
            ties.join("; ")
        )
    }

    /// Payoff matrix entry helpers for two-player games.
    pub fn u(&self, player: usize, a: usize, b: usize) -> &Rational {
        debug_assert_eq!(self.num_players(), 2);
        &self.payoffs[a * self.actions[1].len() + b][player]
    }

    pub(crate) fn require_2x2(&self) -> Result<(), Error> {
        if self.num_players() != 2 || self.num_actions(0) != 2 || self.num_actions(1) != 2 {
            return Err(Error::DimensionMismatch(format!(
                "operation needs a 2-player 2x2 game, got {} players with actions {:?}",
                self.num_players(),
                self.actions.iter().map(|a| a.len()).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

/// Checks every conditional argmax scan of the game and returns one witness
/// per tie. An empty result means the game is non-degenerate: every map
/// `phi_i` is single-valued.
pub fn validate_nondegenerate(game: &Game) -> Vec<DegeneracyWitness> {
    let mut witnesses = Vec::new();
    for player in 0..game.num_players() {
        for action in 0..game.num_actions(player) {
            let arg = game.conditional_argmax(player, action);
            if arg.len() > 1 {
                witnesses.push(DegeneracyWitness {
                    player,
                    action,
                    tied: arg,
                });
            }
        }
    }
    witnesses
}

/// A mixed profile for a 2x2 game: `p` is the probability player A puts on
/// the first action, `q` the probability player B puts on the first action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedProfile2x2 {
    p: Rational,
    q: Rational,
}

impl MixedProfile2x2 {
    pub fn new(p: Rational, q: Rational) -> Result<Self, Error> {
        for (name, v) in [("p", &p), ("q", &q)] {
            if v < &Rational::zero() || v > &Rational::one() {
                return Err(Error::DimensionMismatch(format!(
                    "probability {name} = {} outside [0,1]",
                    format_rational(v)
                )));
            }
        }
        Ok(MixedProfile2x2 { p, q })
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }
}

/// Exact expected utility of `player` in a 2x2 game under independent
/// mixing. Bilinear in `(p, q)`.
pub fn expected_utility_2x2(
    game: &Game,
    profile: &MixedProfile2x2,
    player: usize,
) -> Result<Rational, Error> {
    game.require_2x2()?;
    if player > 1 {
        return Err(Error::DimensionMismatch(format!(
            "player index {player} out of range for 2 players"
        )));
    }
    let one = Rational::one();
    let pa = [profile.p.clone(), &one - &profile.p];
    let pb = [profile.q.clone(), &one - &profile.q];
    let mut total = Rational::zero();
    for (i, wa) in pa.iter().enumerate() {
        for (j, wb) in pb.iter().enumerate() {
            total += wa * wb * game.u(player, i, j);
        }
    }
    Ok(total)
}

/// Mixed-radix counter over profile digits, most significant digit first.
struct MixedRadix {
    radices: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MixedRadix {
    fn new(radices: Vec<usize>) -> Self {
        let start = if radices.contains(&0) {
            None
        } else {
            Some(vec![0; radices.len()])
        };
        MixedRadix {
            radices,
            next: start,
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        let mut bumped = current.clone();
        let mut pos = self.radices.len();
        loop {
            if pos == 0 {
                self.next = None;
                break;
            }
            pos -= 1;
            bumped[pos] += 1;
            if bumped[pos] < self.radices[pos] {
                self.next = Some(bumped);
                break;
            }
            bumped[pos] = 0;
        }
        Some(current)
    }
}
