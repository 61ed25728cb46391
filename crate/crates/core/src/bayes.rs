//! Incomplete-information games and their complete-information transforms.
//!
//! A Bayesian game couples per-state payoff tensors with a belief structure
//! over states and type profiles. Three transforms reduce it to an ordinary
//! game: the ex-ante view (players choose type-contingent strategies, payoffs
//! are prior expectations), the interim independent view (every type becomes
//! its own player), and the interim correlated view (state-averaged payoffs;
//! identical to the independent view except that single-type games keep their
//! original players and action sets).

use crate::error::Error;
use crate::game::{Game, PROFILE_CAP};
use crate::periodicity::{periodic_graph_np, periodic_set_2p, PeriodicityReport, TiePolicy};
use crate::rational::{format_rational, Rational};
use num_traits::{One, Zero};

/// Belief structure of a Bayesian game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Beliefs {
    /// One joint distribution over `(state, type profile)` pairs, ranked
    /// state-major then type-profile rank. Must sum to one exactly and give
    /// every type of every player positive marginal probability.
    CommonPrior(Vec<Rational>),
    /// Direct interim beliefs: `beliefs[player][type]` is a distribution
    /// over `(state, opponent type profile)` pairs, ranked state-major.
    /// Supports interim transforms only.
    Interim(Vec<Vec<Vec<Rational>>>),
}

/// An immutable Bayesian game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesianGame {
    players: Vec<String>,
    actions: Vec<Vec<String>>,
    states: Vec<String>,
    types: Vec<Vec<String>>,
    beliefs: Beliefs,
    /// `payoffs[state][action profile rank][player]`.
    payoffs: Vec<Vec<Vec<Rational>>>,
}

fn rank(digits: &[usize], radices: &[usize]) -> usize {
    debug_assert_eq!(digits.len(), radices.len());
    let mut r = 0;
    for (d, m) in digits.iter().zip(radices) {
        debug_assert!(d < m);
        r = r * m + d;
    }
    r
}

fn unrank(mut r: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        digits[i] = r % radices[i];
        r /= radices[i];
    }
    digits
}

impl BayesianGame {
    pub fn new(
        players: Vec<String>,
        actions: Vec<Vec<String>>,
        states: Vec<String>,
        types: Vec<Vec<String>>,
        beliefs: Beliefs,
        payoffs: Vec<Vec<Vec<Rational>>>,
    ) -> Result<Self, Error> {
        let n = players.len();
        if n < 2 {
            return Err(Error::DimensionMismatch(format!(
                "need at least 2 players, got {n}"
            )));
        }
        if actions.len() != n || types.len() != n {
            return Err(Error::DimensionMismatch(
                "actions and types must list one entry per player".to_string(),
            ));
        }
        if states.is_empty() {
            return Err(Error::DimensionMismatch("no states".to_string()));
        }
        if actions.iter().any(|a| a.is_empty()) || types.iter().any(|t| t.is_empty()) {
            return Err(Error::DimensionMismatch(
                "every player needs at least one action and one type".to_string(),
            ));
        }
        let action_profiles: u128 = actions.iter().map(|a| a.len() as u128).product();
        let type_profiles: u128 = types.iter().map(|t| t.len() as u128).product();
        let joint = (states.len() as u128).saturating_mul(type_profiles);
        if action_profiles > PROFILE_CAP || joint > PROFILE_CAP {
            return Err(Error::SizeLimit {
                profiles: action_profiles.max(joint),
                cap: PROFILE_CAP,
            });
        }
        if payoffs.len() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} state tensors, got {}",
                states.len(),
                payoffs.len()
            )));
        }
        for (s, tensor) in payoffs.iter().enumerate() {
            if tensor.len() as u128 != action_profiles {
                return Err(Error::DimensionMismatch(format!(
                    "state {s}: expected {action_profiles} profiles, got {}",
                    tensor.len()
                )));
            }
            if tensor.iter().any(|cell| cell.len() != n) {
                return Err(Error::DimensionMismatch(format!(
                    "state {s}: every profile needs {n} payoffs"
                )));
            }
        }

        let game = BayesianGame {
            players,
            actions,
            states,
            types,
            beliefs,
            payoffs,
        };
        game.validate_beliefs()?;
        Ok(game)
    }

    fn type_radices(&self) -> Vec<usize> {
        self.types.iter().map(|t| t.len()).collect()
    }

    fn action_radices(&self) -> Vec<usize> {
        self.actions.iter().map(|a| a.len()).collect()
    }

    fn opp_type_radices(&self, player: usize) -> Vec<usize> {
        self.types
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != player)
            .map(|(_, t)| t.len())
            .collect()
    }

    fn validate_beliefs(&self) -> Result<(), Error> {
        match &self.beliefs {
            Beliefs::CommonPrior(prior) => {
                let type_radices = self.type_radices();
                let type_profiles: usize = type_radices.iter().product();
                let expected = self.states.len() * type_profiles;
                if prior.len() != expected {
                    return Err(Error::InvalidPrior(format!(
                        "expected {expected} prior entries, got {}",
                        prior.len()
                    )));
                }
                let mut sum = Rational::zero();
                for (k, p) in prior.iter().enumerate() {
                    if p < &Rational::zero() {
                        return Err(Error::InvalidPrior(format!(
                            "negative mass {} at entry {k}",
                            format_rational(p)
                        )));
                    }
                    sum += p;
                }
                if !sum.is_one() {
                    return Err(Error::InvalidPrior(format!(
                        "prior sums to {}, not 1",
                        format_rational(&sum)
                    )));
                }
                for player in 0..self.players.len() {
                    for ty in 0..self.types[player].len() {
                        if self.type_marginal(prior, player, ty).is_zero() {
                            return Err(Error::InvalidPrior(format!(
                                "type {} of player {} has zero marginal probability",
                                self.types[player][ty], self.players[player]
                            )));
                        }
                    }
                }
                Ok(())
            }
            Beliefs::Interim(tables) => {
                if tables.len() != self.players.len() {
                    return Err(Error::InvalidPrior(
                        "interim beliefs must list one table per player".to_string(),
                    ));
                }
                for (player, per_type) in tables.iter().enumerate() {
                    if per_type.len() != self.types[player].len() {
                        return Err(Error::InvalidPrior(format!(
                            "player {} needs one belief row per type",
                            self.players[player]
                        )));
                    }
                    let opp_profiles: usize = self.opp_type_radices(player).iter().product();
                    let expected = self.states.len() * opp_profiles;
                    for (ty, row) in per_type.iter().enumerate() {
                        if row.len() != expected {
                            return Err(Error::InvalidPrior(format!(
                                "belief row for type {} of player {} needs {expected} entries",
                                self.types[player][ty], self.players[player]
                            )));
                        }
                        let mut sum = Rational::zero();
                        for p in row {
                            if p < &Rational::zero() {
                                return Err(Error::InvalidPrior("negative belief".to_string()));
                            }
                            sum += p;
                        }
                        if !sum.is_one() {
                            return Err(Error::InvalidPrior(format!(
                                "belief row for type {} of player {} sums to {}, not 1",
                                self.types[player][ty],
                                self.players[player],
                                format_rational(&sum)
                            )));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn type_marginal(&self, prior: &[Rational], player: usize, ty: usize) -> Rational {
        let type_radices = self.type_radices();
        let type_profiles: usize = type_radices.iter().product();
        let mut total = Rational::zero();
        for state in 0..self.states.len() {
            for tp in 0..type_profiles {
                if unrank(tp, &type_radices)[player] == ty {
                    total += &prior[state * type_profiles + tp];
                }
            }
        }
        total
    }

    /// Interim belief of `(player, ty)` as a distribution over
    /// `(state, opponent type profile)` pairs, state-major.
    fn conditional(&self, player: usize, ty: usize) -> Vec<Rational> {
        let opp_radices = self.opp_type_radices(player);
        let opp_profiles: usize = opp_radices.iter().product();
        match &self.beliefs {
            Beliefs::Interim(tables) => tables[player][ty].clone(),
            Beliefs::CommonPrior(prior) => {
                let type_radices = self.type_radices();
                let type_profiles: usize = type_radices.iter().product();
                let marginal = self.type_marginal(prior, player, ty);
                let mut out = Vec::with_capacity(self.states.len() * opp_profiles);
                for state in 0..self.states.len() {
                    for opp in 0..opp_profiles {
                        let opp_digits = unrank(opp, &opp_radices);
                        let mut full = Vec::with_capacity(self.players.len());
                        let mut k = 0;
                        for i in 0..self.players.len() {
                            if i == player {
                                full.push(ty);
                            } else {
                                full.push(opp_digits[k]);
                                k += 1;
                            }
                        }
                        let joint = &prior[state * type_profiles + rank(&full, &type_radices)];
                        out.push(joint / &marginal);
                    }
                }
                out
            }
        }
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn player_labels(&self) -> &[String] {
        &self.players
    }

    pub fn action_labels(&self, player: usize) -> &[String] {
        &self.actions[player]
    }

    pub fn state_labels(&self) -> &[String] {
        &self.states
    }

    pub fn type_labels(&self, player: usize) -> &[String] {
        &self.types[player]
    }

    pub fn single_typed(&self) -> bool {
        self.types.iter().all(|t| t.len() == 1)
    }

    /// Payoff of `player` at a pure action profile in a given state.
    pub fn state_payoff(&self, state: usize, profile: &[usize], player: usize) -> &Rational {
        &self.payoffs[state][rank(profile, &self.action_radices())][player]
    }

    /// Label for the type instance `(player, ty)` used when types become
    /// players: the bare type label when globally unique, otherwise
    /// qualified by the player label.
    fn instance_label(&self, player: usize, ty: usize) -> String {
        let label = &self.types[player][ty];
        let clashes = self
            .types
            .iter()
            .enumerate()
            .any(|(i, ts)| i != player && ts.contains(label));
        if clashes {
            format!("{}:{}", self.players[player], label)
        } else {
            label.clone()
        }
    }
}

/// Which complete-information view to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    ExAnte,
    InterimIndependent,
    InterimCorrelated,
}

/// Ex-ante view: each player picks one action per own type before learning
/// anything, and payoffs are exact expectations under the common prior.
/// Strategy labels concatenate the chosen action labels in type order.
pub fn ex_ante_transform(bg: &BayesianGame) -> Result<Game, Error> {
    let prior = match &bg.beliefs {
        Beliefs::CommonPrior(p) => p,
        Beliefs::Interim(_) => return Err(Error::NoCommonPrior),
    };
    let n = bg.players.len();
    let mut strategy_counts: Vec<u128> = Vec::with_capacity(n);
    for i in 0..n {
        let mut count: u128 = 1;
        for _ in 0..bg.types[i].len() {
            count = count.saturating_mul(bg.actions[i].len() as u128);
            if count > PROFILE_CAP {
                break;
            }
        }
        strategy_counts.push(count);
    }
    let joint: u128 = strategy_counts
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(*c));
    if joint > PROFILE_CAP {
        return Err(Error::SizeLimit {
            profiles: joint,
            cap: PROFILE_CAP,
        });
    }

    // Strategy index -> one action digit per type, type 0 most significant.
    let strategy_digits = |player: usize, s: usize| -> Vec<usize> {
        let radices = vec![bg.actions[player].len(); bg.types[player].len()];
        unrank(s, &radices)
    };
    let mut strategy_labels: Vec<Vec<String>> = Vec::with_capacity(n);
    for (i, count) in strategy_counts.iter().enumerate() {
        let labels = (0..*count as usize)
            .map(|s| {
                strategy_digits(i, s)
                    .iter()
                    .map(|&a| bg.actions[i][a].as_str())
                    .collect::<Vec<_>>()
                    .concat()
            })
            .collect();
        strategy_labels.push(labels);
    }

    let type_radices = bg.type_radices();
    let type_profiles: usize = type_radices.iter().product();
    let strategy_radices: Vec<usize> = strategy_counts.iter().map(|c| *c as usize).collect();
    let total = strategy_radices.iter().product::<usize>();

    let mut payoffs = Vec::with_capacity(total);
    for joint_rank in 0..total {
        let strategies = unrank(joint_rank, &strategy_radices);
        let digit_table: Vec<Vec<usize>> = (0..n)
            .map(|i| strategy_digits(i, strategies[i]))
            .collect();
        let mut cell = vec![Rational::zero(); n];
        for state in 0..bg.states.len() {
            for tp in 0..type_profiles {
                let mass = &prior[state * type_profiles + tp];
                if mass.is_zero() {
                    continue;
                }
                let types = unrank(tp, &type_radices);
                let profile: Vec<usize> = (0..n).map(|i| digit_table[i][types[i]]).collect();
                for (player, acc) in cell.iter_mut().enumerate() {
                    *acc += mass * bg.state_payoff(state, &profile, player);
                }
            }
        }
        payoffs.push(cell);
    }
    Game::new(bg.players.clone(), strategy_labels, payoffs)
}

/// Interim independent view: every `(player, type)` instance becomes a
/// player with the owner's action set, and its payoff is the owner's
/// expected payoff conditional on that type, with each opponent's action
/// read from the instance matching the realized opponent type.
pub fn interim_independent_transform(bg: &BayesianGame) -> Result<Game, Error> {
    type_instance_game(bg)
}

/// Interim correlated view: for single-type-per-player games this is the
/// state-averaged game over the original players and action sets; with
/// multiple types it coincides with the independent construction.
pub fn interim_correlated_transform(bg: &BayesianGame) -> Result<Game, Error> {
    if !bg.single_typed() {
        return type_instance_game(bg);
    }
    let n = bg.players.len();
    let action_radices = bg.action_radices();
    let weights: Vec<Vec<Rational>> = (0..n).map(|i| bg.conditional(i, 0)).collect();
    let profile_count: usize = action_radices.iter().product();
    let mut payoffs = Vec::with_capacity(profile_count);
    for r in 0..profile_count {
        let profile = unrank(r, &action_radices);
        let mut cell = Vec::with_capacity(n);
        for (player, player_weights) in weights.iter().enumerate() {
            // Single types make the opponent profile unique, so the
            // conditional is indexed by state alone.
            let mut total = Rational::zero();
            for (state, weight) in player_weights.iter().enumerate() {
                total += weight * bg.state_payoff(state, &profile, player);
            }
            cell.push(total);
        }
        payoffs.push(cell);
    }
    Game::new(bg.players.clone(), bg.actions.clone(), payoffs)
}

fn type_instance_game(bg: &BayesianGame) -> Result<Game, Error> {
    let n = bg.players.len();
    let instances: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..bg.types[i].len()).map(move |t| (i, t)))
        .collect();
    let joint: u128 = instances
        .iter()
        .fold(1u128, |acc, (i, _)| acc.saturating_mul(bg.actions[*i].len() as u128));
    if joint > PROFILE_CAP {
        return Err(Error::SizeLimit {
            profiles: joint,
            cap: PROFILE_CAP,
        });
    }

    let labels: Vec<String> = instances
        .iter()
        .map(|&(i, t)| bg.instance_label(i, t))
        .collect();
    let action_labels: Vec<Vec<String>> = instances
        .iter()
        .map(|&(i, _)| bg.actions[i].to_vec())
        .collect();

    // instance_index[player][type] -> position among the new players.
    let mut instance_index = vec![Vec::new(); n];
    for (pos, &(i, t)) in instances.iter().enumerate() {
        debug_assert_eq!(instance_index[i].len(), t);
        instance_index[i].push(pos);
    }

    let radices: Vec<usize> = instances
        .iter()
        .map(|&(i, _)| bg.actions[i].len())
        .collect();
    let total: usize = radices.iter().product();

    // Conditionals once per instance.
    let conditionals: Vec<Vec<Rational>> = instances
        .iter()
        .map(|&(i, t)| bg.conditional(i, t))
        .collect();

    let mut payoffs = Vec::with_capacity(total);
    for r in 0..total {
        let joint_actions = unrank(r, &radices);
        let mut cell = Vec::with_capacity(instances.len());
        for (pos, &(player, _ty)) in instances.iter().enumerate() {
            let opp_radices = bg.opp_type_radices(player);
            let opp_profiles: usize = opp_radices.iter().product();
            let weights = &conditionals[pos];
            let mut total_u = Rational::zero();
            for state in 0..bg.states.len() {
                for opp in 0..opp_profiles {
                    let w = &weights[state * opp_profiles + opp];
                    if w.is_zero() {
                        continue;
                    }
                    let opp_digits = unrank(opp, &opp_radices);
                    let mut profile = Vec::with_capacity(n);
                    let mut k = 0;
                    for j in 0..n {
                        if j == player {
                            profile.push(joint_actions[pos]);
                        } else {
                            let j_type = opp_digits[k];
                            k += 1;
                            profile.push(joint_actions[instance_index[j][j_type]]);
                        }
                    }
                    total_u += w * bg.state_payoff(state, &profile, player);
                }
            }
            cell.push(total_u);
        }
        payoffs.push(cell);
    }
    Game::new(labels, action_labels, payoffs)
}

/// Transformed game together with its periodicity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BayesPeriodicity {
    pub transform: TransformKind,
    pub game: Game,
    pub report: PeriodicityReport,
}

/// Applies a transform and runs the periodicity engine on the result (the
/// two-player scan when the output has two players, the graph engine
/// otherwise).
pub fn bayes_periodicity(
    bg: &BayesianGame,
    transform: TransformKind,
    policy: TiePolicy,
) -> Result<BayesPeriodicity, Error> {
    let game = match transform {
        TransformKind::ExAnte => ex_ante_transform(bg)?,
        TransformKind::InterimIndependent => interim_independent_transform(bg)?,
        TransformKind::InterimCorrelated => interim_correlated_transform(bg)?,
    };
    let report = if game.num_players() == 2 {
        periodic_set_2p(&game, policy)?
    } else {
        periodic_graph_np(&game, policy, None)?
    };
    Ok(BayesPeriodicity {
        transform,
        game,
        report,
    })
}
