//! JSON game file format, version 1.
//!
//! Every file is an object with `format_version: "1"` and a `kind` of
//! `strategic`, `bayesian`, or `quadratic`. Payoff tensors are nested
//! arrays with player 1's action index outermost and a per-player payoff
//! vector innermost. Rationals are written as integers or as exact strings
//! (`"3/4"`, `"-0.25"`); non-integer JSON numbers are rejected because
//! binary floats do not round-trip decimal payoffs.

use num_traits::Zero as _;
use periodic_strategies::bayes::{BayesianGame, Beliefs};
use periodic_strategies::game::Game;
use periodic_strategies::quadratic::QuadraticGame;
use periodic_strategies::rational::{format_rational, int, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

/// A fixture note recording a value printed in the source material next to
/// the value the formulas give.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Erratum {
    pub location: String,
    pub printed: String,
    pub derived: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategicFile {
    pub format_version: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub notes: Option<String>,
    pub players: Vec<String>,
    pub actions: Vec<Vec<String>>,
    pub payoffs: Value,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errata: Vec<Erratum>,
}

/// One nonzero prior entry; omitted (state, type profile) pairs carry
/// probability zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriorEntry {
    pub state: String,
    /// One type label per player, in player order.
    pub types: Vec<String>,
    pub prob: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BayesianFile {
    pub format_version: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub notes: Option<String>,
    pub players: Vec<String>,
    pub actions: Vec<Vec<String>>,
    pub states: Vec<String>,
    pub types: Vec<Vec<String>>,
    pub prior: Vec<PriorEntry>,
    /// Object keyed by state label; each value is a strategic payoff tensor.
    pub payoffs: Value,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errata: Vec<Erratum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticFile {
    pub format_version: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub notes: Option<String>,
    /// Coefficients `[a1, a2, a3, a4, a5]` of player 1's payoff.
    pub a: Vec<f64>,
    /// Coefficients of player 2's payoff.
    pub b: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub errata: Vec<Erratum>,
}

/// A parsed file together with the validated object it describes.
#[derive(Debug, Clone)]
pub enum GameFile {
    Strategic { file: StrategicFile, game: Game },
    Bayesian { file: BayesianFile, game: BayesianGame },
    Quadratic { file: QuadraticFile, game: QuadraticGame },
}

impl GameFile {
    pub fn name(&self) -> Option<&str> {
        match self {
            GameFile::Strategic { file, .. } => file.name.as_deref(),
            GameFile::Bayesian { file, .. } => file.name.as_deref(),
            GameFile::Quadratic { file, .. } => file.name.as_deref(),
        }
    }

    pub fn notes(&self) -> Option<&str> {
        match self {
            GameFile::Strategic { file, .. } => file.notes.as_deref(),
            GameFile::Bayesian { file, .. } => file.notes.as_deref(),
            GameFile::Quadratic { file, .. } => file.notes.as_deref(),
        }
    }

    pub fn errata(&self) -> &[Erratum] {
        match self {
            GameFile::Strategic { file, .. } => &file.errata,
            GameFile::Bayesian { file, .. } => &file.errata,
            GameFile::Quadratic { file, .. } => &file.errata,
        }
    }
}

fn schema(msg: impl Into<String>) -> CliError {
    CliError::Schema(msg.into())
}

/// Accepts integers and exact strings; rejects non-integer JSON numbers.
pub fn rational_from_value(v: &Value, ctx: &str) -> Result<Rational, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(int(i))
            } else if let Some(u) = n.as_u64() {
                i64::try_from(u)
                    .map(int)
                    .map_err(|_| schema(format!("{ctx}: integer {u} out of range")))
            } else {
                Err(schema(format!(
                    "{ctx}: non-integer number {n}; write exact values as strings like \"1/3\" or \"0.5\""
                )))
            }
        }
        Value::String(s) => parse_rational(s)
            .map_err(|e| schema(format!("{ctx}: {e}"))),
        other => Err(schema(format!(
            "{ctx}: expected a number or string, got {other}"
        ))),
    }
}

fn require_unique(labels: &[String], what: &str) -> Result<(), CliError> {
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(schema(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

/// Recursively walks a nested payoff tensor into the flat row-major layout
/// the library uses: one entry per action profile, innermost vector one
/// payoff per player.
fn parse_tensor(
    payoffs: &Value,
    action_counts: &[usize],
    players: usize,
    ctx: &str,
) -> Result<Vec<Vec<Rational>>, CliError> {
    let mut flat = Vec::new();
    walk_tensor(payoffs, action_counts, players, ctx, &mut String::new(), &mut flat)?;
    Ok(flat)
}

fn walk_tensor(
    v: &Value,
    remaining: &[usize],
    players: usize,
    ctx: &str,
    path: &mut String,
    out: &mut Vec<Vec<Rational>>,
) -> Result<(), CliError> {
    let arr = v.as_array().ok_or_else(|| {
        schema(format!("{ctx}{path}: expected an array, got {v}"))
    })?;
    match remaining.split_first() {
        Some((&count, rest)) => {
            if arr.len() != count {
                return Err(schema(format!(
                    "{ctx}{path}: expected {count} entries, got {}",
                    arr.len()
                )));
            }
            for (i, item) in arr.iter().enumerate() {
                let len_before = path.len();
                path.push_str(&format!("[{i}]"));
                walk_tensor(item, rest, players, ctx, path, out)?;
                path.truncate(len_before);
            }
            Ok(())
        }
        None => {
            if arr.len() != players {
                return Err(schema(format!(
                    "{ctx}{path}: payoff vector needs one entry per player ({players}), got {}",
                    arr.len()
                )));
            }
            let mut cell = Vec::with_capacity(players);
            for (i, item) in arr.iter().enumerate() {
                cell.push(rational_from_value(
                    item,
                    &format!("{ctx}{path}[{i}]"),
                )?);
            }
            out.push(cell);
            Ok(())
        }
    }
}

/// Renders a flat payoff table back into the nested file form.
fn tensor_to_value(game: &Game) -> Value {
    fn build(game: &Game, player: usize, prefix: &mut Vec<usize>) -> Value {
        if player == game.num_players() {
            return Value::Array(
                (0..game.num_players())
                    .map(|p| Value::String(format_rational(game.payoff(prefix, p))))
                    .collect(),
            );
        }
        Value::Array(
            (0..game.num_actions(player))
                .map(|a| {
                    prefix.push(a);
                    let v = build(game, player + 1, prefix);
                    prefix.pop();
                    v
                })
                .collect(),
        )
    }
    build(game, 0, &mut Vec::new())
}

/// Writes a strategic game back out in the file format, preserving labels.
pub fn strategic_file_from_game(
    game: &Game,
    name: Option<String>,
    notes: Option<String>,
) -> StrategicFile {
    StrategicFile {
        format_version: "1".to_string(),
        kind: "strategic".to_string(),
        name,
        notes,
        players: game.player_labels().to_vec(),
        actions: (0..game.num_players())
            .map(|p| game.action_labels(p).to_vec())
            .collect(),
        payoffs: tensor_to_value(game),
        errata: Vec::new(),
    }
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values are serializable");
    s.push('\n');
    s
}

fn build_strategic(file: StrategicFile) -> Result<GameFile, CliError> {
    require_unique(&file.players, "player")?;
    if file.actions.len() != file.players.len() {
        return Err(schema(format!(
            "actions lists {} players, file names {}",
            file.actions.len(),
            file.players.len()
        )));
    }
    for (p, acts) in file.actions.iter().enumerate() {
        require_unique(acts, &format!("action (player {})", file.players[p]))?;
    }
    let counts: Vec<usize> = file.actions.iter().map(|a| a.len()).collect();
    let flat = parse_tensor(&file.payoffs, &counts, file.players.len(), "payoffs")?;
    let game = Game::new(
        file.players.clone(),
        file.actions.clone(),
        flat,
    )
    .map_err(CliError::core("game construction"))?;
    Ok(GameFile::Strategic { file, game })
}

fn build_bayesian(file: BayesianFile) -> Result<GameFile, CliError> {
    require_unique(&file.players, "player")?;
    require_unique(&file.states, "state")?;
    if file.actions.len() != file.players.len() || file.types.len() != file.players.len() {
        return Err(schema(
            "actions and types must list one entry per player".to_string(),
        ));
    }
    for (p, acts) in file.actions.iter().enumerate() {
        require_unique(acts, &format!("action (player {})", file.players[p]))?;
    }
    for (p, tys) in file.types.iter().enumerate() {
        require_unique(tys, &format!("type (player {})", file.players[p]))?;
    }

    // Per-state tensors, keyed by state label.
    let obj = file
        .payoffs
        .as_object()
        .ok_or_else(|| schema("payoffs: expected an object keyed by state label"))?;
    for key in obj.keys() {
        if !file.states.contains(key) {
            return Err(schema(format!("payoffs: unknown state label {key:?}")));
        }
    }
    let counts: Vec<usize> = file.actions.iter().map(|a| a.len()).collect();
    let mut payoffs = Vec::with_capacity(file.states.len());
    for state in &file.states {
        let tensor = obj
            .get(state)
            .ok_or_else(|| schema(format!("payoffs: missing state {state:?}")))?;
        payoffs.push(parse_tensor(
            tensor,
            &counts,
            file.players.len(),
            &format!("payoffs[{state}]"),
        )?);
    }

    // Flat prior entries into the state-major dense vector.
    let type_counts: Vec<usize> = file.types.iter().map(|t| t.len()).collect();
    let profiles: usize = type_counts.iter().product();
    let mut prior = vec![int(0); file.states.len() * profiles];
    for (i, entry) in file.prior.iter().enumerate() {
        let ctx = format!("prior[{i}]");
        let state = file
            .states
            .iter()
            .position(|s| *s == entry.state)
            .ok_or_else(|| schema(format!("{ctx}: unknown state {:?}", entry.state)))?;
        if entry.types.len() != file.players.len() {
            return Err(schema(format!(
                "{ctx}: needs one type per player ({}), got {}",
                file.players.len(),
                entry.types.len()
            )));
        }
        let mut rank = 0usize;
        for (p, label) in entry.types.iter().enumerate() {
            let t = file.types[p]
                .iter()
                .position(|x| x == label)
                .ok_or_else(|| {
                    schema(format!(
                        "{ctx}: unknown type {label:?} for player {}",
                        file.players[p]
                    ))
                })?;
            rank = rank * type_counts[p] + t;
        }
        let slot = state * profiles + rank;
        if !prior[slot].is_zero() {
            return Err(schema(format!(
                "{ctx}: duplicate entry for state {:?} and types {:?}",
                entry.state, entry.types
            )));
        }
        prior[slot] = rational_from_value(&entry.prob, &format!("{ctx}.prob"))?;
    }

    let game = BayesianGame::new(
        file.players.clone(),
        file.actions.clone(),
        file.states.clone(),
        file.types.clone(),
        Beliefs::CommonPrior(prior),
        payoffs,
    )
    .map_err(CliError::core("bayesian game construction"))?;
    Ok(GameFile::Bayesian { file, game })
}

fn build_quadratic(file: QuadraticFile) -> Result<GameFile, CliError> {
    let to5 = |v: &[f64], name: &str| -> Result<[f64; 5], CliError> {
        v.try_into()
            .map_err(|_| schema(format!("{name}: expected 5 coefficients, got {}", v.len())))
    };
    let game = QuadraticGame::new(to5(&file.a, "a")?, to5(&file.b, "b")?)
        .map_err(CliError::core("quadratic game construction"))?;
    Ok(GameFile::Quadratic { file, game })
}

/// Parses and validates a game file.
pub fn parse_game_file(text: &str) -> Result<GameFile, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| schema("top level must be an object"))?;
    match obj.get("format_version").and_then(Value::as_str) {
        Some("1") => {}
        Some(v) => return Err(schema(format!("unsupported format_version {v:?}"))),
        None => return Err(schema("missing string field format_version")),
    }
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| schema("missing string field kind"))?;
    match kind {
        "strategic" => {
            let file: StrategicFile = serde_json::from_value(value.clone())
                .map_err(|e| schema(e.to_string()))?;
            build_strategic(file)
        }
        "bayesian" => {
            let file: BayesianFile = serde_json::from_value(value.clone())
                .map_err(|e| schema(e.to_string()))?;
            build_bayesian(file)
        }
        "quadratic" => {
            let file: QuadraticFile = serde_json::from_value(value.clone())
                .map_err(|e| schema(e.to_string()))?;
            build_quadratic(file)
        }
        other => Err(schema(format!(
            "unknown kind {other:?}; expected strategic, bayesian, or quadratic"
        ))),
    }
}
