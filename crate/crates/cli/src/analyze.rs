//! Report assembly: runs every applicable analysis for a parsed game file
//! and renders one section per analysis. Sections whose preconditions fail
//! (wrong player count, wrong size, unresolved conflicts) are emitted as
//! skipped with the reason instead of aborting the report.

use std::cmp::Ordering;

use periodic_strategies::bayes::{bayes_periodicity, BayesianGame, TransformKind};
use periodic_strategies::coco::{coco_solution, ZeroSumAttainment};
use periodic_strategies::epistemic::build_epistemic_model;
use periodic_strategies::error::Error as CoreError;
use periodic_strategies::game::{validate_nondegenerate, Game};
use periodic_strategies::mixedper::{
    classify_2x2, mixed_periodic_2x2, payoff_comparison_2x2, AffineForm, GameClassLabel,
    MixedPeriodic2x2, PlayerComparison, SideMode,
};
use periodic_strategies::periodicity::{
    build_phi_2p, build_phi_np, format_nodes, nash_periodicity_check, periodic_graph_np,
    periodic_set_2p, NashPeriodicity, Node, PeriodicityReport, TiePolicy, Verdict,
};
use periodic_strategies::quadratic::{
    preset_cournot, preset_public_good, solve_nash_quadratic, solve_periodic_quadratic,
    CurvatureClass, Locus, QuadraticGame, QuadraticSolution,
};
use periodic_strategies::rational::{format_rational, Rational};
use periodic_strategies::solutions::{
    iterated_strict_dominance, mixed_nash_2x2, point_rationalizable, pure_nash, MixedNash2x2,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::format::{strategic_file_from_game, Erratum, GameFile, StrategicFile};
use crate::report::{align_rows, Report, Section};

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub policy: TiePolicy,
    pub max_cycle_len: Option<usize>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            policy: TiePolicy::Strict,
            max_cycle_len: None,
        }
    }
}

fn policy_str(policy: TiePolicy) -> &'static str {
    match policy {
        TiePolicy::Strict => "strict",
        TiePolicy::FirstIndex => "first-index",
    }
}

fn rstr(r: &Rational) -> String {
    format_rational(r)
}

fn opt_rstr(r: &Option<Rational>) -> Value {
    match r {
        Some(r) => Value::String(rstr(r)),
        None => Value::Null,
    }
}

fn node_str(game: &Game, n: &Node) -> String {
    game.action_label(n.player, n.action).to_string()
}

fn affine_value(f: &AffineForm) -> Value {
    json!({ "slope": rstr(&f.slope), "intercept": rstr(&f.intercept) })
}

fn affine_str(f: &AffineForm, var: &str) -> String {
    use num_traits::Zero as _;
    let intercept = &f.intercept;
    if f.slope.is_zero() {
        return rstr(intercept);
    }
    if intercept.is_zero() {
        return format!("{}*{var}", rstr(&f.slope));
    }
    if intercept < &Rational::from_integer(0.into()) {
        format!("{}*{var} - {}", rstr(&f.slope), rstr(&-intercept.clone()))
    } else {
        format!("{}*{var} + {}", rstr(&f.slope), rstr(intercept))
    }
}

/// Entry point: one report per file kind.
pub fn analyze(file: &GameFile, opts: &AnalyzeOptions) -> Result<Report, CliError> {
    match file {
        GameFile::Strategic { file, game } => analyze_strategic_game(
            game,
            file.name.as_deref().unwrap_or("strategic game"),
            &file.errata,
            opts,
        ),
        GameFile::Bayesian { file, game } => analyze_bayesian_game(
            game,
            file.name.as_deref().unwrap_or("bayesian game"),
            &file.errata,
            opts,
        ),
        GameFile::Quadratic { file, game } => Ok(analyze_quadratic_game(
            game,
            file.name.as_deref().unwrap_or("quadratic game"),
            &file.errata,
        )),
    }
}

fn errata_section(errata: &[Erratum]) -> Option<Section> {
    if errata.is_empty() {
        return None;
    }
    // The entries themselves ride on the section's errata field.
    let machine = json!({ "count": errata.len() });
    let text = format!(
        "{} recorded difference(s) between printed and derived values\n",
        errata.len()
    );
    let mut s = Section::new("errata", machine, text);
    s.errata = errata.to_vec();
    Some(s)
}

fn payoff_matrix_text(game: &Game) -> String {
    if game.num_players() == 2 {
        let mut rows = Vec::new();
        let mut header = vec![String::new()];
        header.extend(game.action_labels(1).iter().cloned());
        rows.push(header);
        for i in 0..game.num_actions(0) {
            let mut row = vec![game.action_label(0, i).to_string()];
            for j in 0..game.num_actions(1) {
                row.push(format!("({}, {})", rstr(game.u(0, i, j)), rstr(game.u(1, i, j))));
            }
            rows.push(row);
        }
        align_rows(&rows)
    } else {
        let mut rows = Vec::new();
        for profile in game.profiles() {
            let labels: Vec<String> = profile
                .iter()
                .enumerate()
                .map(|(p, &a)| game.action_label(p, a).to_string())
                .collect();
            let values: Vec<String> = (0..game.num_players())
                .map(|p| rstr(game.payoff(&profile, p)))
                .collect();
            rows.push(vec![
                format!("({})", labels.join(", ")),
                values.join(", "),
            ]);
        }
        align_rows(&rows)
    }
}

fn tensor_value(game: &Game) -> Value {
    // Reuses the file emitter so reports and emitted files agree.
    strategic_file_from_game(game, None, None).payoffs
}

fn game_section(game: &Game) -> Section {
    let machine = json!({
        "players": game.player_labels(),
        "actions": (0..game.num_players()).map(|p| game.action_labels(p).to_vec()).collect::<Vec<_>>(),
        "payoffs": tensor_value(game),
    });
    Section::new("game", machine, payoff_matrix_text(game))
}

fn degeneracy_section(game: &Game, policy: TiePolicy) -> Section {
    let witnesses: Vec<String> = validate_nondegenerate(game)
        .iter()
        .map(|w| game.describe_witness(w))
        .collect();
    let text = if witnesses.is_empty() {
        "no payoff ties; all argmax rows unique\n".to_string()
    } else {
        let mut t = String::new();
        for w in &witnesses {
            t.push_str(w);
            t.push('\n');
        }
        t.push_str(&format!(
            "ties resolved by the {} policy\n",
            policy_str(policy)
        ));
        t
    };
    Section::new(
        "degeneracy",
        json!({ "witnesses": witnesses, "policy": policy_str(policy) }),
        text,
    )
}

fn periodicity_section(game: &Game, report: &PeriodicityReport, bound: Option<usize>) -> Section {
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for e in &report.entries {
        let label = node_str(game, &e.node);
        let player = game.player_label(e.node.player).to_string();
        match &e.verdict {
            Verdict::Periodic { n, cycle } => {
                let within_bound = !cycle.is_empty();
                let cycle_str = format_nodes(game, cycle);
                entries.push(json!({
                    "player": player,
                    "action": label,
                    "verdict": "periodic",
                    "n": n,
                    "cycle": if within_bound { Value::String(cycle_str.clone()) } else { Value::Null },
                    "all_cycles": e.cycles.iter().map(|c| format_nodes(game, c)).collect::<Vec<_>>(),
                    "shortest_cycle_len": e.shortest_cycle_len,
                    "trace": format_nodes(game, &e.trace),
                }));
                rows.push(vec![
                    player.clone(),
                    label,
                    "periodic".to_string(),
                    if within_bound {
                        format!("n = {n}, cycle {cycle_str}")
                    } else {
                        "every cycle exceeds the length bound".to_string()
                    },
                ]);
            }
            Verdict::NonPeriodic => {
                entries.push(json!({
                    "player": player,
                    "action": label,
                    "verdict": "non-periodic",
                    "trace": format_nodes(game, &e.trace),
                }));
                rows.push(vec![
                    player.clone(),
                    label,
                    "non-periodic".to_string(),
                    format!("chain {}", format_nodes(game, &e.trace)),
                ]);
            }
            Verdict::Degenerate => {
                entries.push(json!({
                    "player": player,
                    "action": label,
                    "verdict": "degenerate",
                }));
                rows.push(vec![player.clone(), label, "degenerate".to_string(), String::new()]);
            }
        }
    }
    let periodic_set: Vec<Value> = (0..game.num_players())
        .map(|p| {
            let actions: Vec<String> = report
                .entries
                .iter()
                .filter(|e| {
                    e.node.player == p && matches!(e.verdict, Verdict::Periodic { .. })
                })
                .map(|e| node_str(game, &e.node))
                .collect();
            json!({ "player": game.player_label(p), "actions": actions })
        })
        .collect();
    let mut text = align_rows(&rows);
    for set in &periodic_set {
        text.push_str(&format!(
            "periodic set of {}: {{{}}}\n",
            set["player"].as_str().unwrap(),
            set["actions"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_str().unwrap())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Section::new(
        "periodicity",
        json!({
            "entries": entries,
            "periodic_set": periodic_set,
            "max_cycle_len": bound,
        }),
        text,
    )
}

fn phi_section_2p(game: &Game, policy: TiePolicy) -> Result<Section, CliError> {
    let phi = build_phi_2p(game, policy).map_err(CliError::core("periodicity"))?;
    let pairs1: Vec<Value> = phi
        .phi1
        .iter()
        .enumerate()
        .map(|(x, &y)| json!([game.action_label(0, x), game.action_label(1, y)]))
        .collect();
    let pairs2: Vec<Value> = phi
        .phi2
        .iter()
        .enumerate()
        .map(|(y, &x)| json!([game.action_label(1, y), game.action_label(0, x)]))
        .collect();
    let mut rows = Vec::new();
    for (x, &y) in phi.phi1.iter().enumerate() {
        rows.push(vec![
            format!("phi1({})", game.action_label(0, x)),
            "=".into(),
            game.action_label(1, y).to_string(),
        ]);
    }
    for (y, &x) in phi.phi2.iter().enumerate() {
        rows.push(vec![
            format!("phi2({})", game.action_label(1, y)),
            "=".into(),
            game.action_label(0, x).to_string(),
        ]);
    }
    Ok(Section::new(
        "maps",
        json!({ "phi1": pairs1, "phi2": pairs2 }),
        align_rows(&rows),
    ))
}

fn phi_section_np(game: &Game, policy: TiePolicy) -> Result<Section, CliError> {
    let phi = build_phi_np(game, policy).map_err(CliError::core("periodicity"))?;
    let mut maps = Vec::new();
    let mut rows = Vec::new();
    for i in 0..game.num_players() {
        for x in 0..game.num_actions(i) {
            let assigns: Vec<Value> = (0..game.num_players())
                .filter(|&j| j != i)
                .map(|j| {
                    let a = phi.phi_ij(i, x, j);
                    json!([game.player_label(j), game.action_label(j, a)])
                })
                .collect();
            rows.push(vec![
                format!("phi[{} at {}]", game.player_label(i), game.action_label(i, x)),
                assigns
                    .iter()
                    .map(|v| {
                        format!(
                            "{}:{}",
                            v[0].as_str().unwrap(),
                            v[1].as_str().unwrap()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(", "),
            ]);
            maps.push(json!({
                "player": game.player_label(i),
                "action": game.action_label(i, x),
                "assigns": assigns,
            }));
        }
    }
    Ok(Section::new(
        "maps",
        json!({ "tables": maps }),
        align_rows(&rows),
    ))
}

fn profile_labels(game: &Game, profile: &[usize]) -> Vec<String> {
    profile
        .iter()
        .enumerate()
        .map(|(p, &a)| game.action_label(p, a).to_string())
        .collect()
}

fn pure_nash_section(game: &Game, profiles: &[Vec<usize>]) -> Section {
    let labeled: Vec<Vec<String>> = profiles.iter().map(|p| profile_labels(game, p)).collect();
    let text = if labeled.is_empty() {
        "no pure equilibrium\n".to_string()
    } else {
        labeled
            .iter()
            .map(|p| format!("({})\n", p.join(", ")))
            .collect()
    };
    Section::new("pure-nash", json!({ "profiles": labeled }), text)
}

fn nash_periodicity_section(
    game: &Game,
    profiles: &[Vec<usize>],
    policy: TiePolicy,
) -> Result<Section, CliError> {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for p in profiles {
        let r = nash_periodicity_check(game, (p[0], p[1]), policy)
            .map_err(CliError::core("nash periodicity"))?;
        let conclusion = match r.conclusion {
            NashPeriodicity::PeriodicN1 => "periodic-n1",
            NashPeriodicity::NotPeriodicViaDirectMaps => "not-periodic-via-direct-maps",
        };
        checks.push(json!({
            "profile": profile_labels(game, p),
            "conclusion": conclusion,
            "forward_holds": r.forward_holds,
            "backward_holds": r.backward_holds,
        }));
        rows.push(vec![
            format!("({})", profile_labels(game, p).join(", ")),
            match r.conclusion {
                NashPeriodicity::PeriodicN1 => "periodic with n = 1".to_string(),
                NashPeriodicity::NotPeriodicViaDirectMaps => format!(
                    "not periodic via the direct maps (forward {}, backward {})",
                    r.forward_holds, r.backward_holds
                ),
            },
        ]);
    }
    let text = if rows.is_empty() {
        "no pure equilibrium to check\n".to_string()
    } else {
        align_rows(&rows)
    };
    Ok(Section::new(
        "nash-periodicity",
        json!({ "checks": checks }),
        text,
    ))
}

fn survivors_value(game: &Game, sets: &[Vec<usize>]) -> Vec<Value> {
    sets.iter()
        .enumerate()
        .map(|(p, actions)| {
            json!({
                "player": game.player_label(p),
                "actions": actions
                    .iter()
                    .map(|&a| game.action_label(p, a).to_string())
                    .collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn rationalizability_section(game: &Game) -> Section {
    let r = point_rationalizable(game);
    let d = iterated_strict_dominance(game);
    let rv = survivors_value(game, &r.actions);
    let dv = survivors_value(game, &d.actions);
    let fmt = |v: &[Value]| {
        v.iter()
            .map(|s| {
                format!(
                    "{}: {{{}}}",
                    s["player"].as_str().unwrap(),
                    s["actions"]
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|a| a.as_str().unwrap())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    let text = format!(
        "point-rationalizable  {}\nstrict-dominance kept  {}\n",
        fmt(&rv),
        fmt(&dv)
    );
    Section::new(
        "rationalizability",
        json!({ "point_rationalizable": rv, "iterated_strict_dominance": dv }),
        text,
    )
}

fn mixed_nash_section(game: &Game, m: &MixedNash2x2) -> Section {
    let corner = m
        .corner_from
        .map(|(i, j)| json!([game.action_label(0, i), game.action_label(1, j)]))
        .unwrap_or(Value::Null);
    let alternatives: Vec<Value> = m
        .corner_alternatives
        .iter()
        .map(|&(i, j)| json!([game.action_label(0, i), game.action_label(1, j)]))
        .collect();
    let machine = json!({
        "p": rstr(m.profile.p()),
        "q": rstr(m.profile.q()),
        "interior": m.interior,
        "payoff_a": rstr(&m.payoff_a),
        "payoff_b": rstr(&m.payoff_b),
        "corner_from": corner,
        "corner_alternatives": alternatives,
    });
    let mut text = format!(
        "p = {}, q = {} ({})\npayoffs: A {}, B {}\n",
        rstr(m.profile.p()),
        rstr(m.profile.q()),
        if m.interior { "interior" } else { "pure corner fallback" },
        rstr(&m.payoff_a),
        rstr(&m.payoff_b),
    );
    if let Some((i, j)) = m.corner_from {
        text.push_str(&format!(
            "corner from pure equilibrium ({}, {})\n",
            game.action_label(0, i),
            game.action_label(1, j)
        ));
    }
    Section::new("mixed-nash", machine, text)
}

fn side_mode_str(m: SideMode) -> &'static str {
    match m {
        SideMode::Interior => "interior",
        SideMode::CornerMonotone => "corner-monotone",
    }
}

fn mixed_periodic_section(game: &Game, r: &MixedPeriodic2x2) -> Section {
    let _ = game;
    let machine = json!({
        "mode_a": side_mode_str(r.mode_a),
        "mode_b": side_mode_str(r.mode_b),
        "p": opt_rstr(&r.p_p),
        "q": opt_rstr(&r.q_p),
        "payoff_a": opt_rstr(&r.payoff_a),
        "payoff_b": opt_rstr(&r.payoff_b),
        "robust_a": r.robust_a,
        "robust_b": r.robust_b,
        "slope_a": affine_value(&r.slope_a),
        "slope_b": affine_value(&r.slope_b),
    });
    let show = |v: &Option<Rational>| {
        v.as_ref()
            .map(rstr)
            .unwrap_or_else(|| "unresolved".to_string())
    };
    let text = format!(
        "modes: A {}, B {}\np = {}, q = {}\npayoffs: A {}, B {}\nopponent-independent: A {}, B {}\ndU_A/dq = {}, dU_B/dp = {}\n",
        side_mode_str(r.mode_a),
        side_mode_str(r.mode_b),
        show(&r.p_p),
        show(&r.q_p),
        show(&r.payoff_a),
        show(&r.payoff_b),
        r.robust_a,
        r.robust_b,
        affine_str(&r.slope_a, "p"),
        affine_str(&r.slope_b, "q"),
    );
    Section::new("mixed-periodic", machine, text)
}

fn class_label_str(l: GameClassLabel) -> &'static str {
    match l {
        GameClassLabel::Type1 => "type1",
        GameClassLabel::Type2 => "type2",
        GameClassLabel::CollectiveAction => "collective-action",
        GameClassLabel::Other => "other",
    }
}

fn comparison_value(c: &PlayerComparison) -> Value {
    json!({
        "nash_payoff": rstr(&c.nash_payoff),
        "periodic_payoff": opt_rstr(&c.periodic_payoff),
        "difference": opt_rstr(&c.difference),
        "sign": c.sign.map(|o| match o {
            Ordering::Greater => "greater",
            Ordering::Equal => "equal",
            Ordering::Less => "less",
        }),
        "nash_line": affine_value(&c.nash_line),
        "periodic_line": c.periodic_line.as_ref().map(affine_value).unwrap_or(Value::Null),
    })
}

fn coco_section(game: &Game) -> Section {
    let s = match coco_solution(game) {
        Ok(s) => s,
        Err(e) => return Section::skipped("coco", e.to_string()),
    };
    let matrix = |g: &Game, player: usize| -> Vec<Vec<String>> {
        (0..2)
            .map(|i| (0..2).map(|j| rstr(g.u(player, i, j))).collect())
            .collect()
    };
    let decomp = periodic_strategies::coco::coco_decompose(game).expect("2x2 decomposes");
    let attainment = match &s.attainment {
        ZeroSumAttainment::PureSaddle { row, col } => json!({
            "kind": "pure-saddle",
            "row": game.action_label(0, *row),
            "col": game.action_label(1, *col),
        }),
        ZeroSumAttainment::Mixed { p, q } => json!({
            "kind": "mixed",
            "p": rstr(p),
            "q": rstr(q),
        }),
    };
    let machine = json!({
        "team_matrix": matrix(&decomp.team, 0),
        "zero_sum_matrix": matrix(&decomp.zero_sum, 0),
        "team_value": rstr(&s.team_value),
        "team_profile": [
            game.action_label(0, s.team_profile.0),
            game.action_label(1, s.team_profile.1),
        ],
        "team_tie_broken": s.team_tie_broken,
        "zero_sum_value": rstr(&s.zero_sum_value),
        "attainment": attainment,
        "value_a": rstr(&s.value_a),
        "value_b": rstr(&s.value_b),
        "side_payment": rstr(&s.side_payment),
    });
    let text = format!(
        "team value {} at ({}, {}){}\nzero-sum value {}\nvalues: A {}, B {}\nside payment to A {}\n",
        rstr(&s.team_value),
        game.action_label(0, s.team_profile.0),
        game.action_label(1, s.team_profile.1),
        if s.team_tie_broken { " (tie broken by rank)" } else { "" },
        rstr(&s.zero_sum_value),
        rstr(&s.value_a),
        rstr(&s.value_b),
        rstr(&s.side_payment),
    );
    Section::new("coco", machine, text)
}

/// Rotation-invariant key for cycle deduplication.
fn cycle_key(cycle: &[Node]) -> Vec<Node> {
    if cycle.is_empty() {
        return Vec::new();
    }
    (0..cycle.len())
        .map(|r| {
            let mut rot: Vec<Node> = cycle[r..].to_vec();
            rot.extend_from_slice(&cycle[..r]);
            rot
        })
        .min()
        .expect("nonempty cycle")
}

fn epistemic_section(
    game: &Game,
    scan: &PeriodicityReport,
    nash_profiles: &[Vec<usize>],
) -> Section {
    let mut seen = std::collections::BTreeSet::new();
    let mut cycles: Vec<(Vec<Node>, &'static str)> = Vec::new();
    for e in &scan.entries {
        if let Verdict::Periodic { cycle, .. } = &e.verdict {
            if !cycle.is_empty() && seen.insert(cycle_key(cycle)) {
                cycles.push((cycle.clone(), "map-scan"));
            }
        }
    }
    for p in nash_profiles {
        let cycle = vec![Node::new(0, p[0]), Node::new(1, p[1])];
        if seen.insert(cycle_key(&cycle)) {
            cycles.push((cycle, "pure-nash"));
        }
    }
    let mut entries = Vec::new();
    let mut text = String::new();
    for (cycle, source) in &cycles {
        let cycle_str = format_nodes(game, cycle);
        match build_epistemic_model(game, cycle) {
            Ok(model) => {
                let types: Vec<Value> = model
                    .types
                    .iter()
                    .map(|t| {
                        json!({
                            "label": t.label,
                            "player": game.player_label(t.player),
                            "action": game.action_label(t.player, t.action),
                            "believes": model.types[t.believes].label,
                        })
                    })
                    .collect();
                entries.push(json!({
                    "cycle": cycle_str,
                    "source": source,
                    "justified": true,
                    "type_count": model.types.len(),
                    "types": types,
                }));
                text.push_str(&format!(
                    "cycle {cycle_str} ({source}): justified by {} point-belief types\n",
                    model.types.len()
                ));
                for t in &model.types {
                    text.push_str(&format!(
                        "  {} plays {} believing {}\n",
                        t.label,
                        game.action_label(t.player, t.action),
                        model.types[t.believes].label
                    ));
                }
            }
            Err(CoreError::NotRationalizableCycle(reason)) => {
                entries.push(json!({
                    "cycle": cycle_str,
                    "source": source,
                    "justified": false,
                    "reason": reason,
                }));
                text.push_str(&format!("cycle {cycle_str} ({source}): not justified; {reason}\n"));
            }
            Err(e) => {
                entries.push(json!({
                    "cycle": cycle_str,
                    "source": source,
                    "justified": false,
                    "reason": e.to_string(),
                }));
                text.push_str(&format!("cycle {cycle_str} ({source}): {e}\n"));
            }
        }
    }
    if entries.is_empty() {
        text.push_str("no cycles to justify\n");
    }
    Section::new("epistemic", json!({ "cycles": entries }), text)
}

pub fn analyze_strategic_game(
    game: &Game,
    title: &str,
    errata: &[Erratum],
    opts: &AnalyzeOptions,
) -> Result<Report, CliError> {
    let witnesses = validate_nondegenerate(game);
    if opts.policy == TiePolicy::Strict && !witnesses.is_empty() {
        return Err(CliError::Degenerate {
            stage: "periodicity",
            witnesses: witnesses.iter().map(|w| game.describe_witness(w)).collect(),
        });
    }
    let mut report = Report::new(title);
    report.push(game_section(game));
    report.push(degeneracy_section(game, opts.policy));

    let two_player = game.num_players() == 2;
    let scan = if two_player {
        report.push(phi_section_2p(game, opts.policy)?);
        periodic_set_2p(game, opts.policy).map_err(CliError::core("periodicity"))?
    } else {
        report.push(phi_section_np(game, opts.policy)?);
        periodic_graph_np(game, opts.policy, opts.max_cycle_len)
            .map_err(CliError::core("periodicity"))?
    };
    report.push(periodicity_section(game, &scan, opts.max_cycle_len));

    let nash = pure_nash(game);
    report.push(pure_nash_section(game, &nash));
    if two_player {
        report.push(nash_periodicity_section(game, &nash, opts.policy)?);
    } else {
        report.push(Section::skipped(
            "nash-periodicity",
            "direct-map equilibrium check needs a two player game",
        ));
    }
    report.push(rationalizability_section(game));

    let is_2x2 = two_player && game.num_actions(0) == 2 && game.num_actions(1) == 2;
    if is_2x2 {
        let mixed = mixed_nash_2x2(game).map_err(CliError::core("mixed equilibrium"))?;
        report.push(mixed_nash_section(game, &mixed));
        match mixed_periodic_2x2(game) {
            Ok(per) => {
                report.push(mixed_periodic_section(game, &per));
                let class = classify_2x2(game, &mixed, &per)
                    .map_err(CliError::core("classification"))?;
                report.push(Section::new(
                    "classification",
                    json!({
                        "label": class_label_str(class.label),
                        "type1_payoff_identity": class.type1_payoff_identity,
                        "type2_payoff_identity": class.type2_payoff_identity,
                        "probability_relation": class.probability_relation,
                        "both_corner": class.both_corner,
                        "periodic_dominates": class.periodic_dominates,
                    }),
                    format!(
                        "class {}\nprobability relation holds: {}\nperiodic payoffs dominate equilibrium payoffs: {}\n",
                        class_label_str(class.label),
                        class
                            .probability_relation
                            .map(|b| b.to_string())
                            .unwrap_or_else(|| "not applicable".into()),
                        class
                            .periodic_dominates
                            .map(|b| b.to_string())
                            .unwrap_or_else(|| "not applicable".into()),
                    ),
                ));
                let cmp = payoff_comparison_2x2(game, &mixed, &per)
                    .map_err(CliError::core("payoff comparison"))?;
                let text = format!(
                    "A: equilibrium {} vs periodic {}\nB: equilibrium {} vs periodic {}\nU_A(p_N, q) = {}\nU_B(p, q_N) = {}\n",
                    rstr(&cmp.a.nash_payoff),
                    cmp.a.periodic_payoff.as_ref().map(rstr).unwrap_or_else(|| "unresolved".into()),
                    rstr(&cmp.b.nash_payoff),
                    cmp.b.periodic_payoff.as_ref().map(rstr).unwrap_or_else(|| "unresolved".into()),
                    affine_str(&cmp.a.nash_line, "q"),
                    affine_str(&cmp.b.nash_line, "p"),
                );
                report.push(Section::new(
                    "payoff-comparison",
                    json!({ "a": comparison_value(&cmp.a), "b": comparison_value(&cmp.b) }),
                    text,
                ));
            }
            Err(CoreError::ConflictError {
                variable,
                first,
                second,
            }) => {
                let reason = format!(
                    "the two sides assign {variable} incompatible values {first} and {second}"
                );
                report.push(Section::skipped("mixed-periodic", reason.clone()));
                report.push(Section::skipped("classification", reason.clone()));
                report.push(Section::skipped("payoff-comparison", reason));
            }
            Err(e) => return Err(CliError::Core {
                stage: "mixed periodic",
                source: e,
            }),
        }
        report.push(coco_section(game));
    } else {
        for name in [
            "mixed-nash",
            "mixed-periodic",
            "classification",
            "payoff-comparison",
            "coco",
        ] {
            report.push(Section::skipped(name, "needs a 2x2 game"));
        }
    }

    if two_player {
        report.push(epistemic_section(game, &scan, &nash));
    } else {
        report.push(Section::skipped(
            "epistemic",
            "cycle justification needs a two player game",
        ));
    }
    if let Some(s) = errata_section(errata) {
        report.push(s);
    }
    Ok(report)
}

fn transform_kind_name(kind: TransformKind) -> &'static str {
    match kind {
        TransformKind::ExAnte => "ex-ante",
        TransformKind::InterimIndependent => "interim-independent",
        TransformKind::InterimCorrelated => "interim-correlated",
    }
}

fn transform_section(
    bg: &BayesianGame,
    kind: TransformKind,
    opts: &AnalyzeOptions,
) -> Result<Section, CliError> {
    let run = bayes_periodicity(bg, kind, opts.policy);
    let name = format!("transform-{}", transform_kind_name(kind));
    let r = match run {
        Ok(r) => r,
        Err(CoreError::DegenerateGame(ws)) => {
            return Err(CliError::Degenerate {
                stage: "bayesian transform periodicity",
                witnesses: ws.iter().map(|w| format!("{w:?}")).collect(),
            })
        }
        Err(e) => return Ok(Section::skipped(name, e.to_string())),
    };
    let game = &r.game;
    let periodic_set: Vec<Value> = (0..game.num_players())
        .map(|p| {
            let actions: Vec<String> = r
                .report
                .entries
                .iter()
                .filter(|e| e.node.player == p && matches!(e.verdict, Verdict::Periodic { .. }))
                .map(|e| node_str(game, &e.node))
                .collect();
            json!({ "player": game.player_label(p), "actions": actions })
        })
        .collect();
    let entries: Vec<Value> = r
        .report
        .entries
        .iter()
        .map(|e| match &e.verdict {
            Verdict::Periodic { n, cycle } => json!({
                "action": node_str(game, &e.node),
                "player": game.player_label(e.node.player),
                "verdict": "periodic",
                "n": n,
                "cycle": format_nodes(game, cycle),
            }),
            _ => json!({
                "action": node_str(game, &e.node),
                "player": game.player_label(e.node.player),
                "verdict": "non-periodic",
                "trace": format_nodes(game, &e.trace),
            }),
        })
        .collect();
    let machine = json!({
        "players": game.player_labels(),
        "actions": (0..game.num_players())
            .map(|p| game.action_labels(p).to_vec())
            .collect::<Vec<_>>(),
        "payoffs": tensor_value(game),
        "periodicity": entries,
        "periodic_set": periodic_set,
    });
    let mut text = payoff_matrix_text(game);
    for set in &periodic_set {
        text.push_str(&format!(
            "periodic set of {}: {{{}}}\n",
            set["player"].as_str().unwrap(),
            set["actions"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_str().unwrap())
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }
    Ok(Section::new(name, machine, text))
}

fn bayes_game_section(bg: &BayesianGame) -> Section {
    let machine = json!({
        "players": bg.player_labels(),
        "actions": (0..bg.num_players())
            .map(|p| bg.action_labels(p).to_vec())
            .collect::<Vec<_>>(),
        "states": bg.state_labels(),
        "types": (0..bg.num_players())
            .map(|p| bg.type_labels(p).to_vec())
            .collect::<Vec<_>>(),
    });
    let mut rows = vec![vec![
        "players".to_string(),
        bg.player_labels().join(", "),
    ]];
    rows.push(vec!["states".to_string(), bg.state_labels().join(", ")]);
    for p in 0..bg.num_players() {
        rows.push(vec![
            format!("types of {}", bg.player_labels()[p]),
            bg.type_labels(p).join(", "),
        ]);
    }
    Section::new("game", machine, align_rows(&rows))
}

pub fn analyze_bayesian_game(
    bg: &BayesianGame,
    title: &str,
    errata: &[Erratum],
    opts: &AnalyzeOptions,
) -> Result<Report, CliError> {
    let mut report = Report::new(title);
    report.push(bayes_game_section(bg));
    for kind in [
        TransformKind::ExAnte,
        TransformKind::InterimIndependent,
        TransformKind::InterimCorrelated,
    ] {
        report.push(transform_section(bg, kind, opts)?);
    }
    if let Some(s) = errata_section(errata) {
        report.push(s);
    }
    Ok(report)
}

fn locus_value(l: &Locus) -> Value {
    match l {
        Locus::Point { x, y } => json!({ "kind": "point", "x": x, "y": y }),
        Locus::Line { coef_x, coef_y, rhs } => json!({
            "kind": "line",
            "coef_x": coef_x,
            "coef_y": coef_y,
            "rhs": rhs,
        }),
    }
}

fn curvature_str(c: CurvatureClass) -> &'static str {
    match c {
        CurvatureClass::Max => "max",
        CurvatureClass::Min => "min",
        CurvatureClass::Saddle => "saddle",
        CurvatureClass::Indeterminate => "indeterminate",
    }
}

fn quadratic_solution_section(name: &str, sol: &QuadraticSolution) -> Section {
    let machine = json!({
        "locus": locus_value(&sol.locus),
        "determinant": sol.determinant,
        "residual_1": sol.residual_1,
        "residual_2": sol.residual_2,
        "discriminant_1": sol.discriminant_1,
        "discriminant_2": sol.discriminant_2,
        "class_1": curvature_str(sol.class_1),
        "class_2": curvature_str(sol.class_2),
    });
    let locus_text = match sol.locus {
        Locus::Point { x, y } => format!("point ({x}, {y})"),
        Locus::Line { coef_x, coef_y, rhs } => {
            format!("line {coef_x}*x + {coef_y}*y = {rhs}")
        }
    };
    let text = format!(
        "{locus_text}\ndeterminant {}\nsurface classes: player 1 {}, player 2 {}\n",
        sol.determinant,
        curvature_str(sol.class_1),
        curvature_str(sol.class_2),
    );
    Section::new(name, machine, text)
}

fn poly_str(c: &[f64; 5]) -> String {
    let mut out = String::new();
    for (coeff, var) in c.iter().zip(["x", "y", "xy", "x^2", "y^2"]) {
        if *coeff == 0.0 {
            continue;
        }
        if out.is_empty() {
            out.push_str(&format!("{coeff}{var}"));
        } else if *coeff < 0.0 {
            out.push_str(&format!(" - {}{var}", -coeff));
        } else {
            out.push_str(&format!(" + {coeff}{var}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn analyze_quadratic_game(game: &QuadraticGame, title: &str, errata: &[Erratum]) -> Report {
    let mut report = Report::new(title);
    report.push(Section::new(
        "game",
        json!({
            "a": game.a.to_vec(),
            "b": game.b.to_vec(),
            "warnings": game.concavity_warnings(),
        }),
        format!(
            "u1 = {}\nu2 = {}\n{}",
            poly_str(&game.a),
            poly_str(&game.b),
            game.concavity_warnings()
                .iter()
                .map(|w| format!("warning: {w}\n"))
                .collect::<String>(),
        ),
    ));
    match solve_nash_quadratic(game) {
        Ok(sol) => report.push(quadratic_solution_section("equilibrium", &sol)),
        Err(e) => report.push(Section::skipped("equilibrium", e.to_string())),
    }
    match solve_periodic_quadratic(game) {
        Ok(sol) => report.push(quadratic_solution_section("periodic", &sol)),
        Err(e) => report.push(Section::skipped("periodic", e.to_string())),
    }
    if let Some(s) = errata_section(errata) {
        report.push(s);
    }
    report
}

/// Applies a Bayesian transform and wraps the result as an emittable file,
/// optionally with its full analysis.
pub fn transform_file(
    file: &GameFile,
    kind: TransformKind,
    then_analyze: bool,
    opts: &AnalyzeOptions,
) -> Result<(StrategicFile, Option<Report>), CliError> {
    let GameFile::Bayesian { file: bfile, game: bg } = file else {
        return Err(CliError::Schema(
            "transform needs a bayesian input file".to_string(),
        ));
    };
    let stage: &'static str = match kind {
        TransformKind::ExAnte => "ex-ante transform",
        TransformKind::InterimIndependent => "interim-independent transform",
        TransformKind::InterimCorrelated => "interim-correlated transform",
    };
    let game = match kind {
        TransformKind::ExAnte => periodic_strategies::bayes::ex_ante_transform(bg),
        TransformKind::InterimIndependent => {
            periodic_strategies::bayes::interim_independent_transform(bg)
        }
        TransformKind::InterimCorrelated => {
            periodic_strategies::bayes::interim_correlated_transform(bg)
        }
    }
    .map_err(CliError::core(stage))?;
    let name = format!(
        "{} ({})",
        bfile.name.as_deref().unwrap_or("bayesian game"),
        transform_kind_name(kind)
    );
    let out = strategic_file_from_game(&game, Some(name.clone()), bfile.notes.clone());
    let analysis = if then_analyze {
        Some(analyze_strategic_game(&game, &name, &[], opts)?)
    } else {
        None
    };
    Ok((out, analysis))
}

/// Preset quadratic analyses reachable from the command line.
pub fn quad_preset_report(
    preset: &str,
    params: &std::collections::BTreeMap<String, f64>,
) -> Result<Report, CliError> {
    let take = |key: &str| -> Result<f64, CliError> {
        params
            .get(key)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("preset {preset} needs parameter {key}")))
    };
    match preset {
        "cournot" => {
            for k in params.keys() {
                if !["P", "A", "B", "M"].contains(&k.as_str()) {
                    return Err(CliError::Usage(format!("unknown parameter {k}")));
                }
            }
            let (p, a, b, m) = (take("P")?, take("A")?, take("B")?, take("M")?);
            let game = preset_cournot(p, a, b, m).map_err(CliError::core("preset"))?;
            let mut report = analyze_quadratic_game(&game, "cournot duopoly", &[]);
            report.push(Section::new(
                "preset",
                json!({ "preset": "cournot", "P": p, "A": a, "B": b, "M": m }),
                format!("price intercept {p}, demand slope {a}, unit cost {b}, own-output curvature {m}\n"),
            ));
            Ok(report)
        }
        "public-good" => {
            for k in params.keys() {
                if !["A", "B", "C"].contains(&k.as_str()) {
                    return Err(CliError::Usage(format!("unknown parameter {k}")));
                }
            }
            let (a, b, c) = (take("A")?, take("B")?, take("C")?);
            let pg = preset_public_good(a, b, c).map_err(CliError::core("preset"))?;
            let mut report = analyze_quadratic_game(&pg.game, "public good", &[]);
            report.push(Section::new(
                "preset",
                json!({
                    "preset": "public-good",
                    "A": a,
                    "B": b,
                    "C": c,
                    "total_nash": pg.s_nash,
                    "total_periodic": pg.s_periodic,
                    "u1_on_nash_line": { "intercept": pg.u1_nash_form.0, "slope_in_y": pg.u1_nash_form.1 },
                    "u1_on_periodic_line": { "intercept": pg.u1_periodic_form.0, "slope_in_y": pg.u1_periodic_form.1 },
                    "intercept_gap": pg.gap,
                }),
                format!(
                    "equilibrium total {}, periodic total {}\nu1 on the equilibrium line: {} + {}*y\nu1 on the periodic line: {} + {}*y\nintercept gap {}\n",
                    pg.s_nash,
                    pg.s_periodic,
                    pg.u1_nash_form.0,
                    pg.u1_nash_form.1,
                    pg.u1_periodic_form.0,
                    pg.u1_periodic_form.1,
                    pg.gap,
                ),
            ));
            Ok(report)
        }
        other => Err(CliError::Usage(format!(
            "unknown preset {other}; expected cournot or public-good"
        ))),
    }
}
