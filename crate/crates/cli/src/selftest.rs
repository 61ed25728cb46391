//! Embedded end-to-end checks: every checked-in fixture is analyzed
//! in-process and the machine report is compared byte for byte against a
//! checked-in golden copy. A seeded randomized pass then cross-checks the
//! aggregation transform against a direct expectation oracle, so two runs
//! with the same seed do the same work.

use periodic_strategies::bayes::{ex_ante_transform, BayesianGame, Beliefs};
use periodic_strategies::periodicity::TiePolicy;
use periodic_strategies::rational::{int, Rational};
use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;

use crate::analyze::{analyze, AnalyzeOptions};
use crate::format::parse_game_file;

struct Case {
    name: &'static str,
    fixture: &'static str,
    golden: &'static str,
    policy: TiePolicy,
}

const CASES: &[Case] = &[
    Case {
        name: "testgame",
        fixture: include_str!("../fixtures/testgame.json"),
        golden: include_str!("../fixtures/golden/testgame.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "game1a",
        fixture: include_str!("../fixtures/game1a.json"),
        golden: include_str!("../fixtures/golden/game1a.json"),
        policy: TiePolicy::FirstIndex,
    },
    Case {
        name: "game1b",
        fixture: include_str!("../fixtures/game1b.json"),
        golden: include_str!("../fixtures/golden/game1b.json"),
        policy: TiePolicy::FirstIndex,
    },
    Case {
        name: "game2",
        fixture: include_str!("../fixtures/game2.json"),
        golden: include_str!("../fixtures/golden/game2.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "prisoners_dilemma",
        fixture: include_str!("../fixtures/prisoners_dilemma.json"),
        golden: include_str!("../fixtures/golden/prisoners_dilemma.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "matching_pennies",
        fixture: include_str!("../fixtures/matching_pennies.json"),
        golden: include_str!("../fixtures/golden/matching_pennies.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "battle_of_sexes",
        fixture: include_str!("../fixtures/battle_of_sexes.json"),
        golden: include_str!("../fixtures/golden/battle_of_sexes.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "collective1",
        fixture: include_str!("../fixtures/collective1.json"),
        golden: include_str!("../fixtures/golden/collective1.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "collective2",
        fixture: include_str!("../fixtures/collective2.json"),
        golden: include_str!("../fixtures/golden/collective2.json"),
        policy: TiePolicy::Strict,
    },
    Case {
        name: "bayes_two_state",
        fixture: include_str!("../fixtures/bayes_two_state.json"),
        golden: include_str!("../fixtures/golden/bayes_two_state.json"),
        policy: TiePolicy::FirstIndex,
    },
    Case {
        name: "bayes_exante_printed",
        fixture: include_str!("../fixtures/bayes_exante_printed.json"),
        golden: include_str!("../fixtures/golden/bayes_exante_printed.json"),
        policy: TiePolicy::FirstIndex,
    },
    Case {
        name: "bayes_three_by_three",
        fixture: include_str!("../fixtures/bayes_three_by_three.json"),
        golden: include_str!("../fixtures/golden/bayes_three_by_three.json"),
        policy: TiePolicy::FirstIndex,
    },
    Case {
        name: "cournot",
        fixture: include_str!("../fixtures/cournot.json"),
        golden: include_str!("../fixtures/golden/cournot.json"),
        policy: TiePolicy::Strict,
    },
];

/// Fixture text by name, for binary-level tests that want the same corpus.
pub fn fixture_source(name: &str) -> Option<(&'static str, TiePolicy)> {
    CASES
        .iter()
        .find(|c| c.name == name)
        .map(|c| (c.fixture, c.policy))
}

pub fn fixture_names() -> Vec<&'static str> {
    CASES.iter().map(|c| c.name).collect()
}

fn run_case(case: &Case) -> Result<String, String> {
    let file = parse_game_file(case.fixture).map_err(|e| format!("parse: {e}"))?;
    let opts = AnalyzeOptions {
        policy: case.policy,
        max_cycle_len: None,
    };
    let report = analyze(&file, &opts).map_err(|e| format!("analyze: {e}"))?;
    Ok(report.to_json())
}

fn first_difference(a: &str, b: &str) -> String {
    for (i, (la, lb)) in a.lines().zip(b.lines()).enumerate() {
        if la != lb {
            return format!("line {}: {la:?} vs {lb:?}", i + 1);
        }
    }
    format!("lengths differ ({} vs {} bytes)", a.len(), b.len())
}

/// Random common-prior games for the transform oracle: two states, type
/// shape [2, 1], 2x2 actions, small integer payoffs. Returns the game and
/// the two state weights that went into the prior.
fn random_bayesian(rng: &mut ChaCha8Rng) -> (BayesianGame, Vec<Rational>) {
    let payoffs: Vec<Vec<Vec<Rational>>> = (0..2)
        .map(|_| {
            (0..4)
                .map(|_| (0..2).map(|_| int(rng.gen_range(-9..=9))).collect())
                .collect()
        })
        .collect();
    // Positive weights on (s0, t1, t2) and (s1, t1x, t2), normalized.
    let w0 = int(rng.gen_range(1..=9));
    let w1 = int(rng.gen_range(1..=9));
    let total = &w0 + &w1;
    let weights = vec![w0 / &total, w1 / &total];
    let prior = vec![weights[0].clone(), int(0), int(0), weights[1].clone()];
    let game = BayesianGame::new(
        vec!["P1".into(), "P2".into()],
        vec![vec!["U".into(), "D".into()], vec!["L".into(), "R".into()]],
        vec!["s0".into(), "s1".into()],
        vec![vec!["t1".into(), "t1x".into()], vec!["t2".into()]],
        Beliefs::CommonPrior(prior),
        payoffs,
    )
    .expect("random game is well formed");
    (game, weights)
}

/// Direct expectation for a strategy pair of the aggregated game: strategy
/// `sa` maps P1's types (t1, t1x) to actions, `y` is P2's action.
fn oracle_cell(bg: &BayesianGame, prior: &[Rational], sa: (usize, usize), y: usize, player: usize) -> Rational {
    let mut total = int(0);
    for (state, weight) in prior.iter().enumerate() {
        // Type profile rank 0 = (t1, t2), rank 1 = (t1x, t2).
        let (x, w) = if state == 0 {
            (sa.0, weight)
        } else {
            (sa.1, weight)
        };
        total += w * bg.state_payoff(state, &[x, y], player);
    }
    total
}

fn transform_oracle_check(seed: u64, rounds: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for round in 0..rounds {
        let (bg, prior) = random_bayesian(&mut rng);
        let agg = ex_ante_transform(&bg).map_err(|e| format!("round {round}: {e}"))?;
        for (rank, sa) in [(0usize, (0, 0)), (1, (0, 1)), (2, (1, 0)), (3, (1, 1))] {
            for y in 0..2 {
                for player in 0..2 {
                    let got = agg.payoff(&[rank, y], player);
                    let want = oracle_cell(&bg, &prior, sa, y, player);
                    if *got != want {
                        return Err(format!(
                            "round {round}: aggregated cell ({rank}, {y}) player {player} differs"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Runs every embedded check, printing one PASS or FAIL line each.
/// Returns the number of failures.
pub fn run(seed: u64) -> usize {
    let mut failures = 0;
    for case in CASES {
        match run_case(case) {
            Ok(json) if json == case.golden => {
                println!("PASS selftest fixture {}", case.name);
            }
            Ok(json) => {
                failures += 1;
                println!(
                    "FAIL selftest fixture {}: report differs from golden at {}",
                    case.name,
                    first_difference(&json, case.golden)
                );
            }
            Err(e) => {
                failures += 1;
                println!("FAIL selftest fixture {}: {e}", case.name);
            }
        }
    }

    // Identical inputs must give byte-identical reports.
    let stable = CASES.iter().all(|c| run_case(c).ok() == run_case(c).ok());
    if stable {
        println!("PASS selftest determinism (double run is byte-identical)");
    } else {
        failures += 1;
        println!("FAIL selftest determinism: repeated runs differ");
    }

    match transform_oracle_check(seed, 100) {
        Ok(()) => println!(
            "PASS selftest aggregation oracle (100 random games, seed {seed})"
        ),
        Err(e) => {
            failures += 1;
            println!("FAIL selftest aggregation oracle: {e}");
        }
    }
    failures
}
