//! Belief hierarchies that justify playing along an alternating cycle.
//!
//! A cycle visits actions of the two players alternately. Each element is
//! justified when it is a weak best response to the action right after it,
//! so a player holding point beliefs along the cycle is rational at every
//! step. The constructed model has one type per cycle element; each type
//! is certain the opponent is the next element's type. Belief hierarchies
//! then run around the cycle forever, which makes every cycle action
//! rationalizable.

use crate::error::Error;
use crate::game::Game;
use crate::periodicity::{format_nodes, Node};

/// One type in the constructed model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicType {
    pub player: usize,
    pub action: usize,
    pub label: String,
    /// Index of the single opponent type this type assigns probability one.
    pub believes: usize,
}

/// Point-belief type model supporting a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpistemicModel {
    pub types: Vec<EpistemicType>,
    pub cycle: Vec<Node>,
}

fn validate_cycle(game: &Game, cycle: &[Node]) -> Result<(), Error> {
    if game.num_players() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "cycle justification needs a two player game, got {} players",
            game.num_players()
        )));
    }
    if cycle.is_empty() {
        return Err(Error::MalformedCycle("cycle is empty".to_string()));
    }
    if !cycle.len().is_multiple_of(2) {
        return Err(Error::MalformedCycle(format!(
            "cycle length {} is odd, so it cannot alternate players and close",
            cycle.len()
        )));
    }
    for (k, node) in cycle.iter().enumerate() {
        if node.player >= 2 {
            return Err(Error::MalformedCycle(format!(
                "element {k} names player {}, which does not exist",
                node.player
            )));
        }
        if node.action >= game.num_actions(node.player) {
            return Err(Error::MalformedCycle(format!(
                "element {k} names action {} of player {}, which does not exist",
                node.action, node.player
            )));
        }
        let next = &cycle[(k + 1) % cycle.len()];
        if next.player == node.player {
            return Err(Error::MalformedCycle(format!(
                "elements {k} and {} belong to the same player",
                (k + 1) % cycle.len()
            )));
        }
    }
    Ok(())
}

/// True when every cycle element is a weak best response to the element
/// after it (wrapping around). This is exactly the condition under which
/// point beliefs along the cycle make each action rational.
pub fn rationalizable_periodic_check(game: &Game, cycle: &[Node]) -> Result<bool, Error> {
    validate_cycle(game, cycle)?;
    for (k, node) in cycle.iter().enumerate() {
        let next = &cycle[(k + 1) % cycle.len()];
        let best = game.best_response_set(node.player, &[next.action]);
        if !best.contains(&node.action) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds the supporting type model, or reports the first element that is
/// not a best response to its successor.
pub fn build_epistemic_model(game: &Game, cycle: &[Node]) -> Result<EpistemicModel, Error> {
    validate_cycle(game, cycle)?;
    for (k, node) in cycle.iter().enumerate() {
        let next = &cycle[(k + 1) % cycle.len()];
        let best = game.best_response_set(node.player, &[next.action]);
        if !best.contains(&node.action) {
            return Err(Error::NotRationalizableCycle(format!(
                "in cycle {}, action {} is not a best response to {}",
                format_nodes(game, cycle),
                game.action_label(node.player, node.action),
                game.action_label(next.player, next.action),
            )));
        }
    }
    let types = cycle
        .iter()
        .enumerate()
        .map(|(k, node)| EpistemicType {
            player: node.player,
            action: node.action,
            label: format!(
                "t{}:{}",
                k + 1,
                game.action_label(node.player, node.action)
            ),
            believes: (k + 1) % cycle.len(),
        })
        .collect();
    Ok(EpistemicModel {
        types,
        cycle: cycle.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodicity::{periodic_set_2p, TiePolicy, Verdict};
    use crate::rational::int;

    fn g2p(rows: Vec<Vec<(i64, i64)>>) -> Game {
        let na = rows.len();
        let nb = rows[0].len();
        Game::two_player(
            (1..=na).map(|i| format!("a{i}")).collect(),
            (1..=nb).map(|i| format!("b{i}")).collect(),
            rows.into_iter()
                .map(|r| r.into_iter().map(|(a, b)| (int(a), int(b))).collect())
                .collect(),
        )
        .unwrap()
    }

    fn four_by_four() -> Game {
        g2p(vec![
            vec![(0, 7), (2, 5), (7, 0), (0, 1)],
            vec![(5, 2), (3, 3), (5, 2), (0, 1)],
            vec![(7, 0), (2, 5), (0, 7), (0, 1)],
            vec![(0, 0), (0, -2), (0, 0), (10, -1)],
        ])
    }

    fn node(player: usize, action: usize) -> Node {
        Node { player, action }
    }

    #[test]
    fn four_cycle_supports_four_types() {
        let g = four_by_four();
        let cycle = [node(0, 0), node(1, 2), node(0, 2), node(1, 0)];
        assert_eq!(rationalizable_periodic_check(&g, &cycle), Ok(true));
        let model = build_epistemic_model(&g, &cycle).unwrap();
        assert_eq!(model.types.len(), 4);
        assert_eq!(model.types[0].label, "t1:a1");
        assert_eq!(model.types[0].believes, 1);
        assert_eq!(model.types[3].believes, 0);
        // Types alternate owners around the cycle.
        for (k, t) in model.types.iter().enumerate() {
            assert_eq!(t.player, k % 2);
        }
    }

    #[test]
    fn cycles_found_by_the_scan_are_justified() {
        let g = four_by_four();
        let report = periodic_set_2p(&g, TiePolicy::FirstIndex).unwrap();
        let mut seen = 0;
        for e in &report.entries {
            if let Verdict::Periodic { cycle, .. } = &e.verdict {
                assert_eq!(rationalizable_periodic_check(&g, cycle), Ok(true));
                let model = build_epistemic_model(&g, cycle).unwrap();
                assert_eq!(model.types.len(), cycle.len());
                seen += 1;
            }
        }
        assert_eq!(seen, 4);
    }

    #[test]
    fn two_cycle_from_mutual_best_responses() {
        let mut rows = vec![
            vec![(0, 7), (2, 5), (7, 0), (0, 1)],
            vec![(5, 2), (3, 3), (5, 2), (0, 1)],
            vec![(7, 0), (2, 5), (0, 7), (0, 1)],
            vec![(0, 0), (0, -2), (0, 0), (10, -1)],
        ];
        rows[1][1] = (7, 7);
        let g = g2p(rows);
        let cycle = [node(0, 1), node(1, 1)];
        let model = build_epistemic_model(&g, &cycle).unwrap();
        assert_eq!(model.types.len(), 2);
        assert_eq!(model.types[0].believes, 1);
        assert_eq!(model.types[1].believes, 0);
    }

    #[test]
    fn zero_sum_four_cycle() {
        let g = g2p(vec![vec![(1, -1), (-1, 1)], vec![(-1, 1), (1, -1)]]);
        let cycle = [node(0, 0), node(1, 0), node(0, 1), node(1, 1)];
        let model = build_epistemic_model(&g, &cycle).unwrap();
        assert_eq!(model.types.len(), 4);
    }

    #[test]
    fn non_best_response_cycle_is_rejected() {
        let g = g2p(vec![vec![(3, 5), (0, 2)], vec![(4, 3), (5, 4)]]);
        let cycle = [node(0, 0), node(1, 0)];
        assert_eq!(rationalizable_periodic_check(&g, &cycle), Ok(false));
        match build_epistemic_model(&g, &cycle) {
            Err(Error::NotRationalizableCycle(msg)) => {
                assert!(msg.contains("a1"), "{msg}");
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn malformed_cycles_are_reported() {
        let g = four_by_four();
        assert!(matches!(
            rationalizable_periodic_check(&g, &[]),
            Err(Error::MalformedCycle(_))
        ));
        assert!(matches!(
            rationalizable_periodic_check(&g, &[node(0, 0)]),
            Err(Error::MalformedCycle(_))
        ));
        assert!(matches!(
            rationalizable_periodic_check(&g, &[node(0, 0), node(0, 1)]),
            Err(Error::MalformedCycle(_))
        ));
        assert!(matches!(
            rationalizable_periodic_check(&g, &[node(0, 0), node(1, 9)]),
            Err(Error::MalformedCycle(_))
        ));
    }
}
