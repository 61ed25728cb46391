//! Converse best-response maps and periodic strategy detection.
//!
//! For two players, `phi_1(x)` is the opponent action that maximizes player
//! 1's own payoff when player 1 holds `x`; `phi_2(y)` is symmetric. An action
//! `x` of player 1 is periodic when some iterate of `Q = phi_2 . phi_1`
//! returns to it; the minimal such iterate count is the periodicity number
//! `n`. With more players each `(player, action)` node maps to one action per
//! opponent, which turns the maps into a directed graph; a node is periodic
//! when it lies on a directed cycle.
//!
//! Argmax ties make the maps set-valued. The tie policy decides whether that
//! is an error (`Strict`) or resolved to the lowest action index
//! (`FirstIndex`, with every broken tie recorded in the result).

use crate::error::Error;
use crate::game::{validate_nondegenerate, DegeneracyWitness, Game};

/// How argmax ties in map construction are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TiePolicy {
    /// Any tie aborts with `Error::DegenerateGame` listing every witness.
    #[default]
    Strict,
    /// Ties resolve to the lowest action index and are flagged.
    FirstIndex,
}

/// One vertex of the periodicity structure: an action owned by a player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub player: usize,
    pub action: usize,
}

impl Node {
    pub fn new(player: usize, action: usize) -> Self {
        Node { player, action }
    }
}

/// Renders a node sequence as `a1->b3->a3` using game labels.
pub fn format_nodes(game: &Game, nodes: &[Node]) -> String {
    let parts: Vec<&str> = nodes
        .iter()
        .map(|n| game.action_label(n.player, n.action))
        .collect();
    parts.join("->")
}

/// Converse best-response tables for a two-player game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMap2p {
    /// `phi1[x]` is player B's action maximizing player A's payoff at `x`.
    pub phi1: Vec<usize>,
    /// `phi2[y]` is player A's action maximizing player B's payoff at `y`.
    pub phi2: Vec<usize>,
    /// Ties broken under `FirstIndex`, empty under `Strict`.
    pub tie_broken: Vec<DegeneracyWitness>,
}

/// Builds both `phi` tables. Under `Strict` any argmax tie anywhere in the
/// game is an error carrying every witness.
pub fn build_phi_2p(game: &Game, policy: TiePolicy) -> Result<PhiMap2p, Error> {
    if game.num_players() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "phi tables need exactly 2 players, got {}",
            game.num_players()
        )));
    }
    let witnesses = validate_nondegenerate(game);
    if policy == TiePolicy::Strict && !witnesses.is_empty() {
        return Err(Error::DegenerateGame(witnesses));
    }
    let mut tables: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (player, table) in tables.iter_mut().enumerate() {
        for action in 0..game.num_actions(player) {
            // Opponent profiles have length 1 in a two-player game, and the
            // argmax list is rank ordered, so the first entry is the lowest
            // tied index.
            let arg = game.conditional_argmax(player, action);
            table.push(arg[0][0]);
        }
    }
    let [phi1, phi2] = tables;
    Ok(PhiMap2p {
        phi1,
        phi2,
        tie_broken: witnesses,
    })
}

/// Classification of one action after the scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The action returns to itself after `n` applications of the composed
    /// map; `cycle` holds the alternating node sequence starting at the
    /// action (closing edge back to the start is implicit).
    Periodic { n: usize, cycle: Vec<Node> },
    /// Iteration never returns to the action.
    NonPeriodic,
    /// Reserved for engines that continue past unresolved ties. The engines
    /// in this module either error out (`Strict`) or resolve ties
    /// (`FirstIndex`), so they never emit it.
    Degenerate,
}

/// Scan result for a single `(player, action)` node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionReport {
    pub node: Node,
    pub verdict: Verdict,
    /// Chain from the action to the first repeated node. For the two-player
    /// engine this is the full alternating walk including the closing node;
    /// for the graph engine it is a shortest path into the periodic set.
    /// Empty when the node starts its own cycle in the graph engine.
    pub trace: Vec<Node>,
    /// Every simple cycle through the node, shortest first, capped by the
    /// engine's cycle-length bound. The two-player composed map is a
    /// function, so at most one cycle exists there.
    pub cycles: Vec<Vec<Node>>,
    /// Length in map-composition steps (edges) of the shortest cycle through
    /// the node, when periodic.
    pub shortest_cycle_len: Option<usize>,
}

/// Full periodicity scan output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicityReport {
    /// One entry per node, players in order, actions in index order.
    pub entries: Vec<ActionReport>,
    /// Ties broken while building the underlying maps.
    pub tie_broken: Vec<DegeneracyWitness>,
}

impl PeriodicityReport {
    pub fn entry(&self, player: usize, action: usize) -> &ActionReport {
        self.entries
            .iter()
            .find(|e| e.node.player == player && e.node.action == action)
            .expect("report covers every node")
    }

    /// Nodes with a `Periodic` verdict, in report order.
    pub fn periodic_nodes(&self) -> Vec<Node> {
        self.entries
            .iter()
            .filter(|e| matches!(e.verdict, Verdict::Periodic { .. }))
            .map(|e| e.node)
            .collect()
    }
}

/// Walks the composed map for every action on both sides of a two-player
/// game. Every chain terminates within the owner's action count, so the
/// walk is total.
pub fn periodic_set_2p(game: &Game, policy: TiePolicy) -> Result<PeriodicityReport, Error> {
    let phi = build_phi_2p(game, policy)?;
    let mut entries = Vec::new();
    for side in 0..2 {
        let (own_map, opp_map) = if side == 0 {
            (&phi.phi1, &phi.phi2)
        } else {
            (&phi.phi2, &phi.phi1)
        };
        for action in 0..game.num_actions(side) {
            entries.push(walk_side(game, side, action, own_map, opp_map));
        }
    }
    Ok(PeriodicityReport {
        entries,
        tie_broken: phi.tie_broken,
    })
}

/// Iterates `Q = opp_map . own_map` from `start` on side `side` and renders
/// the walk as alternating nodes.
fn walk_side(
    game: &Game,
    side: usize,
    start: usize,
    own_map: &[usize],
    opp_map: &[usize],
) -> ActionReport {
    let other = 1 - side;
    let mut seen_at: Vec<Option<usize>> = vec![None; game.num_actions(side)];
    let mut seq: Vec<usize> = Vec::new();
    let mut x = start;
    while seen_at[x].is_none() {
        seen_at[x] = Some(seq.len());
        seq.push(x);
        x = opp_map[own_map[x]];
    }
    let first_repeat = seen_at[x].expect("loop exits on a repeat");
    debug_assert!(seq.len() <= game.num_actions(side));

    let mut trace: Vec<Node> = Vec::with_capacity(2 * seq.len() + 1);
    for &a in &seq {
        trace.push(Node::new(side, a));
        trace.push(Node::new(other, own_map[a]));
    }
    trace.push(Node::new(side, x));

    if first_repeat == 0 {
        let n = seq.len();
        let mut cycle: Vec<Node> = Vec::with_capacity(2 * n);
        for &a in &seq {
            cycle.push(Node::new(side, a));
            cycle.push(Node::new(other, own_map[a]));
        }
        ActionReport {
            node: Node::new(side, start),
            verdict: Verdict::Periodic {
                n,
                cycle: cycle.clone(),
            },
            trace,
            shortest_cycle_len: Some(cycle.len()),
            cycles: vec![cycle],
        }
    } else {
        ActionReport {
            node: Node::new(side, start),
            verdict: Verdict::NonPeriodic,
            trace,
            cycles: Vec::new(),
            shortest_cycle_len: None,
        }
    }
}

/// Converse best-response tables for any player count. For player `i` and
/// action `x`, `map[i][x]` is the joint opponent assignment (player order,
/// `i` skipped) maximizing player `i`'s payoff at `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiMapNp {
    pub map: Vec<Vec<Vec<usize>>>,
    pub tie_broken: Vec<DegeneracyWitness>,
}

impl PhiMapNp {
    /// Action assigned to opponent `j` by player `i`'s map at `x`.
    pub fn phi_ij(&self, i: usize, x: usize, j: usize) -> usize {
        debug_assert_ne!(i, j);
        let slot = if j < i { j } else { j - 1 };
        self.map[i][x][slot]
    }
}

/// Builds the N-player map tables under the given tie policy.
pub fn build_phi_np(game: &Game, policy: TiePolicy) -> Result<PhiMapNp, Error> {
    let witnesses = validate_nondegenerate(game);
    if policy == TiePolicy::Strict && !witnesses.is_empty() {
        return Err(Error::DegenerateGame(witnesses));
    }
    let mut map = Vec::with_capacity(game.num_players());
    for player in 0..game.num_players() {
        let mut rows = Vec::with_capacity(game.num_actions(player));
        for action in 0..game.num_actions(player) {
            let arg = game.conditional_argmax(player, action);
            rows.push(arg[0].clone());
        }
        map.push(rows);
    }
    Ok(PhiMapNp {
        map,
        tie_broken: witnesses,
    })
}

/// Periodicity scan over the map digraph. Nodes are `(player, action)`
/// pairs; each node has one edge per opponent. A node is periodic exactly
/// when it lies on a directed cycle. All simple cycles through a periodic
/// node are enumerated up to `max_cycle_len` edges (default: node count),
/// and `n` counts the owning player's nodes along the shortest cycle.
pub fn periodic_graph_np(
    game: &Game,
    policy: TiePolicy,
    max_cycle_len: Option<usize>,
) -> Result<PeriodicityReport, Error> {
    let phi = build_phi_np(game, policy)?;

    let mut offsets = Vec::with_capacity(game.num_players());
    let mut total = 0usize;
    for p in 0..game.num_players() {
        offsets.push(total);
        total += game.num_actions(p);
    }
    let bound = max_cycle_len.unwrap_or(total);

    let node_of = |id: usize| -> Node {
        let player = match offsets.binary_search(&id) {
            Ok(p) => p,
            Err(p) => p - 1,
        };
        Node::new(player, id - offsets[player])
    };
    let id_of = |n: Node| -> usize { offsets[n.player] + n.action };

    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); total];
    for i in 0..game.num_players() {
        for x in 0..game.num_actions(i) {
            for j in 0..game.num_players() {
                if j != i {
                    succ[id_of(Node::new(i, x))].push(id_of(Node::new(j, phi.phi_ij(i, x, j))));
                }
            }
        }
    }

    let on_cycle = cyclic_nodes(&succ);

    let mut entries = Vec::with_capacity(total);
    for id in 0..total {
        let node = node_of(id);
        if on_cycle[id] {
            let mut cycles = simple_cycles_through(&succ, id, bound);
            cycles.sort_by_key(|c| c.len());
            let (n, shortest_len, node_cycles) = if cycles.is_empty() {
                // Every cycle through the node is longer than the bound.
                (0, None, Vec::new())
            } else {
                let shortest = &cycles[0];
                let n = shortest.iter().filter(|&&m| node_of(m).player == node.player).count();
                let rendered: Vec<Vec<Node>> = cycles
                    .iter()
                    .map(|c| c.iter().map(|&m| node_of(m)).collect())
                    .collect();
                (n, Some(shortest.len()), rendered)
            };
            match shortest_len {
                Some(len) => entries.push(ActionReport {
                    node,
                    verdict: Verdict::Periodic {
                        n,
                        cycle: node_cycles[0].clone(),
                    },
                    trace: Vec::new(),
                    cycles: node_cycles,
                    shortest_cycle_len: Some(len),
                }),
                None => entries.push(ActionReport {
                    node,
                    verdict: Verdict::Periodic {
                        n: 0,
                        cycle: Vec::new(),
                    },
                    trace: Vec::new(),
                    cycles: Vec::new(),
                    shortest_cycle_len: None,
                }),
            }
        } else {
            let trace = path_to_cycle(&succ, id, &on_cycle)
                .into_iter()
                .map(node_of)
                .collect();
            entries.push(ActionReport {
                node,
                verdict: Verdict::NonPeriodic,
                trace,
                cycles: Vec::new(),
                shortest_cycle_len: None,
            });
        }
    }
    entries.sort_by_key(|e| (e.node.player, e.node.action));
    Ok(PeriodicityReport {
        entries,
        tie_broken: phi.tie_broken,
    })
}

/// Marks nodes lying on some directed cycle. Edges never point to the same
/// player, so self loops cannot occur and a node is cyclic exactly when its
/// strongly connected component has two or more members.
fn cyclic_nodes(succ: &[Vec<usize>]) -> Vec<bool> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![usize::MAX; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;
    let mut comp_size: Vec<usize> = Vec::new();

    // Iterative Tarjan; frames carry the next successor slot to visit.
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&(v, slot)) = frames.last() {
            if slot < succ[v].len() {
                frames.last_mut().expect("frame exists").1 += 1;
                let w = succ[v][slot];
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut size = 0;
                    loop {
                        let w = stack.pop().expect("stack holds the component");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    comp_size.push(size);
                    next_comp += 1;
                }
                frames.pop();
                if let Some(&(parent, _)) = frames.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    (0..n).map(|v| comp_size[comp[v]] >= 2).collect()
}

/// All simple cycles that start and end at `start`, as node lists without
/// the closing repeat, each at most `bound` edges long. Successors are
/// explored in id order so the enumeration is deterministic.
fn simple_cycles_through(succ: &[Vec<usize>], start: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut cycles = Vec::new();
    let mut path = vec![start];
    let mut on_path = vec![false; succ.len()];
    on_path[start] = true;
    dfs_cycles(succ, start, start, bound, &mut path, &mut on_path, &mut cycles);
    cycles
}

fn dfs_cycles(
    succ: &[Vec<usize>],
    start: usize,
    v: usize,
    bound: usize,
    path: &mut Vec<usize>,
    on_path: &mut Vec<bool>,
    cycles: &mut Vec<Vec<usize>>,
) {
    for &w in &succ[v] {
        if w == start {
            cycles.push(path.clone());
        } else if !on_path[w] && path.len() < bound {
            path.push(w);
            on_path[w] = true;
            dfs_cycles(succ, start, w, bound, path, on_path, cycles);
            on_path[w] = false;
            path.pop();
        }
    }
}

/// Shortest path (by edges) from `from` to any node marked cyclic,
/// inclusive of both endpoints.
fn path_to_cycle(succ: &[Vec<usize>], from: usize, on_cycle: &[bool]) -> Vec<usize> {
    let mut prev = vec![usize::MAX; succ.len()];
    let mut queue = std::collections::VecDeque::new();
    let mut seen = vec![false; succ.len()];
    queue.push_back(from);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if on_cycle[v] {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            path.reverse();
            return path;
        }
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    // Unreachable for these graphs: every node has out-degree >= 1 on a
    // finite node set, so some cycle is always reachable.
    Vec::new()
}

/// Two-way direct-map verdict for a pure equilibrium profile `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NashPeriodicity {
    /// `phi1(x) = y` and `phi2(y) = x`: the profile is a periodic pair with
    /// periodicity number one.
    PeriodicN1,
    /// The direct check fails; the general scan verdicts say what actually
    /// happens to each action.
    NotPeriodicViaDirectMaps,
}

/// Output of [`nash_periodicity_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NashPeriodicityReport {
    pub conclusion: NashPeriodicity,
    /// Whether `phi1(x) = y` held.
    pub forward_holds: bool,
    /// Whether `phi2(y) = x` held.
    pub backward_holds: bool,
    /// Full-scan report entry for `x`.
    pub action_a: ActionReport,
    /// Full-scan report entry for `y`.
    pub action_b: ActionReport,
}

/// Checks whether a pure Nash profile is periodic with `n = 1` via the
/// direct two-way map test. The caller is responsible for `profile` being a
/// pure equilibrium; this function only decides periodicity.
pub fn nash_periodicity_check(
    game: &Game,
    profile: (usize, usize),
    policy: TiePolicy,
) -> Result<NashPeriodicityReport, Error> {
    let phi = build_phi_2p(game, policy)?;
    let scan = periodic_set_2p(game, policy)?;
    let (x, y) = profile;
    let forward = phi.phi1[x] == y;
    let backward = phi.phi2[y] == x;
    let conclusion = if forward && backward {
        NashPeriodicity::PeriodicN1
    } else {
        NashPeriodicity::NotPeriodicViaDirectMaps
    };
    Ok(NashPeriodicityReport {
        conclusion,
        forward_holds: forward,
        backward_holds: backward,
        action_a: scan.entry(0, x).clone(),
        action_b: scan.entry(1, y).clone(),
    })
}
