//! Periodic points of the 2x2 mixed extension and the induced taxonomy.
//!
//! With `p` the row player's weight on the first action and `q` the column
//! player's, expected payoffs are bilinear:
//! `U_A(p, q) = q (alpha_A p + beta_A) + p (u12 - u22) + u22` with
//! `alpha_A = u11 - u12 - u21 + u22` and `beta_A = u21 - u22` (and the
//! symmetric form for B with `beta_B = v12 - v22`). The opponent's payoff
//! slope is affine in the player's own probability, so the converse
//! best-response analysis has two shapes per side: an interior root of the
//! slope, or a slope with constant sign pushing the opponent variable to a
//! corner.

use crate::error::Error;
use crate::game::{expected_utility_2x2, Game, MixedProfile2x2};
use crate::rational::{format_rational, Rational};
use crate::solutions::MixedNash2x2;
use num_traits::{One, Zero};
use std::cmp::Ordering;

/// Shape of one side's converse best-response analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideMode {
    /// The opponent-slope root lies in [0,1]; the side pins its own
    /// probability there and the opponent becomes indifferent.
    Interior,
    /// The slope never changes sign on [0,1]; the side's payoff pushes the
    /// opponent variable to a corner (or nowhere if the slope is
    /// identically zero).
    CornerMonotone,
}

/// An affine function `slope * t + intercept` of a single probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineForm {
    pub slope: Rational,
    pub intercept: Rational,
}

impl AffineForm {
    pub fn eval(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.intercept
    }
}

/// Result of the mixed periodic analysis of a 2x2 game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedPeriodic2x2 {
    pub mode_a: SideMode,
    pub mode_b: SideMode,
    /// Row player's periodic own-probability; `None` when no analysis
    /// resolves it.
    pub p_p: Option<Rational>,
    /// Column player's periodic own-probability.
    pub q_p: Option<Rational>,
    /// `U_A` at the periodic point, when both coordinates resolve.
    pub payoff_a: Option<Rational>,
    pub payoff_b: Option<Rational>,
    /// `U_A(p_p, q)` does not depend on `q`.
    pub robust_a: bool,
    /// `U_B(p, q_p)` does not depend on `p`.
    pub robust_b: bool,
    /// Derivative `dU_A/dq` as an affine function of `p`.
    pub slope_a: AffineForm,
    /// Derivative `dU_B/dp` as an affine function of `q`.
    pub slope_b: AffineForm,
}

/// What one side's analysis pins down.
enum SideOutcome {
    /// Interior root for the side's own probability.
    OwnProbability(Rational),
    /// Monotone slope drives the opponent's probability to a corner.
    OpponentCorner(Rational),
    /// Identically zero slope pins nothing.
    Nothing,
}

fn analyze_side(alpha: &Rational, beta: &Rational) -> (SideMode, SideOutcome) {
    if !alpha.is_zero() {
        let root = -(beta / alpha);
        if root >= Rational::zero() && root <= Rational::one() {
            return (SideMode::Interior, SideOutcome::OwnProbability(root));
        }
    }
    // No sign change inside [0,1]: both endpoint slopes share a sign.
    let at_zero = beta.clone();
    let at_one = alpha + beta;
    let zero = Rational::zero();
    if at_zero.is_zero() && at_one.is_zero() {
        (SideMode::CornerMonotone, SideOutcome::Nothing)
    } else if at_zero >= zero && at_one >= zero {
        (
            SideMode::CornerMonotone,
            SideOutcome::OpponentCorner(Rational::one()),
        )
    } else if at_zero <= zero && at_one <= zero {
        (
            SideMode::CornerMonotone,
            SideOutcome::OpponentCorner(Rational::zero()),
        )
    } else {
        // A strict sign change forces an interior root, already handled.
        unreachable!("sign change without an interior root")
    }
}

fn merge_assignment(
    variable: &str,
    first: Option<Rational>,
    second: Option<Rational>,
) -> Result<Option<Rational>, Error> {
    match (first, second) {
        (Some(a), Some(b)) if a != b => Err(Error::ConflictError {
            variable: variable.to_string(),
            first: format_rational(&a),
            second: format_rational(&b),
        }),
        (Some(a), _) => Ok(Some(a)),
        (None, b) => Ok(b),
    }
}

/// Finds the periodic point of the mixed extension. Player A's analysis of
/// `dU_A/dq` yields either A's own probability (interior) or B's corner
/// value; player B symmetric. `ConflictError` when the two analyses assign
/// the same variable different values; a variable assigned by neither side
/// stays `None`.
pub fn mixed_periodic_2x2(game: &Game) -> Result<MixedPeriodic2x2, Error> {
    game.require_2x2()?;
    let u = |i: usize, j: usize| game.u(0, i, j);
    let v = |i: usize, j: usize| game.u(1, i, j);
    let alpha_a = u(0, 0) - u(0, 1) - u(1, 0) + u(1, 1);
    let beta_a = u(1, 0) - u(1, 1);
    let alpha_b = v(0, 0) - v(0, 1) - v(1, 0) + v(1, 1);
    let beta_b = v(0, 1) - v(1, 1);

    let (mode_a, out_a) = analyze_side(&alpha_a, &beta_a);
    let (mode_b, out_b) = analyze_side(&alpha_b, &beta_b);

    let (p_from_a, q_from_a) = match out_a {
        SideOutcome::OwnProbability(p) => (Some(p), None),
        SideOutcome::OpponentCorner(q) => (None, Some(q)),
        SideOutcome::Nothing => (None, None),
    };
    let (q_from_b, p_from_b) = match out_b {
        SideOutcome::OwnProbability(q) => (Some(q), None),
        SideOutcome::OpponentCorner(p) => (None, Some(p)),
        SideOutcome::Nothing => (None, None),
    };

    let p_p = merge_assignment("p_p", p_from_a, p_from_b)?;
    let q_p = merge_assignment("q_p", q_from_b, q_from_a)?;

    let (payoff_a, payoff_b) = match (&p_p, &q_p) {
        (Some(p), Some(q)) => {
            let point = MixedProfile2x2::new(p.clone(), q.clone())?;
            (
                Some(expected_utility_2x2(game, &point, 0)?),
                Some(expected_utility_2x2(game, &point, 1)?),
            )
        }
        _ => (None, None),
    };

    let slope_a = AffineForm {
        slope: alpha_a.clone(),
        intercept: beta_a.clone(),
    };
    let slope_b = AffineForm {
        slope: alpha_b.clone(),
        intercept: beta_b.clone(),
    };
    let robust_a = p_p.as_ref().is_some_and(|p| slope_a.eval(p).is_zero());
    let robust_b = q_p.as_ref().is_some_and(|q| slope_b.eval(q).is_zero());

    Ok(MixedPeriodic2x2 {
        mode_a,
        mode_b,
        p_p,
        q_p,
        payoff_a,
        payoff_b,
        robust_a,
        robust_b,
        slope_a,
        slope_b,
    })
}

/// Structural class of a 2x2 game.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameClassLabel {
    /// Anti-diagonal payoff symmetry `u12 = u21` and `v12 = v21`; periodic
    /// probabilities mirror the opponent's equilibrium ones.
    Type1,
    /// Diagonal payoff symmetry `u11 = u22` and `v11 = v22`; periodic
    /// probabilities complement the opponent's equilibrium ones.
    Type2,
    /// Both sides corner-monotone and the periodic point weakly improves
    /// on the equilibrium for both players.
    CollectiveAction,
    Other,
}

/// Class label plus the facts that were checked to justify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameClass2x2 {
    pub label: GameClassLabel,
    /// `u12 = u21` and `v12 = v21`.
    pub type1_payoff_identity: bool,
    /// `u11 = u22` and `v11 = v22`.
    pub type2_payoff_identity: bool,
    /// For `Type1`: `p_p = q*` and `q_p = p*`. For `Type2`:
    /// `p_p = 1 - q*` and `q_p = 1 - p*`. `None` when a needed quantity
    /// is unresolved or the label is not a type class.
    pub probability_relation: Option<bool>,
    /// Both side modes are corner-monotone.
    pub both_corner: bool,
    /// Periodic payoff >= equilibrium payoff for each player, when the
    /// periodic payoffs resolve.
    pub periodic_dominates: Option<bool>,
}

/// Classifies a 2x2 game from its equilibrium and periodic analyses. The
/// anti-diagonal identity is checked first, so games satisfying both
/// identities land in `Type1`.
pub fn classify_2x2(
    game: &Game,
    nash: &MixedNash2x2,
    periodic: &MixedPeriodic2x2,
) -> Result<GameClass2x2, Error> {
    game.require_2x2()?;
    let u = |i: usize, j: usize| game.u(0, i, j);
    let v = |i: usize, j: usize| game.u(1, i, j);
    let type1 = u(0, 1) == u(1, 0) && v(0, 1) == v(1, 0);
    let type2 = u(0, 0) == u(1, 1) && v(0, 0) == v(1, 1);
    let both_corner =
        periodic.mode_a == SideMode::CornerMonotone && periodic.mode_b == SideMode::CornerMonotone;

    let periodic_dominates = match (&periodic.payoff_a, &periodic.payoff_b) {
        (Some(a), Some(b)) => Some(a >= &nash.payoff_a && b >= &nash.payoff_b),
        _ => None,
    };

    let relation_for = |complement: bool| -> Option<bool> {
        let (p_p, q_p) = (periodic.p_p.as_ref()?, periodic.q_p.as_ref()?);
        let p_star = nash.profile.p();
        let q_star = nash.profile.q();
        let one = Rational::one();
        Some(if complement {
            *p_p == &one - q_star && *q_p == &one - p_star
        } else {
            p_p == q_star && q_p == p_star
        })
    };

    let (label, probability_relation) = if type1 {
        (GameClassLabel::Type1, relation_for(false))
    } else if type2 {
        (GameClassLabel::Type2, relation_for(true))
    } else if both_corner && periodic_dominates == Some(true) {
        (GameClassLabel::CollectiveAction, None)
    } else {
        (GameClassLabel::Other, None)
    };

    Ok(GameClass2x2 {
        label,
        type1_payoff_identity: type1,
        type2_payoff_identity: type2,
        probability_relation,
        both_corner,
        periodic_dominates,
    })
}

/// Per-player payoff comparison between equilibrium play and periodic play.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerComparison {
    pub nash_payoff: Rational,
    pub periodic_payoff: Option<Rational>,
    /// Periodic minus equilibrium payoff.
    pub difference: Option<Rational>,
    pub sign: Option<Ordering>,
    /// Own payoff as an affine function of the opponent's probability when
    /// holding the equilibrium probability.
    pub nash_line: AffineForm,
    /// Same line holding the periodic probability, when it resolves.
    pub periodic_line: Option<AffineForm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayoffComparison2x2 {
    pub a: PlayerComparison,
    pub b: PlayerComparison,
}

/// `U_A(p0, q)` as an affine function of `q`.
pub fn payoff_line_a(game: &Game, p0: &Rational) -> Result<AffineForm, Error> {
    game.require_2x2()?;
    let u = |i: usize, j: usize| game.u(0, i, j);
    let alpha = u(0, 0) - u(0, 1) - u(1, 0) + u(1, 1);
    let beta = u(1, 0) - u(1, 1);
    Ok(AffineForm {
        slope: alpha * p0 + beta,
        intercept: p0 * (u(0, 1) - u(1, 1)) + u(1, 1),
    })
}

/// `U_B(p, q0)` as an affine function of `p`.
pub fn payoff_line_b(game: &Game, q0: &Rational) -> Result<AffineForm, Error> {
    game.require_2x2()?;
    let v = |i: usize, j: usize| game.u(1, i, j);
    let alpha = v(0, 0) - v(0, 1) - v(1, 0) + v(1, 1);
    let beta = v(0, 1) - v(1, 1);
    Ok(AffineForm {
        slope: alpha * q0 + beta,
        intercept: q0 * (v(1, 0) - v(1, 1)) + v(1, 1),
    })
}

/// Compares equilibrium play with periodic play per player, including the
/// affine payoff lines at both operating points.
pub fn payoff_comparison_2x2(
    game: &Game,
    nash: &MixedNash2x2,
    periodic: &MixedPeriodic2x2,
) -> Result<PayoffComparison2x2, Error> {
    game.require_2x2()?;
    let diff_a = periodic.payoff_a.as_ref().map(|x| x - &nash.payoff_a);
    let diff_b = periodic.payoff_b.as_ref().map(|x| x - &nash.payoff_b);
    let zero = Rational::zero();
    Ok(PayoffComparison2x2 {
        a: PlayerComparison {
            nash_payoff: nash.payoff_a.clone(),
            periodic_payoff: periodic.payoff_a.clone(),
            sign: diff_a.as_ref().map(|d| d.cmp(&zero)),
            difference: diff_a,
            nash_line: payoff_line_a(game, nash.profile.p())?,
            periodic_line: match &periodic.p_p {
                Some(p) => Some(payoff_line_a(game, p)?),
                None => None,
            },
        },
        b: PlayerComparison {
            nash_payoff: nash.payoff_b.clone(),
            periodic_payoff: periodic.payoff_b.clone(),
            sign: diff_b.as_ref().map(|d| d.cmp(&zero)),
            difference: diff_b,
            nash_line: payoff_line_b(game, nash.profile.q())?,
            periodic_line: match &periodic.q_p {
                Some(q) => Some(payoff_line_b(game, q)?),
                None => None,
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::solutions::mixed_nash_2x2;

    fn g2p(rows: [[(i64, i64); 2]; 2]) -> Game {
        Game::two_player(
            vec!["a1".into(), "a2".into()],
            vec!["b1".into(), "b2".into()],
            rows.iter()
                .map(|r| r.iter().map(|(a, b)| (int(*a), int(*b))).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn interior_periodic_point_with_robust_payoffs() {
        let g = g2p([[(2, 5), (50, 6)], [(3, 10), (2, 5)]]);
        let r = mixed_periodic_2x2(&g).unwrap();
        assert_eq!(r.mode_a, SideMode::Interior);
        assert_eq!(r.mode_b, SideMode::Interior);
        assert_eq!(r.p_p, Some(rat(1, 49)));
        assert_eq!(r.q_p, Some(rat(1, 6)));
        assert_eq!(r.payoff_a, Some(rat(146, 49)));
        assert_eq!(r.payoff_b, Some(rat(35, 6)));
        assert!(r.robust_a);
        assert!(r.robust_b);
    }

    #[test]
    fn corner_monotone_point_both_sides() {
        let g = g2p([[(4, 4), (-1, 6)], [(6, -1), (0, 0)]]);
        let r = mixed_periodic_2x2(&g).unwrap();
        assert_eq!(r.mode_a, SideMode::CornerMonotone);
        assert_eq!(r.mode_b, SideMode::CornerMonotone);
        assert_eq!(r.p_p, Some(int(1)));
        assert_eq!(r.q_p, Some(int(1)));
        assert_eq!(r.payoff_a, Some(int(4)));
        assert_eq!(r.payoff_b, Some(int(4)));
        assert!(!r.robust_a);
        assert!(!r.robust_b);
    }

    #[test]
    fn corner_monotone_downwards() {
        let g = g2p([[(0, 0), (6, 1)], [(1, 6), (3, 3)]]);
        let r = mixed_periodic_2x2(&g).unwrap();
        assert_eq!(r.mode_a, SideMode::CornerMonotone);
        assert_eq!(r.p_p, Some(int(0)));
        assert_eq!(r.q_p, Some(int(0)));
        assert_eq!(r.payoff_a, Some(int(3)));
        assert_eq!(r.payoff_b, Some(int(3)));
        // Slope of U_A in q at p: -4p - 2, strictly negative on [0,1].
        assert_eq!(r.slope_a, AffineForm { slope: int(-4), intercept: int(-2) });
    }

    #[test]
    fn identically_flat_side_resolves_nothing() {
        // Player A's payoff ignores B entirely, so A's analysis pins no
        // variable and p_p stays unresolved.
        let g = g2p([[(1, 3), (1, 0)], [(0, 1), (0, 2)]]);
        let r = mixed_periodic_2x2(&g).unwrap();
        assert_eq!(r.mode_a, SideMode::CornerMonotone);
        assert_eq!(r.p_p, None);
        // B: alpha_B = 3 - 0 - 1 + 2 = 4, beta_B = 0 - 2 = -2, root 1/2.
        assert_eq!(r.mode_b, SideMode::Interior);
        assert_eq!(r.q_p, Some(rat(1, 2)));
        assert_eq!(r.payoff_a, None);
        assert!(!r.robust_a);
    }

    #[test]
    fn classification_by_payoff_identities() {
        let mp = g2p([[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]]);
        let nash = mixed_nash_2x2(&mp).unwrap();
        let per = mixed_periodic_2x2(&mp).unwrap();
        let c = classify_2x2(&mp, &nash, &per).unwrap();
        // Matching pennies satisfies both identities; the anti-diagonal
        // check wins.
        assert_eq!(c.label, GameClassLabel::Type1);
        assert!(c.type1_payoff_identity);
        assert!(c.type2_payoff_identity);
        assert_eq!(c.probability_relation, Some(true));

        let bos = g2p([[(2, 1), (0, 0)], [(0, 0), (1, 2)]]);
        let nash = mixed_nash_2x2(&bos).unwrap();
        let per = mixed_periodic_2x2(&bos).unwrap();
        assert_eq!(per.p_p, Some(rat(1, 3)));
        assert_eq!(per.q_p, Some(rat(2, 3)));
        let c = classify_2x2(&bos, &nash, &per).unwrap();
        assert_eq!(c.label, GameClassLabel::Type1);
        assert_eq!(c.probability_relation, Some(true));

        let tg = g2p([[(2, 5), (50, 6)], [(3, 10), (2, 5)]]);
        let nash = mixed_nash_2x2(&tg).unwrap();
        let per = mixed_periodic_2x2(&tg).unwrap();
        let c = classify_2x2(&tg, &nash, &per).unwrap();
        assert_eq!(c.label, GameClassLabel::Type2);
        assert!(!c.type1_payoff_identity);
        assert_eq!(c.probability_relation, Some(true));
    }

    #[test]
    fn collective_action_requires_corner_modes_and_dominance() {
        let hi = g2p([[(4, 4), (-1, 6)], [(6, -1), (0, 0)]]);
        let nash = mixed_nash_2x2(&hi).unwrap();
        let per = mixed_periodic_2x2(&hi).unwrap();
        let c = classify_2x2(&hi, &nash, &per).unwrap();
        assert_eq!(c.label, GameClassLabel::CollectiveAction);
        assert_eq!(c.periodic_dominates, Some(true));

        let lo = g2p([[(0, 0), (6, 1)], [(1, 6), (3, 3)]]);
        let nash = mixed_nash_2x2(&lo).unwrap();
        let per = mixed_periodic_2x2(&lo).unwrap();
        let c = classify_2x2(&lo, &nash, &per).unwrap();
        assert_eq!(c.label, GameClassLabel::CollectiveAction);
        assert_eq!(nash.payoff_a, rat(3, 2));
        assert_eq!(per.payoff_a, Some(int(3)));
    }

    #[test]
    fn payoff_lines_at_equilibrium_probabilities() {
        let tg = g2p([[(2, 5), (50, 6)], [(3, 10), (2, 5)]]);
        let nash = mixed_nash_2x2(&tg).unwrap();
        let per = mixed_periodic_2x2(&tg).unwrap();
        let cmp = payoff_comparison_2x2(&tg, &nash, &per).unwrap();
        assert_eq!(
            cmp.a.nash_line,
            AffineForm {
                slope: rat(-239, 6),
                intercept: int(42)
            }
        );
        assert_eq!(
            cmp.b.nash_line,
            AffineForm {
                slope: rat(-239, 49),
                intercept: rat(485, 49)
            }
        );
        // Periodic play pays exactly the equilibrium amount here.
        assert_eq!(cmp.a.sign, Some(Ordering::Equal));
        assert_eq!(cmp.b.sign, Some(Ordering::Equal));
        let line = cmp.a.periodic_line.unwrap();
        assert_eq!(line.slope, int(0));
        assert_eq!(line.intercept, rat(146, 49));
    }

    #[test]
    fn comparison_signs_in_collective_action_games() {
        let g = g2p([[(0, 0), (6, 1)], [(1, 6), (3, 3)]]);
        let nash = mixed_nash_2x2(&g).unwrap();
        let per = mixed_periodic_2x2(&g).unwrap();
        let cmp = payoff_comparison_2x2(&g, &nash, &per).unwrap();
        assert_eq!(cmp.a.nash_payoff, rat(3, 2));
        assert_eq!(cmp.a.periodic_payoff, Some(int(3)));
        assert_eq!(cmp.a.difference, Some(rat(3, 2)));
        assert_eq!(cmp.a.sign, Some(Ordering::Greater));
        assert_eq!(cmp.b.sign, Some(Ordering::Greater));
    }
}
