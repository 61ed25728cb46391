//! Closed-form equilibrium and periodic points for quadratic payoffs on
//! continuous strategies.
//!
//! Payoffs are `u1(x, y) = a1 x + a2 y + a3 x y + a4 x^2 + a5 y^2` and the
//! same shape with `b` coefficients for player 2 (player 1 controls `x`,
//! player 2 controls `y`). The equilibrium point solves the own-variable
//! first order conditions, the periodic point solves the cross conditions
//! (each player maximizing the opponent's payoff in the opponent's
//! variable). Both are linear 2x2 systems; a vanished determinant with
//! proportional rows yields a line of solutions instead of a point.
//!
//! This module works in `f64`. Every tolerance is a named constant below.

use crate::error::Error;

/// Relative tolerance deciding when a determinant counts as zero.
pub const DET_TOL: f64 = 1e-12;
/// Maximum accepted relative residual of a first order condition.
pub const FOC_RESIDUAL_TOL: f64 = 1e-9;
/// Central difference step for gradient cross-checks.
pub const GRADIENT_FD_STEP: f64 = 1e-6;
/// Maximum accepted relative disagreement between analytic and finite
/// difference gradients.
pub const GRADIENT_REL_TOL: f64 = 1e-5;
/// Smallest determinant magnitude admitted when generating random
/// coefficient sets for testing.
pub const MIN_RANDOM_DET: f64 = 1e-6;

/// Coefficients of both players' quadratic payoffs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticGame {
    pub a: [f64; 5],
    pub b: [f64; 5],
}

impl QuadraticGame {
    pub fn new(a: [f64; 5], b: [f64; 5]) -> Result<Self, Error> {
        if a.iter().chain(b.iter()).any(|c| !c.is_finite()) {
            return Err(Error::DimensionMismatch(
                "quadratic coefficients must be finite".to_string(),
            ));
        }
        Ok(QuadraticGame { a, b })
    }

    pub fn u1(&self, x: f64, y: f64) -> f64 {
        let [a1, a2, a3, a4, a5] = self.a;
        a1 * x + a2 * y + a3 * x * y + a4 * x * x + a5 * y * y
    }

    pub fn u2(&self, x: f64, y: f64) -> f64 {
        let [b1, b2, b3, b4, b5] = self.b;
        b1 * x + b2 * y + b3 * x * y + b4 * x * x + b5 * y * y
    }

    /// Analytic gradient of `u1`.
    pub fn grad_u1(&self, x: f64, y: f64) -> (f64, f64) {
        let [a1, a2, a3, a4, a5] = self.a;
        (a1 + a3 * y + 2.0 * a4 * x, a2 + a3 * x + 2.0 * a5 * y)
    }

    /// Analytic gradient of `u2`.
    pub fn grad_u2(&self, x: f64, y: f64) -> (f64, f64) {
        let [b1, b2, b3, b4, b5] = self.b;
        (b1 + b3 * y + 2.0 * b4 * x, b2 + b3 * x + 2.0 * b5 * y)
    }

    /// Central-difference gradient of `u1` with step [`GRADIENT_FD_STEP`].
    pub fn grad_u1_fd(&self, x: f64, y: f64) -> (f64, f64) {
        let h = GRADIENT_FD_STEP;
        (
            (self.u1(x + h, y) - self.u1(x - h, y)) / (2.0 * h),
            (self.u1(x, y + h) - self.u1(x, y - h)) / (2.0 * h),
        )
    }

    pub fn grad_u2_fd(&self, x: f64, y: f64) -> (f64, f64) {
        let h = GRADIENT_FD_STEP;
        (
            (self.u2(x + h, y) - self.u2(x - h, y)) / (2.0 * h),
            (self.u2(x, y + h) - self.u2(x, y - h)) / (2.0 * h),
        )
    }

    /// Opponent-curvature warnings: the periodic analysis maximizes `u1` in
    /// `y` and `u2` in `x`, which needs `a5 <= 0` and `b5 <= 0` for
    /// well-posed maxima. Violations warn rather than fail.
    pub fn concavity_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.a[4] > 0.0 {
            w.push(format!("a5 = {} is positive", self.a[4]));
        }
        if self.b[4] > 0.0 {
            w.push(format!("b5 = {} is positive", self.b[4]));
        }
        w
    }
}

/// Solution locus of a linear first order condition system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Locus {
    Point { x: f64, y: f64 },
    /// All `(x, y)` with `coef_x * x + coef_y * y = rhs`. Zero coefficients
    /// with zero rhs mean the whole plane solves the system.
    Line { coef_x: f64, coef_y: f64, rhs: f64 },
}

/// Joint curvature classification of one player's payoff surface from its
/// Hessian determinant and leading coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureClass {
    Max,
    Min,
    Saddle,
    Indeterminate,
}

fn classify(discriminant: f64, leading: f64) -> CurvatureClass {
    if discriminant > 0.0 {
        if leading < 0.0 {
            CurvatureClass::Max
        } else {
            CurvatureClass::Min
        }
    } else if discriminant < 0.0 {
        CurvatureClass::Saddle
    } else {
        CurvatureClass::Indeterminate
    }
}

/// Solved system plus diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSolution {
    pub locus: Locus,
    pub determinant: f64,
    /// Relative residuals of the two conditions at the reported point (a
    /// representative point for lines). Bounded by [`FOC_RESIDUAL_TOL`] for
    /// well-scaled inputs.
    pub residual_1: f64,
    pub residual_2: f64,
    /// `4 a4 a5 - a3^2`.
    pub discriminant_1: f64,
    /// `4 b4 b5 - b3^2`.
    pub discriminant_2: f64,
    pub class_1: CurvatureClass,
    pub class_2: CurvatureClass,
}

struct Row {
    cx: f64,
    cy: f64,
    rhs: f64,
}

impl Row {
    fn scale(&self) -> f64 {
        1f64.max(self.cx.abs()).max(self.cy.abs())
    }

    fn coeffs_zero(&self) -> bool {
        self.cx == 0.0 && self.cy == 0.0
    }
}

fn solve_rows(r1: Row, r2: Row, context: &str) -> Result<(Locus, f64), Error> {
    let det = r1.cx * r2.cy - r1.cy * r2.cx;
    let det_scale = 1f64
        .max((r1.cx * r2.cy).abs())
        .max((r1.cy * r2.cx).abs());
    if det.abs() > DET_TOL * det_scale {
        let x = (r1.rhs * r2.cy - r1.cy * r2.rhs) / det;
        let y = (r1.cx * r2.rhs - r1.rhs * r2.cx) / det;
        return Ok((Locus::Point { x, y }, det));
    }

    let degenerate = || Error::DegenerateDenominator {
        context: context.to_string(),
    };
    let row_line = |r: &Row| Locus::Line {
        coef_x: r.cx,
        coef_y: r.cy,
        rhs: r.rhs,
    };
    let consistent_zero = |r: &Row| r.rhs.abs() <= DET_TOL * r.scale();
    match (r1.coeffs_zero(), r2.coeffs_zero()) {
        (true, true) => {
            if consistent_zero(&r1) && consistent_zero(&r2) {
                Ok((
                    Locus::Line {
                        coef_x: 0.0,
                        coef_y: 0.0,
                        rhs: 0.0,
                    },
                    det,
                ))
            } else {
                Err(degenerate())
            }
        }
        (true, false) => {
            if consistent_zero(&r1) {
                Ok((row_line(&r2), det))
            } else {
                Err(degenerate())
            }
        }
        (false, true) => {
            if consistent_zero(&r2) {
                Ok((row_line(&r1), det))
            } else {
                Err(degenerate())
            }
        }
        (false, false) => {
            // Rows are dependent in coefficients; the system is a single
            // line exactly when the right-hand sides follow the same ratio.
            let s = r1.scale().max(r2.scale()).max(r1.rhs.abs()).max(r2.rhs.abs());
            let cross_x = r1.cx * r2.rhs - r2.cx * r1.rhs;
            let cross_y = r1.cy * r2.rhs - r2.cy * r1.rhs;
            if cross_x.abs() <= DET_TOL * s * s && cross_y.abs() <= DET_TOL * s * s {
                let line = if r1.scale() >= r2.scale() {
                    row_line(&r1)
                } else {
                    row_line(&r2)
                };
                Ok((line, det))
            } else {
                Err(degenerate())
            }
        }
    }
}

/// A point where both conditions can be evaluated: the point itself, or a
/// deterministic representative on a line.
fn representative(locus: &Locus) -> (f64, f64) {
    match *locus {
        Locus::Point { x, y } => (x, y),
        Locus::Line { coef_x, coef_y, rhs } => {
            if coef_y.abs() >= coef_x.abs() && coef_y != 0.0 {
                (0.0, rhs / coef_y)
            } else if coef_x != 0.0 {
                (rhs / coef_x, 0.0)
            } else {
                (0.0, 0.0)
            }
        }
    }
}

fn relative_residual(terms: &[f64]) -> f64 {
    let value: f64 = terms.iter().sum();
    let scale = terms.iter().fold(1f64, |m, t| m.max(t.abs()));
    value.abs() / scale
}

fn build_solution(
    game: &QuadraticGame,
    locus: Locus,
    det: f64,
    foc1: impl Fn(f64, f64) -> Vec<f64>,
    foc2: impl Fn(f64, f64) -> Vec<f64>,
) -> QuadraticSolution {
    let (x, y) = representative(&locus);
    let [_, _, a3, a4, a5] = game.a;
    let [_, _, b3, b4, b5] = game.b;
    let d1 = 4.0 * a4 * a5 - a3 * a3;
    let d2 = 4.0 * b4 * b5 - b3 * b3;
    QuadraticSolution {
        locus,
        determinant: det,
        residual_1: relative_residual(&foc1(x, y)),
        residual_2: relative_residual(&foc2(x, y)),
        discriminant_1: d1,
        discriminant_2: d2,
        class_1: classify(d1, a4),
        class_2: classify(d2, b4),
    }
}

/// Nash point from the own-variable conditions `du1/dx = 0`, `du2/dy = 0`.
pub fn solve_nash_quadratic(game: &QuadraticGame) -> Result<QuadraticSolution, Error> {
    let [a1, _, a3, a4, _] = game.a;
    let [_, b2, b3, _, b5] = game.b;
    let (locus, det) = solve_rows(
        Row {
            cx: 2.0 * a4,
            cy: a3,
            rhs: -a1,
        },
        Row {
            cx: b3,
            cy: 2.0 * b5,
            rhs: -b2,
        },
        "equilibrium first order conditions",
    )?;
    Ok(build_solution(
        game,
        locus,
        det,
        |x, y| vec![a1, a3 * y, 2.0 * a4 * x],
        |x, y| vec![b2, b3 * x, 2.0 * b5 * y],
    ))
}

/// Periodic point from the cross conditions `du1/dy = 0`, `du2/dx = 0`:
/// each player drives the opponent's payoff to a stationary point in the
/// opponent's own variable.
pub fn solve_periodic_quadratic(game: &QuadraticGame) -> Result<QuadraticSolution, Error> {
    let [_, a2, a3, _, a5] = game.a;
    let [b1, _, b3, b4, _] = game.b;
    let (locus, det) = solve_rows(
        Row {
            cx: a3,
            cy: 2.0 * a5,
            rhs: -a2,
        },
        Row {
            cx: 2.0 * b4,
            cy: b3,
            rhs: -b1,
        },
        "periodic first order conditions",
    )?;
    Ok(build_solution(
        game,
        locus,
        det,
        |x, y| vec![a2, a3 * x, 2.0 * a5 * y],
        |x, y| vec![b1, b3 * y, 2.0 * b4 * x],
    ))
}

/// Symmetric duopoly with linear demand: price `P - A(x + y)`, unit cost
/// `B`, own-output quadratic adjustment `M`. Both players share the same
/// coefficient pattern.
pub fn preset_cournot(p: f64, a: f64, b: f64, m: f64) -> Result<QuadraticGame, Error> {
    QuadraticGame::new(
        [p - b, 0.0, -a, -a + m, 0.0],
        [0.0, p - b, -a, 0.0, -a + m],
    )
}

/// Joint-production game where only the total `x + y` matters: benefit
/// `A(x+y) - B(x+y)^2`, private contribution cost `C` per unit.
#[derive(Debug, Clone, PartialEq)]
pub struct PublicGoodReport {
    pub game: QuadraticGame,
    /// Equilibrium total `(A - C) / (2B)`; contributions split anywhere
    /// along the line.
    pub s_nash: f64,
    /// Periodic total `A / (2B)`.
    pub s_periodic: f64,
    pub nash: QuadraticSolution,
    pub periodic: QuadraticSolution,
    /// `u1` along the equilibrium line as a function of the opponent's
    /// contribution: `(intercept, slope)` with value `intercept + slope*y`.
    pub u1_nash_form: (f64, f64),
    /// Same along the periodic line.
    pub u1_periodic_form: (f64, f64),
    /// Periodic-minus-equilibrium intercept gap `-C^2 / (4B)`.
    pub gap: f64,
}

pub fn preset_public_good(a: f64, b: f64, c: f64) -> Result<PublicGoodReport, Error> {
    if b == 0.0 {
        return Err(Error::ZeroCurvature(
            "benefit curvature B must be nonzero".to_string(),
        ));
    }
    let game = QuadraticGame::new(
        [a - c, a, -2.0 * b, -b, -b],
        [a, a - c, -2.0 * b, -b, -b],
    )?;
    let nash = solve_nash_quadratic(&game)?;
    let periodic = solve_periodic_quadratic(&game)?;
    Ok(PublicGoodReport {
        game,
        s_nash: (a - c) / (2.0 * b),
        s_periodic: a / (2.0 * b),
        nash,
        periodic,
        u1_nash_form: ((a - c) * (a - c) / (4.0 * b), c),
        u1_periodic_form: ((a * a - 2.0 * a * c) / (4.0 * b), c),
        gap: -c * c / (4.0 * b),
    })
}
