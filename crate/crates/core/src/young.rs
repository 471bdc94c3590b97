//! Young functions, their complementary functions and the Δ2 condition.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::golden_max;

/// A Young function `Φ` on `[0, ∞)`, extended to ℝ by evenness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum YoungFunction {
    /// `|x|^p / p`, `p >= 1`.
    PPower { p: f64 },
    /// `e^{|x|} - |x| - 1`.
    ExpMinus,
    /// `cosh(x) - 1`.
    Cosh,
    /// `|x| log(1 + |x|)`.
    Xlog,
    /// `(1 + |y|) log(1 + |y|) - |y|`, complementary to `ExpMinus`.
    ExpMinusDual,
    /// `|y| asinh|y| - sqrt(1 + y^2) + 1`, complementary to `Cosh`.
    CoshDual,
    /// `0` on `[0, 1]`, `+∞` beyond; complementary to `|x|`.
    UnitBall,
    /// Complementary function computed numerically.
    Conjugate { of: Box<YoungFunction> },
}

/// Catalog entries shipped with the library.
pub fn catalog() -> Vec<(&'static str, YoungFunction)> {
    vec![
        ("p_power(p=2)", YoungFunction::PPower { p: 2.0 }),
        ("p_power(p=3)", YoungFunction::PPower { p: 3.0 }),
        ("exp_minus", YoungFunction::ExpMinus),
        ("cosh", YoungFunction::Cosh),
        ("xlog", YoungFunction::Xlog),
    ]
}

impl YoungFunction {
    pub fn p_power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return invalid(format!("p_power needs p >= 1, got {p}"));
        }
        Ok(Self::PPower { p })
    }

    pub fn label(&self) -> String {
        match self {
            Self::PPower { p } => format!("p_power(p={p})"),
            Self::ExpMinus => "exp_minus".into(),
            Self::Cosh => "cosh".into(),
            Self::Xlog => "xlog".into(),
            Self::ExpMinusDual => "exp_minus*".into(),
            Self::CoshDual => "cosh*".into(),
            Self::UnitBall => "unit_ball".into(),
            Self::Conjugate { of } => format!("{}*", of.label()),
        }
    }

    /// `Φ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.abs();
        match self {
            Self::PPower { p } => {
                if *p == 2.0 {
                    0.5 * x * x
                } else {
                    x.powf(*p) / p
                }
            }
            Self::ExpMinus => {
                if x < 1e-2 {
                    // series avoids cancellation in e^x - x - 1
                    let x2 = x * x;
                    x2 * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0))))
                } else {
                    x.exp_m1() - x
                }
            }
            Self::Cosh => {
                let s = (0.5 * x).sinh();
                2.0 * s * s
            }
            Self::Xlog => x * x.ln_1p(),
            Self::ExpMinusDual => {
                if x < 1e-2 {
                    // (1+y)log(1+y) - y = y^2/2 - y^3/6 + y^4/12 - y^5/20 + ...
                    let x2 = x * x;
                    x2 * (0.5 - x * (1.0 / 6.0 - x * (1.0 / 12.0 - x * (1.0 / 20.0 - x / 30.0))))
                } else {
                    (1.0 + x) * x.ln_1p() - x
                }
            }
            Self::CoshDual => {
                if x < 1e-3 {
                    // y asinh y - sqrt(1+y^2) + 1 = y^2/2 - y^4/24 + ...
                    let x2 = x * x;
                    x2 * (0.5 - x2 / 24.0)
                } else {
                    x * x.asinh() - x.hypot(1.0) + 1.0
                }
            }
            Self::UnitBall => {
                if x <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Self::Conjugate { of } => complementary_numeric(of, x),
        }
    }

    /// Whether `Φ` is finite everywhere.
    pub fn is_finite_valued(&self) -> bool {
        !matches!(self, Self::UnitBall)
    }

    /// Finite, continuous and strictly increasing on `(0, ∞)`: what the norm
    /// solvers need for bisection to be well posed.
    pub fn is_solver_ready(&self) -> bool {
        self.is_finite_valued()
    }

    pub(crate) fn require_solver_ready(&self) -> Result<()> {
        if self.is_solver_ready() {
            Ok(())
        } else {
            Err(Error::UnsupportedYoung(format!("{} takes the value +inf", self.label())))
        }
    }

    /// Closed-form complementary function, when one is registered.
    pub fn closed_complement(&self) -> Option<YoungFunction> {
        match self {
            Self::PPower { p } if *p == 1.0 => Some(Self::UnitBall),
            Self::PPower { p } => Some(Self::PPower { p: p / (p - 1.0) }),
            Self::ExpMinus => Some(Self::ExpMinusDual),
            Self::ExpMinusDual => Some(Self::ExpMinus),
            Self::Cosh => Some(Self::CoshDual),
            Self::CoshDual => Some(Self::Cosh),
            Self::UnitBall => Some(Self::PPower { p: 1.0 }),
            Self::Conjugate { of } => Some((**of).clone()),
            Self::Xlog => None,
        }
    }

    /// The complementary Young function `Ψ`, closed form when available.
    pub fn complement(&self) -> YoungFunction {
        self.closed_complement()
            .unwrap_or_else(|| Self::Conjugate { of: Box::new(self.clone()) })
    }

    /// Checks `Φ(0) = 0`, midpoint convexity on a log grid and growth at the
    /// right end of the grid.
    pub fn validate(&self) -> Result<()> {
        if self.eval(0.0) != 0.0 {
            return invalid(format!("{}: Φ(0) != 0", self.label()));
        }
        let grid = log_grid(1e-4, 1e2, 400);
        for w in grid.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            if !(fa.is_finite() && fb.is_finite()) {
                continue;
            }
            let mid = self.eval(0.5 * (a + b));
            let rhs = 0.5 * (fa + fb);
            if mid > rhs + 1e-12 * rhs.abs().max(1.0) {
                return invalid(format!("{}: midpoint convexity fails on [{a}, {b}]", self.label()));
            }
        }
        let last = *grid.last().unwrap();
        if self.eval(last) <= self.eval(last / 2.0) && self.eval(last).is_finite() {
            return invalid(format!("{}: no growth at the right end of the grid", self.label()));
        }
        Ok(())
    }
}

/// Log-spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut grid: Vec<f64> = (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect();
    // pin the endpoints so coverage checks are exact
    grid[0] = lo;
    grid[n - 1] = hi;
    grid
}

/// `Ψ(y) = sup_{x >= 0} (x y - Φ(x))`, via closed form when registered.
pub fn complementary(phi: &YoungFunction, y: f64) -> Result<f64> {
    if y < 0.0 || y.is_nan() {
        return invalid(format!("complementary needs y >= 0, got {y}"));
    }
    Ok(match phi.closed_complement() {
        Some(psi) => psi.eval(y),
        None => complementary_numeric(phi, y),
    })
}

/// Numerical Legendre–Fenchel conjugate: doubling bracket then golden section.
/// Returns `+∞` when `x y - Φ(x)` keeps increasing up to `x ~ 1e300`.
pub fn complementary_numeric(phi: &YoungFunction, y: f64) -> f64 {
    let y = y.abs();
    if y == 0.0 {
        return 0.0;
    }
    let g = |x: f64| {
        let v = phi.eval(x);
        if v.is_finite() {
            x * y - v
        } else {
            f64::NEG_INFINITY
        }
    };
    // bracket the maximizer of the concave objective
    let mut prev = 0.0;
    let mut gprev = 0.0;
    let mut x = 1e-8;
    let mut gx = g(x);
    let mut before = 0.0;
    while gx >= gprev {
        if x > 1e300 {
            return f64::INFINITY;
        }
        before = prev;
        prev = x;
        gprev = gx;
        x *= 2.0;
        gx = g(x);
    }
    let (_, best) = golden_max(g, before, x, 1e-12);
    best.max(gprev).max(0.0)
}

/// `Φ(x) + Ψ(y) - x y`; nonnegative up to rounding by Young's inequality.
pub fn young_inequality_margin(phi: &YoungFunction, x: f64, y: f64) -> Result<f64> {
    let psi = complementary(phi, y.abs())?;
    if psi.is_infinite() {
        return Ok(f64::INFINITY);
    }
    Ok(phi.eval(x) + psi - x * y)
}

/// Heuristic Δ2 verdict on a sampled grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Delta2Verdict {
    /// `Φ(2x) <= C Φ(x)` on the grid with the reported `C`.
    Bounded { constant: f64 },
    /// Ratios `(x, Φ(2x)/Φ(x))` that keep growing towards the right end.
    Growing { ratios: Vec<(f64, f64)> },
}

impl Delta2Verdict {
    pub fn constant(&self) -> Option<f64> {
        match self {
            Self::Bounded { constant } => Some(*constant),
            Self::Growing { .. } => None,
        }
    }
}

/// Sup of `Φ(2x)/Φ(x)` over `grid` if the ratio looks bounded, otherwise the
/// growing ratio sequence. Grid points where `Φ(x) = 0` are skipped; points
/// where `Φ(2x)` overflows count as unbounded growth.
pub fn delta2_constant(phi: &YoungFunction, grid: &[f64]) -> Result<Delta2Verdict> {
    if !phi.is_finite_valued() {
        return invalid(format!("{} is +inf on the grid", phi.label()));
    }
    if grid.len() < 200 || grid[0] > 1e-6 || *grid.last().unwrap() < 1e6 {
        return invalid("Δ2 grid must cover [1e-6, 1e6] with at least 200 points");
    }
    let mut ratios = Vec::with_capacity(grid.len());
    let mut overflowed = false;
    for &x in grid {
        let (a, b) = (phi.eval(x), phi.eval(2.0 * x));
        if a == 0.0 {
            continue;
        }
        if !b.is_finite() || !a.is_finite() {
            overflowed = true;
            break;
        }
        ratios.push((x, b / a));
    }
    if ratios.is_empty() {
        return invalid(format!("{} vanishes on the whole grid", phi.label()));
    }
    let tail_len = (ratios.len() / 10).max(3).min(ratios.len());
    let tail = &ratios[ratios.len() - tail_len..];
    let tail_non_increasing = tail.windows(2).all(|w| w[1].1 <= w[0].1 * (1.0 + 1e-9));
    if overflowed || !tail_non_increasing {
        return Ok(Delta2Verdict::Growing { ratios });
    }
    let constant = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(Delta2Verdict::Bounded { constant })
}

/// The standard Δ2 test grid: 400 log-spaced points on `[1e-6, 1e6]`.
pub fn default_delta2_grid() -> Vec<f64> {
    log_grid(1e-6, 1e6, 400)
}
