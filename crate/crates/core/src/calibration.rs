//! Period-by-period calibration of the BDT and ZBDT lattices.
//!
//! Step `n` adds level `n − 1` to the tree so that the model reprices the
//! `n`-period zero-coupon bond at its market yield `y(n)` and reproduces the
//! market yield volatility `β(n)` measured one period ahead.
//!
//! * BDT: level `n − 1` is `r1·e^{2σ(j−1)}`. The unknowns `(r1, σ)` solve the
//!   price equation and `½·ln(yu/yd) = β(n)`, where `yu`, `yd` are the yields
//!   of the `n`-period bond at nodes `(1, 2)` and `(1, 1)`.
//! * ZBDT: level `n − 1` is `r1, r2, r2·e^{2σ(j−2)}` for `j ≥ 3`, with
//!   `σ² = V(ln(r2/x0), ln(r1/x0), p)`. The unknowns `(r1, r2)` solve the
//!   price equation and the volatility equation `V(ℓu, ℓd, p) = β(n)²`,
//!   where `ℓ` are log-yields at level 1 relative to the rail yield.
//!
//! `V` is [`ternary_variance`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::{node_yield, BdtLattice, LatticeError, Node, RateTree, ZbdtLattice, ZbdtParams};
use crate::market::{CalibrationInput, CurvePoint, InputError};
use crate::math::{exp, ln, powf, sqrt};
use crate::solver::{solve_scalar, SolveError, SolverConfig};
use crate::FACE_VALUE;

/// How the ZBDT volatility equation reads the market `β(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BetaTarget {
    /// `V(ℓu, ℓd, p) = β²`: `β` is a standard deviation.
    #[default]
    StdDev,
    /// `V(ℓu, ℓd, p) = β`.
    Variance,
}

impl BetaTarget {
    fn target(self, beta: f64) -> f64 {
        match self {
            BetaTarget::StdDev => beta * beta,
            BetaTarget::Variance => beta,
        }
    }

    fn beta_from(self, variance: f64) -> f64 {
        match self {
            BetaTarget::StdDev => sqrt(variance.max(0.0)),
            BetaTarget::Variance => variance,
        }
    }
}

/// Variance of the log-yield across the three branches out of the lowest
/// regular node: `(1−p²)/4·(ℓu² + ℓd²) − (1−p)²/2·ℓu·ℓd`.
///
/// `ℓu`, `ℓd` are log-yields relative to the rail branch, whose log-yield is
/// therefore 0.
pub fn ternary_variance(l_up: f64, l_down: f64, p: f64) -> f64 {
    (1.0 - p * p) / 4.0 * (l_up * l_up + l_down * l_down) - (1.0 - p) * (1.0 - p) / 2.0 * l_up * l_down
}

#[derive(Debug, Clone, PartialEq)]
pub enum CalibrationError {
    /// A scalar solve inside step `step` failed.
    Solver {
        step: usize,
        source: SolveError,
    },
    /// The volatility equation has no root at step `step`. `closest` is the
    /// smallest absolute residual met while searching.
    NoRoot {
        step: usize,
        closest: f64,
    },
    Lattice(LatticeError),
    Input(InputError),
}

impl fmt::Display for CalibrationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CalibrationError::Solver { step, source } => {
                write!(f, "calibration step {} failed: {}", step, source)
            }
            CalibrationError::NoRoot { step, closest } => {
                write!(f, "calibration step {} has no solution (closest volatility residual {:e})", step, closest)
            }
            CalibrationError::Lattice(e) => write!(f, "{}", e),
            CalibrationError::Input(e) => write!(f, "{}", e),
        }
    }
}

impl core::error::Error for CalibrationError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            CalibrationError::Solver { source, .. } => Some(source),
            CalibrationError::Lattice(e) => Some(e),
            CalibrationError::Input(e) => Some(e),
            CalibrationError::NoRoot { .. } => None,
        }
    }
}

impl From<InputError> for CalibrationError {
    fn from(e: InputError) -> Self {
        CalibrationError::Input(e)
    }
}

impl From<LatticeError> for CalibrationError {
    fn from(e: LatticeError) -> Self {
        CalibrationError::Lattice(e)
    }
}

/// Solution of one calibration step.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepSolution {
    /// Maturity matched by this step; it fixes level `step − 1`.
    pub step: usize,
    pub r1: f64,
    /// Second regular rate; ZBDT only.
    pub r2: Option<f64>,
    pub sigma: f64,
    /// Model minus market price of the `step`-period bond.
    pub price_residual: f64,
    /// Residual of the volatility equation.
    pub beta_residual: f64,
    /// Residual evaluations of the outer solve.
    pub iterations: usize,
}

/// A calibrated lattice together with the per-step diagnostics.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Calibrated<L> {
    pub lattice: L,
    pub steps: Vec<StepSolution>,
}

fn bdt_level(r1: f64, sigma: f64, len: usize) -> Vec<f64> {
    (0..len).map(|k| r1 * exp(2.0 * sigma * k as f64)).collect()
}

fn zbdt_sigma(r1: f64, r2: f64, prm: &ZbdtParams) -> f64 {
    sqrt(ternary_variance(ln(r2 / prm.x0), ln(r1 / prm.x0), prm.p).max(0.0))
}

fn zbdt_level(r1: f64, r2: f64, prm: &ZbdtParams, len: usize) -> Vec<f64> {
    let sigma = zbdt_sigma(r1, r2, prm);
    let mut level = vec![r1];
    level.extend((0..len - 1).map(|k| r2 * exp(2.0 * sigma * k as f64)));
    level
}

/// Yields of the `n`-period bond at `(1, 2)`, `(1, 1)` and the rail.
fn level_one_yields<T: RateTree>(tree: &T, n: usize) -> Result<(f64, f64, Option<f64>), LatticeError> {
    let bond = tree.price_bond(n, FACE_VALUE)?;
    let up = bond.yield_at(1, Node::Regular(2))?;
    let down = bond.yield_at(1, Node::Regular(1))?;
    let rail = if tree.has_rail(1) { Some(bond.yield_at(1, Node::Rail)?) } else { None };
    Ok((up, down, rail))
}

/// Calibrates a BDT tree with one level per maturity of `input`.
pub fn calibrate_bdt(input: &CalibrationInput, cfg: &SolverConfig) -> Result<Calibrated<BdtLattice>, CalibrationError> {
    let (lo, hi) = cfg.rate_bracket;
    let mut rates = vec![vec![input.yield_at(1)]];
    let mut steps = vec![StepSolution {
        step: 1,
        r1: input.yield_at(1),
        r2: None,
        sigma: 0.0,
        price_residual: 0.0,
        beta_residual: 0.0,
        iterations: 0,
    }];

    for n in 2..=input.periods() {
        let target = input.discount_price(n, FACE_VALUE);
        let beta = input.beta_at(n);

        let with_level = |r1: f64, sigma: f64| {
            let mut r = rates.clone();
            r.push(bdt_level(r1, sigma, n));
            BdtLattice::from_rates_unchecked(r)
        };
        let solve_r1 = |sigma: f64| {
            solve_scalar(
                |r1| with_level(r1, sigma).price_bond(n, FACE_VALUE).map_or(f64::NAN, |b| b.root() - target),
                lo,
                hi,
                cfg,
            )
            .map_err(|source| CalibrationError::Solver { step: n, source })
        };
        let beta_residual = |sigma: f64| -> Result<f64, CalibrationError> {
            let r1 = solve_r1(sigma)?.x;
            let (up, down, _) = level_one_yields(&with_level(r1, sigma), n)?;
            Ok(0.5 * ln(up / down) - beta)
        };

        let sigma_lo = 1e-10;
        let mut sigma_hi = (2.0 * beta).max(0.1);
        loop {
            if beta_residual(sigma_hi)? > 0.0 {
                break;
            }
            sigma_hi *= 2.0;
            if sigma_hi > 5.0 {
                return Err(CalibrationError::NoRoot { step: n, closest: beta_residual(sigma_hi / 2.0)?.abs() });
            }
        }
        let mut failure = None;
        let outer = solve_scalar(
            |sigma| match beta_residual(sigma) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            sigma_lo,
            sigma_hi,
            cfg,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let outer = outer.map_err(|source| CalibrationError::Solver { step: n, source })?;
        let sigma = outer.x;
        let inner = solve_r1(sigma)?;
        rates.push(bdt_level(inner.x, sigma, n));
        steps.push(StepSolution {
            step: n,
            r1: inner.x,
            r2: None,
            sigma,
            price_residual: inner.residual,
            beta_residual: outer.residual,
            iterations: outer.iterations,
        });
    }
    Ok(Calibrated { lattice: BdtLattice::new(rates)?, steps })
}

/// Calibrates a ZBDT tree with the volatility equation read as `V = β²`.
pub fn calibrate_zbdt(
    input: &CalibrationInput,
    params: &ZbdtParams,
    cfg: &SolverConfig,
) -> Result<Calibrated<ZbdtLattice>, CalibrationError> {
    calibrate_zbdt_with(input, params, BetaTarget::StdDev, cfg)
}

/// Number of grid points per decade of `r1` used to bracket the volatility
/// equation.
const SCAN_PER_DECADE: f64 = 80.0;

/// Calibrates a ZBDT tree.
///
/// For a trial `r1` the price equation fixes `r2` (the bond price falls as
/// `r2` rises), leaving the volatility equation in `r1` alone. It is
/// bracketed on a logarithmic grid over `(x0, rate_bracket.1)`; when several
/// roots exist the largest `r1` is kept.
pub fn calibrate_zbdt_with(
    input: &CalibrationInput,
    params: &ZbdtParams,
    target: BetaTarget,
    cfg: &SolverConfig,
) -> Result<Calibrated<ZbdtLattice>, CalibrationError> {
    let params = ZbdtParams::new(params.p, params.q, params.x0)?;
    let hi = cfg.rate_bracket.1;
    let mut rates = vec![vec![input.yield_at(1)]];
    let mut steps = vec![StepSolution {
        step: 1,
        r1: input.yield_at(1),
        r2: None,
        sigma: 0.0,
        price_residual: 0.0,
        beta_residual: 0.0,
        iterations: 0,
    }];

    for n in 2..=input.periods() {
        let price_target = input.discount_price(n, FACE_VALUE);
        let var_target = target.target(input.beta_at(n));

        let with_level = |r1: f64, r2: f64| {
            let mut r = rates.clone();
            r.push(zbdt_level(r1, r2, &params, n));
            ZbdtLattice::from_rates_unchecked(r, params)
        };
        let price_gap = |r1: f64, r2: f64| {
            with_level(r1, r2).price_bond(n, FACE_VALUE).map_or(f64::NAN, |b| b.root() - price_target)
        };
        // r2 solving the price equation for this r1, if any.
        let r2_of = |r1: f64| -> Option<(f64, f64)> {
            let lo2 = r1 * (1.0 + 1e-9);
            let root = solve_scalar(|r2| price_gap(r1, r2), lo2, hi, cfg).ok()?;
            Some((root.x, root.residual))
        };
        let vol_gap = |r1: f64| -> Option<f64> {
            let (r2, _) = r2_of(r1)?;
            let (up, down, rail) = level_one_yields(&with_level(r1, r2), n).ok()?;
            let rail = rail?;
            if !(up > 0.0 && down > 0.0 && rail > 0.0) {
                return None;
            }
            Some(ternary_variance(ln(up / rail), ln(down / rail), params.p) - var_target)
        };

        let lo = params.x0 * (1.0 + 1e-6);
        let points = (ln(hi / lo) / core::f64::consts::LN_10 * SCAN_PER_DECADE).max(2.0) as usize + 1;
        let ratio = powf(hi / lo, 1.0 / points as f64);
        let mut closest = f64::INFINITY;
        let mut bracket = None;
        let mut prev: Option<(f64, f64)> = None;
        for k in 0..=points {
            let r1 = lo * powf(ratio, k as f64);
            let Some(g) = vol_gap(r1) else {
                prev = None;
                continue;
            };
            closest = closest.min(g.abs());
            if let Some((a, ga)) = prev {
                if ga.signum() != g.signum() || g == 0.0 {
                    bracket = Some((a, r1));
                }
            }
            prev = Some((r1, g));
        }
        let Some((a, b)) = bracket else {
            return Err(CalibrationError::NoRoot { step: n, closest });
        };
        let outer = solve_scalar(|r1| vol_gap(r1).unwrap_or(f64::NAN), a, b, cfg)
            .map_err(|source| CalibrationError::Solver { step: n, source })?;
        let r1 = outer.x;
        let (r2, price_residual) = r2_of(r1).ok_or(CalibrationError::NoRoot { step: n, closest })?;
        rates.push(zbdt_level(r1, r2, &params, n));
        steps.push(StepSolution {
            step: n,
            r1,
            r2: Some(r2),
            sigma: zbdt_sigma(r1, r2, &params),
            price_residual,
            beta_residual: outer.residual,
            iterations: outer.iterations,
        });
    }
    Ok(Calibrated { lattice: ZbdtLattice::new(rates, params)?, steps })
}

/// The yield and yield-volatility curves implied by a lattice.
///
/// `y(n)` is the yield of the model's `n`-period bond price at the root.
/// `β(n)` is `½·ln(yu/yd)` on a BDT tree; on a ZBDT tree it inverts the
/// volatility equation according to `target`.
pub fn extract_market_view<T: RateTree>(tree: &T, target: BetaTarget) -> Result<CalibrationInput, CalibrationError> {
    let mut points = Vec::with_capacity(tree.periods());
    for n in 1..=tree.periods() {
        let bond = tree.price_bond(n, FACE_VALUE)?;
        let y = node_yield(bond.root(), n, FACE_VALUE)?;
        let beta = if n == 1 {
            None
        } else {
            let (up, down, rail) = level_one_yields(tree, n)?;
            Some(match (tree.zirp(), rail) {
                (Some(prm), Some(rail)) => target.beta_from(ternary_variance(ln(up / rail), ln(down / rail), prm.p)),
                _ => 0.5 * ln(up / down),
            })
        };
        points.push(CurvePoint::new(n as u32, y, beta));
    }
    Ok(CalibrationInput::new(points)?)
}
