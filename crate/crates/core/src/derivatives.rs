//! European calls on zero-coupon bonds and Black's formula.

use core::fmt;

use crate::lattice::{LatticeError, RateTree};
use crate::math::{ln, norm_cdf, sqrt};
use crate::solver::{solve_scalar, SolverConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum PricingError {
    /// Exercise must come strictly before the bond matures.
    BadExercise {
        exercise: usize,
        maturity: usize,
    },
    InvalidStrike(f64),
    Lattice(LatticeError),
    /// No volatility in the search range reproduces the price.
    VolOutOfRange {
        price: f64,
    },
    /// Price outside the no-arbitrage band `[max(B_T − K·B_S, 0), B_T]`.
    ArbitragePrice {
        price: f64,
        lower: f64,
        upper: f64,
    },
}

impl fmt::Display for PricingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PricingError::BadExercise { exercise, maturity } => {
                write!(f, "exercise at {} must satisfy 0 < S < T = {}", exercise, maturity)
            }
            PricingError::InvalidStrike(k) => write!(f, "strike must be non-negative, got {}", k),
            PricingError::Lattice(e) => write!(f, "{}", e),
            PricingError::VolOutOfRange { price } => {
                write!(f, "no implied volatility reproduces price {}", price)
            }
            PricingError::ArbitragePrice { price, lower, upper } => {
                write!(f, "price {} outside the arbitrage bounds [{}, {}]", price, lower, upper)
            }
        }
    }
}

impl core::error::Error for PricingError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            PricingError::Lattice(e) => Some(e),
            _ => None,
        }
    }
}

impl From<LatticeError> for PricingError {
    fn from(e: LatticeError) -> Self {
        PricingError::Lattice(e)
    }
}

/// Call struck at `strike` expiring at period `exercise` on the zero-coupon
/// bond maturing at period `maturity`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EuropeanCall {
    pub strike: f64,
    pub exercise: usize,
    pub maturity: usize,
    pub face: f64,
}

impl EuropeanCall {
    pub fn new(strike: f64, exercise: usize, maturity: usize, face: f64) -> Result<Self, PricingError> {
        if exercise == 0 || exercise >= maturity {
            return Err(PricingError::BadExercise { exercise, maturity });
        }
        if !(strike >= 0.0) || !strike.is_finite() {
            return Err(PricingError::InvalidStrike(strike));
        }
        Ok(Self { strike, exercise, maturity, face })
    }

    /// Periods from today to exercise, the Black time parameter.
    pub fn tau(&self) -> f64 {
        self.exercise as f64
    }
}

/// Lattice price: the payoff `max(B − K, 0)` at every node of the exercise
/// level, rolled back to the root.
pub fn price_call<T: RateTree>(tree: &T, call: &EuropeanCall) -> Result<f64, PricingError> {
    let bond = tree.price_bond(call.maturity, call.face)?;
    let payoff = bond.call_payoff(call.exercise, call.strike);
    Ok(tree.roll_back(call.exercise, payoff)[0].nodes[0])
}

/// Black's formula for a call on a zero-coupon bond,
/// `C = B_T·Φ(d1) − K·B_S·Φ(d2)`,
/// `d1,2 = ln(B_T / (K·B_S)) / (σ√τ) ± σ√τ/2`.
pub fn black_price(b_t: f64, b_s: f64, strike: f64, sigma: f64, tau: f64) -> f64 {
    let forward_strike = strike * b_s;
    let sd = sigma * sqrt(tau);
    if !(sd > 0.0) {
        return (b_t - forward_strike).max(0.0);
    }
    let d1 = ln(b_t / forward_strike) / sd + 0.5 * sd;
    b_t * norm_cdf(d1) - forward_strike * norm_cdf(d1 - sd)
}

/// Largest volatility considered by [`implied_vol`].
pub const MAX_IMPLIED_VOL: f64 = 20.0;

/// Volatility at which [`black_price`] reproduces `price`.
///
/// Prices at or below `1e-12` map to zero volatility.
pub fn implied_vol(price: f64, b_t: f64, b_s: f64, strike: f64, tau: f64) -> Result<f64, PricingError> {
    let lower = (b_t - strike * b_s).max(0.0);
    if !(price >= lower - 1e-12 && price <= b_t) {
        return Err(PricingError::ArbitragePrice { price, lower, upper: b_t });
    }
    if price <= 1e-12 || price <= lower {
        return Ok(0.0);
    }
    let cfg = SolverConfig { tol: 1e-13, max_iter: 400, ..SolverConfig::default() };
    solve_scalar(|s| black_price(b_t, b_s, strike, s, tau) - price, 1e-9, MAX_IMPLIED_VOL, &cfg)
        .map(|r| r.x)
        .map_err(|_| PricingError::VolOutOfRange { price })
}

/// A lattice price quoted as a Black volatility, discounted with the
/// model's own root prices `B(0, T)` and `B(0, S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptionQuote {
    pub strike: f64,
    pub price: f64,
    pub implied_vol: f64,
}

impl OptionQuote {
    pub fn from_lattice<T: RateTree>(tree: &T, call: &EuropeanCall) -> Result<Self, PricingError> {
        let price = price_call(tree, call)?;
        let b_t = tree.price_bond(call.maturity, call.face)?.root();
        let b_s = tree.price_bond(call.exercise, call.face)?.root();
        let implied_vol = implied_vol(price, b_t, b_s, call.strike, call.tau())?;
        Ok(Self { strike: call.strike, price, implied_vol })
    }
}
