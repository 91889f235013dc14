//! Short-rate lattice models for zero-coupon bond and bond-option pricing.
//!
//! Two lattices are provided:
//!
//! * [`BdtLattice`]: the classical Black-Derman-Toy recombining binomial tree
//!   with equiprobable up/down moves and log-equispaced rates at each level.
//! * [`ZbdtLattice`]: the same tree augmented with a zero-interest-rate rail.
//!   The lowest regular node of every level may jump to the rail with
//!   probability `p`; the rail pays a fixed rate `x0` and is left with
//!   probability `q` per period.
//!
//! Both are calibrated period by period to a yield curve and a yield
//! volatility curve ([`CalibrationInput`]), priced by backward induction, and
//! used to price European calls on zero-coupon bonds whose prices are then
//! quoted as Black implied volatilities.
//!
//! The crate is `no_std` (it needs `alloc`). One period is one year and the
//! face value used throughout the quoting code is 100.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calibration;
pub mod derivatives;
pub mod lattice;
pub mod market;
pub mod solver;
pub mod volatility;

mod math;

pub use calibration::{
    calibrate_bdt, calibrate_zbdt, calibrate_zbdt_with, extract_market_view, ternary_variance, BetaTarget, Calibrated,
    CalibrationError, StepSolution,
};
pub use derivatives::{black_price, implied_vol, price_call, EuropeanCall, OptionQuote, PricingError};
pub use lattice::{
    node_yield, BdtLattice, LatticeError, Layer, Node, PriceLattice, RateLattice, RateTree, ZbdtLattice, ZbdtParams,
};
pub use market::{CalibrationInput, CurvePoint, InputError};
pub use solver::{solve_scalar, solve_system, Root, SolveError, SolverConfig};
pub use volatility::{log_return_volatility, VolNormalization, VolatilityError};

/// Face value used by the quoting conventions (bond grids and option tables).
pub const FACE_VALUE: f64 = 100.0;
