//! Calibration input: the yield curve `y(k)` and the yield-volatility curve
//! `β(k)` on annual maturities `k = 1..n`.

use alloc::vec::Vec;
use core::fmt;

/// One maturity of the calibration curve.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CurvePoint {
    /// Maturity in periods (years).
    pub k: u32,
    /// Zero-coupon yield as a decimal fraction (`0.0136` for 1.36%).
    pub y: f64,
    /// Yield volatility. Not used by calibration at `k = 1`, where it may be
    /// absent.
    pub beta: Option<f64>,
}

impl CurvePoint {
    pub fn new(k: u32, y: f64, beta: Option<f64>) -> Self {
        Self { k, y, beta }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputError {
    Empty,
    /// Maturities must run 1, 2, ..., n.
    NonContiguous {
        position: usize,
        found: u32,
    },
    NonPositiveYield {
        k: u32,
        y: f64,
    },
    /// `β(k)` must be present and strictly positive for `k ≥ 2`.
    InvalidBeta {
        k: u32,
        beta: Option<f64>,
    },
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Empty => write!(f, "calibration input has no maturities"),
            InputError::NonContiguous { position, found } => write!(
                f,
                "maturities must be 1..n in order: entry {} has k = {}, expected {}",
                position,
                found,
                position + 1
            ),
            InputError::NonPositiveYield { k, y } => {
                write!(f, "yield for maturity {} must be positive, got {}", k, y)
            }
            InputError::InvalidBeta { k, beta } => match beta {
                Some(b) => write!(f, "yield volatility for maturity {} must be positive, got {}", k, b),
                None => write!(f, "yield volatility for maturity {} is missing", k),
            },
        }
    }
}

impl core::error::Error for InputError {}

/// Validated market curve driving calibration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "Vec<CurvePoint>", into = "Vec<CurvePoint>"))]
pub struct CalibrationInput {
    points: Vec<CurvePoint>,
}

impl CalibrationInput {
    pub fn new(points: Vec<CurvePoint>) -> Result<Self, InputError> {
        if points.is_empty() {
            return Err(InputError::Empty);
        }
        for (position, pt) in points.iter().enumerate() {
            if pt.k as usize != position + 1 {
                return Err(InputError::NonContiguous { position, found: pt.k });
            }
            if !(pt.y > 0.0) || !pt.y.is_finite() {
                return Err(InputError::NonPositiveYield { k: pt.k, y: pt.y });
            }
            if pt.k >= 2 {
                match pt.beta {
                    Some(b) if b > 0.0 && b.is_finite() => {}
                    other => return Err(InputError::InvalidBeta { k: pt.k, beta: other }),
                }
            }
        }
        Ok(Self { points })
    }

    /// Builds an input from parallel slices; `betas[0]` is the unused `β(1)`.
    pub fn from_curves(yields: &[f64], betas: &[Option<f64>]) -> Result<Self, InputError> {
        let points = yields
            .iter()
            .zip(betas.iter().chain(core::iter::repeat(&None)))
            .enumerate()
            .map(|(i, (&y, &beta))| CurvePoint::new(i as u32 + 1, y, beta))
            .collect();
        Self::new(points)
    }

    /// Number of annual periods `n`.
    pub fn periods(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    /// `y(k)` for `1 ≤ k ≤ n`.
    pub fn yield_at(&self, k: usize) -> f64 {
        self.points[k - 1].y
    }

    /// `β(k)` for `2 ≤ k ≤ n` (always present after validation).
    pub fn beta_at(&self, k: usize) -> f64 {
        self.points[k - 1].beta.unwrap_or(0.0)
    }

    /// Market price of the `k`-period zero-coupon bond, `face / (1 + y(k))^k`.
    pub fn discount_price(&self, k: usize, face: f64) -> f64 {
        face / crate::math::powi(1.0 + self.yield_at(k), k as i32)
    }

    /// The curve truncated to its first `n` maturities.
    pub fn truncated(&self, n: usize) -> Self {
        Self { points: self.points[..n.min(self.points.len())].to_vec() }
    }
}

impl TryFrom<Vec<CurvePoint>> for CalibrationInput {
    type Error = InputError;

    fn try_from(points: Vec<CurvePoint>) -> Result<Self, Self::Error> {
        Self::new(points)
    }
}

impl From<CalibrationInput> for Vec<CurvePoint> {
    fn from(input: CalibrationInput) -> Self {
        input.points
    }
}
