//! Historical yield volatility from daily log-returns.
//!
//! For a window of `N` log-returns `l_i = log(y_{t-i} / y_{t-i-1})` with mean
//! `l̄`, the estimator is
//!
//! ```text
//! β² = Σ (l_i − l̄)²            (RawSum, the default)
//! β² = Σ (l_i − l̄)² / (N − 1)  (Sample)
//! ```
//!
//! The default keeps the plain sum of squared deviations, which is roughly an
//! annualised variance when `N` is one year of business days.

use core::fmt;

use crate::math::{ln, sqrt};

/// Normalisation applied to the sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum VolNormalization {
    #[default]
    RawSum,
    Sample,
}

#[derive(Debug, Clone, PartialEq)]
pub enum VolatilityError {
    /// Fewer than two observations (no log-return to measure).
    TooFewObservations {
        observations: usize,
    },
    NonPositiveYield {
        index: usize,
        value: f64,
    },
}

impl fmt::Display for VolatilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VolatilityError::TooFewObservations { observations } => {
                write!(f, "need at least 2 observations for a log-return, got {}", observations)
            }
            VolatilityError::NonPositiveYield { index, value } => {
                write!(f, "yield at position {} is not positive ({})", index, value)
            }
        }
    }
}

impl core::error::Error for VolatilityError {}

/// Volatility of the log-returns of `yields`, taken in order.
///
/// `yields` holds the `N + 1` consecutive observations ending at the
/// observation date, so the window length is `yields.len() - 1`.
pub fn log_return_volatility(yields: &[f64], normalization: VolNormalization) -> Result<f64, VolatilityError> {
    if yields.len() < 2 {
        return Err(VolatilityError::TooFewObservations { observations: yields.len() });
    }
    if let Some((index, &value)) = yields.iter().enumerate().find(|(_, &y)| !(y > 0.0)) {
        return Err(VolatilityError::NonPositiveYield { index, value });
    }
    let returns = yields.windows(2).map(|w| ln(w[1] / w[0]));
    let count = (yields.len() - 1) as f64;
    let mean = returns.clone().sum::<f64>() / count;
    let sum_sq: f64 = returns.map(|l| (l - mean) * (l - mean)).sum();
    let var = match normalization {
        VolNormalization::RawSum => sum_sq,
        VolNormalization::Sample if count > 1.0 => sum_sq / (count - 1.0),
        VolNormalization::Sample => 0.0,
    };
    Ok(sqrt(var))
}
