//! Daily constant-maturity yield series: CSV ingestion, rolling yield
//! volatility and assembly of the calibration curve for one date.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use zbdt_core::{log_return_volatility, CalibrationInput, CurvePoint, InputError, VolNormalization, VolatilityError};

/// Default rolling window, one year of business days.
pub const DEFAULT_WINDOW: usize = 252;

const DATE_FORMAT: &str = "%Y-%m-%d";

#[derive(Debug, Error)]
pub enum MarketDataError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("header has no `{0}` column")]
    MissingDateColumn(String),
    #[error("header has no tenor columns")]
    NoTenorColumns,
    #[error("column `{0}` is not a tenor (expected e.g. 6M, 1Y, 0.5, 5)")]
    UnknownTenor(String),
    #[error("line {line}: malformed date `{value}`")]
    BadDate { line: u64, value: String },
    #[error("line {line}, column {column}: `{value}` is not a number")]
    BadYield { line: u64, column: String, value: String },
    #[error("line {line}, column {column}: yield {value} is not positive")]
    NonPositiveYield { line: u64, column: String, value: f64 },
    #[error("{tenor} series has two observations on {date}")]
    DuplicateDate { tenor: Tenor, date: NaiveDate },
    #[error("{0} series has no observations")]
    EmptySeries(Tenor),
    #[error("{tenor} series has no observation on {date}")]
    DateNotInSeries { tenor: Tenor, date: NaiveDate },
    #[error(
        "{tenor} series needs {needed} observations up to {date}, has {available}{}",
        earliest.map(|d| format!("; earliest usable date is {}", d)).unwrap_or_default()
    )]
    InsufficientHistory { tenor: Tenor, date: NaiveDate, needed: usize, available: usize, earliest: Option<NaiveDate> },
    #[error("no series for the {0}-year maturity")]
    MissingTenor(u32),
    #[error("window must hold at least one log-return")]
    EmptyWindow,
    #[error(transparent)]
    Volatility(#[from] VolatilityError),
    #[error("calibration input on {as_of}: {source}")]
    Input { as_of: NaiveDate, source: InputError },
}

/// Maturity of a constant-maturity series, in months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tenor(pub u32);

impl Tenor {
    pub fn years(years: u32) -> Self {
        Tenor(12 * years)
    }

    /// Whole number of years, if the tenor is one.
    pub fn whole_years(self) -> Option<u32> {
        self.0.is_multiple_of(12).then_some(self.0 / 12)
    }
}

impl fmt::Display for Tenor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.whole_years() {
            Some(y) => write!(f, "{}Y", y),
            None => write!(f, "{}M", self.0),
        }
    }
}

impl FromStr for Tenor {
    type Err = MarketDataError;

    /// Accepts `6M`, `1Y`, `1MO`, `5YR` and bare year counts such as `0.5` or `5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let label = s.trim().to_ascii_uppercase();
        let bad = || MarketDataError::UnknownTenor(s.to_string());
        let split = label.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(label.len());
        let (number, unit) = label.split_at(split);
        let value: f64 = number.parse().map_err(|_| bad())?;
        let months = match unit {
            "M" | "MO" | "MOS" | "MONTH" | "MONTHS" => value,
            "" | "Y" | "YR" | "YRS" | "YEAR" | "YEARS" => value * 12.0,
            _ => return Err(bad()),
        };
        if !(months >= 1.0) || months.fract() != 0.0 {
            return Err(bad());
        }
        Ok(Tenor(months as u32))
    }
}

impl TryFrom<String> for Tenor {
    type Error = MarketDataError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Tenor> for String {
    fn from(t: Tenor) -> String {
        t.to_string()
    }
}

/// How yields are written in the file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YieldUnit {
    #[default]
    Percent,
    Decimal,
}

impl YieldUnit {
    fn into_decimal(self, v: f64) -> f64 {
        match self {
            YieldUnit::Percent => v / 100.0,
            YieldUnit::Decimal => v,
        }
    }

    fn out_of_decimal(self, v: f64) -> f64 {
        match self {
            YieldUnit::Percent => v * 100.0,
            YieldUnit::Decimal => v,
        }
    }
}

/// Column layout of a yield file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvLayout {
    /// Name of the date column, matched case-insensitively. Every other
    /// column is a tenor.
    pub date_column: String,
    pub unit: YieldUnit,
}

impl Default for CsvLayout {
    fn default() -> Self {
        Self { date_column: "DATE".into(), unit: YieldUnit::Percent }
    }
}

impl CsvLayout {
    pub fn with_unit(unit: YieldUnit) -> Self {
        Self { unit, ..Self::default() }
    }
}

/// Observations of one tenor, strictly increasing in date, yields as
/// decimal fractions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YieldSeries {
    pub tenor: Tenor,
    observations: Vec<(NaiveDate, f64)>,
}

impl YieldSeries {
    /// Sorts the observations and checks dates and yields.
    pub fn new(tenor: Tenor, mut observations: Vec<(NaiveDate, f64)>) -> Result<Self, MarketDataError> {
        if observations.is_empty() {
            return Err(MarketDataError::EmptySeries(tenor));
        }
        observations.sort_by_key(|&(d, _)| d);
        if let Some(w) = observations.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(MarketDataError::DuplicateDate { tenor, date: w[0].0 });
        }
        if let Some(&(_, y)) = observations.iter().find(|&&(_, y)| !(y > 0.0) || !y.is_finite()) {
            return Err(MarketDataError::NonPositiveYield { line: 0, column: tenor.to_string(), value: y });
        }
        Ok(Self { tenor, observations })
    }

    pub fn observations(&self) -> &[(NaiveDate, f64)] {
        &self.observations
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    fn position(&self, date: NaiveDate) -> Option<usize> {
        self.observations.binary_search_by_key(&date, |&(d, _)| d).ok()
    }

    pub fn yield_on(&self, date: NaiveDate) -> Option<f64> {
        self.position(date).map(|i| self.observations[i].1)
    }

    /// Every yield multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { tenor: self.tenor, observations: self.observations.iter().map(|&(d, y)| (d, y * factor)).collect() }
    }
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "." | "NA" | "N/A" | "ND" | "NaN" | "nan")
}

/// Parses a yield file: a header naming the date column and one column per
/// tenor, ISO-8601 dates, one row per day. Blank cells (also `.`, `NA`,
/// `ND`) are skipped for that tenor only.
pub fn parse_yield_csv<R: Read>(reader: R, layout: &CsvLayout) -> Result<Vec<YieldSeries>, MarketDataError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let date_idx = headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(&layout.date_column))
        .ok_or_else(|| MarketDataError::MissingDateColumn(layout.date_column.clone()))?;
    let tenors: Vec<(usize, &str, Tenor)> = headers
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != date_idx)
        .map(|(i, h)| Ok((i, h, h.parse::<Tenor>()?)))
        .collect::<Result<_, MarketDataError>>()?;
    if tenors.is_empty() {
        return Err(MarketDataError::NoTenorColumns);
    }

    let mut columns: Vec<Vec<(NaiveDate, f64)>> = vec![Vec::new(); tenors.len()];
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let raw_date = record.get(date_idx).unwrap_or("");
        let date = NaiveDate::parse_from_str(raw_date, DATE_FORMAT)
            .map_err(|_| MarketDataError::BadDate { line, value: raw_date.to_string() })?;
        for (slot, &(idx, name, _)) in tenors.iter().enumerate() {
            let cell = record.get(idx).unwrap_or("");
            if is_missing(cell) {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| MarketDataError::BadYield {
                line,
                column: name.to_string(),
                value: cell.to_string(),
            })?;
            let y = layout.unit.into_decimal(value);
            if !(y > 0.0) || !y.is_finite() {
                return Err(MarketDataError::NonPositiveYield { line, column: name.to_string(), value });
            }
            columns[slot].push((date, y));
        }
    }

    tenors.iter().zip(columns).map(|(&(_, _, tenor), obs)| YieldSeries::new(tenor, obs)).collect()
}

/// Writes series back in the layout read by [`parse_yield_csv`], one row per
/// date present in any series, blank where a tenor has no observation.
pub fn write_yield_csv(series: &[YieldSeries], layout: &CsvLayout) -> Result<String, MarketDataError> {
    let mut rows: BTreeMap<NaiveDate, Vec<Option<f64>>> = BTreeMap::new();
    for (slot, s) in series.iter().enumerate() {
        for &(d, y) in s.observations() {
            rows.entry(d).or_insert_with(|| vec![None; series.len()])[slot] = Some(y);
        }
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec![layout.date_column.clone()];
    header.extend(series.iter().map(|s| s.tenor.to_string()));
    wtr.write_record(&header)?;
    for (date, values) in rows {
        let mut record = vec![date.format(DATE_FORMAT).to_string()];
        record.extend(
            values.into_iter().map(|v| v.map(|y| layout.unit.out_of_decimal(y).to_string()).unwrap_or_default()),
        );
        wtr.write_record(&record)?;
    }
    let bytes = wtr.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Yield volatility `β(t, k)` over the `window` log-returns ending at `date`.
pub fn rolling_volatility(
    series: &YieldSeries,
    date: NaiveDate,
    window: usize,
    normalization: VolNormalization,
) -> Result<f64, MarketDataError> {
    if window == 0 {
        return Err(MarketDataError::EmptyWindow);
    }
    let end = series.position(date).ok_or(MarketDataError::DateNotInSeries { tenor: series.tenor, date })?;
    if end < window {
        return Err(MarketDataError::InsufficientHistory {
            tenor: series.tenor,
            date,
            needed: window + 1,
            available: end + 1,
            earliest: series.observations.get(window).map(|&(d, _)| d),
        });
    }
    let yields: Vec<f64> = series.observations[end - window..=end].iter().map(|&(_, y)| y).collect();
    Ok(log_return_volatility(&yields, normalization)?)
}

/// Calibration curve observed on one date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketSnapshot {
    pub as_of: NaiveDate,
    pub window: usize,
    pub normalization: VolNormalization,
    pub entries: CalibrationInput,
}

/// Yields on `as_of` and their rolling volatilities for integer maturities
/// `maturities` (which must be `1..=n`). `β(1)` is computed and stored
/// though calibration ignores it.
pub fn build_calibration_input(
    series: &[YieldSeries],
    as_of: NaiveDate,
    maturities: &[u32],
    window: usize,
    normalization: VolNormalization,
) -> Result<MarketSnapshot, MarketDataError> {
    let mut points = Vec::with_capacity(maturities.len());
    for &k in maturities {
        let s = series.iter().find(|s| s.tenor == Tenor::years(k)).ok_or(MarketDataError::MissingTenor(k))?;
        let y = s.yield_on(as_of).ok_or(MarketDataError::DateNotInSeries { tenor: s.tenor, date: as_of })?;
        let beta = rolling_volatility(s, as_of, window, normalization)?;
        points.push(CurvePoint::new(k, y, Some(beta)));
    }
    points.sort_by_key(|p| p.k);
    let entries = CalibrationInput::new(points).map_err(|source| MarketDataError::Input { as_of, source })?;
    Ok(MarketSnapshot { as_of, window, normalization, entries })
}

/// Long-format `date,tenor,yield,beta` table of every series; `beta` is blank
/// until `window` log-returns are available.
pub fn emit_plot_series(
    series: &[YieldSeries],
    window: usize,
    normalization: VolNormalization,
) -> Result<String, MarketDataError> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["date", "tenor", "yield", "beta"])?;
    for s in series {
        for (i, &(date, y)) in s.observations().iter().enumerate() {
            let beta = if i >= window && window > 0 {
                rolling_volatility(s, date, window, normalization)?.to_string()
            } else {
                String::new()
            };
            wtr.write_record([date.format(DATE_FORMAT).to_string(), s.tenor.to_string(), y.to_string(), beta])?;
        }
    }
    let bytes = wtr.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> NaiveDate {
        NaiveDate::parse_from_str(s, DATE_FORMAT).unwrap()
    }

    #[test]
    fn tenor_labels() {
        assert_eq!("6M".parse::<Tenor>().unwrap(), Tenor(6));
        assert_eq!("1Y".parse::<Tenor>().unwrap(), Tenor(12));
        assert_eq!("0.5".parse::<Tenor>().unwrap(), Tenor(6));
        assert_eq!("5".parse::<Tenor>().unwrap(), Tenor(60));
        assert_eq!(Tenor(6).to_string(), "6M");
        assert_eq!(Tenor(24).to_string(), "2Y");
        assert!("X".parse::<Tenor>().is_err());
        assert!("0.3".parse::<Tenor>().is_err());
    }

    #[test]
    fn percent_row() {
        let text = "DATE,1Y,5Y\n2003-05-23,1.36,3.42\n";
        let series = parse_yield_csv(text.as_bytes(), &CsvLayout::default()).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].tenor, Tenor::years(1));
        assert_eq!(series[0].observations(), &[(d("2003-05-23"), 1.36 / 100.0)]);
    }

    #[test]
    fn blank_cell_skips_one_tenor() {
        let text = "DATE,1Y,5Y\n2003-05-22,1.35,3.40\n2003-05-23,1.36,\n";
        let series = parse_yield_csv(text.as_bytes(), &CsvLayout::default()).unwrap();
        assert_eq!(series[0].len(), 2);
        assert_eq!(series[1].len(), 1);
    }

    #[test]
    fn shuffled_rows_are_sorted() {
        let text = "date,1Y\n2003-05-23,1.36\n2003-05-21,1.30\n2003-05-22,1.33\n";
        let series = parse_yield_csv(text.as_bytes(), &CsvLayout::default()).unwrap();
        let dates: Vec<_> = series[0].observations().iter().map(|o| o.0).collect();
        assert_eq!(dates, vec![d("2003-05-21"), d("2003-05-22"), d("2003-05-23")]);
    }

    #[test]
    fn errors_name_the_line() {
        let bad_date = "DATE,1Y\n2003-05-23,1.36\n23/05/2003,1.40\n";
        let err = parse_yield_csv(bad_date.as_bytes(), &CsvLayout::default()).unwrap_err();
        assert!(matches!(err, MarketDataError::BadDate { line: 3, .. }), "{}", err);
        let bad_yield = "DATE,1Y\n2003-05-23,abc\n";
        let err = parse_yield_csv(bad_yield.as_bytes(), &CsvLayout::default()).unwrap_err();
        assert!(matches!(err, MarketDataError::BadYield { line: 2, .. }), "{}", err);
        let negative = "DATE,1Y\n2003-05-23,-0.01\n";
        assert!(matches!(
            parse_yield_csv(negative.as_bytes(), &CsvLayout::default()),
            Err(MarketDataError::NonPositiveYield { .. })
        ));
        let empty = "DATE,1Y,2Y\n2003-05-23,1.2,\n";
        assert!(matches!(
            parse_yield_csv(empty.as_bytes(), &CsvLayout::default()),
            Err(MarketDataError::EmptySeries(Tenor(24)))
        ));
        let dup = "DATE,1Y\n2003-05-23,1.2\n2003-05-23,1.3\n";
        assert!(matches!(
            parse_yield_csv(dup.as_bytes(), &CsvLayout::default()),
            Err(MarketDataError::DuplicateDate { .. })
        ));
    }

    #[test]
    fn decimal_layout() {
        let text = "DATE,2Y\n2010-08-03,0.0051\n";
        let series = parse_yield_csv(text.as_bytes(), &CsvLayout::with_unit(YieldUnit::Decimal)).unwrap();
        assert_eq!(series[0].observations()[0].1, 0.0051);
    }

    fn daily(n: usize, f: impl Fn(usize) -> f64) -> YieldSeries {
        let start = d("2001-01-01");
        YieldSeries::new(Tenor::years(1), (0..n).map(|i| (start + chrono::Days::new(i as u64), f(i))).collect())
            .unwrap()
    }

    #[test]
    fn insufficient_history_names_first_usable_date() {
        let s = daily(300, |_| 0.02);
        let err = rolling_volatility(&s, d("2001-02-01"), 252, VolNormalization::RawSum).unwrap_err();
        match err {
            MarketDataError::InsufficientHistory { earliest, needed, .. } => {
                assert_eq!(needed, 253);
                assert_eq!(earliest, Some(d("2001-01-01") + chrono::Days::new(252)));
            }
            other => panic!("{}", other),
        }
        assert!(matches!(
            rolling_volatility(&s, d("1999-01-01"), 252, VolNormalization::RawSum),
            Err(MarketDataError::DateNotInSeries { .. })
        ));
    }

    #[test]
    fn alternating_series_window() {
        let s = daily(253, |i| if i % 2 == 0 { 0.02 } else { 0.02 * std::f64::consts::E });
        let last = s.observations()[252].0;
        let beta = rolling_volatility(&s, last, 252, VolNormalization::RawSum).unwrap();
        assert!((beta - 252f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn flat_curve_is_rejected_by_input_validation() {
        let series: Vec<YieldSeries> = (1..=5)
            .map(|k| {
                let s = daily(260, |_| 0.03);
                YieldSeries::new(Tenor::years(k), s.observations().to_vec()).unwrap()
            })
            .collect();
        let as_of = series[0].observations()[259].0;
        let err = build_calibration_input(&series, as_of, &[1, 2, 3, 4, 5], 252, VolNormalization::RawSum).unwrap_err();
        assert!(matches!(err, MarketDataError::Input { source: InputError::InvalidBeta { k: 2, .. }, .. }));
        let one = build_calibration_input(&series, as_of, &[1], 252, VolNormalization::RawSum).unwrap();
        assert_eq!(one.entries.periods(), 1);
        assert_eq!(one.entries.points()[0].beta, Some(0.0));
    }

    #[test]
    fn plot_series_warm_up() {
        let s = daily(300, |_| 0.015);
        let text = emit_plot_series(&[s], 252, VolNormalization::RawSum).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 300);
        assert!(rows[..252].iter().all(|r| r.ends_with(',')));
        assert!(rows[252..].iter().all(|r| r.ends_with(",0")));
    }
}
