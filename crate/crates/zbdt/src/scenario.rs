//! Scenario runner: market curve → BDT and ZBDT calibration → bond grids and
//! option tables.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use zbdt_core::{
    calibrate_bdt, calibrate_zbdt_with, BetaTarget, CalibrationError, CalibrationInput, EuropeanCall, OptionQuote,
    PriceLattice, PricingError, RateTree, SolverConfig, StepSolution, VolNormalization, ZbdtParams, FACE_VALUE,
};

use crate::formats;
use crate::market_data::{build_calibration_input, MarketDataError, YieldSeries, DEFAULT_WINDOW};

#[derive(Debug, Error)]
#[error("scenario `{scenario}`: {kind}")]
pub struct ScenarioError {
    pub scenario: String,
    #[source]
    pub kind: ScenarioErrorKind,
}

#[derive(Debug, Error)]
pub enum ScenarioErrorKind {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("`as_of` needs a yield data file")]
    MissingData,
    #[error(transparent)]
    MarketData(#[from] MarketDataError),
    #[error("{model} calibration: {source}")]
    Calibration { model: &'static str, source: CalibrationError },
    #[error("option on the {maturity}-year bond needs {maturity} lattice periods, the curve has {periods}")]
    OptionBeyondLattice { maturity: usize, periods: usize },
    #[error("{model} option at strike {strike}: {source}")]
    Pricing { model: &'static str, strike: f64, source: PricingError },
    #[error("writing {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Data-file settings used in `as_of` mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarketSettings {
    pub window: usize,
    pub maturities: Vec<u32>,
    pub vol_normalization: VolNormalization,
}

impl Default for MarketSettings {
    fn default() -> Self {
        Self { window: DEFAULT_WINDOW, maturities: (1..=5).collect(), vol_normalization: VolNormalization::RawSum }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZbdtSettings {
    pub p: f64,
    pub q: f64,
    pub x0: f64,
    pub beta_target: BetaTarget,
}

impl Default for ZbdtSettings {
    fn default() -> Self {
        Self { p: 0.02, q: 0.07, x0: 0.0025, beta_target: BetaTarget::StdDev }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptionSettings {
    pub strikes: Vec<f64>,
    pub exercise: usize,
    pub maturity: usize,
}

impl Default for OptionSettings {
    fn default() -> Self {
        Self { strikes: (80..=99).map(f64::from).collect(), exercise: 2, maturity: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Rates,
    Bonds,
    Options,
    MarketView,
}

fn all_outputs() -> BTreeSet<Output> {
    [Output::Rates, Output::Bonds, Output::Options, Output::MarketView].into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub as_of: Option<NaiveDate>,
    #[serde(default)]
    pub direct_input: Option<CalibrationInput>,
    #[serde(default = "all_outputs")]
    pub outputs: BTreeSet<Output>,
    #[serde(default)]
    pub market: MarketSettings,
    #[serde(default)]
    pub zbdt: ZbdtSettings,
    #[serde(default)]
    pub option: OptionSettings,
    #[serde(default)]
    pub solver: SolverConfig,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let fail = |msg: &str| Err(self.error(ScenarioErrorKind::Config(msg.into())));
        if self.name.trim().is_empty() {
            return fail("name is empty");
        }
        match (&self.as_of, &self.direct_input) {
            (Some(_), Some(_)) => return fail("give either `as_of` or `direct_input`, not both"),
            (None, None) => return fail("one of `as_of` or `direct_input` is required"),
            _ => {}
        }
        if self.option.strikes.is_empty() {
            return fail("strike grid is empty");
        }
        if self.option.strikes.iter().any(|k| !(*k > 0.0) || !k.is_finite()) {
            return fail("strikes must be positive");
        }
        if self.option.exercise == 0 || self.option.exercise >= self.option.maturity {
            return fail("option exercise must satisfy 0 < S < T");
        }
        if let Err(e) = ZbdtParams::new(self.zbdt.p, self.zbdt.q, self.zbdt.x0) {
            return fail(&e.to_string());
        }
        Ok(())
    }

    fn error(&self, kind: ScenarioErrorKind) -> ScenarioError {
        ScenarioError { scenario: self.name.clone(), kind }
    }
}

/// The curve a scenario was calibrated to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarketView {
    pub as_of: Option<NaiveDate>,
    pub window: Option<usize>,
    pub entries: CalibrationInput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    /// Short rates by level, decimal.
    pub rates: Vec<Vec<f64>>,
    /// Prices of the option's underlying bond at every node.
    pub bonds: PriceLattice,
    pub steps: Vec<StepSolution>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuoteRow {
    pub strike: f64,
    pub bdt_price: f64,
    pub bdt_iv: f64,
    pub zbdt_price: f64,
    pub zbdt_iv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub market_view: MarketView,
    pub zbdt_params: ZbdtParams,
    pub beta_target: BetaTarget,
    pub bdt: ModelReport,
    pub zbdt: ModelReport,
    pub exercise: usize,
    pub maturity: usize,
    pub options: Vec<QuoteRow>,
}

fn quotes<T: RateTree>(tree: &T, cfg: &ScenarioConfig, model: &'static str) -> Result<Vec<OptionQuote>, ScenarioError> {
    cfg.option
        .strikes
        .iter()
        .map(|&strike| {
            EuropeanCall::new(strike, cfg.option.exercise, cfg.option.maturity, FACE_VALUE)
                .and_then(|call| OptionQuote::from_lattice(tree, &call))
                .map_err(|source| cfg.error(ScenarioErrorKind::Pricing { model, strike, source }))
        })
        .collect()
}

/// Runs one scenario. `data` is required when the config uses `as_of`.
pub fn run_scenario(cfg: &ScenarioConfig, data: Option<&[YieldSeries]>) -> Result<ScenarioReport, ScenarioError> {
    cfg.validate()?;
    let market_view = match (&cfg.direct_input, cfg.as_of) {
        (Some(input), _) => MarketView { as_of: None, window: None, entries: input.clone() },
        (None, Some(as_of)) => {
            let series = data.ok_or_else(|| cfg.error(ScenarioErrorKind::MissingData))?;
            let m = &cfg.market;
            let snap = build_calibration_input(series, as_of, &m.maturities, m.window, m.vol_normalization)
                .map_err(|e| cfg.error(e.into()))?;
            MarketView { as_of: Some(snap.as_of), window: Some(snap.window), entries: snap.entries }
        }
        (None, None) => unreachable!("validated"),
    };
    let input = &market_view.entries;
    let periods = input.periods();
    if cfg.option.maturity > periods {
        return Err(cfg.error(ScenarioErrorKind::OptionBeyondLattice { maturity: cfg.option.maturity, periods }));
    }

    let params = ZbdtParams::new(cfg.zbdt.p, cfg.zbdt.q, cfg.zbdt.x0).expect("validated");
    let bdt = calibrate_bdt(input, &cfg.solver)
        .map_err(|source| cfg.error(ScenarioErrorKind::Calibration { model: "BDT", source }))?;
    let zbdt = calibrate_zbdt_with(input, &params, cfg.zbdt.beta_target, &cfg.solver)
        .map_err(|source| cfg.error(ScenarioErrorKind::Calibration { model: "ZBDT", source }))?;

    let bond_err = |model, e: zbdt_core::LatticeError| {
        cfg.error(ScenarioErrorKind::Pricing { model, strike: 0.0, source: e.into() })
    };
    let bdt_bonds = bdt.lattice.price_bond(cfg.option.maturity, FACE_VALUE).map_err(|e| bond_err("BDT", e))?;
    let zbdt_bonds = zbdt.lattice.price_bond(cfg.option.maturity, FACE_VALUE).map_err(|e| bond_err("ZBDT", e))?;
    let bdt_quotes = quotes(&bdt.lattice, cfg, "BDT")?;
    let zbdt_quotes = quotes(&zbdt.lattice, cfg, "ZBDT")?;
    let options = bdt_quotes
        .iter()
        .zip(&zbdt_quotes)
        .map(|(b, z)| QuoteRow {
            strike: b.strike,
            bdt_price: b.price,
            bdt_iv: b.implied_vol,
            zbdt_price: z.price,
            zbdt_iv: z.implied_vol,
        })
        .collect();

    Ok(ScenarioReport {
        name: cfg.name.clone(),
        market_view,
        zbdt_params: params,
        beta_target: cfg.zbdt.beta_target,
        bdt: ModelReport { rates: bdt.lattice.rates().to_vec(), bonds: bdt_bonds, steps: bdt.steps },
        zbdt: ModelReport { rates: zbdt.lattice.rates().to_vec(), bonds: zbdt_bonds, steps: zbdt.steps },
        exercise: cfg.option.exercise,
        maturity: cfg.option.maturity,
        options,
    })
}

fn rate_layers(rates: &[Vec<f64>]) -> Vec<zbdt_core::Layer> {
    rates.iter().map(|r| zbdt_core::Layer { rail: None, nodes: r.clone() }).collect()
}

/// Bond grid without the maturity level, as printed in lattice tables.
fn bond_layers(bonds: &PriceLattice) -> &[zbdt_core::Layer] {
    &bonds.layers[..bonds.maturity]
}

impl ScenarioReport {
    /// Files to write for `outputs`, as (file name, contents).
    pub fn files(&self, outputs: &BTreeSet<Output>) -> Vec<(String, String)> {
        let n = &self.name;
        let mut files = Vec::new();
        if outputs.contains(&Output::Rates) {
            files.push((format!("{}_rates_bdt.csv", n), formats::grid_csv(&rate_layers(&self.bdt.rates), 100.0, 2)));
            files.push((format!("{}_rates_zbdt.csv", n), formats::grid_csv(&rate_layers(&self.zbdt.rates), 100.0, 2)));
        }
        if outputs.contains(&Output::Bonds) {
            files.push((format!("{}_bonds_bdt.csv", n), formats::grid_csv(bond_layers(&self.bdt.bonds), 1.0, 2)));
            files.push((format!("{}_bonds_zbdt.csv", n), formats::grid_csv(bond_layers(&self.zbdt.bonds), 1.0, 2)));
        }
        if outputs.contains(&Output::Options) {
            files.push((format!("{}_options.csv", n), formats::quotes_csv(&self.options)));
        }
        if outputs.contains(&Output::MarketView) {
            files.push((format!("{}_market_view.json", n), to_json(&self.market_view)));
        }
        files
    }

    /// Human-readable tables, rounded like printed lattice tables.
    pub fn render_tables(&self, outputs: &BTreeSet<Output>) -> String {
        let mut out = format!("== {} ==\n", self.name);
        if outputs.contains(&Output::MarketView) {
            out.push_str("market view\n    k        y(k)       beta(k)\n");
            for p in self.market_view.entries.points() {
                let beta = p.beta.map(|b| format!("{:.6}", b)).unwrap_or_default();
                out.push_str(&format!("{:>5} {:>10.4}% {:>12}\n", p.k, p.y * 100.0, beta));
            }
            out.push('\n');
        }
        if outputs.contains(&Output::Rates) {
            out.push_str(&formats::grid_table("BDT rates (%)", &rate_layers(&self.bdt.rates), 100.0, 2));
            out.push('\n');
            out.push_str(&formats::grid_table("ZBDT rates (%)", &rate_layers(&self.zbdt.rates), 100.0, 2));
            out.push('\n');
        }
        if outputs.contains(&Output::Bonds) {
            out.push_str(&formats::grid_table("BDT bond prices", bond_layers(&self.bdt.bonds), 1.0, 2));
            out.push('\n');
            out.push_str(&formats::grid_table("ZBDT bond prices", bond_layers(&self.zbdt.bonds), 1.0, 2));
            out.push('\n');
        }
        if outputs.contains(&Output::Options) {
            let title = format!("calls on the {}-year bond exercised at year {}", self.maturity, self.exercise);
            out.push_str(&formats::quotes_table(&title, &self.options));
        }
        out
    }

    /// CSV blocks of every selected output, each preceded by its file name.
    pub fn render_csv(&self, outputs: &BTreeSet<Output>) -> String {
        self.files(outputs)
            .into_iter()
            .map(|(name, body)| format!("# {}\n{}", name, body))
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Writes the selected outputs plus the full-precision report into `dir`.
    pub fn write(&self, outputs: &BTreeSet<Output>, dir: &Path) -> Result<Vec<PathBuf>, ScenarioError> {
        let io_err = |path: &Path, source| ScenarioError {
            scenario: self.name.clone(),
            kind: ScenarioErrorKind::Io { path: path.to_path_buf(), source },
        };
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let mut files = self.files(outputs);
        files.push((format!("{}_report.json", self.name), to_json(self)));
        let mut written = Vec::with_capacity(files.len());
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| io_err(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Pretty JSON at full precision.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}
