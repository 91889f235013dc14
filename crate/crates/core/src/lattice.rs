//! Rate lattices and backward-induction pricing.
//!
//! Level `i` (time `i`, in periods) of a lattice holds the regular nodes
//! `j = 1..=i+1`, stored at index `j - 1`. A zero-rate lattice additionally
//! has a rail node `j = 0` at every level `i ≥ 1`, paying the fixed rate
//! `x0`.
//!
//! Transition rules, from a node at level `i` to level `i + 1`:
//!
//! | node            | successors (weight)                                 |
//! |-----------------|-----------------------------------------------------|
//! | BDT, any `j`    | `j + 1` (½), `j` (½)                                |
//! | ZBDT, `j ≥ 2`   | `j + 1` (½), `j` (½)                                |
//! | ZBDT, `j = 1`   | `2` (p̂), `1` (p̂), rail (p), with `p̂ = (1 − p)/2`     |
//! | ZBDT rail       | `1` (q), rail (1 − q)                               |

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::math::powf;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeError {
    Empty,
    /// Level `level` does not have `level + 1` rates.
    NotTriangular {
        level: usize,
        len: usize,
    },
    NonPositiveRate {
        level: usize,
        j: usize,
        rate: f64,
    },
    NotIncreasing {
        level: usize,
        j: usize,
    },
    /// The lowest regular rate must stay above the rail rate.
    BelowZirpRate {
        level: usize,
        rate: f64,
        x0: f64,
    },
    InvalidParams(&'static str),
    ZeroMaturity,
    MaturityTooLong {
        maturity: usize,
        periods: usize,
    },
    NonPositivePrice {
        price: f64,
    },
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::Empty => write!(f, "lattice has no levels"),
            LatticeError::NotTriangular { level, len } => {
                write!(f, "level {} must hold {} rates, found {}", level, level + 1, len)
            }
            LatticeError::NonPositiveRate { level, j, rate } => {
                write!(f, "rate at node ({}, {}) is not positive: {}", level, j, rate)
            }
            LatticeError::NotIncreasing { level, j } => {
                write!(f, "rates at level {} are not increasing at j = {}", level, j)
            }
            LatticeError::BelowZirpRate { level, rate, x0 } => {
                write!(f, "lowest rate at level {} ({}) does not exceed the rail rate {}", level, rate, x0)
            }
            LatticeError::InvalidParams(msg) => write!(f, "invalid ZIRP parameters: {}", msg),
            LatticeError::ZeroMaturity => write!(f, "bond maturity must be at least one period"),
            LatticeError::MaturityTooLong { maturity, periods } => {
                write!(f, "maturity {} exceeds the {} periods of the lattice", maturity, periods)
            }
            LatticeError::NonPositivePrice { price } => {
                write!(f, "bond price must be positive, got {}", price)
            }
        }
    }
}

impl core::error::Error for LatticeError {}

/// Crisis jump probability `p`, recovery probability `q` and rail rate `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZbdtParams {
    pub p: f64,
    pub q: f64,
    pub x0: f64,
}

impl ZbdtParams {
    /// `p = 0` is accepted: it switches the rail off and the lattice prices
    /// like a plain BDT tree.
    pub fn new(p: f64, q: f64, x0: f64) -> Result<Self, LatticeError> {
        if !(0.0..1.0).contains(&p) {
            return Err(LatticeError::InvalidParams("p must lie in [0, 1)"));
        }
        if !(q > 0.0 && q < 1.0) {
            return Err(LatticeError::InvalidParams("q must lie in (0, 1)"));
        }
        if !(x0 > 0.0) || !x0.is_finite() {
            return Err(LatticeError::InvalidParams("x0 must be positive"));
        }
        Ok(Self { p, q, x0 })
    }

    /// Weight `(1 − p)/2` of each regular branch out of a ternary node.
    pub fn p_hat(&self) -> f64 {
        (1.0 - self.p) / 2.0
    }
}

/// A node of a lattice level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Rail,
    /// Regular node `j ≥ 1`.
    Regular(usize),
}

/// Values attached to one level of a lattice.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Layer {
    /// Rail value, present on zero-rate lattices from level 1 on.
    pub rail: Option<f64>,
    /// Regular node values, `nodes[j - 1]` for `j = 1..=i+1`.
    pub nodes: Vec<f64>,
}

impl Layer {
    pub fn node(&self, j: usize) -> f64 {
        self.nodes[j - 1]
    }

    pub fn value(&self, node: Node) -> Option<f64> {
        match node {
            Node::Rail => self.rail,
            Node::Regular(j) => self.nodes.get(j.checked_sub(1)?).copied(),
        }
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Layer {
        Layer { rail: self.rail.map(&f), nodes: self.nodes.iter().map(|&v| f(v)).collect() }
    }
}

/// Common behaviour of the binomial and binary-ternary lattices.
pub trait RateTree {
    fn periods(&self) -> usize;

    /// Regular rates of level `i`, `r[i][1..=i+1]`.
    fn level(&self, i: usize) -> &[f64];

    fn zirp(&self) -> Option<&ZbdtParams>;

    fn has_rail(&self, i: usize) -> bool {
        self.zirp().is_some() && i >= 1
    }

    /// A level filled with `value`, shaped like level `i`.
    fn constant_layer(&self, i: usize, value: f64) -> Layer {
        Layer { rail: self.has_rail(i).then_some(value), nodes: vec![value; i + 1] }
    }

    /// Outgoing branches of `node` at level `i`, with their probabilities.
    fn branches(&self, i: usize, node: Node) -> Vec<(Node, f64)> {
        match (self.zirp(), node) {
            (Some(prm), Node::Rail) => vec![(Node::Regular(1), prm.q), (Node::Rail, 1.0 - prm.q)],
            (Some(prm), Node::Regular(1)) => {
                vec![(Node::Regular(2), prm.p_hat()), (Node::Regular(1), prm.p_hat()), (Node::Rail, prm.p)]
            }
            (_, Node::Regular(j)) => vec![(Node::Regular(j + 1), 0.5), (Node::Regular(j), 0.5)],
            (None, Node::Rail) => {
                debug_assert!(false, "BDT lattice has no rail at level {}", i);
                Vec::new()
            }
        }
    }

    /// Discounted expectation of the level `i + 1` values at each node of
    /// level `i`.
    fn step_back(&self, i: usize, next: &Layer) -> Layer {
        let rates = self.level(i);
        let nodes = match self.zirp() {
            None => (0..=i).map(|k| 0.5 * (next.nodes[k] + next.nodes[k + 1]) / (1.0 + rates[k])).collect(),
            Some(prm) => {
                let rail_next = next.rail.unwrap_or(0.0);
                (0..=i)
                    .map(|k| {
                        if k == 0 {
                            (prm.p_hat() * (next.nodes[0] + next.nodes[1]) + prm.p * rail_next) / (1.0 + rates[0])
                        } else {
                            0.5 * (next.nodes[k] + next.nodes[k + 1]) / (1.0 + rates[k])
                        }
                    })
                    .collect()
            }
        };
        let rail = match (self.zirp(), next.rail) {
            (Some(prm), Some(rail_next)) if i >= 1 => {
                Some((prm.q * next.nodes[0] + (1.0 - prm.q) * rail_next) / (1.0 + prm.x0))
            }
            _ => None,
        };
        Layer { rail, nodes }
    }

    /// Rolls `layer`, given at level `from`, back to the root.
    fn roll_back(&self, from: usize, layer: Layer) -> Vec<Layer> {
        let mut out = Vec::with_capacity(from + 1);
        out.push(layer);
        for i in (0..from).rev() {
            let prev = self.step_back(i, out.last().expect("non-empty"));
            out.push(prev);
        }
        out.reverse();
        out
    }

    /// Zero-coupon bond of `maturity` periods paying `face`.
    fn price_bond(&self, maturity: usize, face: f64) -> Result<PriceLattice, LatticeError> {
        if maturity == 0 {
            return Err(LatticeError::ZeroMaturity);
        }
        if maturity > self.periods() {
            return Err(LatticeError::MaturityTooLong { maturity, periods: self.periods() });
        }
        let terminal = self.constant_layer(maturity, face);
        Ok(PriceLattice { maturity, face, layers: self.roll_back(maturity, terminal) })
    }
}

/// Bond prices over the nodes of a lattice, `layers[i]` for `i = 0..=maturity`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PriceLattice {
    pub maturity: usize,
    pub face: f64,
    pub layers: Vec<Layer>,
}

impl PriceLattice {
    /// Model price at the root, `B[0][1]`.
    pub fn root(&self) -> f64 {
        self.layers[0].nodes[0]
    }

    pub fn layer(&self, i: usize) -> &Layer {
        &self.layers[i]
    }

    /// Yield of the bond seen from node `node` at level `i`.
    pub fn yield_at(&self, i: usize, node: Node) -> Result<f64, LatticeError> {
        let price = self.layers[i].value(node).ok_or(LatticeError::NonPositivePrice { price: f64::NAN })?;
        node_yield(price, self.maturity - i, self.face)
    }

    /// Payoff `max(B − strike, 0)` at every node of level `i`.
    pub fn call_payoff(&self, i: usize, strike: f64) -> Layer {
        self.layers[i].map(|b| (b - strike).max(0.0))
    }
}

/// Yield `(face / price)^(1/m) − 1` of a zero-coupon bond with `m` periods
/// left.
pub fn node_yield(price: f64, periods_remaining: usize, face: f64) -> Result<f64, LatticeError> {
    if !(price > 0.0) {
        return Err(LatticeError::NonPositivePrice { price });
    }
    if periods_remaining == 0 {
        return Err(LatticeError::ZeroMaturity);
    }
    Ok(powf(face / price, 1.0 / periods_remaining as f64) - 1.0)
}

fn validate_levels(rates: &[Vec<f64>]) -> Result<(), LatticeError> {
    if rates.is_empty() {
        return Err(LatticeError::Empty);
    }
    for (level, row) in rates.iter().enumerate() {
        if row.len() != level + 1 {
            return Err(LatticeError::NotTriangular { level, len: row.len() });
        }
        for (k, &rate) in row.iter().enumerate() {
            if !(rate > 0.0) || !rate.is_finite() {
                return Err(LatticeError::NonPositiveRate { level, j: k + 1, rate });
            }
            if k > 0 && !(rate > row[k - 1]) {
                return Err(LatticeError::NotIncreasing { level, j: k + 1 });
            }
        }
    }
    Ok(())
}

/// Classical Black-Derman-Toy tree: equiprobable up/down moves.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BdtLattice {
    rates: Vec<Vec<f64>>,
}

impl BdtLattice {
    /// `rates[i]` holds `r[i][1..=i+1]` as decimal rates.
    pub fn new(rates: Vec<Vec<f64>>) -> Result<Self, LatticeError> {
        validate_levels(&rates)?;
        Ok(Self { rates })
    }

    pub(crate) fn from_rates_unchecked(rates: Vec<Vec<f64>>) -> Self {
        Self { rates }
    }

    pub fn rates(&self) -> &[Vec<f64>] {
        &self.rates
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.rates[i][j - 1]
    }

    /// The first `n` levels.
    pub fn truncated(&self, n: usize) -> Self {
        Self { rates: self.rates[..n].to_vec() }
    }
}

impl RateTree for BdtLattice {
    fn periods(&self) -> usize {
        self.rates.len()
    }

    fn level(&self, i: usize) -> &[f64] {
        &self.rates[i]
    }

    fn zirp(&self) -> Option<&ZbdtParams> {
        None
    }
}

/// BDT tree with a zero-interest-rate rail below the lowest regular node.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ZbdtLattice {
    rates: Vec<Vec<f64>>,
    params: ZbdtParams,
}

impl ZbdtLattice {
    pub fn new(rates: Vec<Vec<f64>>, params: ZbdtParams) -> Result<Self, LatticeError> {
        validate_levels(&rates)?;
        let params = ZbdtParams::new(params.p, params.q, params.x0)?;
        for (level, row) in rates.iter().enumerate().skip(1) {
            if !(row[0] > params.x0) {
                return Err(LatticeError::BelowZirpRate { level, rate: row[0], x0: params.x0 });
            }
        }
        Ok(Self { rates, params })
    }

    pub(crate) fn from_rates_unchecked(rates: Vec<Vec<f64>>, params: ZbdtParams) -> Self {
        Self { rates, params }
    }

    pub fn rates(&self) -> &[Vec<f64>] {
        &self.rates
    }

    pub fn rate(&self, i: usize, j: usize) -> f64 {
        self.rates[i][j - 1]
    }

    pub fn params(&self) -> &ZbdtParams {
        &self.params
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self { rates: self.rates[..n].to_vec(), params: self.params }
    }
}

impl RateTree for ZbdtLattice {
    fn periods(&self) -> usize {
        self.rates.len()
    }

    fn level(&self, i: usize) -> &[f64] {
        &self.rates[i]
    }

    fn zirp(&self) -> Option<&ZbdtParams> {
        Some(&self.params)
    }
}

/// Either lattice, for code that handles both models uniformly.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "model", rename_all = "snake_case"))]
pub enum RateLattice {
    Bdt(BdtLattice),
    Zbdt(ZbdtLattice),
}

impl RateLattice {
    pub fn rates(&self) -> &[Vec<f64>] {
        match self {
            RateLattice::Bdt(l) => l.rates(),
            RateLattice::Zbdt(l) => l.rates(),
        }
    }
}

impl RateTree for RateLattice {
    fn periods(&self) -> usize {
        self.rates().len()
    }

    fn level(&self, i: usize) -> &[f64] {
        &self.rates()[i]
    }

    fn zirp(&self) -> Option<&ZbdtParams> {
        match self {
            RateLattice::Bdt(_) => None,
            RateLattice::Zbdt(l) => Some(l.params()),
        }
    }
}

impl From<BdtLattice> for RateLattice {
    fn from(l: BdtLattice) -> Self {
        RateLattice::Bdt(l)
    }
}

impl From<ZbdtLattice> for RateLattice {
    fn from(l: ZbdtLattice) -> Self {
        RateLattice::Zbdt(l)
    }
}
