//! Yield-data ingestion, scenario runner and file formats around the
//! `zbdt-core` lattice models.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod formats;
pub mod market_data;
pub mod scenario;

pub use zbdt_core as model;
