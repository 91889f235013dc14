//! Display and CSV layouts for lattice grids and option tables.
//!
//! Grids are laid out like printed lattice tables: one column per level
//! `t = 0..n-1`, the highest node on top, the root on the bottom row, and for
//! bond grids of a zero-rate lattice an extra `zirp` row underneath.

use std::fmt::Write as _;

use zbdt_core::Layer;

use crate::scenario::QuoteRow;

/// Rows of a grid, top to bottom: label and one optional cell per level.
fn grid_rows(layers: &[Layer], scale: f64, decimals: usize) -> Vec<(String, Vec<Option<String>>)> {
    let height = layers.iter().map(|l| l.nodes.len()).max().unwrap_or(0);
    let cell = |v: f64| format!("{:.*}", decimals, v * scale);
    let mut rows: Vec<(String, Vec<Option<String>>)> = (1..=height)
        .rev()
        .map(|j| (j.to_string(), layers.iter().map(|l| l.nodes.get(j - 1).map(|&v| cell(v))).collect()))
        .collect();
    if layers.iter().any(|l| l.rail.is_some()) {
        rows.push(("zirp".into(), layers.iter().map(|l| l.rail.map(cell)).collect()));
    }
    rows
}

/// Grid as CSV: header `j,t0,t1,...`, blank cells where a level has no node.
pub fn grid_csv(layers: &[Layer], scale: f64, decimals: usize) -> String {
    let mut out = String::from("j");
    for t in 0..layers.len() {
        let _ = write!(out, ",t{}", t);
    }
    out.push('\n');
    for (label, cells) in grid_rows(layers, scale, decimals) {
        out.push_str(&label);
        for c in cells {
            out.push(',');
            out.push_str(c.as_deref().unwrap_or(""));
        }
        out.push('\n');
    }
    out
}

/// Grid as an aligned text table.
pub fn grid_table(title: &str, layers: &[Layer], scale: f64, decimals: usize) -> String {
    let rows = grid_rows(layers, scale, decimals);
    let width = rows.iter().flat_map(|(_, cells)| cells.iter().flatten().map(String::len)).max().unwrap_or(4).max(4);
    let mut out = format!("{}\n", title);
    let _ = write!(out, "{:>5}", "");
    for t in 0..layers.len() {
        let _ = write!(out, " {:>width$}", format!("t={}", t), width = width);
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "{:>5}", label);
        for c in cells {
            let _ = write!(out, " {:>width$}", c.unwrap_or_default(), width = width);
        }
        out.push('\n');
    }
    out
}

/// Option table as CSV with four decimals.
pub fn quotes_csv(rows: &[QuoteRow]) -> String {
    let mut out = String::from("strike,bdt_price,bdt_iv,zbdt_price,zbdt_iv\n");
    for r in rows {
        let _ = writeln!(out, "{},{:.4},{:.4},{:.4},{:.4}", r.strike, r.bdt_price, r.bdt_iv, r.zbdt_price, r.zbdt_iv);
    }
    out
}

pub fn quotes_table(title: &str, rows: &[QuoteRow]) -> String {
    let mut out = format!("{}\n{:>8} {:>10} {:>8} {:>10} {:>8}\n", title, "strike", "BDT", "v", "ZBDT", "v");
    for r in rows {
        let _ = writeln!(
            out,
            "{:>8} {:>10.4} {:>8.4} {:>10.4} {:>8.4}",
            r.strike, r.bdt_price, r.bdt_iv, r.zbdt_price, r.zbdt_iv
        );
    }
    out
}
