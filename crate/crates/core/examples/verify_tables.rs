//! Optimal densities of all 23 tilings against the tabulated values.

use horopack::catalog::embedded;
use horopack::cli::format_ratios;
use horopack::packing::{verify_all, PackingOptions};

fn main() -> horopack::Result<()> {
    let rows = verify_all(embedded(), &PackingOptions::default())?;
    for v in &rows {
        let s = embedded().find(&v.witt)?;
        let ratios: Vec<f64> = v.optimum.best.ratios.values().copied().collect();
        println!(
            "{:7} {:>5} {:.9} {:>8} {:.1e}{}  {}",
            v.witt,
            s.paper_density.symbol().unwrap_or(""),
            v.optimum.best.density,
            v.paper_density,
            v.residual,
            if v.anomaly { " (anomaly)" } else { "" },
            format_ratios(&ratios)
        );
    }
    Ok(())
}
