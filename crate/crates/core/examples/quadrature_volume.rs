//! Integrates every catalog simplex in the Klein chart and compares the
//! result with its closed-form volume.

use std::time::Instant;

use horopack::catalog;
use horopack::volume::{closed_form_volume, quadrature_volume, QuadratureOptions};

fn main() -> horopack::error::Result<()> {
    let opts = QuadratureOptions::default();
    let start = Instant::now();
    println!(
        "{:8} {:>16} {:>16} {:>10} {:>8}",
        "witt", "closed form", "quadrature", "residual", "regions"
    );
    for s in &catalog::embedded().entries {
        let t = Instant::now();
        let q = quadrature_volume(s, None, &opts)?;
        let c = closed_form_volume(&s.volume);
        println!(
            "{:8} {:>16.12} {:>16.12} {:>10.2e} {:>8} {:>6.2}s",
            s.witt,
            c,
            q.volume,
            (c - q.volume).abs(),
            q.regions,
            t.elapsed().as_secs_f64()
        );
    }
    println!("total {:.2}s", start.elapsed().as_secs_f64());
    Ok(())
}
