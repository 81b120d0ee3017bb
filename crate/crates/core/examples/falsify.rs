//! Random search for packings denser than the anchored optimum.
//!
//! `cargo run --release --example falsify -- 100000 7` samples 10⁵ packings per
//! multi-cusp tiling with seed 7.

use horopack::catalog::embedded;
use horopack::packing::{falsify, optimize, PackingOptions};

fn main() -> horopack::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|a| a.parse().ok()).unwrap_or(20_000);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let opts = PackingOptions {
        samples,
        seed,
        ..Default::default()
    };
    let quick = PackingOptions { samples: 0, ..opts };
    for s in embedded().entries.iter().filter(|s| s.n_ideal() > 1) {
        let opt = optimize(s, &quick)?;
        let f = falsify(s, opt.best.density, &opt.configurations, &opts)?;
        println!(
            "{:7} optimum {:.12}  best sampled {:.12}  gap {:.1e}  {} samples ({} drawn), {} violations",
            s.witt,
            opt.best.density,
            f.best_sampled,
            opt.best.density - f.best_sampled,
            f.samples,
            f.drawn,
            f.violations
        );
    }
    Ok(())
}
