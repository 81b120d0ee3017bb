//! Optimal horoball packing of one tiling with every anchored alternative.
//!
//! `cargo run --example optimize_tiling -- RRhat3`

use horopack::catalog::embedded;
use horopack::packing::{edge_points, maximal_s, optimize, PackingOptions};

fn main() -> horopack::Result<()> {
    let symbol = std::env::args().nth(1).unwrap_or_else(|| "VP3".into());
    let s = embedded().find(&symbol)?;
    println!("{} ({}), volume {}", s.display, s.notation, s.volume);
    for i in s.ideal_vertices() {
        println!("  cap s{i} = {:.12}", maximal_s(s, i)?);
    }

    let opt = optimize(s, &PackingOptions::default())?;
    for r in &opt.configurations {
        println!(
            "\nanchor A{}: density {:.12}",
            r.configuration.anchor, r.density
        );
        for (&i, &si) in &r.configuration.s {
            println!(
                "  B{i}: s = {si:>15.12}  piece {:.12}  ratio {:.9}",
                r.piece_volumes[&i], r.ratios[&i]
            );
            for (j, h) in edge_points(s, &r.configuration, i)? {
                let k = h.klein();
                println!(
                    "      edge to A{j}: ({:.6}, {:.6}, {:.6})",
                    k[0], k[1], k[2]
                );
            }
        }
    }
    println!(
        "\nbest {:.12} from {} maximizing configuration(s)",
        opt.best.density,
        opt.maximizers.len()
    );
    if let Some(f) = opt.falsification {
        println!(
            "{} random packings, best {:.12}, {} above the optimum",
            f.samples, f.best_sampled, f.violations
        );
    }
    Ok(())
}
