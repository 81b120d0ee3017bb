//! Walks the catalog: validation checks of one entry and the subgroup lattice.

use horopack::catalog::{embedded, validate_simplex};

fn main() -> horopack::Result<()> {
    let c = embedded();
    let symbol = std::env::args().nth(1).unwrap_or_else(|| "VVhat3".into());
    let s = c.find(&symbol)?;
    println!(
        "{} {} class {} volume {}",
        s.display, s.notation, s.class, s.volume
    );
    if let Some(note) = &s.notes {
        println!("note: {note}");
    }
    for (i, v) in s.vertices.iter().enumerate() {
        let k = v.klein();
        let star = if s.ideal[i] { "*" } else { "" };
        println!("  A{i} = ({:.6}, {:.6}, {:.6}){star}", k[0], k[1], k[2]);
    }
    for check in validate_simplex(s).checks {
        println!(
            "  {:14} {:?} residual {:.1e} ({})",
            check.name, check.status, check.residual, check.detail
        );
    }

    println!("\nsubgroup lattice:");
    for l in c.subgroup_lattice() {
        println!(
            "  {:>7} -> {:7} index {}  volume ratio {:.9}  {}",
            l.edge.parent,
            l.edge.child,
            l.edge.index,
            l.ratio,
            if !l.closed_form {
                "numeric"
            } else if l.ok {
                "ok"
            } else {
                "off"
            }
        );
    }
    Ok(())
}
