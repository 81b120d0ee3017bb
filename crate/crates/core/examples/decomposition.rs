//! Orthoscheme decompositions of the four cyclic nonarithmetic simplices.

use horopack::catalog::embedded;
use horopack::volume::{decomposition_check, QuadratureOptions};

fn main() -> horopack::Result<()> {
    let opts = QuadratureOptions::default();
    for w in ["AVhat3", "BVhat3", "HVhat3", "CRhat3"] {
        let d = decomposition_check(embedded(), w, &opts)?;
        println!("{}", embedded().find(w)?.display);
        for t in &d.terms {
            let src = t.source.as_deref().unwrap_or("quadrature");
            println!("  {:40} {:.12}  ({src})", t.label, t.value);
        }
        println!(
            "  sum {:.12}  table {}  quadrature {:.12}  residuals {:.1e} / {:.1e}\n",
            d.sum, d.table_value, d.quadrature_value, d.residual, d.quadrature_residual
        );
    }
    Ok(())
}
