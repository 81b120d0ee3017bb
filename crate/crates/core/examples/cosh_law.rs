//! Moving the tangency point of two horoballs by `x` multiplies their total
//! volume by `cosh 2x`.

use horopack::catalog::embedded;
use horopack::packing::tangency_shift_ratio;

fn main() -> horopack::Result<()> {
    for s in embedded().entries.iter().filter(|s| s.n_ideal() == 2) {
        let iv = s.ideal_vertices();
        print!("{:7}", s.witt);
        for x in [-0.2, -0.1, 0.05, 0.1, 0.2] {
            let r = tangency_shift_ratio(s, iv[0], iv[1], x)?;
            print!("  {x:>5}: {:.1e}", r - (2.0 * x).cosh());
        }
        println!();
    }
    Ok(())
}
