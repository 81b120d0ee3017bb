//! The maximal horoball of the simplex P3 and the volume of its piece.

use horopack::catalog::embedded;
use horopack::horoball::{edge_intersection, horoball_piece_volume, Horoball};
use horopack::packing::maximal_s;

fn main() -> horopack::Result<()> {
    let s = embedded().find("P3")?;
    let cap = maximal_s(s, 0)?;
    println!("{} maximal s0 = {cap:.12}", s.display);

    let ball = Horoball::new(s.vertices[0], cap)?;
    for j in 1..4 {
        let h = edge_intersection(&ball, &s.vertices[j])?;
        let c = h.coords();
        println!(
            "H{j} = (1, {:.9}, {:.9}, {:.9})",
            c[1] / c[0],
            c[2] / c[0],
            c[3] / c[0]
        );
    }
    let far = [s.vertices[1], s.vertices[2], s.vertices[3]];
    let v = horoball_piece_volume(&ball, &far)?;
    println!(
        "piece volume {v:.12}, 1/(8√3) = {:.12}",
        1.0 / (8.0 * 3f64.sqrt())
    );

    // Shrinking the ball by a Busemann offset t scales the piece by e^{-2t}.
    for t in [0.1, 0.5, 1.0] {
        let smaller = Horoball::from_offset(s.vertices[0], cap.atanh() + t)?;
        let w = horoball_piece_volume(&smaller, &far)?;
        println!(
            "offset +{t}: ratio {:.12}, e^(-2t) = {:.12}",
            w / v,
            (-2.0 * t).exp()
        );
    }
    Ok(())
}
