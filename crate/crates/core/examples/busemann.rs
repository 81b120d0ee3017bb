//! The Busemann function and how it parametrizes horoballs.

use horopack::horoball::{busemann, edge_intersection, s_through, Horoball};
use horopack::lorentz::{apply_isometry, LorentzIsometry, ProjectivePoint};

fn main() -> horopack::Result<()> {
    let xi = ProjectivePoint::new([1.0, 0.0, 0.0, 1.0])?;
    let o = ProjectivePoint::new([1.0, 0.0, 0.0, 0.0])?;
    let x = ProjectivePoint::from_klein([0.3, -0.2, 0.1]);
    let y = ProjectivePoint::from_klein([-0.1, 0.4, 0.5]);

    let bxy = busemann(&x, &y, &xi)?;
    println!("β(x, y, ξ) = {bxy:.12}");
    println!("β(y, x, ξ) = {:.12}", busemann(&y, &x, &xi)?);
    println!(
        "β(x, o) + β(o, y) = {:.12}",
        busemann(&x, &o, &xi)? + busemann(&o, &y, &xi)?
    );

    // Points on the axis toward ξ.
    for s in [-0.5, 0.0, 0.5] {
        let p = ProjectivePoint::new([1.0, 0.0, 0.0, s])?;
        println!(
            "axis point s = {s:>4}: tanh β(o, p, ξ) = {:.12}",
            s_through(&xi, &p)?
        );
    }

    // A horoball's boundary point on a ray keeps its s after any isometry.
    let ball = Horoball::new(xi, 0.25)?;
    let h = edge_intersection(&ball, &ProjectivePoint::from_klein([0.5, 0.0, 0.0]))?;
    let g = LorentzIsometry::boost(2, -0.8).compose(&LorentzIsometry::rotation(1, 3, 1.1));
    let moved = ball.transformed(&g)?;
    println!(
        "s = {:.6}, moved s = {:.6}, level of the moved boundary point = {:.2e}",
        ball.s(),
        moved.s(),
        moved.level(&apply_isometry(&g, &h)?)?
    );
    Ok(())
}
