//! Points, hyperplanes and isometries of the projective Lorentz model.

use horopack::lorentz::{
    apply_isometry, distance, gram_of_simplex, pole, project_onto_plane, HyperplaneForm,
    LorentzIsometry, ProjectivePoint,
};

fn main() -> horopack::Result<()> {
    let o = ProjectivePoint::new([1.0, 0.0, 0.0, 0.0])?;
    let a = ProjectivePoint::from_klein([0.5, 0.0, 0.0]);
    let north = ProjectivePoint::new([1.0, 0.0, 0.0, 1.0])?;
    let outside = ProjectivePoint::new([1.0, 2.0, 0.0, 0.0])?;
    for (name, p) in [
        ("o", &o),
        ("a", &a),
        ("north", &north),
        ("outside", &outside),
    ] {
        println!("{name:8} {:?} {:?}", p.coords(), p.kind());
    }
    println!(
        "d(o, a) = {:.12} (artanh 1/2 = {:.12})",
        distance(&o, &a)?,
        0.5f64.atanh()
    );

    let g = LorentzIsometry::boost(1, 0.7).compose(&LorentzIsometry::rotation(1, 2, 0.3));
    let (ga, go) = (apply_isometry(&g, &a)?, apply_isometry(&g, &o)?);
    println!("after an isometry d = {:.12}", distance(&go, &ga)?);

    let u = HyperplaneForm::new([0.0, 0.0, 0.0, 1.0])?;
    println!("pole of x3 = 0: {:?}", pole(&u).coords());
    let p = ProjectivePoint::from_klein([0.2, 0.1, 0.4]);
    println!(
        "foot of {:?} on x3 = 0: {:?}",
        p.klein(),
        project_onto_plane(&p, &u)?.klein()
    );

    let frame = LorentzIsometry::frame_to_north(&ProjectivePoint::new([1.0, 0.6, 0.0, -0.8])?)?;
    println!(
        "frame_to_north sends (1,0.6,0,-0.8) to {:?}",
        frame.apply_vec(&[1.0, 0.6, 0.0, -0.8])
    );

    let v3 = &horopack::catalog::embedded().find("V3")?;
    let gram = gram_of_simplex(&v3.faces);
    println!("V3 Gram matrix (signature {:?}):", gram.signature(1e-10));
    for row in gram.entries {
        println!(
            "  {:>9.5} {:>9.5} {:>9.5} {:>9.5}",
            row[0], row[1], row[2], row[3]
        );
    }
    Ok(())
}
