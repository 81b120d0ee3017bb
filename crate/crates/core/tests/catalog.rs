use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use horopack::catalog::{
    embedded, load_catalog, load_catalog_from_str, validate_simplex, CheckStatus,
    CommensurabilityClass, EMBEDDED_CATALOG,
};
use horopack::volume::{
    closed_form_volume, decomposition_check, lobachevsky, quadrature_volume, QuadratureOptions,
};
use horopack::Error;

#[test]
fn embedded_catalog_has_23_valid_entries() {
    let c = load_catalog(None).unwrap();
    assert_eq!(c.entries.len(), 23);
    for e in &c.entries {
        let report = validate_simplex(e);
        let hard: Vec<_> = report
            .checks
            .iter()
            .filter(|k| k.status == CheckStatus::Fail)
            .collect();
        assert!(hard.is_empty(), "{}: {hard:?}", e.witt);
    }
}

#[test]
fn v3_coordinates_and_angles() {
    let v3 = embedded().find("V3").unwrap();
    let s3 = 3f64.sqrt();
    let expect = [
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [1.0, 0.5, 0.0, 0.0],
        [1.0, 0.5, s3 / 6.0, 0.0],
    ];
    for (v, e) in v3.vertices.iter().zip(expect) {
        let c = v.coords();
        for k in 0..4 {
            assert_abs_diff_eq!(c[k] / c[0], e[k], epsilon = 1e-15);
        }
    }
    assert_eq!(v3.ideal, [true, false, false, false]);
    let g = v3.gram();
    let mut angles: Vec<f64> = v3
        .schlafli_edges
        .iter()
        .map(|&(i, j, _)| g.dihedral_angle(i, j).unwrap())
        .collect();
    angles.sort_by(f64::total_cmp);
    assert_abs_diff_eq!(angles[0], PI / 6.0, epsilon = 1e-12);
    assert_abs_diff_eq!(angles[1], PI / 3.0, epsilon = 1e-12);
    assert_abs_diff_eq!(angles[2], PI / 3.0, epsilon = 1e-12);
}

#[test]
fn ideal_counts_per_class() {
    let c = embedded();
    assert_eq!(c.find("RRhat3").unwrap().n_ideal(), 4);
    let mut counts: Vec<usize> = c
        .entries
        .iter()
        .filter(|e| e.class == CommensurabilityClass::C336)
        .map(|e| e.n_ideal())
        .collect();
    counts.sort();
    counts.dedup();
    assert_eq!(counts, vec![1, 2, 3, 4]);
}

#[test]
fn lookup_accepts_display_symbols_and_aliases() {
    let c = embedded();
    assert_eq!(c.find("V̄₃").unwrap().witt, "V3");
    assert_eq!(c.find("R̂R₃").unwrap().witt, "RRhat3");
    assert!(matches!(c.find("Q3"), Err(Error::UnknownSymbol(_))));
}

#[test]
fn lattice_examples() {
    let lattice = embedded().subgroup_lattice();
    let edge = |p: &str, ch: &str| {
        lattice
            .iter()
            .find(|l| l.edge.parent == p && l.edge.child == ch)
            .unwrap()
    };
    for (p, ch, index) in [("V3", "P3", 2), ("V3", "Z3", 6), ("R3", "N3", 3)] {
        let l = edge(p, ch);
        assert_eq!(l.edge.index, index);
        assert!(l.closed_form && l.ok);
        assert_abs_diff_eq!(l.ratio, index as f64, epsilon = 1e-12);
    }
    assert!(lattice.iter().all(|l| !l.closed_form || l.ok));
}

#[test]
fn table_volumes() {
    let c = embedded();
    let l3 = lobachevsky(PI / 3.0);
    let l4 = lobachevsky(PI / 4.0);
    let vol = |w: &str| closed_form_volume(&c.find(w).unwrap().volume);
    assert_abs_diff_eq!(vol("V3"), l3 / 8.0, epsilon = 1e-15);
    assert_abs_diff_eq!(vol("R3"), l4 / 6.0, epsilon = 1e-15);
    assert_abs_diff_eq!(vol("PPhat3"), 3.0 * l3, epsilon = 1e-14);
    assert_abs_diff_eq!(vol("DV3"), vol("BP3"), epsilon = 1e-15);
    let hv = c.find("HVhat3").unwrap();
    assert_eq!(hv.volume.printed_value, Some(0.672985));
}

#[test]
fn quadrature_confirms_the_disputed_volumes() {
    let c = embedded();
    let opts = QuadratureOptions::default();
    let l3 = lobachevsky(PI / 3.0);
    for (w, coeff) in [("DV3", 5.0 / 8.0), ("BP3", 5.0 / 8.0), ("BV3", 5.0 / 16.0)] {
        let q = quadrature_volume(c.find(w).unwrap(), None, &opts).unwrap();
        assert_abs_diff_eq!(q.volume, coeff * l3, epsilon = 1e-10);
    }
}

#[test]
fn decompositions_sum_to_the_table_values() {
    let c = embedded();
    let opts = QuadratureOptions::default();
    for w in ["AVhat3", "BVhat3", "HVhat3", "CRhat3"] {
        let d = decomposition_check(c, w, &opts).unwrap();
        assert_eq!(d.terms.len(), 4);
        assert!(d.residual < 1e-5, "{w}: {}", d.residual);
        assert!(
            d.quadrature_residual < 1e-9,
            "{w}: {}",
            d.quadrature_residual
        );
    }
    let av = decomposition_check(c, "AVhat3", &opts).unwrap();
    let l3 = lobachevsky(PI / 3.0);
    let l4 = lobachevsky(PI / 4.0);
    assert_abs_diff_eq!(av.sum, l3 / 8.0 + l4 / 3.0 + l3 / 2.0, epsilon = 1e-14);
    assert!(matches!(
        decomposition_check(c, "V3", &opts),
        Err(Error::UnknownDecomposition(_))
    ));
}

#[test]
fn parse_errors_carry_a_location() {
    let broken = EMBEDDED_CATALOG.replacen("\"sqrt(3)/6\"", "\"sqrt(3)/\"", 1);
    match load_catalog_from_str(&broken) {
        Err(Error::ParseError { location, .. }) => {
            assert!(location.starts_with("entries[0]"), "{location}")
        }
        other => panic!("{other:?}"),
    }
    match load_catalog_from_str("{\"version\": 1,") {
        Err(Error::ParseError { location, .. }) => assert!(location.contains("line 1")),
        other => panic!("{other:?}"),
    }
}

#[test]
fn structural_errors_are_reported() {
    let mut doc: serde_json::Value = serde_json::from_str(EMBEDDED_CATALOG).unwrap();
    let entries = doc["entries"].as_array_mut().unwrap();
    let first = entries[0].clone();
    entries.pop();
    let short = serde_json::to_string(&doc).unwrap();
    assert!(matches!(
        load_catalog_from_str(&short),
        Err(Error::ValidationError { entry, .. }) if entry == "catalog"
    ));
    doc["entries"].as_array_mut().unwrap().push(first);
    let dup = serde_json::to_string(&doc).unwrap();
    assert!(matches!(
        load_catalog_from_str(&dup),
        Err(Error::ValidationError { check, .. }) if check.contains("duplicate")
    ));
}

#[test]
fn mislabeled_ideal_vertex_fails_classification() {
    let mut doc: serde_json::Value = serde_json::from_str(EMBEDDED_CATALOG).unwrap();
    doc["entries"][0]["ideal"][1] = serde_json::Value::Bool(true);
    match load_catalog_from_str(&doc.to_string()) {
        Err(Error::ValidationError { entry, check }) => {
            assert_eq!(entry, "V3");
            assert!(check.starts_with("classification"), "{check}");
        }
        other => panic!("{other:?}"),
    }
}
