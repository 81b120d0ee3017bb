//! Simplex volumes: special functions, closed forms and a quadrature oracle.
//!
//! The Lobachevsky function follows the convention
//! `Λ(θ) = −∫₀^θ ln|2 sin t| dt = ½ Σ sin(2nθ)/n²`, which is odd and
//! π-periodic. Catalan's constant is `G = 2Λ(π/4)`.

pub mod quadrature;
pub mod special;

use std::f64::consts::PI;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::catalog::{Catalog, CoxeterSimplex};
use crate::error::{Error, Result};
use crate::horoball::Horoball;
use crate::lorentz::{simplex_from_gram, GramMatrix};

pub use quadrature::{default_cusps, quadrature_volume_of, QuadratureOptions, QuadratureReport};
pub use special::{
    catalan, catalan_binomial, catalan_cvz, lobachevsky, lobachevsky_fourier,
    lobachevsky_quadrature, rho_density, sigma_density, theta_bound,
};

/// Exact rational number.
pub type Rational = Ratio<i64>;

/// Shape of a closed-form simplex volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VolumeKind {
    /// `coefficient · Λ(angle · π)`.
    LobachevskyMultiple {
        coefficient: Rational,
        angle: Rational,
    },
    /// `coefficient · G`.
    CatalanMultiple { coefficient: Rational },
    /// Volume known only numerically.
    NumericOnly { value: f64 },
}

/// A simplex volume together with the six-digit value printed for it, if any.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeExpression {
    pub kind: VolumeKind,
    pub printed_value: Option<f64>,
}

impl VolumeExpression {
    pub fn lobachevsky(coefficient: Rational, angle: Rational) -> Result<Self> {
        if coefficient <= Rational::from_integer(0)
            || angle <= Rational::from_integer(0)
            || angle >= Rational::from_integer(1)
        {
            return Err(Error::InvalidParameter(
                *angle.numer() as f64 / *angle.denom() as f64,
            ));
        }
        Ok(Self {
            kind: VolumeKind::LobachevskyMultiple { coefficient, angle },
            printed_value: None,
        })
    }

    pub fn numeric(value: f64, printed_value: Option<f64>) -> Result<Self> {
        if !(value > 0.0) {
            return Err(Error::InvalidParameter(value));
        }
        Ok(Self {
            kind: VolumeKind::NumericOnly { value },
            printed_value,
        })
    }

    /// Whether the value is an exact expression rather than a stored number.
    pub fn is_closed_form(&self) -> bool {
        !matches!(self.kind, VolumeKind::NumericOnly { .. })
    }
}

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn coefficient_prefix(c: &Rational) -> String {
    if c.is_integer() {
        if *c.numer() == 1 {
            String::new()
        } else {
            c.numer().to_string()
        }
    } else {
        format!("({c})")
    }
}

impl fmt::Display for VolumeExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            VolumeKind::LobachevskyMultiple { coefficient, angle } => {
                let arg = match (*angle.numer(), *angle.denom()) {
                    (1, d) => format!("π/{d}"),
                    (n, d) => format!("{n}π/{d}"),
                };
                write!(f, "{}Λ({arg})", coefficient_prefix(coefficient))
            }
            VolumeKind::CatalanMultiple { coefficient } => {
                write!(f, "{}G", coefficient_prefix(coefficient))
            }
            VolumeKind::NumericOnly { value } => write!(f, "{value:.9}…"),
        }
    }
}

/// Numeric value of a volume expression.
pub fn closed_form_volume(expr: &VolumeExpression) -> f64 {
    match &expr.kind {
        VolumeKind::LobachevskyMultiple { coefficient, angle } => {
            ratio_f64(coefficient) * lobachevsky(ratio_f64(angle) * PI)
        }
        VolumeKind::CatalanMultiple { coefficient } => ratio_f64(coefficient) * catalan(),
        VolumeKind::NumericOnly { value } => *value,
    }
}

/// Quadrature volume of a catalog simplex.
///
/// With `cusps = None` the truncating horoballs come from [`default_cusps`].
pub fn quadrature_volume(
    s: &CoxeterSimplex,
    cusps: Option<&[Horoball]>,
    opts: &QuadratureOptions,
) -> Result<QuadratureReport> {
    match cusps {
        Some(c) => quadrature_volume_of(&s.vertices, c, opts),
        None => {
            let c = default_cusps(&s.vertices, DEFAULT_CUSP_MARGIN)?;
            quadrature_volume_of(&s.vertices, &c, opts)
        }
    }
}

/// Extra Busemann offset of the default truncating horoballs beyond the
/// smallest admissible one.
pub const DEFAULT_CUSP_MARGIN: f64 = 0.5;

/// Gram matrix of the orthoscheme with consecutive dihedral angles `[a, b, c]`.
pub fn orthoscheme_gram(angles: [f64; 3]) -> GramMatrix {
    let mut g = [[0.0; 4]; 4];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for (k, a) in angles.iter().enumerate() {
        g[k][k + 1] = -a.cos();
        g[k + 1][k] = -a.cos();
    }
    GramMatrix { entries: g }
}

/// Quadrature volume of the orthoscheme `[a, b, c]`.
pub fn orthoscheme_volume(angles: [f64; 3], opts: &QuadratureOptions) -> Result<QuadratureReport> {
    let (vertices, _) = simplex_from_gram(&orthoscheme_gram(angles))?;
    let cusps = default_cusps(&vertices, DEFAULT_CUSP_MARGIN)?;
    quadrature_volume_of(&vertices, &cusps, opts)
}

/// One summand of an orthoscheme decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionTerm {
    pub label: String,
    pub value: f64,
    /// Catalog entry supplying a closed form, or `None` for a quadrature term.
    pub source: Option<String>,
}

/// Outcome of [`decomposition_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub witt: String,
    pub terms: Vec<DecompositionTerm>,
    pub sum: f64,
    /// Tabulated volume of the whole simplex.
    pub table_value: f64,
    /// Quadrature volume of the whole simplex.
    pub quadrature_value: f64,
    /// `|sum − table_value|`.
    pub residual: f64,
    /// `|sum − quadrature_value|`.
    pub quadrature_residual: f64,
}

enum Summand {
    Cell(&'static str, &'static str),
    Ortho(&'static str, [f64; 3]),
}

fn summands(witt: &str) -> Option<Vec<Summand>> {
    use Summand::*;
    let acot = |x: f64| (1.0 / x).atan();
    let s2 = 2f64.sqrt();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    Some(match witt {
        "AVhat3" => vec![
            Cell("[3,3,6]", "V3"),
            Cell("[3,4,4]", "R3"),
            Cell("[4,4,3]", "R3"),
            Cell("[3,6,3]", "Y3"),
        ],
        "BVhat3" => vec![
            Cell("[4,3,6]", "BV3"),
            Ortho("[4,arctan√2,arccot√2]", [PI / 4.0, s2.atan(), acot(s2)]),
            Ortho(
                "[arccot(1/√2),π/2−arctan√2,π/3]",
                [acot(1.0 / s2), PI / 2.0 - s2.atan(), PI / 3.0],
            ),
            Cell("[3,6,3]", "Y3"),
        ],
        "HVhat3" => vec![
            Cell("[5,3,6]", "HV3"),
            Ortho("[π/5,arctan φ,arccot φ]", [PI / 5.0, phi.atan(), acot(phi)]),
            Ortho(
                "[arccot φ⁻¹,π/2−arctan φ,π/3]",
                [acot(1.0 / phi), PI / 2.0 - phi.atan(), PI / 3.0],
            ),
            Cell("[3,6,3]", "Y3"),
        ],
        "CRhat3" => vec![
            Cell("[3,4,4]", "R3"),
            Cell("[4,4,4]", "N3"),
            Ortho(
                "[π/3,arctan(1/√2),arccot(1/√2)]",
                [PI / 3.0, (1.0 / s2).atan(), acot(1.0 / s2)],
            ),
            Ortho(
                "[arccot√2,π/2−arctan(1/√2),π/4]",
                [acot(s2), PI / 2.0 - (1.0 / s2).atan(), PI / 4.0],
            ),
        ],
        _ => return None,
    })
}

/// Checks an orthoscheme decomposition of one of the cyclic nonarithmetic
/// simplices (ÂV₃, B̂V₃, ĤV₃, ĈR₃).
///
/// Summands that are catalog cells use their stored volume; the others are
/// integrated by quadrature.
pub fn decomposition_check(
    catalog: &Catalog,
    id: &str,
    opts: &QuadratureOptions,
) -> Result<DecompositionReport> {
    let entry = catalog
        .find(id)
        .map_err(|_| Error::UnknownDecomposition(id.to_string()))?;
    let plan = summands(&entry.witt).ok_or_else(|| Error::UnknownDecomposition(id.to_string()))?;
    let mut terms = Vec::with_capacity(plan.len());
    for s in plan {
        terms.push(match s {
            Summand::Cell(label, witt) => DecompositionTerm {
                label: label.to_string(),
                value: closed_form_volume(&catalog.find(witt)?.volume),
                source: Some(witt.to_string()),
            },
            Summand::Ortho(label, angles) => DecompositionTerm {
                label: label.to_string(),
                value: orthoscheme_volume(angles, opts)?.volume,
                source: None,
            },
        });
    }
    let sum: f64 = terms.iter().map(|t| t.value).sum();
    let table_value = entry
        .volume
        .printed_value
        .unwrap_or_else(|| closed_form_volume(&entry.volume));
    let quadrature_value = quadrature_volume(entry, None, opts)?.volume;
    Ok(DecompositionReport {
        witt: entry.witt.clone(),
        terms,
        sum,
        table_value,
        quadrature_value,
        residual: (sum - table_value).abs(),
        quadrature_residual: (sum - quadrature_value).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_forms() {
        let e = VolumeExpression::lobachevsky(Rational::new(1, 2), Rational::new(1, 3)).unwrap();
        assert_eq!(e.to_string(), "(1/2)Λ(π/3)");
        let e = VolumeExpression::lobachevsky(Rational::new(3, 1), Rational::new(1, 3)).unwrap();
        assert_eq!(e.to_string(), "3Λ(π/3)");
        let e = VolumeExpression::lobachevsky(Rational::new(1, 1), Rational::new(1, 4)).unwrap();
        assert_eq!(e.to_string(), "Λ(π/4)");
    }

    #[test]
    fn closed_forms() {
        let v3 = VolumeExpression::lobachevsky(Rational::new(1, 8), Rational::new(1, 3)).unwrap();
        assert!((closed_form_volume(&v3) - 0.0422892336).abs() < 1e-9);
        let r3 = VolumeExpression::lobachevsky(Rational::new(1, 6), Rational::new(1, 4)).unwrap();
        assert!((closed_form_volume(&r3) - catalan() / 12.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_angles() {
        assert!(VolumeExpression::lobachevsky(Rational::new(1, 8), Rational::new(4, 3)).is_err());
        assert!(VolumeExpression::numeric(-1.0, None).is_err());
    }
}
