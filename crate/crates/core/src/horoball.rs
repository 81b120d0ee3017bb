//! Horoballs, the Busemann function and horoball pieces of a simplex.
//!
//! A horoball is described by its ideal center `ξ` and an s-parameter in
//! `(−1, 1)`. In the frame where `ξ = (1,0,0,1)` its boundary meets the
//! axis at `(1,0,0,s)`; frame-free, `s = tanh β(o, x, ξ)` for any boundary
//! point `x`, with `o` the model center.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::{
    add, distance, lorentz_inner, scale, LorentzIsometry, PointKind, ProjectivePoint, Vec4,
};

/// Edge parameters slightly below zero are clamped onto the vertex.
pub const LAMBDA_SLACK: f64 = 1e-9;
/// Threshold for degenerate horospherical triangles.
pub const EPS_TRI: f64 = 1e-12;

const ORIGIN: Vec4 = [1.0, 0.0, 0.0, 0.0];
const NORTH: Vec4 = [1.0, 0.0, 0.0, 1.0];

/// A horoball centered at an ideal point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horoball {
    center: ProjectivePoint,
    s: f64,
}

impl Horoball {
    pub fn new(center: ProjectivePoint, s: f64) -> Result<Self> {
        if center.kind() != PointKind::Ideal {
            return Err(Error::NotIdeal);
        }
        if !(s > -1.0 && s < 1.0) {
            return Err(Error::InvalidParameter(s));
        }
        Ok(Self { center, s })
    }

    /// Builds a horoball from its Busemann offset `β̂ = artanh s`.
    pub fn from_offset(center: ProjectivePoint, offset: f64) -> Result<Self> {
        Self::new(center, offset.tanh())
    }

    pub fn center(&self) -> &ProjectivePoint {
        &self.center
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    /// `artanh s`.
    pub fn offset(&self) -> f64 {
        self.s.atanh()
    }

    /// Positive inside, zero on the horosphere, negative outside.
    pub fn level(&self, x: &ProjectivePoint) -> Result<f64> {
        Ok(busemann(&origin(), x, &self.center)? - self.offset())
    }

    /// The same horoball after applying `g` to the whole space.
    ///
    /// The offset changes by the cocycle `β(g⁻¹o, o, ξ)`.
    pub fn transformed(&self, g: &LorentzIsometry) -> Result<Self> {
        let ginv_o = ProjectivePoint::new(g.inverse().apply_vec(&ORIGIN))?;
        let shift = busemann(&ginv_o, &origin(), &self.center)?;
        let center = ProjectivePoint::new(g.apply_vec(self.center.coords()))?;
        Self::from_offset(center, self.offset() + shift)
    }
}

fn origin() -> ProjectivePoint {
    ProjectivePoint::new(ORIGIN).expect("nonzero")
}

/// The horosphere polynomial `(s−1)⟨x,x⟩ − (1+s)(x⁰−x³)²` for center `(1,0,0,1)`.
///
/// Positive inside the horoball.
pub fn horosphere_eval(s: f64, x: &Vec4) -> f64 {
    let d = x[0] - x[3];
    (s - 1.0) * lorentz_inner(x, x) - (1.0 + s) * d * d
}

fn busemann_factor(x: &Vec4, xi: &Vec4) -> f64 {
    -lorentz_inner(x, xi) / (-lorentz_inner(x, x)).sqrt()
}

/// `β(x, y, ξ) = lim_{z→ξ} d(x, z) − d(y, z)`, in closed form.
pub fn busemann(x: &ProjectivePoint, y: &ProjectivePoint, xi: &ProjectivePoint) -> Result<f64> {
    if xi.kind() != PointKind::Ideal {
        return Err(Error::NotIdeal);
    }
    if x.kind() != PointKind::Proper || y.kind() != PointKind::Proper {
        return Err(Error::NotProper);
    }
    let fx = busemann_factor(x.coords(), xi.coords());
    let fy = busemann_factor(y.coords(), xi.coords());
    Ok((fx / fy).ln())
}

/// s-parameter of the horosphere centered at `center` through `foot`, in the frame-free form.
pub fn s_through(center: &ProjectivePoint, foot: &ProjectivePoint) -> Result<f64> {
    if foot.kind() != PointKind::Proper {
        return Err(Error::FootAtInfinity);
    }
    Ok(busemann(&origin(), foot, center)?.tanh())
}

/// s-parameter of the horosphere through `foot`, read off the horosphere equation in `frame`.
pub fn s_from_tangency(
    center: &ProjectivePoint,
    foot: &ProjectivePoint,
    frame: &LorentzIsometry,
) -> Result<f64> {
    if center.kind() != PointKind::Ideal {
        return Err(Error::NotIdeal);
    }
    if foot.kind() != PointKind::Proper {
        return Err(Error::FootAtInfinity);
    }
    let c = ProjectivePoint::new(frame.apply_vec(center.coords()))?;
    if !c.projectively_eq(&ProjectivePoint::new(NORTH)?, 1e-9) {
        return Err(Error::InvalidConfiguration(
            "frame does not carry the center to (1,0,0,1)".into(),
        ));
    }
    let y = frame.apply_vec(foot.coords());
    let q = lorentz_inner(&y, &y);
    let d = y[0] - y[3];
    let w = d * d;
    Ok((q + w) / (q - w))
}

/// Parameter `λ` and point `λ ξ + aᵢ` where the boundary of `b` crosses the
/// line from its center `ξ` through `ai`.
///
/// On that line the horosphere equation is linear in `λ`.
fn line_crossing(b: &Horoball, ai: &ProjectivePoint) -> Result<(f64, Vec4)> {
    let xi = b.center().coords();
    let a = ai.coords();
    let xa = lorentz_inner(xi, a);
    if xa.abs() < 1e-300 {
        return Err(Error::NoIntersection(f64::NAN));
    }
    let f0 = busemann_factor(&ORIGIN, xi);
    let c = f0 * f0 * (-2.0 * b.offset()).exp();
    let lambda = -(xa * xa / c + lorentz_inner(a, a)) / (2.0 * xa);
    Ok((lambda, add(&scale(xi, lambda), a)))
}

/// Point where the boundary of `b` crosses the edge from its center to `ai`.
///
/// The edge is `h(λ) = λ a₀ + aᵢ`, `λ ≥ 0`.
pub fn edge_intersection(b: &Horoball, ai: &ProjectivePoint) -> Result<ProjectivePoint> {
    let (lambda, _) = line_crossing(b, ai)?;
    if !(lambda >= -LAMBDA_SLACK) {
        return Err(Error::NoIntersection(lambda));
    }
    ProjectivePoint::new(add(
        &scale(b.center().coords(), lambda.max(0.0)),
        ai.coords(),
    ))
}

/// Horospherical arc length `2 sinh(l/2)` over a chord of hyperbolic length `l`.
pub fn horo_arc_length(l: f64) -> f64 {
    2.0 * (0.5 * l).sinh()
}

/// Euclidean triangle on a horosphere given by its side lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HorosphericalTriangle {
    pub l12: f64,
    pub l13: f64,
    pub l23: f64,
}

/// Area from the Cayley–Menger determinant of the squared sides.
pub fn triangle_area(t: &HorosphericalTriangle) -> Result<f64> {
    let (a, b, c) = (t.l12 * t.l12, t.l13 * t.l13, t.l23 * t.l23);
    // det [[0,1,1,1],[1,0,a,b],[1,a,0,c],[1,b,c,0]] expanded.
    let det = a * a + b * b + c * c - 2.0 * (a * b + a * c + b * c);
    let scale_sq = (a + b + c).max(f64::MIN_POSITIVE);
    if -det <= EPS_TRI * EPS_TRI * scale_sq * scale_sq {
        return Err(Error::DegenerateTriangle);
    }
    Ok((-det / 16.0).sqrt())
}

fn bolyai(h: &[ProjectivePoint; 3]) -> Result<f64> {
    let arc = |i: usize, j: usize| -> Result<f64> { Ok(horo_arc_length(distance(&h[i], &h[j])?)) };
    let t = HorosphericalTriangle {
        l12: arc(0, 1)?,
        l13: arc(0, 2)?,
        l23: arc(1, 2)?,
    };
    Ok(triangle_area(&t)? / 2.0)
}

/// Volume of the part of `b` inside the cone from its center over three points.
///
/// Bolyai's formula: half the area of the horospherical cross-section triangle.
/// The horosphere must cross the three edges between the center and the points.
pub fn horoball_piece_volume(b: &Horoball, edges: &[ProjectivePoint; 3]) -> Result<f64> {
    bolyai(&[
        edge_intersection(b, &edges[0])?,
        edge_intersection(b, &edges[1])?,
        edge_intersection(b, &edges[2])?,
    ])
}

/// Like [`horoball_piece_volume`], but the cone over the three points is
/// unbounded, so the horosphere may cross its rays beyond the points.
pub fn horoball_cone_volume(b: &Horoball, edges: &[ProjectivePoint; 3]) -> Result<f64> {
    let mut h = Vec::with_capacity(3);
    for e in edges {
        let (_, p) = line_crossing(b, e)?;
        let p = ProjectivePoint::new(p)?;
        if p.kind() != PointKind::Proper {
            return Err(Error::NotProper);
        }
        h.push(p);
    }
    bolyai(&[h[0], h[1], h[2]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: Vec4) -> ProjectivePoint {
        ProjectivePoint::new(c).unwrap()
    }

    #[test]
    fn horosphere_examples() {
        assert_eq!(horosphere_eval(0.0, &[1., 0., 0., 0.]), 0.0);
        assert_eq!(horosphere_eval(0.0, &[1., 0., 0., 1.]), 0.0);
        let s3 = 3f64.sqrt();
        assert!(horosphere_eval(0.0, &[1., 3. / 7., -s3 / 7., 1. / 7.]).abs() < 1e-15);
        for s in [-0.5, 0.0, 1.0 / 7.0, 0.6] {
            assert!(horosphere_eval(s, &[1., 0., 0., (1.0 + s) / 2.0]) > 0.0);
        }
    }

    #[test]
    fn busemann_on_axis() {
        let b = busemann(
            &p([1., 0., 0., 0.]),
            &p([1., 0., 0., 1. / 7.]),
            &p([1., 0., 0., 1.]),
        );
        assert!((b.unwrap() - (1.0f64 / 7.0).atanh()).abs() < 1e-15);
        assert!((0.1438410362 - (1.0f64 / 7.0).atanh()).abs() < 1e-9);
        let x = p([1., 0.2, 0.1, 0.]);
        assert_eq!(busemann(&x, &x, &p([1., 0., 0., 1.])).unwrap(), 0.0);
        assert_eq!(busemann(&x, &x, &x), Err(Error::NotIdeal));
    }

    #[test]
    fn s_from_tangency_examples() {
        let id = LorentzIsometry::identity();
        let north = p([1., 0., 0., 1.]);
        assert_eq!(
            s_from_tangency(&north, &p([1., 0., 0., 0.]), &id).unwrap(),
            0.0
        );
        let s = s_from_tangency(&north, &p([1., 0., 0., 1. / 3.]), &id).unwrap();
        assert!((s - 1. / 3.).abs() < 1e-15);
        assert_eq!(
            s_from_tangency(&north, &north, &id),
            Err(Error::FootAtInfinity)
        );
    }

    #[test]
    fn edge_intersection_examples() {
        let s3 = 3f64.sqrt();
        let b = Horoball::new(p([1., 0., 0., 1.]), 0.0).unwrap();
        let h2 = edge_intersection(&b, &p([1., 0.5, -s3 / 6., 0.])).unwrap();
        assert!(h2.projectively_eq(&p([1., 3. / 7., -s3 / 7., 1. / 7.]), 1e-15));
        let h1 = edge_intersection(&b, &p([1., 0., 0., 0.])).unwrap();
        assert_eq!(h1.coords(), &[1., 0., 0., 0.]);
        let big = Horoball::new(p([1., 0., 0., 1.]), -0.5).unwrap();
        assert!(matches!(
            edge_intersection(&big, &p([1., 0., 0., 0.])),
            Err(Error::NoIntersection(_))
        ));
    }

    #[test]
    fn arc_and_area() {
        assert_eq!(horo_arc_length(0.0), 0.0);
        assert!((horo_arc_length(2.0 * 0.5f64.asinh()) - 1.0).abs() < 1e-15);
        let eq = HorosphericalTriangle {
            l12: 1.,
            l13: 1.,
            l23: 1.,
        };
        assert!((triangle_area(&eq).unwrap() - 3f64.sqrt() / 4.).abs() < 1e-15);
        let r = HorosphericalTriangle {
            l12: 3.,
            l13: 4.,
            l23: 5.,
        };
        assert!((triangle_area(&r).unwrap() - 6.).abs() < 1e-12);
        let flat = HorosphericalTriangle {
            l12: 1.,
            l13: 2.,
            l23: 3.,
        };
        assert_eq!(triangle_area(&flat), Err(Error::DegenerateTriangle));
    }

    #[test]
    fn piece_of_simplest_cusp() {
        let s3 = 3f64.sqrt();
        let b = Horoball::new(p([1., 0., 0., 1.]), 0.0).unwrap();
        let edges = [
            p([1., 0., 0., 0.]),
            p([1., 0.5, -s3 / 6., 0.]),
            p([1., 0.5, s3 / 6., 0.]),
        ];
        let v = horoball_piece_volume(&b, &edges).unwrap();
        assert!((v - 1.0 / (8.0 * s3)).abs() < 1e-14);
    }

    #[test]
    fn cone_volume_extends_piece_volume() {
        let s3 = 3f64.sqrt();
        let edges = [
            p([1., 0., 0., 0.]),
            p([1., 0.5, -s3 / 6., 0.]),
            p([1., 0.5, s3 / 6., 0.]),
        ];
        let b = Horoball::new(p([1., 0., 0., 1.]), 0.2).unwrap();
        let piece = horoball_piece_volume(&b, &edges).unwrap();
        assert!((horoball_cone_volume(&b, &edges).unwrap() - piece).abs() < 1e-15);
        // Past the origin the piece is undefined, the cone volume keeps
        // scaling as e^{-2β̂}.
        let big = Horoball::from_offset(p([1., 0., 0., 1.]), 0.2f64.atanh() - 0.5).unwrap();
        assert!(horoball_piece_volume(&big, &edges).is_err());
        let cone = horoball_cone_volume(&big, &edges).unwrap();
        assert!((cone - piece * 1f64.exp()).abs() < 1e-13);
    }
}
