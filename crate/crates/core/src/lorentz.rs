//! Projective linear algebra of the Cayley–Klein model of hyperbolic 3-space.
//!
//! Points are homogeneous 4-vectors `x = (x⁰, x¹, x², x³)` paired by the
//! Lorentz form `⟨x, y⟩ = −x⁰y⁰ + x¹y¹ + x²y² + x³y³`. Proper points satisfy
//! `⟨x, x⟩ < 0` and fill the unit ball of the affine chart `x⁰ = 1`; ideal
//! points lie on its boundary sphere. Hyperplanes are covectors `b` evaluated
//! by the plain dot product `b · x`; their pole is the index-raised vector.

use nalgebra::{Matrix4, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Homogeneous coordinates.
pub type Vec4 = [f64; 4];

/// Tolerance for the ideal dead-band of [`classify`], on Euclidean-normalized coordinates.
pub const EPS_CLASS: f64 = 1e-10;
/// Tolerance on hyperplane norms.
pub const EPS_NORM: f64 = 1e-10;
/// Tolerance on `MᵀJM = J`.
pub const EPS_ISO: f64 = 1e-10;
/// Tolerance on incidence residuals.
pub const EPS_RES: f64 = 1e-9;
/// Slack allowed below 1 for an arccosh argument.
pub const EPS_DOM: f64 = 1e-12;
/// Below this Euclidean norm a vector counts as zero.
pub const EPS_ZERO: f64 = 1e-300;

/// The Lorentz form `−x⁰y⁰ + x¹y¹ + x²y² + x³y³`.
pub fn lorentz_inner(x: &Vec4, y: &Vec4) -> f64 {
    -x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3]
}

/// Euclidean pairing of a covector with a point.
pub fn dot(b: &Vec4, x: &Vec4) -> f64 {
    b[0] * x[0] + b[1] * x[1] + b[2] * x[2] + b[3] * x[3]
}

pub(crate) fn euclid_norm(x: &Vec4) -> f64 {
    dot(x, x).sqrt()
}

pub(crate) fn scale(x: &Vec4, k: f64) -> Vec4 {
    [x[0] * k, x[1] * k, x[2] * k, x[3] * k]
}

pub(crate) fn add(x: &Vec4, y: &Vec4) -> Vec4 {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]]
}

pub(crate) fn sub(x: &Vec4, y: &Vec4) -> Vec4 {
    [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]]
}

/// Index raising: `(b₀, b₁, b₂, b₃) ↦ (−b₀, b₁, b₂, b₃)`.
pub fn raise(b: &Vec4) -> Vec4 {
    [-b[0], b[1], b[2], b[3]]
}

/// Position of a point relative to the absolute quadric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    Proper,
    Ideal,
    Outer,
}

/// A point of real projective 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    coords: Vec4,
}

impl ProjectivePoint {
    /// Stores `coords` in the chart `x⁰ = 1` when `x⁰ ≠ 0`.
    pub fn new(coords: Vec4) -> Result<Self> {
        let n = euclid_norm(&coords);
        if !(n > EPS_ZERO) || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let coords = if coords[0].abs() > 1e-14 * n {
            scale(&coords, 1.0 / coords[0])
        } else {
            coords
        };
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &Vec4 {
        &self.coords
    }

    /// Affine Klein-ball coordinates `(x¹, x², x³) / x⁰`.
    pub fn klein(&self) -> [f64; 3] {
        let c = &self.coords;
        [c[1] / c[0], c[2] / c[0], c[3] / c[0]]
    }

    pub fn from_klein(p: [f64; 3]) -> Self {
        Self {
            coords: [1.0, p[0], p[1], p[2]],
        }
    }

    pub fn kind(&self) -> PointKind {
        classify_vec(&self.coords)
    }

    /// Unit Euclidean norm with the first nonzero coordinate positive.
    pub fn canonical(&self) -> Vec4 {
        canonical(&self.coords)
    }

    /// Equality as points of projective space.
    pub fn projectively_eq(&self, other: &Self, tol: f64) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        (0..4).all(|i| (a[i] - b[i]).abs() <= tol)
    }
}

fn canonical(x: &Vec4) -> Vec4 {
    let n = euclid_norm(x);
    let mut v = scale(x, 1.0 / n);
    if let Some(first) = v.iter().copied().find(|c| c.abs() > 1e-12) {
        if first < 0.0 {
            v = scale(&v, -1.0);
        }
    }
    v
}

fn classify_vec(x: &Vec4) -> PointKind {
    let n = euclid_norm(x);
    let q = lorentz_inner(x, x) / (n * n);
    if q < -EPS_CLASS {
        PointKind::Proper
    } else if q > EPS_CLASS {
        PointKind::Outer
    } else {
        PointKind::Ideal
    }
}

/// Sign of `⟨x, x⟩` with an ideal dead-band of width [`EPS_CLASS`].
pub fn classify(x: &Vec4) -> Result<PointKind> {
    let n = euclid_norm(x);
    if !(n > EPS_ZERO) {
        return Err(Error::ZeroVector);
    }
    Ok(classify_vec(x))
}

/// Hyperbolic distance `arccosh(−⟨x,y⟩ / √(⟨x,x⟩⟨y,y⟩))` between proper points.
pub fn distance(x: &ProjectivePoint, y: &ProjectivePoint) -> Result<f64> {
    if x.kind() != PointKind::Proper || y.kind() != PointKind::Proper {
        return Err(Error::NotProper);
    }
    let (a, b) = (x.coords(), y.coords());
    let c = -lorentz_inner(a, b) / (lorentz_inner(a, a) * lorentz_inner(b, b)).sqrt();
    if c < 1.0 - EPS_DOM {
        return Err(Error::DomainError(c));
    }
    Ok(c.max(1.0).acosh())
}

/// A hyperplane covector of unit Lorentz norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperplaneForm {
    coeffs: Vec4,
}

impl HyperplaneForm {
    /// Normalizes `coeffs` to `−b₀² + b₁² + b₂² + b₃² = 1`.
    pub fn new(coeffs: Vec4) -> Result<Self> {
        if !(euclid_norm(&coeffs) > EPS_ZERO) {
            return Err(Error::ZeroVector);
        }
        let q = lorentz_inner(&coeffs, &coeffs);
        if q < EPS_NORM * dot(&coeffs, &coeffs) {
            return Err(Error::DegeneratePlane);
        }
        Ok(Self {
            coeffs: scale(&coeffs, 1.0 / q.sqrt()),
        })
    }

    pub fn coeffs(&self) -> &Vec4 {
        &self.coeffs
    }

    /// `b · x`.
    pub fn eval(&self, x: &Vec4) -> f64 {
        dot(&self.coeffs, x)
    }

    pub fn negated(&self) -> Self {
        Self {
            coeffs: scale(&self.coeffs, -1.0),
        }
    }
}

/// The pole `(−b₀, b₁, b₂, b₃)` of a hyperplane.
pub fn pole(u: &HyperplaneForm) -> ProjectivePoint {
    ProjectivePoint {
        coords: raise(u.coeffs()),
    }
}

/// Foot of the perpendicular from `x` to the plane `u`: `x − (x·u / ⟨u,u⟩) pole(u)`.
pub fn project_onto_plane(x: &ProjectivePoint, u: &HyperplaneForm) -> Result<ProjectivePoint> {
    let b = u.coeffs();
    let q = lorentz_inner(b, b);
    if q < EPS_NORM {
        return Err(Error::DegeneratePlane);
    }
    let k = dot(b, x.coords()) / q;
    ProjectivePoint::new(sub(x.coords(), &scale(&raise(b), k)))
}

/// A 4×4 matrix preserving the Lorentz form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIsometry {
    m: [[f64; 4]; 4],
}

const J: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

impl LorentzIsometry {
    /// Checks `MᵀJM = J` within [`EPS_ISO`].
    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        let mut dev: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for k in 0..4 {
                    s += m[k][i] * J[k] * m[k][j];
                }
                let target = if i == j { J[i] } else { 0.0 };
                dev = dev.max((s - target).abs());
            }
        }
        if dev > EPS_ISO {
            return Err(Error::NotIsometry(dev));
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { m }
    }

    /// Hyperbolic translation of length `t` along spatial axis `axis ∈ {1,2,3}`.
    pub fn boost(axis: usize, t: f64) -> Self {
        assert!((1..4).contains(&axis));
        let mut m = Self::identity().m;
        m[0][0] = t.cosh();
        m[axis][axis] = t.cosh();
        m[0][axis] = t.sinh();
        m[axis][0] = t.sinh();
        Self { m }
    }

    /// Rotation by `theta` in the spatial coordinate plane `(i, j)`.
    pub fn rotation(i: usize, j: usize, theta: f64) -> Self {
        assert!(i != j && (1..4).contains(&i) && (1..4).contains(&j));
        let mut m = Self::identity().m;
        let (s, c) = theta.sin_cos();
        m[i][i] = c;
        m[j][j] = c;
        m[i][j] = -s;
        m[j][i] = s;
        Self { m }
    }

    /// Rotation fixing the model center that carries the ideal point `xi` to `(1,0,0,1)`.
    pub fn frame_to_north(xi: &ProjectivePoint) -> Result<Self> {
        if xi.kind() != PointKind::Ideal {
            return Err(Error::NotIdeal);
        }
        let k = xi.klein();
        let n = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        let a = [k[0] / n, k[1] / n, k[2] / n];
        // Rodrigues rotation taking `a` to e₃.
        let c = a[2];
        let v = [a[1], -a[0], 0.0];
        let mut r = [[0.0; 3]; 3];
        if 1.0 + c < 1e-14 {
            r = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
        } else {
            let kx = [[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]];
            let f = 1.0 / (1.0 + c);
            for i in 0..3 {
                for j in 0..3 {
                    let mut k2 = 0.0;
                    for l in 0..3 {
                        k2 += kx[i][l] * kx[l][j];
                    }
                    r[i][j] = if i == j { 1.0 } else { 0.0 } + kx[i][j] + f * k2;
                }
            }
        }
        let mut m = Self::identity().m;
        for i in 0..3 {
            for j in 0..3 {
                m[i + 1][j + 1] = r[i][j];
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn apply_vec(&self, x: &Vec4) -> Vec4 {
        let mut y = [0.0; 4];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = (0..4).map(|k| self.m[i][k] * x[k]).sum();
        }
        y
    }

    /// Transforms a hyperplane covector so that incidence is preserved.
    pub fn apply_form(&self, b: &HyperplaneForm) -> HyperplaneForm {
        let inv = self.inverse();
        let c = b.coeffs();
        let mut out = [0.0; 4];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|i| c[i] * inv.m[i][j]).sum();
        }
        HyperplaneForm { coeffs: out }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..4).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        Self { m }
    }

    /// `J Mᵀ J`.
    pub fn inverse(&self) -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = J[i] * self.m[j][i] * J[j];
            }
        }
        Self { m }
    }
}

/// Applies `m` to `x`, preserving point type and distances.
pub fn apply_isometry(m: &LorentzIsometry, x: &ProjectivePoint) -> Result<ProjectivePoint> {
    LorentzIsometry::new(m.m)?;
    ProjectivePoint::new(m.apply_vec(x.coords()))
}

/// Gram matrix `gᵢⱼ = ⟨bᵢ, bⱼ⟩` of four face forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GramMatrix {
    pub entries: [[f64; 4]; 4],
}

impl GramMatrix {
    /// Dihedral angle `arccos(−gᵢⱼ)` between faces `i` and `j`, if they meet.
    pub fn dihedral_angle(&self, i: usize, j: usize) -> Option<f64> {
        let g = self.entries[i][j];
        (g > -1.0 - 1e-12 && g <= 1e-12).then(|| (-g).clamp(-1.0, 1.0).acos())
    }

    /// `k` with dihedral angle `π/k` within `tol`.
    pub fn coxeter_label(&self, i: usize, j: usize, tol: f64) -> Option<u32> {
        let a = self.dihedral_angle(i, j)?;
        (2..=12u32).find(|&k| (a - std::f64::consts::PI / k as f64).abs() <= tol)
    }

    /// Numbers of positive and negative eigenvalues (eigenvalues within `eps` of zero are skipped).
    pub fn signature(&self, eps: f64) -> (usize, usize) {
        let m = Matrix4::from_fn(|i, j| self.entries[i][j]);
        let e = SymmetricEigen::new(m);
        let pos = e.eigenvalues.iter().filter(|&&l| l > eps).count();
        let neg = e.eigenvalues.iter().filter(|&&l| l < -eps).count();
        (pos, neg)
    }

    /// Unit diagonal, nonpositive off-diagonal, one negative and three positive eigenvalues.
    pub fn is_hyperbolic(&self, eps: f64) -> bool {
        let diag = (0..4).all(|i| (self.entries[i][i] - 1.0).abs() <= eps);
        let off = (0..4).all(|i| (0..4).all(|j| i == j || self.entries[i][j] <= eps));
        diag && off && self.signature(eps) == (3, 1)
    }
}

pub fn gram_of_simplex(faces: &[HyperplaneForm; 4]) -> GramMatrix {
    let mut entries = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            entries[i][j] = lorentz_inner(faces[i].coeffs(), faces[j].coeffs());
        }
    }
    GramMatrix { entries }
}

/// Realizes a hyperbolic Gram matrix as vertices and interior-directed faces.
///
/// Vertex `i` is opposite face `i`; vertices are returned in the chart `x⁰ = 1`.
pub fn simplex_from_gram(g: &GramMatrix) -> Result<([ProjectivePoint; 4], [HyperplaneForm; 4])> {
    let m = Matrix4::from_fn(|i, j| g.entries[i][j]);
    let e = SymmetricEigen::new(m);
    let order = {
        let mut idx: Vec<usize> = (0..4).collect();
        idx.sort_by(|&a, &b| e.eigenvalues[a].total_cmp(&e.eigenvalues[b]));
        idx
    };
    if e.eigenvalues[order[0]] >= 0.0 || e.eigenvalues[order[1]] <= 0.0 {
        return Err(Error::ValidationError {
            entry: "gram".into(),
            check: "signature (3,1)".into(),
        });
    }
    // Rows of `b` are faces with b J bᵀ = G.
    let b = Matrix4::from_fn(|i, k| {
        let col = order[k];
        e.eigenvectors[(i, col)] * e.eigenvalues[col].abs().sqrt()
    });
    let a = b.try_inverse().ok_or(Error::DegeneratePlane)?;
    let mut sign = 0.0;
    let mut verts = Vec::with_capacity(4);
    for j in 0..4 {
        let v = [a[(0, j)], a[(1, j)], a[(2, j)], a[(3, j)]];
        if classify(&v)? == PointKind::Outer {
            return Err(Error::NotProper);
        }
        let s = v[0].signum();
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            return Err(Error::ValidationError {
                entry: "gram".into(),
                check: "vertices in one time cone".into(),
            });
        }
        verts.push(ProjectivePoint::new(v)?);
    }
    let mut faces = Vec::with_capacity(4);
    for i in 0..4 {
        let row = [b[(i, 0)], b[(i, 1)], b[(i, 2)], b[(i, 3)]];
        faces.push(HyperplaneForm::new(scale(&row, sign))?);
    }
    Ok((
        [verts[0], verts[1], verts[2], verts[3]],
        [faces[0], faces[1], faces[2], faces[3]],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inner_examples() {
        assert_eq!(lorentz_inner(&[1., 0., 0., 0.], &[1., 0., 0., 0.]), -1.0);
        assert_eq!(lorentz_inner(&[1., 0., 0., 1.], &[1., 0., 0., 1.]), 0.0);
        assert_eq!(lorentz_inner(&[1., 0., 0., 0.], &[1., 0.5, 0., 0.]), -1.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&[1., 0., 0., 0.]).unwrap(), PointKind::Proper);
        assert_eq!(classify(&[1., 0., 0., 1.]).unwrap(), PointKind::Ideal);
        assert_eq!(
            classify(&[1., 2f64.sqrt(), 0., 0.]).unwrap(),
            PointKind::Outer
        );
        assert_eq!(classify(&[0.; 4]), Err(Error::ZeroVector));
    }

    #[test]
    fn distance_examples() {
        let o = ProjectivePoint::new([1., 0., 0., 0.]).unwrap();
        let p = ProjectivePoint::new([1., 0.5, 0., 0.]).unwrap();
        assert_eq!(distance(&o, &o).unwrap(), 0.0);
        let expected = (2.0 / 3f64.sqrt()).acosh();
        assert!((distance(&o, &p).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.5493061443).abs() < 1e-9);
        let xi = ProjectivePoint::new([1., 0., 0., 1.]).unwrap();
        assert_eq!(distance(&o, &xi), Err(Error::NotProper));
    }

    #[test]
    fn pole_examples() {
        let u = HyperplaneForm::new([0., 0., 0., 1.]).unwrap();
        assert_eq!(pole(&u).coords(), &[0., 0., 0., 1.]);
        assert_eq!(raise(&[1., -2., 0., -1.]), [-1., -2., 0., -1.]);
    }

    #[test]
    fn projection_of_ideal_vertex() {
        let xi = ProjectivePoint::new([1., 0., 0., 1.]).unwrap();
        let u = HyperplaneForm::new([0., 0., 0., 1.]).unwrap();
        let y = project_onto_plane(&xi, &u).unwrap();
        assert_eq!(y.coords(), &[1., 0., 0., 0.]);
        let z = project_onto_plane(&y, &u).unwrap();
        assert_eq!(z.coords(), y.coords());
    }

    #[test]
    fn rotation_between_ideal_vertices() {
        let m = LorentzIsometry::new([
            [1., 0., 0., 0.],
            [0., 1., 0., 0.],
            [0., 0., 0., -1.],
            [0., 0., -1., 0.],
        ])
        .unwrap();
        let a1 = ProjectivePoint::new([1., 0., -1., 0.]).unwrap();
        assert_eq!(apply_isometry(&m, &a1).unwrap().coords(), &[1., 0., 0., 1.]);
        let bad = [
            [2., 0., 0., 0.],
            [0., 1., 0., 0.],
            [0., 0., 1., 0.],
            [0., 0., 0., 1.],
        ];
        assert!(matches!(
            LorentzIsometry::new(bad),
            Err(Error::NotIsometry(_))
        ));
    }

    #[test]
    fn frame_to_north_fixes_center() {
        let xi = ProjectivePoint::new([1., 0.6, 0., -0.8]).unwrap();
        let f = LorentzIsometry::frame_to_north(&xi).unwrap();
        let img = ProjectivePoint::new(f.apply_vec(xi.coords())).unwrap();
        assert!(img.projectively_eq(&ProjectivePoint::new([1., 0., 0., 1.]).unwrap(), 1e-14));
        assert_eq!(f.apply_vec(&[1., 0., 0., 0.]), [1., 0., 0., 0.]);
        let south = ProjectivePoint::new([1., 0., 0., -1.]).unwrap();
        let f = LorentzIsometry::frame_to_north(&south).unwrap();
        assert_eq!(f.apply_vec(south.coords()), [1., 0., 0., 1.]);
    }

    #[test]
    fn gram_realization_round_trip() {
        let c = |k: f64| -(std::f64::consts::PI / k).cos();
        let g = GramMatrix {
            entries: [
                [1., c(3.), 0., 0.],
                [c(3.), 1., c(3.), 0.],
                [0., c(3.), 1., c(6.)],
                [0., 0., c(6.), 1.],
            ],
        };
        assert!(g.is_hyperbolic(1e-12));
        let (v, f) = simplex_from_gram(&g).unwrap();
        let g2 = gram_of_simplex(&f);
        for i in 0..4 {
            for j in 0..4 {
                assert!((g.entries[i][j] - g2.entries[i][j]).abs() < 1e-12);
                let r = f[i].eval(v[j].coords());
                if i == j {
                    assert!(r > 0.0);
                } else {
                    assert!(r.abs() < 1e-12);
                }
            }
        }
        assert_eq!(v[0].kind(), PointKind::Ideal);
        assert_eq!(g.coxeter_label(2, 3, 1e-9), Some(6));
        assert_eq!(g.coxeter_label(0, 2, 1e-9), Some(2));
    }
}
