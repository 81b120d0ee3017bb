//! Adaptive quadrature of hyperbolic volume in the Klein chart.
//!
//! The volume element is `dx / (1 − |x|²)²`. A simplex is cut into the 24
//! cells of its barycentric subdivision. Cells at a proper vertex are
//! integrated directly. Cells at an ideal vertex `ξ` are integrated in cone
//! coordinates `x = ξ + t (y − ξ)` over the opposite base triangle: the
//! `t`-integral outside a truncating horoball is elementary, and the part
//! inside the horoball is added exactly by Bolyai's formula.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::horoball::{horoball_piece_volume, Horoball};
use crate::lorentz::{lorentz_inner, PointKind, ProjectivePoint};

type P3 = [f64; 3];

const MAX_DEGREE: usize = 32;

/// Gauss–Legendre nodes and weights on `[−1, 1]`, cached per degree.
pub fn gauss_legendre(n: usize) -> &'static [(f64, f64)] {
    static CACHE: OnceLock<Vec<Vec<(f64, f64)>>> = OnceLock::new();
    assert!((2..=MAX_DEGREE).contains(&n));
    let all = CACHE.get_or_init(|| {
        (0..=MAX_DEGREE)
            .map(|d| {
                if d < 2 {
                    Vec::new()
                } else {
                    GaussLegendre::new(d)
                        .expect("degree >= 2")
                        .as_node_weight_pairs()
                        .to_vec()
                }
            })
            .collect()
    });
    &all[n]
}

/// Budget and target accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureOptions {
    /// Absolute error target for the whole simplex.
    pub tol: f64,
    /// Maximum number of subdivided regions per cell.
    pub max_regions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            tol: 1e-11,
            max_regions: 20_000,
        }
    }
}

/// Result of [`quadrature_volume_of`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    pub volume: f64,
    /// Volume outside the truncating horoballs.
    pub truncated: f64,
    /// Exact volume of the cusp pieces.
    pub cusps: f64,
    pub error_estimate: f64,
    pub regions: usize,
}

fn sub3(a: &P3, b: &P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: &P3, b: &P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn det3(a: &P3, b: &P3, c: &P3) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn mid<const N: usize>(a: &[f64; N], b: &[f64; N]) -> [f64; N] {
    let mut m = [0.0; N];
    for i in 0..N {
        m[i] = 0.5 * (a[i] + b[i]);
    }
    m
}

fn dist2<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    (0..N).map(|i| (a[i] - b[i]) * (a[i] - b[i])).sum()
}

/// A simplex in `R^N` with `N + 1` vertices. The rules collapse at the first
/// vertex; `bisect` puts the new midpoint first so that a parent and its
/// children use different collapse points and their gap is a fair error
/// estimate.
trait Cell: Clone + Send {
    fn rule(&self, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64;
    fn bisect(&self) -> (Self, Self);
}

#[derive(Clone)]
struct Tri([[f64; 2]; 3]);

#[derive(Clone)]
struct Tet([P3; 4]);

fn longest_edge<const N: usize>(v: &[[f64; N]]) -> (usize, usize) {
    let mut best = (0, 1, -1.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = dist2(&v[i], &v[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    (best.0, best.1)
}

const TRI_DEGREE: usize = 7;
const TET_DEGREE: usize = 6;

impl Cell for Tri {
    // Collapsed (Duffy) product rule: x = p₀ + u(1−v) e₁ + u v e₂, Jacobian u · |e₁ × e₂|.
    fn rule(&self, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
        let [p0, p1, p2] = &self.0;
        let e1 = [p1[0] - p0[0], p1[1] - p0[1]];
        let e2 = [p2[0] - p0[0], p2[1] - p0[1]];
        let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
        let g = gauss_legendre(TRI_DEGREE);
        let mut s = 0.0;
        for &(xu, wu) in g {
            let u = 0.5 * (xu + 1.0);
            for &(xv, wv) in g {
                let v = 0.5 * (xv + 1.0);
                let a = u * (1.0 - v);
                let b = u * v;
                let x = [p0[0] + a * e1[0] + b * e2[0], p0[1] + a * e1[1] + b * e2[1]];
                s += 0.25 * wu * wv * u * f(&x);
            }
        }
        s * jac
    }

    fn bisect(&self) -> (Self, Self) {
        let (i, j) = longest_edge(&self.0);
        let k = 3 - i - j;
        let m = mid(&self.0[i], &self.0[j]);
        let v = &self.0;
        (Tri([m, v[i], v[k]]), Tri([m, v[j], v[k]]))
    }
}

impl Cell for Tet {
    // x = p₀ + u(1−v) e₁ + u v (1−w) e₂ + u v w e₃, Jacobian u² v · |det(e₁, e₂, e₃)|.
    fn rule(&self, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> f64 {
        let [p0, p1, p2, p3] = &self.0;
        let e1 = sub3(p1, p0);
        let e2 = sub3(p2, p0);
        let e3 = sub3(p3, p0);
        let jac = det3(&e1, &e2, &e3).abs();
        let g = gauss_legendre(TET_DEGREE);
        let mut s = 0.0;
        for &(xu, wu) in g {
            let u = 0.5 * (xu + 1.0);
            for &(xv, wv) in g {
                let v = 0.5 * (xv + 1.0);
                for &(xw, ww) in g {
                    let w = 0.5 * (xw + 1.0);
                    let (a, b, c) = (u * (1.0 - v), u * v * (1.0 - w), u * v * w);
                    let x = [
                        p0[0] + a * e1[0] + b * e2[0] + c * e3[0],
                        p0[1] + a * e1[1] + b * e2[1] + c * e3[1],
                        p0[2] + a * e1[2] + b * e2[2] + c * e3[2],
                    ];
                    s += 0.125 * wu * wv * ww * u * u * v * f(&x);
                }
            }
        }
        s * jac
    }

    fn bisect(&self) -> (Self, Self) {
        let (i, j) = longest_edge(&self.0);
        let (k, l) = match (0..4).filter(|&x| x != i && x != j).collect::<Vec<_>>()[..] {
            [k, l] => (k, l),
            _ => unreachable!(),
        };
        let m = mid(&self.0[i], &self.0[j]);
        let v = &self.0;
        (Tet([m, v[i], v[k], v[l]]), Tet([m, v[j], v[k], v[l]]))
    }
}

struct Region<C> {
    cell: C,
    value: f64,
    err: f64,
}

impl<C> PartialEq for Region<C> {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl<C> Eq for Region<C> {}
impl<C> PartialOrd for Region<C> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<C> Ord for Region<C> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn assess<C: Cell>(cell: C, f: &(dyn Fn(&[f64]) -> f64 + Sync)) -> Region<C> {
    let whole = cell.rule(f);
    let (a, b) = cell.bisect();
    let split = a.rule(f) + b.rule(f);
    Region {
        cell,
        value: split,
        err: (split - whole).abs(),
    }
}

/// Globally adaptive bisection; the error of a region is the gap between
/// the rule on it and on its two halves.
fn adapt<C: Cell>(
    cell: C,
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    tol: f64,
    max_regions: usize,
) -> Result<(f64, f64, usize)> {
    let mut heap = BinaryHeap::new();
    heap.push(assess(cell, f));
    let mut count = 1;
    loop {
        let err: f64 = heap.iter().map(|r| r.err).sum();
        if !err.is_finite() {
            return Err(Error::NonConvergence("non-finite integrand".into()));
        }
        if err <= tol {
            let value = heap.iter().map(|r| r.value).sum();
            return Ok((value, err, count));
        }
        if count >= max_regions {
            return Err(Error::NonConvergence(format!(
                "error estimate {err:e} above {tol:e} after {count} regions"
            )));
        }
        let worst = heap.pop().expect("nonempty");
        let (a, b) = worst.cell.bisect();
        heap.push(assess(a, f));
        heap.push(assess(b, f));
        count += 1;
    }
}

/// Checks that `b` lies beyond the triangle `tri`: the Busemann function
/// toward `ξ` is bounded on the triangle by `ln(1 / min(1 − ξ·y))`.
fn excludes(b: &Horoball, xi: &P3, tri: &[P3; 3]) -> bool {
    b.offset() > max_busemann_on(xi, tri)
}

fn max_busemann_on(xi: &P3, tri: &[P3; 3]) -> f64 {
    let m = tri
        .iter()
        .map(|y| 1.0 - dot3(xi, y))
        .fold(f64::INFINITY, f64::min);
    (1.0 / m).ln()
}

struct Layout {
    klein: [P3; 4],
    ideal: [bool; 4],
}

impl Layout {
    fn new(vertices: &[ProjectivePoint; 4]) -> Result<Self> {
        let mut klein = [[0.0; 3]; 4];
        let mut ideal = [false; 4];
        for (i, v) in vertices.iter().enumerate() {
            match v.kind() {
                PointKind::Outer => return Err(Error::NotProper),
                k => ideal[i] = k == PointKind::Ideal,
            }
            klein[i] = v.klein();
        }
        Ok(Self { klein, ideal })
    }

    /// Barycentric subdivision: (vertex, edge midpoint, face centroid, centroid).
    fn flags(&self) -> Vec<(usize, [P3; 3])> {
        let v = &self.klein;
        let c = [
            (v[0][0] + v[1][0] + v[2][0] + v[3][0]) / 4.0,
            (v[0][1] + v[1][1] + v[2][1] + v[3][1]) / 4.0,
            (v[0][2] + v[1][2] + v[2][2] + v[3][2]) / 4.0,
        ];
        let mut out = Vec::with_capacity(24);
        for i in 0..4 {
            for j in (0..4).filter(|&j| j != i) {
                for k in (0..4).filter(|&k| k != i && k != j) {
                    let me = mid(&v[i], &v[j]);
                    let mf = [
                        (v[i][0] + v[j][0] + v[k][0]) / 3.0,
                        (v[i][1] + v[j][1] + v[k][1]) / 3.0,
                        (v[i][2] + v[j][2] + v[k][2]) / 3.0,
                    ];
                    out.push((i, [me, mf, c]));
                }
            }
        }
        out
    }
}

/// Truncating horoballs at each ideal vertex, pushed `margin` beyond the
/// largest offset that still clears every base triangle of the subdivision.
pub fn default_cusps(vertices: &[ProjectivePoint; 4], margin: f64) -> Result<Vec<Horoball>> {
    let layout = Layout::new(vertices)?;
    let flags = layout.flags();
    let mut out = Vec::new();
    for i in (0..4).filter(|&i| layout.ideal[i]) {
        let xi = layout.klein[i];
        let bound = flags
            .iter()
            .filter(|(v, _)| *v == i)
            .map(|(_, tri)| max_busemann_on(&xi, tri))
            .fold(f64::NEG_INFINITY, f64::max);
        out.push(Horoball::from_offset(vertices[i], bound + margin)?);
    }
    Ok(out)
}

/// Hyperbolic volume of the simplex with the given vertices.
///
/// `cusps` holds one truncating horoball per ideal vertex; each must clear
/// the base triangles of the cells at its vertex.
pub fn quadrature_volume_of(
    vertices: &[ProjectivePoint; 4],
    cusps: &[Horoball],
    opts: &QuadratureOptions,
) -> Result<QuadratureReport> {
    let layout = Layout::new(vertices)?;
    let mut ball_at: [Option<Horoball>; 4] = [None; 4];
    for i in (0..4).filter(|&i| layout.ideal[i]) {
        let b = cusps
            .iter()
            .find(|b| b.center().projectively_eq(&vertices[i], 1e-9))
            .ok_or_else(|| {
                Error::InvalidConfiguration(format!("no truncating horoball at vertex {i}"))
            })?;
        ball_at[i] = Some(*b);
    }
    let flags = layout.flags();
    let cell_tol = opts.tol / flags.len() as f64;
    let parts: Vec<Result<(f64, f64, f64, usize)>> = flags
        .par_iter()
        .map(|(i, base)| {
            let apex = layout.klein[*i];
            match ball_at[*i] {
                None => {
                    let f = |x: &[f64]| {
                        let r = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
                        1.0 / (r * r)
                    };
                    let (v, e, n) = adapt(
                        Tet([apex, base[0], base[1], base[2]]),
                        &f,
                        cell_tol,
                        opts.max_regions,
                    )?;
                    Ok((v, 0.0, e, n))
                }
                Some(ball) => {
                    if !excludes(&ball, &apex, base) {
                        return Err(Error::InvalidConfiguration(format!(
                            "truncating horoball at vertex {i} reaches into the cell base"
                        )));
                    }
                    let cone = cone_integrand(&ball, apex, *base);
                    let (v, e, n) = adapt(
                        Tri([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]),
                        &cone,
                        cell_tol,
                        opts.max_regions,
                    )?;
                    let pts = base.map(ProjectivePoint::from_klein);
                    let piece = horoball_piece_volume(&ball, &pts)?;
                    Ok((v, piece, e, n))
                }
            }
        })
        .collect();
    let mut report = QuadratureReport {
        volume: 0.0,
        truncated: 0.0,
        cusps: 0.0,
        error_estimate: 0.0,
        regions: 0,
    };
    for p in parts {
        let (v, c, e, n) = p?;
        report.truncated += v;
        report.cusps += c;
        report.error_estimate += e;
        report.regions += n;
    }
    report.volume = report.truncated + report.cusps;
    Ok(report)
}

/// Integrand over the reference triangle `(u, w)` of the cone from `ξ` over `base`.
///
/// With `y = p₀ + u e₁ + w e₂`, `a = 2(1 − ξ·y)`, `b = |y − ξ|²` and the
/// horosphere crossing at `t₀`, the radial integral is
/// `(1 − t₀) / ((a − b)(a − t₀ b))`, times `|det(p₀ − ξ, e₁, e₂)|`.
fn cone_integrand(ball: &Horoball, xi: P3, base: [P3; 3]) -> impl Fn(&[f64]) -> f64 + Sync {
    let [p0, p1, p2] = base;
    let e1 = sub3(&p1, &p0);
    let e2 = sub3(&p2, &p0);
    let jac = det3(&sub3(&p0, &xi), &e1, &e2).abs();
    let c = (-2.0 * ball.offset()).exp();
    let xi4 = [1.0, xi[0], xi[1], xi[2]];
    move |uw: &[f64]| {
        let (u, w) = (uw[0], uw[1]);
        let y = [
            p0[0] + u * e1[0] + w * e2[0],
            p0[1] + u * e1[1] + w * e2[1],
            p0[2] + u * e1[2] + w * e2[2],
        ];
        let y4 = [1.0, y[0], y[1], y[2]];
        let xa = lorentz_inner(&xi4, &y4);
        let lambda = -(xa * xa / c + lorentz_inner(&y4, &y4)) / (2.0 * xa);
        let t0 = 1.0 / (1.0 + lambda);
        let a = 2.0 * (1.0 - dot3(&xi, &y));
        let b = dist2(&y, &xi);
        jac * (1.0 - t0) / ((a - b) * (a - t0 * b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_polynomials() {
        let tri = Tri([[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]);
        let f = |x: &[f64]| x[0] * x[0] * x[1];
        // ∫ over the triangle (0,0),(2,0),(0,1) of x²y = 2/15.
        assert!((tri.rule(&f) - 2.0 / 15.0).abs() < 1e-14);
        let tet = Tet([[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let g = |x: &[f64]| x[0] * x[1] * x[2];
        assert!((tet.rule(&g) - 1.0 / 720.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let f = |x: &[f64]| 1.0 / (1e-2 + x[0] * x[0] + x[1] * x[1]);
        let (v, _, n) =
            adapt(Tri([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), &f, 1e-10, 10_000).unwrap();
        assert!(n > 1);
        // Symmetric in the quarter disc sense; compare with a fine fixed rule.
        let mut fine = 0.0;
        let m = 400;
        let h = 1.0 / m as f64;
        for i in 0..m {
            for j in 0..m - i {
                let base = Tri([
                    [i as f64 * h, j as f64 * h],
                    [(i + 1) as f64 * h, j as f64 * h],
                    [i as f64 * h, (j + 1) as f64 * h],
                ]);
                fine += base.rule(&f);
                if i + j + 1 < m {
                    let up = Tri([
                        [(i + 1) as f64 * h, j as f64 * h],
                        [(i + 1) as f64 * h, (j + 1) as f64 * h],
                        [i as f64 * h, (j + 1) as f64 * h],
                    ]);
                    fine += up.rule(&f);
                }
            }
        }
        assert!((v - fine).abs() < 1e-9, "{v} {fine}");
    }

    #[test]
    fn small_euclidean_tet_near_center() {
        // Near the center the metric is almost Euclidean.
        let e = 1e-3;
        let tet = Tet([[0.0; 3], [e, 0.0, 0.0], [0.0, e, 0.0], [0.0, 0.0, e]]);
        let f = |x: &[f64]| {
            let r = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            1.0 / (r * r)
        };
        let v = tet.rule(&f);
        assert!((v / (e * e * e / 6.0) - 1.0).abs() < 1e-5);
    }
}
