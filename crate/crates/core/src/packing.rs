//! Optimal horoball packings of a Coxeter simplex.
//!
//! Each ideal vertex `Aᵢ` carries a horoball with parameter `sᵢ`; a larger
//! `s` means a smaller ball. A packing is admissible when no ball crosses the
//! face opposite its center (`sᵢ ≥ maximal_s(i)`) and no two balls overlap
//! along the edge joining their centers. The density is a strictly convex
//! function along the tangency curve of two balls, so optima sit at the
//! anchored configurations produced by [`enumerate_configurations`]. A random
//! interior search in [`falsify`] checks that claim numerically.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{Anomaly, Catalog, CoxeterSimplex};
use crate::error::{Error, Result};
use crate::horoball::{
    busemann, edge_intersection, horoball_cone_volume, horoball_piece_volume, s_from_tangency,
    Horoball,
};
use crate::lorentz::{project_onto_plane, LorentzIsometry, ProjectivePoint};
use crate::volume::closed_form_volume;

/// Slack allowed when checking the admissibility constraints.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Number of independent sampler shards; fixed so results do not depend on
/// the thread count.
pub const SHARDS: usize = 16;

/// Knobs for [`optimize`] and [`verify_all`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingOptions {
    /// Allowed `|density − tabulated density|`.
    pub tolerance: f64,
    /// Feasible interior samples drawn by the falsification search.
    pub samples: usize,
    pub seed: u64,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            samples: 10_000,
            seed: 0,
        }
    }
}

/// Horoball parameters at the ideal vertices of one simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingConfiguration {
    pub witt: String,
    /// Ideal vertex index → `s`.
    pub s: BTreeMap<usize, f64>,
    /// Vertex whose horoball was made maximal first.
    pub anchor: usize,
}

impl PackingConfiguration {
    pub fn horoball(&self, simplex: &CoxeterSimplex, i: usize) -> Result<Horoball> {
        let s = *self
            .s
            .get(&i)
            .ok_or_else(|| Error::InvalidConfiguration(format!("no horoball at vertex {i}")))?;
        Horoball::new(simplex.vertices[i], s)
    }
}

/// Densities and piece volumes of a configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingResult {
    pub configuration: PackingConfiguration,
    /// Ideal vertex index → volume of its horoball inside the simplex.
    pub piece_volumes: BTreeMap<usize, f64>,
    /// Ideal vertex index → share of the total piece volume.
    pub ratios: BTreeMap<usize, f64>,
    pub simplex_volume: f64,
    pub density: f64,
}

/// `s` of the horoball at `Aᵢ` tangent to the opposite face `uᵢ`.
pub fn maximal_s(simplex: &CoxeterSimplex, i: usize) -> Result<f64> {
    let xi = &simplex.vertices[i];
    if !simplex.ideal[i] {
        return Err(Error::NotIdeal);
    }
    let foot = project_onto_plane(xi, &simplex.faces[i])?;
    let frame = LorentzIsometry::frame_to_north(xi)?;
    s_from_tangency(xi, &foot, &frame)
}

fn origin() -> ProjectivePoint {
    ProjectivePoint::new([1.0, 0.0, 0.0, 0.0]).expect("origin")
}

/// `s` at `to` making its horoball tangent, along the edge, to the horoball
/// with parameter `s_from` at `from`.
pub fn propagate_tangency(
    simplex: &CoxeterSimplex,
    from: usize,
    s_from: f64,
    to: usize,
) -> Result<f64> {
    if !simplex.ideal[from] || !simplex.ideal[to] || from == to {
        return Err(Error::NotIdeal);
    }
    let ball = Horoball::new(simplex.vertices[from], s_from)?;
    let h = edge_intersection(&ball, &simplex.vertices[to]).map_err(|_| {
        Error::NoTangency(format!(
            "horoball at A{from} with s = {s_from} already contains A{to}"
        ))
    })?;
    Ok(busemann(&origin(), &h, &simplex.vertices[to])?.tanh())
}

/// Anchored configurations: the anchor gets its maximal horoball, then every
/// other ideal vertex in turn gets the largest horoball that stays inside its
/// face and does not overlap any ball placed before it. Equal configurations
/// are reported once.
pub fn enumerate_configurations(simplex: &CoxeterSimplex) -> Result<Vec<PackingConfiguration>> {
    let ideal = simplex.ideal_vertices();
    let caps: BTreeMap<usize, f64> = ideal
        .iter()
        .map(|&i| maximal_s(simplex, i).map(|c| (i, c)))
        .collect::<Result<_>>()?;
    let mut out: Vec<PackingConfiguration> = Vec::new();
    for &anchor in &ideal {
        let mut s = BTreeMap::new();
        s.insert(anchor, caps[&anchor]);
        // All ideal vertices of a simplex are pairwise adjacent, so the
        // breadth-first order from the anchor is the index order.
        for &v in ideal.iter().filter(|&&v| v != anchor) {
            let mut sv = caps[&v];
            for (&w, &sw) in &s {
                sv = sv.max(propagate_tangency(simplex, w, sw, v)?);
            }
            s.insert(v, sv);
        }
        let dup = out
            .iter()
            .any(|c| c.s.iter().all(|(k, v)| (v - s[k]).abs() <= FEASIBILITY_TOL));
        if !dup {
            out.push(PackingConfiguration {
                witt: simplex.witt.clone(),
                s,
                anchor,
            });
        }
    }
    Ok(out)
}

/// Checks admissibility and computes piece volumes, ratios and density.
pub fn evaluate(simplex: &CoxeterSimplex, config: &PackingConfiguration) -> Result<PackingResult> {
    let ideal = simplex.ideal_vertices();
    if config.s.keys().copied().collect::<Vec<_>>() != ideal {
        return Err(Error::InvalidConfiguration(format!(
            "horoballs at {:?}, ideal vertices are {:?}",
            config.s.keys().collect::<Vec<_>>(),
            ideal
        )));
    }
    for (&i, &si) in &config.s {
        let cap = maximal_s(simplex, i)?;
        if si < cap - FEASIBILITY_TOL {
            return Err(Error::InvalidConfiguration(format!(
                "horoball at A{i} crosses the opposite face: s = {si} below {cap}"
            )));
        }
    }
    for (&i, &si) in &config.s {
        for (&j, &sj) in config.s.range(i + 1..) {
            let need = propagate_tangency(simplex, i, si, j)
                .map_err(|e| Error::InvalidConfiguration(e.to_string()))?;
            if sj < need - FEASIBILITY_TOL {
                return Err(Error::InvalidConfiguration(format!(
                    "horoballs at A{i} and A{j} overlap: s{j} = {sj} below {need}"
                )));
            }
        }
    }
    let mut piece_volumes = BTreeMap::new();
    for &i in &ideal {
        let ball = config.horoball(simplex, i)?;
        let others: Vec<ProjectivePoint> = (0..4)
            .filter(|&j| j != i)
            .map(|j| simplex.vertices[j])
            .collect();
        let v = horoball_piece_volume(&ball, &[others[0], others[1], others[2]])?;
        piece_volumes.insert(i, v);
    }
    let total: f64 = piece_volumes.values().sum();
    let ratios = piece_volumes
        .iter()
        .map(|(&i, &v)| (i, v / total))
        .collect();
    let simplex_volume = closed_form_volume(&simplex.volume);
    Ok(PackingResult {
        configuration: config.clone(),
        piece_volumes,
        ratios,
        simplex_volume,
        density: total / simplex_volume,
    })
}

/// Points where the horoball at `Aᵢ` crosses the three edges leaving `Aᵢ`,
/// keyed by the far endpoint.
pub fn edge_points(
    simplex: &CoxeterSimplex,
    config: &PackingConfiguration,
    i: usize,
) -> Result<BTreeMap<usize, ProjectivePoint>> {
    let ball = config.horoball(simplex, i)?;
    (0..4)
        .filter(|&j| j != i)
        .map(|j| edge_intersection(&ball, &simplex.vertices[j]).map(|p| (j, p)))
        .collect()
}

/// Outcome of the random interior search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FalsificationReport {
    /// Feasible samples evaluated.
    pub samples: usize,
    /// Candidates drawn, including rejected ones.
    pub drawn: usize,
    /// Best density among samples and their locally pushed variants.
    pub best_sampled: f64,
    /// Samples beating the enumerated optimum.
    pub violations: usize,
}

/// Best configuration together with every anchored alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub best: PackingResult,
    /// Every configuration reaching the best density, lowest anchor first.
    pub maximizers: Vec<PackingResult>,
    pub configurations: Vec<PackingResult>,
    pub falsification: Option<FalsificationReport>,
}

const TIE_TOL: f64 = 1e-12;

/// Maximizes the density over the anchored configurations and, unless
/// `opts.samples` is zero, searches the interior for a counterexample.
pub fn optimize(simplex: &CoxeterSimplex, opts: &PackingOptions) -> Result<Optimum> {
    let configurations = enumerate_configurations(simplex)?
        .iter()
        .map(|c| evaluate(simplex, c))
        .collect::<Result<Vec<_>>>()?;
    let top = configurations
        .iter()
        .map(|r| r.density)
        .fold(f64::NEG_INFINITY, f64::max);
    let maximizers: Vec<PackingResult> = configurations
        .iter()
        .filter(|r| r.density >= top - TIE_TOL)
        .cloned()
        .collect();
    let best = maximizers[0].clone();
    let falsification = if opts.samples > 0 && simplex.n_ideal() > 1 {
        Some(falsify(simplex, best.density, &configurations, opts)?)
    } else {
        None
    };
    Ok(Optimum {
        best,
        maximizers,
        configurations,
        falsification,
    })
}

fn feasible(simplex: &CoxeterSimplex, s: &BTreeMap<usize, f64>) -> Result<bool> {
    for (&i, &si) in s {
        for (&j, &sj) in s.range(i + 1..) {
            match propagate_tangency(simplex, i, si, j) {
                Ok(need) if sj >= need => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// Grows each ball in turn as far as the constraints allow.
fn push_to_boundary(
    simplex: &CoxeterSimplex,
    caps: &BTreeMap<usize, f64>,
    s: &mut BTreeMap<usize, f64>,
) -> Result<()> {
    let keys: Vec<usize> = s.keys().copied().collect();
    for &v in &keys {
        let mut sv = caps[&v];
        for &w in keys.iter().filter(|&&w| w != v) {
            sv = sv.max(propagate_tangency(simplex, w, s[&w], v)?);
        }
        s.insert(v, sv);
    }
    Ok(())
}

fn shard_seed(seed: u64, witt: &str) -> u64 {
    // FNV-1a, so each tiling gets its own stream for a given seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in witt.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^ seed
}

/// Draws feasible parameter vectors between the caps and the largest values
/// used by any anchored configuration, evaluates each and a locally pushed
/// copy, and counts those above `optimum`.
pub fn falsify(
    simplex: &CoxeterSimplex,
    optimum: f64,
    configurations: &[PackingResult],
    opts: &PackingOptions,
) -> Result<FalsificationReport> {
    let ideal = simplex.ideal_vertices();
    let caps: BTreeMap<usize, f64> = ideal
        .iter()
        .map(|&i| maximal_s(simplex, i).map(|c| (i, c)))
        .collect::<Result<_>>()?;
    let upper: BTreeMap<usize, f64> = ideal
        .iter()
        .map(|&i| {
            let hi = configurations
                .iter()
                .map(|r| r.configuration.s[&i])
                .fold(caps[&i], f64::max);
            (i, hi.max(caps[&i] + 1e-3))
        })
        .collect();
    let base = shard_seed(opts.seed, &simplex.witt);
    let per_shard = opts.samples.div_ceil(SHARDS);
    let shards: Vec<Result<(usize, usize, f64, usize)>> = (0..SHARDS)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(base);
            rng.set_stream(k as u64);
            let mut accepted = 0;
            let mut drawn = 0;
            let mut best = f64::NEG_INFINITY;
            let mut violations = 0;
            while accepted < per_shard {
                drawn += 1;
                if drawn > 1000 * per_shard.max(1) {
                    return Err(Error::NonConvergence(format!(
                        "feasible region of {} too thin to sample",
                        simplex.witt
                    )));
                }
                let mut s: BTreeMap<usize, f64> = ideal
                    .iter()
                    .map(|&i| (i, rng.gen_range(caps[&i]..=upper[&i])))
                    .collect();
                if !feasible(simplex, &s)? {
                    continue;
                }
                accepted += 1;
                let mut cfg = PackingConfiguration {
                    witt: simplex.witt.clone(),
                    s: s.clone(),
                    anchor: ideal[0],
                };
                for pass in 0..2 {
                    let d = evaluate(simplex, &cfg)?.density;
                    best = best.max(d);
                    if d > optimum + TIE_TOL {
                        violations += 1;
                    }
                    if pass == 0 {
                        push_to_boundary(simplex, &caps, &mut s)?;
                        cfg.s = s.clone();
                    }
                }
            }
            Ok((accepted, drawn, best, violations))
        })
        .collect();
    let mut report = FalsificationReport {
        samples: 0,
        drawn: 0,
        best_sampled: f64::NEG_INFINITY,
        violations: 0,
    };
    for s in shards {
        let (a, d, b, v) = s?;
        report.samples += a;
        report.drawn += d;
        report.best_sampled = report.best_sampled.max(b);
        report.violations += v;
    }
    Ok(report)
}

/// Total volume of two tangent horoballs at `Aᵢ` and `Aⱼ`, each cut by the
/// cone from its center over the opposite face, after their tangency point
/// moves a distance `x` along the edge from the position where both volumes
/// are equal, divided by the total at `x = 0`.
///
/// The cones are unbounded, so a ball grown past its cap still counts.
pub fn tangency_shift_ratio(simplex: &CoxeterSimplex, i: usize, j: usize, x: f64) -> Result<f64> {
    let pieces = |offset_i: f64| -> Result<(f64, f64)> {
        let bi = Horoball::from_offset(simplex.vertices[i], offset_i)?;
        let sj = propagate_tangency(simplex, i, bi.s(), j)?;
        let bj = Horoball::new(simplex.vertices[j], sj)?;
        let far = |k: usize| -> [ProjectivePoint; 3] {
            let v: Vec<ProjectivePoint> = (0..4)
                .filter(|&m| m != k)
                .map(|m| simplex.vertices[m])
                .collect();
            [v[0], v[1], v[2]]
        };
        Ok((
            horoball_cone_volume(&bi, &far(i))?,
            horoball_cone_volume(&bj, &far(j))?,
        ))
    };
    let start = maximal_s(simplex, i)?.atanh() + 0.5;
    let (pi, pj) = pieces(start)?;
    let balanced = start + 0.25 * (pi / pj).ln();
    let (qi, qj) = pieces(balanced)?;
    let (ri, rj) = pieces(balanced + x)?;
    Ok((ri + rj) / (qi + qj))
}

/// One row of [`verify_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub witt: String,
    pub optimum: Optimum,
    pub paper_density: f64,
    pub residual: f64,
    /// The entry records a known density anomaly.
    pub anomaly: bool,
}

/// Optimizes every catalog entry in parallel, in catalog order.
pub fn verify_all(catalog: &Catalog, opts: &PackingOptions) -> Result<Vec<Verification>> {
    catalog
        .entries
        .par_iter()
        .map(|s| {
            let optimum = optimize(s, opts)?;
            let paper = s.paper_density.printed();
            Ok(Verification {
                witt: s.witt.clone(),
                residual: (optimum.best.density - paper).abs(),
                paper_density: paper,
                anomaly: s.has_anomaly(Anomaly::Density),
                optimum,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::embedded;

    #[test]
    fn caps_match_tables() {
        let c = embedded();
        assert!(maximal_s(c.find("V3").unwrap(), 0).unwrap().abs() < 1e-12);
        assert!((maximal_s(c.find("R3").unwrap(), 0).unwrap() - 1.0 / 7.0).abs() < 1e-12);
        assert!((maximal_s(c.find("BRhat3").unwrap(), 0).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            maximal_s(c.find("V3").unwrap(), 1),
            Err(Error::NotIdeal)
        ));
    }

    #[test]
    fn propagation_examples() {
        let c = embedded();
        let dv = c.find("DV3").unwrap();
        assert!((propagate_tangency(dv, 0, -1.0 / 3.0, 1).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let vv = c.find("VVhat3").unwrap();
        let t = 2.0 - 3f64.sqrt();
        assert!((propagate_tangency(vv, 0, -t, 1).unwrap() - t).abs() < 1e-12);
    }

    #[test]
    fn single_cusp_has_one_configuration() {
        let v3 = embedded().find("V3").unwrap();
        assert_eq!(enumerate_configurations(v3).unwrap().len(), 1);
        let m3 = embedded().find("M3").unwrap();
        assert_eq!(enumerate_configurations(m3).unwrap().len(), 3);
    }

    #[test]
    fn shrinking_past_cap_is_fine_growing_is_not() {
        let y3 = embedded().find("Y3").unwrap();
        let mut cfg = enumerate_configurations(y3).unwrap().remove(0);
        *cfg.s.get_mut(&3).unwrap() += 0.1;
        assert!(evaluate(y3, &cfg).is_ok());
        *cfg.s.get_mut(&0).unwrap() -= 0.01;
        assert!(matches!(
            evaluate(y3, &cfg),
            Err(Error::InvalidConfiguration(_))
        ));
    }
}
