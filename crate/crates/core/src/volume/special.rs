//! Lobachevsky function and Catalan's constant.
//!
//! Convention: `Λ(θ) = −∫₀^θ ln|2 sin t| dt = ½ Cl₂(2θ)`. It is odd and
//! π-periodic, `Λ(π/3) ≈ 0.3383138688` and `Λ(π/4) = G/2`.

use std::f64::consts::PI;

const SERIES_TERMS: usize = 40;

/// `ζ(2k)` for `k ≥ 1`, by direct summation with an Euler–Maclaurin tail.
fn zeta_even(k: usize) -> f64 {
    let p = (2 * k) as f64;
    match k {
        1 => PI * PI / 6.0,
        2 => PI.powi(4) / 90.0,
        _ => {
            const N: usize = 30;
            let mut s = 0.0;
            for n in (1..=N).rev() {
                s += (n as f64).powf(-p);
            }
            let n = N as f64;
            s + n.powf(1.0 - p) / (p - 1.0) - 0.5 * n.powf(-p) + p / 12.0 * n.powf(-p - 1.0)
        }
    }
}

fn zeta_coefficients() -> &'static [f64; SERIES_TERMS] {
    use std::sync::OnceLock;
    static COEF: OnceLock<[f64; SERIES_TERMS]> = OnceLock::new();
    COEF.get_or_init(|| {
        let mut c = [0.0; SERIES_TERMS];
        for (i, ci) in c.iter_mut().enumerate() {
            let k = i + 1;
            *ci = zeta_even(k) / ((k * (2 * k + 1)) as f64) / (2.0 * PI).powi(2 * k as i32);
        }
        c
    })
}

/// Clausen function `Cl₂(x)` for `|x| ≤ π`:
/// `x − x ln|x| + Σ ζ(2k) / (k(2k+1)) · x^{2k+1} / (2π)^{2k}`.
fn clausen_reduced(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut pow = x;
    let mut sum = 0.0;
    for c in zeta_coefficients() {
        pow *= x2;
        sum += c * pow;
    }
    x - x * x.abs().ln() + sum
}

/// `Λ(θ)`, accurate to about 1e−15 for any real argument.
pub fn lobachevsky(theta: f64) -> f64 {
    // Reduce to [−π/2, π/2] by π-periodicity; then Cl₂ is needed on [−π, π].
    let r = theta - PI * (theta / PI).round();
    0.5 * clausen_reduced(2.0 * r)
}

/// `Λ(θ) = ½ Σ sin(2nθ)/n²` truncated after `n_terms`, with a bound on the remainder.
///
/// Summation by parts bounds the tail by `1 / ((N+1)² |sin θ|)`.
pub fn lobachevsky_fourier(theta: f64, n_terms: usize) -> (f64, f64) {
    let mut s = 0.0;
    for n in (1..=n_terms).rev() {
        let nf = n as f64;
        s += (2.0 * nf * theta).sin() / (nf * nf);
    }
    let m = (n_terms + 1) as f64;
    let bound = 1.0 / (m * m * theta.sin().abs());
    (0.5 * s, bound)
}

/// `Λ(θ)` for `θ ∈ [0, π]` by Gauss–Legendre quadrature of the defining integral.
///
/// The logarithmic singularities at `0` and `π` are subtracted and integrated exactly.
pub fn lobachevsky_quadrature(theta: f64) -> f64 {
    assert!((0.0..=PI).contains(&theta));
    if theta == 0.0 {
        return 0.0;
    }
    // ln(2 sin t) = g(t) + ln t + ln(π − t) with g smooth on [0, π].
    let g = |t: f64| {
        let u = PI - t;
        let sin_t = if t <= u { t.sin() } else { u.sin() };
        (2.0 * sin_t / (t * u)).ln()
    };
    let rule = super::quadrature::gauss_legendre(30);
    let panels = 8;
    let h = theta / panels as f64;
    let mut smooth = 0.0;
    for k in 0..panels {
        let a = k as f64 * h;
        for &(x, w) in rule {
            smooth += w * 0.5 * h * g(a + 0.5 * h * (x + 1.0));
        }
    }
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let log_t = xlogx(theta) - theta;
    let u = PI - theta;
    let log_u = -(xlogx(u) - u) + (xlogx(PI) - PI);
    -(smooth + log_t + log_u)
}

/// Catalan's constant by the Cohen–Villegas–Zagier acceleration of
/// `Σ (−1)ⁿ / (2n+1)²`.
pub fn catalan() -> f64 {
    catalan_cvz(30)
}

pub fn catalan_cvz(n: usize) -> f64 {
    let nf = n as f64;
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0;
    let mut c = -d;
    let mut s = 0.0;
    for k in 0..n {
        let kf = k as f64;
        c = b - c;
        s += c / ((2.0 * kf + 1.0) * (2.0 * kf + 1.0));
        b *= (kf + nf) * (kf - nf) / ((kf + 0.5) * (kf + 1.0));
    }
    s / d
}

/// `G = (π/8) ln(2+√3) + (3/8) Σ 1 / ((2n+1)² C(2n,n))`.
pub fn catalan_binomial() -> f64 {
    let mut s = 0.0;
    let mut inv_binom = 1.0;
    for n in 0..60 {
        let nf = n as f64;
        s += inv_binom / ((2.0 * nf + 1.0) * (2.0 * nf + 1.0));
        // C(2n+2, n+1) = C(2n, n) (2n+1)(2n+2) / (n+1)².
        inv_binom *= (nf + 1.0) * (nf + 1.0) / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0));
    }
    PI / 8.0 * (2.0 + 3f64.sqrt()).ln() + 3.0 / 8.0 * s
}

/// The simplicial horoball density bound `1 / (2√3 Λ(π/3))`.
pub fn theta_bound() -> f64 {
    1.0 / (2.0 * 3f64.sqrt() * lobachevsky(PI / 3.0))
}

/// `2 / (5√3 Λ(π/3))`.
pub fn rho_density() -> f64 {
    2.0 / (5.0 * 3f64.sqrt() * lobachevsky(PI / 3.0))
}

/// `3 / (4G)`.
pub fn sigma_density() -> f64 {
    3.0 / (4.0 * catalan())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI / 2.0).abs() < 1e-15);
        assert!((lobachevsky(PI / 3.0) - 0.338_313_868_8).abs() < 1e-10);
        assert!((2.0 * lobachevsky(PI / 4.0) - catalan()).abs() < 1e-15);
        assert!((lobachevsky(PI / 6.0) - 1.5 * lobachevsky(PI / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn symmetries() {
        for &t in &[0.1, 0.7, 1.3, 2.9] {
            assert!((lobachevsky(-t) + lobachevsky(t)).abs() < 1e-15);
            assert!((lobachevsky(t + PI) - lobachevsky(t)).abs() < 1e-14);
        }
    }

    #[test]
    fn catalan_routes_agree() {
        assert!((catalan() - 0.915_965_594_177_219).abs() < 1e-15);
        assert!((catalan() - catalan_binomial()).abs() < 1e-15);
        assert!((sigma_density() - 0.818_808).abs() < 1e-6);
        assert!((theta_bound() - 0.853_276).abs() < 1e-6);
        assert!((rho_density() - 0.682_620).abs() < 1e-6);
    }

    #[test]
    fn quadrature_agrees_with_series() {
        for i in 1..50 {
            let t = PI * i as f64 / 50.0;
            assert!(
                (lobachevsky_quadrature(t) - lobachevsky(t)).abs() < 1e-13,
                "{t}"
            );
        }
    }
}
