//! Lobachevsky's function, Catalan's constant and the three density constants.

use std::f64::consts::PI;

use horopack::volume::{
    catalan, catalan_binomial, lobachevsky, lobachevsky_fourier, lobachevsky_quadrature,
    rho_density, sigma_density, theta_bound,
};

fn main() {
    println!(
        "{:>8} {:>18} {:>18} {:>18}",
        "θ/π", "Clausen", "integral", "Fourier (10⁴)"
    );
    for k in [1.0 / 12.0, 1.0 / 6.0, 0.25, 1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9] {
        let t = k * PI;
        println!(
            "{k:>8.4} {:>18.15} {:>18.15} {:>18.15}",
            lobachevsky(t),
            lobachevsky_quadrature(t),
            lobachevsky_fourier(t, 10_000).0
        );
    }
    println!();
    println!("G           = {:.15}", catalan());
    println!("G (binomial)= {:.15}", catalan_binomial());
    println!("2Λ(π/4)     = {:.15}", 2.0 * lobachevsky(PI / 4.0));
    println!();
    println!("Θ = 1/(2√3 Λ(π/3))     = {:.9}", theta_bound());
    println!("ρ                      = {:.9}", rho_density());
    println!("σ = 3/(4G)             = {:.9}", sigma_density());
}
