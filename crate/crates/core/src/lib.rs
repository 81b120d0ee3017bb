//! Optimal horoball packings of the 23 noncompact Coxeter simplex tilings of
//! hyperbolic 3-space.
//!
//! The crate works in the projective (Cayley–Klein) model with the Lorentz
//! form `⟨x, y⟩ = −x⁰y⁰ + x¹y¹ + x²y² + x³y³`:
//!
//! - [`lorentz`]: points, hyperplanes, isometries and Gram matrices;
//! - [`horoball`]: horoballs, the Busemann function and Bolyai piece volumes;
//! - [`volume`]: the Lobachevsky function, closed-form simplex volumes and an
//!   independent quadrature oracle;
//! - [`catalog`]: the simplex data with self-validation;
//! - [`packing`]: the density optimizer and its falsification search;
//! - [`cli`]: the `horopack` command line.
//!
//! ```
//! use horopack::{catalog, packing};
//!
//! let v3 = catalog::embedded().find("V3").unwrap();
//! let opt = packing::optimize(v3, &packing::PackingOptions::default()).unwrap();
//! assert!((opt.best.density - 0.853276).abs() < 1e-6);
//! ```

pub mod catalog;
pub mod cli;
pub mod error;
pub mod horoball;
pub mod lorentz;
pub mod packing;
pub mod volume;

pub use error::{Error, Result};
