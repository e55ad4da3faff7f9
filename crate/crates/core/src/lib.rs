//! Beilinson monads over the exterior algebra, finite-field random search on
//! `G(10,4)`, and certification of degree-12, sectional-genus-13 rational
//! surfaces in `P^4`.
//!
//! Modules, bottom-up:
//!
//! - [`gf`]: prime-field arithmetic and dense linear algebra.
//! - [`extalg`]: the exterior algebra, twisted free modules and their maps.
//! - [`eres`]: syzygies, minimal resolutions and Betti tables over `E`.
//! - [`monad`]: the monad construction, membership test, search, tangent space.
//! - [`bgg`]: Koszul section spaces, monad cohomology, ideal reconstruction.
//! - [`poly`]: polynomials, Gröbner bases, Hilbert polynomials, smoothness.
//! - [`adjunction`]: Picard-lattice arithmetic and the adjunction replay.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod gf;
pub mod extalg;
pub mod eres;
pub mod monad;
pub mod poly;
pub mod bgg;
pub mod adjunction;

pub use error::{Error, Result};
