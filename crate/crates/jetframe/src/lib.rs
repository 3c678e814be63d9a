//! Exact symbolic machinery for slanted vector fields on spaces of vertical
//! jets of universal hypersurfaces and complete intersections.
//!
//! The crate builds, over the rationals and without any floating point,
//! the full frame of tangent vector fields on the space of vertical
//! (optionally logarithmic) k-jets of a universal family, and mechanically
//! verifies the identities that make the frame work: tangency of every
//! field, exact spanning rank at sampled points of the vertical-jet
//! variety, the Bell-matrix and Faà di Bruno combinatorics, and the
//! pole-order accounting with its `5k - 2` maximum.
//!
//! Module map:
//! - [`var`], [`poly`]: sparse multivariate polynomials over `Q` on a
//!   structured variable universe, plus the degree/pole-order functionals.
//! - [`series`]: truncated power series used as an independent oracle.
//! - [`jet`]: jet-space instances, the formal derivations `D_t` and
//!   `D_{z1}`, adjoint actions and the Lambda maps.
//! - [`bell`]: Bell polynomials, the coordinate-change matrices and the
//!   geometric jet coordinate transforms.
//! - [`forge`]: the vector-field families and full frame assembly.
//! - [`verify`]: tangency checks, exact rank at sampled vertical points,
//!   dimension accounting, pole audit and report generation.
//! - [`cli`]: the `jetframe` command line front end.
//!
//! Run `cargo run --example slanted_frame` for a guided tour; the
//! `examples/` directory has one runnable example per capability.

pub mod bell;
pub mod cli;
pub mod error;
pub mod forge;
pub mod jet;
pub mod linalg;
pub mod poly;
pub mod series;
pub mod var;
pub mod verify;

pub use error::Error;
pub use jet::{JetCase, JetConfig, JetSpace, LambdaVec, VectorField};
pub use poly::{FracPoly, Poly, Rat};
pub use var::{MultiIndex, Monomial, VarId};
