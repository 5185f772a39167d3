//! Exact word-metric computations in finitely generated metabelian groups
//! of finite Prüfer rank.
//!
//! The crate provides exact big-rational arithmetic with the mu size
//! measures, group models `Z^k ⋉ B` with certified collecting bounds, a BFS
//! geodesic oracle, exact spectral analysis (unit-circle eigenvalue
//! detection, hyperbolic element search, numeric splitting projectors), and
//! the constructive short-word synthesizers whose lengths realize the
//! logarithmic upper bounds.

pub mod rational;
pub mod fit;
pub mod logx;
pub mod matrix;
pub mod poly;
pub mod group;
pub mod ball;
pub mod spectral;
pub mod bigfloat;
pub mod numeric;
pub mod ring;
pub mod shortwords;

pub use fit::{envelope_fit, FitError, QuasiFit};
pub use matrix::{MatrixError, RatMatrix};
pub use poly::{IPoly, QPoly};
pub use rational::{mu, mu_e, one_norm, parse_rational, Rational};
