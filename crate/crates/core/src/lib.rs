//! Cellular cosheaf homology of pin-jointed trusses, moment frames and
//! anchored frames.
//!
//! A [`Framework`](framework::Framework) carries three cosheaves: the axial
//! force cosheaf `F`, the moment cosheaf `M` and the anchored cosheaf
//! `N = M / φF`. Their homology counts self-stresses (`H₁`) and degrees of
//! freedom (`H₀`); the short exact sequence `0 → F → M → N → 0` induces a long
//! exact sequence whose connecting map sends anchored self-stresses to truss
//! mechanisms. [`les`] builds that sequence and checks it.

pub mod cosheaf;
pub mod framework;
pub mod les;
pub mod linalg;
pub mod structural;
pub mod tolerance;

pub use framework::{Framework, FrameworkError};
pub use linalg::{Mat, Mode, Rational, Scalar, SubspaceBasis};
