//! Dense linear algebra over exact rationals, with an `f64` fallback.
//!
//! Everything downstream is generic over [`Scalar`]. The scalar type fixes the
//! arithmetic mode for a whole computation: [`Rational`] runs deterministic
//! Gaussian elimination, `f64` runs SVD-based routines with relative
//! tolerances from [`crate::tolerance`].

mod exact;
mod float;
mod mat;
mod subspace;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use thiserror::Error;

pub use mat::Mat;
pub use subspace::{
    complement_within, image_complement_basis, intersect, kernel_basis, project_onto, rank,
    solve_in_image, SubspaceBasis,
};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Arithmetic mode of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected exact|float)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("right-hand side is not in the column space (residual {residual:e})")]
    NotInColumnSpace { residual: f64 },
    #[error("subspace is not contained in the ambient subspace (residual {residual:e})")]
    NotContained { residual: f64 },
}

/// Outcome of comparing two subspaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubspaceCheck {
    pub holds: bool,
    /// Zero for an exact pass. Otherwise the sine of the largest principal
    /// angle (float) or the rank defect (exact).
    pub residual: f64,
}

/// Field scalar together with the decompositions the rest of the crate needs.
///
/// Matrices passed to the decomposition hooks may have zero rows or columns.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn is_zero(&self) -> bool;

    fn rank(m: &Mat<Self>) -> usize;
    /// Columns form a basis of the right nullspace.
    fn kernel(m: &Mat<Self>) -> Mat<Self>;
    /// Columns form a basis of the column space.
    fn column_space(m: &Mat<Self>) -> Mat<Self>;
    /// Solves `m · x = rhs` column by column.
    fn solve(m: &Mat<Self>, rhs: &Mat<Self>) -> Result<Mat<Self>, LinalgError>;
    /// Is the column space of `inner` contained in that of `outer`?
    fn contains(outer: &Mat<Self>, inner: &Mat<Self>) -> SubspaceCheck;
    /// Does a residual matrix count as zero, relative to `scale`?
    fn negligible(residual: &Mat<Self>, scale: f64) -> bool;

    fn same_subspace(a: &Mat<Self>, b: &Mat<Self>) -> SubspaceCheck {
        let ab = Self::contains(a, b);
        let ba = Self::contains(b, a);
        SubspaceCheck {
            holds: ab.holds && ba.holds,
            residual: ab.residual.max(ba.residual),
        }
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn rank(m: &Mat<Self>) -> usize {
        exact::bareiss_rank(m)
    }

    fn kernel(m: &Mat<Self>) -> Mat<Self> {
        exact::kernel(m)
    }

    fn column_space(m: &Mat<Self>) -> Mat<Self> {
        exact::column_space(m)
    }

    fn solve(m: &Mat<Self>, rhs: &Mat<Self>) -> Result<Mat<Self>, LinalgError> {
        exact::solve(m, rhs)
    }

    fn contains(outer: &Mat<Self>, inner: &Mat<Self>) -> SubspaceCheck {
        exact::contains(outer, inner)
    }

    fn negligible(residual: &Mat<Self>, _scale: f64) -> bool {
        residual.is_zero()
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn rank(m: &Mat<Self>) -> usize {
        float::rank(m)
    }

    fn kernel(m: &Mat<Self>) -> Mat<Self> {
        float::kernel(m)
    }

    fn column_space(m: &Mat<Self>) -> Mat<Self> {
        float::column_space(m)
    }

    fn solve(m: &Mat<Self>, rhs: &Mat<Self>) -> Result<Mat<Self>, LinalgError> {
        float::solve(m, rhs)
    }

    fn contains(outer: &Mat<Self>, inner: &Mat<Self>) -> SubspaceCheck {
        float::contains(outer, inner)
    }

    fn negligible(residual: &Mat<Self>, scale: f64) -> bool {
        residual.frobenius_norm() <= crate::tolerance::RESIDUAL_REL * scale.max(1.0)
    }
}

/// Parses an integer, decimal (optionally with exponent) or `p/q` literal exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let numer: BigInt = format!("{int_part}{frac_part}0").parse::<BigInt>().ok()? / 10;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num::pow(ten, (-scale) as usize))
    };
    Some(if negative { -value } else { value })
}

/// Canonical text form: `n` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
