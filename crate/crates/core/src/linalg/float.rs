//! SVD-backed routines for `f64` mode.

use nalgebra::DMatrix;

use super::{LinalgError, Mat, SubspaceCheck};
use crate::tolerance::{ANGLE_EPS, RANK_EPS, RECONSTRUCTION_REL, RESIDUAL_REL};

fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.entries())
}

fn from_dmatrix(d: &DMatrix<f64>) -> Mat<f64> {
    Mat::from_fn(d.nrows(), d.ncols(), |i, j| d[(i, j)])
}

struct Svd {
    u: DMatrix<f64>,
    sigma: Vec<f64>,
    v_t: DMatrix<f64>,
}

impl Svd {
    /// Thin SVD, checked by reconstruction. The direct decomposition is
    /// occasionally inaccurate on rank-deficient input, so the transpose and a
    /// QR-preconditioned variant are tried before giving up on accuracy.
    fn of(m: &DMatrix<f64>) -> Self {
        let tolerance = RECONSTRUCTION_REL * m.norm().max(f64::MIN_POSITIVE) * (m.nrows().max(m.ncols()) as f64);
        let mut best: Option<(f64, Svd)> = None;
        for candidate in [Self::direct, Self::via_transpose, Self::via_qr] {
            let svd = candidate(m);
            let error = svd.reconstruction_error(m);
            if error <= tolerance {
                return svd;
            }
            if best.as_ref().is_none_or(|(e, _)| error < *e) {
                best = Some((error, svd));
            }
        }
        best.expect("at least one candidate").1
    }

    fn direct(m: &DMatrix<f64>) -> Self {
        let svd = m.clone().svd(true, true);
        Svd {
            u: svd.u.expect("u requested"),
            sigma: svd.singular_values.iter().copied().collect(),
            v_t: svd.v_t.expect("v_t requested"),
        }
    }

    fn via_transpose(m: &DMatrix<f64>) -> Self {
        let t = Self::direct(&m.transpose());
        Svd {
            u: t.v_t.transpose(),
            sigma: t.sigma,
            v_t: t.u.transpose(),
        }
    }

    /// `M = QR`, then the SVD of the square factor `R`.
    fn via_qr(m: &DMatrix<f64>) -> Self {
        if m.nrows() < m.ncols() {
            let t = Self::via_qr(&m.transpose());
            return Svd {
                u: t.v_t.transpose(),
                sigma: t.sigma,
                v_t: t.u.transpose(),
            };
        }
        let qr = m.clone().qr();
        let inner = Self::direct(&qr.r());
        Svd {
            u: qr.q() * inner.u,
            sigma: inner.sigma,
            v_t: inner.v_t,
        }
    }

    fn reconstruction_error(&self, m: &DMatrix<f64>) -> f64 {
        let mut scaled = self.u.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            scaled.column_mut(j).scale_mut(*s);
        }
        let error = (scaled * &self.v_t - m).norm();
        if error.is_finite() {
            error
        } else {
            f64::INFINITY
        }
    }

    fn cutoff(&self) -> f64 {
        RANK_EPS * self.sigma.iter().copied().fold(0.0, f64::max)
    }

    fn significant(&self) -> impl Iterator<Item = usize> + '_ {
        let cutoff = self.cutoff();
        self.sigma
            .iter()
            .enumerate()
            .filter(move |(_, &s)| s > cutoff && s > 0.0)
            .map(|(i, _)| i)
    }
}

pub(super) fn rank(m: &Mat<f64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    Svd::of(&to_dmatrix(m)).significant().count()
}

pub(super) fn kernel(m: &Mat<f64>) -> Mat<f64> {
    let n = m.cols();
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    if m.rows() == 0 {
        return Mat::identity(n);
    }
    // Pad to at least n rows so the SVD returns a full n×n right factor.
    let mut d = DMatrix::zeros(m.rows().max(n), n);
    d.view_mut((0, 0), (m.rows(), n)).copy_from(&to_dmatrix(m));
    let svd = Svd::of(&d);
    let keep: Vec<usize> = svd.significant().collect();
    let null: Vec<Vec<f64>> = (0..svd.sigma.len())
        .filter(|i| !keep.contains(i))
        .map(|i| svd.v_t.row(i).iter().copied().collect())
        .collect();
    Mat::from_columns(n, &null)
}

pub(super) fn column_space(m: &Mat<f64>) -> Mat<f64> {
    if m.is_empty() {
        return Mat::zeros(m.rows(), 0);
    }
    let svd = Svd::of(&to_dmatrix(m));
    let keep: Vec<usize> = svd.significant().collect();
    let cols: Vec<Vec<f64>> = keep
        .iter()
        .map(|&i| svd.u.column(i).iter().copied().collect())
        .collect();
    Mat::from_columns(m.rows(), &cols)
}

/// Minimum-norm solution through the pseudo-inverse.
pub(super) fn solve(m: &Mat<f64>, rhs: &Mat<f64>) -> Result<Mat<f64>, LinalgError> {
    if m.rows() != rhs.rows() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.rows(),
            found: rhs.rows(),
        });
    }
    if m.is_empty() {
        let residual = rhs.frobenius_norm();
        if residual > 0.0 {
            return Err(LinalgError::NotInColumnSpace { residual });
        }
        return Ok(Mat::zeros(m.cols(), rhs.cols()));
    }
    let a = to_dmatrix(m);
    let b = to_dmatrix(rhs);
    let svd = Svd::of(&a);
    let mut x = DMatrix::zeros(m.cols(), rhs.cols());
    for i in svd.significant() {
        let coeff = svd.u.column(i).transpose() * &b / svd.sigma[i];
        x += svd.v_t.row(i).transpose() * coeff;
    }
    let residual = (&a * &x - &b).norm();
    let scale = a.norm() * x.norm() + b.norm();
    if residual > RESIDUAL_REL * scale.max(1.0) {
        return Err(LinalgError::NotInColumnSpace { residual });
    }
    Ok(from_dmatrix(&x))
}

/// Sine of the largest principal angle between col(inner) and col(outer),
/// after both are reduced to orthonormal bases.
pub(super) fn contains(outer: &Mat<f64>, inner: &Mat<f64>) -> SubspaceCheck {
    if outer.rows() != inner.rows() {
        return SubspaceCheck {
            holds: false,
            residual: f64::INFINITY,
        };
    }
    let qi = column_space(inner);
    if qi.cols() == 0 {
        return SubspaceCheck {
            holds: true,
            residual: 0.0,
        };
    }
    let qo = to_dmatrix(&column_space(outer));
    let qi = to_dmatrix(&qi);
    let residual_mat = &qi - &qo * (qo.transpose() * &qi);
    let residual = if residual_mat.is_empty() {
        0.0
    } else {
        residual_mat
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .fold(0.0, f64::max)
    };
    SubspaceCheck {
        holds: residual <= ANGLE_EPS,
        residual,
    }
}
