use super::{LinalgError, Mat, Scalar};

/// A linearly independent set of vectors spanning a subspace of `S^ambient_dim`,
/// stored as the columns of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis<S> {
    basis: Mat<S>,
}

impl<S: Scalar> SubspaceBasis<S> {
    /// Wraps the columns of `basis`, which the caller guarantees are independent.
    pub fn from_independent_columns(basis: Mat<S>) -> Self {
        debug_assert_eq!(S::rank(&basis), basis.cols(), "basis columns are dependent");
        Self { basis }
    }

    /// Reduces an arbitrary spanning set to a basis.
    pub fn span_of(ambient_dim: usize, vectors: &[Vec<S>]) -> Self {
        let m = Mat::from_columns(ambient_dim, vectors);
        Self {
            basis: S::column_space(&m),
        }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            basis: Mat::zeros(ambient_dim, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn matrix(&self) -> &Mat<S> {
        &self.basis
    }

    pub fn vector(&self, i: usize) -> Vec<S> {
        self.basis.column(i)
    }

    pub fn vectors(&self) -> impl Iterator<Item = Vec<S>> + '_ {
        self.basis.columns()
    }

    pub fn contains(&self, other: &Self) -> bool {
        S::contains(&self.basis, &other.basis).holds
    }

    pub fn same_as(&self, other: &Self) -> bool {
        S::same_subspace(&self.basis, &other.basis).holds
    }

    /// Coordinates of each column of `vectors` in this basis.
    pub fn coordinates(&self, vectors: &Mat<S>) -> Result<Mat<S>, LinalgError> {
        S::solve(&self.basis, vectors)
    }

    /// Coordinates of the orthogonal projection of each column of `vectors`
    /// onto this subspace.
    pub fn projected_coordinates(&self, vectors: &Mat<S>) -> Result<Mat<S>, LinalgError> {
        let bt = self.basis.transpose();
        let gram = bt.matmul(&self.basis)?;
        S::solve(&gram, &bt.matmul(vectors)?)
    }
}

pub fn rank<S: Scalar>(m: &Mat<S>) -> usize {
    S::rank(m)
}

pub fn kernel_basis<S: Scalar>(m: &Mat<S>) -> SubspaceBasis<S> {
    SubspaceBasis {
        basis: S::kernel(m),
    }
}

/// Orthogonal complement of the column space (standard dot product).
pub fn image_complement_basis<S: Scalar>(m: &Mat<S>) -> SubspaceBasis<S> {
    kernel_basis(&m.transpose())
}

pub fn solve_in_image<S: Scalar>(m: &Mat<S>, b: &[S]) -> Result<Vec<S>, LinalgError> {
    Ok(S::solve(m, &Mat::column_vector(b))?.column(0))
}

pub fn intersect<S: Scalar>(
    a: &SubspaceBasis<S>,
    b: &SubspaceBasis<S>,
) -> Result<SubspaceBasis<S>, LinalgError> {
    check_ambient(a, b)?;
    // x = A·c = B·d  <=>  [A | -B]·(c, d) = 0
    let joined = a.basis.hstack(&b.basis.neg())?;
    let null = S::kernel(&joined);
    let coeffs = null.block(0, 0, a.dim(), null.cols());
    let vectors = a.basis.matmul(&coeffs)?;
    Ok(SubspaceBasis {
        basis: S::column_space(&vectors),
    })
}

pub fn project_onto<S: Scalar>(v: &[S], s: &SubspaceBasis<S>) -> Result<Vec<S>, LinalgError> {
    if v.len() != s.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: s.ambient_dim(),
            found: v.len(),
        });
    }
    let coords = s.projected_coordinates(&Mat::column_vector(v))?;
    Ok(s.basis.matmul(&coords)?.column(0))
}

/// Orthogonal complement of `sub` inside `ambient_sub`.
pub fn complement_within<S: Scalar>(
    sub: &SubspaceBasis<S>,
    ambient_sub: &SubspaceBasis<S>,
) -> Result<SubspaceBasis<S>, LinalgError> {
    check_ambient(sub, ambient_sub)?;
    let check = S::contains(&ambient_sub.basis, &sub.basis);
    if !check.holds {
        return Err(LinalgError::NotContained {
            residual: check.residual,
        });
    }
    // x = Q·c with subᵀ·Q·c = 0
    let constraint = sub.basis.transpose().matmul(&ambient_sub.basis)?;
    let coeffs = S::kernel(&constraint);
    Ok(SubspaceBasis {
        basis: ambient_sub.basis.matmul(&coeffs)?,
    })
}

fn check_ambient<S: Scalar>(a: &SubspaceBasis<S>, b: &SubspaceBasis<S>) -> Result<(), LinalgError> {
    if a.ambient_dim() != b.ambient_dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.ambient_dim(),
            found: b.ambient_dim(),
        });
    }
    Ok(())
}
