//! The three structural cosheaves over a framework and the maps between them.
//!
//! * `F`, the axial force cosheaf: one tension scalar per bar, a force vector
//!   per joint.
//! * `M`, the moment cosheaf: force-couples `(M, F)` on bars and joints; the
//!   stalk map carries a couple from the bar center to an endpoint.
//! * `N = M / φF`, the anchored cosheaf: moments and transverse shears only.
//!
//! Stalk coordinates are ordered `(M, Fx, Fy)` in the plane and
//! `(Myz, Mzx, Mxy, Fx, Fy, Fz)` in space.

use std::sync::Arc;

use thiserror::Error;

use crate::cosheaf::{quotient_cosheaf, Cosheaf, CosheafError, CosheafMap, Quotient};
use crate::framework::Framework;
use crate::linalg::{Mat, Mode, Scalar, SubspaceBasis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StructuralError {
    #[error("vector dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("exterior algebra is only implemented in dimensions 2 and 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("framework is not connected")]
    Disconnected,
    #[error(transparent)]
    Cosheaf(#[from] CosheafError),
}

/// A bivector in `⋀²ℝⁿ`.
#[derive(Clone, Debug, PartialEq)]
pub enum Wedge2<S> {
    /// Coefficient of `x∧y`.
    Planar(S),
    /// Coefficients of `y∧z, z∧x, x∧y`.
    Spatial([S; 3]),
}

impl<S: Scalar> Wedge2<S> {
    pub fn zero(dim: usize) -> Result<Self, StructuralError> {
        match dim {
            2 => Ok(Wedge2::Planar(S::zero())),
            3 => Ok(Wedge2::Spatial([S::zero(), S::zero(), S::zero()])),
            n => Err(StructuralError::UnsupportedDimension(n)),
        }
    }

    pub fn components(&self) -> Vec<S> {
        match self {
            Wedge2::Planar(m) => vec![m.clone()],
            Wedge2::Spatial(m) => m.to_vec(),
        }
    }

    fn from_components(c: &[S]) -> Result<Self, StructuralError> {
        match c {
            [m] => Ok(Wedge2::Planar(m.clone())),
            [a, b, c] => Ok(Wedge2::Spatial([a.clone(), b.clone(), c.clone()])),
            other => Err(StructuralError::UnsupportedDimension(other.len())),
        }
    }

    fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Wedge2::Planar(a), Wedge2::Planar(b)) => Wedge2::Planar(a.clone() + b.clone()),
            (Wedge2::Spatial(a), Wedge2::Spatial(b)) => Wedge2::Spatial([
                a[0].clone() + b[0].clone(),
                a[1].clone() + b[1].clone(),
                a[2].clone() + b[2].clone(),
            ]),
            _ => panic!("adding bivectors of different dimension"),
        }
    }
}

/// Exterior product `a ∧ b`. The moment of force `F` at lever `ℓ` is `F ∧ ℓ`.
pub fn wedge<S: Scalar>(a: &[S], b: &[S]) -> Result<Wedge2<S>, StructuralError> {
    if a.len() != b.len() {
        return Err(StructuralError::DimensionMismatch(a.len(), b.len()));
    }
    let cross = |i: usize, j: usize| a[i].clone() * b[j].clone() - a[j].clone() * b[i].clone();
    match a.len() {
        2 => Ok(Wedge2::Planar(cross(0, 1))),
        3 => Ok(Wedge2::Spatial([cross(1, 2), cross(2, 0), cross(0, 1)])),
        n => Err(StructuralError::UnsupportedDimension(n)),
    }
}

/// A moment together with a force, the stalk element of `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct ForceCouple<S> {
    pub moment: Wedge2<S>,
    pub force: Vec<S>,
}

impl<S: Scalar> ForceCouple<S> {
    pub fn from_coords(dim: usize, coords: &[S]) -> Result<Self, StructuralError> {
        let moment_dim = moment_dim(dim)?;
        if coords.len() != moment_dim + dim {
            return Err(StructuralError::DimensionMismatch(coords.len(), moment_dim + dim));
        }
        Ok(Self {
            moment: Wedge2::from_components(&coords[..moment_dim])?,
            force: coords[moment_dim..].to_vec(),
        })
    }

    pub fn to_coords(&self) -> Vec<S> {
        let mut c = self.moment.components();
        c.extend(self.force.iter().cloned());
        c
    }

    /// The same couple viewed from a point displaced by `lever`: `(M + F ∧ ℓ, F)`.
    pub fn transfer(&self, lever: &[S]) -> Result<Self, StructuralError> {
        Ok(Self {
            moment: self.moment.add(&wedge(&self.force, lever)?),
            force: self.force.clone(),
        })
    }
}

/// `dim ⋀²ℝⁿ`
pub fn moment_dim(dim: usize) -> Result<usize, StructuralError> {
    match dim {
        2 => Ok(1),
        3 => Ok(3),
        n => Err(StructuralError::UnsupportedDimension(n)),
    }
}

/// `dim ⋀²ℝⁿ ⊕ ℝⁿ`: 3 in the plane, 6 in space.
pub fn couple_dim(dim: usize) -> Result<usize, StructuralError> {
    Ok(moment_dim(dim)? + dim)
}

fn force_labels(dim: usize) -> Vec<String> {
    ["Fx", "Fy", "Fz"][..dim].iter().map(|s| s.to_string()).collect()
}

fn moment_labels(dim: usize) -> Vec<String> {
    let names: &[&str] = if dim == 2 { &["M"] } else { &["Myz", "Mzx", "Mxy"] };
    names.iter().map(|s| s.to_string()).collect()
}

/// Axial force cosheaf: both stalk maps of a bar are the column `p_head − p_tail`.
pub fn build_force_cosheaf<S: Scalar>(f: &Framework) -> Cosheaf<S> {
    let n = f.dim();
    let stalk_maps = (0..f.edge_count())
        .map(|e| {
            let column = Mat::column_vector(&f.geometry::<S>(e).direction);
            [column.clone(), column]
        })
        .collect();
    Cosheaf::new(
        f.vertex_count(),
        f.edges().to_vec(),
        vec![n; f.vertex_count()],
        vec![1; f.edge_count()],
        stalk_maps,
    )
    .and_then(|k| {
        k.with_labels(
            vec![force_labels(n); f.vertex_count()],
            vec![vec!["T".to_string()]; f.edge_count()],
        )
    })
    .expect("force cosheaf shapes are consistent")
}

/// Matrix of `(M, F) ↦ (M + F ∧ lever, F)` in stalk coordinates.
fn transfer_matrix<S: Scalar>(dim: usize, lever: &[S]) -> Result<Mat<S>, StructuralError> {
    let d = couple_dim(dim)?;
    let columns = (0..d)
        .map(|k| {
            let mut unit = vec![S::zero(); d];
            unit[k] = S::one();
            Ok(ForceCouple::from_coords(dim, &unit)?.transfer(lever)?.to_coords())
        })
        .collect::<Result<Vec<_>, StructuralError>>()?;
    Ok(Mat::from_columns(d, &columns))
}

/// Moment cosheaf: the stalk map at endpoint `v` transfers a couple at the bar
/// center to `p_v`, using the lever `p_v − center`.
pub fn build_moment_cosheaf<S: Scalar>(f: &Framework) -> Result<Cosheaf<S>, StructuralError> {
    let n = f.dim();
    let d = couple_dim(n)?;
    let stalk_maps = f
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &edge)| {
            let geometry = f.geometry::<S>(e);
            Ok([
                transfer_matrix(n, &geometry.lever_to(edge, edge.tail))?,
                transfer_matrix(n, &geometry.lever_to(edge, edge.head))?,
            ])
        })
        .collect::<Result<Vec<_>, StructuralError>>()?;
    let mut labels = moment_labels(n);
    labels.extend(force_labels(n));
    Ok(Cosheaf::new(
        f.vertex_count(),
        f.edges().to_vec(),
        vec![d; f.vertex_count()],
        vec![d; f.edge_count()],
        stalk_maps,
    )?
    .with_labels(vec![labels.clone(); f.vertex_count()], vec![labels; f.edge_count()])?)
}

/// `φ: F → M`. A bar tension `t` becomes the couple `(0, t · direction)`; a
/// joint force `F` becomes `(0, F)`.
pub fn build_phi<S: Scalar>(f: &Framework) -> Result<CosheafMap<S>, StructuralError> {
    let n = f.dim();
    let m = moment_dim(n)?;
    let force = Arc::new(build_force_cosheaf::<S>(f));
    let moment = Arc::new(build_moment_cosheaf::<S>(f)?);
    let embed = Mat::from_fn(m + n, n, |i, j| if i == m + j { S::one() } else { S::zero() });
    let vertex_maps = vec![embed; f.vertex_count()];
    let edge_maps = (0..f.edge_count())
        .map(|e| {
            let dir = f.geometry::<S>(e).direction;
            Mat::from_fn(m + n, 1, |i, _| if i >= m { dir[i - m].clone() } else { S::zero() })
        })
        .collect();
    Ok(CosheafMap::new(force, moment, vertex_maps, edge_maps)?)
}

/// The anchored cosheaf `N = M / φF` with its projection `π: M → N`.
pub fn build_anchored_cosheaf<S: Scalar>(f: &Framework) -> Result<Quotient<S>, StructuralError> {
    Ok(build_structural_system(f)?.anchored)
}

/// `F`, `M`, `N` together with `φ` and `π`.
#[derive(Clone, Debug)]
pub struct StructuralSystem<S> {
    pub phi: CosheafMap<S>,
    pub anchored: Quotient<S>,
}

impl<S: Scalar> StructuralSystem<S> {
    pub fn force(&self) -> &Arc<Cosheaf<S>> {
        self.phi.source()
    }

    pub fn moment(&self) -> &Arc<Cosheaf<S>> {
        self.phi.target()
    }

    pub fn anchored_cosheaf(&self) -> &Arc<Cosheaf<S>> {
        &self.anchored.cosheaf
    }

    pub fn pi(&self) -> &CosheafMap<S> {
        &self.anchored.projection
    }
}

pub fn build_structural_system<S: Scalar>(
    f: &Framework,
) -> Result<StructuralSystem<S>, StructuralError> {
    let phi = build_phi::<S>(f)?;
    let mut anchored = quotient_cosheaf(&phi)?;
    if S::MODE == Mode::Exact {
        // Exact complements come out as pure moments followed by shears.
        let n = f.dim();
        let mut edge_labels = moment_labels(n);
        edge_labels.extend((1..n).map(|k| format!("V{k}")));
        let relabeled = (*anchored.cosheaf)
            .clone()
            .with_labels(
                vec![moment_labels(n); f.vertex_count()],
                vec![edge_labels; f.edge_count()],
            )?;
        let relabeled = Arc::new(relabeled);
        anchored.projection = CosheafMap::new(
            phi.target().clone(),
            relabeled.clone(),
            (0..f.vertex_count())
                .map(|v| anchored.projection.vertex_map(v).clone())
                .collect(),
            (0..f.edge_count())
                .map(|e| anchored.projection.edge_map(e).clone())
                .collect(),
        )?;
        anchored.cosheaf = relabeled;
    }
    Ok(StructuralSystem { phi, anchored })
}

/// Infinitesimal rigid motions as vertex velocity fields in `C₀F`: the `n`
/// translations and the rotations `v ↦ ω × p_v` about the coordinate axes,
/// reduced to a basis. Spans dimension 3 (plane) or 6 (space, non-collinear).
pub fn rigid_body_space<S: Scalar>(f: &Framework) -> Result<SubspaceBasis<S>, StructuralError> {
    if !f.is_connected() {
        return Err(StructuralError::Disconnected);
    }
    let n = f.dim();
    let nv = f.vertex_count();
    let field = |velocity: &dyn Fn(&[S]) -> Vec<S>| -> Vec<S> {
        (0..nv)
            .flat_map(|v| velocity(&f.position_as::<S>(v)))
            .collect()
    };
    let mut generators: Vec<Vec<S>> = (0..n)
        .map(|k| {
            field(&|_| {
                (0..n)
                    .map(|i| if i == k { S::one() } else { S::zero() })
                    .collect()
            })
        })
        .collect();
    match n {
        2 => generators.push(field(&|p| vec![-p[1].clone(), p[0].clone()])),
        3 => {
            generators.push(field(&|p| vec![S::zero(), -p[2].clone(), p[1].clone()]));
            generators.push(field(&|p| vec![p[2].clone(), S::zero(), -p[0].clone()]));
            generators.push(field(&|p| vec![-p[1].clone(), p[0].clone(), S::zero()]));
        }
        other => return Err(StructuralError::UnsupportedDimension(other)),
    }
    Ok(SubspaceBasis::span_of(n * nv, &generators))
}
