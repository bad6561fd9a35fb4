//! Cellular cosheaves over the graph of a framework.
//!
//! Degree-0 chains live on vertices, degree-1 chains on edges. Flat chain
//! vectors concatenate the per-cell components in vertex (resp. edge) list
//! order, which is also the row (resp. column) order of the boundary matrix.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::framework::{Edge, Framework};
use crate::linalg::{image_complement_basis, kernel_basis, LinalgError, Mat, Scalar, SubspaceBasis};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CosheafError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("cosheaves live over different graphs")]
    BaseMismatch,
    #[error("map is not injective on the stalk at {0}")]
    NotInjective(Cell),
    #[error("chosen stalk basis at {0} is not a complement of the image")]
    NotComplement(Cell),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Vertex(v) => write!(f, "vertex {v}"),
            Cell::Edge(e) => write!(f, "edge {e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Degree {
    /// Vertex chains, `C₀`.
    Zero,
    /// Edge chains, `C₁`.
    One,
}

/// Stalk dimensions and stalk maps `K_{e▷v}` for every incidence.
#[derive(Clone, Debug, PartialEq)]
pub struct Cosheaf<S> {
    vertex_count: usize,
    edges: Vec<Edge>,
    vertex_dims: Vec<usize>,
    edge_dims: Vec<usize>,
    /// `[tail map, head map]` for each edge, each of shape `|K_v| × |K_e|`.
    stalk_maps: Vec<[Mat<S>; 2]>,
    vertex_labels: Vec<Vec<String>>,
    edge_labels: Vec<Vec<String>>,
}

impl<S: Scalar> Cosheaf<S> {
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        vertex_dims: Vec<usize>,
        edge_dims: Vec<usize>,
        stalk_maps: Vec<[Mat<S>; 2]>,
    ) -> Result<Self, CosheafError> {
        if vertex_dims.len() != vertex_count {
            return Err(CosheafError::ShapeMismatch(format!(
                "{} vertex stalks for {vertex_count} vertices",
                vertex_dims.len()
            )));
        }
        if edge_dims.len() != edges.len() || stalk_maps.len() != edges.len() {
            return Err(CosheafError::ShapeMismatch(format!(
                "{} edges but {} edge stalks and {} stalk-map pairs",
                edges.len(),
                edge_dims.len(),
                stalk_maps.len()
            )));
        }
        for (i, (edge, maps)) in edges.iter().zip(&stalk_maps).enumerate() {
            for (v, m) in edge.endpoints().into_iter().zip(maps) {
                if v >= vertex_count {
                    return Err(CosheafError::ShapeMismatch(format!("edge {i} references vertex {v}")));
                }
                if m.shape() != (vertex_dims[v], edge_dims[i]) {
                    return Err(CosheafError::ShapeMismatch(format!(
                        "stalk map edge {i} -> vertex {v} is {:?}, expected {:?}",
                        m.shape(),
                        (vertex_dims[v], edge_dims[i])
                    )));
                }
            }
        }
        let label = |d: usize, prefix: &str| (0..d).map(|k| format!("{prefix}{k}")).collect();
        Ok(Self {
            vertex_labels: vertex_dims.iter().map(|&d| label(d, "x")).collect(),
            edge_labels: edge_dims.iter().map(|&d| label(d, "w")).collect(),
            vertex_count,
            edges,
            vertex_dims,
            edge_dims,
            stalk_maps,
        })
    }

    /// One-dimensional stalks with identity maps; its boundary is the signed
    /// incidence matrix of the graph.
    pub fn constant(f: &Framework) -> Self {
        let id = Mat::identity(1);
        Self::new(
            f.vertex_count(),
            f.edges().to_vec(),
            vec![1; f.vertex_count()],
            vec![1; f.edge_count()],
            vec![[id.clone(), id]; f.edge_count()],
        )
        .expect("constant cosheaf shapes are consistent")
    }

    pub fn with_labels(
        mut self,
        vertex_labels: Vec<Vec<String>>,
        edge_labels: Vec<Vec<String>>,
    ) -> Result<Self, CosheafError> {
        let fits = |labels: &[Vec<String>], dims: &[usize]| {
            labels.len() == dims.len() && labels.iter().zip(dims).all(|(l, &d)| l.len() == d)
        };
        if !fits(&vertex_labels, &self.vertex_dims) || !fits(&edge_labels, &self.edge_dims) {
            return Err(CosheafError::ShapeMismatch("label counts do not match stalk dims".into()));
        }
        self.vertex_labels = vertex_labels;
        self.edge_labels = edge_labels;
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_dims(&self) -> &[usize] {
        &self.vertex_dims
    }

    pub fn edge_dims(&self) -> &[usize] {
        &self.edge_dims
    }

    pub fn vertex_labels(&self, v: usize) -> &[String] {
        &self.vertex_labels[v]
    }

    pub fn edge_labels(&self, e: usize) -> &[String] {
        &self.edge_labels[e]
    }

    /// `K_{e▷v}`. Panics if `v` is not an endpoint of `e`.
    pub fn stalk_map(&self, e: usize, v: usize) -> &Mat<S> {
        let edge = self.edges[e];
        if v == edge.tail {
            &self.stalk_maps[e][0]
        } else if v == edge.head {
            &self.stalk_maps[e][1]
        } else {
            panic!("vertex {v} is not incident to edge {e}")
        }
    }

    pub fn same_base<T>(&self, other: &Cosheaf<T>) -> bool {
        self.vertex_count == other.vertex_count && self.edges == other.edges
    }

    fn offsets(dims: &[usize]) -> Vec<usize> {
        let mut acc = 0;
        dims.iter()
            .map(|&d| {
                let start = acc;
                acc += d;
                start
            })
            .collect()
    }

    pub fn vertex_offsets(&self) -> Vec<usize> {
        Self::offsets(&self.vertex_dims)
    }

    pub fn edge_offsets(&self) -> Vec<usize> {
        Self::offsets(&self.edge_dims)
    }

    pub fn chain_dim(&self, degree: Degree) -> usize {
        self.dims(degree).iter().sum()
    }

    pub fn dims(&self, degree: Degree) -> &[usize] {
        match degree {
            Degree::Zero => &self.vertex_dims,
            Degree::One => &self.edge_dims,
        }
    }

    /// The boundary `∂: C₁ → C₀`; the block at `(v, e)` is `+K_{e▷v}` at the
    /// head of `e` and `−K_{e▷v}` at its tail.
    pub fn assemble_boundary(&self) -> Mat<S> {
        let rows = self.vertex_offsets();
        let cols = self.edge_offsets();
        let mut d = Mat::zeros(self.chain_dim(Degree::Zero), self.chain_dim(Degree::One));
        for (e, edge) in self.edges.iter().enumerate() {
            let [tail_map, head_map] = &self.stalk_maps[e];
            d.set_block(rows[edge.tail], cols[e], tail_map, true);
            d.set_block(rows[edge.head], cols[e], head_map, false);
        }
        d
    }

    pub fn homology(&self) -> HomologyResult<S> {
        let boundary = self.assemble_boundary();
        HomologyResult {
            h1: kernel_basis(&boundary),
            h0: image_complement_basis(&boundary),
            boundary,
        }
    }

    pub fn pack(&self, chain: &Chain<S>) -> Result<Vec<S>, CosheafError> {
        let dims = self.dims(chain.degree);
        if chain.components.len() != dims.len()
            || chain.components.iter().zip(dims).any(|(c, &d)| c.len() != d)
        {
            return Err(CosheafError::ShapeMismatch("chain components do not match stalks".into()));
        }
        Ok(chain.components.concat())
    }

    pub fn unpack(&self, degree: Degree, flat: &[S]) -> Result<Chain<S>, CosheafError> {
        let dims = self.dims(degree);
        if flat.len() != dims.iter().sum::<usize>() {
            return Err(CosheafError::ShapeMismatch(format!(
                "flat chain has length {}, expected {}",
                flat.len(),
                dims.iter().sum::<usize>()
            )));
        }
        let mut rest = flat;
        let components = dims
            .iter()
            .map(|&d| {
                let (head, tail) = rest.split_at(d);
                rest = tail;
                head.to_vec()
            })
            .collect();
        Ok(Chain { degree, components })
    }

    /// Flat chain with a single 1 at coordinate `k` of `cell`'s stalk.
    pub fn unit_chain(&self, cell: Cell, k: usize) -> Vec<S> {
        let (degree, idx) = match cell {
            Cell::Vertex(v) => (Degree::Zero, v),
            Cell::Edge(e) => (Degree::One, e),
        };
        let offsets = Self::offsets(self.dims(degree));
        assert!(k < self.dims(degree)[idx], "coordinate out of range");
        let mut v = vec![S::zero(); self.chain_dim(degree)];
        v[offsets[idx] + k] = S::one();
        v
    }
}

/// Per-cell components of a chain in `C₀` or `C₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chain<S> {
    pub degree: Degree,
    pub components: Vec<Vec<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HomologyDims {
    pub h1: usize,
    pub h0: usize,
}

/// `H₁ = ker ∂` and `H₀ ≅ (im ∂)^⊥`, both as explicit bases.
#[derive(Clone, Debug)]
pub struct HomologyResult<S> {
    pub h1: SubspaceBasis<S>,
    pub h0: SubspaceBasis<S>,
    pub boundary: Mat<S>,
}

impl<S: Scalar> HomologyResult<S> {
    pub fn dims(&self) -> HomologyDims {
        HomologyDims {
            h1: self.h1.dim(),
            h0: self.h0.dim(),
        }
    }

    pub fn basis(&self, degree: Degree) -> &SubspaceBasis<S> {
        match degree {
            Degree::Zero => &self.h0,
            Degree::One => &self.h1,
        }
    }
}

/// Stalk-wise linear maps between two cosheaves over the same graph.
#[derive(Clone, Debug)]
pub struct CosheafMap<S> {
    source: Arc<Cosheaf<S>>,
    target: Arc<Cosheaf<S>>,
    vertex_maps: Vec<Mat<S>>,
    edge_maps: Vec<Mat<S>>,
}

/// A commuting-square failure at one incidence.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceFailure {
    pub edge: usize,
    pub vertex: usize,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapVerdict {
    pub failures: Vec<IncidenceFailure>,
}

impl MapVerdict {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl<S: Scalar> CosheafMap<S> {
    /// Shapes are validated; the commuting condition is not (see [`check_cosheaf_map`]).
    pub fn new(
        source: Arc<Cosheaf<S>>,
        target: Arc<Cosheaf<S>>,
        vertex_maps: Vec<Mat<S>>,
        edge_maps: Vec<Mat<S>>,
    ) -> Result<Self, CosheafError> {
        if !source.same_base(&target) {
            return Err(CosheafError::BaseMismatch);
        }
        let check = |maps: &[Mat<S>], src: &[usize], tgt: &[usize], kind: &str| {
            if maps.len() != src.len() {
                return Err(CosheafError::ShapeMismatch(format!(
                    "{} {kind} maps for {} cells",
                    maps.len(),
                    src.len()
                )));
            }
            for (i, m) in maps.iter().enumerate() {
                if m.shape() != (tgt[i], src[i]) {
                    return Err(CosheafError::ShapeMismatch(format!(
                        "{kind} map {i} is {:?}, expected {:?}",
                        m.shape(),
                        (tgt[i], src[i])
                    )));
                }
            }
            Ok(())
        };
        check(&vertex_maps, source.vertex_dims(), target.vertex_dims(), "vertex")?;
        check(&edge_maps, source.edge_dims(), target.edge_dims(), "edge")?;
        Ok(Self {
            source,
            target,
            vertex_maps,
            edge_maps,
        })
    }

    pub fn identity(k: Arc<Cosheaf<S>>) -> Self {
        let vertex_maps = k.vertex_dims().iter().map(|&d| Mat::identity(d)).collect();
        let edge_maps = k.edge_dims().iter().map(|&d| Mat::identity(d)).collect();
        Self::new(k.clone(), k, vertex_maps, edge_maps).expect("identity shapes match")
    }

    pub fn source(&self) -> &Arc<Cosheaf<S>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Cosheaf<S>> {
        &self.target
    }

    pub fn vertex_map(&self, v: usize) -> &Mat<S> {
        &self.vertex_maps[v]
    }

    pub fn edge_map(&self, e: usize) -> &Mat<S> {
        &self.edge_maps[e]
    }

    pub fn cell_map(&self, cell: Cell) -> &Mat<S> {
        match cell {
            Cell::Vertex(v) => &self.vertex_maps[v],
            Cell::Edge(e) => &self.edge_maps[e],
        }
    }

    /// Replaces one vertex map (shape must match).
    pub fn with_vertex_map(mut self, v: usize, m: Mat<S>) -> Result<Self, CosheafError> {
        if m.shape() != self.vertex_maps[v].shape() {
            return Err(CosheafError::ShapeMismatch(format!("vertex map {v}")));
        }
        self.vertex_maps[v] = m;
        Ok(self)
    }

    /// The chain-level map `C_k(source) → C_k(target)` as a block-diagonal matrix.
    pub fn chain_matrix(&self, degree: Degree) -> Mat<S> {
        let maps = match degree {
            Degree::Zero => &self.vertex_maps,
            Degree::One => &self.edge_maps,
        };
        let mut out = Mat::zeros(self.target.chain_dim(degree), self.source.chain_dim(degree));
        let (mut r, mut c) = (0, 0);
        for m in maps {
            out.set_block(r, c, m, false);
            r += m.rows();
            c += m.cols();
        }
        out
    }
}

/// Checks `L_{e▷v} φ_e = φ_v K_{e▷v}` at every incidence.
pub fn check_cosheaf_map<S: Scalar>(map: &CosheafMap<S>) -> MapVerdict {
    let mut failures = Vec::new();
    for (e, edge) in map.source.edges().iter().enumerate() {
        for v in edge.endpoints() {
            let lhs = map
                .target
                .stalk_map(e, v)
                .matmul(&map.edge_maps[e])
                .expect("shapes validated");
            let rhs = map.vertex_maps[v]
                .matmul(map.source.stalk_map(e, v))
                .expect("shapes validated");
            let diff = lhs.sub(&rhs).expect("same shape");
            let scale = lhs.frobenius_norm().max(rhs.frobenius_norm());
            if !S::negligible(&diff, scale) {
                failures.push(IncidenceFailure {
                    edge: e,
                    vertex: v,
                    residual: diff.frobenius_norm(),
                });
            }
        }
    }
    MapVerdict { failures }
}

/// A quotient cosheaf `Q = target / im φ` realized on chosen complements.
#[derive(Clone, Debug)]
pub struct Quotient<S> {
    pub cosheaf: Arc<Cosheaf<S>>,
    /// `π: target → Q`
    pub projection: CosheafMap<S>,
    /// Per-vertex complement bases; `π_v · section_v = I`.
    pub vertex_sections: Vec<Mat<S>>,
    /// Per-edge complement bases; `π_e · section_e = I`.
    pub edge_sections: Vec<Mat<S>>,
}

/// Quotient by an injective cosheaf map, with each quotient stalk realized as
/// the orthogonal complement of `im φ` in the target stalk.
pub fn quotient_cosheaf<S: Scalar>(map: &CosheafMap<S>) -> Result<Quotient<S>, CosheafError> {
    let complement = |m: &Mat<S>| S::kernel(&m.transpose());
    let vertex = map.vertex_maps.iter().map(complement).collect();
    let edge = map.edge_maps.iter().map(complement).collect();
    quotient_with_complements(map, vertex, edge)
}

/// Quotient using caller-chosen complements of `im φ` in each target stalk.
///
/// The projection at each cell is read off the inverse of `[φ_c | C_c]`:
/// it annihilates `im φ_c` and is a left inverse of `C_c`.
pub fn quotient_with_complements<S: Scalar>(
    map: &CosheafMap<S>,
    vertex_complements: Vec<Mat<S>>,
    edge_complements: Vec<Mat<S>>,
) -> Result<Quotient<S>, CosheafError> {
    let target = &map.target;
    let cells = (0..target.vertex_count())
        .map(Cell::Vertex)
        .chain((0..target.edges().len()).map(Cell::Edge));
    let complements = vertex_complements.iter().chain(&edge_complements);
    let mut projections = Vec::new();
    for (cell, c) in cells.zip(complements) {
        let phi = map.cell_map(cell);
        if S::rank(phi) != phi.cols() {
            return Err(CosheafError::NotInjective(cell));
        }
        if c.rows() != phi.rows() || phi.cols() + c.cols() != phi.rows() {
            return Err(CosheafError::NotComplement(cell));
        }
        let joined = phi.hstack(c)?;
        let inverse = S::solve(&joined, &Mat::identity(joined.rows()))
            .map_err(|_| CosheafError::NotComplement(cell))?;
        projections.push(inverse.block(phi.cols(), 0, c.cols(), joined.rows()));
    }
    let edge_projections = projections.split_off(target.vertex_count());
    let vertex_projections = projections;

    let stalk_maps = target
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            edge.endpoints().map(|v| {
                vertex_projections[v]
                    .matmul(target.stalk_map(e, v))
                    .and_then(|m| m.matmul(&edge_complements[e]))
                    .expect("stalk shapes agree")
            })
        })
        .collect();
    let q = Cosheaf::new(
        target.vertex_count(),
        target.edges().to_vec(),
        vertex_complements.iter().map(Mat::cols).collect(),
        edge_complements.iter().map(Mat::cols).collect(),
        stalk_maps,
    )?;
    let q = Arc::new(q);
    let projection = CosheafMap::new(target.clone(), q.clone(), vertex_projections, edge_projections)?;
    Ok(Quotient {
        cosheaf: q,
        projection,
        vertex_sections: vertex_complements,
        edge_sections: edge_complements,
    })
}
