//! Geometric frameworks `(G, p)`: a graph with oriented edges and a straight-line
//! realization in the plane or in space.

mod generate;
mod io;

use std::collections::HashMap;

use num::Zero;
use thiserror::Error;

use crate::linalg::{Mode, Rational, Scalar};
use crate::tolerance::GEOM_EPS_REL;

pub use generate::{make_desargues, make_named, perturb, NAMED_FRAMEWORKS};
pub use io::{load_framework, parse_framework};

#[derive(Debug, Error)]
pub enum FrameworkError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported ambient dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("vertex {vertex}: expected {expected} coordinates, found {found}")]
    CoordinateCount {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex ids: {0}")]
    VertexIds(String),
    #[error("edge {edge}: vertex {vertex} does not exist")]
    DanglingVertex { edge: usize, vertex: usize },
    #[error("edge {edge}: self-loop at vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge}: zero-length edge between vertices {tail} and {head}")]
    ZeroLengthEdge { edge: usize, tail: usize, head: usize },
    #[error("edge {edge}: duplicate of edge {first}")]
    DuplicateEdge { edge: usize, first: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown framework name `{0}`")]
    UnknownName(String),
}

/// Oriented edge; the boundary sign is `+` at `head` and `-` at `tail`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
}

impl Edge {
    pub fn new(tail: usize, head: usize) -> Self {
        Self { tail, head }
    }

    pub fn endpoints(self) -> [usize; 2] {
        [self.tail, self.head]
    }

    pub fn flipped(self) -> Self {
        Self::new(self.head, self.tail)
    }
}

/// Per-edge geometric quantities in the computation's scalar type.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeGeometry<S> {
    /// `p_head − p_tail`
    pub direction: Vec<S>,
    /// `(p_head − p_tail) / 2`, the lever from the edge center to the head.
    pub half_lever: Vec<S>,
    pub length_squared: S,
}

impl<S: Scalar> EdgeGeometry<S> {
    pub fn length(&self) -> f64 {
        self.length_squared.to_f64().sqrt()
    }

    /// Lever arm from the edge center to endpoint `v` of `edge`.
    pub fn lever_to(&self, edge: Edge, v: usize) -> Vec<S> {
        if v == edge.head {
            self.half_lever.clone()
        } else {
            self.half_lever.iter().map(|x| -x.clone()).collect()
        }
    }
}

/// Graph plus vertex positions. Immutable once validated.
#[derive(Clone, Debug, PartialEq)]
pub struct Framework {
    dim: usize,
    positions: Vec<Vec<Rational>>,
    edges: Vec<Edge>,
}

impl Framework {
    /// Validates and builds a framework. Vertex `i` sits at `positions[i]`.
    pub fn new(
        dim: usize,
        positions: Vec<Vec<Rational>>,
        edges: Vec<Edge>,
        mode: Mode,
    ) -> Result<Self, FrameworkError> {
        if !(2..=3).contains(&dim) {
            return Err(FrameworkError::UnsupportedDimension(dim));
        }
        for (vertex, p) in positions.iter().enumerate() {
            if p.len() != dim {
                return Err(FrameworkError::CoordinateCount {
                    vertex,
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let f = Self {
            dim,
            positions,
            edges,
        };
        f.validate(mode)?;
        Ok(f)
    }

    fn validate(&self, mode: Mode) -> Result<(), FrameworkError> {
        let n = self.positions.len();
        let diag = self.bounding_box_diagonal();
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            for v in e.endpoints() {
                if v >= n {
                    return Err(FrameworkError::DanglingVertex { edge: i, vertex: v });
                }
            }
            if e.tail == e.head {
                return Err(FrameworkError::SelfLoop {
                    edge: i,
                    vertex: e.tail,
                });
            }
            let degenerate = match mode {
                Mode::Exact => self.positions[e.tail] == self.positions[e.head],
                Mode::Float => {
                    let len = self.geometry::<f64>(i).length();
                    len <= GEOM_EPS_REL * diag
                }
            };
            if degenerate {
                return Err(FrameworkError::ZeroLengthEdge {
                    edge: i,
                    tail: e.tail,
                    head: e.head,
                });
            }
            let key = (e.tail.min(e.head), e.tail.max(e.head));
            if let Some(&first) = seen.get(&key) {
                return Err(FrameworkError::DuplicateEdge { edge: i, first });
            }
            seen.insert(key, i);
        }
        Ok(())
    }

    fn bounding_box_diagonal(&self) -> f64 {
        (0..self.dim)
            .map(|k| {
                let coords = self.positions.iter().map(|p| p[k].to_f64());
                let lo = coords.clone().fold(f64::INFINITY, f64::min);
                let hi = coords.fold(f64::NEG_INFINITY, f64::max);
                if hi >= lo {
                    (hi - lo).powi(2)
                } else {
                    0.0
                }
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn positions(&self) -> &[Vec<Rational>] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &[Rational] {
        &self.positions[v]
    }

    pub fn position_as<S: Scalar>(&self, v: usize) -> Vec<S> {
        self.positions[v].iter().map(S::from_rational).collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Edge {
        self.edges[e]
    }

    pub fn geometry<S: Scalar>(&self, e: usize) -> EdgeGeometry<S> {
        let Edge { tail, head } = self.edges[e];
        let delta: Vec<Rational> = self.positions[head]
            .iter()
            .zip(&self.positions[tail])
            .map(|(h, t)| h - t)
            .collect();
        let two = Rational::from_integer(2.into());
        let length_squared = delta.iter().fold(<Rational as Zero>::zero(), |acc, d| acc + d * d);
        EdgeGeometry {
            direction: delta.iter().map(S::from_rational).collect(),
            half_lever: delta.iter().map(|d| S::from_rational(&(d / &two))).collect(),
            length_squared: S::from_rational(&length_squared),
        }
    }

    /// Connected with at least one vertex.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return false;
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &self.edges {
            adjacency[e.tail].push(e.head);
            adjacency[e.head].push(e.tail);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Applies `p ↦ R·p + t` to every vertex.
    pub fn transformed(
        &self,
        rotation: &[Vec<Rational>],
        translation: &[Rational],
        mode: Mode,
    ) -> Result<Self, FrameworkError> {
        if rotation.len() != self.dim
            || rotation.iter().any(|r| r.len() != self.dim)
            || translation.len() != self.dim
        {
            return Err(FrameworkError::InvalidParameter(format!(
                "transform must be {0}x{0} plus a {0}-vector",
                self.dim
            )));
        }
        let positions = self
            .positions
            .iter()
            .map(|p| {
                rotation
                    .iter()
                    .zip(translation)
                    .map(|(row, t)| row.iter().zip(p).fold(t.clone(), |acc, (r, x)| acc + r * x))
                    .collect()
            })
            .collect();
        Self::new(self.dim, positions, self.edges.clone(), mode)
    }

    pub fn translated(&self, offset: &[Rational], mode: Mode) -> Result<Self, FrameworkError> {
        let identity: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| Rational::from_integer(((i == j) as i64).into()))
                    .collect()
            })
            .collect();
        self.transformed(&identity, offset, mode)
    }

    pub fn with_edge_flipped(&self, e: usize) -> Self {
        let mut f = self.clone();
        f.edges[e] = f.edges[e].flipped();
        f
    }

    /// Relabels vertex `v` as `perm[v]`; edges keep their order and orientation.
    pub fn with_vertices_permuted(&self, perm: &[usize]) -> Result<Self, FrameworkError> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(FrameworkError::InvalidParameter(
                "vertex permutation is not a bijection".into(),
            ));
        }
        let mut positions = vec![Vec::new(); n];
        for (old, &new) in perm.iter().enumerate() {
            positions[new] = self.positions[old].clone();
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.tail], perm[e.head]))
            .collect();
        Ok(Self {
            dim: self.dim,
            positions,
            edges,
        })
    }

    pub fn with_position(
        &self,
        v: usize,
        position: Vec<Rational>,
        mode: Mode,
    ) -> Result<Self, FrameworkError> {
        if v >= self.vertex_count() {
            return Err(FrameworkError::InvalidParameter(format!("no vertex {v}")));
        }
        let mut positions = self.positions.clone();
        positions[v] = position;
        Self::new(self.dim, positions, self.edges.clone(), mode)
    }

    /// Are all vertices on one line (or fewer than two distinct points)?
    pub fn is_collinear(&self) -> bool {
        let Some(base) = self.positions.first() else {
            return true;
        };
        let diffs: Vec<Vec<Rational>> = self
            .positions
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .filter(|d: &Vec<Rational>| d.iter().any(|x| !Zero::is_zero(x)))
            .collect();
        let Some(first) = diffs.first() else {
            return true;
        };
        diffs.iter().all(|d| {
            (0..self.dim).all(|i| {
                (0..self.dim).all(|j| Zero::is_zero(&(&first[i] * &d[j] - &first[j] * &d[i])))
            })
        })
    }
}
