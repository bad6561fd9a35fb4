//! Induced maps on homology, the connecting map `ϑ: H₁N → H₀F`, and the
//! exactness of
//!
//! ```text
//! 0 → H₁F → H₁M → H₁N → H₀F → H₀M → H₀N → 0
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cosheaf::{check_cosheaf_map, Chain, CosheafError, CosheafMap, Degree, HomologyDims, HomologyResult};
use crate::framework::{perturb, Framework, FrameworkError};
use crate::linalg::{
    complement_within, kernel_basis, project_onto, solve_in_image, LinalgError, Mat, Mode, Rational, Scalar,
    SubspaceBasis, SubspaceCheck,
};
use crate::structural::{build_structural_system, couple_dim, rigid_body_space, StructuralError, StructuralSystem};
use crate::tolerance::RESIDUAL_REL;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LesError {
    #[error("map does not commute at edge {edge}, vertex {vertex} (residual {residual:e})")]
    NotCommuting { edge: usize, vertex: usize, residual: f64 },
    #[error("connecting map pull-back failed at vertex {vertex}: {source}")]
    Pullback { vertex: usize, source: LinalgError },
    #[error("section for edge {edge} has shape {found:?}, expected {expected:?}")]
    SectionShape {
        edge: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Cosheaf(#[from] CosheafError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A linear map between homology spaces, written in their chosen bases.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedMap<S> {
    /// `dim target × dim source`
    pub matrix: Mat<S>,
    pub rank: usize,
    /// Subspace of source coordinates.
    pub kernel: SubspaceBasis<S>,
    /// Subspace of target coordinates.
    pub image: SubspaceBasis<S>,
}

impl<S: Scalar> InducedMap<S> {
    pub fn from_matrix(matrix: Mat<S>) -> Self {
        let columns: Vec<Vec<S>> = matrix.columns().collect();
        Self {
            rank: S::rank(&matrix),
            kernel: kernel_basis(&matrix),
            image: SubspaceBasis::span_of(matrix.rows(), &columns),
            matrix,
        }
    }

    /// Like [`from_matrix`](Self::from_matrix), but in float mode entries at
    /// or below `RESIDUAL_REL · scale` are taken as zero first. `scale` is the
    /// size of the data the coordinates were computed from.
    pub fn from_matrix_at_scale(matrix: Mat<S>, scale: f64) -> Self {
        Self::from_matrix(chop(matrix, scale))
    }

    pub fn is_injective(&self) -> bool {
        self.rank == self.matrix.cols()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank == self.matrix.rows()
    }
}

fn chop<S: Scalar>(m: Mat<S>, scale: f64) -> Mat<S> {
    if S::MODE == Mode::Exact {
        return m;
    }
    let tol = RESIDUAL_REL * scale;
    m.map(|x| if x.to_f64().abs() <= tol { S::zero() } else { x.clone() })
}

/// Homology map induced by `map` in the given degree.
///
/// Degree 1 classes are cycles, so the image cycle is solved for directly.
/// Degree 0 classes are represented in `(im ∂)^⊥`, so the image is projected
/// there first.
pub fn induced_map<S: Scalar>(
    map: &CosheafMap<S>,
    degree: Degree,
    source: &HomologyResult<S>,
    target: &HomologyResult<S>,
) -> Result<InducedMap<S>, LesError> {
    if let Some(failure) = check_cosheaf_map(map).failures.first() {
        return Err(LesError::NotCommuting {
            edge: failure.edge,
            vertex: failure.vertex,
            residual: failure.residual,
        });
    }
    let images = map.chain_matrix(degree).matmul(source.basis(degree).matrix())?;
    let target_basis = target.basis(degree);
    let matrix = match degree {
        Degree::One => target_basis.coordinates(&images)?,
        Degree::Zero => target_basis.projected_coordinates(&images)?,
    };
    Ok(InducedMap::from_matrix_at_scale(matrix, images.frobenius_norm()))
}

/// `ϑ` together with the per-vertex resultants it is built from.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectingMap<S> {
    pub map: InducedMap<S>,
    /// For each `H₁N` generator, the `C₀F` chain of joint resultants.
    pub resultants: Vec<Vec<S>>,
    /// The same chains projected onto the `H₀F` representative space.
    pub representatives: Vec<Vec<S>>,
}

impl<S: Scalar> ConnectingMap<S> {
    /// Span of the projected representatives, inside `C₀F`.
    pub fn image_vectors(&self, ambient_dim: usize) -> SubspaceBasis<S> {
        SubspaceBasis::span_of(ambient_dim, &self.representatives)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FrameDims {
    pub force: HomologyDims,
    pub moment: HomologyDims,
    pub anchored: HomologyDims,
}

/// Everything needed to evaluate the long exact sequence of a framework.
#[derive(Clone, Debug)]
pub struct FrameAnalysis<S> {
    framework: Framework,
    system: StructuralSystem<S>,
    force: HomologyResult<S>,
    moment: HomologyResult<S>,
    anchored: HomologyResult<S>,
}

impl<S: Scalar> FrameAnalysis<S> {
    pub fn new(f: &Framework) -> Result<Self, LesError> {
        let system = build_structural_system::<S>(f)?;
        Ok(Self {
            framework: f.clone(),
            force: system.force().homology(),
            moment: system.moment().homology(),
            anchored: system.anchored_cosheaf().homology(),
            system,
        })
    }

    pub fn framework(&self) -> &Framework {
        &self.framework
    }

    pub fn system(&self) -> &StructuralSystem<S> {
        &self.system
    }

    pub fn force_homology(&self) -> &HomologyResult<S> {
        &self.force
    }

    pub fn moment_homology(&self) -> &HomologyResult<S> {
        &self.moment
    }

    pub fn anchored_homology(&self) -> &HomologyResult<S> {
        &self.anchored
    }

    pub fn dims(&self) -> FrameDims {
        FrameDims {
            force: self.force.dims(),
            moment: self.moment.dims(),
            anchored: self.anchored.dims(),
        }
    }

    pub fn phi_star(&self, degree: Degree) -> Result<InducedMap<S>, LesError> {
        induced_map(&self.system.phi, degree, &self.force, &self.moment)
    }

    pub fn pi_star(&self, degree: Degree) -> Result<InducedMap<S>, LesError> {
        induced_map(self.system.pi(), degree, &self.moment, &self.anchored)
    }

    /// `None` when the framework is disconnected.
    pub fn rigid_space(&self) -> Option<SubspaceBasis<S>> {
        rigid_body_space(&self.framework).ok()
    }

    /// Complement of the rigid motions inside `H₀F`.
    pub fn mechanisms(&self) -> Result<Option<SubspaceBasis<S>>, LesError> {
        match self.rigid_space() {
            Some(rigid) => Ok(Some(complement_within(&rigid, &self.force.h0)?)),
            None => Ok(None),
        }
    }

    pub fn connecting(&self) -> Result<ConnectingMap<S>, LesError> {
        self.connecting_with_sections(&self.system.anchored.edge_sections)
    }

    /// Snake-lemma construction with an arbitrary choice of edge sections
    /// `s_e: N_e → M_e` satisfying `π_e s_e = id`.
    pub fn connecting_with_sections(&self, sections: &[Mat<S>]) -> Result<ConnectingMap<S>, LesError> {
        let moment = self.system.moment();
        let anchored = self.system.anchored_cosheaf();
        if sections.len() != moment.edges().len() {
            return Err(CosheafError::ShapeMismatch(format!(
                "{} sections for {} edges",
                sections.len(),
                moment.edges().len()
            ))
            .into());
        }
        for (e, s) in sections.iter().enumerate() {
            let expected = (moment.edge_dims()[e], anchored.edge_dims()[e]);
            if s.shape() != expected {
                return Err(LesError::SectionShape {
                    edge: e,
                    expected,
                    found: s.shape(),
                });
            }
        }
        let resultants = self
            .anchored
            .h1
            .vectors()
            .map(|w| self.pull_back(&w, sections))
            .collect::<Result<Vec<_>, _>>()?;
        let h0 = &self.force.h0;
        let raw = Mat::from_columns(h0.ambient_dim(), &resultants);
        let coords = h0.projected_coordinates(&raw)?;
        let map = InducedMap::from_matrix_at_scale(coords, raw.frobenius_norm());
        let representatives = h0.matrix().matmul(&map.matrix)?.columns().collect();
        Ok(ConnectingMap {
            map,
            resultants,
            representatives,
        })
    }

    /// Lift an `N`-cycle through the sections, take its `M`-boundary and pull
    /// that back through `φ` joint by joint.
    fn pull_back(&self, cycle: &[S], sections: &[Mat<S>]) -> Result<Vec<S>, LesError> {
        let moment = self.system.moment();
        let w = self.system.anchored_cosheaf().unpack(Degree::One, cycle)?;
        let lift_components = w
            .components
            .iter()
            .zip(sections)
            .map(|(we, s)| s.mul_vec(we))
            .collect::<Result<Vec<_>, _>>()?;
        let lift = moment.pack(&Chain {
            degree: Degree::One,
            components: lift_components,
        })?;
        let z = moment.unpack(Degree::Zero, &self.moment.boundary.mul_vec(&lift)?)?;
        let mut x = Vec::with_capacity(self.force.h0.ambient_dim());
        for (v, zv) in z.components.iter().enumerate() {
            let xv = solve_in_image(self.system.phi.vertex_map(v), zv)
                .map_err(|source| LesError::Pullback { vertex: v, source })?;
            x.extend(xv);
        }
        Ok(x)
    }

    /// `ϑ` of an arbitrary `H₁N` cycle, as a projected `H₀F` representative.
    pub fn resultant_of(&self, cycle: &[S]) -> Result<Vec<S>, LesError> {
        let x = self.pull_back(cycle, &self.system.anchored.edge_sections)?;
        Ok(project_onto(&x, &self.force.h0)?)
    }

    /// Anchored self-stresses orthogonal to everything coming from `H₁M`,
    /// as chains in `C₁N`.
    pub fn pi_image_complement(&self) -> Result<SubspaceBasis<S>, LesError> {
        let pi1 = self.pi_star(Degree::One)?;
        let image = self.anchored.h1.matrix().matmul(pi1.image.matrix())?;
        let image = SubspaceBasis::span_of(image.rows(), &image.columns().collect::<Vec<_>>());
        Ok(complement_within(&image, &self.anchored.h1)?)
    }

    /// Alternative sections `s_e + φ_e R_e` with random integer `R_e ∈ [−5, 5]`.
    pub fn randomized_sections(&self, seed: u64) -> Result<Vec<Mat<S>>, LesError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let quotient = &self.system.anchored;
        quotient
            .edge_sections
            .iter()
            .enumerate()
            .map(|(e, s)| {
                let phi_e = self.system.phi.edge_map(e);
                let r = Mat::from_fn(phi_e.cols(), s.cols(), |_, _| S::from_i64(rng.gen_range(-5..=5)));
                Ok(s.add(&phi_e.matmul(&r)?)?)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }

    fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One exactness or consistency check, with the residual that decided it.
#[derive(Clone, Debug, PartialEq)]
pub struct LesCheck {
    pub name: &'static str,
    pub verdict: Verdict,
    pub residual: f64,
}

impl LesCheck {
    fn from_subspace(name: &'static str, check: SubspaceCheck) -> Self {
        Self {
            name,
            verdict: Verdict::from_bool(check.holds),
            residual: check.residual,
        }
    }

    fn from_count(name: &'static str, discrepancy: i64) -> Self {
        Self {
            name,
            verdict: Verdict::from_bool(discrepancy == 0),
            residual: discrepancy.unsigned_abs() as f64,
        }
    }

    fn not_applicable(name: &'static str) -> Self {
        Self {
            name,
            verdict: Verdict::NotApplicable,
            residual: 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ranks {
    pub phi: usize,
    pub pi: usize,
    pub connecting: usize,
    pub phi0: usize,
    pub pi0: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LesReport<S> {
    pub dims: FrameDims,
    pub connected: bool,
    pub rigid_dim: Option<usize>,
    pub mechanism_dim: Option<usize>,
    pub ranks: Ranks,
    pub checks: Vec<LesCheck>,
    pub counting: CountingRules,
    pub connecting: ConnectingMap<S>,
    /// `im ϑ` as velocity fields in `C₀F`.
    pub mechanisms: SubspaceBasis<S>,
}

impl<S> LesReport<S> {
    /// No check failed (not-applicable checks are ignored).
    pub fn all_pass(&self) -> bool {
        self.checks
            .iter()
            .map(|c| c.verdict)
            .chain(self.counting.rules.iter().map(|r| r.status))
            .all(|v| v != Verdict::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LesCheck> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }
}

fn same<S: Scalar>(a: &SubspaceBasis<S>, b: &SubspaceBasis<S>) -> SubspaceCheck {
    S::same_subspace(a.matrix(), b.matrix())
}

fn count(n: usize) -> i64 {
    n as i64
}

pub fn verify_les<S: Scalar>(f: &Framework) -> Result<LesReport<S>, LesError> {
    FrameAnalysis::<S>::new(f)?.report()
}

impl<S: Scalar> FrameAnalysis<S> {
    pub fn report(&self) -> Result<LesReport<S>, LesError> {
        let dims = self.dims();
        let phi1 = self.phi_star(Degree::One)?;
        let pi1 = self.pi_star(Degree::One)?;
        let phi0 = self.phi_star(Degree::Zero)?;
        let pi0 = self.pi_star(Degree::Zero)?;
        let theta = self.connecting()?;
        let rigid = self.rigid_space();
        let mechanisms = self.mechanisms()?;
        let force_chain_dim = self.force.h0.ambient_dim();
        let theta_image = theta.image_vectors(force_chain_dim);

        let mut checks = vec![
            LesCheck::from_count("H1F: phi injective", count(dims.force.h1) - count(phi1.rank)),
            LesCheck::from_subspace("H1M: im phi = ker pi", same(&phi1.image, &pi1.kernel)),
            LesCheck::from_subspace("H1N: im pi = ker theta", same(&pi1.image, &theta.map.kernel)),
        ];
        checks.push(match &mechanisms {
            Some(m) => LesCheck::from_subspace("theta onto mechanisms", same(&theta_image, m)),
            None => LesCheck::not_applicable("theta onto mechanisms"),
        });
        checks.push(LesCheck::from_count("H0N = 0", count(dims.anchored.h0)));
        checks.push(match &mechanisms {
            Some(m) => LesCheck::from_count(
                "alternating sum",
                count(dims.force.h1) - count(m.dim()) + count(dims.anchored.h1) - count(dims.moment.h1),
            ),
            None => LesCheck::not_applicable("alternating sum"),
        });
        checks.push(LesCheck::from_count(
            "H1N = im pi + im theta",
            count(dims.anchored.h1) - count(pi1.rank) - count(theta.map.rank),
        ));
        checks.push(LesCheck::from_subspace("H0F: im theta = ker phi", same(&theta.map.image, &phi0.kernel)));
        checks.push(LesCheck::from_subspace("H0M: im phi = ker pi", same(&phi0.image, &pi0.kernel)));
        checks.push(LesCheck::from_count("H0N: pi onto", count(dims.anchored.h0) - count(pi0.rank)));
        checks.push(match &rigid {
            Some(r) => {
                let overlap = r.matrix().transpose().matmul(theta_image.matrix())?;
                let scale = r.matrix().frobenius_norm() * theta_image.matrix().frobenius_norm();
                LesCheck {
                    name: "theta image orthogonal to rigid motions",
                    verdict: Verdict::from_bool(S::negligible(&overlap, scale)),
                    residual: overlap.frobenius_norm(),
                }
            }
            None => LesCheck::not_applicable("theta image orthogonal to rigid motions"),
        });

        let rigid_dim = rigid.as_ref().map(SubspaceBasis::dim);
        let mechanism_dim = mechanisms.as_ref().map(SubspaceBasis::dim);
        Ok(LesReport {
            dims,
            connected: self.framework.is_connected(),
            rigid_dim,
            mechanism_dim,
            ranks: Ranks {
                phi: phi1.rank,
                pi: pi1.rank,
                connecting: theta.map.rank,
                phi0: phi0.rank,
                pi0: pi0.rank,
            },
            checks,
            counting: counting_rules_from(&self.framework, dims, rigid_dim, mechanism_dim),
            connecting: theta,
            mechanisms: theta_image,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RuleResult {
    pub name: &'static str,
    pub expected: i64,
    pub computed: i64,
    pub status: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountingRules {
    pub rules: Vec<RuleResult>,
}

impl CountingRules {
    pub fn get(&self, name: &str) -> Option<&RuleResult> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn all_hold(&self) -> bool {
        self.rules.iter().all(|r| r.status != Verdict::Fail)
    }
}

pub const MAXWELL_CALLADINE: &str = "maxwell-calladine";
pub const CIRCUIT_RANK: &str = "circuit-rank";
pub const MOMENT_H0: &str = "moment-h0";
pub const ANCHORED_COUNT: &str = "anchored-count";
pub const DECOMPOSITION: &str = "decomposition";

/// Counting rules from homology alone: `ϑ` is not needed, so this is cheaper
/// than a full report.
pub fn counting_rules<S: Scalar>(f: &Framework) -> Result<CountingRules, LesError> {
    let system = build_structural_system::<S>(f)?;
    let force = system.force().homology();
    let dims = FrameDims {
        force: force.dims(),
        moment: system.moment().homology().dims(),
        anchored: system.anchored_cosheaf().homology().dims(),
    };
    let (rigid_dim, mechanism_dim) = match rigid_body_space::<S>(f) {
        Ok(rigid) => {
            let mech = complement_within(&rigid, &force.h0)?;
            (Some(rigid.dim()), Some(mech.dim()))
        }
        Err(_) => (None, None),
    };
    Ok(counting_rules_from(f, dims, rigid_dim, mechanism_dim))
}

fn counting_rules_from(
    f: &Framework,
    dims: FrameDims,
    rigid_dim: Option<usize>,
    mechanism_dim: Option<usize>,
) -> CountingRules {
    let n = count(f.dim());
    let v = count(f.vertex_count());
    let e = count(f.edge_count());
    let c = count(couple_dim(f.dim()).expect("framework dimension is 2 or 3"));
    let rule = |name, expected: i64, computed: Option<i64>| RuleResult {
        name,
        expected,
        computed: computed.unwrap_or(0),
        status: match computed {
            Some(x) => Verdict::from_bool(x == expected),
            None => Verdict::NotApplicable,
        },
    };
    let connected = rigid_dim.is_some();
    let only_if_connected = |x: i64| connected.then_some(x);
    let h1f = count(dims.force.h1);
    let h0f = count(dims.force.h0);
    let h1m = count(dims.moment.h1);
    let h0m = count(dims.moment.h0);
    let h1n = count(dims.anchored.h1);
    // n|V| − |E| = dim R + dim M − dim H₁F
    let maxwell = match (rigid_dim, mechanism_dim) {
        (Some(r), Some(m)) => count(r) + count(m) - h1f,
        _ => h0f - h1f,
    };
    let anchored_expected = match f.dim() {
        2 => 2 * e - v,
        _ => 5 * e - 3 * v,
    };
    let rules = vec![
        rule(MAXWELL_CALLADINE, n * v - e, Some(maxwell)),
        rule(CIRCUIT_RANK, c * (e - v + 1), only_if_connected(h1m)),
        rule(MOMENT_H0, c, only_if_connected(h0m)),
        rule(ANCHORED_COUNT, anchored_expected, only_if_connected(h1n)),
        // cycle count minus reduced Maxwell count
        rule(
            DECOMPOSITION,
            c * (e - v + 1) - (e - n * v + c),
            only_if_connected((h1m - h0m) - (h1f - h0f)),
        ),
    ];
    CountingRules { rules }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanDims {
    pub dims: FrameDims,
    pub rank_phi: usize,
    pub rank_pi: usize,
    pub rank_connecting: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub magnitude: Rational,
    pub seed: u64,
    /// `Err` when the perturbed framework was invalid; the row is flagged, not dropped.
    pub outcome: Result<ScanDims, String>,
}

/// Perturbs `f` once per `(magnitude, seed)` pair and records dimensions and
/// ranks. Rows are computed in parallel and returned magnitude-major in input
/// order.
pub fn perturbation_scan<S: Scalar>(f: &Framework, magnitudes: &[Rational], seeds: &[u64]) -> Vec<ScanRow> {
    let jobs: Vec<(&Rational, u64)> = magnitudes
        .iter()
        .flat_map(|m| seeds.iter().map(move |&s| (m, s)))
        .collect();
    jobs.into_par_iter()
        .map(|(magnitude, seed)| ScanRow {
            magnitude: magnitude.clone(),
            seed,
            outcome: scan_one::<S>(f, magnitude, seed).map_err(|e| e.to_string()),
        })
        .collect()
}

#[derive(Debug, Error)]
enum ScanError {
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Les(#[from] LesError),
}

fn scan_one<S: Scalar>(f: &Framework, magnitude: &Rational, seed: u64) -> Result<ScanDims, ScanError> {
    let g = perturb(f, magnitude, seed, S::MODE)?;
    let analysis = FrameAnalysis::<S>::new(&g)?;
    Ok(ScanDims {
        dims: analysis.dims(),
        rank_phi: analysis.phi_star(Degree::One)?.rank,
        rank_pi: analysis.pi_star(Degree::One)?.rank,
        rank_connecting: analysis.connecting()?.map.rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::{make_desargues, make_named, parse_framework};
    use crate::linalg::{rank, Mode};

    type Q = Rational;

    fn q(v: i64) -> Q {
        Q::from_i64(v)
    }

    fn half() -> Q {
        Q::new(1.into(), 2.into())
    }

    fn dims_tuple(d: FrameDims) -> [(usize, usize); 3] {
        [
            (d.force.h1, d.force.h0),
            (d.moment.h1, d.moment.h0),
            (d.anchored.h1, d.anchored.h0),
        ]
    }

    /// Edge-by-vertex rigidity matrix written out directly from coordinates.
    fn rigidity_matrix(f: &Framework) -> Mat<Q> {
        let n = f.dim();
        let mut r = Mat::zeros(f.edge_count(), n * f.vertex_count());
        for (e, edge) in f.edges().iter().enumerate() {
            for i in 0..n {
                let d = &f.position(edge.head)[i] - &f.position(edge.tail)[i];
                r[(e, n * edge.head + i)] = d.clone();
                r[(e, n * edge.tail + i)] = -d;
            }
        }
        r
    }

    #[test]
    fn square_report() {
        let f = make_named("square", 0).unwrap();
        let report = verify_les::<Q>(&f).unwrap();
        assert_eq!(dims_tuple(report.dims), [(0, 4), (3, 3), (4, 0)]);
        assert_eq!((report.rigid_dim, report.mechanism_dim), (Some(3), Some(1)));
        assert_eq!(report.ranks.connecting, 1);
        assert_eq!(report.ranks.pi, 3);
        assert!(report.all_pass(), "{:?}", report.checks);
        assert_eq!(report.checks.len(), 11);
    }

    #[test]
    fn square_mechanism_is_the_parallelogram_shear() {
        let f = make_named("square", 0).unwrap();
        let report = verify_les::<Q>(&f).unwrap();
        assert_eq!(report.mechanisms.dim(), 1);
        let u = report.mechanisms.vector(0);
        let pattern = [1, 1, 1, -1, -1, -1, -1, 1].map(q);
        let scale = &u[0] / &pattern[0];
        assert!(!scale.is_zero());
        let scaled: Vec<Q> = pattern.iter().map(|x| x * &scale).collect();
        assert_eq!(u, scaled);
    }

    #[test]
    fn generator_outside_pi_image_drives_the_mechanism() {
        for f in [make_named("square", 0).unwrap(), make_desargues(&half()).unwrap()] {
            let a = FrameAnalysis::<Q>::new(&f).unwrap();
            let extra = a.pi_image_complement().unwrap();
            assert_eq!(extra.dim(), 1);
            let arrows = a.resultant_of(&extra.vector(0)).unwrap();
            let report = a.report().unwrap();
            let arrows = SubspaceBasis::span_of(arrows.len(), &[arrows]);
            assert_eq!(arrows.dim(), 1);
            assert!(arrows.same_as(&report.mechanisms));
        }
    }

    #[test]
    fn desargues_ranks() {
        let f = make_desargues(&half()).unwrap();
        let report = verify_les::<Q>(&f).unwrap();
        assert_eq!(dims_tuple(report.dims), [(1, 4), (12, 3), (12, 0)]);
        assert_eq!((report.ranks.phi, report.ranks.pi, report.ranks.connecting), (1, 11, 1));
        assert!(report.all_pass(), "{:?}", report.checks);
        // independent mechanism oracle: motions killed by the rigidity matrix,
        // minus the rigid ones
        let motions = kernel_basis(&rigidity_matrix(&f));
        let rigid = rigid_body_space::<Q>(&f).unwrap();
        let oracle = complement_within(&rigid, &motions).unwrap();
        assert_eq!(oracle.dim(), 1);
        assert!(report.mechanisms.same_as(&oracle));
    }

    #[test]
    fn triangle_has_zero_connecting_map() {
        let f = make_named("triangle", 0).unwrap();
        let report = verify_les::<Q>(&f).unwrap();
        assert_eq!(report.dims.anchored.h1, 3);
        assert_eq!(report.ranks.connecting, 0);
        assert!(report.connecting.map.matrix.is_zero());
        assert!(report.all_pass());
    }

    #[test]
    fn float_connecting_map_of_triangle_is_zero() {
        let f = make_named("triangle", 0).unwrap();
        let report = verify_les::<f64>(&f).unwrap();
        assert_eq!(report.ranks.connecting, 0);
        assert!(report.connecting.map.matrix.is_zero());
        assert_eq!(report.ranks.pi, 3);
    }

    #[test]
    fn bar_report() {
        let f = make_named("bar", 0).unwrap();
        let report = verify_les::<Q>(&f).unwrap();
        assert_eq!(dims_tuple(report.dims), [(0, 3), (0, 3), (0, 0)]);
        assert!(report.all_pass());
    }

    #[test]
    fn induced_matrix_shapes() {
        let f = make_desargues(&half()).unwrap();
        let a = FrameAnalysis::<Q>::new(&f).unwrap();
        assert_eq!(a.phi_star(Degree::One).unwrap().matrix.shape(), (12, 1));
        assert_eq!(a.pi_star(Degree::One).unwrap().matrix.shape(), (12, 12));
        assert_eq!(a.phi_star(Degree::Zero).unwrap().matrix.shape(), (3, 4));
        assert_eq!(a.pi_star(Degree::Zero).unwrap().matrix.shape(), (0, 3));
        assert_eq!(a.connecting().unwrap().map.matrix.shape(), (4, 12));
        // φ* on H₀ is onto H₀M with kernel the mechanisms
        let phi0 = a.phi_star(Degree::Zero).unwrap();
        assert!(phi0.is_surjective());
        assert_eq!(phi0.kernel.dim(), 1);
    }

    #[test]
    fn resultants_vanish_on_pulled_back_moments() {
        // every resultant is a force on joints; its class is the representative
        let f = make_named("square", 0).unwrap();
        let a = FrameAnalysis::<Q>::new(&f).unwrap();
        let theta = a.connecting().unwrap();
        let boundary = &a.force_homology().boundary;
        for (x, rep) in theta.resultants.iter().zip(&theta.representatives) {
            let diff: Vec<Q> = x.iter().zip(rep).map(|(a, b)| a - b).collect();
            // x − rep lies in im ∂F
            let stacked = boundary.hstack(&Mat::column_vector(&diff)).unwrap();
            assert_eq!(rank(&stacked), rank(boundary));
        }
    }

    #[test]
    fn connecting_map_ignores_section_choice() {
        for f in [make_named("square", 0).unwrap(), make_desargues(&half()).unwrap()] {
            let a = FrameAnalysis::<Q>::new(&f).unwrap();
            let base = a.connecting().unwrap();
            for seed in [1, 2] {
                let sections = a.randomized_sections(seed).unwrap();
                assert_ne!(sections, a.system().anchored.edge_sections);
                let other = a.connecting_with_sections(&sections).unwrap();
                assert_eq!(other.map.matrix, base.map.matrix);
                assert_eq!(other.representatives, base.representatives);
            }
        }
    }

    #[test]
    fn sections_must_match_stalks() {
        let f = make_named("square", 0).unwrap();
        let a = FrameAnalysis::<Q>::new(&f).unwrap();
        let mut sections = a.system().anchored.edge_sections.clone();
        sections[2] = Mat::zeros(3, 1);
        assert!(matches!(
            a.connecting_with_sections(&sections),
            Err(LesError::SectionShape { edge: 2, .. })
        ));
        assert!(a.connecting_with_sections(&sections[..3]).is_err());
    }

    #[test]
    fn non_commuting_map_is_refused() {
        let f = make_named("square", 0).unwrap();
        let a = FrameAnalysis::<Q>::new(&f).unwrap();
        let broken = a
            .system()
            .phi
            .clone()
            .with_vertex_map(1, Mat::from_i64(3, 2, &[0, 0, 0, 1, 1, 0]))
            .unwrap();
        let err = induced_map(&broken, Degree::One, a.force_homology(), a.moment_homology()).unwrap_err();
        assert!(matches!(err, LesError::NotCommuting { .. }));
    }

    #[test]
    fn counting_rules_on_named_frames() {
        let f = make_desargues(&half()).unwrap();
        let rules = counting_rules::<Q>(&f).unwrap();
        assert!(rules.all_hold());
        let d = rules.get(DECOMPOSITION).unwrap();
        assert_eq!((d.expected, d.computed), (12, 12));
        assert_eq!(rules.get(ANCHORED_COUNT).unwrap().expected, 12);
        assert_eq!(rules.get(MAXWELL_CALLADINE).unwrap().expected, 3);
        let box3d = counting_rules::<Q>(&make_named("box3d", 0).unwrap()).unwrap();
        assert!(box3d.all_hold());
        assert_eq!(box3d.get(ANCHORED_COUNT).unwrap().computed, 5 * 12 - 3 * 8);
    }

    #[test]
    fn disconnected_frameworks_are_not_applicable() {
        let text = "dim 2\nv 0 0 0\nv 1 1 0\nv 2 0 1\nv 3 5 5\nv 4 6 5\ne 0 1\ne 1 2\ne 2 0\ne 3 4\n";
        let f = parse_framework(text, Mode::Exact).unwrap();
        let report = verify_les::<Q>(&f).unwrap();
        assert!(!report.connected);
        assert_eq!(report.rigid_dim, None);
        assert!(report.all_pass());
        let na: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.verdict == Verdict::NotApplicable)
            .map(|c| c.name)
            .collect();
        assert_eq!(na.len(), 3);
        let rules = counting_rules::<Q>(&f).unwrap();
        assert_eq!(rules.get(MAXWELL_CALLADINE).unwrap().status, Verdict::Pass);
        assert_eq!(rules.get(ANCHORED_COUNT).unwrap().status, Verdict::NotApplicable);
    }

    #[test]
    fn float_mode_agrees_on_desargues() {
        let f = make_desargues(&half()).unwrap();
        let report = verify_les::<f64>(&f).unwrap();
        assert_eq!(dims_tuple(report.dims), [(1, 4), (12, 3), (12, 0)]);
        assert_eq!((report.ranks.phi, report.ranks.pi, report.ranks.connecting), (1, 11, 1));
        assert!(report.all_pass(), "{:?}", report.checks);
    }

    #[test]
    fn scan_rows_keep_input_order() {
        let f = make_desargues(&half()).unwrap();
        let mags = [q(0), Q::new(1.into(), 100.into())];
        let rows = perturbation_scan::<Q>(&f, &mags, &[3, 1]);
        let keys: Vec<(Q, u64)> = rows.iter().map(|r| (r.magnitude.clone(), r.seed)).collect();
        assert_eq!(keys, vec![(q(0), 3), (q(0), 1), (mags[1].clone(), 3), (mags[1].clone(), 1)]);
        let base = rows[0].outcome.as_ref().unwrap();
        assert_eq!(dims_tuple(base.dims), [(1, 4), (12, 3), (12, 0)]);
        assert_eq!((base.rank_phi, base.rank_pi, base.rank_connecting), (1, 11, 1));
        for row in &rows[2..] {
            let r = row.outcome.as_ref().unwrap();
            assert_eq!(dims_tuple(r.dims), [(0, 3), (12, 3), (12, 0)]);
            assert_eq!((r.rank_phi, r.rank_pi, r.rank_connecting), (0, 12, 0));
        }
    }

    #[test]
    fn invalid_perturbation_row_is_flagged() {
        // a negative magnitude is rejected by perturb; the row is kept and flagged
        let f = parse_framework("dim 2\nv 0 0 0\nv 1 1/1000 0\ne 0 1\n", Mode::Exact).unwrap();
        let rows = perturbation_scan::<Q>(&f, &[q(-1)], &[0]);
        assert!(rows[0].outcome.is_err());
    }
}
