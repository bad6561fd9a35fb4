use std::fmt::Write as _;

use momentframe::cosheaf::Degree;
use momentframe::les::{FrameAnalysis, LesError, LesReport};
use momentframe::{Framework, Scalar};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool_version: String,
    /// `sha256:` followed by the hex digest of the input file bytes.
    pub input_digest: String,
    pub mode: String,
    pub framework: FrameworkSummary,
    pub homology: Vec<DimsRow>,
    pub rigid_dim: Option<usize>,
    pub mechanism_dim: Option<usize>,
    pub ranks: RanksDoc,
    pub checks: Vec<CheckDoc>,
    pub counting: Vec<RuleDoc>,
    pub all_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chains: Option<ChainsDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameworkSummary {
    pub vertices: usize,
    pub edges: usize,
    pub dim: usize,
    pub connected: bool,
}

/// One column of the homology table: `F`, `M` or `N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimsRow {
    pub cosheaf: String,
    pub h1: usize,
    pub h0: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RanksDoc {
    pub phi: usize,
    pub pi: usize,
    pub connecting: usize,
    pub phi_h0: usize,
    pub pi_h0: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub name: String,
    pub verdict: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub name: String,
    pub expected: i64,
    pub computed: i64,
    pub status: String,
}

/// Basis vectors as strings so exact values survive serialization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainsDoc {
    pub force_h1: Vec<Vec<String>>,
    pub moment_h1: Vec<Vec<String>>,
    pub anchored_h1: Vec<Vec<String>>,
    /// Per anchored generator, the projected joint resultants.
    pub resultants: Vec<Vec<String>>,
    pub mechanisms: Vec<Vec<String>>,
}

impl ReportDocument {
    pub fn dims(&self, cosheaf: &str) -> Option<(usize, usize)> {
        self.homology.iter().find(|r| r.cosheaf == cosheaf).map(|r| (r.h1, r.h0))
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &str> {
        self.checks
            .iter()
            .filter(|c| c.verdict == "fail")
            .map(|c| c.name.as_str())
            .chain(self.counting.iter().filter(|r| r.status == "fail").map(|r| r.name.as_str()))
    }
}

pub fn input_digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn strings<S: Scalar>(vectors: impl Iterator<Item = Vec<S>>) -> Vec<Vec<String>> {
    vectors.map(|v| v.iter().map(|x| x.to_string()).collect()).collect()
}

pub fn build_report<S: Scalar>(
    f: &Framework,
    input: &[u8],
    with_chains: bool,
) -> Result<ReportDocument, LesError> {
    let analysis = FrameAnalysis::<S>::new(f)?;
    let report = analysis.report()?;
    let chains = with_chains.then(|| ChainsDoc {
        force_h1: strings(analysis.force_homology().basis(Degree::One).vectors()),
        moment_h1: strings(analysis.moment_homology().basis(Degree::One).vectors()),
        anchored_h1: strings(analysis.anchored_homology().basis(Degree::One).vectors()),
        resultants: strings(report.connecting.representatives.iter().cloned()),
        mechanisms: strings(report.mechanisms.vectors()),
    });
    Ok(document(f, input, S::MODE.as_str(), &report, chains))
}

fn document<S>(
    f: &Framework,
    input: &[u8],
    mode: &str,
    report: &LesReport<S>,
    chains: Option<ChainsDoc>,
) -> ReportDocument {
    let row = |name: &str, d: momentframe::cosheaf::HomologyDims| DimsRow {
        cosheaf: name.to_string(),
        h1: d.h1,
        h0: d.h0,
    };
    ReportDocument {
        schema: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        input_digest: input_digest(input),
        mode: mode.to_string(),
        framework: FrameworkSummary {
            vertices: f.vertex_count(),
            edges: f.edge_count(),
            dim: f.dim(),
            connected: report.connected,
        },
        homology: vec![
            row("F", report.dims.force),
            row("M", report.dims.moment),
            row("N", report.dims.anchored),
        ],
        rigid_dim: report.rigid_dim,
        mechanism_dim: report.mechanism_dim,
        ranks: RanksDoc {
            phi: report.ranks.phi,
            pi: report.ranks.pi,
            connecting: report.ranks.connecting,
            phi_h0: report.ranks.phi0,
            pi_h0: report.ranks.pi0,
        },
        checks: report
            .checks
            .iter()
            .map(|c| CheckDoc {
                name: c.name.to_string(),
                verdict: c.verdict.as_str().to_string(),
                residual: c.residual,
            })
            .collect(),
        counting: report
            .counting
            .rules
            .iter()
            .map(|r| RuleDoc {
                name: r.name.to_string(),
                expected: r.expected,
                computed: r.computed,
                status: r.status.as_str().to_string(),
            })
            .collect(),
        all_pass: report.all_pass(),
        chains,
    }
}

/// The homology table with stresses on top and freedoms below.
pub fn render_dims_table(doc: &ReportDocument) -> String {
    let mut out = String::new();
    let cell = |name: &str, pick: fn((usize, usize)) -> usize| {
        doc.dims(name).map(pick).map_or("-".to_string(), |d| d.to_string())
    };
    writeln!(out, "{:<12}| {:>4} {:>4} {:>4}", "", "F", "M", "N").unwrap();
    writeln!(out, "{:-<12}+{:-<16}", "", "").unwrap();
    for (label, pick) in [("s; dim H1", (|d: (usize, usize)| d.0) as fn(_) -> _), ("m; dim H0", |d| d.1)] {
        writeln!(
            out,
            "{:<12}| {:>4} {:>4} {:>4}",
            label,
            cell("F", pick),
            cell("M", pick),
            cell("N", pick)
        )
        .unwrap();
    }
    out
}

pub fn render_text(doc: &ReportDocument, dims_only: bool) -> String {
    let mut out = render_dims_table(doc);
    if dims_only {
        return out;
    }
    let fw = &doc.framework;
    writeln!(out).unwrap();
    writeln!(
        out,
        "framework: |V| = {}  |E| = {}  dim {}{}",
        fw.vertices,
        fw.edges,
        fw.dim,
        if fw.connected { "" } else { ", disconnected" }
    )
    .unwrap();
    writeln!(out, "mode: {}    input: {}", doc.mode, doc.input_digest).unwrap();
    let opt = |x: Option<usize>| x.map_or("n/a".to_string(), |d| d.to_string());
    writeln!(out, "rigid motions: {}    mechanisms: {}", opt(doc.rigid_dim), opt(doc.mechanism_dim)).unwrap();
    let r = &doc.ranks;
    writeln!(
        out,
        "ranks: phi* {}  pi* {}  theta {}  (H0: phi* {}  pi* {})",
        r.phi, r.pi, r.connecting, r.phi_h0, r.pi_h0
    )
    .unwrap();
    writeln!(out, "\nexactness").unwrap();
    for c in &doc.checks {
        writeln!(out, "  {:<4} {:<42} {:.3e}", c.verdict, c.name, c.residual).unwrap();
    }
    writeln!(out, "\ncounting rules").unwrap();
    for rule in &doc.counting {
        writeln!(
            out,
            "  {:<4} {:<18} expected {:>5}  computed {:>5}",
            rule.status, rule.name, rule.expected, rule.computed
        )
        .unwrap();
    }
    if let Some(chains) = &doc.chains {
        let mut list = |title: &str, vectors: &[Vec<String>]| {
            writeln!(out, "\n{title}").unwrap();
            for (i, v) in vectors.iter().enumerate() {
                writeln!(out, "  [{i}] {}", v.join(" ")).unwrap();
            }
        };
        list("H1 F generators", &chains.force_h1);
        list("H1 M generators", &chains.moment_h1);
        list("H1 N generators", &chains.anchored_h1);
        list("joint resultants", &chains.resultants);
        list("mechanisms", &chains.mechanisms);
    }
    writeln!(out, "\n{}", if doc.all_pass { "all checks pass" } else { "CHECK FAILED" }).unwrap();
    out
}
