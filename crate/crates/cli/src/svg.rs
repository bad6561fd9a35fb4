//! SVG 1.1 diagrams of homology generators drawn over the framework.

use std::fmt::Write as _;

use momentframe::cosheaf::{Cosheaf, Degree};
use momentframe::les::{FrameAnalysis, LesError};
use momentframe::{Framework, Scalar};
use thiserror::Error;

use crate::args::{GeneratorSpace, GeneratorSpec};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 800.0;
const MARGIN: f64 = 100.0;
/// Length of the largest resultant arrow.
const ARROW_PX: f64 = 70.0;
const ARROW_COLOR: &str = "#1e9e3a";
const LABEL_COLOR: &str = "#444444";
const TENSION_COLOR: &str = "#c0392b";
const COMPRESSION_COLOR: &str = "#2c5aa0";

#[derive(Debug, Error)]
pub enum SvgError {
    #[error("{space} has no generators")]
    NoGenerators { space: &'static str },
    #[error("generator index {index} out of range: {space} has {count} generators")]
    IndexOutOfRange {
        space: &'static str,
        index: usize,
        count: usize,
    },
    #[error(transparent)]
    Les(#[from] LesError),
}

fn space_name(space: GeneratorSpace) -> &'static str {
    match space {
        GeneratorSpace::Force => "H1 F",
        GeneratorSpace::Moment => "H1 M",
        GeneratorSpace::Anchored => "H1 N",
        GeneratorSpace::AnchoredPerp => "H1 N orthogonal to im pi*",
    }
}

/// Four significant digits, switching to exponent form for extreme magnitudes.
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".to_string() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-3..5).contains(&exponent) {
        return format!("{x:.3e}");
    }
    let decimals = (3 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

struct Diagram {
    title: String,
    points: Vec<[f64; 2]>,
    edges: Vec<(usize, usize)>,
    /// Signed edge weight used for colour and stroke width (axial generators).
    axial: Option<Vec<f64>>,
    edge_labels: Vec<String>,
    arrows: Vec<[f64; 2]>,
}

/// Oblique projection for 3D: depth recedes up and to the right.
fn project(p: &[f64]) -> [f64; 2] {
    match p {
        [x, y] => [*x, *y],
        [x, y, z] => {
            let (s, c) = std::f64::consts::FRAC_PI_6.sin_cos();
            [x + 0.5 * z * c, y + 0.5 * z * s]
        }
        _ => [0.0, 0.0],
    }
}

fn pick<S: Scalar>(
    space: GeneratorSpace,
    vectors: Vec<Vec<S>>,
    index: usize,
) -> Result<Vec<S>, SvgError> {
    let name = space_name(space);
    if vectors.is_empty() {
        return Err(SvgError::NoGenerators { space: name });
    }
    let count = vectors.len();
    vectors.into_iter().nth(index).ok_or(SvgError::IndexOutOfRange {
        space: name,
        index,
        count,
    })
}

fn edge_value_labels<S: Scalar>(cosheaf: &Cosheaf<S>, chain: &[S]) -> Vec<String> {
    let unpacked = cosheaf.unpack(Degree::One, chain).expect("generator lives in C1");
    unpacked
        .components
        .iter()
        .enumerate()
        .map(|(e, values)| {
            cosheaf
                .edge_labels(e)
                .iter()
                .zip(values)
                .map(|(l, v)| format!("{l}={}", sig4(v.to_f64())))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}

fn diagram<S: Scalar>(f: &Framework, spec: GeneratorSpec, values: bool) -> Result<Diagram, SvgError> {
    let analysis = FrameAnalysis::<S>::new(f)?;
    let system = analysis.system();
    let points: Vec<[f64; 2]> = (0..f.vertex_count())
        .map(|v| project(&f.position_as::<f64>(v)))
        .collect();
    let edges = f.edges().iter().map(|e| (e.tail, e.head)).collect();
    let (cosheaf, chain) = match spec.space {
        GeneratorSpace::Force => (system.force(), analysis.force_homology().h1.vectors().collect()),
        GeneratorSpace::Moment => (system.moment(), analysis.moment_homology().h1.vectors().collect()),
        GeneratorSpace::Anchored => (
            system.anchored_cosheaf(),
            analysis.anchored_homology().h1.vectors().collect(),
        ),
        GeneratorSpace::AnchoredPerp => (
            system.anchored_cosheaf(),
            analysis.pi_image_complement()?.vectors().collect(),
        ),
    };
    let chain = pick(spec.space, chain, spec.index)?;
    let axial = (spec.space == GeneratorSpace::Force).then(|| chain.iter().map(S::to_f64).collect());
    let arrows = match spec.space {
        GeneratorSpace::Anchored | GeneratorSpace::AnchoredPerp => analysis
            .resultant_of(&chain)?
            .chunks(f.dim())
            .map(|c| project(&c.iter().map(S::to_f64).collect::<Vec<_>>()))
            .collect(),
        _ => Vec::new(),
    };
    let edge_labels = if values {
        edge_value_labels(cosheaf, &chain)
    } else {
        vec![String::new(); f.edge_count()]
    };
    Ok(Diagram {
        title: format!("{} generator {}", space_name(spec.space), spec.index),
        points,
        edges,
        axial,
        edge_labels,
        arrows,
    })
}

pub fn render_svg<S: Scalar>(f: &Framework, spec: GeneratorSpec, values: bool) -> Result<String, SvgError> {
    Ok(draw(&diagram::<S>(f, spec, values)?))
}

fn draw(d: &Diagram) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in &d.points {
        for i in 0..2 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let span = [(hi[0] - lo[0]).max(1e-12), (hi[1] - lo[1]).max(1e-12)];
    let scale = ((WIDTH - 2.0 * MARGIN) / span[0]).min((HEIGHT - 2.0 * MARGIN) / span[1]);
    let offset = [
        (WIDTH - scale * span[0]) / 2.0,
        (HEIGHT - scale * span[1]) / 2.0,
    ];
    let to_px = |p: [f64; 2]| {
        [
            offset[0] + scale * (p[0] - lo[0]),
            HEIGHT - (offset[1] + scale * (p[1] - lo[1])),
        ]
    };

    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="{ARROW_COLOR}"/></marker></defs>"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="20" y="30" font-family="sans-serif" font-size="16">{}</text>"#,
        d.title
    )
    .unwrap();

    let max_axial = d
        .axial
        .as_ref()
        .map(|a| a.iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .unwrap_or(0.0);
    for (e, &(t, h)) in d.edges.iter().enumerate() {
        let (a, b) = (to_px(d.points[t]), to_px(d.points[h]));
        let (color, width) = match &d.axial {
            Some(values) if max_axial > 0.0 => {
                let v = values[e];
                let color = if v > 0.0 {
                    TENSION_COLOR
                } else if v < 0.0 {
                    COMPRESSION_COLOR
                } else {
                    "#999999"
                };
                (color, 1.5 + 4.5 * v.abs() / max_axial)
            }
            _ => ("#333333", 2.0),
        };
        writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="{width:.2}"/>"#,
            a[0], a[1], b[0], b[1]
        )
        .unwrap();
        if !d.edge_labels[e].is_empty() {
            writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle" fill="{LABEL_COLOR}">{}</text>"#,
                (a[0] + b[0]) / 2.0,
                (a[1] + b[1]) / 2.0 - 6.0,
                d.edge_labels[e]
            )
            .unwrap();
        }
    }

    let max_arrow = d.arrows.iter().fold(0.0f64, |m, a| m.max(a[0].hypot(a[1])));
    if max_arrow > 0.0 {
        for (v, a) in d.arrows.iter().enumerate() {
            let len = a[0].hypot(a[1]);
            if len <= 1e-12 * max_arrow {
                continue;
            }
            let p = to_px(d.points[v]);
            let k = ARROW_PX / max_arrow;
            writeln!(
                out,
                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{ARROW_COLOR}" stroke-width="2.5" marker-end="url(#arrow)"/>"#,
                p[0],
                p[1],
                p[0] + k * a[0],
                p[1] - k * a[1]
            )
            .unwrap();
        }
    }

    for (v, &p) in d.points.iter().enumerate() {
        let p = to_px(p);
        writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="black"/><text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{v}</text>"#,
            p[0],
            p[1],
            p[0] + 6.0,
            p[1] + 14.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
