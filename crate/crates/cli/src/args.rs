use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use momentframe::linalg::parse_rational;
use momentframe::{Mode, Rational};

#[derive(Debug, Parser)]
#[command(name = "momentframe", version, about = "Force, moment and anchored cosheaf homology of frameworks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology table, exactness checks and counting rules for one framework.
    Analyze {
        input: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        /// Emit the versioned JSON document instead of text.
        #[arg(long)]
        json: bool,
        /// Only print the homology table.
        #[arg(long)]
        dims_only: bool,
        /// Include generator chains (self-stresses, resultants, mechanisms).
        #[arg(long)]
        chains: bool,
        /// Also write the report to this file.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Perturb the framework repeatedly and tabulate dimensions and ranks as CSV.
    Scan {
        input: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        /// Comma-separated magnitudes, decimal or p/q.
        #[arg(short, long = "magnitude", default_value = "0")]
        magnitudes: MagnitudeList,
        /// Comma-separated seeds or an inclusive range `a..b`.
        #[arg(short, long, default_value = "0")]
        seeds: SeedList,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Draw a homology generator as SVG.
    Svg {
        input: PathBuf,
        #[arg(long, default_value = "exact")]
        mode: Mode,
        /// `F`, `M`, `N` or `Nperp` (anchored stresses orthogonal to the
        /// image of the moment frame), then `:index`.
        #[arg(long, short, default_value = "Nperp:0")]
        generator: GeneratorSpec,
        /// Omit numeric labels.
        #[arg(long)]
        no_svg_values: bool,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write a corpus framework in the text format.
    Generate {
        /// bar, triangle, square, box3d, random2d, random3d or desargues
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perspective scale for `desargues`.
        #[arg(long, default_value = "1/2")]
        t: String,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MagnitudeList(pub Vec<Rational>);

impl FromStr for MagnitudeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|item| parse_rational(item.trim()).ok_or_else(|| format!("bad magnitude {item:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(MagnitudeList)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedList(pub Vec<u64>);

impl FromStr for SeedList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad seed {t:?}: {e}"));
        if let Some((a, b)) = s.split_once("..") {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty seed range {s:?}"));
            }
            return Ok(SeedList((a..=b).collect()));
        }
        s.split(',').map(parse).collect::<Result<Vec<_>, _>>().map(SeedList)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSpace {
    Force,
    Moment,
    Anchored,
    AnchoredPerp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub space: GeneratorSpace,
    pub index: usize,
}

impl FromStr for GeneratorSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (space, index) = s.split_once(':').unwrap_or((s, "0"));
        let space = match space {
            "F" => GeneratorSpace::Force,
            "M" => GeneratorSpace::Moment,
            "N" => GeneratorSpace::Anchored,
            "Nperp" => GeneratorSpace::AnchoredPerp,
            other => return Err(format!("unknown generator space {other:?}")),
        };
        let index = index.parse().map_err(|e| format!("bad generator index {index:?}: {e}"))?;
        Ok(GeneratorSpec { space, index })
    }
}
