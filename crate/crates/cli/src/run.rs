use std::fs;
use std::io::Write;
use std::path::Path;

use momentframe::framework::{make_desargues, make_named, parse_framework};
use momentframe::linalg::parse_rational;
use momentframe::{Framework, Mode, Rational};

use crate::args::{Cli, Command};
use crate::report::{build_report, render_text};
use crate::scan::scan_csv;
use crate::svg::render_svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

/// A failed command: what to print and which exit code to use.
struct Failure {
    code: i32,
    message: String,
}

fn invalid(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: message.to_string(),
    }
}

fn check_failed(message: impl ToString) -> Failure {
    Failure {
        code: EXIT_CHECK_FAILED,
        message: message.to_string(),
    }
}

fn read_framework(path: &Path, mode: Mode) -> Result<(Framework, Vec<u8>), Failure> {
    let bytes = fs::read(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| invalid(format!("{}: not UTF-8", path.display())))?;
    let f = parse_framework(&text, mode).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    Ok((f, bytes))
}

fn emit(out: &mut dyn Write, text: &str, file: Option<&Path>) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(invalid)?;
    if let Some(path) = file {
        fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

/// Runs one command, writing results to `out` and diagnostics to `err`, and
/// returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze {
            input,
            mode,
            json,
            dims_only,
            chains,
            out: file,
        } => {
            let (f, bytes) = read_framework(&input, mode)?;
            if !f.is_connected() {
                let _ = writeln!(err, "warning: framework is disconnected; rigid-motion checks are not applicable");
            }
            let doc = match mode {
                Mode::Exact => build_report::<Rational>(&f, &bytes, chains),
                Mode::Float => build_report::<f64>(&f, &bytes, chains),
            }
            .map_err(check_failed)?;
            let text = if json {
                let mut s = serde_json::to_string_pretty(&doc).map_err(invalid)?;
                s.push('\n');
                s
            } else {
                render_text(&doc, dims_only)
            };
            emit(out, &text, file.as_deref())?;
            for name in doc.failed_checks() {
                let _ = writeln!(err, "check failed: {name}");
            }
            Ok(if doc.all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Scan {
            input,
            mode,
            magnitudes,
            seeds,
            out: file,
        } => {
            let (f, _) = read_framework(&input, mode)?;
            let csv = match mode {
                Mode::Exact => scan_csv::<Rational>(&f, &magnitudes.0, &seeds.0),
                Mode::Float => scan_csv::<f64>(&f, &magnitudes.0, &seeds.0),
            }
            .map_err(invalid)?;
            emit(out, &csv, file.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Svg {
            input,
            mode,
            generator,
            no_svg_values,
            out: file,
        } => {
            let (f, _) = read_framework(&input, mode)?;
            let svg = match mode {
                Mode::Exact => render_svg::<Rational>(&f, generator, !no_svg_values),
                Mode::Float => render_svg::<f64>(&f, generator, !no_svg_values),
            }
            .map_err(invalid)?;
            match file {
                Some(path) => fs::write(&path, svg).map_err(|e| invalid(format!("{}: {e}", path.display())))?,
                None => out.write_all(svg.as_bytes()).map_err(invalid)?,
            }
            Ok(EXIT_OK)
        }
        Command::Generate {
            name,
            seed,
            t,
            out: file,
        } => {
            let f = if name == "desargues" {
                let t = parse_rational(&t).ok_or_else(|| invalid(format!("bad scale {t:?}")))?;
                make_desargues(&t)
            } else {
                make_named(&name, seed)
            }
            .map_err(invalid)?;
            match file {
                Some(path) => fs::write(&path, f.to_text()).map_err(|e| invalid(format!("{}: {e}", path.display())))?,
                None => out.write_all(f.to_text().as_bytes()).map_err(invalid)?,
            }
            Ok(EXIT_OK)
        }
    }
}
