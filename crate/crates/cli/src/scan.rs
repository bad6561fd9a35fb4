use momentframe::les::{perturbation_scan, ScanRow};
use momentframe::linalg::format_rational;
use momentframe::{Framework, Rational, Scalar};

pub const CSV_HEADER: [&str; 12] = [
    "magnitude",
    "seed",
    "h1_f",
    "h0_f",
    "h1_m",
    "h0_m",
    "h1_n",
    "h0_n",
    "rank_phi",
    "rank_pi",
    "rank_connecting",
    "status",
];

fn record(row: &ScanRow) -> Vec<String> {
    let mut out = vec![format_rational(&row.magnitude), row.seed.to_string()];
    match &row.outcome {
        Ok(r) => {
            let d = r.dims;
            out.extend(
                [
                    d.force.h1,
                    d.force.h0,
                    d.moment.h1,
                    d.moment.h0,
                    d.anchored.h1,
                    d.anchored.h0,
                    r.rank_phi,
                    r.rank_pi,
                    r.rank_connecting,
                ]
                .iter()
                .map(usize::to_string),
            );
            out.push("ok".to_string());
        }
        Err(message) => {
            out.extend(std::iter::repeat_n(String::new(), 9));
            out.push(format!("invalid: {message}"));
        }
    }
    out
}

pub fn rows_to_csv(rows: &[ScanRow]) -> Result<String, csv::Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    for row in rows {
        writer.write_record(record(row))?;
    }
    let bytes = writer.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn scan_csv<S: Scalar>(f: &Framework, magnitudes: &[Rational], seeds: &[u64]) -> Result<String, csv::Error> {
    rows_to_csv(&perturbation_scan::<S>(f, magnitudes, seeds))
}
