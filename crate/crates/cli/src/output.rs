//! CSV/JSON writers. Floats are written with 9 significant digits so the
//! files are stable across runs and platforms.

use std::fs;
use std::path::{Path, PathBuf};

use elastic_motion::analytics::DistanceMatrix;
use elastic_motion::Trajectory;

use crate::error::{io_err, Result};
use crate::pipeline::{AlignedTrial, CohortReport, DistanceRow, RollingSeries};

/// `%.9g`-style formatting; `NaN` and infinities are spelled out.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}

fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    fs::write(path, contents).map_err(io_err(path))?;
    Ok(path.to_path_buf())
}

fn csv_string(rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("utf8 csv"))
}

pub fn write_mean(path: &Path, mean: &Trajectory) -> Result<PathBuf> {
    let header = vec!["t".to_string(), "value".to_string()];
    let rows = mean.grid().points().iter().zip(mean.values()).map(|(t, v)| vec![fmt_g9(*t), fmt_g9(*v)]);
    write_file(path, &csv_string(std::iter::once(header).chain(rows))?)
}

pub fn write_aligned(path: &Path, aligned: &[AlignedTrial]) -> Result<PathBuf> {
    let header = ["participant_id", "trial", "cohort", "t", "warp", "aligned"].map(String::from).to_vec();
    let rows = aligned.iter().flat_map(|a| {
        let pts = a.signal.grid().points();
        (0..pts.len()).map(move |k| {
            vec![
                a.participant_id.clone(),
                a.trial.clone(),
                a.cohort.to_string(),
                fmt_g9(pts[k]),
                fmt_g9(a.warp.values()[k]),
                fmt_g9(a.signal.values()[k]),
            ]
        })
    });
    write_file(path, &csv_string(std::iter::once(header).chain(rows))?)
}

pub fn write_distances(path: &Path, rows: &[DistanceRow]) -> Result<PathBuf> {
    let header = ["participant_id", "trial", "cohort", "amplitude", "phase", "cosine"].map(String::from).to_vec();
    let body = rows.iter().map(|r| {
        vec![
            r.participant_id.clone(),
            r.trial.clone(),
            r.cohort.to_string(),
            fmt_g9(r.amplitude),
            fmt_g9(r.phase),
            fmt_g9(r.cosine),
        ]
    });
    write_file(path, &csv_string(std::iter::once(header).chain(body))?)
}

pub fn write_matrix(path: &Path, m: &DistanceMatrix) -> Result<PathBuf> {
    let header = std::iter::once("label".to_string()).chain(m.labels.iter().cloned()).collect();
    let body = (0..m.len())
        .map(|i| std::iter::once(m.labels[i].clone()).chain(m.row(i).iter().map(|v| fmt_g9(*v))).collect());
    write_file(path, &csv_string(std::iter::once(header).chain(body))?)
}

/// Makes a participant id safe to use as a file name.
pub fn file_stem_for(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect()
}

/// One file per participant under `dir`.
pub fn write_rolling(dir: &Path, series: &[RollingSeries]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut start = 0;
    while start < series.len() {
        let pid = &series[start].participant_id;
        let end = start + series[start..].iter().take_while(|s| &s.participant_id == pid).count();
        let header = ["trial", "window_start", "t_center", "correlation"].map(String::from).to_vec();
        let body = series[start..end].iter().flat_map(|s| {
            s.correlation.iter().enumerate().map(move |(k, c)| {
                vec![s.trial.clone(), k.to_string(), fmt_g9(s.t_center[k]), fmt_g9(*c)]
            })
        });
        let path = dir.join(format!("{}.csv", file_stem_for(pid)));
        written.push(write_file(&path, &csv_string(std::iter::once(header).chain(body))?)?);
        start = end;
    }
    Ok(written)
}

pub fn write_report(path: &Path, report: &CohortReport) -> Result<PathBuf> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    write_file(path, &text)
}

pub fn read_report(path: &Path) -> Result<CohortReport> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_formatting() {
        assert_eq!(fmt_g9(0.0), "0");
        assert_eq!(fmt_g9(1.0), "1");
        assert_eq!(fmt_g9(0.1), "0.1");
        assert_eq!(fmt_g9(-2.5), "-2.5");
        assert_eq!(fmt_g9(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_g9(123456789.4), "123456789");
        assert_eq!(fmt_g9(1.5e9), "1.5e+09");
        assert_eq!(fmt_g9(1.23456789012e-7), "1.23456789e-07");
        assert_eq!(fmt_g9(0.000123), "0.000123");
        assert_eq!(fmt_g9(f64::NAN), "NaN");
    }

    #[test]
    fn g9_round_trips_to_nine_digits() {
        for &x in &[std::f64::consts::PI, 1e-12, 6.02214076e23, -0.00731] {
            let back: f64 = fmt_g9(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-8, "{x} -> {}", fmt_g9(x));
        }
    }

    #[test]
    fn file_stems() {
        assert_eq!(file_stem_for("P01"), "P01");
        assert_eq!(file_stem_for("a/b c"), "a_b_c");
    }
}
