//! JSON targets and reports, CSV trajectories and per-axis plot data.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::models::{Model, Point};
use crate::steer::{from_blade_map, SteerReport};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetFile {
    model: Option<Model>,
    point: BTreeMap<String, f64>,
}

/// Parses `{"model": "36"|"47", "point": {"e1": …, "e12": …}}`, given either
/// inline or as a path. `model` overrides the model named in the JSON.
pub fn parse_target(source: &str, model: Option<Model>) -> Result<Point> {
    let text = if source.trim_start().starts_with('{') {
        source.to_string()
    } else {
        fs::read_to_string(source)?
    };
    let file: TargetFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("target JSON: {e}")))?;
    let model = model.or(file.model).ok_or_else(|| {
        Error::Parse("no model given (set \"model\" in the JSON or pass --model)".to_string())
    })?;
    let q = from_blade_map(model.algebra_dim(), &file.point)?;
    Point::from_multivector(model, q)
}

pub fn read_report(path: impl AsRef<Path>) -> Result<SteerReport> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_report_json<W: Write>(report: &SteerReport, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out)?;
    Ok(())
}

/// Columns `t`, then the model's coordinates.
pub fn write_trajectory_csv<W: Write>(report: &SteerReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t"];
    header.extend(report.model.coordinate_names());
    w.write_record(&header)?;
    for s in &report.samples {
        let mut row = vec![s.t.to_string()];
        row.extend(s.coords.iter().map(|c| c.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Coordinate groups written by [`write_plot_data`]: file stem and column
/// range into the coordinate tuple.
fn plot_groups(model: Model) -> &'static [(&'static str, usize, usize)] {
    match model {
        Model::M36 => &[("x", 0, 3), ("z", 3, 6)],
        Model::M47 => &[("x", 0, 1), ("l", 1, 4), ("y", 4, 7)],
    }
}

/// One CSV per coordinate group (`x.csv`, `z.csv` or `x.csv`, `l.csv`,
/// `y.csv`), each with a leading `t` column. Returns the files written.
pub fn write_plot_data(report: &SteerReport, dir: impl AsRef<Path>) -> Result<Vec<std::path::PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let names = report.model.coordinate_names();
    let mut written = Vec::new();
    for &(stem, lo, hi) in plot_groups(report.model) {
        let path = dir.join(format!("{stem}.csv"));
        let mut w = csv::Writer::from_path(&path)?;
        let mut header = vec!["t"];
        header.extend(&names[lo..hi]);
        w.write_record(&header)?;
        for s in &report.samples {
            let mut row = vec![s.t.to_string()];
            row.extend(s.coords[lo..hi].iter().map(|c| c.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_target() {
        let p = parse_target(
            r#"{"model": "36", "point": {"e1": 2, "e2": -1, "e3": 3, "e12": 1, "e13": -2, "e23": -2}}"#,
            None,
        )
        .unwrap();
        assert_eq!(p.invariants().to_vec(), vec![14.0, -9.0, 3.0]);
    }

    #[test]
    fn model_override_and_missing_model() {
        let src = r#"{"point": {"e1": 1}}"#;
        assert!(matches!(parse_target(src, None), Err(Error::Parse(_))));
        assert_eq!(parse_target(src, Some(Model::M47)).unwrap().model(), Model::M47);
    }

    #[test]
    fn rejects_bad_blades_and_shapes() {
        assert!(parse_target(r#"{"model": "36", "point": {"e4": 1}}"#, None).is_err());
        assert!(matches!(
            parse_target(r#"{"model": "47", "point": {"e23": 1}}"#, None),
            Err(Error::InvalidPoint(_))
        ));
        assert!(parse_target("{not json", None).is_err());
    }
}
