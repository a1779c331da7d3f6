use std::fs;
use std::path::{Path, PathBuf};

use super::path::ClusterPath;
use super::simulate::{SimulationReport, Summary};
use crate::error::{Error, Result};

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv buffer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv encoding: {e}"))
}

/// One row per model: mean and sd of RAND, TNR and TPR at the chosen grid
/// points. Undefined metrics are left empty.
pub fn summary_csv(report: &SimulationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "model",
        "graph",
        "estimator",
        "grid_size",
        "reps",
        "iterations",
        "rand_mean",
        "rand_sd",
        "tnr_mean",
        "tnr_sd",
        "tpr_mean",
        "tpr_sd",
    ])
    .map_err(csv_err)?;
    let h = &report.header;
    for m in &report.models {
        let mut row = vec![
            m.model.to_string(),
            m.graph.clone(),
            m.estimator.clone(),
            m.grid_size.to_string(),
            h.reps.to_string(),
            h.iterations.to_string(),
        ];
        for s in [&m.rand, &m.tnr, &m.tpr] {
            let Summary { mean, sd, .. } = *s;
            row.push(opt(mean));
            row.push(opt(sd));
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

/// Every fitted grid point, with a flag on the one chosen for its replicate.
pub fn scores_csv(report: &SimulationReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "model",
        "rep",
        "grid_index",
        "chosen",
        "hyperparameters",
        "rand",
        "tnr",
        "tpr",
        "clusters",
        "selected",
        "stream",
        "fell_back",
    ])
    .map_err(csv_err)?;
    for m in &report.models {
        for s in &m.scores {
            let chosen = m.chosen[s.rep].grid_index == s.grid_index;
            let hyper: Vec<String> = s
                .hyperparameters
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            w.write_record([
                m.model.to_string(),
                s.rep.to_string(),
                s.grid_index.to_string(),
                chosen.to_string(),
                hyper.join(";"),
                s.rand.to_string(),
                opt(s.tnr),
                opt(s.tpr),
                s.clusters.to_string(),
                s.selected.to_string(),
                s.stream.to_string(),
                s.fell_back.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    finish(w)
}

pub fn report_json(report: &SimulationReport) -> Result<String> {
    serde_json::to_string_pretty(report)
        .map_err(|e| Error::InvalidArgument(format!("json encoding: {e}")))
}

/// Writes `report.csv`, `scores.csv` and `report.json` into `dir`.
pub fn write_report(report: &SimulationReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = [
        ("report.csv", summary_csv(report)?),
        ("scores.csv", scores_csv(report)?),
        ("report.json", report_json(report)? + "\n"),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

/// Long-format path table: `grid_value, obs_id, a_1..a_p, cluster`, one row
/// per grid value and observation. Ids and cluster labels start at 1.
pub fn path_csv(path: &ClusterPath) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let p = path.entries.first().map_or(0, |e| e.a_hat.ncols());
    let mut header = vec!["grid_value".to_string(), "obs_id".to_string()];
    header.extend((1..=p).map(|j| format!("a_{j}")));
    header.push("cluster".into());
    w.write_record(&header).map_err(csv_err)?;
    for e in &path.entries {
        for i in 0..e.a_hat.nrows() {
            let mut row = vec![e.value.to_string(), (i + 1).to_string()];
            row.extend(e.a_hat.row(i).iter().map(|v| v.to_string()));
            row.push((e.clusters.labels()[i] + 1).to_string());
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::run_simulation;
    use crate::experiment::{
        EstimatorKind, GraphChoice, GridAxis, GridSpec, ModelSetup, SimulationConfig,
        SimulationSetting,
    };
    use crate::model::PriorSpec;

    fn tiny() -> SimulationReport {
        let setup = ModelSetup::new(
            PriorSpec::laplace(1.0, 1.0).unwrap(),
            GridSpec::new(vec![GridAxis::new("lambda1", 0.5, 2.0, 2).unwrap()]),
            GraphChoice::Full,
            EstimatorKind::Mean,
        )
        .unwrap();
        let mut cfg = SimulationConfig::desk_scale(SimulationSetting::new(6, 3).unwrap(), 1);
        cfg.reps = 2;
        cfg.iterations = 40;
        cfg.burn_in = 10;
        run_simulation(&cfg, &[setup]).unwrap()
    }

    #[test]
    fn summary_has_one_row_per_model() {
        let s = summary_csv(&tiny()).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("model,graph,estimator"));
        assert!(lines[1].starts_with("bscvc,full,mean,2,2,40,"));
    }

    #[test]
    fn scores_mark_one_choice_per_rep() {
        let s = scores_csv(&tiny()).unwrap();
        assert_eq!(s.lines().count(), 5);
        assert_eq!(s.lines().filter(|l| l.contains(",true,")).count(), 2);
    }

    #[test]
    fn json_keeps_field_order() {
        let j = report_json(&tiny()).unwrap();
        assert!(j.find("\"header\"").unwrap() < j.find("\"models\"").unwrap());
        let v: serde_json::Value = serde_json::from_str(&j).unwrap();
        assert_eq!(v["header"]["reference_iterations"], 50_000);
    }
}
