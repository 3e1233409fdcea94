//! The Monte Carlo driver: runs the trials, renders the trial CSV, and
//! derives summary statistics that are exactly recomputable from the CSV.
//!
//! Output discipline: floats are rendered with 9 significant digits in
//! scientific notation ('.' separator, '\n' newlines), and the summary is
//! computed from the *rendered* values, so re-deriving the statistics from
//! the CSV reproduces the summary byte for byte. Wall-clock measurements
//! never reach the outputs; the `time_ratio` column compares deterministic
//! evaluation counts instead.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::generate::generate_instance;
use crate::trial::{run_trial, TrialRecord};
use crate::HarnessError;

pub const CSV_HEADER: &str = "trial_index,s1,s2,size_product,value_opt,value_greedy,value_heur,\
value_rand,ratio_greedy,ratio_heur,ratio_rand,time_ratio";

/// 9-significant-digit rendering used for every float cell.
pub fn fmt_sig9(x: f64) -> String {
    format!("{x:.8e}")
}

fn opt_cell(x: Option<f64>) -> String {
    x.map(fmt_sig9).unwrap_or_default()
}

/// Round-trips a value through its rendered form; summary inputs go
/// through this so the summary is recomputable from the CSV exactly.
fn rendered(x: f64) -> f64 {
    fmt_sig9(x).parse().expect("rendered floats parse back")
}

/// Mean and population variance of the optimality ratio for one method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodStats {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
}

fn method_stats(ratios: &[f64]) -> Option<MethodStats> {
    if ratios.is_empty() {
        return None;
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let variance = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
    Some(MethodStats {
        count: ratios.len(),
        mean,
        variance,
    })
}

/// Mean evaluation-count time ratio for one problem size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeTimeRatio {
    pub size_product: usize,
    pub count: usize,
    pub mean_time_ratio: f64,
}

/// Aggregate statistics over the trial set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub trials_with_optimal: usize,
    pub greedy: Option<MethodStats>,
    pub heuristic: Option<MethodStats>,
    pub random: Option<MethodStats>,
    pub time_ratio_by_size: Vec<SizeTimeRatio>,
}

/// Full experiment output: records for in-process consumers, plus the two
/// rendered artifacts.
pub struct ExperimentOutput {
    pub records: Vec<TrialRecord>,
    pub csv: String,
    pub summary: Summary,
    pub summary_json: String,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let mut records = Vec::with_capacity(config.trials);
    for i in 0..config.trials {
        let instance = generate_instance(config.seed, i as u64, config)?;
        records.push(run_trial(&instance, config, i)?);
    }
    let csv = render_csv(&records);
    let summary = summarize(&records);
    let summary_json = format!(
        "{}\n",
        serde_json::to_string_pretty(&summary).expect("summary serializes")
    );
    Ok(ExperimentOutput {
        records,
        csv,
        summary,
        summary_json,
    })
}

pub fn render_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let row = [
            r.trial_index.to_string(),
            r.s1.to_string(),
            r.s2.to_string(),
            r.size_product.to_string(),
            opt_cell(r.optimal.as_ref().map(|m| m.total)),
            opt_cell(r.greedy.as_ref().map(|m| m.total)),
            opt_cell(r.heuristic.as_ref().map(|m| m.total)),
            opt_cell(r.random.as_ref().map(|m| m.total)),
            opt_cell(r.ratio_greedy),
            opt_cell(r.ratio_heur),
            opt_cell(r.ratio_rand),
            opt_cell(r.time_ratio),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Statistics over the rendered ratio values, in trial order.
pub fn summarize(records: &[TrialRecord]) -> Summary {
    let collect = |pick: fn(&TrialRecord) -> Option<f64>| -> Vec<f64> {
        records.iter().filter_map(pick).map(rendered).collect()
    };
    let greedy = collect(|r| r.ratio_greedy);
    let heuristic = collect(|r| r.ratio_heur);
    let random = collect(|r| r.ratio_rand);

    let mut sizes: Vec<usize> = records
        .iter()
        .filter(|r| r.time_ratio.is_some())
        .map(|r| r.size_product)
        .collect();
    sizes.sort_unstable();
    sizes.dedup();
    let time_ratio_by_size = sizes
        .into_iter()
        .map(|size| {
            let ratios: Vec<f64> = records
                .iter()
                .filter(|r| r.size_product == size)
                .filter_map(|r| r.time_ratio)
                .map(rendered)
                .collect();
            SizeTimeRatio {
                size_product: size,
                count: ratios.len(),
                mean_time_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
            }
        })
        .collect();

    Summary {
        trials: records.len(),
        trials_with_optimal: records.iter().filter(|r| r.optimal.is_some()).count(),
        greedy: method_stats(&greedy),
        heuristic: method_stats(&heuristic),
        random: method_stats(&random),
        time_ratio_by_size,
    }
}

/// Writes `trials.csv` and `summary.json` under `dir`, creating it first.
pub fn write_outputs(output: &ExperimentOutput, dir: &Path) -> Result<(), HarnessError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| HarnessError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let write = |name: &str, content: &str| -> Result<(), HarnessError> {
        let path = dir.join(name);
        let mut file = std::fs::File::create(&path)
            .map_err(|e| HarnessError::Io(format!("cannot create {}: {e}", path.display())))?;
        file.write_all(content.as_bytes())
            .map_err(|e| HarnessError::Io(format!("cannot write {}: {e}", path.display())))
    };
    write("trials.csv", &output.csv)?;
    write("summary.json", &output.summary_json)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> ExperimentConfig {
        ExperimentConfig {
            trials: 4,
            seed: 123,
            ..Default::default()
        }
    }

    #[test]
    fn csv_has_header_and_one_row_per_trial() {
        let mut config = tiny_config();
        config.trials = 1;
        let out = run_experiment(&config).unwrap();
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1].split(',').count(), 12);
    }

    #[test]
    fn summary_recomputes_from_the_csv_exactly() {
        let out = run_experiment(&tiny_config()).unwrap();
        // parse ratios back out of the CSV and recompute
        let mut greedy = Vec::new();
        for line in out.csv.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            if !cells[8].is_empty() {
                greedy.push(cells[8].parse::<f64>().unwrap());
            }
        }
        let n = greedy.len() as f64;
        let mean = greedy.iter().sum::<f64>() / n;
        let var = greedy.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / n;
        let stats = out.summary.greedy.as_ref().unwrap();
        assert_eq!(stats.count, greedy.len());
        assert_eq!(stats.mean, mean);
        assert_eq!(stats.variance, var);
    }

    #[test]
    fn reruns_are_byte_identical() {
        let config = tiny_config();
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a.csv, b.csv);
        assert_eq!(a.summary_json, b.summary_json);
    }

    #[test]
    fn sig9_formatting() {
        assert_eq!(fmt_sig9(std::f64::consts::LN_2), "6.93147181e-1");
        assert_eq!(fmt_sig9(1.0), "1.00000000e0");
        assert_eq!(fmt_sig9(0.0), "0.00000000e0");
        assert_eq!(fmt_sig9(-12345.6789), "-1.23456789e4");
    }

    #[test]
    fn oversized_trials_leave_optimal_cells_empty() {
        let config = ExperimentConfig {
            trials: 2,
            seed: 77,
            r1_range: [4, 4],
            d_range: [4, 4],
            e_req_range: [2, 2],
            ..Default::default()
        };
        let out = run_experiment(&config).unwrap();
        assert_eq!(out.summary.trials_with_optimal, 0);
        assert!(out.summary.greedy.is_none());
        for line in out.csv.lines().skip(1) {
            let cells: Vec<&str> = line.split(',').collect();
            assert_eq!(cells.len(), 12);
            assert!(cells[4].is_empty(), "value_opt must be empty");
            assert!(cells[8].is_empty() && cells[11].is_empty());
            assert!(!cells[5].is_empty(), "greedy still runs");
        }
    }

    #[test]
    fn sequence_mode_experiment_runs_and_reproduces() {
        let config = ExperimentConfig {
            trials: 3,
            seed: 9,
            mode: crate::config::SolveMode::Sequence,
            per_time_cap: Some(1),
            max_active_times: Some(1),
            ..Default::default()
        };
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a.csv, b.csv);
        for record in &a.records {
            let ratio = record.ratio_greedy.unwrap();
            assert!((0.0..=1.0 + 1e-12).contains(&ratio));
        }
    }

    #[test]
    fn outputs_land_on_disk() {
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&tiny_config()).unwrap();
        write_outputs(&out, dir.path()).unwrap();
        let csv = std::fs::read_to_string(dir.path().join("trials.csv")).unwrap();
        assert_eq!(csv, out.csv);
        let json = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        assert_eq!(json, out.summary_json);
    }
}
