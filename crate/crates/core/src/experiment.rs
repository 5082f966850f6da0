//! Batch experiments: independent seeded runs and their output artifacts.
//!
//! Layout of an output directory:
//!
//! ```text
//! summary.json        per-threshold first-hit generations and success counts
//! timing.csv          wall time per run
//! run_<r>/pareto.csv  final non-dominated set
//! run_<r>/stats.csv   per-generation statistics
//! run_<r>/timing.csv  per-generation wall time
//! run_<r>/best_*.qc   selected circuits
//! ```
//!
//! Everything except the timing files is a pure function of the configuration.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::evolve::{
    Evolution, EvolutionOutcome, EvolutionParams, Individual, ParamsError, Threshold,
};
use crate::fixtures::{canonical_grover_gate_count, grover_iterations, textbook_qft_gate_count};
use crate::gatelib::text::{parse, serialize, serialize_inline, ParseError};
use crate::problems::{Fitness, FourierOverall, Problem, ProblemError, ProblemKind};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("invalid parameters: {0}")]
    Params(#[from] ParamsError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("writing {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("writing {path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub qubits: u8,
    /// `params.seed` is the batch seed; each run derives its own.
    pub params: EvolutionParams,
    pub runs: usize,
    pub out_dir: PathBuf,
    pub thresholds: Vec<Threshold>,
    pub fourier_overall: FourierOverall,
    pub stop_early: bool,
}

impl RunConfig {
    /// Default parameters and thresholds for a problem.
    pub fn new(problem: ProblemKind, qubits: u8, out_dir: impl Into<PathBuf>) -> RunConfig {
        RunConfig {
            problem,
            qubits,
            params: EvolutionParams::default(),
            runs: 1,
            out_dir: out_dir.into(),
            thresholds: default_thresholds(problem, qubits),
            fourier_overall: FourierOverall::default(),
            stop_early: false,
        }
    }

    pub fn build_problem(&self) -> Result<Problem, ProblemError> {
        Ok(Problem::new(self.problem, self.qubits)?.with_fourier_overall(self.fourier_overall))
    }

    pub fn run_seed(&self, run: usize) -> u64 {
        derive_seed(self.params.seed, run as u64)
    }
}

/// Error bounds of 1e-3 (and 1e-2 for search), plus the 1e-3 bound at the
/// size of the known textbook circuit.
pub fn default_thresholds(problem: ProblemKind, n: u8) -> Vec<Threshold> {
    match problem {
        ProblemKind::Fourier => {
            let gates = textbook_qft_gate_count(n);
            vec![
                Threshold::errors("err_1e-3", 1e-3),
                Threshold::errors(format!("err_1e-3_gates_{gates}"), 1e-3).with_max_gates(gates),
            ]
        }
        ProblemKind::Grover => {
            let oracles = grover_iterations(n);
            let gates = canonical_grover_gate_count(n);
            vec![
                Threshold::errors("err_1e-2", 1e-2),
                Threshold::errors("err_1e-3", 1e-3),
                Threshold::errors(format!("err_1e-3_oracles_{oracles}_gates_{gates}"), 1e-3)
                    .with_max_gates(gates)
                    .with_max_oracles(oracles),
            ]
        }
    }
}

/// SplitMix64 over the batch seed and run index.
pub fn derive_seed(batch: u64, run: u64) -> u64 {
    let mut z = batch ^ run.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSummary {
    pub threshold: Threshold,
    /// First generation meeting the threshold, per run.
    pub first_hits: Vec<Option<usize>>,
    pub successes: usize,
    pub mean_first_hit: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub problem: ProblemKind,
    pub qubits: u8,
    pub runs: usize,
    pub params: EvolutionParams,
    pub fourier_overall: FourierOverall,
    pub run_seeds: Vec<u64>,
    pub thresholds: Vec<ThresholdSummary>,
}

/// Outcome of one run plus the timing that is kept out of the deterministic artifacts.
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    pub outcome: EvolutionOutcome,
    pub total_ms: f64,
}

/// Executes one seeded run without writing anything.
pub fn execute_run(
    config: &RunConfig,
    problem: &Problem,
    run: usize,
) -> Result<RunResult, ExperimentError> {
    let seed = config.run_seed(run);
    let params = EvolutionParams {
        seed,
        ..config.params.clone()
    };
    let outcome = Evolution::new(problem, params)?
        .thresholds(config.thresholds.clone())
        .stop_when_all_hit(config.stop_early)
        .run();
    let total_ms = outcome.stats.iter().map(|s| s.wall_ms).sum();
    Ok(RunResult {
        run,
        seed,
        outcome,
        total_ms,
    })
}

/// Runs the batch (in parallel across runs) and writes all artifacts.
pub fn run_experiment(config: &RunConfig) -> Result<Summary, ExperimentError> {
    let problem = config.build_problem()?;
    config.params.validate()?;
    fs::create_dir_all(&config.out_dir).map_err(io_err(&config.out_dir))?;

    let results: Vec<RunResult> = (0..config.runs)
        .into_par_iter()
        .map(|r| {
            let result = execute_run(config, &problem, r)?;
            write_run(config, &problem, &result)?;
            Ok(result)
        })
        .collect::<Result<_, ExperimentError>>()?;

    let summary = summarize(config, &results);
    let path = config.out_dir.join("summary.json");
    let json = serde_json::to_string_pretty(&summary).map_err(|source| ExperimentError::Json {
        path: path.clone(),
        source,
    })?;
    fs::write(&path, json + "\n").map_err(io_err(&path))?;

    let path = config.out_dir.join("timing.csv");
    let mut w = csv_writer(&path)?;
    let rows = std::iter::once(vec![
        "run".to_string(),
        "generations".to_string(),
        "total_ms".to_string(),
        "mean_ms_per_generation".to_string(),
    ])
    .chain(results.iter().map(|r| {
        let gens = r.outcome.stats.len().max(1);
        vec![
            r.run.to_string(),
            r.outcome.generations_run.to_string(),
            format!("{:.3}", r.total_ms),
            format!("{:.3}", r.total_ms / gens as f64),
        ]
    }));
    write_rows(&mut w, &path, rows)?;
    Ok(summary)
}

pub fn summarize(config: &RunConfig, results: &[RunResult]) -> Summary {
    let thresholds = config
        .thresholds
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let first_hits: Vec<Option<usize>> = results
                .iter()
                .map(|r| r.outcome.thresholds[i].first_hit)
                .collect();
            let hits: Vec<usize> = first_hits.iter().flatten().copied().collect();
            ThresholdSummary {
                threshold: t.clone(),
                successes: hits.len(),
                mean_first_hit: (!hits.is_empty())
                    .then(|| hits.iter().sum::<usize>() as f64 / hits.len() as f64),
                first_hits,
            }
        })
        .collect();
    Summary {
        problem: config.problem,
        qubits: config.qubits,
        runs: config.runs,
        params: config.params.clone(),
        fourier_overall: config.fourier_overall,
        run_seeds: results.iter().map(|r| r.seed).collect(),
        thresholds,
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, ExperimentError> {
    csv_writer_quoted(path, csv::QuoteStyle::Necessary)
}

fn csv_writer_quoted(
    path: &Path,
    style: csv::QuoteStyle,
) -> Result<csv::Writer<fs::File>, ExperimentError> {
    csv::WriterBuilder::new()
        .quote_style(style)
        .from_path(path)
        .map_err(|source| ExperimentError::Csv {
            path: path.to_path_buf(),
            source,
        })
}

fn write_rows<I>(w: &mut csv::Writer<fs::File>, path: &Path, rows: I) -> Result<(), ExperimentError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let wrap = |source| ExperimentError::Csv {
        path: path.to_path_buf(),
        source,
    };
    for row in rows {
        w.write_record(&row).map_err(wrap)?;
    }
    w.flush().map_err(io_err(path))
}

fn fitness_cells(f: &Fitness) -> Vec<String> {
    f.values().iter().map(|v| v.to_string()).collect()
}

/// Header for `pareto.csv`: objectives, total gate count, circuit.
pub fn pareto_header(problem: &Problem) -> Vec<String> {
    let mut h = problem.objective_labels();
    h.push("total_gates".into());
    h.push("circuit".into());
    h
}

pub fn pareto_row(entry: &Individual) -> Vec<String> {
    let mut row = fitness_cells(&entry.fitness);
    row.push(entry.fitness.total_gates().to_string());
    row.push(serialize_inline(&entry.genome));
    row
}

fn write_run(
    config: &RunConfig,
    problem: &Problem,
    result: &RunResult,
) -> Result<(), ExperimentError> {
    let dir = config.out_dir.join(format!("run_{}", result.run));
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let outcome = &result.outcome;

    let mut front = outcome.front.clone();
    front.sort_by(|a, b| {
        a.fitness
            .overall()
            .total_cmp(&b.fitness.overall())
            .then(a.fitness.total_gates().cmp(&b.fitness.total_gates()))
            .then(a.fitness.worst().total_cmp(&b.fitness.worst()))
    });
    let path = dir.join("pareto.csv");
    // circuit cells are always quoted
    let mut w = csv_writer_quoted(&path, csv::QuoteStyle::NonNumeric)?;
    write_rows(
        &mut w,
        &path,
        std::iter::once(pareto_header(problem)).chain(front.iter().map(pareto_row)),
    )?;

    let path = dir.join("stats.csv");
    let mut w = csv_writer(&path)?;
    let mut header: Vec<String> = [
        "generation",
        "best_overall",
        "best_worst",
        "population",
        "elites",
    ]
    .map(String::from)
    .to_vec();
    header.extend(
        config
            .thresholds
            .iter()
            .map(|t| format!("min_gates_{}", t.name)),
    );
    let rows = outcome.stats.iter().map(|s| {
        let mut row = vec![
            s.generation.to_string(),
            s.best_overall.to_string(),
            s.best_worst.to_string(),
            s.population.to_string(),
            s.elites.to_string(),
        ];
        row.extend(
            s.min_gates
                .iter()
                .map(|g| g.map_or(String::new(), |g| g.to_string())),
        );
        row
    });
    write_rows(&mut w, &path, std::iter::once(header).chain(rows))?;

    let path = dir.join("timing.csv");
    let mut w = csv_writer(&path)?;
    let rows = outcome
        .stats
        .iter()
        .map(|s| vec![s.generation.to_string(), format!("{:.3}", s.wall_ms)]);
    write_rows(
        &mut w,
        &path,
        std::iter::once(vec!["generation".to_string(), "wall_ms".to_string()]).chain(rows),
    )?;

    if let Some(best) = front.first() {
        write_circuit(
            &dir.join("best_overall.qc"),
            "lowest overall error in the final front",
            best,
        )?;
    }
    for report in &outcome.thresholds {
        if let Some(champion) = &report.champion {
            let note = format!(
                "fewest gates meeting {} (first met in generation {})",
                report.threshold.name,
                report.first_hit.unwrap_or_default()
            );
            write_circuit(
                &dir.join(format!("best_{}.qc", report.threshold.name)),
                &note,
                champion,
            )?;
        }
    }
    Ok(())
}

fn write_circuit(path: &Path, note: &str, entry: &Individual) -> Result<(), ExperimentError> {
    let values: Vec<String> = fitness_cells(&entry.fitness);
    let text = format!(
        "# {note}\n# fitness: {}\n{}",
        values.join(" "),
        serialize(&entry.genome)
    );
    fs::write(path, text).map_err(io_err(path))
}

/// Parses a circuit file and evaluates it on `problem`.
pub fn evaluate_file(path: &Path, problem: &Problem) -> Result<Fitness, ExperimentError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let genome = parse(&text, problem.qubits()).map_err(|source| ExperimentError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(problem.evaluate(&genome)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_differ_per_run() {
        let seeds: Vec<u64> = (0..100).map(|r| derive_seed(42, r)).collect();
        let mut uniq = seeds.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), seeds.len());
        assert_eq!(derive_seed(42, 3), derive_seed(42, 3));
        assert_ne!(derive_seed(42, 3), derive_seed(43, 3));
    }

    #[test]
    fn default_threshold_names() {
        let names: Vec<String> = default_thresholds(ProblemKind::Grover, 3)
            .into_iter()
            .map(|t| t.name)
            .collect();
        assert_eq!(
            names,
            ["err_1e-2", "err_1e-3", "err_1e-3_oracles_2_gates_19"]
        );
        let f = default_thresholds(ProblemKind::Fourier, 3);
        assert_eq!(f[1].max_gates, Some(10));
    }
}
