use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use qcevo_core::evolve::EvolutionParams;
use qcevo_core::experiment::{evaluate_file, run_experiment, RunConfig};
use qcevo_core::{FourierOverall, ProblemKind};

/// Evolve quantum circuits for the Fourier or Grover problem, or evaluate a
/// circuit file.
#[derive(Debug, Parser)]
#[command(name = "qcevo", version)]
struct Args {
    /// Problem to solve: fourier or grover.
    #[arg(long)]
    problem: ProblemKind,
    /// Register width.
    #[arg(long, default_value_t = 3)]
    qubits: u8,
    /// Population size.
    #[arg(long, default_value_t = 1000)]
    pop: usize,
    /// Generations per run.
    #[arg(long, default_value_t = 3000)]
    gens: usize,
    /// Independent runs in the batch.
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Batch seed; per-run seeds are derived from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Expected mutation count.
    #[arg(long, default_value_t = 2.0)]
    emc: f64,
    /// Expected sequence length.
    #[arg(long, default_value_t = 2.0)]
    esl: f64,
    /// Selection pressure in exp(-alpha * rank).
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Maximum number of elites carried over each generation.
    #[arg(long, default_value_t = 100)]
    elite: usize,
    /// Mean length of initial genomes.
    #[arg(long = "init-len", default_value_t = 30.0)]
    init_len: f64,
    /// Manhattan fitness distance below which elites are thinned.
    #[arg(long = "dedup-dist", default_value_t = 0.1)]
    dedup_dist: f64,
    /// Output directory for batch artifacts.
    #[arg(long, default_value = "qcevo-out")]
    out: PathBuf,
    /// Evaluate this circuit file instead of running a search.
    #[arg(long)]
    evaluate: Option<PathBuf>,
    /// Aggregation used for the Fourier overall error.
    #[arg(long = "fourier-overall", default_value = "sum-outside")]
    fourier_overall: FourierOverall,
    /// Stop a run as soon as every success threshold has been met.
    #[arg(long = "early-stop")]
    early_stop: bool,
}

impl Args {
    fn config(&self) -> RunConfig {
        let mut config = RunConfig::new(self.problem, self.qubits, &self.out);
        config.params = EvolutionParams {
            population: self.pop,
            elite_capacity: self.elite,
            emc: self.emc,
            esl: self.esl,
            pressure: self.alpha,
            initial_length: self.init_len,
            elite_distance: self.dedup_dist,
            generations: self.gens,
            seed: self.seed,
        };
        config.runs = self.runs;
        config.fourier_overall = self.fourier_overall;
        config.stop_early = self.early_stop;
        config
    }
}

fn run(args: &Args) -> Result<()> {
    let config = args.config();
    if let Some(path) = &args.evaluate {
        let problem = config.build_problem()?;
        let fitness = evaluate_file(path, &problem)?;
        for (label, value) in problem.objective_labels().iter().zip(fitness.values()) {
            println!("{label}={value}");
        }
        println!("total_gates={}", fitness.total_gates());
        return Ok(());
    }

    let summary = run_experiment(&config)
        .with_context(|| format!("experiment writing to {}", config.out_dir.display()))?;
    println!(
        "{} runs of {} on {} qubits, {} generations each; artifacts in {}",
        summary.runs,
        summary.problem,
        summary.qubits,
        summary.params.generations,
        config.out_dir.display()
    );
    for t in &summary.thresholds {
        let mean = t
            .mean_first_hit
            .map_or_else(|| "-".to_string(), |m| format!("{m:.1}"));
        println!(
            "  {:<32} {:>4}/{} runs, mean first hit {}",
            t.threshold.name, t.successes, summary.runs, mean
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
