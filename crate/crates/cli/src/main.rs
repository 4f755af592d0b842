use clap::{Parser, Subcommand};

use exirt_cli::commands::{benchmark, cluster, explain, report, train};

/// Explain tree-ensemble classifiers by item response theory and benchmark
/// the resulting attribute ranks against permutation, leave-one-out and
/// information-gain baselines.
#[derive(Parser)]
#[command(name = "exirt", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a random forest or gradient boosting model on a dataset split.
    Train(train::TrainArgs),
    /// Produce one measure's attribute rank for a trained model.
    Explain(explain::ExplainArgs),
    /// Run the full benchmark described by a manifest.
    Benchmark(benchmark::BenchmarkArgs),
    /// Cluster dataset meta-properties and map them by correspondence analysis.
    Cluster(cluster::ClusterArgs),
    /// Summarize item parameters of a finished benchmark run per cluster.
    Report(report::ReportArgs),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Train(args) => train::run_train(args),
        Command::Explain(args) => explain::run_explain(args),
        Command::Benchmark(args) => match benchmark::run_benchmark(args) {
            Ok(outcome) => {
                for failure in &outcome.failures {
                    eprintln!("failed: {failure}");
                }
                println!(
                    "benchmark finished: {} job(s) ok, {} failed -> {}",
                    outcome.jobs.len(),
                    outcome.failures.len(),
                    outcome.out_dir.display()
                );
                std::process::exit(outcome.exit_code());
            }
            Err(e) => Err(e),
        },
        Command::Cluster(args) => cluster::run_cluster(args),
        Command::Report(args) => report::run_report(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
