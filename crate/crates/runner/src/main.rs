use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Arg, ArgMatches, Command};

use horolab_runner::config::ExperimentConfig;
use horolab_runner::{execute, experiments, rebase_outputs, RunnerError};

fn cli() -> Command {
    let mut cmd = Command::new("horolab")
        .about("Experiments on nonexpansive-map dynamics over Hilbert, Thompson and Poincare metrics")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for exp in experiments::registry() {
        cmd = cmd.subcommand(
            Command::new(exp.name())
                .about(exp.about())
                .arg(
                    Arg::new("config")
                        .long("config")
                        .value_name("PATH")
                        .required(true)
                        .value_parser(clap::value_parser!(PathBuf)),
                )
                .arg(
                    Arg::new("seed")
                        .long("seed")
                        .value_name("INT")
                        .value_parser(clap::value_parser!(u64)),
                )
                .arg(
                    Arg::new("out-dir")
                        .long("out-dir")
                        .value_name("PATH")
                        .value_parser(clap::value_parser!(PathBuf)),
                ),
        );
    }
    cmd
}

fn run(kind: &str, matches: &ArgMatches) -> Result<i32, RunnerError> {
    let config_path: &PathBuf = matches.get_one("config").expect("required");
    let text = std::fs::read_to_string(config_path).map_err(|e| RunnerError::ConfigInvalid {
        path: config_path.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut config = ExperimentConfig::from_json(&text)?;
    if config.experiment.kind_name() != kind {
        return Err(RunnerError::ConfigInvalid {
            path: "experiment.kind".into(),
            reason: format!(
                "config describes a {} experiment but the {kind} subcommand was invoked",
                config.experiment.kind_name()
            ),
        });
    }
    if let Some(seed) = matches.get_one::<u64>("seed") {
        config.seed = *seed;
    }
    if let Some(dir) = matches.get_one::<PathBuf>("out-dir") {
        rebase_outputs(&mut config, dir)?;
    }

    let started = Instant::now();
    let summary = execute(&config)?;
    // Timing stays out of the report to keep outputs byte-deterministic.
    eprintln!("wall clock: {:.3}s", started.elapsed().as_secs_f64());

    for line in &summary.lines {
        println!("{line}");
    }
    if config.output.report.is_none() {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary.report).expect("report serializes")
        );
    }
    Ok(summary.exit_code)
}

fn main() -> ExitCode {
    let matches = cli().get_matches();
    let (kind, sub) = matches.subcommand().expect("subcommand required");
    match run(kind, sub) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
