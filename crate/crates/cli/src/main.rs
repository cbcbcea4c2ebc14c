mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use swarmroute::{
    brute_force_best, compare, render, run_ga, run_pso, Error, ExperimentConfig, Network,
};

use args::{Cli, Command, Endpoints, NetworkArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NoPathFound { .. } => 3,
        Error::Io { .. } | Error::Json(_) => 1,
        _ => 2,
    }
}

fn load_network(args: &NetworkArgs) -> swarmroute::Result<Network> {
    match &args.network {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            Ok(serde_json::from_str(&text)?)
        }
        None => Network::random(args.nodes, args.seed, &args.topology(), args.range()?),
    }
}

fn endpoints(ends: &Endpoints, pn: usize) -> (usize, usize) {
    (ends.source, ends.dest.unwrap_or(pn.saturating_sub(1)))
}

fn write_out(text: &str, out: Option<&Path>) -> swarmroute::Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct OracleResult {
    path: swarmroute::Path,
    fitness: f64,
    hops: usize,
}

fn to_json<T: Serialize>(value: &T) -> swarmroute::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn run(command: Command) -> swarmroute::Result<()> {
    match command {
        Command::Generate { net, out } => {
            let network = load_network(&net)?;
            write_out(&to_json(&network)?, out.out.as_deref())
        }
        Command::RunPso {
            net,
            ends,
            pso,
            iterations,
            out,
        } => {
            let network = load_network(&net)?;
            let (source, dest) = endpoints(&ends, network.pn());
            let params = pso.params(iterations, net.mode()?);
            let result = run_pso(&network, source, dest, &params, net.seed)?;
            write_out(&to_json(&result)?, out.out.as_deref())
        }
        Command::RunGa {
            net,
            ends,
            ga,
            iterations,
            out,
        } => {
            let network = load_network(&net)?;
            let (source, dest) = endpoints(&ends, network.pn());
            let params = ga.params(iterations, net.mode()?);
            let result = run_ga(&network, source, dest, &params, net.seed)?;
            write_out(&to_json(&result)?, out.out.as_deref())
        }
        Command::Compare {
            net,
            ends,
            pso,
            ga,
            budgets,
            trials,
            fixed_topology,
            format,
            out,
        } => {
            if net.network.is_some() {
                return Err(Error::InvalidParams(
                    "compare generates its own networks; use --nodes/--seed".into(),
                ));
            }
            let mode = net.mode()?;
            let (source, destination) = endpoints(&ends, net.nodes);
            let config = ExperimentConfig {
                pn: net.nodes,
                seed: net.seed,
                source,
                destination,
                budgets: budgets.0,
                trials,
                pso: pso.params(1, mode),
                ga: ga.params(0, mode),
                bandwidth_mode: mode,
                bandwidth_range: net.range()?,
                topology: net.topology(),
                fixed_topology,
                format: format.into(),
            };
            let report = compare(&config)?;
            write_out(&render(&report, config.format)?, out.out.as_deref())?;
            let (agg, v) = (&report.aggregates, &report.verdicts);
            eprintln!(
                "pso mean fitness {:.6} vs ga {:.6}: pso_mean_fitness_ge_ga = {}",
                agg.pso_mean_fitness, agg.ga_mean_fitness, v.pso_mean_fitness_ge_ga
            );
            eprintln!(
                "pso mean time {:.3} ms vs ga {:.3} ms: pso_mean_ms_le_ga = {}",
                agg.pso_mean_ms, agg.ga_mean_ms, v.pso_mean_ms_le_ga
            );
            Ok(())
        }
        Command::Oracle {
            net,
            ends,
            cap,
            out,
        } => {
            let network = load_network(&net)?;
            let (source, dest) = endpoints(&ends, network.pn());
            let (path, fitness) = brute_force_best(&network, source, dest, cap)?;
            let best = OracleResult {
                hops: path.hop_count(),
                path,
                fitness,
            };
            write_out(&to_json(&best)?, out.out.as_deref())
        }
    }
}
