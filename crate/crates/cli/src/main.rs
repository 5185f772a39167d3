//! `metadist`: validate group/ring configs and run the distortion
//! experiments, emitting deterministic CSV data and a JSON run summary.
//!
//! Exit codes: 0 ok, 1 validation or usage error, 2 resource limit hit.

use anyhow::Result;
use clap::{Parser, Subcommand};
use metadist_cli::{config, experiments};
use metadist_cli::experiments::{ResourceLimit, RunSummary};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "metadist", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a config; exit 0 iff clean.
    Validate { config: PathBuf },
    /// Run a named experiment and write CSV plus run_summary.json.
    Experiment {
        /// One of: main1, certificate, kronecker, embedding, semidirect.
        name: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        node_limit: Option<usize>,
        #[arg(long)]
        precision: Option<u32>,
        #[arg(long)]
        fuzz: Option<usize>,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("METADIST_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if e.chain().any(|c| c.is::<ResourceLimit>()) {
                eprintln!("error: {e}");
                ExitCode::from(2)
            } else {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Validate { config: path } => {
            let (cfg, _) = config::load(&path)?;
            let spec = config::build_group(&cfg.group)?;
            let report = spec.validation_report();
            println!(
                "group ok: k={}, n={}, generators {:?} {:?}",
                spec.q_rank(),
                spec.dim(),
                spec.labels_q(),
                spec.labels_a()
            );
            for note in &report.notes {
                println!("note: {note}");
            }
            for w in &report.warnings {
                println!("warning: {w}");
            }
            if let Some(ring_cfg) = &cfg.ring {
                let setup = config::build_ring(ring_cfg)?;
                println!(
                    "ring ok: degree {}, C1 = {}",
                    setup.ring.degree(),
                    metadist_core::rational::format_rational(setup.ring.c1_constant())
                );
                let spec = config::ring_group(&setup)?;
                println!("lambda action: {}", spec.action(0));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Experiment {
            name,
            config: path,
            out,
            radius,
            seed,
            node_limit,
            precision,
            fuzz,
        } => {
            let (cfg, bytes) = config::load(&path)?;
            let mut params = cfg.params.clone();
            if let Some(r) = radius {
                params.radius = r;
            }
            if let Some(s) = seed {
                params.seed = s;
            }
            if let Some(nl) = node_limit {
                params.node_limit = nl;
            }
            if let Some(p) = precision {
                params.precision = p;
            }
            if let Some(f) = fuzz {
                params.fuzz = f;
            }
            let summary = experiments::run(&name, &cfg, &params, &out)?;
            let run_summary = RunSummary {
                tool: "metadist",
                version: env!("CARGO_PKG_VERSION"),
                config_hash: experiments::config_hash_hex(&bytes),
                seed: params.seed,
                experiments: vec![summary],
            };
            let json = experiments::summary_json(&run_summary)?;
            std::fs::write(out.join("run_summary.json"), &json)?;
            for e in &run_summary.experiments {
                for (k, v) in &e.verdicts {
                    println!("{}: {} = {}", e.name, k, if *v { "pass" } else { "FAIL" });
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
