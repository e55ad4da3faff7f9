//! `beilinson`: search, verify and export rational surfaces built from
//! exterior-algebra monads over a prime field.
//!
//! Exit codes: 0 success, 1 a mathematical check failed, 2 invalid input,
//! 3 a budget ran out before a verdict.

mod config;
mod outcome;
mod report;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Instant;

use beilinson::adjunction::{adjunction_replay, PicardClass, MAIN_CLASS};
use beilinson::monad::{
    derive_phi, reference_candidate, reference_phi, phi_change_of_basis, presents_cokernel, Candidate,
    MonadContext, SearchOptions, T_DIM,
};
use beilinson::poly::io::Ideal;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::RunConfig;
use outcome::Failure;
use report::Envelope;
use verify::Pipeline;

#[derive(Parser, Debug)]
#[command(name = "beilinson", version, about)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Characteristic of the ground field.
    #[arg(long, global = true, default_value_t = 5)]
    prime: u32,
    /// Seed of the random search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials for `search`.
    #[arg(long, global = true, default_value_t = 6250)]
    trials: u64,
    /// Worker threads for search and point scans.
    #[arg(long, global = true, default_value_t = default_workers())]
    workers: usize,
    /// Wall-clock budget in seconds (search, smoothness).
    #[arg(long = "budget-secs", global = true, allow_negative_numbers = true)]
    budget_secs: Option<f64>,
    /// Output file for the report or ideal.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Increase log verbosity (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random search for corank-2 points and their fingerprints.
    Search,
    /// Run the verification pipeline on a candidate.
    Verify {
        /// Candidate JSON; the bundled candidate when omitted.
        candidate: Option<PathBuf>,
        /// Also run point scans and the Jacobian smoothness check.
        #[arg(long)]
        full: bool,
    },
    /// Export the minimal generators of the surface ideal.
    Ideal {
        /// Candidate JSON; the bundled candidate when omitted.
        candidate: Option<PathBuf>,
    },
    /// Replay adjunction on a Picard class such as "3L -E1 -E2".
    Adjunction {
        /// Class literal; the surface's hyperplane class when omitted.
        class: Option<String>,
    },
    /// Derive the presentation matrix of T and compare with the reference matrix.
    Phi,
    /// Render a JSON report in human-readable form.
    Report {
        file: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let level = match g.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let config = RunConfig {
        prime: g.prime,
        seed: g.seed,
        trials: g.trials,
        workers: g.workers,
        budget_seconds: g.budget_secs,
        output: g.out.clone(),
        verbosity: g.verbose,
    };
    match run(&cli.command, &config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.exit()
        }
    }
}

fn run(cmd: &Command, config: &RunConfig) -> Result<(), Failure> {
    config.validate()?;
    if let Command::Report { file } = cmd {
        let text = std::fs::read_to_string(file)?;
        print!("{}", report::render(&report::parse(&text)?));
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build_global()
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    match cmd {
        Command::Search => cmd_search(config),
        Command::Verify { candidate, full } => cmd_verify(config, candidate.as_deref(), *full),
        Command::Ideal { candidate } => cmd_ideal(config, candidate.as_deref()),
        Command::Adjunction { class } => cmd_adjunction(config, class.as_deref()),
        Command::Phi => cmd_phi(config),
        Command::Report { .. } => unreachable!(),
    }
}

fn context(prime: u32) -> Result<MonadContext, Failure> {
    if prime == beilinson::gf::DEFAULT_PRIME {
        Ok(MonadContext::default_prime().clone())
    } else {
        Ok(MonadContext::new(prime)?)
    }
}

fn load_candidate(config: &RunConfig, path: Option<&Path>) -> Result<Candidate, Failure> {
    let cand = match path {
        None => reference_candidate(),
        Some(p) => Candidate::from_json(&std::fs::read_to_string(p)?)?,
    };
    if cand.prime() != config.prime {
        return Err(Failure::Invalid(format!(
            "candidate is over F_{} but --prime is {}",
            cand.prime(),
            config.prime
        )));
    }
    Ok(cand)
}

/// Prints the rendering when the JSON went to a file.
fn publish<T: Serialize>(env: &Envelope<T>) -> Result<(), Failure> {
    if report::emit(env)? {
        let value = serde_json::to_value(env).expect("report serializes");
        let parsed: Envelope<serde_json::Value> =
            serde_json::from_value(value).expect("envelope round-trips");
        print!("{}", report::render(&parsed));
    }
    Ok(())
}

fn cmd_search(config: &RunConfig) -> Result<(), Failure> {
    let ctx = context(config.prime)?;
    let stop = Arc::new(AtomicBool::new(false));
    {
        let stop = stop.clone();
        ctrlc::set_handler(move || stop.store(true, Ordering::SeqCst))
            .map_err(|e| Failure::Invalid(format!("cannot install interrupt handler: {e}")))?;
    }
    let budget_hit = Arc::new(AtomicBool::new(false));
    if let Some(budget) = config.budget() {
        let (stop, hit) = (stop.clone(), budget_hit.clone());
        std::thread::spawn(move || {
            std::thread::sleep(budget);
            hit.store(true, Ordering::SeqCst);
            stop.store(true, Ordering::SeqCst);
        });
    }
    let opts = SearchOptions {
        trials: config.trials,
        seed: config.seed,
        workers: config.workers,
        record_time: false,
    };
    let report = ctx.random_search(&opts, Some(&stop));
    let truncated = report.truncated;
    publish(&Envelope::new("search", config, report))?;
    if truncated && budget_hit.load(Ordering::SeqCst) {
        return Err(Failure::Budget("search budget exhausted; report truncated".into()));
    }
    if truncated {
        return Err(Failure::Budget("search interrupted; report truncated".into()));
    }
    Ok(())
}

fn cmd_verify(config: &RunConfig, path: Option<&Path>, full: bool) -> Result<(), Failure> {
    let cand = load_candidate(config, path)?;
    let ctx = context(config.prime)?;
    let start = Instant::now();
    let mut pipe = Pipeline::new(&ctx, config, &cand);
    let _ = pipe.run_to_ideal(&cand)? && pipe.run_moduli(&cand)? && (!full || pipe.run_smoothness()?);
    let report = pipe.finish();
    log::info!("verify finished in {:.2}s", start.elapsed().as_secs_f64());
    let failure = report.failure();
    publish(&Envelope::new("verify", config, report))?;
    failure.map_or(Ok(()), Err)
}

fn cmd_ideal(config: &RunConfig, path: Option<&Path>) -> Result<(), Failure> {
    let cand = load_candidate(config, path)?;
    let ctx = context(config.prime)?;
    let mut pipe = Pipeline::new(&ctx, config, &cand);
    pipe.run_to_ideal(&cand)?;
    if let Some(f) = pipe.report.failure() {
        return Err(f);
    }
    let gens = pipe.reconstruction.take().expect("ideal stage ran").generators;
    let text = Ideal::new(config.prime, gens).to_text();
    match &config.output {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AdjunctionResult {
    class: String,
    ledger: beilinson::adjunction::AdjunctionLedger,
    table: String,
}

fn cmd_adjunction(config: &RunConfig, class: Option<&str>) -> Result<(), Failure> {
    let literal = class.unwrap_or(MAIN_CLASS);
    let h: PicardClass = literal
        .parse()
        .map_err(|e: beilinson::Error| Failure::Invalid(e.to_string()))?;
    let ledger = adjunction_replay(&h)?;
    let table = ledger.to_table();
    let env = Envelope::new(
        "adjunction",
        config,
        AdjunctionResult {
            class: h.to_string(),
            ledger,
            table: table.clone(),
        },
    );
    match &config.output {
        Some(_) => {
            report::emit(&env)?;
        }
        None => print!("{table}"),
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct PhiResult {
    dim_t: usize,
    phi: String,
    presents_cokernel: bool,
    equivalent: bool,
    change_of_basis: Option<Vec<Vec<u8>>>,
}

fn cmd_phi(config: &RunConfig) -> Result<(), Failure> {
    let p = config.prime;
    let phi = derive_phi(p)?;
    let b1 = beilinson::monad::build_b1(p);
    let presents = presents_cokernel(&phi, &b1)?;
    let g = phi_change_of_basis(&phi, &reference_phi(p))?;
    let equivalent = g.as_ref().is_some_and(|g| g.rank() == T_DIM);
    let result = PhiResult {
        dim_t: phi.rows(),
        phi: phi.render(),
        presents_cokernel: presents,
        equivalent,
        change_of_basis: g.map(|g| (0..g.rows()).map(|r| g.row(r).to_vec()).collect()),
    };
    let env = Envelope::new("phi", config, result);
    match &config.output {
        Some(_) => {
            report::emit(&env)?;
        }
        None => {
            println!("dim T = {}", env.result.dim_t);
            print!("{}", env.result.phi);
            println!("presents coker B1: {presents}");
            println!("equivalent to reference phi: {equivalent}");
        }
    }
    if presents && equivalent {
        Ok(())
    } else {
        Err(Failure::Math("derived phi does not match the reference matrix".into()))
    }
}
