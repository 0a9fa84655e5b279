use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use bestprox::analysis::Classification;
use bestprox::error::Error;
use bestprox::fixtures::gen_strip;
use bestprox::hunt::{hunt, trial_instance, HuntConfig, HuntRecord};
use bestprox::instance::{load_instance, write_instance, InstanceFile};
use bestprox::json;
use bestprox::report::{write_hunt_jsonl, write_json, write_trace_csv, AnalysisReport};
use bestprox::{
    best_proximity_oracle, check_preconditions, induced_map, p_proximal_constant, picard_solve,
    proximal_sets, PairInstance, PicardOptions,
};

const EXIT_PRECONDITION: u8 = 2;
const EXIT_INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(name = "bestprox", version, about = "Best proximity points of p-proximal contractions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the metric axioms and the solver preconditions.
    Validate { instance: PathBuf },
    /// Certify the p-proximal constant and the induced map.
    Analyze {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write a reproduction case if an invariant breaks.
        #[arg(long, default_value = "repro.json")]
        repro: PathBuf,
    },
    /// Picard iteration of the induced map; writes the trace as CSV.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        start: usize,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "repro.json")]
        repro: PathBuf,
    },
    /// Brute-force minimization of d(x, Tx) over A.
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the discretized parallel-segment instance.
    GenStrip {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random search over instances; writes one JSON record per line.
    Hunt {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Precondition(String),
    Invariant(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Other(e.to_string())
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            println!("{}", json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Repro<'a, T: Serialize> {
    reason: &'a str,
    instance: InstanceFile,
    detail: T,
}

fn write_repro<T: Serialize>(path: &Path, reason: &str, inst: &PairInstance, detail: T) -> Failure {
    let repro = Repro { reason, instance: InstanceFile::from_instance(inst), detail };
    match write_json(path, &repro) {
        Ok(()) => Failure::Invariant(format!("{reason}; reproduction case written to {}", path.display())),
        Err(e) => Failure::Other(format!("{reason}; could not write reproduction case: {e}")),
    }
}

fn validate(path: &Path) -> CmdResult {
    #[derive(Serialize)]
    struct Validation<'a> {
        valid: bool,
        metric_violations: &'a [bestprox::metric::MetricViolation],
        preconditions: Option<bestprox::PreconditionReport>,
    }
    let inst = match load_instance(path) {
        Ok(inst) => inst,
        Err(Error::NotAMetric(v)) => {
            emit(&Validation { valid: false, metric_violations: &v, preconditions: None }, None)?;
            return Err(Failure::Precondition(format!("{} metric violation(s)", v.len())));
        }
        Err(e) => return Err(e.into()),
    };
    let ps = proximal_sets(&inst);
    let pre = check_preconditions(&inst, &ps);
    let ok = pre.all_hold();
    emit(&Validation { valid: ok, metric_violations: &[], preconditions: Some(pre) }, None)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::Precondition("T does not map A0 into B0".into()))
    }
}

fn analyze(path: &Path, out: Option<&Path>, repro: &Path) -> CmdResult {
    let inst = load_instance(path)?;
    let report = AnalysisReport::build(&inst)?;
    emit(&report, out)?;
    if !report.preconditions.all_hold() {
        return Err(Failure::Precondition("T does not map A0 into B0".into()));
    }
    if !report.invariant_violations.is_empty() {
        let reason = report.invariant_violations.join("; ");
        return Err(write_repro(repro, &reason, &inst, &report));
    }
    Ok(())
}

fn solve(path: &Path, start: usize, max_iter: Option<usize>, out: Option<&Path>, repro: &Path) -> CmdResult {
    let inst = load_instance(path)?;
    let ps = proximal_sets(&inst);
    let adm = p_proximal_constant(&inst, &ps)?;
    let im = induced_map(&inst, &ps)?;
    let mut options = PicardOptions::from_k(adm.k_min);
    options.max_iter = max_iter;
    let result = picard_solve(&im, start, &options)?;
    match out {
        Some(p) => {
            write_trace_csv(p, &result)?;
            #[derive(Serialize)]
            struct Summary {
                z: usize,
                converged: bool,
                steps: usize,
                proximity_gap: f64,
                #[serde(with = "bestprox::json::extended_f64")]
                k_min: f64,
            }
            emit(
                &Summary {
                    z: result.z,
                    converged: result.converged,
                    steps: result.steps,
                    proximity_gap: result.proximity_gap,
                    k_min: adm.k_min,
                },
                None,
            )?;
        }
        None => print!("{}", bestprox::report::trace_csv(&result)?),
    }
    if adm.classification() == Classification::AdmissibleLtThird {
        let ok = result.converged
            && result.proximity_gap.abs() <= inst.eps()
            && result.steps <= im.len()
            && result.bounds_hold();
        if !ok {
            return Err(write_repro(repro, "Picard run violates the contraction guarantees", &inst, &result));
        }
    }
    Ok(())
}

fn oracle(path: &Path, out: Option<&Path>) -> CmdResult {
    let inst = load_instance(path)?;
    let ps = proximal_sets(&inst);
    emit(&best_proximity_oracle(&inst, &ps), out)?;
    Ok(())
}

fn run_hunt(config: HuntConfig, out: &Path) -> CmdResult {
    let outcome = hunt(&config)?;
    write_hunt_jsonl(out, &outcome.records)?;
    emit(&outcome.summary, None)?;
    if let Some(first) = outcome.violations.first() {
        #[derive(Serialize)]
        struct Counterexamples<'a> {
            records: &'a [HuntRecord],
        }
        let inst = trial_instance(first.seed, first.trial, config.n_min, config.n_max)?;
        let mut path = out.as_os_str().to_owned();
        path.push(".repro.json");
        return Err(write_repro(
            Path::new(&path),
            "admissible_lt_third record breaks the main theorem",
            &inst,
            Counterexamples { records: &outcome.violations },
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { instance } => validate(&instance),
        Command::Analyze { instance, out, repro } => analyze(&instance, out.as_deref(), &repro),
        Command::Solve { instance, start, max_iter, out, repro } => {
            solve(&instance, start, max_iter, out.as_deref(), &repro)
        }
        Command::Oracle { instance, out } => oracle(&instance, out.as_deref()),
        Command::GenStrip { n, c, out } => gen_strip(n, c)
            .and_then(|inst| write_instance(&out, &inst))
            .map_err(Failure::from),
        Command::Hunt { seed, trials, n_min, n_max, filter, out } => {
            match filter.as_deref().map(str::parse::<Classification>).transpose() {
                Ok(filter) => run_hunt(HuntConfig { seed, trials, n_min, n_max, filter }, &out),
                Err(e) => Err(Failure::from(e)),
            }
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PRECONDITION)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
