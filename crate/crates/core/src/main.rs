use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use coulomb_lab::counterexample::{fit_slope, run_sweep, write_csv};
use coulomb_lab::exponents::{
    exponent_set, nonradial_endpoint_f, radial_endpoint_f, sobolev_endpoint_f,
};
use coulomb_lab::optimize::{best_constant_search, OptimizerConfig};
use coulomb_lab::profile::parse_profile;
use coulomb_lab::verify::run_suite;
use coulomb_lab::{functionals, Error, QuadratureSpec, RadialProfile};

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Parser)]
#[command(
    name = "coulomb-lab",
    version,
    about = "Radial Coulomb energies, fractional Sobolev norms, and embedding experiments in 3D"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalArgs {
    /// relative quadrature tolerance
    #[arg(long, global = true)]
    quad_rel_tol: Option<f64>,
    /// absolute quadrature tolerance
    #[arg(long, global = true)]
    quad_abs_tol: Option<f64>,
    /// output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON config file; flags take precedence over its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// RNG seed for stochastic subcommands
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker thread cap (reserved; all current paths are sequential)
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    quad_rel_tol: Option<f64>,
    quad_abs_tol: Option<f64>,
    seed: Option<u64>,
    #[allow(dead_code)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate norms and energies of a profile
    Norms {
        /// builtin alias (builtin:gaussian, builtin:ball) or path to profile JSON
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// comma-separated Lebesgue exponents
        #[arg(long, default_value = "2")]
        p: String,
    },
    /// Run the coupled tent sweep
    Sweep {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        p: f64,
        /// comma-separated epsilon list, decreasing
        #[arg(long, default_value = "0.2,0.1,0.05,0.02,0.01")]
        eps: String,
    },
    /// Search for the best constant of the scale-invariant quotient
    BestConstant {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        two_p: f64,
        /// family spec, e.g. gaussians:4
        #[arg(long, default_value = "gaussians:4")]
        family: String,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 400)]
        max_iters: usize,
    },
    /// Run a verification suite
    Verify {
        /// identities | pitt | scaling | lemma-bounds | all
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Print exponent formulas; optionally emit the endpoint-curve CSV
    Exponents {
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        a: Option<f64>,
        /// write the three endpoint curves over s in [0.55, 1.45], 91 rows
        #[arg(long)]
        figure1_csv: Option<PathBuf>,
    },
}

struct Resolved {
    spec: QuadratureSpec,
    seed: u64,
    out: Option<PathBuf>,
}

fn resolve(global: &GlobalArgs) -> Result<Resolved, Error> {
    let file: FileConfig = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text)?
        }
        None => FileConfig::default(),
    };
    let defaults = QuadratureSpec::default();
    let spec = QuadratureSpec {
        rel_tol: global.quad_rel_tol.or(file.quad_rel_tol).unwrap_or(defaults.rel_tol),
        abs_tol: global.quad_abs_tol.or(file.quad_abs_tol).unwrap_or(defaults.abs_tol),
        max_subdiv: defaults.max_subdiv,
    };
    spec.validate()?;
    Ok(Resolved {
        spec,
        seed: global.seed.or(file.seed).unwrap_or(42),
        out: global.out.clone(),
    })
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::param(format!("invalid {what} entry {t:?}")))
        })
        .collect()
}

fn load_profile(source: &str) -> Result<RadialProfile, Error> {
    if source.starts_with("builtin:") || source.trim_start().starts_with('{') {
        parse_profile(source)
    } else {
        let text = fs::read_to_string(source)?;
        parse_profile(&text)
    }
}

fn emit(out: &Option<PathBuf>, payload: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, payload),
        None => {
            println!("{payload}");
            Ok(())
        }
    }
}

fn write_manifest(
    out: &Path,
    subcommand: &str,
    parameters: serde_json::Value,
    profile_source: Option<&str>,
    resolved: &Resolved,
    started: Instant,
) -> std::io::Result<()> {
    let manifest = serde_json::json!({
        "subcommand": subcommand,
        "parameters": parameters,
        "profile_source": profile_source,
        "output": out.display().to_string(),
        "quad": {
            "rel_tol": resolved.spec.rel_tol,
            "abs_tol": resolved.spec.abs_tol,
            "max_subdiv": resolved.spec.max_subdiv,
        },
        "seed": resolved.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "wall_clock_secs": started.elapsed().as_secs_f64(),
    });
    let path = out.with_extension(match out.extension().and_then(|e| e.to_str()) {
        Some(ext) => format!("{ext}.manifest.json"),
        None => "manifest.json".to_string(),
    });
    fs::write(path, serde_json::to_string_pretty(&manifest).unwrap())
}

fn run() -> Result<u8, (u8, String)> {
    let cli = Cli::parse();
    let started = Instant::now();
    let resolved = resolve(&cli.global).map_err(|e| (EXIT_USAGE, e.to_string()))?;

    match &cli.command {
        Command::Norms { profile, s, p } => {
            let prof = load_profile(profile).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let ps = parse_list(p, "p").map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let report = functionals::report(&prof, profile, *s, &ps, &resolved.spec)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let json = report.to_flat_json();
            let failed = json
                .as_object()
                .unwrap()
                .iter()
                .any(|(k, v)| k.starts_with("_err_") && v == &serde_json::json!(true));
            let payload = serde_json::to_string_pretty(&json).unwrap();
            emit(&resolved.out, &payload).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            if let Some(out) = &resolved.out {
                write_manifest(
                    out,
                    "norms",
                    serde_json::json!({"s": s, "p": ps}),
                    Some(profile),
                    &resolved,
                    started,
                )
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            }
            if failed {
                return Err((EXIT_NUMERIC, "quadrature budget exhausted".to_string()));
            }
            Ok(0)
        }
        Command::Sweep { s, p, eps } => {
            let epsilons = parse_list(eps, "eps").map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let records = run_sweep(*s, *p, &epsilons, &resolved.spec)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let mut csv = Vec::new();
            write_csv(&mut csv, &records).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let csv_text = String::from_utf8(csv).unwrap();
            let slope = fit_slope(&records, *p, *s);
            let summary = match &slope {
                Ok((measured, predicted)) => serde_json::json!({
                    "s": s, "p": p,
                    "measured_slope": measured,
                    "predicted_slope": predicted,
                }),
                Err(e) => serde_json::json!({
                    "s": s, "p": p,
                    "slope_unavailable": e.to_string(),
                }),
            };
            match &resolved.out {
                Some(path) => {
                    fs::write(path, &csv_text).map_err(|e| (EXIT_USAGE, e.to_string()))?;
                    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
                    write_manifest(
                        path,
                        "sweep",
                        serde_json::json!({"s": s, "p": p, "eps": epsilons}),
                        None,
                        &resolved,
                        started,
                    )
                    .map_err(|e| (EXIT_USAGE, e.to_string()))?;
                }
                None => {
                    println!("{csv_text}");
                    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
                }
            }
            if records.iter().any(|r| r.flagged) {
                return Err((EXIT_NUMERIC, "quadrature budget exhausted in sweep".to_string()));
            }
            Ok(0)
        }
        Command::BestConstant {
            s,
            two_p,
            family,
            restarts,
            max_iters,
        } => {
            let m = match family.strip_prefix("gaussians:") {
                Some(count) => count
                    .parse::<usize>()
                    .map_err(|_| (EXIT_USAGE, format!("invalid family {family:?}")))?,
                None => return Err((EXIT_USAGE, format!("unknown family {family:?}"))),
            };
            let cfg = OptimizerConfig {
                m,
                restarts: *restarts,
                max_iters: *max_iters,
                seed: resolved.seed,
                simplex_tol: 1e-5,
            };
            let result = best_constant_search(*s, *two_p, &cfg, &resolved.spec)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let payload = serde_json::to_string_pretty(&result.to_json()).unwrap();
            emit(&resolved.out, &payload).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            if let Some(out) = &resolved.out {
                write_manifest(
                    out,
                    "best-constant",
                    serde_json::json!({
                        "s": s, "two_p": two_p, "family": family,
                        "restarts": restarts, "max_iters": max_iters,
                    }),
                    None,
                    &resolved,
                    started,
                )
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            }
            Ok(0)
        }
        Command::Verify { suite, tol } => {
            let rows = run_suite(suite, *tol, &resolved.spec)
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            let mut all_pass = true;
            let mut table = String::new();
            for r in &rows {
                all_pass &= r.pass;
                table.push_str(&format!(
                    "{:<50} measured {:>24.17e} bound {:>12.6e} {}\n",
                    r.name,
                    r.measured,
                    r.bound,
                    if r.pass { "pass" } else { "FAIL" }
                ));
            }
            emit(&resolved.out, table.trim_end()).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            if all_pass {
                Ok(0)
            } else {
                Ok(EXIT_VERIFY_FAIL)
            }
        }
        Command::Exponents {
            s,
            p,
            q,
            a,
            figure1_csv,
        } => {
            if let Some(path) = figure1_csv {
                let mut csv = String::from("s,radial_endpoint,nonradial_endpoint,sobolev_endpoint\n");
                for i in 0..91 {
                    let sv = 0.55 + 0.01 * i as f64;
                    csv.push_str(&format!(
                        "{:.16e},{:.16e},{:.16e},{:.16e}\n",
                        sv,
                        radial_endpoint_f(sv).map_err(|e| (EXIT_USAGE, e.to_string()))?,
                        nonradial_endpoint_f(sv).map_err(|e| (EXIT_USAGE, e.to_string()))?,
                        sobolev_endpoint_f(sv).map_err(|e| (EXIT_USAGE, e.to_string()))?,
                    ));
                }
                fs::write(path, csv).map_err(|e| (EXIT_USAGE, e.to_string()))?;
                write_manifest(
                    path,
                    "exponents",
                    serde_json::json!({"figure1_csv": true}),
                    None,
                    &resolved,
                    started,
                )
                .map_err(|e| (EXIT_USAGE, e.to_string()))?;
            }
            if let Some(sv) = s {
                let set = exponent_set(*sv, *p, *q, *a).map_err(|e| (EXIT_USAGE, e.to_string()))?;
                if !(*sv > 0.5 && *sv < 1.5) {
                    return Err((
                        EXIT_USAGE,
                        format!("s = {sv} outside (1/2, 3/2): endpoint formulas undefined"),
                    ));
                }
                let payload = serde_json::to_string_pretty(&set).unwrap();
                emit(&resolved.out, &payload).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            } else if figure1_csv.is_none() {
                return Err((EXIT_USAGE, "exponents needs --s or --figure1-csv".to_string()));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
