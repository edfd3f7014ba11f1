use clap::{Args, Parser, Subcommand, ValueEnum};
use gr38_core::driver::{self, BatchOptions, DriverError, InputMode};
use gr38_core::known;
use gr38_core::schubert::{verify_qsp_algebra, DEFAULT_POINTS, DEFAULT_SEED};
use gr38_core::subdivision::Weight;
use gr38_core::verify::{classify, dimension_audit, replay_presentations, verify_with, Certificate, VerifyOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const PARSE_ERROR: u8 = 2;
const VERIFY_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(name = "gr38", version, about = "Exact verification of initial degenerations of Gr0(3,8)")]
struct Cli {
    /// Directory for certificates and summaries.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads for batch runs.
    #[arg(long, global = true, env = "GR38_JOBS", value_name = "N")]
    jobs: Option<usize>,
    /// Seed for the random points used to check eliminations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Treat any unverified certificate as a failure.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximal cells, walls and codimension-2 cells of the subdivision.
    Subdivide(WeightInput),
    /// Tight span, pruned subcomplexes and conditions.
    Tightspan(WeightInput),
    /// Print the group label.
    Classify(WeightInput),
    /// Build and print a certificate.
    Verify(WeightInput),
    /// Verify every cone of a JSON-lines file.
    Batch {
        file: PathBuf,
        /// Records are distinct orbit representatives.
        #[arg(long, conflicts_with = "all_cones")]
        orbits: bool,
        /// Records may repeat orbits; duplicates are dropped.
        #[arg(long)]
        all_cones: bool,
    },
    /// Check the realization of the special matroid over Q(a).
    QspCheck,
    /// Re-add the dimensions of certificates and replay their eliminations.
    Audit {
        /// Certificate files or directories of them.
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct WeightInput {
    /// Weight JSON file, or `-` for stdin.
    #[arg(required_unless_present = "example")]
    path: Option<PathBuf>,
    /// Use a built-in weight instead of a file.
    #[arg(long, value_enum, conflicts_with = "path")]
    example: Option<Example>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Special,
    Tree,
    Mantis,
    SixFin,
}

impl WeightInput {
    fn load(&self) -> Result<Weight, String> {
        if let Some(e) = self.example {
            return Ok(match e {
                Example::Special => known::w_sp(),
                Example::Tree => known::tree_example(),
                Example::Mantis => known::mantis_example(),
                Example::SixFin => known::six_fin_example(),
            });
        }
        let path = self.path.as_ref().expect("clap requires a path");
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
        };
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

fn print_json(v: &impl serde::Serialize) {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    // a closed pipe is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("gr38: {msg}");
            ExitCode::from(code)
        }
    }
}

type Outcome = Result<ExitCode, (u8, String)>;

fn load(input: &WeightInput) -> Result<Weight, (u8, String)> {
    input.load().map_err(|e| (PARSE_ERROR, e))
}

fn failure(e: impl std::fmt::Display) -> (u8, String) {
    (VERIFY_FAILURE, e.to_string())
}

fn run(cli: &Cli) -> Outcome {
    let opts = VerifyOptions {
        points: DEFAULT_POINTS,
        seed: cli.seed,
    };
    match &cli.command {
        Command::Subdivide(input) => {
            print_json(&driver::subdivision_report(&load(input)?).map_err(failure)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Tightspan(input) => {
            print_json(&driver::tight_span_report(&load(input)?).map_err(failure)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify(input) => {
            let w = load(input)?;
            let label = classify(&w).map_err(failure)?;
            let special = gr38_core::verify::detect_csp(&w);
            println!("{label}{}", if special { " special" } else { "" });
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(input) => {
            let w = load(input)?;
            let cert = verify_with(&w, &opts);
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir).map_err(failure)?;
                let path = dir.join(format!("{}.json", driver::content_hash(&cert.weight)));
                std::fs::write(&path, cert.to_json_string()).map_err(failure)?;
                eprintln!("wrote {}", path.display());
            }
            print_json(&cert);
            Ok(status(cli.strict && !cert.verified))
        }
        Command::Batch { file, all_cones, .. } => {
            let bopts = BatchOptions {
                mode: if *all_cones { InputMode::AllCones } else { InputMode::Orbits },
                jobs: cli.jobs,
                out: cli.out.clone(),
                verify: opts,
            };
            let summary = driver::run_batch(file, &bopts).map_err(|e| match e {
                DriverError::Parse { .. } => (PARSE_ERROR, e.to_string()),
                _ => failure(e),
            })?;
            if let Some(dir) = &cli.out {
                let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
                std::fs::write(dir.join("summary.json"), text).map_err(failure)?;
            }
            print_json(&summary);
            Ok(status(!summary.is_success(cli.strict)))
        }
        Command::QspCheck => {
            let report = verify_qsp_algebra();
            print_json(&report);
            Ok(status(!report.passed))
        }
        Command::Audit { paths } => audit(paths, cli.seed),
    }
}

fn status(failed: bool) -> ExitCode {
    if failed {
        ExitCode::from(VERIFY_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn certificate_files(paths: &[PathBuf]) -> Result<Vec<PathBuf>, (u8, String)> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| (PARSE_ERROR, format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json") && f.file_name().is_some_and(|n| n != "summary.json"))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn audit(paths: &[PathBuf], seed: u64) -> Outcome {
    let mut failed = false;
    for path in certificate_files(paths)? {
        let cert = read_certificate(&path)?;
        match audit_one(&cert, seed) {
            Ok(line) => println!("ok {}: {line}", path.display()),
            Err(e) => {
                failed = true;
                println!("FAIL {}: {e}", path.display());
            }
        }
    }
    Ok(status(failed))
}

fn read_certificate(path: &Path) -> Result<Certificate, (u8, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| (PARSE_ERROR, format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| (PARSE_ERROR, format!("{}: {e}", path.display())))
}

fn audit_one(cert: &Certificate, seed: u64) -> Result<String, String> {
    if !cert.verified {
        return Err(format!("unverified: {}", cert.failure.as_deref().unwrap_or("no reason given")));
    }
    let dim = dimension_audit(cert).map_err(|e| e.to_string())?;
    let reports = replay_presentations(cert, DEFAULT_POINTS, seed).map_err(|e| e.to_string())?;
    Ok(format!(
        "{} dimension {dim}, {} component(s), {} elimination(s) replayed",
        cert.group,
        cert.components,
        reports.len()
    ))
}
