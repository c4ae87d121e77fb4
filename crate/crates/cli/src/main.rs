//! `quiver-regrade`: command-line front end.
//!
//! Exit codes: 0 success, 1 invalid input or failed verification, 2 usage
//! error. Set `QUIVER_REGRADE_PRIME` to change the default prime field.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use quiver_regrade::format::{parse_presentation, serialize_presentation, Presentation};
use quiver_regrade::hilbert::graded_piece_dim;
use quiver_regrade::path::count_paths;
use quiver_regrade::regrade::{regrade, split_arrow, SplitTrace};
use quiver_regrade::representation::DegreeWindow;
use quiver_regrade::scalar::DEFAULT_PRIME;
use quiver_regrade::verify::{render_json, render_text, run_suite, Suite, SuiteConfig};
use quiver_regrade::{ArrowId, Field};

const PRIME_VAR: &str = "QUIVER_REGRADE_PRIME";

#[derive(Parser)]
#[command(name = "quiver-regrade", version, about = "Regrade weighted quivers with relations into degree 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a presentation file for structural errors.
    Validate { file: PathBuf },
    /// Print the weight discrepancy: total arrow degree minus arrow count.
    Discrepancy { file: PathBuf },
    /// Split one arrow and print the new presentation.
    Split {
        file: PathBuf,
        #[arg(long)]
        arrow: String,
    },
    /// Split until every arrow has degree 1.
    Regrade {
        file: PathBuf,
        /// Write here instead of stdout.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Print the graded-piece dimensions of the algebra.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        max_degree: u32,
        /// Only paths starting at this vertex.
        #[arg(long)]
        vertex: Option<String>,
        /// `q` or `pN` (default p32003).
        #[arg(long)]
        field: Option<Field>,
        /// Refuse `--max-degree` above this.
        #[arg(long, default_value_t = 12)]
        degree_limit: u32,
        /// Refuse degrees with more basis paths than this.
        #[arg(long, default_value_t = 200_000)]
        path_limit: u128,
    },
    /// Run the property suites.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degree window `LO:HI`.
        #[arg(long, default_value = "-2:10", value_parser = parse_window, allow_hyphen_values = true)]
        window: DegreeWindow,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// `q` or `pN` (default p32003).
        #[arg(long)]
        field: Option<Field>,
        /// Largest degree in the Hilbert checks.
        #[arg(long, default_value_t = 10)]
        max_degree: u32,
        /// Emit JSON instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Split,
    Functor,
    Hilbert,
    All,
}

fn parse_window(s: &str) -> Result<DegreeWindow, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected LO:HI")?;
    let lo = lo.trim().parse::<i64>().map_err(|e| format!("bad LO: {e}"))?;
    let hi = hi.trim().parse::<i64>().map_err(|e| format!("bad HI: {e}"))?;
    DegreeWindow::new(lo, hi).map_err(|e| e.to_string())
}

/// How a command failed, and so which exit code it gets.
enum Failure {
    Input(String),
    Usage(String),
}

type Outcome = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn default_field() -> Result<Field, Failure> {
    match std::env::var(PRIME_VAR) {
        Ok(v) => format!("p{}", v.trim())
            .parse()
            .map_err(|e| Failure::Usage(format!("{PRIME_VAR}: {e}"))),
        Err(_) => Ok(Field::Prime(DEFAULT_PRIME)),
    }
}

fn load(path: &Path) -> Result<Presentation, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_presentation(&text, Field::Rational).map_err(|errs| {
        Failure::Input(
            errs.0
                .iter()
                .map(|d| format!("{}:{d}", path.display()))
                .collect::<Vec<_>>()
                .join("\n"),
        )
    })
}

fn describe(t: &SplitTrace) -> String {
    let first = t.after.arrow(&t.first).expect("split keeps its halves");
    let second = t.after.arrow(&t.second).expect("split keeps its halves");
    format!(
        "# split {} into {}: {} -> {} (degree {}) and {}: {} -> {} (degree {})\n",
        t.split_arrow,
        t.first,
        first.source,
        first.target,
        first.degree,
        t.second,
        second.source,
        second.target,
        second.degree
    )
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Validate { file } => {
            let p = load(&file)?;
            println!(
                "ok: {} vertices, {} arrows, {} relations",
                p.quiver.vertex_count(),
                p.quiver.arrow_count(),
                p.ideal.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Discrepancy { file } => {
            println!("{}", load(&file)?.quiver.weight_discrepancy());
            Ok(ExitCode::SUCCESS)
        }
        Command::Split { file, arrow } => {
            let p = load(&file)?;
            let t = split_arrow(&p.quiver, &ArrowId::new(arrow)).map_err(|e| Failure::Input(e.to_string()))?;
            let ideal = t.rewrite_ideal(&p.ideal);
            print!("{}{}", describe(&t), serialize_presentation(&t.after, &ideal));
            Ok(ExitCode::SUCCESS)
        }
        Command::Regrade { file, output } => {
            let p = load(&file)?;
            let r = regrade(&p.quiver, &p.ideal);
            let n = r.trace.len();
            let mut text = format!("# regraded in {n} split{}\n", if n == 1 { "" } else { "s" });
            for t in &r.trace {
                text.push_str(&describe(t));
            }
            text.push_str(&serialize_presentation(&r.final_quiver, &r.final_ideal));
            match output {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hilbert {
            file,
            max_degree,
            vertex,
            field,
            degree_limit,
            path_limit,
        } => {
            if max_degree > degree_limit {
                return Err(Failure::Usage(format!(
                    "--max-degree {max_degree} exceeds the limit {degree_limit}; raise --degree-limit to allow it"
                )));
            }
            let p = load(&file)?;
            let field = match field {
                Some(f) => f,
                None => default_field()?,
            };
            let vertex = match vertex {
                Some(name) => Some(
                    p.quiver
                        .vertex_named(&name)
                        .cloned()
                        .ok_or_else(|| Failure::Input(format!("no vertex `{name}`")))?,
                ),
                None => None,
            };
            let ideal = p.ideal.over(field);
            let label = match &vertex {
                Some(v) => format!("e_{v}"),
                None => String::new(),
            };
            let mut out = format!("# degree dim {label}(kQ/I)_d over {field}\n");
            for d in 0..=max_degree {
                let paths = count_paths(&p.quiver, d, vertex.as_ref());
                if paths > path_limit {
                    print!("{out}");
                    return Err(Failure::Input(format!(
                        "degree {d} has {paths} paths, above --path-limit {path_limit}"
                    )));
                }
                let dim = graded_piece_dim(&p.quiver, &ideal, d, vertex.as_ref(), field);
                out.push_str(&format!("{d} {dim}\n"));
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            file,
            suite,
            trials,
            seed,
            window,
            max_dim,
            field,
            max_degree,
            json,
        } => {
            let p = load(&file)?;
            let cfg = SuiteConfig {
                master_seed: seed,
                trials,
                window,
                max_dim,
                field: match field {
                    Some(f) => f,
                    None => default_field()?,
                },
                max_degree,
            };
            let suites = match suite {
                SuiteArg::Split => vec![Suite::Split],
                SuiteArg::Functor => vec![Suite::Functor],
                SuiteArg::Hilbert => vec![Suite::Hilbert],
                SuiteArg::All => Suite::ALL.to_vec(),
            };
            let reports: Vec<_> = suites.into_iter().map(|s| run_suite(s, &cfg, &p)).collect();
            if json {
                print!("{}", render_json(&reports));
            } else {
                print!("{}", render_text(&reports));
            }
            let seconds: f64 = reports.iter().map(|r| r.wall_time.as_secs_f64()).sum();
            eprintln!("finished in {seconds:.2}s");
            Ok(if reports.iter().all(|r| r.passed()) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
