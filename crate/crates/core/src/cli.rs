//! The `fockcat` command line.
//!
//! Exit status 0 on success, 1 on usage errors, 2 when a computation fails.
//! Failures print a complete `{"error": {...}}` object on stdout and a
//! one-line message on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::diagrams;
use crate::dsl::{self, DysonQuery, Query, DEFAULT_ORDER};
use crate::error::Error;
use crate::evolution::Convention;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fockcat", version, about = "Species, stuff types and Fock-space combinatorics")]
struct Cli {
    /// Emit JSON (the default).
    #[arg(long, global = true, conflicts_with = "plain")]
    json: bool,
    /// Emit `key: value` lines instead of JSON.
    #[arg(long, global = true)]
    plain: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

/// Output file for subcommands that do not use `--out` as a point count.
#[derive(Debug, Args)]
struct OutputFile {
    /// Write the result to FILE instead of stdout.
    #[arg(short = 'o', long = "output", visible_alias = "out", value_name = "FILE")]
    output: Option<PathBuf>,
}

/// Output file for subcommands where `--out` counts outgoing points.
#[derive(Debug, Args)]
struct OutputFileShort {
    /// Write the result to FILE instead of stdout.
    #[arg(short = 'o', long = "output", value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Points {
    /// Number of incoming points (size of the initial state).
    #[arg(long = "in", default_value_t = 0)]
    incoming: usize,
    /// Number of outgoing points (size of the final state).
    #[arg(long = "out", default_value_t = 0)]
    outgoing: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Sign {
    Physics,
    Positive,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generating-function coefficients of an expression.
    Gf {
        expr: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[command(flatten)]
        file: OutputFile,
    },
    /// Cardinality of the inner-product groupoid of two expressions.
    Inner {
        left: String,
        right: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        /// Conjugate the phases of the left operand.
        #[arg(long)]
        fock: bool,
        #[command(flatten)]
        file: OutputFile,
    },
    /// Vacuum-to-vacuum style diagram cardinality.
    Vev {
        #[command(flatten)]
        points: Points,
        /// Vertex valences in time order, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        valences: Vec<usize>,
        #[command(flatten)]
        file: OutputFileShort,
    },
    /// `⟨z^out, W z^in⟩` for an operator expression `W`.
    Expect {
        operator: String,
        #[command(flatten)]
        points: Points,
        #[command(flatten)]
        file: OutputFileShort,
    },
    /// Solves `NAME = expr` for a species.
    Solve {
        equation: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[command(flatten)]
        file: OutputFile,
    },
    /// Free time evolution: phase `n·θ` on the size-`n` fiber.
    Evolve {
        expr: String,
        /// Angle per quantum: exact turns (`1/8`) or radians (`0.5 rad`).
        #[arg(long, allow_hyphen_values = true)]
        angle: String,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[command(flatten)]
        file: OutputFile,
    },
    /// Dyson series against the matrix-exponential reference.
    Dyson {
        #[command(flatten)]
        points: Points,
        /// Terms `m:g` of `V = Σ g φ^m/m!`, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        potential: String,
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        time: f64,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        /// Sign of the exponent: `physics` evolves by exp(−iTH), `positive` by exp(+iTH).
        #[arg(long, value_enum, default_value_t = Sign::Physics)]
        convention: Sign,
        #[command(flatten)]
        file: OutputFileShort,
    },
    /// Enumerates diagram classes.
    Diagrams {
        #[command(flatten)]
        points: Points,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        valences: Vec<usize>,
        /// Sample this many leg-labelled matchings (seeded by `--seed`) and
        /// check them against the enumeration.
        #[arg(long, default_value_t = 0)]
        random_checks: usize,
        #[command(flatten)]
        file: OutputFileShort,
    },
    /// Evaluates a query written in the expression language.
    Query {
        text: String,
        #[command(flatten)]
        file: OutputFile,
    },
}

enum Failure {
    Usage(String),
    Computation(Value, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Computation(e.to_json(), e.to_string())
    }
}

/// Runs the command line with the given arguments (program name first).
pub fn cli_main<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            return report(Failure::Usage(e.to_string()), stdout, stderr);
        }
    };
    let plain = cli.plain;
    match execute(cli) {
        Ok((value, None)) => {
            let _ = writeln!(stdout, "{}", render(&value, plain));
            EXIT_OK
        }
        Ok((value, Some(path))) => match std::fs::write(&path, render(&value, plain) + "\n") {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let message = format!("cannot write {}: {e}", path.display());
                let body = json!({ "error": { "code": "IO", "message": message } });
                report(Failure::Computation(body, message), stdout, stderr)
            }
        },
        Err(failure) => report(failure, stdout, stderr),
    }
}

fn report(failure: Failure, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match failure {
        Failure::Usage(message) => {
            let body = json!({ "error": { "code": "USAGE", "message": message.trim_end() } });
            let _ = writeln!(stdout, "{body}");
            let _ = write!(stderr, "{message}");
            EXIT_USAGE
        }
        Failure::Computation(body, message) => {
            let _ = writeln!(stdout, "{body}");
            let _ = writeln!(stderr, "fockcat: {message}");
            EXIT_COMPUTATION
        }
    }
}

fn execute(cli: Cli) -> std::result::Result<(Value, Option<PathBuf>), Failure> {
    let seed = cli.seed;
    let (query, output, random_checks) = match cli.command {
        Command::Gf { expr, order, file } => (Query::Gf { expr: dsl::parse_expr(&expr)?, order }, file.output, 0),
        Command::Inner { left, right, order, fock, file } => {
            let (left, right) = (dsl::parse_expr(&left)?, dsl::parse_expr(&right)?);
            let q = if fock { Query::FockInner { left, right, order } } else { Query::Inner { left, right, order } };
            (q, file.output, 0)
        }
        Command::Vev { points, valences, file } => (Query::Vev { k: points.outgoing, l: points.incoming, valences }, file.output, 0),
        Command::Expect { operator, points, file } => {
            (Query::Expect { k: points.outgoing, operator: dsl::parse_expr(&operator)?, l: points.incoming }, file.output, 0)
        }
        Command::Solve { equation, order, file } => {
            let (var, rhs) = dsl::parse_equation(&equation)?;
            (Query::Solve { var, rhs, order }, file.output, 0)
        }
        Command::Evolve { expr, angle, order, file } => {
            (Query::Evolve { expr: dsl::parse_expr(&expr)?, angle: dsl::parse_angle(&angle)?, order }, file.output, 0)
        }
        Command::Dyson { points, potential, time, order, cutoff, convention, file } => (
            Query::Dyson(DysonQuery {
                k: points.outgoing,
                l: points.incoming,
                potential: dsl::parse_potential(&potential)?,
                time,
                order,
                cutoff,
                convention: match convention {
                    Sign::Physics => Convention::Physics,
                    Sign::Positive => Convention::Positive,
                },
            }),
            file.output,
            0,
        ),
        Command::Diagrams { points, valences, random_checks, file } => {
            (Query::Diagrams { k: points.outgoing, l: points.incoming, valences }, file.output, random_checks)
        }
        Command::Query { text, file } => (dsl::parse_query(&text)?, file.output, 0),
    };
    let mut value = dsl::eval_query(&query)?;
    if let Query::Diagrams { k, l, valences } = &query {
        if random_checks > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = diagrams::random_checks(*k, *l, valences, random_checks, &mut rng)?;
            value["random_checks"] = json!({ "seed": seed, "count": r.count, "passed": r.passed });
        }
    }
    Ok((value, output))
}

fn render(value: &Value, plain: bool) -> String {
    if !plain {
        return value.to_string();
    }
    let Value::Object(map) = value else { return value.to_string() };
    map.iter().map(|(key, v)| format!("{key}: {}", plain_value(v))).collect::<Vec<_>>().join("\n")
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            items.iter().map(plain_value).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("fockcat").chain(args.iter().copied());
        let code = cli_main(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn vev_subcommand() {
        let (code, out, _) = run(&["vev", "--in", "0", "--out", "0", "--valences", "6"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["cardinality"], "1/48");
    }

    #[test]
    fn compose_constant_exit_code() {
        let (code, out, err) = run(&["gf", "E of E", "--order", "6"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["code"], "COMPOSE_CONST");
        assert!(!err.is_empty());
    }

    #[test]
    fn usage_errors() {
        let (code, out, _) = run(&["gf"]);
        assert_eq!(code, 1);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["code"], "USAGE");
        assert_eq!(run(&["--help"]).0, 0);
    }

    #[test]
    fn solve_plain() {
        let (code, out, _) = run(&["solve", "B = Z + B^2", "--order", "5", "--plain"]);
        assert_eq!(code, 0);
        assert!(out.contains("coeffs: 0 1 1 2 5 14"), "{out}");
    }

    #[test]
    fn parse_error_offsets_reach_the_output() {
        let (code, out, _) = run(&["gf", "Z + + E"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["error"]["code"], "PARSE");
        assert_eq!(v["error"]["offset"], 4);
    }

    #[test]
    fn seeded_diagram_checks() {
        let (code, out, _) = run(&["diagrams", "--in", "1", "--out", "1", "--valences", "3,3", "--random-checks", "20", "--seed", "9"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["random_checks"]["passed"], 20);
    }

    #[test]
    fn output_file() {
        let dir = std::env::temp_dir().join(format!("fockcat-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("inner.json");
        let p = path.to_str().unwrap();
        let (code, out, _) = run(&["inner", "Z^2", "Z^3", "--order", "6", "--out", p]);
        assert_eq!((code, out.as_str()), (0, ""));
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["cardinality"], "0");
        std::fs::remove_dir_all(dir).unwrap();
    }
}
