//! The process boundary: seven subcommands over the library, each with
//! machine-readable, byte-deterministic output. `--envelope` wraps any
//! payload in a [`CommandResult`]. Exit codes: 0 for success or pass, 1 for
//! a check that ran and failed, 2 for invalid input.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::asymptotics::{clp_constant, convergence_report, rate_function};
use crate::capsearch::{exhaustive_max, find_progression, greedy_random, PointSet};
use crate::ffield::{CoefficientTriple, Point};
use crate::monomials::{count_monomials, RationalDegree};
use crate::polymethod::{proposition_trials, theorem_bound, verify_theorem_pipeline};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "capbound",
    version,
    about = "Bounds and searches for progression-free sets in F_q^n"
)]
struct Cli {
    /// Wrap the payload in a CommandResult envelope with echoed inputs
    #[arg(long, global = true)]
    envelope: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Branch-and-bound over the whole cube; certifies the maximum
    Exact,
    /// Seeded random-order greedy passes; fast lower-bound witnesses
    Greedy,
}

#[derive(Subcommand)]
enum Command {
    /// Count monomials with exponents below q of total degree at most d
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Degree threshold, an integer or a rational like 2/3
        #[arg(long)]
        d: String,
    },
    /// Print the proven cap 3·m_{(q-1)n/3} on progression-free set size
    Bound {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Evaluate the rate function I(x), or the constant c(q) with --constant
    Rate {
        #[arg(long)]
        q: u64,
        /// Point of evaluation, an integer or a rational like 2/3
        #[arg(long, conflicts_with = "constant")]
        x: Option<String>,
        /// Evaluate at x = (q-1)/3 and report c = q·e^(-I)
        #[arg(long)]
        constant: bool,
    },
    /// Check a set file for progressions under the given coefficients
    Verify {
        /// JSON file {"n": ..., "points": [[...], ...], "q": ...}
        #[arg(long)]
        set: PathBuf,
        /// Equation coefficients "a,b,c" with a+b+c = 0 mod q, c != 0
        #[arg(long)]
        coeffs: String,
    },
    /// Look for large progression-free sets
    Search {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Equation coefficients "a,b,c" with a+b+c = 0 mod q, c != 0
        #[arg(long)]
        coeffs: String,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Random seed (greedy mode)
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of greedy passes (greedy mode)
        #[arg(long, default_value_t = 100)]
        restarts: u32,
        /// Node-expansion budget (exact mode); exhausting it forfeits optimality
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Stream diagonal-rank reports: random trials, or one set end to end
    Check {
        #[arg(long, requires = "trials")]
        q: Option<u64>,
        #[arg(long, requires = "trials")]
        n: Option<usize>,
        /// Degree threshold for trials; random per trial when omitted
        #[arg(long, requires = "trials")]
        d: Option<String>,
        /// Number of randomized trials
        #[arg(long, conflicts_with = "set", requires = "q", requires = "n")]
        trials: Option<u32>,
        /// Seed for trial randomness
        #[arg(long, default_value_t = 0, requires = "trials")]
        seed: u64,
        /// Run the full bound pipeline on this set file instead of trials
        #[arg(long, requires = "coeffs")]
        set: Option<PathBuf>,
        /// Equation coefficients for --set mode
        #[arg(long, requires = "set")]
        coeffs: Option<String>,
    },
    /// Tabulate exact counting exponents against the rate-function limit
    Converge {
        #[arg(long)]
        q: u64,
        /// Comma-separated dimensions, e.g. 3,9,99,999
        #[arg(long = "n-list")]
        n_list: String,
        /// Also write the table as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Info,
}

/// Envelope emitted under `--envelope`. Fields are declared in serialized
/// (sorted-key) order; `inputs` echoes the parsed parameters.
#[derive(Serialize)]
pub struct CommandResult {
    command: String,
    inputs: Value,
    output: Value,
    status: Status,
}

struct Outcome {
    command: &'static str,
    inputs: Value,
    output: Value,
    status: Status,
    /// Plain-mode stdout, one entry per line.
    lines: Vec<String>,
}

/// Parses the process arguments, runs the command, prints the payload, and
/// returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests land here too; those exit 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            let code = match outcome.status {
                Status::Fail => 1,
                Status::Pass | Status::Info => 0,
            };
            if cli.envelope {
                let envelope = CommandResult {
                    command: outcome.command.to_string(),
                    inputs: outcome.inputs,
                    output: outcome.output,
                    status: outcome.status,
                };
                println!(
                    "{}",
                    serde_json::to_string(&envelope).expect("serializable envelope")
                );
            } else {
                for line in &outcome.lines {
                    println!("{line}");
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn execute(command: Command) -> Result<Outcome> {
    match command {
        Command::Count { q, n, d } => cmd_count(q, n, &d),
        Command::Bound { q, n } => cmd_bound(q, n),
        Command::Rate { q, x, constant } => cmd_rate(q, x.as_deref(), constant),
        Command::Verify { set, coeffs } => cmd_verify(&set, &coeffs),
        Command::Search {
            q,
            n,
            coeffs,
            mode,
            seed,
            restarts,
            budget,
        } => cmd_search(q, n, &coeffs, mode, seed, restarts, budget),
        Command::Check {
            q,
            n,
            d,
            trials,
            seed,
            set,
            coeffs,
        } => match (set, trials) {
            (Some(set), None) => {
                let coeffs = coeffs.expect("clap enforces --set requires --coeffs");
                cmd_check_set(&set, &coeffs)
            }
            (None, Some(trials)) => {
                let (q, n) = match (q, n) {
                    (Some(q), Some(n)) => (q, n),
                    _ => return Err(Error::Parse("trial mode needs --q and --n".into())),
                };
                cmd_check_trials(q, n, d.as_deref(), trials, seed)
            }
            _ => Err(Error::Parse(
                "pass either --set with --coeffs, or --q/--n/--trials".into(),
            )),
        },
        Command::Converge { q, n_list, csv } => cmd_converge(q, &n_list, csv.as_deref()),
    }
}

fn require_counting_base(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::Parse(format!("need q >= 2, got {q}")));
    }
    Ok(())
}

fn inputs_from(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in entries {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

fn point_value(p: &Point) -> Value {
    Value::Array(p.coords().iter().map(|&c| json!(c)).collect())
}

fn cmd_count(q: u64, n: usize, d: &str) -> Result<Outcome> {
    require_counting_base(q)?;
    let d: RationalDegree = d.parse()?;
    let count = count_monomials(q, n, d).to_string();
    Ok(Outcome {
        command: "count",
        inputs: inputs_from(vec![
            ("d", json!(d.to_string())),
            ("n", json!(n)),
            ("q", json!(q)),
        ]),
        output: json!(count),
        status: Status::Info,
        lines: vec![count],
    })
}

fn cmd_bound(q: u64, n: usize) -> Result<Outcome> {
    require_counting_base(q)?;
    let bound = theorem_bound(q, n).to_string();
    Ok(Outcome {
        command: "bound",
        inputs: inputs_from(vec![("n", json!(n)), ("q", json!(q))]),
        output: json!(bound),
        status: Status::Info,
        lines: vec![bound],
    })
}

fn cmd_rate(q: u64, x: Option<&str>, constant: bool) -> Result<Outcome> {
    require_counting_base(q)?;
    let (result, inputs) = match (x, constant) {
        (Some(x), false) => {
            let x: RationalDegree = x.parse()?;
            let result = rate_function(q, x.to_f64())?;
            (
                result,
                inputs_from(vec![("q", json!(q)), ("x", json!(x.to_string()))]),
            )
        }
        (None, true) => (
            clp_constant(q)?,
            inputs_from(vec![("constant", json!(true)), ("q", json!(q))]),
        ),
        _ => return Err(Error::Parse("pass exactly one of --x or --constant".into())),
    };
    let output = serde_json::to_value(&result)?;
    let line = serde_json::to_string(&output)?;
    Ok(Outcome {
        command: "rate",
        inputs,
        output,
        status: Status::Info,
        lines: vec![line],
    })
}

fn load_set(path: &std::path::Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn cmd_verify(path: &std::path::Path, coeffs: &str) -> Result<Outcome> {
    let set = load_set(path)?;
    let t = CoefficientTriple::parse(coeffs, set.modulus())?;
    let inputs = inputs_from(vec![
        (
            "coeffs",
            json!([t.alpha().value(), t.beta().value(), t.gamma().value()]),
        ),
        ("set", json!(path.display().to_string())),
    ]);
    let (output, status) = match find_progression(&set, &t)? {
        None => (json!({"status": "pass"}), Status::Pass),
        Some((a, b, c)) => (
            json!({
                "status": "fail",
                "witness": [point_value(&a), point_value(&b), point_value(&c)],
            }),
            Status::Fail,
        ),
    };
    let line = serde_json::to_string(&output)?;
    Ok(Outcome {
        command: "verify",
        inputs,
        output,
        status,
        lines: vec![line],
    })
}

fn cmd_search(
    q: u64,
    n: usize,
    coeffs: &str,
    mode: Mode,
    seed: u64,
    restarts: u32,
    budget: Option<u64>,
) -> Result<Outcome> {
    let t = CoefficientTriple::parse(coeffs, q)?;
    let coeffs_echo = json!([t.alpha().value(), t.beta().value(), t.gamma().value()]);
    let (result, inputs) = match mode {
        Mode::Exact => {
            let mut entries = Vec::new();
            if let Some(b) = budget {
                entries.push(("budget", json!(b)));
            }
            entries.extend([
                ("coeffs", coeffs_echo),
                ("mode", json!("exact")),
                ("n", json!(n)),
                ("q", json!(q)),
            ]);
            (exhaustive_max(q, n, &t, budget)?, inputs_from(entries))
        }
        Mode::Greedy => (
            greedy_random(q, n, &t, seed, restarts)?,
            inputs_from(vec![
                ("coeffs", coeffs_echo),
                ("mode", json!("greedy")),
                ("n", json!(n)),
                ("q", json!(q)),
                ("restarts", json!(restarts)),
                ("seed", json!(seed)),
            ]),
        ),
    };
    let output = serde_json::to_value(&result)?;
    let line = serde_json::to_string(&output)?;
    Ok(Outcome {
        command: "search",
        inputs,
        output,
        status: Status::Info,
        lines: vec![line],
    })
}

fn cmd_check_trials(q: u64, n: usize, d: Option<&str>, trials: u32, seed: u64) -> Result<Outcome> {
    let d = d.map(str::parse::<RationalDegree>).transpose()?;
    let reports = proposition_trials(q, n, d, trials, seed)?;
    let passed = reports.iter().filter(|r| r.pass).count();
    let status = if reports.is_empty() {
        Status::Info
    } else if passed == reports.len() {
        Status::Pass
    } else {
        Status::Fail
    };
    let mut lines = Vec::with_capacity(reports.len() + 1);
    let mut report_values = Vec::with_capacity(reports.len());
    for report in &reports {
        let value = serde_json::to_value(report)?;
        lines.push(serde_json::to_string(&value)?);
        report_values.push(value);
    }
    let summary = json!({"passed": passed, "status": status, "trials": reports.len()});
    lines.push(serde_json::to_string(&summary)?);

    let mut entries = Vec::new();
    if let Some(d) = d {
        entries.push(("d", json!(d.to_string())));
    }
    entries.extend([
        ("n", json!(n)),
        ("q", json!(q)),
        ("seed", json!(seed)),
        ("trials", json!(trials)),
    ]);
    Ok(Outcome {
        command: "check",
        inputs: inputs_from(entries),
        output: json!({"reports": report_values, "summary": summary}),
        status,
        lines,
    })
}

fn cmd_check_set(path: &std::path::Path, coeffs: &str) -> Result<Outcome> {
    let set = load_set(path)?;
    let t = CoefficientTriple::parse(coeffs, set.modulus())?;
    let inputs = inputs_from(vec![
        (
            "coeffs",
            json!([t.alpha().value(), t.beta().value(), t.gamma().value()]),
        ),
        ("set", json!(path.display().to_string())),
    ]);
    // a set that is not progression-free is a failed check, not a usage error
    let (output, status) = match verify_theorem_pipeline(&set, &t) {
        Ok(report) => {
            let status = if report.pass {
                Status::Pass
            } else {
                Status::Fail
            };
            (serde_json::to_value(&report)?, status)
        }
        Err(Error::ProgressionFound(a, b, c)) => (
            json!({
                "status": "fail",
                "witness": [point_value(&a), point_value(&b), point_value(&c)],
            }),
            Status::Fail,
        ),
        Err(e) => return Err(e),
    };
    let line = serde_json::to_string(&output)?;
    Ok(Outcome {
        command: "check",
        inputs,
        output,
        status,
        lines: vec![line],
    })
}

fn cmd_converge(q: u64, n_list: &str, csv: Option<&std::path::Path>) -> Result<Outcome> {
    require_counting_base(q)?;
    let ns = n_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad dimension {s:?} in --n-list")))
        })
        .collect::<Result<Vec<_>>>()?;
    if ns.is_empty() {
        return Err(Error::Parse(
            "--n-list must name at least one dimension".into(),
        ));
    }
    let rows = convergence_report(q, &ns)?;
    let output = serde_json::to_value(&rows)?;
    if let Some(path) = csv {
        let mut text = String::from("n,exactLog,limit,gap\n");
        for row in &rows {
            text.push_str(&format!(
                "{},{},{},{}\n",
                row.n,
                serde_json::to_string(&row.exact_log)?,
                serde_json::to_string(&row.limit)?,
                serde_json::to_string(&row.gap)?,
            ));
        }
        std::fs::write(path, text)?;
    }
    let mut entries = Vec::new();
    if let Some(path) = csv {
        entries.push(("csv", json!(path.display().to_string())));
    }
    entries.extend([("nList", json!(ns)), ("q", json!(q))]);
    let line = serde_json::to_string(&output)?;
    Ok(Outcome {
        command: "converge",
        inputs: inputs_from(entries),
        output,
        status: Status::Info,
        lines: vec![line],
    })
}
