use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::Value;

use optbench::benchmarks::{self, Overrides};
use optbench::harness::{self, emit_report, RunConfig};
use optbench::solvers::SolverId;
use optbench::{BenchError, NoiseKey, NoisePolicy, Problem, Result};

#[derive(Parser)]
#[command(name = "bench", version, about = "Hard optimization benchmarks and trial runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every benchmark id.
    List,
    /// Show bounds, direction, constraints and optimum of one benchmark.
    Describe {
        id: String,
        /// Problem parameter override, e.g. `--set D=5`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Evaluate a benchmark at one point.
    Eval {
        id: String,
        /// Comma-separated coordinates.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "eval-index", default_value_t = 0)]
        eval_index: u64,
        #[arg(long = "noise-policy", default_value = "per_evaluation")]
        noise_policy: String,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run seeded trials of a solver on a benchmark.
    Run {
        #[arg(long)]
        problem: Option<String>,
        /// de, sa, nm, al+de or al+nm.
        #[arg(long)]
        solver: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON object of flat overrides; command-line flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long = "eps-f")]
        eps_f: Option<f64>,
        #[arg(long = "eps-x")]
        eps_x: Option<f64>,
        /// Problem parameter or solver setting, e.g. `--set D=5 --set max_evals=5000`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run the oracle verification suite.
    Verify,
}

fn parse_pair(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| BenchError::Usage(format!("expected KEY=VALUE, got `{s}`")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| BenchError::Usage(format!("`{v}` is not a number in `{s}`")))?;
    Ok((k.trim().to_string(), v))
}

fn overrides(pairs: &[String]) -> Result<Overrides> {
    pairs.iter().map(|s| parse_pair(s)).collect()
}

fn describe(p: &Problem) -> String {
    let mut out = format!("{}: {}\n", p.id, p.title);
    out += &format!("  dimension  {}\n", p.dimension);
    out += &format!("  direction  {:?}\n", p.direction);
    let first = p.bounds[0];
    if p.bounds.iter().all(|b| *b == first) {
        out += &format!("  bounds     [{}, {}] per coordinate\n", first.lo, first.hi);
    } else {
        let b: Vec<String> = p.bounds.iter().map(|b| format!("[{}, {}]", b.lo, b.hi)).collect();
        out += &format!("  bounds     {}\n", b.join(" x "));
    }
    if !p.feasibility.groups.is_empty() {
        let g: Vec<String> = p
            .feasibility
            .groups
            .iter()
            .map(|g| {
                let r: Vec<&str> = g.residuals.iter().map(|r| r.name.as_str()).collect();
                format!("{} ({})", g.name, r.join(", "))
            })
            .collect();
        out += &format!("  feasible   {:?} of {}\n", p.feasibility.combinator, g.join("; "));
    }
    for e in &p.equalities {
        out += &format!("  equality   {} (|h| <= {})\n", e.name, e.tol);
    }
    if !p.integer_coords.is_empty() {
        out += &format!("  integer    coordinates {:?}\n", p.integer_coords);
    }
    if let Some(n) = p.noise {
        out += &format!("  noise      {}\n", n.as_str());
    }
    out += &format!("  optimum    {:?}, value {}\n", p.optimum.kind(), p.optimum.value());
    for (k, v) in &p.params {
        out += &format!("  param      {k} = {v}\n");
    }
    out
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::List => {
            for id in benchmarks::CATALOG {
                let p = benchmarks::build_default(id)?;
                writeln!(
                    stdout,
                    "{:<13} D={:<3} {:<9} {:<13} {}",
                    id,
                    p.dimension,
                    format!("{:?}", p.direction).to_lowercase(),
                    format!("{:?}", p.optimum.kind()),
                    p.title
                )?;
            }
        }
        Command::Describe { id, set } => {
            let p = benchmarks::build(&id, &overrides(&set)?, NoisePolicy::default())?;
            write!(stdout, "{}", describe(&p))?;
        }
        Command::Eval {
            id,
            x,
            seed,
            eval_index,
            noise_policy,
            set,
        } => {
            let policy: NoisePolicy = noise_policy.parse().map_err(BenchError::Usage)?;
            let p = benchmarks::build(&id, &overrides(&set)?, policy)?;
            let v = p.evaluate(&x, NoiseKey::new(seed, eval_index))?;
            let f = p.is_feasible(&x)?;
            writeln!(stdout, "value {v}")?;
            writeln!(stdout, "feasible {}", f.feasible)?;
            if !f.feasible {
                writeln!(stdout, "violation {}", f.violation)?;
            }
            for (e, r) in p.equalities.iter().zip(&f.equality_residuals) {
                writeln!(stdout, "equality {} {r}", e.name)?;
            }
        }
        Command::Run {
            problem,
            solver,
            trials,
            seed,
            config,
            out,
            format,
            eps_f,
            eps_x,
            set,
        } => {
            let mut cfg = RunConfig::new("", SolverId::De);
            if let Some(path) = config {
                cfg.apply_json(&std::fs::read_to_string(path)?)?;
            }
            if let Some(p) = problem {
                cfg.problem = p;
            }
            if let Some(s) = solver {
                cfg.solver = s.parse()?;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            if let Some(f) = format {
                cfg.format = f.parse()?;
            }
            if let Some(e) = eps_f {
                cfg.eps_f = e;
            }
            if let Some(e) = eps_x {
                cfg.eps_x = e;
            }
            for (k, v) in overrides(&set)? {
                cfg.set(&k, &Value::from(v))?;
            }
            if cfg.problem.is_empty() {
                return Err(BenchError::Usage("--problem is required".into()));
            }
            let to_stdout = out.is_none() && cfg.out.is_none();
            if out.is_some() {
                cfg.out = out;
            }
            let table = harness::run_trials(&cfg)?;
            if to_stdout {
                stdout.write_all(&emit_report(&table, cfg.format)?)?;
            }
            let a = &table.aggregates;
            eprintln!(
                "{} / {}: {} of {} trials succeeded (rate {:.2}); best {:?}, median {:?}, worst {:?}",
                table.problem, table.solver, a.successes, a.trials, a.success_rate, a.best_value, a.median_value,
                a.worst_value
            );
        }
        Command::Verify => {
            let report = harness::verify_suite()?;
            writeln!(stdout, "{report}")?;
            if !report.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("bench: {e}");
            match e {
                BenchError::Usage(_) | BenchError::Contract(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use optbench::harness::Format;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("D=5").unwrap(), ("D".to_string(), 5.0));
        assert!(parse_pair("D").is_err());
        assert!(parse_pair("D=x").is_err());
    }

    #[test]
    fn format_names() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
    }
}
