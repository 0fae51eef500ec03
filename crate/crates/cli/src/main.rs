use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use stablehom::algebra::Field;
use stablehom::dsl;
use stablehom::session::{run, RunConfig, SessionReport};

/// Runs stablehom session files and reports query results.
#[derive(Parser, Debug)]
#[command(name = "stablehom", version, about)]
struct Cli {
    /// Session files (`.shl`); several files run in parallel.
    #[arg(required = true)]
    files: Vec<PathBuf>,

    /// Write the JSON report to this path.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,

    /// Coefficient field for every ring: `qq` or `gf:P`.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,

    /// Degree cap for Gröbner computations; exceeding it exits with status 3.
    #[arg(long, value_name = "N")]
    max_degree: Option<i32>,

    /// Standard-resolution window `LO..HI`; must contain -2..1.
    #[arg(long, value_name = "LO..HI", value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i32, i32)>,

    /// Run redundant cross-checks alongside each query.
    #[arg(long)]
    verify: bool,

    /// Only parse and validate, printing the canonical form.
    #[arg(long)]
    check: bool,
}

fn parse_field(s: &str) -> Result<Field, String> {
    match s.to_ascii_lowercase().as_str() {
        "qq" => Ok(Field::Rationals),
        other => {
            let p = other
                .strip_prefix("gf:")
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| format!("expected `qq` or `gf:P`, found `{s}`"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

fn parse_window(s: &str) -> Result<(i32, i32), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected LO..HI, found `{s}`"))?;
    let lo = lo.trim().parse::<i32>().map_err(|e| e.to_string())?;
    let hi = hi.trim().parse::<i32>().map_err(|e| e.to_string())?;
    if lo > -2 || hi < 1 {
        return Err(format!("window {lo}..{hi} must contain -2..1"));
    }
    Ok((lo, hi))
}

/// Combines exit codes: parse failures dominate, then resource limits.
fn worse(a: i32, b: i32) -> i32 {
    let rank = |c: i32| [0, 2, 3, 1].iter().position(|&x| x == c).unwrap_or(0);
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

enum Outcome {
    ParseFailed,
    Ran(SessionReport),
    Checked(String),
}

fn process(path: &PathBuf, cfg: &RunConfig, check: bool) -> Outcome {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            return Outcome::ParseFailed;
        }
    };
    match dsl::parse(&text) {
        Err(diags) => {
            for d in diags {
                eprintln!("{}:{d}", path.display());
            }
            Outcome::ParseFailed
        }
        Ok(ast) if check => Outcome::Checked(ast.to_string()),
        Ok(ast) => Outcome::Ran(run(&ast, cfg)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig { field: cli.field, max_degree: cli.max_degree, window: cli.window, verify: cli.verify };

    let outcomes: Vec<Outcome> = std::thread::scope(|s| {
        let handles: Vec<_> = cli.files.iter().map(|f| s.spawn(|| process(f, &cfg, cli.check))).collect();
        handles.into_iter().map(|h| h.join().expect("session thread panicked")).collect()
    });

    let multiple = cli.files.len() > 1;
    let mut reports = Vec::new();
    let mut code = 0;
    for (path, outcome) in cli.files.iter().zip(outcomes) {
        if multiple {
            println!("== {}", path.display());
        }
        match outcome {
            Outcome::ParseFailed => code = worse(code, 1),
            Outcome::Checked(canonical) => print!("{canonical}"),
            Outcome::Ran(rep) => {
                print!("{}", rep.to_text());
                code = worse(code, rep.exit_code());
                reports.push(rep);
            }
        }
    }

    if let Some(out) = &cli.json {
        let text = if let [single] = reports.as_slice() {
            single.to_json()
        } else {
            serde_json::to_string_pretty(&reports).expect("reports serialize")
        };
        if let Err(e) = fs::write(out, text + "\n") {
            eprintln!("{}: {e}", out.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code as u8)
}
