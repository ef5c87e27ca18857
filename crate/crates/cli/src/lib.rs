//! Command-line scenario runner for `relqi`.
//!
//! Exit codes: 0 success, 1 numerical or I/O failure, 2 usage error,
//! 3 invalid parameters, 4 failed self-check.

use std::collections::BTreeMap;
use std::io::Write;

use clap::Parser;
use serde_json::json;

use relqi::acceptance::{self, AcceptanceConfig, CRITERIA};
use relqi::horizon::PhysicalConstants;

pub mod output;
pub mod params;
pub mod scenarios;

use output::{Format, Metadata, Output};
use params::{parse_config, Params};

pub const TOOL: &str = "relqi";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    SelfCheck(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numerical(_) | CliError::Io(_) => 1,
            CliError::SelfCheck(_) => 4,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
            CliError::SelfCheck(_) => "selfcheck",
        }
    }
}

impl From<relqi::Error> for CliError {
    fn from(e: relqi::Error) -> Self {
        match e {
            relqi::Error::Numerical(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = TOOL, version, about = "Relativistic quantum information scenarios")]
struct Cli {
    /// Scenario to run (see --list).
    #[arg(long)]
    scenario: Option<String>,
    /// key = value parameter file.
    #[arg(long)]
    config: Option<std::path::PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Run the acceptance criteria instead of a scenario.
    #[arg(long)]
    selfcheck: bool,
    /// Comma-separated criterion ids for --selfcheck.
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u8>,
    /// Parameter override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Print the scenario names.
    #[arg(long)]
    list: bool,
    /// Check that FILE is well-formed scenario output.
    #[arg(long, value_name = "FILE")]
    validate: Option<std::path::PathBuf>,
}

const DEFAULT_SEED: u64 = 0x5eed;

/// Remaining arguments and the extracted `(key, value)` pairs.
type Dotted = (Vec<String>, Vec<(String, String)>);

/// Splits `--tol.NAME[=V]` and `--grid.NAME[=V]` out of the argument list.
fn extract_dotted(args: Vec<String>) -> Result<Dotted, CliError> {
    let mut rest = Vec::new();
    let mut dotted = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(body) = a.strip_prefix("--").filter(|b| b.starts_with("tol.") || b.starts_with("grid.")) else {
            rest.push(a);
            continue;
        };
        let (k, v) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| CliError::Usage(format!("--{body} needs a value")))?;
                (body.to_string(), v)
            }
        };
        dotted.push((k, v));
    }
    Ok((rest, dotted))
}

/// Runs the tool and returns the process exit code.
pub fn run(args: Vec<String>) -> i32 {
    let mut scenario_name = None;
    let result = execute(args, &mut scenario_name);
    match result {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            if code == 3 {
                let diag = json!({ "error": e.kind(), "message": e.to_string(), "scenario": scenario_name });
                eprintln!("{diag}");
            } else {
                eprintln!("{TOOL}: {} error: {e}", e.kind());
            }
            code
        }
    }
}

fn execute(args: Vec<String>, scenario_name: &mut Option<String>) -> Result<i32, CliError> {
    let (args, dotted) = extract_dotted(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(0);
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };

    if cli.list {
        for s in scenarios::SCENARIOS {
            println!("{s}");
        }
        return Ok(0);
    }
    if let Some(path) = &cli.validate {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let parsed = output::validate(&text)?;
        println!("ok: scenario={} seed={} rows={} columns={}", parsed.scenario, parsed.seed, parsed.rows.len(), parsed.columns.len());
        return Ok(0);
    }

    let mut given = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => BTreeMap::new(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        given.insert(k.trim().to_string(), v.trim().to_string());
    }
    for (k, v) in dotted {
        given.insert(k, v);
    }

    // run-level keys may come from the config; flags take precedence
    let cfg_scenario = given.remove("scenario");
    let cfg_seed = given.remove("seed");
    let cfg_format = given.remove("format");
    let seed = match (cli.seed, cfg_seed) {
        (Some(s), _) => s,
        (None, Some(text)) => text.parse().map_err(|_| CliError::Validation(format!("seed `{text}` is not a u64")))?,
        (None, None) => DEFAULT_SEED,
    };
    let format = match (cli.format, cfg_format) {
        (Some(f), _) => f,
        (None, Some(text)) => <Format as clap::ValueEnum>::from_str(&text, true)
            .map_err(|_| CliError::Validation(format!("format `{text}` must be csv or json")))?,
        (None, None) => Format::Csv,
    };

    let params = Params::new(given);
    if cli.selfcheck {
        *scenario_name = Some("selfcheck".into());
        return selfcheck(&params, seed, &cli.criteria, cli.out.as_deref());
    }
    let Some(name) = cli.scenario.or(cfg_scenario) else {
        return Err(CliError::Usage("one of --scenario, --selfcheck, --list or --validate is required".into()));
    };
    if !scenarios::SCENARIOS.contains(&name.as_str()) {
        return Err(CliError::Usage(format!("unknown scenario `{name}`; known: {}", scenarios::SCENARIOS.join(", "))));
    }
    *scenario_name = Some(name.clone());

    let table = scenarios::run(&name, &params, seed)?;
    let resolved = params.resolved();
    let mut tolerances: BTreeMap<String, String> =
        resolved.iter().filter(|(k, _)| k.starts_with("tol.")).map(|(k, v)| (k.clone(), v.clone())).collect();
    tolerances.extend(table.tolerances);
    let out = Output {
        metadata: Metadata {
            tool: TOOL.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: name,
            seed,
            params: resolved.into_iter().filter(|(k, _)| !k.starts_with("tol.")).collect(),
            tolerances,
        },
        columns: table.columns,
        rows: table.rows,
        summary: table.summary,
    };
    emit(&out.render(format), cli.out.as_deref())?;
    Ok(0)
}

fn emit(text: &str, path: Option<&std::path::Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut lock = std::io::stdout().lock();
            lock.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn selfcheck(p: &Params, seed: u64, ids: &[u8], out: Option<&std::path::Path>) -> Result<i32, CliError> {
    let si = PhysicalConstants::<f64>::si();
    let mut cfg = AcceptanceConfig {
        seed,
        tolerance_scale: p.float("tol.scale", 1.0, 0.0, f64::MAX)?,
        constants: PhysicalConstants {
            hbar: p.value("const.hbar", si.hbar)?,
            c: p.value("const.c", si.c)?,
            g: p.value("const.g", si.g)?,
            k_b: p.value("const.k_b", si.k_b)?,
        },
        ..Default::default()
    };
    for key in p.keys_with_prefix("tol.") {
        if key != "scale" {
            cfg.overrides.insert(key.clone(), p.value(&format!("tol.{key}"), 0.0)?);
        }
    }
    p.finish()?;
    cfg.validate()?;

    let ids: Vec<u8> = if ids.is_empty() { (1..=CRITERIA.len() as u8).collect() } else { ids.to_vec() };
    let mut reports = Vec::new();
    for &id in &ids {
        if id == 0 || id as usize > CRITERIA.len() {
            return Err(CliError::Usage(format!("criterion {id} does not exist (1-{})", CRITERIA.len())));
        }
        let r = acceptance::run_criterion(id, &cfg)?;
        eprintln!("{r}");
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let doc = json!({
        "tool": TOOL,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "tolerance_scale": cfg.tolerance_scale,
        "passed": passed,
        "criteria": reports,
    });
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    emit(&text, out)?;
    if passed {
        Ok(0)
    } else {
        let failed: Vec<String> = reports.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
        Err(CliError::SelfCheck(format!("criteria failed: {}", failed.join(", "))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<String> {
        std::iter::once("relqi").chain(s.iter().copied()).map(String::from).collect()
    }

    #[test]
    fn dotted_flags_are_extracted() {
        let (rest, dotted) = extract_dotted(args(&["--tol.scale=0.5", "--grid.points", "7", "--seed", "3"])).unwrap();
        assert_eq!(rest, args(&["--seed", "3"]));
        assert_eq!(dotted, vec![("tol.scale".into(), "0.5".into()), ("grid.points".into(), "7".into())]);
        assert!(extract_dotted(args(&["--tol.x"])).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(args(&["--scenario", "nope"])), 2);
        assert_eq!(run(args(&[])), 2);
        assert_eq!(run(args(&["--scenario", "cluster-bound", "--set", "masses=-1"])), 3);
        assert_eq!(run(args(&["--selfcheck", "--criteria", "15", "--set", "const.c=0"])), 3);
        assert_eq!(run(args(&["--selfcheck", "--criteria", "99"])), 2);
    }
}
