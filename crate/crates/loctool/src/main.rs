//! `loctool`: catalog listing, single checks and the acceptance suite.
//!
//! Exit codes: 0 pass, 1 fail, 2 not applicable, 3 input or cap error.

use clap::{Parser, Subcommand};
use locality::caps::Caps;
use locality::io::{self, Instance, Kind, Object};
use locality::{catalog, run, suite, Error};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const INPUT_ERROR: u8 = 3;

// A closed pipe (`loctool export | head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

#[derive(Parser)]
#[command(name = "loctool", version, about = "Exact checks on fusion systems and localities")]
struct Cli {
    /// Print progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in instances.
    Catalog {
        /// Only instances of this kind.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Run one check on a catalog instance or an instance file.
    Check {
        #[arg(long)]
        instance: String,
        #[arg(long = "run")]
        check: String,
        /// Expected prime; a mismatch is an input error.
        #[arg(long)]
        p: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Word length for locality validation.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Run the acceptance criteria.
    Suite {
        /// Criterion id or a substring of its name.
        #[arg(long)]
        filter: Option<String>,
    },
    /// Print an instance in canonical form.
    Export {
        #[arg(long)]
        instance: String,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("loctool: {msg}");
    ExitCode::from(INPUT_ERROR)
}

fn instance(spec: &str) -> Result<Instance, Error> {
    if let Some(inst) = catalog::get(spec) {
        return Ok(inst);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Input(format!("`{spec}` is neither a catalog instance nor a readable file: {e}")))?;
    io::parse_instance(&text)
}

fn prime_of(obj: &Object) -> Option<usize> {
    match obj {
        Object::Group(_) => None,
        Object::Fusion(f) => Some(f.p()),
        Object::Locality(l) => Some(l.p()),
        Object::Kernel(k) => Some(k.locality.p()),
        Object::Product(p) => Some(p.locality.p()),
    }
}

fn cmd_catalog(kind: Option<String>) -> ExitCode {
    let kind = match kind.as_deref().map(|k| Kind::parse(k).ok_or(k)) {
        Some(Err(k)) => {
            let kinds: Vec<&str> = Kind::ALL.iter().map(|k| k.as_str()).collect();
            return fail(format!("unknown kind `{k}`; expected one of {}", kinds.join(", ")));
        }
        Some(Ok(k)) => Some(k),
        None => None,
    };
    for e in catalog::entries().iter().filter(|e| kind.is_none_or(|k| k == e.kind)) {
        emit(&format!("{:<16} {:<17} {}", e.name, e.kind.as_str(), e.notes));
    }
    ExitCode::SUCCESS
}

fn cmd_check(spec: &str, check: &str, p: Option<usize>, out: Option<PathBuf>, depth: Option<usize>, verbose: bool) -> ExitCode {
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if !run::CHECKS.contains(&check) {
        return fail(format!("unknown check `{check}`; expected one of {}", run::CHECKS.join(", ")));
    }
    let inst = match instance(spec) {
        Ok(i) => i,
        Err(e) => return fail(e),
    };
    if !run::accepts(check).contains(&inst.kind) {
        return fail(format!("check `{check}` does not apply to a {} instance", inst.kind.as_str()));
    }
    let caps = match depth {
        Some(0) => return fail("depth must be positive"),
        Some(d) => Caps { depth: d, ..caps },
        None => inst.caps(&caps),
    };
    if verbose {
        eprintln!("loading {} ({})", inst.name, inst.kind.as_str());
    }
    let obj = match inst.materialize(&caps) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    if let (Some(want), Some(have)) = (p, prime_of(&obj)) {
        if want != have {
            return fail(format!("instance is at p = {have}, not {want}"));
        }
    }
    let report = match run::run_check(check, &obj, &caps) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let text = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text + "\n") {
                return fail(format!("cannot write {}: {e}", path.display()));
            }
        }
        None => emit(&text),
    }
    if verbose {
        eprintln!("{}: {:?} in {} ms", report.theorem, report.outcome(), report.timing_ms);
    }
    ExitCode::from(report.outcome().exit_code() as u8)
}

fn cmd_suite(filter: Option<String>, verbose: bool) -> ExitCode {
    let caps = match Caps::from_env() {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let selected = suite::select(filter.as_deref());
    if selected.is_empty() {
        return fail(format!("no criterion matches `{}`", filter.unwrap_or_default()));
    }
    let mut results = Vec::new();
    for c in &selected {
        if verbose {
            eprintln!("running criterion {} ({})", c.id, c.name);
        }
        let r = suite::run(c, &caps);
        emit(&r.line());
        results.push(r);
    }
    let code = suite::exit_code(&results);
    let aggregate = serde_json::json!({"exit_code": code, "criteria": results});
    emit(&serde_json::to_string_pretty(&aggregate).expect("serializes"));
    ExitCode::from(code as u8)
}

fn cmd_export(spec: &str) -> ExitCode {
    match instance(spec).and_then(|i| i.to_json()) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Catalog { kind } => cmd_catalog(kind),
        Command::Check { instance, check, p, out, depth } => cmd_check(&instance, &check, p, out, depth, cli.verbose),
        Command::Suite { filter } => cmd_suite(filter, cli.verbose),
        Command::Export { instance } => cmd_export(&instance),
    }
}
