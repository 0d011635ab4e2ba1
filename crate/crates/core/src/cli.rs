//! The `kdb` command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value as Json};

use crate::dump::{step_json, tables_json};
use crate::net::CanonicalNet;
use crate::semantics::{explore, run, Exploration, Terminal, Trace};
use crate::syntax::{parse_system, render, ParseError, System};
use crate::typesys::{check_system, TypeError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ILL_TYPED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ERR: i32 = 3;
pub const EXIT_LIMIT: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "kdb", version, about = "Check, run and explore Klaim-DB systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type-check a system (exit 0 ok, 1 type errors, 2 unreadable or unparsable).
    Check {
        file: PathBuf,
        /// Print diagnostics as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a system under a seeded random scheduler
    /// (exit 0 quiescent, 3 ERR reached, 4 step limit).
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_steps: usize,
        /// Write a JSON-lines trace to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Run even if the system does not type-check.
        #[arg(long)]
        unchecked: bool,
    },
    /// Explore every interleaving breadth-first up to a state bound
    /// (exit 0 done, 3 ERR reachable, 4 bound reached).
    Explore {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
        bound: u64,
        /// Write the state graph in Graphviz format.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        unchecked: bool,
    },
    /// Print the tables of the initial net as JSON.
    Dump { file: PathBuf },
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    color: bool,
}

impl Io<'_> {
    fn error(&mut self, msg: &str) {
        if self.color {
            let _ = writeln!(self.err, "\x1b[31merror\x1b[0m: {msg}");
        } else {
            let _ = writeln!(self.err, "error: {msg}");
        }
    }

    fn diag(&mut self, file: &Path, line: u32, col: u32, msg: &str) {
        let loc = format!("{}:{line}:{col}", file.display());
        if self.color {
            let _ = writeln!(self.err, "\x1b[1m{loc}\x1b[0m: {msg}");
        } else {
            let _ = writeln!(self.err, "{loc}: {msg}");
        }
    }
}

/// Entry point taking explicit arguments and output streams; returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let color = std::env::var("KDB_COLOR").is_ok_and(|v| v == "1");
    let mut io = Io { out, err, color };
    match cli.command {
        Command::Check { file, json } => cmd_check(&mut io, &file, json),
        Command::Run { file, seed, max_steps, trace, unchecked } => {
            cmd_run(&mut io, &file, seed, max_steps, trace.as_deref(), unchecked)
        }
        Command::Explore { file, bound, dot, unchecked } => {
            cmd_explore(&mut io, &file, bound as usize, dot.as_deref(), unchecked)
        }
        Command::Dump { file } => cmd_dump(&mut io, &file),
    }
}

fn load(io: &mut Io, file: &Path) -> Result<System, i32> {
    let src = std::fs::read_to_string(file).map_err(|e| {
        io.error(&format!("{}: {e}", file.display()));
        EXIT_INPUT
    })?;
    parse_system(&src).map_err(|e: ParseError| {
        io.diag(file, e.line, e.col, &e.message);
        EXIT_INPUT
    })
}

fn report_type_errors(io: &mut Io, file: &Path, errors: &[TypeError]) {
    for e in errors {
        io.diag(file, e.span.line, e.span.col, &format!("{} [{}]", e.message, e.kind));
    }
}

/// Diagnostics as a JSON array of `{span, kind, message}` objects.
pub fn errors_json(errors: &[TypeError]) -> Json {
    Json::Array(
        errors
            .iter()
            .map(|e| {
                json!({
                    "span": {"line": e.span.line, "col": e.span.col, "start": e.span.start, "end": e.span.end},
                    "kind": e.kind.as_str(),
                    "message": e.message,
                })
            })
            .collect(),
    )
}

fn cmd_check(io: &mut Io, file: &Path, as_json: bool) -> i32 {
    let sys = match load(io, file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let errors = check_system(&sys).err().unwrap_or_default();
    if as_json {
        let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&errors_json(&errors)).expect("json"));
    } else if errors.is_empty() {
        let _ = writeln!(io.out, "{}: ok", file.display());
    } else {
        report_type_errors(io, file, &errors);
    }
    if errors.is_empty() {
        EXIT_OK
    } else {
        EXIT_ILL_TYPED
    }
}

fn load_checked(io: &mut Io, file: &Path, unchecked: bool) -> Result<System, i32> {
    let sys = load(io, file)?;
    if !unchecked {
        if let Err(errors) = check_system(&sys) {
            report_type_errors(io, file, &errors);
            io.error("refusing to execute an ill-typed system (pass --unchecked to override)");
            return Err(EXIT_ILL_TYPED);
        }
    }
    Ok(sys)
}

/// Processes left over in a quiescent net, rendered as `$l :: P`.
fn stuck(cn: &CanonicalNet) -> Vec<String> {
    cn.processes().map(|(l, p)| format!("{l} :: {}", render(p))).collect()
}

/// Serializes a trace as JSON lines.
pub fn trace_jsonl(trace: &Trace) -> String {
    let mut s = String::new();
    for (i, step) in trace.steps.iter().enumerate() {
        let _ = writeln!(s, "{}", step_json(i, step));
    }
    let last = trace.last_ok_state();
    let fin = json!({
        "terminal": trace.terminal.name(),
        "tables": tables_json(last),
        "stuck": stuck(trace.final_state()),
    });
    let _ = writeln!(s, "{fin}");
    s
}

fn cmd_run(io: &mut Io, file: &Path, seed: u64, max_steps: usize, trace_out: Option<&Path>, unchecked: bool) -> i32 {
    let sys = match load_checked(io, file, unchecked) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let trace = run(&sys, seed, max_steps);
    if let Some(path) = trace_out {
        if let Err(e) = std::fs::write(path, trace_jsonl(&trace)) {
            io.error(&format!("{}: {e}", path.display()));
            return EXIT_INPUT;
        }
    }
    let _ = writeln!(io.out, "terminal: {} after {} steps", trace.terminal.name(), trace.steps.len());
    if trace.terminal == Terminal::Err {
        if let Some(last) = trace.steps.last() {
            let _ = writeln!(io.out, "error step: {}", last.label);
        }
    }
    let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&tables_json(trace.last_ok_state())).expect("json"));
    if trace.terminal == Terminal::Quiescent {
        for s in stuck(trace.final_state()) {
            let _ = writeln!(io.err, "stuck: {s}");
        }
    }
    match trace.terminal {
        Terminal::Quiescent => EXIT_OK,
        Terminal::Err => EXIT_ERR,
        Terminal::StepLimit => EXIT_LIMIT,
    }
}

/// Graphviz rendering of an exploration.
pub fn exploration_dot(ex: &Exploration) -> String {
    let mut s = String::from("digraph states {\n  node [shape=circle];\n");
    for (i, st) in ex.states.iter().enumerate() {
        let attrs = if !st.ok() {
            "label=\"ERR\", color=red"
        } else if ex.quiescent.binary_search(&i).is_ok() {
            "shape=doublecircle"
        } else {
            ""
        };
        if attrs.is_empty() {
            let _ = writeln!(s, "  s{i};");
        } else {
            let _ = writeln!(s, "  s{i} [{attrs}];");
        }
    }
    for (a, b, label) in &ex.edges {
        let _ = writeln!(s, "  s{a} -> s{b} [label=\"{} {}\"];", label.rule, label.actor);
    }
    s.push_str("}\n");
    s
}

fn cmd_explore(io: &mut Io, file: &Path, bound: usize, dot: Option<&Path>, unchecked: bool) -> i32 {
    let sys = match load_checked(io, file, unchecked) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let ex = explore(&sys, bound);
    if let Some(path) = dot {
        if let Err(e) = std::fs::write(path, exploration_dot(&ex)) {
            io.error(&format!("{}: {e}", path.display()));
            return EXIT_INPUT;
        }
    }
    let _ = writeln!(io.out, "states: {}", ex.states.len());
    let _ = writeln!(io.out, "transitions: {}", ex.edges.len());
    let _ = writeln!(io.out, "ERR reachable: {}", if ex.err_reachable { "yes" } else { "no" });
    let _ = writeln!(io.out, "quiescent states: {}", ex.quiescent.len());
    for &i in &ex.quiescent {
        let _ = writeln!(io.out, "state {i}: {}", tables_json(&ex.states[i]));
    }
    if ex.bound_hit {
        let _ = writeln!(io.out, "bound of {bound} states reached");
    }
    if ex.err_reachable {
        EXIT_ERR
    } else if ex.bound_hit {
        EXIT_LIMIT
    } else {
        EXIT_OK
    }
}

fn cmd_dump(io: &mut Io, file: &Path) -> i32 {
    let sys = match load(io, file) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let cn = CanonicalNet::canonicalize(&sys.net);
    let _ = writeln!(io.out, "{}", serde_json::to_string_pretty(&tables_json(&cn)).expect("json"));
    EXIT_OK
}
