//! Command-line driver: scenario loading, dispatch to the engines, and
//! certificate output.

pub mod fixtures;
pub mod run;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

pub use run::{run, verify_text, Command, Outcome};
pub use scenario::{load_scenario, parse_scenario, Overrides, Scenario, Task};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Cmd {
    Check,
    Construct,
    Extend,
    Equiv,
    Oracle,
    Verify,
}

/// Decide and construct plane models with collinear Galois points over
/// finite fields.
#[derive(Debug, Parser)]
#[command(name = "galpt", version)]
pub struct Args {
    pub command: Cmd,
    /// Scenario file; names of bundled fixtures such as `h9_inner.json` work
    /// from any directory.
    pub scenario: Option<PathBuf>,
    /// Certificate path: written by engine commands, read by `verify`.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Degree of the working extension over the declared field.
    #[arg(long = "working-ext")]
    pub working_ext: Option<u32>,
    /// Bound on group closures and automorphism enumeration.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Print the certificate JSON instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

/// Runs a parsed command line. Returns the text for standard output and
/// the exit code; certificates are written as a side effect.
pub fn execute(args: &Args) -> (String, i32) {
    if args.command == Cmd::Verify {
        let Some(path) = args.cert.as_ref().or(args.scenario.as_ref()) else {
            return ("error [PARSE_ERROR]: verify needs --cert PATH\n".into(), run::EXIT_INVALID);
        };
        return match std::fs::read_to_string(path) {
            Ok(text) => {
                let out = verify_text(&text);
                (out.summary, out.exit)
            }
            Err(e) => (format!("error [PARSE_ERROR]: {}: {e}\n", path.display()), run::EXIT_INVALID),
        };
    }
    let Some(path) = &args.scenario else {
        return ("error [PARSE_ERROR]: a scenario file is required\n".into(), run::EXIT_INVALID);
    };
    let ov = Overrides { seed: args.seed, working_ext: args.working_ext, cap: args.cap };
    let sc = match load_scenario(path, &ov) {
        Ok(sc) => sc,
        Err(e) => {
            let out = run::error_outcome(&e);
            return (out.summary, out.exit);
        }
    };
    let cmd = match args.command {
        Cmd::Check => Command::Check,
        Cmd::Construct => Command::Construct,
        Cmd::Extend => Command::Extend,
        Cmd::Equiv => Command::Equiv,
        Cmd::Oracle => Command::Oracle,
        Cmd::Verify => unreachable!(),
    };
    let out = run(&sc, cmd);
    let mut text = out.summary.clone();
    if let Some(cert) = &out.certificate {
        let body = galpt_core::wire::to_text(cert);
        if let Some(p) = &args.cert {
            if let Err(e) = std::fs::write(p, &body) {
                return (format!("{text}error: cannot write {}: {e}\n", p.display()), run::EXIT_INVALID);
            }
            text.push_str(&format!("certificate written to {}\n", p.display()));
        }
        if args.json {
            text = body;
        }
    }
    (text, out.exit)
}
