//! Command-line front end.
//!
//! Exit codes: 0 ok, 2 usage or syntax, 3 not inverse, 4 stuck,
//! 5 verification failed, 6 enumeration cap exceeded.

pub mod commands;
pub mod json;
pub mod parse;
pub mod selftest;

use std::io::Read;

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::freealg::{Alphabet, Field};

pub use commands::{cmd_certify, cmd_factor, cmd_membership};
pub use parse::{parse_biop, parse_map, parse_poly};
pub use selftest::{cmd_selftest, Fault, SelftestSizes};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_INVERSE: i32 = 3;
pub const EXIT_STUCK: i32 = 4;
pub const EXIT_VERIFICATION_FAILED: i32 = 5;
pub const EXIT_CAP_EXCEEDED: i32 = 6;

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotInverse { .. } => EXIT_NOT_INVERSE,
        Error::Stuck => EXIT_STUCK,
        Error::VerificationFailed(_) | Error::CertificateFailure(_) => EXIT_VERIFICATION_FAILED,
        Error::CapExceeded { .. } => EXIT_CAP_EXCEEDED,
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub field: Field,
    /// `None` lets commands use their natural alphabet.
    pub alphabet: Option<Alphabet>,
    pub seed: u64,
    pub degree_cap: usize,
    pub jobs: usize,
    pub json: bool,
}

impl Default for SessionConfig {
    fn default() -> SessionConfig {
        SessionConfig {
            field: Field::Rationals,
            alphabet: None,
            seed: 0,
            degree_cap: 24,
            jobs: 1,
            json: false,
        }
    }
}

/// Result of one command: exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn error(e: &Error) -> Outcome {
        Outcome {
            code: exit_code(e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "freetame", version, about = "Construct and factor z-fixing automorphisms of F<x,y,z>")]
struct Cli {
    /// Coefficient field: `q` or `fp:<prime>`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Comma-separated generator names.
    #[arg(long, global = true)]
    alphabet: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest input degree accepted.
    #[arg(long, global = true, default_value_t = 24)]
    degree_cap: usize,
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Line-delimited JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that two maps are mutually inverse.
    Certify {
        /// Map text, `@file`, or `-` for stdin.
        map: String,
        /// Inverse map text, `@file`, or `-` for stdin.
        inverse: String,
    },
    /// Factor a Smith, Anick or presented-product input into elementary steps.
    Factor {
        /// JSON text, `@file`, or `-` for stdin.
        input: String,
    },
    /// Decide membership of R in the subalgebra generated by z and f, up to a degree bound.
    Membership {
        f: String,
        r: String,
        #[arg(long)]
        bound: usize,
    },
    /// Run the property suites.
    Selftest {
        /// Multiplies the default sample counts.
        #[arg(long, default_value_t = 1)]
        scale: usize,
        #[arg(long, hide = true)]
        inject_fault: Option<String>,
    },
}

/// Reads an argument: `-` is stdin, `@path` a file, anything else literal.
fn read_arg(arg: &str, stdin: &mut dyn Read, used_stdin: &mut bool) -> Result<String, String> {
    if arg == "-" {
        if *used_stdin {
            return Err("stdin can be read only once".into());
        }
        *used_stdin = true;
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| format!("reading stdin: {e}"))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| format!("reading {path}: {e}"))
    } else {
        Ok(arg.to_string())
    }
}

fn usage(message: String) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: format!("error: {message}\n"),
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let field = match cli.field.parse::<Field>() {
        Ok(f) => f,
        Err(e) => return Outcome::error(&e),
    };
    let alphabet = match cli.alphabet.as_deref().map(|a| Alphabet::new(a.split(',').map(str::trim))) {
        None => None,
        Some(Ok(a)) => Some(a),
        Some(Err(e)) => return Outcome::error(&e),
    };
    if cli.jobs == 0 {
        return usage("--jobs must be at least 1".into());
    }
    let cfg = SessionConfig {
        field,
        alphabet,
        seed: cli.seed,
        degree_cap: cli.degree_cap,
        jobs: cli.jobs,
        json: cli.json,
    };
    let mut used = false;
    let mut read = |s: &str| read_arg(s, stdin, &mut used);
    match cli.command {
        Command::Certify { map, inverse } => match (read(&map), read(&inverse)) {
            (Ok(m), Ok(i)) => cmd_certify(&cfg, &m, &i),
            (Err(e), _) | (_, Err(e)) => usage(e),
        },
        Command::Factor { input } => match read(&input) {
            Ok(text) => cmd_factor(&cfg, &text),
            Err(e) => usage(e),
        },
        Command::Membership { f, r, bound } => match (read(&f), read(&r)) {
            (Ok(f), Ok(r)) => cmd_membership(&cfg, &f, &r, bound),
            (Err(e), _) | (_, Err(e)) => usage(e),
        },
        Command::Selftest { scale, inject_fault } => {
            let fault = match inject_fault.as_deref() {
                None => None,
                Some("sign-flip") => Some(Fault::SignFlip),
                Some(other) => return usage(format!("unknown fault `{other}`")),
            };
            cmd_selftest(&cfg, &SelftestSizes::default().scaled(scale), fault)
        }
    }
}
