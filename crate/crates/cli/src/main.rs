//! `degenlab` command-line front end.
//!
//! Exit codes: 0 when every assertion of the campaign holds, 1 when an
//! assertion or a numerical certificate fails, 2 for invalid configuration.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use degenlab::campaign::{exit_code, run, Command, RunConfig};
use degenlab::error::Error;

#[derive(Debug, Parser)]
#[command(name = "degenlab", version, about = "Verification campaigns for nonuniformly elliptic p-Laplace equations")]
struct Cli {
    /// constants, classify, counterexample-verify, norms, solve, moser-check or sweep
    command: String,
    /// Plain-text `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    p: Option<String>,
    /// Integrability of mu: a decimal, a fraction or `inf`.
    #[arg(long)]
    s: Option<String>,
    /// Integrability of 1/lambda: a decimal, a fraction or `inf`.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    theta: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    /// Shell quadrature depth.
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    imax: Option<String>,
    /// Divergence samples per shell.
    #[arg(long)]
    samples: Option<String>,
    /// Grid spacing.
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    max_iterations: Option<String>,
    /// `affine` or `reference:<k>`.
    #[arg(long)]
    boundary: Option<String>,
    /// Sweep grid as `s:t,s:t,...`.
    #[arg(long)]
    pairs: Option<String>,
    /// Sweep grid as reciprocal sums, with `s = t`.
    #[arg(long)]
    inv_sums: Option<String>,
    /// Truncation depths as `a..b` or `k,k,...`.
    #[arg(long)]
    depths: Option<String>,
    /// `auto`, `counterexample` or `reference`.
    #[arg(long)]
    family: Option<String>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    output: Option<String>,
    /// Binary dump of the solved field.
    #[arg(long)]
    field_output: Option<String>,
}

impl Cli {
    fn flags(&self) -> [(&'static str, &Option<String>); 19] {
        [
            ("d", &self.d),
            ("p", &self.p),
            ("s", &self.s),
            ("t", &self.t),
            ("theta", &self.theta),
            ("alpha", &self.alpha),
            ("depth", &self.depth),
            ("imax", &self.imax),
            ("samples", &self.samples),
            ("h", &self.h),
            ("tol", &self.tol),
            ("max-iterations", &self.max_iterations),
            ("boundary", &self.boundary),
            ("pairs", &self.pairs),
            ("inv-sums", &self.inv_sums),
            ("depths", &self.depths),
            ("family", &self.family),
            ("output", &self.output),
            ("field-output", &self.field_output),
        ]
    }

    fn run_config(&self) -> Result<RunConfig, Error> {
        let command: Command = self.command.parse()?;
        let mut cfg = RunConfig::new(command);
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
            // the positional command wins over a `command` key
            cfg.command = command;
        }
        for (key, value) in self.flags() {
            if let Some(v) = value {
                cfg.apply(key, v)?;
            }
        }
        Ok(cfg)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.run_config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = run(&cfg);
    let code = exit_code(&result);
    match &result {
        Ok(outcome) => {
            let written = match &cfg.output {
                Some(path) => std::fs::write(path, &outcome.csv).map_err(|e| format!("{}: {e}", path.display())),
                None => std::io::stdout().write_all(outcome.csv.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            for f in &outcome.failures {
                eprintln!("FAIL {f}");
            }
            if outcome.passed() {
                eprintln!("{}: all checks passed", outcome.command);
            } else {
                eprintln!("{}: {} check(s) failed", outcome.command, outcome.failures.len());
            }
        }
        Err(e) => eprintln!("error: {e}"),
    }
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
