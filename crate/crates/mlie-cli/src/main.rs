//! `mlie`: command-line front end for the truncated Monster Lie algebra engine.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{Format, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "mlie", version, about = "Exact computations in truncations of the Monster Lie algebra")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

/// Run settings; flags override values from `--config`.
#[derive(Args, Debug, Clone, Default)]
pub struct GlobalOpts {
    /// JSON run configuration file.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    /// Truncation height (at least 2).
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Generator subset, e.g. `1:2,2:1,3:1` (family j with its k ≤ K).
    #[arg(long, global = true)]
    pub subset: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficients c(-1), c(0), …, c(J) of J(q) = j(q) - 744.
    Jcoef {
        #[arg(long)]
        max: i64,
    },
    /// Free Lie algebra dimension at bidegree (m,n), by the Witt formula.
    Dims {
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: i64,
        /// Use the generator counts of 𝔪 and compare with c(mn) (the default unless --subset is given).
        #[arg(long = "true")]
        true_counts: bool,
    },
    /// Root lattice queries.
    Roots {
        #[command(subcommand)]
        cmd: RootsCmd,
    },
    /// Same as `roots span`.
    Span(SpanArgs),
    /// Same as `roots possys`.
    Possys(PossysArgs),
    /// Bracket of two elements, e.g. `bracket "e(-1)" "e(0,2,1)"`.
    Bracket { x: String, y: String },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// exp(ad x) on the λ-window: its action on `--apply`, or the whole operator.
    Exp {
        x: String,
        #[arg(long)]
        apply: Option<String>,
        /// Also write the operator as GradedOp JSON.
        #[arg(long)]
        save: Option<std::path::PathBuf>,
    },
    /// Layer decomposition of a GradedOp JSON operator.
    Decompose {
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long, default_value_t = 1)]
        n0: i64,
    },
    /// Factor the group commutator (exp(u x_α), exp(v y_β)) over the root span.
    Commutator {
        /// Root α, e.g. `a(0,2,1)` or `a(-1)`; its root vector is used.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        u: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        v: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum RootsCmd {
    /// Membership and invariants of a lattice point, e.g. `roots test "2*a(-1) + a(2,1)"`.
    Test {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    Span(SpanArgs),
    Possys(PossysArgs),
}

#[derive(Args, Debug)]
pub struct SpanArgs {
    #[arg(allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(allow_hyphen_values = true)]
    pub beta: String,
    /// Also list S(α,β) = {aα + bβ : a,b ≥ 1} ∩ Δ.
    #[arg(long = "compare-S")]
    pub compare_s: bool,
}

#[derive(Args, Debug)]
pub struct PossysArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<i64>,
    /// Search for a system containing both roots instead.
    #[arg(long, num_args = 2, value_names = ["ALPHA", "BETA"], allow_hyphen_values = true)]
    pub containing: Option<Vec<String>>,
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// L:1–L:6b from the base relations, for every letter pair of the subset.
    Identities,
    /// The standard GL₂ relation suite in one model.
    Gl2 {
        #[arg(long, value_enum)]
        model: Gl2ModelArg,
    },
    /// Every relation of G(𝔪) in its host representation.
    Presentation {
        /// Comma-separated relation ids; all of them when omitted.
        #[arg(long, value_delimiter = ',')]
        relations: Option<Vec<String>>,
        /// Write the full report here.
        #[arg(long)]
        json: Option<std::path::PathBuf>,
        /// Corrupt every c_{ℓj} by a sign (mutation check).
        #[arg(long)]
        negate_c: bool,
    },
    /// exp(ad(gx)) = g exp(ad x) g⁻¹ for seeded g ∈ P̂⁺ and x ∈ n̂⁺.
    Adjoint,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gl2ModelArg {
    Ref2x2,
    AdjointM,
    AdjointLjk,
}

/// What a command produced: text lines, a JSON result, and an exit status.
pub struct Outcome {
    pub text: String,
    pub json: serde_json::Value,
    pub status: u8,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match RunConfig::resolve(&cli.global, &argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mlie: {e:#}");
            return ExitCode::from(2);
        }
    };
    let outcome = match commands::run(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("mlie: {e:#}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cfg.format {
        Format::Text => format!("# run {}\n{}", cfg.header_json(), outcome.text),
        Format::Json => {
            let doc = serde_json::json!({
                "schema": config::OUTPUT_SCHEMA,
                "config": cfg,
                "result": outcome.json,
            });
            format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
    };
    let written = match &cfg.output {
        Some(p) => std::fs::write(p, rendered.as_bytes()),
        None => std::io::stdout().lock().write_all(rendered.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("mlie: writing output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.status)
}
