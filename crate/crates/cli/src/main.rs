mod commands;
mod render;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use flipk_core::colimit::Functor;
use flipk_core::functors::Limits;
use flipk_core::kunneth::{default_primes, DEFAULT_DEPTH};
use flipk_core::supernat::is_prime;
use flipk_core::{parse_group, Decomposition, Error, GradedGroup, GradedGroupDoc, Result};
use serde_json::json;

use commands::Output;

#[derive(Parser)]
#[command(name = "flipk", version, about = "Graded abelian-group K-theory: tensor, Tor, Künneth flip, admissibility")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest presentation (generators or relations) a computation may build.
    #[arg(long, global = true, default_value_t = 64)]
    cap: usize,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
struct GradedArgs {
    /// K0 as a group expression.
    #[arg(long, conflicts_with = "file")]
    k0: Option<String>,
    /// K1 as a group expression.
    #[arg(long, conflicts_with = "file")]
    k1: Option<String>,
    /// A JSON document `{"K0": ..., "K1": ...}`.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctorArg {
    Tensor,
    Tor,
    Both,
}

#[derive(Subcommand)]
enum Verb {
    /// Smith normal form of an integer matrix given as JSON rows.
    Snf { matrix: String },
    /// Canonical form of a group expression or of a relation matrix.
    Decompose {
        input: String,
        /// Generator count, required for a matrix with no rows.
        #[arg(long)]
        generators: Option<usize>,
    },
    /// Tensor product from the atom table.
    Tensor { left: String, right: String },
    /// Tor from the atom table.
    Tor { left: String, right: String },
    /// Tables against presentation-level computations (finitely generated only).
    OracleCompare { left: String, right: String },
    /// Free resolution `0 → P → Q → G → 0`.
    Resolve { group: String },
    /// Tor via a resolution of the left argument.
    Ltor { left: String, right: String },
    /// Tor via a resolution of the right argument.
    Rtor { left: String, right: String },
    /// The comparison map `LTor(G,H) → LTor(H,G)`.
    Eta {
        left: String,
        right: String,
        /// Randomize the lift choices in the diagram chase.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Künneth components of `K_*(A ⊗ B)`; B defaults to A.
    Kunneth {
        #[command(flatten)]
        a: GradedArgs,
        #[arg(long)]
        b0: Option<String>,
        #[arg(long)]
        b1: Option<String>,
    },
    /// Signed flip on `K_*(A ⊗ A)`.
    Flip {
        #[command(flatten)]
        a: GradedArgs,
    },
    /// Whether the flip acts as the identity, with a certificate.
    CheckFlip {
        #[command(flatten)]
        a: GradedArgs,
    },
    /// Admissibility verdict.
    Classify {
        #[command(flatten)]
        a: GradedArgs,
    },
    /// Iterated flip checks on squares and Prüfer tensors.
    Necessary {
        #[command(flatten)]
        a: GradedArgs,
        #[arg(long, default_value_t = DEFAULT_DEPTH)]
        depth: usize,
        /// Comma-separated primes; defaults to the primes of A plus 2, 3, 5.
        #[arg(long)]
        primes: Option<String>,
    },
    /// Tables against colimits of truncation towers.
    ColimitVerify {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = FunctorArg::Both)]
        functor: FunctorArg,
        #[arg(long, default_value_t = 12)]
        stages: usize,
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
}

fn group(s: &str) -> Result<Decomposition> {
    parse_group(s)
}

fn graded(a: &GradedArgs) -> Result<GradedGroup> {
    if let Some(path) = &a.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        let doc: GradedGroupDoc = serde_json::from_str(&text).map_err(|e| Error::Parse {
            token: path.display().to_string(),
            message: format!("not a graded-group document: {e}"),
        })?;
        return doc.to_graded();
    }
    Ok(GradedGroup::new(
        group(a.k0.as_deref().unwrap_or("0"))?,
        group(a.k1.as_deref().unwrap_or("0"))?,
    ))
}

fn primes(list: &str) -> Result<BTreeSet<u64>> {
    list.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<u64>() {
                Ok(p) if is_prime(p) => Ok(p),
                _ => Err(Error::Parse {
                    token: t.to_string(),
                    message: "expected a prime".into(),
                }),
            }
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Output> {
    let mut limits = Limits {
        presentation: cli.cap,
        ..Limits::default()
    };
    Ok(match &cli.verb {
        Verb::Snf { matrix } => commands::snf(&commands::parse_matrix(matrix, None)?),
        Verb::Decompose { input, generators } => {
            if input.trim_start().starts_with('[') {
                commands::presented(&commands::parse_matrix(input, *generators)?)?
            } else {
                commands::decomposition(&group(input)?)
            }
        }
        Verb::Tensor { left, right } => commands::functor("tensor", &group(left)?, &group(right)?),
        Verb::Tor { left, right } => commands::functor("tor", &group(left)?, &group(right)?),
        Verb::OracleCompare { left, right } => commands::oracle_compare(&group(left)?, &group(right)?, &limits)?,
        Verb::Resolve { group: g } => commands::resolve(&group(g)?, &limits)?,
        Verb::Ltor { left, right } => commands::tor_side("ltor", &group(left)?, &group(right)?, &limits)?,
        Verb::Rtor { left, right } => commands::tor_side("rtor", &group(left)?, &group(right)?, &limits)?,
        Verb::Eta { left, right, seed } => commands::eta(&group(left)?, &group(right)?, *seed, &limits)?,
        Verb::Kunneth { a, b0, b1 } => {
            let a = graded(a)?;
            let b = match (b0, b1) {
                (None, None) => a.clone(),
                _ => GradedGroup::new(
                    group(b0.as_deref().unwrap_or("0"))?,
                    group(b1.as_deref().unwrap_or("0"))?,
                ),
            };
            commands::kunneth_doc(&a, &b)
        }
        Verb::Flip { a } => commands::flip(&graded(a)?),
        Verb::CheckFlip { a } => commands::check_flip(&graded(a)?),
        Verb::Classify { a } => commands::classify_doc(&graded(a)?),
        Verb::Necessary { a, depth, primes: list } => {
            let a = graded(a)?;
            let ps = match list {
                Some(l) => primes(l)?,
                None => default_primes(&a),
            };
            commands::necessary(&a, &ps, *depth)
        }
        Verb::ColimitVerify {
            left,
            right,
            functor,
            stages,
            window,
        } => {
            limits.colimit_stages = *stages;
            limits.stabilization_window = *window;
            let fs: &[Functor] = match functor {
                FunctorArg::Tensor => &[Functor::Tensor],
                FunctorArg::Tor => &[Functor::Tor],
                FunctorArg::Both => &[Functor::Tensor, Functor::Tor],
            };
            commands::colimit_verify(&group(left)?, &group(right)?, fs, &limits)?
        }
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::InvalidArgument(_) => 2,
        Error::Unsupported(_) => 3,
        Error::ResourceLimit(_) | Error::Inconclusive(_) => 4,
        Error::Internal(_) => 5,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::InvalidArgument(_) => "invalid-argument",
        Error::Unsupported(_) => "unsupported",
        Error::ResourceLimit(_) => "resource-limit",
        Error::Inconclusive(_) => "inconclusive",
        Error::Internal(_) => "internal",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("serializable"),
            };
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let mut doc = json!({ "error": error_kind(&e), "message": e.to_string() });
            if let Error::Parse { token, .. } = &e {
                doc["token"] = json!(token);
            }
            if matches!(e, Error::Internal(_)) {
                doc["bug_report"] = json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "args": std::env::args().skip(1).collect::<Vec<_>>(),
                    "note": "internal invariant violated; please report this payload",
                });
            }
            match cli.format {
                Format::Text => {
                    eprintln!("error: {e}");
                    if let Some(b) = doc.get("bug_report") {
                        eprintln!("bug report: {b}");
                    }
                }
                Format::Json => eprintln!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
