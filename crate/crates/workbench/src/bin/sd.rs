use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use sd_core::formats::parse_weights;
use sd_core::group::{copeland, group_level, majority, tally};
use sd_core::interval::abstention_tally;
use sd_workbench::data::{Data, Format};
use sd_workbench::error::{Error, ExitCode, Result};
use sd_workbench::report::{analyze, ladder_view, level_view};
use sd_workbench::session::{load_str, suggest_next_pair, Session};
use sd_workbench::{service, SessionStore, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "sd", version, about = "Superiority-degree analysis of pairwise comparisons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Input {
    /// Matrix CSV, matrix JSON, ballots JSON, criteria JSON or session JSON.
    file: PathBuf,
    /// auto, csv, partial-csv, matrix-json, ballots, criteria or session.
    #[arg(long, default_value = "auto", global = true)]
    format: String,
    /// Bound φ* for partial matrices; overrides the file's declaration.
    #[arg(long, global = true)]
    phi_star: Option<f64>,
    /// JSON object of alternative weights, uniform by default.
    #[arg(long, global = true)]
    weights: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a file and report class membership.
    Check(Input),
    /// Utilities and ranking.
    Rank(Input),
    /// Level-relation ladder, or the relations at the given levels.
    Ladder {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
    },
    /// Group decisions over a ballots file.
    Group {
        #[command(flatten)]
        input: Input,
        #[command(subcommand)]
        procedure: GroupCommand,
    },
    /// Interval analysis of incomplete data.
    Interval {
        #[command(flatten)]
        input: Input,
        #[command(subcommand)]
        query: IntervalCommand,
    },
    /// Full analysis report.
    Report(Input),
    /// Write the data back in its canonical native format.
    Export(Input),
    /// Start a session file from a data file.
    Init {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: PathBuf,
    },
    /// Answer a missing comparison in a session file.
    Refine {
        session: PathBuf,
        /// `x,y`
        #[arg(long, value_delimiter = ',', num_args = 1)]
        pair: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        value: f64,
    },
    /// Name a level in a session file.
    Bookmark {
        session: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        level: f64,
    },
    /// Select the working level of a session file.
    Select {
        session: PathBuf,
        #[arg(long)]
        level: f64,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Subcommand)]
enum GroupCommand {
    Tally,
    Majority,
    Copeland,
    Level {
        #[arg(long = "l")]
        l: f64,
    },
}

#[derive(Subcommand)]
enum IntervalCommand {
    Rank,
    Missing,
    Suggest,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn open(input: &Input) -> Result<Session> {
    let format: Format = input.format.parse()?;
    let session = load_str(&read(&input.file)?, format, input.phi_star)?;
    match &input.weights {
        None => Ok(session),
        Some(path) => {
            let w = parse_weights(session.data().base(), &read(path)?)?;
            Session::with_id(session.id(), session.data().clone(), Some(w))
        }
    }
}

fn open_session(path: &Path) -> Result<Session> {
    let text = read(path)?;
    if Format::detect(&text)? != Format::Session {
        return Err(Error::WrongKind {
            expected: "session",
            found: "data file",
        });
    }
    Session::from_json(&text)
}

fn wrong(expected: &'static str, s: &Session) -> Error {
    Error::WrongKind {
        expected,
        found: s.data().kind().name(),
    }
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit<T: Serialize>(value: &T) {
    out(&format!("{}\n", serde_json::to_string_pretty(value).expect("serializable output")));
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check(input) => {
            let r = analyze(&open(&input)?)?;
            emit(&json!({
                "schema_version": SCHEMA_VERSION,
                "kind": r.kind,
                "alternatives": r.alternatives,
                "classes": r.classes,
                "warnings": r.warnings,
            }));
        }
        Command::Rank(input) => {
            let s = open(&input)?;
            let r = analyze(&s)?;
            let (Some(utilities), Some(ranking)) = (r.utilities, r.ranking) else {
                return Err(wrong("matrix, panel or criteria", &s));
            };
            emit(&json!({ "utilities": utilities, "ranking": ranking }));
        }
        Command::Ladder { input, levels } => {
            let s = open(&input)?;
            let source = s.data().ladder_source()?;
            match levels {
                None => emit(&ladder_view(&source, s.weights())?.rungs),
                Some(levels) => emit(
                    &levels
                        .into_iter()
                        .map(|l| level_view(&source, l))
                        .collect::<Result<Vec<_>>>()?,
                ),
            }
        }
        Command::Group { input, procedure } => {
            let s = open(&input)?;
            let vpr = match s.data() {
                Data::Panel(v) | Data::Abstentions(v) => v,
                _ => return Err(wrong("ballots", &s)),
            };
            let ids = vpr.base().ids();
            let out: Value = match procedure {
                GroupCommand::Tally if matches!(s.data(), Data::Abstentions(_)) => {
                    let t = abstention_tally(vpr);
                    let n = ids.len();
                    let grid = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Vec<f64>> {
                        (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect()
                    };
                    json!({
                        "alternatives": ids,
                        "experts": t.experts(),
                        "votes_for": grid(&|i, j| t.votes_for(i, j)),
                        "votes_against": grid(&|i, j| t.votes_against(i, j)),
                        "abstained": grid(&|i, j| t.abstained(i, j)),
                    })
                }
                GroupCommand::Tally => {
                    let t = tally(vpr)?;
                    json!({ "alternatives": ids, "experts": t.experts(), "counts": t.rows() })
                }
                GroupCommand::Majority => {
                    let m = majority(&tally(vpr)?);
                    json!({
                        "pairs": m.id_pairs(),
                        "strict_pairs": m.strict_part().id_pairs(),
                        "transitive": m.is_transitive(),
                        "core": m.core().ids(),
                    })
                }
                GroupCommand::Copeland => {
                    let c = copeland(&tally(vpr)?);
                    json!({
                        "scores": ids.iter().zip(c.scores.values()).map(|(id, v)| json!({"id": id, "value": v})).collect::<Vec<_>>(),
                        "ranking": c.scores.ranking(sd_core::superiority::EPS),
                    })
                }
                GroupCommand::Level { l } => {
                    let g = group_level(&tally(vpr)?, l)?;
                    json!({
                        "level": l,
                        "core": g.core.ids(),
                        "strict_pairs": g.relation.strict_part().id_pairs(),
                    })
                }
            };
            emit(&out);
        }
        Command::Interval { input, query } => {
            let s = open(&input)?;
            if !matches!(s.data(), Data::Partial(_) | Data::Abstentions(_)) {
                return Err(wrong("partial or abstention", &s));
            }
            match query {
                IntervalCommand::Suggest => {
                    let pair = suggest_next_pair(&s)?;
                    emit(&json!({ "pair": pair.map(|(x, y)| [x, y]) }));
                }
                IntervalCommand::Rank | IntervalCommand::Missing => {
                    let iv = analyze(&s)?.intervals.expect("interval data has intervals");
                    if matches!(query, IntervalCommand::Missing) {
                        emit(&iv.missing);
                    } else {
                        emit(&json!({
                            "phi_star": iv.phi_star,
                            "intervals": iv.intervals,
                            "order": iv.order,
                            "core": iv.core,
                        }));
                    }
                }
            }
        }
        Command::Report(input) => {
            emit(&analyze(&open(&input)?)?);
        }
        Command::Export(input) => {
            let s = open(&input)?;
            if Format::detect(&read(&input.file)?)? == Format::Session {
                out(&s.to_json());
            } else {
                out(&s.data().save());
            }
        }
        Command::Init { input, out } => {
            let s = open(&input)?;
            s.save(&out)?;
            emit(&json!({ "schema_version": SCHEMA_VERSION, "id": s.id(), "kind": s.data().kind() }));
        }
        Command::Refine { session, pair, value } => {
            let [x, y] = <[String; 2]>::try_from(pair).map_err(|_| {
                Error::Core(sd_core::Error::parse(1, 1, "--pair expects `x,y`"))
            })?;
            let mut s = open_session(&session)?;
            s.refine(&x, &y, value)?;
            s.save(&session)?;
            emit(&analyze(&s)?);
        }
        Command::Bookmark { session, name, level } => {
            let mut s = open_session(&session)?;
            s.bookmark(&name, level)?;
            s.save(&session)?;
            emit(&json!({ "schema_version": SCHEMA_VERSION, "bookmarks": s.state().bookmarks }));
        }
        Command::Select { session, level } => {
            let mut s = open_session(&session)?;
            s.select_level(level)?;
            s.save(&session)?;
            emit(&analyze(&s)?.selection);
        }
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::Io {
                path: addr.to_string(),
                message: e.to_string(),
            })?;
            eprintln!("listening on http://{addr}");
            runtime
                .block_on(service::serve(addr, Arc::new(SessionStore::new())))
                .map_err(|e| Error::Io {
                    path: addr.to_string(),
                    message: e.to_string(),
                })?;
        }
    }
    Ok(())
}

fn main() -> std::process::ExitCode {
    match run(Cli::parse()) {
        Ok(()) => std::process::ExitCode::from(ExitCode::Success as u8),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::ExitCode::from(e.exit_code() as u8)
        }
    }
}
