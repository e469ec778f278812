use std::fs;
use std::io::{self, BufRead, IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use cnl_cli::api::{router, AppState};
use cnl_cli::console::{base_dir, first_difference, transcript, Console, Flow};
use cnl_cli::inspect::{inspect, render};
use cnl_cli::{load_resources, Clock};
use cnl_core::chronos::{Timestamp, UtcOffset};
use cnl_core::session::Session;

#[derive(Parser)]
#[command(
    name = "cnl",
    version,
    about = "Controlled English to logical form and back"
)]
struct Cli {
    /// Directory holding lexicon.tsv, acronyms.tsv and aliases.tsv. The
    /// built-in seed lexicon is used when absent.
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Serve the session API over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Show tokens, trees, readings and logical forms for some text.
    Parse {
        #[arg(long)]
        text: String,
        #[arg(long)]
        json: bool,
        #[arg(long, default_value = "+00:00", allow_hyphen_values = true)]
        offset: UtcOffset,
        /// Utterance time (UTC, ISO 8601). Defaults to now.
        #[arg(long)]
        at: Option<String>,
    },
    /// Interactive console on stdin.
    Repl {
        #[arg(long, default_value = "analyst")]
        teller: String,
        #[arg(long, default_value = "+00:00", allow_hyphen_values = true)]
        offset: UtcOffset,
    },
    /// Run a console script and compare the transcript with a golden file.
    Batch {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Write the transcript to the golden file instead of comparing.
        #[arg(long, requires = "golden")]
        bless: bool,
        #[arg(long, default_value = "analyst")]
        teller: String,
        #[arg(long, default_value = "+00:00", allow_hyphen_values = true)]
        offset: UtcOffset,
        /// Fixed utterance time (UTC, ISO 8601) for every line.
        #[arg(long)]
        at: Option<String>,
    },
}

fn clock(at: Option<&str>) -> anyhow::Result<Clock> {
    match at {
        Some(s) => Ok(Clock::Fixed(
            Timestamp::parse_iso(s).with_context(|| format!("bad time `{s}`"))?,
        )),
        None => Ok(Clock::System),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let res = Arc::new(load_resources(cli.lexicon.as_deref())?);
    match cli.command {
        Cmd::Serve { port, host } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                eprintln!("listening on {}", listener.local_addr()?);
                axum::serve(listener, router(AppState::new(res, Clock::System))).await?;
                anyhow::Ok(())
            })?;
        }
        Cmd::Parse {
            text,
            json,
            offset,
            at,
        } => {
            let reports = inspect(&text, &res, clock(at.as_deref())?.now(), offset);
            if json {
                println!("{}", serde_json::to_string_pretty(&reports)?);
            } else {
                print!("{}", render(&reports));
            }
        }
        Cmd::Repl { teller, offset } => {
            let session = Session::new(&teller, offset, res)?;
            let mut console = Console::new(session, Clock::System, ".");
            let interactive = io::stdin().is_terminal();
            let mut out = io::stdout().lock();
            let mut lines = io::stdin().lock().lines();
            loop {
                if interactive {
                    write!(out, "cnl> ")?;
                    out.flush()?;
                }
                let Some(line) = lines.next() else { break };
                let (flow, shown) = console.line(&line?);
                for l in shown {
                    writeln!(out, "{l}")?;
                }
                if flow == Flow::Quit {
                    break;
                }
            }
        }
        Cmd::Batch {
            input,
            golden,
            bless,
            teller,
            offset,
            at,
        } => {
            let script = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let session = Session::new(&teller, offset, res)?;
            let mut console = Console::new(session, clock(at.as_deref())?, base_dir(&input));
            let got = transcript(&mut console, &script);
            match golden {
                None => print!("{got}"),
                Some(path) if bless => {
                    fs::write(&path, &got).with_context(|| format!("writing {}", path.display()))?
                }
                Some(path) => {
                    let want = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    if let Some((n, g, w)) = first_difference(&got, &want) {
                        eprintln!("transcript differs from {} at line {n}", path.display());
                        eprintln!("  got:  {g}");
                        eprintln!("  want: {w}");
                        return Ok(ExitCode::FAILURE);
                    }
                    println!("transcript matches {}", path.display());
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
