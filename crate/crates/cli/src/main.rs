//! `boardgraph`: build snapshots, generate fixtures, run reports, trace
//! paths and launch the query server.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod report;

use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use boardgraph_core::graph::shortest_path;
use boardgraph_core::ingest::build_snapshot_from_paths;
use boardgraph_core::model::{DiagCode, DirectorId, Year};
use boardgraph_core::store;
use boardgraph_core::synth::{generate, AnomalyRates, SynthConfig};
use boardgraph_core::{FilterSpec, Snapshot};
use boardgraph_server::{RenderCap, ServerConfig};
use clap::{Parser, Subcommand, ValueEnum};

use report::{Format, Kind};

#[derive(Parser)]
#[command(name = "boardgraph", version, about = "Board interlock engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean a factors file and a connections file into a snapshot directory.
    Ingest {
        #[arg(long)]
        dif: PathBuf,
        #[arg(long)]
        bce: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Year future since-years are checked against.
        #[arg(long, default_value_t = 2022)]
        ref_year: Year,
        /// `CANONICAL=Actual Header` lines for renamed columns.
        #[arg(long)]
        mapping: Option<PathBuf>,
    },
    /// Generate a synthetic corpus: dif.csv, bce.csv and truth.json.
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        companies: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        board_min: usize,
        #[arg(long, default_value_t = 4)]
        board_max: usize,
        #[arg(long, default_value_t = 0.0)]
        multi_seat: f64,
        #[arg(long, default_value_t = 0.3)]
        female: f64,
        /// Injected defect rate, repeatable: `--anomaly duplicate_edge=0.3`.
        #[arg(long = "anomaly", value_name = "NAME=RATE")]
        anomalies: Vec<String>,
        /// Leave influence values unscaled instead of summing to 100 per board.
        #[arg(long)]
        raw_inf: bool,
        #[arg(long, default_value_t = 2022)]
        ref_year: Year,
    },
    /// Aggregate report over a snapshot.
    Report {
        #[arg(long, env = "BOARDGRAPH_SNAPSHOT")]
        snapshot: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Restriction `key=value`, repeatable. Keys: sector, country,
        /// league, gender, family, company.
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Minimum shared directors for the interlocks report.
        #[arg(long, default_value_t = 1)]
        min: usize,
    },
    /// Shortest connection between two directors.
    Path {
        #[arg(long, env = "BOARDGRAPH_SNAPSHOT")]
        snapshot: PathBuf,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long = "filter", value_name = "KEY=VALUE")]
        filters: Vec<String>,
    },
    /// Re-check checksums and every snapshot invariant.
    Validate {
        #[arg(long, env = "BOARDGRAPH_SNAPSHOT")]
        snapshot: PathBuf,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "BOARDGRAPH_SNAPSHOT")]
        snapshot: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long, default_value_t = 2000)]
        max_nodes: usize,
        #[arg(long, default_value_t = 5000)]
        max_edges: usize,
        #[arg(long, env = "BOARDGRAPH_RELOAD_TOKEN", hide_env_values = true)]
        reload_token: Option<String>,
        #[arg(long)]
        cors_origin: Option<String>,
        #[arg(long, value_enum, default_value_t = LogLevel::Info)]
        log: LogLevel,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LogLevel {
    Error,
    Warn,
    Info,
    Debug,
}

enum Failure {
    Usage(String),
    Data(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Data(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn parse_filters(pairs: &[String]) -> Result<FilterSpec, Failure> {
    let mut spec = FilterSpec::all();
    for pair in pairs {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("filter {pair:?} is not key=value")))?;
        spec.push(k, v).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(spec)
}

fn load(dir: &Path) -> Result<Snapshot, Failure> {
    let loaded = store::load(dir).with_context(|| format!("loading snapshot {}", dir.display()))?;
    Ok(loaded.snapshot)
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Ingest {
            dif,
            bce,
            out,
            ref_year,
            mapping,
        } => {
            let snap = build_snapshot_from_paths(&dif, &bce, ref_year, mapping.as_deref())
                .context("ingest failed")?;
            report_warnings(&snap);
            let manifest = store::save(&snap, &out)
                .with_context(|| format!("writing snapshot {}", out.display()))?;
            println!(
                "snapshot {} written to {}: {} seats, {} directors, {} companies, {} edges, {} influence rows, {} warnings",
                manifest.snapshot_id,
                out.display(),
                snap.seats().len(),
                snap.directors().len(),
                snap.companies().len(),
                snap.edges().len(),
                snap.inf_long().len(),
                snap.warnings().len()
            );
            Ok(())
        }
        Command::Synth {
            seed,
            companies,
            out,
            board_min,
            board_max,
            multi_seat,
            female,
            anomalies,
            raw_inf,
            ref_year,
        } => {
            let mut rates = AnomalyRates::default();
            for a in &anomalies {
                let (name, rate) = a
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("anomaly {a:?} is not name=rate")))?;
                let rate: f64 = rate
                    .parse()
                    .map_err(|_| Failure::Usage(format!("anomaly rate {rate:?} is not a number")))?;
                rates
                    .set(name, rate)
                    .map_err(|e| Failure::Usage(e.to_string()))?;
            }
            let config = SynthConfig {
                seed,
                companies,
                board_min,
                board_max,
                multi_seat_fraction: multi_seat,
                female_fraction: female,
                anomaly_rates: rates,
                inf_normalized_per_company: !raw_inf,
                reference_year: ref_year,
            };
            let output = generate(&config).map_err(|e| Failure::Usage(e.to_string()))?;
            output
                .write_to_dir(&out)
                .with_context(|| format!("writing corpus to {}", out.display()))?;
            let c = &output.truth.counts;
            println!(
                "wrote {}: {} factor rows, {} connection rows; expect {} directors ({} edges-only), {} companies, {} edges",
                out.display(),
                c.dif_rows,
                c.bce_rows,
                c.directors,
                c.edges_only_directors,
                c.companies,
                c.edges
            );
            Ok(())
        }
        Command::Report {
            snapshot,
            kind,
            filters,
            format,
            min,
        } => {
            let filter = parse_filters(&filters)?;
            if min < 1 {
                return Err(Failure::Usage("--min must be at least 1".into()));
            }
            let snap = load(&snapshot)?;
            let table = report::build(&snap, kind, &filter, min)?;
            let text = table.render(format)?;
            print!("{text}");
            Ok(())
        }
        Command::Path {
            snapshot,
            from,
            to,
            filters,
        } => {
            let filter = parse_filters(&filters)?;
            let snap = load(&snapshot)?;
            let name = |id: DirectorId| {
                snap.director(id)
                    .map(|d| d.full_name.clone())
                    .unwrap_or_default()
            };
            let company = |id| snap.company(id).map(|c| c.name.clone()).unwrap_or_default();
            match shortest_path(&snap, DirectorId(from), DirectorId(to), &filter)
                .map_err(|e| Failure::Data(e.into()))?
            {
                None => println!("no connection between {from} and {to}"),
                Some(p) => {
                    println!("{} hop(s)", p.hop_count());
                    println!("{} {}", p.directors[0], name(p.directors[0]));
                    for hop in &p.hops {
                        println!(
                            "  via {} ({:.2} yrs) -> {} {}",
                            company(hop.company_id),
                            hop.overlap,
                            hop.to,
                            name(hop.to)
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Validate { snapshot } => {
            let loaded = store::load(&snapshot)
                .with_context(|| format!("snapshot {} is invalid", snapshot.display()))?;
            let s = &loaded.snapshot;
            println!(
                "ok {}: {} seats, {} directors, {} companies, {} edges",
                loaded.manifest.snapshot_id,
                s.seats().len(),
                s.directors().len(),
                s.companies().len(),
                s.edges().len()
            );
            Ok(())
        }
        Command::Serve {
            snapshot,
            listen,
            max_nodes,
            max_edges,
            reload_token,
            cors_origin,
            log,
        } => {
            let level = match log {
                LogLevel::Error => tracing_subscriber::filter::LevelFilter::ERROR,
                LogLevel::Warn => tracing_subscriber::filter::LevelFilter::WARN,
                LogLevel::Info => tracing_subscriber::filter::LevelFilter::INFO,
                LogLevel::Debug => tracing_subscriber::filter::LevelFilter::DEBUG,
            };
            tracing_subscriber::fmt()
                .with_max_level(level)
                .with_writer(std::io::stderr)
                .init();
            let mut config = ServerConfig::new(listen, snapshot);
            config.render_cap = RenderCap {
                max_nodes,
                max_edges,
            };
            config.reload_token = reload_token;
            config.cors_origin = cors_origin;
            if let Err(e) = config.validate() {
                return Err(Failure::Usage(e.to_string()));
            }
            let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
            runtime
                .block_on(boardgraph_server::serve(config))
                .context("server stopped")?;
            Ok(())
        }
    }
}

/// Diagnostics summary on standard error: counts per code and the first few
/// row-level messages.
fn report_warnings(snap: &Snapshot) {
    const SHOWN: usize = 20;
    let mut by_code: std::collections::BTreeMap<DiagCode, usize> = Default::default();
    for d in snap.warnings() {
        *by_code.entry(d.code).or_default() += 1;
    }
    for d in snap.warnings().iter().take(SHOWN) {
        eprintln!("warning: {d}");
    }
    if snap.warnings().len() > SHOWN {
        eprintln!("warning: ... {} more", snap.warnings().len() - SHOWN);
    }
    for (code, n) in by_code {
        eprintln!("{:>8} {}", n, code.as_str());
    }
}
