//! `idem`: ledger ingestion, τ evaluation, identity queries, fleet audits
//! and scenario runs.
//!
//! Exit codes: 0 success, 1 negative verdict under `--strict` or a failing
//! scenario, 2 usage error, 3 data error.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use idem_core::ledger::{append_to_path, LedgerFile, Record};
use idem_core::scenario::{write_fixtures, ScenarioReport};
use idem_core::{
    builtin_scenarios, check_diachronic_pointwise, check_general_identity, check_persistence_path,
    check_synchronic, partition_fleet_with, persistence_segments, run_scenario, tau_at,
    tau_trajectory, ArtifactHistory, Execution, Ident, KindPath, Scenario, Timestamp,
};

#[derive(Parser)]
#[command(
    name = "idem",
    version,
    about = "Identity and persistence queries over AI system ledgers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LedgerArg {
    /// Ledger file; read from stdin when neither this nor IDEM_LEDGER is set.
    #[arg(long, env = "IDEM_LEDGER")]
    ledger: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum Format {
    #[default]
    Text,
    Lines,
}

#[derive(Subcommand)]
enum Command {
    /// Append one event record to a ledger file.
    Ingest {
        #[arg(long, env = "IDEM_LEDGER")]
        ledger: PathBuf,
        /// The record as a JSON document.
        #[arg(long)]
        event: String,
    },
    /// Trust level at one time, or the trajectory over [from, to).
    Tau {
        #[command(flatten)]
        ledger: LedgerArg,
        #[arg(long)]
        system: Ident,
        #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present_all = ["from", "to"])]
        at: Option<u64>,
        #[arg(long, requires = "to")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Synchronic, diachronic or path identity verdict.
    Identity {
        #[command(flatten)]
        ledger: LedgerArg,
        #[arg(long)]
        kind: KindPath,
        #[arg(long)]
        x: Ident,
        #[arg(long)]
        y: Option<Ident>,
        #[arg(long, conflicts_with_all = ["t1", "t2", "path"], requires = "y")]
        at: Option<u64>,
        #[arg(long, requires = "t2", required_unless_present = "at")]
        t1: Option<u64>,
        #[arg(long, requires = "t1")]
        t2: Option<u64>,
        /// Require persistence at every instant of [t1, t2].
        #[arg(long, conflicts_with = "y")]
        path: bool,
        /// Exit 1 on a negative verdict.
        #[arg(long)]
        strict: bool,
    },
    /// Synchronic identity classes of a fleet at one time.
    Partition {
        #[command(flatten)]
        ledger: LedgerArg,
        #[arg(long)]
        kind: KindPath,
        #[arg(long)]
        at: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Maximal persistence segments of one system over [from, to).
    Segments {
        #[command(flatten)]
        ledger: LedgerArg,
        #[arg(long)]
        system: Ident,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        kind: KindPath,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Builtin or file-based scenarios.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Run one scenario by name, or all of them.
    Run {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        name: Option<Ident>,
        #[arg(long)]
        all: bool,
        /// Load scenarios from these files instead of the builtins.
        #[arg(long)]
        file: Vec<PathBuf>,
    },
    /// List builtin scenario names.
    List,
    /// Write the builtin scenarios and example ledgers as fixture files.
    Export { dir: PathBuf },
}

struct Failure {
    code: u8,
    message: String,
}

fn data_error(e: impl std::fmt::Display) -> Failure {
    Failure {
        code: 3,
        message: e.to_string(),
    }
}

fn read_ledger(arg: &LedgerArg) -> Result<LedgerFile, Failure> {
    let bytes = match &arg.ledger {
        Some(path) => {
            std::fs::read(path).map_err(|e| data_error(format!("{}: {e}", path.display())))?
        }
        None => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(data_error)?;
            buf
        }
    };
    // scenario files carry a full ledger ahead of their query document
    const MARKER: &[u8] = br#"{"kind":"scenario","#;
    if bytes.windows(MARKER.len()).any(|w| w == MARKER) {
        return Scenario::parse(&bytes)
            .map(|s| s.ledger)
            .map_err(data_error);
    }
    LedgerFile::parse(&bytes).map_err(data_error)
}

fn histories(arg: &LedgerArg) -> Result<Vec<ArtifactHistory>, Failure> {
    read_ledger(arg)?.histories().map_err(data_error)
}

fn system<'a>(hs: &'a [ArtifactHistory], id: &Ident) -> Result<&'a ArtifactHistory, Failure> {
    hs.iter()
        .find(|h| h.system_id() == id)
        .ok_or_else(|| data_error(format!("unknown system {id}")))
}

/// Lines to print and the exit code.
type Output = (Vec<String>, u8);

fn ingest(ledger: &Path, event: &str) -> Result<Output, Failure> {
    let record = Record::from_json(event).map_err(|e| data_error(format!("invalid event: {e}")))?;
    let count = append_to_path(ledger, record).map_err(data_error)?;
    Ok((vec![count.to_string()], 0))
}

fn tau(
    ledger: &LedgerArg,
    id: &Ident,
    at: Option<u64>,
    span: Option<(u64, u64)>,
    format: Format,
) -> Result<Output, Failure> {
    let hs = histories(ledger)?;
    let h = system(&hs, id)?;
    if let Some(at) = at {
        return Ok((
            vec![tau_at(h, Timestamp::new(at))
                .map_err(data_error)?
                .to_string()],
            0,
        ));
    }
    let (from, to) = span.expect("clap enforces --at or --from/--to");
    let traj = tau_trajectory(h, Timestamp::new(from), Timestamp::new(to)).map_err(data_error)?;
    let rows = traj
        .pieces
        .iter()
        .map(|p| (p.from.to_string(), p.to.to_string(), p.level.to_string()));
    Ok((
        match format {
            Format::Lines => rows.map(|(a, b, l)| format!("{a} {b} {l}")).collect(),
            Format::Text => table(
                &["from", "to", "level"],
                rows.map(|(a, b, l)| vec![a, b, l]).collect(),
            ),
        },
        0,
    ))
}

fn table(header: &[&str], rows: Vec<Vec<String>>) -> Vec<String> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_owned()
    };
    let mut out = vec![line(header.to_vec())];
    out.extend(
        rows.iter()
            .map(|r| line(r.iter().map(String::as_str).collect())),
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn identity(
    ledger: &LedgerArg,
    kind: &KindPath,
    x: &Ident,
    y: Option<&Ident>,
    at: Option<u64>,
    t1: Option<u64>,
    t2: Option<u64>,
    path: bool,
    strict: bool,
) -> Result<Output, Failure> {
    let hs = histories(ledger)?;
    let hx = system(&hs, x)?;
    let verdict = match (y, at, t1.zip(t2)) {
        (Some(y), Some(at), _) => check_synchronic(hx, system(&hs, y)?, Timestamp::new(at), kind),
        (Some(y), None, Some((t1, t2))) => check_general_identity(
            hx,
            Timestamp::new(t1),
            system(&hs, y)?,
            Timestamp::new(t2),
            kind,
        ),
        (None, None, Some((t1, t2))) if path => {
            check_persistence_path(hx, Timestamp::new(t1), Timestamp::new(t2), kind)
        }
        (None, None, Some((t1, t2))) => {
            check_diachronic_pointwise(hx, Timestamp::new(t1), Timestamp::new(t2), kind)
        }
        _ => {
            return Err(Failure {
                code: 2,
                message: "give --y with --at, or --t1 and --t2".to_owned(),
            })
        }
    }
    .map_err(data_error)?;
    let code = if strict && !verdict.is_identical() {
        1
    } else {
        0
    };
    Ok((vec![verdict.to_string()], code))
}

fn partition(
    ledger: &LedgerArg,
    kind: &KindPath,
    at: u64,
    format: Format,
) -> Result<Output, Failure> {
    let hs = histories(ledger)?;
    let p = partition_fleet_with(&hs, Timestamp::new(at), kind, Execution::Sequential);
    let names = |c: &[Ident], sep: &str| c.iter().map(Ident::as_str).collect::<Vec<_>>().join(sep);
    let lines = match format {
        Format::Lines => {
            let mut out: Vec<String> = p
                .classes
                .iter()
                .map(|c| format!("class {}", names(c, " ")))
                .collect();
            out.extend(
                p.excluded
                    .iter()
                    .map(|(id, why)| format!("excluded {id} {}", why.as_str())),
            );
            out
        }
        Format::Text => {
            let mut out = vec![p
                .classes
                .iter()
                .map(|c| format!("{{{}}}", names(c, ",")))
                .collect::<Vec<_>>()
                .join(" ")];
            if !p.excluded.is_empty() {
                let ex: Vec<String> = p
                    .excluded
                    .iter()
                    .map(|(id, why)| format!("{id} ({})", why.as_str()))
                    .collect();
                out.push(format!("excluded: {}", ex.join(", ")));
            }
            out
        }
    };
    Ok((lines, 0))
}

fn segments(
    ledger: &LedgerArg,
    id: &Ident,
    from: u64,
    to: u64,
    kind: &KindPath,
    format: Format,
) -> Result<Output, Failure> {
    let hs = histories(ledger)?;
    let segs = persistence_segments(
        system(&hs, id)?,
        Timestamp::new(from),
        Timestamp::new(to),
        kind,
    )
    .map_err(data_error)?;
    let lines = match format {
        Format::Lines => segs
            .iter()
            .map(|s| format!("{} {} {} {}", s.from, s.to, s.level, s.incarnation_index))
            .collect(),
        Format::Text => table(
            &["#", "from", "to", "level", "profile"],
            segs.iter()
                .map(|s| {
                    vec![
                        s.incarnation_index.to_string(),
                        s.from.to_string(),
                        s.to.to_string(),
                        s.level.to_string(),
                        s.profile.canonical_key(),
                    ]
                })
                .collect(),
        ),
    };
    Ok((lines, 0))
}

fn report_lines(report: &ScenarioReport, out: &mut Vec<String>) {
    let passed = report.entries.iter().filter(|e| e.passed).count();
    out.push(format!(
        "{}: {passed}/{} passed",
        report.scenario,
        report.entries.len()
    ));
    for e in &report.entries {
        if e.passed {
            out.push(format!("  PASS {} => {}", e.query, e.actual));
        } else {
            out.push(format!(
                "  FAIL {} => {} (expected {})",
                e.query, e.actual, e.expected
            ));
        }
    }
}

fn scenario(command: &ScenarioCommand) -> Result<Output, Failure> {
    match command {
        ScenarioCommand::List => Ok((
            builtin_scenarios()
                .iter()
                .map(|s| s.name.to_string())
                .collect(),
            0,
        )),
        ScenarioCommand::Export { dir } => {
            write_fixtures(dir).map_err(|e| data_error(format!("{}: {e}", dir.display())))?;
            Ok((vec![format!("wrote fixtures to {}", dir.display())], 0))
        }
        ScenarioCommand::Run { name, all: _, file } => {
            let pool: Vec<Scenario> = if file.is_empty() {
                builtin_scenarios()
            } else {
                file.iter()
                    .map(|p| {
                        Scenario::load(p).map_err(|e| data_error(format!("{}: {e}", p.display())))
                    })
                    .collect::<Result<_, _>>()?
            };
            let selected: Vec<&Scenario> = match name {
                Some(n) => vec![pool
                    .iter()
                    .find(|s| &s.name == n)
                    .ok_or_else(|| data_error(format!("unknown scenario {n}")))?],
                None => pool.iter().collect(),
            };
            let mut out = Vec::new();
            let mut ok = true;
            for s in selected {
                let report = run_scenario(s);
                ok &= report.passed();
                report_lines(&report, &mut out);
            }
            Ok((out, if ok { 0 } else { 1 }))
        }
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Ingest { ledger, event } => ingest(&ledger, &event),
        Command::Tau {
            ledger,
            system,
            at,
            from,
            to,
            format,
        } => tau(&ledger, &system, at, from.zip(to), format),
        Command::Identity {
            ledger,
            kind,
            x,
            y,
            at,
            t1,
            t2,
            path,
            strict,
        } => identity(&ledger, &kind, &x, y.as_ref(), at, t1, t2, path, strict),
        Command::Partition {
            ledger,
            kind,
            at,
            format,
        } => partition(&ledger, &kind, at, format),
        Command::Segments {
            ledger,
            system,
            from,
            to,
            kind,
            format,
        } => segments(&ledger, &system, from, to, &kind, format),
        Command::Scenario { command } => scenario(&command),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok((lines, code)) => {
            for line in lines {
                println!("{line}");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
