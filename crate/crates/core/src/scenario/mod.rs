//! Executable identity scenarios.
//!
//! A scenario is a ledger plus a list of queries with frozen expectations.
//! On disk it is the ledger's JSON lines followed by one
//! `{"kind":"scenario",...}` document carrying the name, notes and queries.

mod builtin;
mod generate;

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::Decimal;
use crate::identity::{
    check_diachronic_pointwise, check_general_identity, check_persistence_path, check_synchronic,
    partition_fleet, persistence_segments, FleetPartition, PersistenceSegment,
};
use crate::ledger::{LedgerError, LedgerFile};
use crate::model::{ArtifactHistory, EvalError, Ident, IdentityVerdict, KindPath, Timestamp};

pub use builtin::{builtin_scenarios, three_system_fleet, worked_examples_ledger};
pub use generate::{generate_trajectory, DriftModel, GenerateError, TrajectorySpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentExpect {
    pub from: Timestamp,
    pub to: Timestamp,
    pub level: Decimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionExpect {
    pub classes: Vec<Vec<Ident>>,
    pub excluded: Vec<Ident>,
}

/// One query with its expected outcome. Verdict expectations use the
/// rendered verdict text (`identical`, `not-identical: LevelMismatch(path)`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Query {
    General {
        x: Ident,
        t1: Timestamp,
        y: Ident,
        t2: Timestamp,
        kind: KindPath,
        expect: String,
    },
    Synchronic {
        x: Ident,
        y: Ident,
        at: Timestamp,
        kind: KindPath,
        expect: String,
    },
    Diachronic {
        x: Ident,
        t1: Timestamp,
        t2: Timestamp,
        kind: KindPath,
        expect: String,
    },
    Path {
        x: Ident,
        t1: Timestamp,
        t2: Timestamp,
        kind: KindPath,
        expect: String,
    },
    Segments {
        x: Ident,
        from: Timestamp,
        to: Timestamp,
        kind: KindPath,
        expect: Vec<SegmentExpect>,
    },
    Partition {
        at: Timestamp,
        kind: KindPath,
        expect: PartitionExpect,
    },
}

impl Query {
    fn systems(&self) -> Vec<&Ident> {
        match self {
            Query::General { x, y, .. } | Query::Synchronic { x, y, .. } => vec![x, y],
            Query::Diachronic { x, .. } | Query::Path { x, .. } | Query::Segments { x, .. } => {
                vec![x]
            }
            Query::Partition { expect, .. } => expect
                .classes
                .iter()
                .flatten()
                .chain(&expect.excluded)
                .collect(),
        }
    }

    fn expected_text(&self) -> String {
        match self {
            Query::General { expect, .. }
            | Query::Synchronic { expect, .. }
            | Query::Diachronic { expect, .. }
            | Query::Path { expect, .. } => expect.clone(),
            Query::Segments { expect, .. } => {
                render_segments(expect.iter().map(|s| (s.from, s.to, s.level)))
            }
            Query::Partition { expect, .. } => {
                render_partition(&expect.classes, expect.excluded.iter())
            }
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::General {
                x, t1, y, t2, kind, ..
            } => write!(f, "general({x}@{t1}, {y}@{t2}; {kind})"),
            Query::Synchronic { x, y, at, kind, .. } => {
                write!(f, "synchronic({x}, {y}@{at}; {kind})")
            }
            Query::Diachronic {
                x, t1, t2, kind, ..
            } => write!(f, "diachronic({x}@{t1}, {x}@{t2}; {kind})"),
            Query::Path {
                x, t1, t2, kind, ..
            } => write!(f, "path({x}, [{t1}, {t2}]; {kind})"),
            Query::Segments {
                x, from, to, kind, ..
            } => write!(f, "segments({x}, [{from}, {to}); {kind})"),
            Query::Partition { at, kind, .. } => write!(f, "partition(@{at}; {kind})"),
        }
    }
}

/// `[0, 300)=1 [300, 500)=0.5`
pub fn render_segments(
    segments: impl IntoIterator<Item = (Timestamp, Timestamp, Decimal)>,
) -> String {
    segments
        .into_iter()
        .map(|(from, to, level)| format!("[{from}, {to})={level}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// `{a,b} {c} excluded: d,e`
pub fn render_partition<'a>(
    classes: &[Vec<Ident>],
    excluded: impl Iterator<Item = &'a Ident>,
) -> String {
    let mut out = classes
        .iter()
        .map(|c| {
            format!(
                "{{{}}}",
                c.iter().map(Ident::as_str).collect::<Vec<_>>().join(",")
            )
        })
        .collect::<Vec<_>>()
        .join(" ");
    let excluded: Vec<&str> = excluded.map(Ident::as_str).collect();
    if !excluded.is_empty() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str("excluded: ");
        out.push_str(&excluded.join(","));
    }
    out
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("line {line}: malformed scenario document: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("no scenario document in file")]
    MissingScenario,
    #[error("query {query} references unknown system {system}")]
    UnknownSystem { query: String, system: Ident },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: Ident,
    pub ledger: LedgerFile,
    pub queries: Vec<Query>,
    pub notes: String,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum DocKind {
    Scenario,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    kind: DocKind,
    name: Ident,
    notes: String,
    queries: Vec<Query>,
}

impl Scenario {
    pub fn new(
        name: Ident,
        ledger: LedgerFile,
        queries: Vec<Query>,
        notes: impl Into<String>,
    ) -> Result<Scenario, ScenarioError> {
        let known: HashSet<&Ident> = ledger.records().iter().map(|r| &r.system).collect();
        for q in &queries {
            if let Some(system) = q.systems().into_iter().find(|s| !known.contains(s)) {
                return Err(ScenarioError::UnknownSystem {
                    query: q.to_string(),
                    system: system.clone(),
                });
            }
        }
        Ok(Scenario {
            name,
            ledger,
            queries,
            notes: notes.into(),
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.ledger.to_bytes();
        let doc = ScenarioDoc {
            kind: DocKind::Scenario,
            name: self.name.clone(),
            notes: self.notes.clone(),
            queries: self.queries.clone(),
        };
        out.extend_from_slice(
            serde_json::to_string(&doc)
                .expect("scenario serializes")
                .as_bytes(),
        );
        out.push(b'\n');
        out
    }

    pub fn parse(bytes: &[u8]) -> Result<Scenario, ScenarioError> {
        let text = std::str::from_utf8(bytes).map_err(|_| ScenarioError::Malformed {
            line: 1,
            reason: "invalid UTF-8".to_owned(),
        })?;
        let mut ledger_lines = Vec::new();
        let mut doc: Option<ScenarioDoc> = None;
        for (i, line) in text
            .strip_suffix('\n')
            .unwrap_or(text)
            .split('\n')
            .enumerate()
        {
            let is_scenario = serde_json::from_str::<serde_json::Value>(line)
                .ok()
                .is_some_and(|v| v.get("kind").and_then(|k| k.as_str()) == Some("scenario"));
            if is_scenario {
                let parsed = serde_json::from_str(line).map_err(|e| ScenarioError::Malformed {
                    line: i + 1,
                    reason: e.to_string(),
                })?;
                if doc.replace(parsed).is_some() {
                    return Err(ScenarioError::Malformed {
                        line: i + 1,
                        reason: "second scenario document".to_owned(),
                    });
                }
            } else {
                ledger_lines.push((i + 1, line));
            }
        }
        let doc = doc.ok_or(ScenarioError::MissingScenario)?;
        let ledger = LedgerFile::parse_lines(ledger_lines)?;
        Scenario::new(doc.name, ledger, doc.queries, doc.notes)
    }

    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let bytes = std::fs::read(path).map_err(LedgerError::from)?;
        Scenario::parse(&bytes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportEntry {
    pub query: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioReport {
    pub scenario: Ident,
    pub entries: Vec<ReportEntry>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

fn find<'a>(histories: &'a [ArtifactHistory], id: &Ident) -> Result<&'a ArtifactHistory, String> {
    histories
        .iter()
        .find(|h| h.system_id() == id)
        .ok_or_else(|| format!("error: unknown system {id}"))
}

fn verdict_text(v: Result<IdentityVerdict, EvalError>) -> String {
    match v {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn segments_text(segments: &[PersistenceSegment]) -> String {
    render_segments(segments.iter().map(|s| (s.from, s.to, s.level)))
}

fn partition_text(p: &FleetPartition) -> String {
    render_partition(&p.classes, p.excluded.iter().map(|(id, _)| id))
}

fn evaluate(query: &Query, histories: &[ArtifactHistory]) -> Result<String, String> {
    Ok(match query {
        Query::General {
            x, t1, y, t2, kind, ..
        } => verdict_text(check_general_identity(
            find(histories, x)?,
            *t1,
            find(histories, y)?,
            *t2,
            kind,
        )),
        Query::Synchronic { x, y, at, kind, .. } => verdict_text(check_synchronic(
            find(histories, x)?,
            find(histories, y)?,
            *at,
            kind,
        )),
        Query::Diachronic {
            x, t1, t2, kind, ..
        } => verdict_text(check_diachronic_pointwise(
            find(histories, x)?,
            *t1,
            *t2,
            kind,
        )),
        Query::Path {
            x, t1, t2, kind, ..
        } => verdict_text(check_persistence_path(find(histories, x)?, *t1, *t2, kind)),
        Query::Segments {
            x, from, to, kind, ..
        } => match persistence_segments(find(histories, x)?, *from, *to, kind) {
            Ok(segs) => segments_text(&segs),
            Err(e) => format!("error: {e}"),
        },
        Query::Partition { at, kind, .. } => partition_text(&partition_fleet(histories, *at, kind)),
    })
}

/// Runs every query of `s` and compares against its expectation.
pub fn run_scenario(s: &Scenario) -> ScenarioReport {
    let histories = s.ledger.histories();
    let entries = s
        .queries
        .iter()
        .map(|q| {
            let expected = q.expected_text();
            let actual = match &histories {
                Ok(hs) => evaluate(q, hs).unwrap_or_else(|e| e),
                Err(e) => format!("error: {e}"),
            };
            ReportEntry {
                query: q.to_string(),
                passed: actual == expected,
                expected,
                actual,
            }
        })
        .collect();
    ScenarioReport {
        scenario: s.name.clone(),
        entries,
    }
}

/// Writes every builtin scenario plus the shared example ledgers to `dir`.
pub fn write_fixtures(dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir.join("scenarios"))?;
    for s in builtin_scenarios() {
        std::fs::write(
            dir.join("scenarios").join(format!("{}.jsonl", s.name)),
            s.to_bytes(),
        )?;
    }
    std::fs::write(
        dir.join("worked_examples.jsonl"),
        worked_examples_ledger().to_bytes(),
    )?;
    std::fs::write(dir.join("fleet3.jsonl"), three_system_fleet().to_bytes())?;
    Ok(())
}
