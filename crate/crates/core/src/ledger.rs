//! Append-only JSON-lines ledger of lifecycle events.
//!
//! The first line is a header document; every following line is one record
//! tagged by `kind`. Records for different systems may interleave, but per
//! system the Deployment comes first and timestamps never decrease.
//!
//! ```text
//! {"kind":"header","version":1,"epoch":"1970-01-01T00:00:00Z","tick_unit":"ms"}
//! {"kind":"deployment","system":"m1","at":0,"techno_function":{...},"profile":["accuracy >= 0.9"],"ladder":"..."}
//! {"kind":"measurement","system":"m1","at":10,"capability":"accuracy","value":"0.95"}
//! {"kind":"retraining","system":"m1","at":20,"note":"weekly refresh"}
//! {"kind":"profile_change","system":"m1","at":30,"profile":["accuracy >= 0.9","safety >= 0.99"]}
//! ```
//!
//! Decimals are JSON strings in canonical form; contracts and ladders are
//! stored as canonical DSL text.

use std::collections::HashMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::Decimal;
use crate::dsl::{parse_contract, parse_ladder, render_ladder};
use crate::model::{
    ArtifactHistory, CapabilityMeasurement, EventKind, HistoryError, Ident, LifecycleEvent,
    TechnoFunction, Timestamp, TrustLadder, TrustProfile, Verb,
};

pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AppendError {
    #[error("out of order: event for {system} at {at} precedes its latest record at {latest}")]
    OutOfOrder {
        system: Ident,
        at: Timestamp,
        latest: Timestamp,
    },
    #[error("duplicate deployment: {system} is already deployed")]
    DuplicateDeployment { system: Ident },
    #[error("missing deployment: {system} has no deployment record")]
    MissingDeployment { system: Ident },
}

#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("line {line}: malformed record: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("unsupported ledger version {found} (supported: {SUPPORTED_VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("line {line}: {source}")]
    Rejected { line: usize, source: AppendError },
    #[error("invalid history: {0}")]
    InvalidHistory(#[from] HistoryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub epoch: DateTime<Utc>,
    pub tick_unit: String,
    pub version: u32,
}

impl Default for Header {
    fn default() -> Header {
        Header {
            epoch: DateTime::UNIX_EPOCH,
            tick_unit: "ms".to_owned(),
            version: SUPPORTED_VERSION,
        }
    }
}

/// What a system is, fixed at deployment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemDescriptor {
    pub techno_function: TechnoFunction,
    pub profile: TrustProfile,
    pub ladder: TrustLadder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RecordBody {
    Deployment(SystemDescriptor),
    Measurement {
        capability: Ident,
        value: Decimal,
        group: Option<Ident>,
    },
    Retraining {
        note: String,
    },
    ProfileChange(TrustProfile),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub system: Ident,
    pub at: Timestamp,
    pub body: RecordBody,
}

impl Record {
    pub fn deployment(system: Ident, at: Timestamp, descriptor: SystemDescriptor) -> Record {
        Record {
            system,
            at,
            body: RecordBody::Deployment(descriptor),
        }
    }

    /// Record for a non-deployment event. Returns `None` for deployments,
    /// which need a [`SystemDescriptor`].
    pub fn from_event(system: Ident, event: &LifecycleEvent) -> Option<Record> {
        let body = match &event.kind {
            EventKind::Deployment => return None,
            EventKind::Measurement(m) => RecordBody::Measurement {
                capability: m.capability.clone(),
                value: m.value,
                group: m.group.clone(),
            },
            EventKind::Retraining { note } => RecordBody::Retraining { note: note.clone() },
            EventKind::ProfileChange(p) => RecordBody::ProfileChange(p.clone()),
        };
        Some(Record {
            system,
            at: event.at,
            body,
        })
    }

    fn to_event(&self) -> LifecycleEvent {
        let kind = match &self.body {
            RecordBody::Deployment(_) => EventKind::Deployment,
            RecordBody::Measurement {
                capability,
                value,
                group,
            } => EventKind::Measurement(CapabilityMeasurement {
                capability: capability.clone(),
                value: *value,
                at: self.at,
                group: group.clone(),
            }),
            RecordBody::Retraining { note } => EventKind::Retraining { note: note.clone() },
            RecordBody::ProfileChange(p) => EventKind::ProfileChange(p.clone()),
        };
        LifecycleEvent { at: self.at, kind }
    }

    /// The record's canonical JSON line, without the trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&Document::from(self)).expect("ledger documents always serialize")
    }

    /// Parses a standalone record document (as accepted by `idem ingest --event`).
    pub fn from_json(text: &str) -> Result<Record, String> {
        let doc: Document = serde_json::from_str(text).map_err(|e| e.to_string())?;
        doc.into_record()?
            .ok_or_else(|| "expected an event record, found a header".to_owned())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TechnoFunctionDoc {
    verb: Verb,
    object: Ident,
    resources: Vec<Ident>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum Document {
    Header {
        version: u32,
        epoch: DateTime<Utc>,
        tick_unit: String,
    },
    Deployment {
        system: Ident,
        at: Timestamp,
        techno_function: TechnoFunctionDoc,
        profile: Vec<String>,
        ladder: String,
    },
    Measurement {
        system: Ident,
        at: Timestamp,
        capability: Ident,
        value: Decimal,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        group: Option<Ident>,
    },
    Retraining {
        system: Ident,
        at: Timestamp,
        note: String,
    },
    ProfileChange {
        system: Ident,
        at: Timestamp,
        profile: Vec<String>,
    },
}

fn profile_strings(p: &TrustProfile) -> Vec<String> {
    p.renderings().map(str::to_owned).collect()
}

fn parse_profile(items: &[String]) -> Result<TrustProfile, String> {
    let contracts = items
        .iter()
        .map(|s| parse_contract(s).map_err(|e| format!("contract {s:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    TrustProfile::new(contracts).map_err(|e| e.to_string())
}

impl From<&Record> for Document {
    fn from(r: &Record) -> Document {
        let system = r.system.clone();
        let at = r.at;
        match &r.body {
            RecordBody::Deployment(d) => Document::Deployment {
                system,
                at,
                techno_function: TechnoFunctionDoc {
                    verb: d.techno_function.verb(),
                    object: d.techno_function.object().clone(),
                    resources: d.techno_function.resources().to_vec(),
                },
                profile: profile_strings(&d.profile),
                ladder: render_ladder(&d.ladder),
            },
            RecordBody::Measurement {
                capability,
                value,
                group,
            } => Document::Measurement {
                system,
                at,
                capability: capability.clone(),
                value: *value,
                group: group.clone(),
            },
            RecordBody::Retraining { note } => Document::Retraining {
                system,
                at,
                note: note.clone(),
            },
            RecordBody::ProfileChange(p) => Document::ProfileChange {
                system,
                at,
                profile: profile_strings(p),
            },
        }
    }
}

impl Document {
    /// `Ok(None)` for the header.
    fn into_record(self) -> Result<Option<Record>, String> {
        let (system, at, body) = match self {
            Document::Header { .. } => return Ok(None),
            Document::Deployment {
                system,
                at,
                techno_function,
                profile,
                ladder,
            } => {
                let tf = TechnoFunction::new(
                    techno_function.verb,
                    techno_function.object,
                    techno_function.resources,
                );
                let profile = parse_profile(&profile)?;
                let ladder = parse_ladder(&ladder).map_err(|e| format!("ladder: {e}"))?;
                (
                    system,
                    at,
                    RecordBody::Deployment(SystemDescriptor {
                        techno_function: tf,
                        profile,
                        ladder,
                    }),
                )
            }
            Document::Measurement {
                system,
                at,
                capability,
                value,
                group,
            } => (
                system,
                at,
                RecordBody::Measurement {
                    capability,
                    value,
                    group,
                },
            ),
            Document::Retraining { system, at, note } => {
                (system, at, RecordBody::Retraining { note })
            }
            Document::ProfileChange {
                system,
                at,
                profile,
            } => (
                system,
                at,
                RecordBody::ProfileChange(parse_profile(&profile)?),
            ),
        };
        Ok(Some(Record { system, at, body }))
    }
}

/// An in-memory ledger: header plus records in file order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LedgerFile {
    header: Header,
    records: Vec<Record>,
    // system -> latest timestamp; presence means deployed
    latest: HashMap<Ident, Timestamp>,
}

impl LedgerFile {
    pub fn new(header: Header) -> LedgerFile {
        LedgerFile {
            header,
            records: Vec::new(),
            latest: HashMap::new(),
        }
    }

    pub fn header(&self) -> &Header {
        &self.header
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    fn check(&self, record: &Record) -> Result<(), AppendError> {
        let system = &record.system;
        match (self.latest.get(system), &record.body) {
            (Some(_), RecordBody::Deployment(_)) => Err(AppendError::DuplicateDeployment {
                system: system.clone(),
            }),
            (None, RecordBody::Deployment(_)) => Ok(()),
            (None, _) => Err(AppendError::MissingDeployment {
                system: system.clone(),
            }),
            (Some(&latest), _) if record.at < latest => Err(AppendError::OutOfOrder {
                system: system.clone(),
                at: record.at,
                latest,
            }),
            (Some(_), _) => Ok(()),
        }
    }

    /// Appends in place after validation.
    pub fn push(&mut self, record: Record) -> Result<(), AppendError> {
        self.check(&record)?;
        self.latest.insert(record.system.clone(), record.at);
        self.records.push(record);
        Ok(())
    }

    /// Returns a new ledger with `record` appended; `self` is unchanged.
    pub fn append_event(&self, record: Record) -> Result<LedgerFile, AppendError> {
        self.check(&record)?;
        let mut next = self.clone();
        next.latest.insert(record.system.clone(), record.at);
        next.records.push(record);
        Ok(next)
    }

    pub fn parse(bytes: &[u8]) -> Result<LedgerFile, LedgerError> {
        LedgerFile::parse_lines(split_lines(bytes)?)
    }

    /// Parses `(1-based line number, text)` pairs; the first must be the header.
    pub fn parse_lines<'a>(
        lines: impl IntoIterator<Item = (usize, &'a str)>,
    ) -> Result<LedgerFile, LedgerError> {
        let mut lines = lines.into_iter();
        let (first_line, first) = lines.next().ok_or(LedgerError::MalformedRecord {
            line: 1,
            reason: "missing header".to_owned(),
        })?;
        let header = match serde_json::from_str::<Document>(first) {
            Ok(Document::Header {
                version,
                epoch,
                tick_unit,
            }) => {
                if version != SUPPORTED_VERSION {
                    return Err(LedgerError::UnsupportedVersion { found: version });
                }
                if tick_unit != "ms" {
                    return Err(LedgerError::MalformedRecord {
                        line: first_line,
                        reason: format!("tick unit {tick_unit:?} is not \"ms\""),
                    });
                }
                Header {
                    epoch,
                    tick_unit,
                    version,
                }
            }
            Ok(_) => {
                return Err(LedgerError::MalformedRecord {
                    line: first_line,
                    reason: "first line must be the header".to_owned(),
                })
            }
            Err(e) => {
                return Err(LedgerError::MalformedRecord {
                    line: first_line,
                    reason: e.to_string(),
                })
            }
        };
        let mut file = LedgerFile::new(header);
        for (line, text) in lines {
            let malformed = |reason: String| LedgerError::MalformedRecord { line, reason };
            let doc: Document = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
            let record = doc
                .into_record()
                .map_err(malformed)?
                .ok_or_else(|| malformed("second header".to_owned()))?;
            file.push(record)
                .map_err(|source| LedgerError::Rejected { line, source })?;
        }
        Ok(file)
    }

    /// Canonical bytes: header line then one line per record, each `\n`-terminated.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = header_line(&self.header);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        out.into_bytes()
    }

    /// Groups records into histories, in order of first appearance.
    pub fn histories(&self) -> Result<Vec<ArtifactHistory>, LedgerError> {
        let mut order: Vec<&Ident> = Vec::new();
        let mut by_system: HashMap<&Ident, (Option<&SystemDescriptor>, Vec<LifecycleEvent>)> =
            HashMap::new();
        for r in &self.records {
            let entry = by_system.entry(&r.system).or_insert_with(|| {
                order.push(&r.system);
                (None, Vec::new())
            });
            if let RecordBody::Deployment(d) = &r.body {
                entry.0 = Some(d);
            }
            entry.1.push(r.to_event());
        }
        order
            .into_iter()
            .map(|system| {
                let (descriptor, events) = by_system
                    .remove(system)
                    .expect("every ordered system has an entry");
                let d =
                    descriptor.ok_or_else(|| HistoryError::MissingDeployment(system.clone()))?;
                Ok(ArtifactHistory::new(
                    system.clone(),
                    d.techno_function.clone(),
                    d.profile.clone(),
                    d.ladder.clone(),
                    events,
                )?)
            })
            .collect()
    }

    /// Ledger holding each history's records consecutively.
    pub fn from_histories(histories: &[ArtifactHistory]) -> LedgerFile {
        let mut file = LedgerFile::new(Header::default());
        for h in histories {
            for e in h.events() {
                let record = match &e.kind {
                    EventKind::Deployment => Record::deployment(
                        h.system_id().clone(),
                        e.at,
                        SystemDescriptor {
                            techno_function: h.techno_function().clone(),
                            profile: h.initial_profile().clone(),
                            ladder: h.ladder().clone(),
                        },
                    ),
                    _ => {
                        Record::from_event(h.system_id().clone(), e).expect("non-deployment event")
                    }
                };
                file.push(record)
                    .expect("a valid history yields a valid ledger");
            }
        }
        file
    }
}

fn header_line(h: &Header) -> String {
    let doc = Document::Header {
        version: h.version,
        epoch: h.epoch,
        tick_unit: h.tick_unit.clone(),
    };
    serde_json::to_string(&doc).expect("header serializes")
}

/// Splits a ledger into numbered lines. A single trailing newline is allowed;
/// blank lines elsewhere are malformed.
fn split_lines(bytes: &[u8]) -> Result<Vec<(usize, &str)>, LedgerError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        LedgerError::MalformedRecord {
            line,
            reason: "invalid UTF-8".to_owned(),
        }
    })?;
    let body = text.strip_suffix('\n').unwrap_or(text);
    if body.is_empty() {
        return Err(LedgerError::MalformedRecord {
            line: 1,
            reason: "missing header".to_owned(),
        });
    }
    body.split('\n')
        .enumerate()
        .map(|(i, line)| {
            if line.trim().is_empty() {
                Err(LedgerError::MalformedRecord {
                    line: i + 1,
                    reason: "empty line".to_owned(),
                })
            } else {
                Ok((i + 1, line))
            }
        })
        .collect()
}

pub fn append_event(file: &LedgerFile, record: Record) -> Result<LedgerFile, AppendError> {
    file.append_event(record)
}

pub fn load(bytes: &[u8]) -> Result<Vec<ArtifactHistory>, LedgerError> {
    LedgerFile::parse(bytes)?.histories()
}

pub fn save(histories: &[ArtifactHistory]) -> Vec<u8> {
    LedgerFile::from_histories(histories).to_bytes()
}

/// Validates `record` against the ledger at `path` and appends its line,
/// creating the file with a default header when it is missing or empty.
/// Existing bytes are never rewritten. Returns the new record count.
pub fn append_to_path(path: &Path, record: Record) -> Result<usize, LedgerError> {
    let existing = match std::fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let mut out = String::new();
    let file = if existing.is_empty() {
        out.push_str(&header_line(&Header::default()));
        out.push('\n');
        LedgerFile::new(Header::default())
    } else {
        if existing.last() != Some(&b'\n') {
            let line = existing.iter().filter(|&&b| b == b'\n').count() + 1;
            return Err(LedgerError::MalformedRecord {
                line,
                reason: "last line is not newline-terminated".to_owned(),
            });
        }
        LedgerFile::parse(&existing)?
    };
    let line = file.len() + 2;
    let next = file
        .append_event(record)
        .map_err(|source| LedgerError::Rejected { line, source })?;
    out.push_str(&next.records().last().expect("just appended").to_json_line());
    out.push('\n');
    let mut handle = OpenOptions::new().create(true).append(true).open(path)?;
    handle.write_all(out.as_bytes())?;
    Ok(next.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::*;

    fn descriptor() -> SystemDescriptor {
        SystemDescriptor {
            techno_function: score_tf(),
            profile: accuracy_profile(),
            ladder: TrustLadder::accuracy_example(),
        }
    }

    fn measurement(system: &str, at: u64, value: &str) -> Record {
        Record {
            system: id(system),
            at: ts(at),
            body: RecordBody::Measurement {
                capability: id("accuracy"),
                value: d(value),
                group: None,
            },
        }
    }

    #[test]
    fn append_well_ordered() {
        let file = LedgerFile::new(Header::default());
        let file = append_event(&file, Record::deployment(id("x"), ts(0), descriptor())).unwrap();
        let before = file.clone();
        let file = append_event(&file, measurement("x", 10, "0.95")).unwrap();
        assert_eq!(file.len(), 2);
        assert_eq!(before.len(), 1);
        // same tick as the latest record is fine
        assert!(append_event(&file, measurement("x", 10, "0.9")).is_ok());
    }

    #[test]
    fn append_rejections() {
        let empty = LedgerFile::new(Header::default());
        assert_eq!(
            append_event(&empty, measurement("x", 1, "0.9")),
            Err(AppendError::MissingDeployment { system: id("x") })
        );
        let file = append_event(&empty, Record::deployment(id("x"), ts(5), descriptor())).unwrap();
        assert_eq!(
            append_event(&file, Record::deployment(id("x"), ts(6), descriptor())),
            Err(AppendError::DuplicateDeployment { system: id("x") })
        );
        assert_eq!(
            append_event(&file, measurement("x", 4, "0.9")),
            Err(AppendError::OutOfOrder {
                system: id("x"),
                at: ts(4),
                latest: ts(5)
            })
        );
    }

    #[test]
    fn canonical_lines() {
        let rec = Record {
            system: id("x"),
            at: ts(3),
            body: RecordBody::Measurement {
                capability: id("fpr"),
                value: d("0.0750"),
                group: Some(id("a")),
            },
        };
        assert_eq!(
            rec.to_json_line(),
            r#"{"kind":"measurement","system":"x","at":3,"capability":"fpr","value":"0.075","group":"a"}"#
        );
        assert_eq!(Record::from_json(&rec.to_json_line()).unwrap(), rec);
        assert_eq!(
            String::from_utf8(LedgerFile::new(Header::default()).to_bytes()).unwrap(),
            "{\"kind\":\"header\",\"version\":1,\"epoch\":\"1970-01-01T00:00:00Z\",\"tick_unit\":\"ms\"}\n"
        );
    }

    #[test]
    fn round_trip_histories() {
        let mut events = vec![
            LifecycleEvent::deployment(ts(0)),
            measure("accuracy", "0.95", 0),
        ];
        events.push(LifecycleEvent::retraining(ts(5), "refresh \"v2\""));
        events.push(LifecycleEvent::profile_change(
            ts(7),
            profile(&[
                "accuracy >= 0.9",
                "uptime >= 0.999 over 30d max-episode 10m",
            ]),
        ));
        events.push(measure_group("fpr", "g1", "0.07", 8));
        let x = ArtifactHistory::new(
            id("x"),
            score_tf(),
            accuracy_profile(),
            TrustLadder::accuracy_example(),
            events,
        )
        .unwrap();
        let y = accuracy_history("y", 2, &[(2, "0.5"), (9, "0.91")]);
        let bytes = save(&[x.clone(), y.clone()]);
        let loaded = load(&bytes).unwrap();
        assert_eq!(loaded, vec![x, y]);
        assert_eq!(save(&loaded), bytes);
    }

    #[test]
    fn interleaved_records_group_by_system() {
        let mut file = LedgerFile::new(Header::default());
        file.push(Record::deployment(id("b"), ts(0), descriptor()))
            .unwrap();
        file.push(Record::deployment(id("a"), ts(1), descriptor()))
            .unwrap();
        file.push(measurement("b", 2, "0.9")).unwrap();
        file.push(measurement("a", 1, "0.8")).unwrap();
        let hs = LedgerFile::parse(&file.to_bytes())
            .unwrap()
            .histories()
            .unwrap();
        assert_eq!(
            hs.iter()
                .map(|h| h.system_id().as_str())
                .collect::<Vec<_>>(),
            ["b", "a"]
        );
        assert_eq!(hs[1].events().len(), 2);
    }

    fn ledger_text(lines: &[&str]) -> Vec<u8> {
        let mut s = String::from("{\"kind\":\"header\",\"version\":1,\"epoch\":\"1970-01-01T00:00:00Z\",\"tick_unit\":\"ms\"}\n");
        for l in lines {
            s.push_str(l);
            s.push('\n');
        }
        s.into_bytes()
    }

    const DEPLOY_X: &str = r#"{"kind":"deployment","system":"x","at":0,"techno_function":{"verb":"predict","object":"numeric_score","resources":["tabular"]},"profile":["accuracy >= 0.9"],"ladder":"level 1 when accuracy in [0.9, inf)\nlevel 0.5 when accuracy in [0.7, 0.9)\ndefault 0"}"#;

    #[test]
    fn truncated_last_line() {
        let mut bytes = ledger_text(&[DEPLOY_X]);
        bytes.extend_from_slice(br#"{"kind":"measurement","system":"x","at":5,"capab"#);
        match LedgerFile::parse(&bytes) {
            Err(LedgerError::MalformedRecord { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected malformed record, got {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let cases: Vec<(Vec<u8>, usize)> = vec![
            (Vec::new(), 1),
            (b"not json\n".to_vec(), 1),
            (ledger_text(&[DEPLOY_X, ""]), 3),
            (
                ledger_text(&[
                    r#"{"kind":"measurement","system":"x","at":5,"capability":"accuracy","value":0.9}"#,
                ]),
                2,
            ),
            (
                ledger_text(&[
                    r#"{"kind":"measurement","system":"x","at":5,"capability":"accuracy","value":"90%"}"#,
                ]),
                2,
            ),
            (
                ledger_text(&[r#"{"kind":"retraining","system":"x","at":5,"note":"n","extra":1}"#]),
                2,
            ),
            (
                ledger_text(&[
                    r#"{"kind":"profile_change","system":"x","at":5,"profile":["accuracy >> 1"]}"#,
                ]),
                2,
            ),
            (
                ledger_text(&[
                    r#"{"kind":"header","version":1,"epoch":"1970-01-01T00:00:00Z","tick_unit":"ms"}"#,
                ]),
                2,
            ),
            (
                ledger_text(&[r#"{"kind":"retraining","system":"X","at":5,"note":"n"}"#]),
                2,
            ),
        ];
        for (bytes, expected_line) in cases {
            match LedgerFile::parse(&bytes) {
                Err(LedgerError::MalformedRecord { line, .. }) => {
                    assert_eq!(line, expected_line, "{}", String::from_utf8_lossy(&bytes))
                }
                other => panic!("expected malformed at {expected_line}, got {other:?}"),
            }
        }
    }

    #[test]
    fn version_and_rule_violations() {
        let bytes = b"{\"kind\":\"header\",\"version\":2,\"epoch\":\"1970-01-01T00:00:00Z\",\"tick_unit\":\"ms\"}\n";
        assert!(matches!(
            LedgerFile::parse(bytes),
            Err(LedgerError::UnsupportedVersion { found: 2 })
        ));
        let bytes = ledger_text(&[
            DEPLOY_X,
            r#"{"kind":"retraining","system":"y","at":5,"note":"n"}"#,
        ]);
        assert!(matches!(
            LedgerFile::parse(&bytes),
            Err(LedgerError::Rejected {
                line: 3,
                source: AppendError::MissingDeployment { .. }
            })
        ));
    }

    #[test]
    fn append_to_path_only_appends() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.jsonl");
        assert_eq!(
            append_to_path(&path, Record::deployment(id("x"), ts(0), descriptor())).unwrap(),
            1
        );
        let prefix = std::fs::read(&path).unwrap();
        assert_eq!(
            append_to_path(&path, measurement("x", 3, "0.9")).unwrap(),
            2
        );
        let after = std::fs::read(&path).unwrap();
        assert!(after.starts_with(&prefix));
        assert!(matches!(
            append_to_path(&path, measurement("x", 1, "0.9")),
            Err(LedgerError::Rejected { line: 4, .. })
        ));
        assert_eq!(std::fs::read(&path).unwrap(), after);
        assert_eq!(load(&after).unwrap()[0].events().len(), 2);
    }
}
