//! Domain types shared by every other module: identifiers, time, kinds,
//! contracts, trust profiles and ladders, and artifact histories.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::decimal::Decimal;

/// Lowercase identifier matching `[a-z][a-z0-9_]*`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid identifier {0:?}: expected [a-z][a-z0-9_]*")]
pub struct InvalidIdent(pub String);

impl Ident {
    pub fn new(s: impl Into<String>) -> Result<Ident, InvalidIdent> {
        let s = s.into();
        if Self::is_valid(&s) {
            Ok(Ident(s))
        } else {
            Err(InvalidIdent(s))
        }
    }

    pub fn is_valid(s: &str) -> bool {
        let mut bytes = s.bytes();
        matches!(bytes.next(), Some(b'a'..=b'z'))
            && bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Ident {
    type Err = InvalidIdent;
    fn from_str(s: &str) -> Result<Ident, InvalidIdent> {
        Ident::new(s)
    }
}

impl Serialize for Ident {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Ident {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Ident, D::Error> {
        let s = String::deserialize(deserializer)?;
        Ident::new(s).map_err(serde::de::Error::custom)
    }
}

/// Milliseconds since the ledger epoch.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Timestamp(u64);

impl Timestamp {
    pub const fn new(ticks: u64) -> Timestamp {
        Timestamp(ticks)
    }

    pub const fn ticks(self) -> u64 {
        self.0
    }
}

impl From<u64> for Timestamp {
    fn from(ticks: u64) -> Timestamp {
        Timestamp(ticks)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A node in the hierarchy of nested kinds, written `predict.credit_risk_score.tabular`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KindPath(Vec<Ident>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidKind {
    #[error("kind path must have at least one segment")]
    Empty,
    #[error("kind path segment: {0}")]
    Segment(#[from] InvalidIdent),
}

impl KindPath {
    pub fn new(segments: Vec<Ident>) -> Result<KindPath, InvalidKind> {
        if segments.is_empty() {
            return Err(InvalidKind::Empty);
        }
        Ok(KindPath(segments))
    }

    pub fn segments(&self) -> &[Ident] {
        &self.0
    }

    /// Whether `self` is a proper prefix of `other`.
    pub fn is_ancestor_of(&self, other: &KindPath) -> bool {
        self.0.len() < other.0.len() && other.0.starts_with(&self.0)
    }

    /// Whether `self` equals `other` or is one of its ancestors.
    pub fn contains(&self, other: &KindPath) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for KindPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(seg.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for KindPath {
    type Err = InvalidKind;
    fn from_str(s: &str) -> Result<KindPath, InvalidKind> {
        if s.is_empty() {
            return Err(InvalidKind::Empty);
        }
        let segments = s
            .split('.')
            .map(Ident::new)
            .collect::<Result<Vec<_>, _>>()?;
        KindPath::new(segments)
    }
}

impl Serialize for KindPath {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for KindPath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<KindPath, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verb {
    Predict,
    Recognize,
    Generate,
}

impl Verb {
    pub fn as_str(self) -> &'static str {
        match self {
            Verb::Predict => "predict",
            Verb::Recognize => "recognize",
            Verb::Generate => "generate",
        }
    }
}

/// "[to predict/recognize/generate] X using Y".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TechnoFunction {
    verb: Verb,
    object: Ident,
    resources: Vec<Ident>,
    kind_path: KindPath,
}

impl TechnoFunction {
    /// The kind path is `[verb, object, resources...]`.
    pub fn new(verb: Verb, object: Ident, resources: Vec<Ident>) -> TechnoFunction {
        let mut segments = Vec::with_capacity(2 + resources.len());
        segments.push(Ident(verb.as_str().to_owned()));
        segments.push(object.clone());
        segments.extend(resources.iter().cloned());
        TechnoFunction {
            verb,
            object,
            resources,
            kind_path: KindPath(segments),
        }
    }

    pub fn verb(&self) -> Verb {
        self.verb
    }

    pub fn object(&self) -> &Ident {
        &self.object
    }

    pub fn resources(&self) -> &[Ident] {
        &self.resources
    }

    pub fn kind_path(&self) -> &KindPath {
        &self.kind_path
    }
}

/// True iff `kind` is a prefix (proper or equal) of the techno-function's kind path.
pub fn kind_membership(tf: &TechnoFunction, kind: &KindPath) -> bool {
    kind.contains(tf.kind_path())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Comparator {
    Ge,
    Gt,
    Le,
    Lt,
}

impl Comparator {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparator::Ge => ">=",
            Comparator::Gt => ">",
            Comparator::Le => "<=",
            Comparator::Lt => "<",
        }
    }

    pub fn parse(s: &str) -> Option<Comparator> {
        Some(match s {
            ">=" => Comparator::Ge,
            ">" => Comparator::Gt,
            "<=" => Comparator::Le,
            "<" => Comparator::Lt,
            _ => return None,
        })
    }

    pub fn holds(self, value: Decimal, threshold: Decimal) -> bool {
        match self {
            Comparator::Ge => value >= threshold,
            Comparator::Gt => value > threshold,
            Comparator::Le => value <= threshold,
            Comparator::Lt => value < threshold,
        }
    }
}

/// One contract such as `uptime >= 0.999 over 30d max-episode 10m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContractSpec {
    pub capability: Ident,
    pub comparator: Comparator,
    pub threshold: Decimal,
    pub window: Option<u64>,
    pub max_episode: Option<u64>,
    pub per_group: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContractError {
    #[error("max-episode requires a window")]
    EpisodeWithoutWindow,
    #[error("two contracts share the signature of {0:?}")]
    DuplicateSignature(String),
}

impl ContractSpec {
    pub fn new(
        capability: Ident,
        comparator: Comparator,
        threshold: Decimal,
        window: Option<u64>,
        max_episode: Option<u64>,
        per_group: bool,
    ) -> Result<ContractSpec, ContractError> {
        if max_episode.is_some() && window.is_none() {
            return Err(ContractError::EpisodeWithoutWindow);
        }
        Ok(ContractSpec {
            capability,
            comparator,
            threshold,
            window,
            max_episode,
            per_group,
        })
    }

    /// Instantaneous contract `capability comparator threshold`.
    pub fn simple(capability: Ident, comparator: Comparator, threshold: Decimal) -> ContractSpec {
        ContractSpec {
            capability,
            comparator,
            threshold,
            window: None,
            max_episode: None,
            per_group: false,
        }
    }

    fn signature(&self) -> (&Ident, Comparator, Option<u64>, bool) {
        (
            &self.capability,
            self.comparator,
            self.window,
            self.per_group,
        )
    }
}

/// A trustworthiness profile: a set of contracts keyed by canonical rendering.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TrustProfile {
    contracts: BTreeMap<String, ContractSpec>,
}

impl TrustProfile {
    pub fn new(
        contracts: impl IntoIterator<Item = ContractSpec>,
    ) -> Result<TrustProfile, ContractError> {
        let mut map: BTreeMap<String, ContractSpec> = BTreeMap::new();
        for c in contracts {
            let rendered = crate::dsl::render_contract(&c);
            if let Some(existing) = map.values().find(|e| e.signature() == c.signature()) {
                if *existing != c {
                    return Err(ContractError::DuplicateSignature(rendered));
                }
            }
            map.insert(rendered, c);
        }
        Ok(TrustProfile { contracts: map })
    }

    pub fn is_empty(&self) -> bool {
        self.contracts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.contracts.len()
    }

    pub fn contracts(&self) -> impl Iterator<Item = &ContractSpec> {
        self.contracts.values()
    }

    /// Canonical renderings in sorted order.
    pub fn renderings(&self) -> impl Iterator<Item = &str> {
        self.contracts.keys().map(String::as_str)
    }

    /// `{a; b; c}` over the sorted canonical renderings.
    pub fn canonical_key(&self) -> String {
        let parts: Vec<&str> = self.renderings().collect();
        format!("{{{}}}", parts.join("; "))
    }
}

pub fn profiles_equal(a: &TrustProfile, b: &TrustProfile) -> bool {
    a.contracts.keys().eq(b.contracts.keys())
}

/// `capability in [lower, upper)`; `upper == None` means `+inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LadderCondition {
    pub capability: Ident,
    pub lower: Decimal,
    pub upper: Option<Decimal>,
}

impl LadderCondition {
    pub fn admits(&self, value: Decimal) -> bool {
        value >= self.lower && self.upper.is_none_or(|u| value < u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LadderRule {
    pub conditions: Vec<LadderCondition>,
    pub level: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("level {0} is negative")]
    NegativeLevel(Decimal),
    #[error("rule has no conditions")]
    EmptyRule,
    #[error("empty interval [{lower}, {upper})")]
    EmptyInterval { lower: Decimal, upper: Decimal },
}

/// Ordered rules mapping capability values to a trustworthiness level.
/// The first rule whose conditions all hold wins.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrustLadder {
    rules: Vec<LadderRule>,
    default_level: Decimal,
}

impl TrustLadder {
    pub fn new(rules: Vec<LadderRule>, default_level: Decimal) -> Result<TrustLadder, LadderError> {
        if default_level.is_negative() {
            return Err(LadderError::NegativeLevel(default_level));
        }
        for rule in &rules {
            if rule.level.is_negative() {
                return Err(LadderError::NegativeLevel(rule.level));
            }
            if rule.conditions.is_empty() {
                return Err(LadderError::EmptyRule);
            }
            for c in &rule.conditions {
                if let Some(upper) = c.upper {
                    if upper <= c.lower {
                        return Err(LadderError::EmptyInterval {
                            lower: c.lower,
                            upper,
                        });
                    }
                }
            }
        }
        Ok(TrustLadder {
            rules,
            default_level,
        })
    }

    /// The ladder of the toy accuracy-only system: 1 above 0.9, 0.5 on
    /// `[0.7, 0.9)`, 0 otherwise.
    pub fn accuracy_example() -> TrustLadder {
        let accuracy = Ident("accuracy".to_owned());
        let dec = |m, s| Decimal::new(m, s).expect("static decimal");
        TrustLadder {
            rules: vec![
                LadderRule {
                    conditions: vec![LadderCondition {
                        capability: accuracy.clone(),
                        lower: dec(9, 1),
                        upper: None,
                    }],
                    level: Decimal::ONE,
                },
                LadderRule {
                    conditions: vec![LadderCondition {
                        capability: accuracy,
                        lower: dec(7, 1),
                        upper: Some(dec(9, 1)),
                    }],
                    level: dec(5, 1),
                },
            ],
            default_level: Decimal::ZERO,
        }
    }

    pub fn rules(&self) -> &[LadderRule] {
        &self.rules
    }

    pub fn default_level(&self) -> Decimal {
        self.default_level
    }

    /// Every capability the ladder references, in first-appearance order.
    pub fn capabilities(&self) -> Vec<&Ident> {
        let mut out: Vec<&Ident> = Vec::new();
        for c in self.rules.iter().flat_map(|r| &r.conditions) {
            if !out.contains(&&c.capability) {
                out.push(&c.capability);
            }
        }
        out
    }

    /// Declared levels plus the default, sorted and deduplicated.
    pub fn level_set(&self) -> Vec<Decimal> {
        let mut levels: Vec<Decimal> = self.rules.iter().map(|r| r.level).collect();
        levels.push(self.default_level);
        levels.sort();
        levels.dedup();
        levels
    }

    /// Level for a full assignment of capability values.
    pub fn evaluate(&self, value_of: impl Fn(&Ident) -> Decimal) -> Decimal {
        self.rules
            .iter()
            .find(|rule| {
                rule.conditions
                    .iter()
                    .all(|c| c.admits(value_of(&c.capability)))
            })
            .map_or(self.default_level, |rule| rule.level)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CapabilityMeasurement {
    pub capability: Ident,
    pub value: Decimal,
    pub at: Timestamp,
    pub group: Option<Ident>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    Deployment,
    Measurement(CapabilityMeasurement),
    Retraining { note: String },
    ProfileChange(TrustProfile),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LifecycleEvent {
    pub at: Timestamp,
    pub kind: EventKind,
}

impl LifecycleEvent {
    pub fn deployment(at: Timestamp) -> LifecycleEvent {
        LifecycleEvent {
            at,
            kind: EventKind::Deployment,
        }
    }

    pub fn measurement(m: CapabilityMeasurement) -> LifecycleEvent {
        LifecycleEvent {
            at: m.at,
            kind: EventKind::Measurement(m),
        }
    }

    pub fn retraining(at: Timestamp, note: impl Into<String>) -> LifecycleEvent {
        LifecycleEvent {
            at,
            kind: EventKind::Retraining { note: note.into() },
        }
    }

    pub fn profile_change(at: Timestamp, profile: TrustProfile) -> LifecycleEvent {
        LifecycleEvent {
            at,
            kind: EventKind::ProfileChange(profile),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("history of {0} has no deployment event")]
    MissingDeployment(Ident),
    #[error("history of {0} has more than one deployment event")]
    DuplicateDeployment(Ident),
    #[error("history of {system}: event at {at} precedes the deployment at {deployed}")]
    DeploymentNotFirst {
        system: Ident,
        at: Timestamp,
        deployed: Timestamp,
    },
    #[error("history of {system}: measurement stamped {measured} filed under event time {at}")]
    MeasurementTimeMismatch {
        system: Ident,
        at: Timestamp,
        measured: Timestamp,
    },
}

/// Evaluation failures shared by the query modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("query time {at} precedes deployment at {deployed}")]
    BeforeDeployment { at: Timestamp, deployed: Timestamp },
    #[error("no measurement of {capability} at or before {at}")]
    NoData { capability: Ident, at: Timestamp },
    #[error("invalid interval [{from}, {to})")]
    InvalidInterval { from: Timestamp, to: Timestamp },
    #[error("{system} is not of kind {kind}")]
    NotOfKind { system: Ident, kind: KindPath },
}

/// The full timeline of one AI system.
///
/// Events are kept sorted by timestamp with ties in ingestion order; the
/// Deployment event is always first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtifactHistory {
    system_id: Ident,
    techno_function: TechnoFunction,
    initial_profile: TrustProfile,
    ladder: TrustLadder,
    events: Vec<LifecycleEvent>,
    deployed_at: Timestamp,
    // capability -> indices into `events` of its measurements, time-ordered
    measurements: HashMap<Ident, Vec<usize>>,
    profile_changes: Vec<usize>,
}

impl ArtifactHistory {
    pub fn new(
        system_id: Ident,
        techno_function: TechnoFunction,
        initial_profile: TrustProfile,
        ladder: TrustLadder,
        mut events: Vec<LifecycleEvent>,
    ) -> Result<ArtifactHistory, HistoryError> {
        // stable: equal timestamps keep ingestion order
        events.sort_by_key(|e| e.at);
        let deployments = events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Deployment))
            .count();
        match deployments {
            0 => return Err(HistoryError::MissingDeployment(system_id)),
            1 => {}
            _ => return Err(HistoryError::DuplicateDeployment(system_id)),
        }
        let first = &events[0];
        if !matches!(first.kind, EventKind::Deployment) {
            let deployed = events
                .iter()
                .find(|e| matches!(e.kind, EventKind::Deployment))
                .map(|e| e.at)
                .unwrap_or_default();
            return Err(HistoryError::DeploymentNotFirst {
                system: system_id,
                at: first.at,
                deployed,
            });
        }
        let deployed_at = first.at;

        let mut measurements: HashMap<Ident, Vec<usize>> = HashMap::new();
        let mut profile_changes = Vec::new();
        for (i, e) in events.iter().enumerate() {
            match &e.kind {
                EventKind::Measurement(m) => {
                    if m.at != e.at {
                        return Err(HistoryError::MeasurementTimeMismatch {
                            system: system_id,
                            at: e.at,
                            measured: m.at,
                        });
                    }
                    measurements
                        .entry(m.capability.clone())
                        .or_default()
                        .push(i);
                }
                EventKind::ProfileChange(_) => profile_changes.push(i),
                EventKind::Deployment | EventKind::Retraining { .. } => {}
            }
        }
        Ok(ArtifactHistory {
            system_id,
            techno_function,
            initial_profile,
            ladder,
            events,
            deployed_at,
            measurements,
            profile_changes,
        })
    }

    pub fn system_id(&self) -> &Ident {
        &self.system_id
    }

    pub fn techno_function(&self) -> &TechnoFunction {
        &self.techno_function
    }

    pub fn initial_profile(&self) -> &TrustProfile {
        &self.initial_profile
    }

    pub fn ladder(&self) -> &TrustLadder {
        &self.ladder
    }

    pub fn events(&self) -> &[LifecycleEvent] {
        &self.events
    }

    /// t0: the deployment timestamp.
    pub fn deployed_at(&self) -> Timestamp {
        self.deployed_at
    }

    pub fn ensure_deployed(&self, at: Timestamp) -> Result<(), EvalError> {
        if at < self.deployed_at {
            Err(EvalError::BeforeDeployment {
                at,
                deployed: self.deployed_at,
            })
        } else {
            Ok(())
        }
    }

    /// Measurements of `capability`, time-ordered (ties in ingestion order).
    pub fn measurements_of<'a>(
        &'a self,
        capability: &Ident,
    ) -> impl DoubleEndedIterator<Item = &'a CapabilityMeasurement> + 'a {
        self.measurements
            .get(capability)
            .map(Vec::as_slice)
            .unwrap_or(&[])
            .iter()
            .map(move |&i| match &self.events[i].kind {
                EventKind::Measurement(m) => m,
                _ => unreachable!("measurement index points at a measurement"),
            })
    }

    /// Profile-change events as `(timestamp, new profile)`.
    pub fn profile_changes(&self) -> impl Iterator<Item = (Timestamp, &TrustProfile)> {
        self.profile_changes
            .iter()
            .map(move |&i| match &self.events[i].kind {
                EventKind::ProfileChange(p) => (self.events[i].at, p),
                _ => unreachable!("profile-change index points at a profile change"),
            })
    }

    /// Distinct event timestamps in `[from, to]`, ascending.
    pub fn event_times_between(&self, from: Timestamp, to: Timestamp) -> Vec<Timestamp> {
        let start = self.events.partition_point(|e| e.at < from);
        let mut out: Vec<Timestamp> = Vec::new();
        for e in &self.events[start..] {
            if e.at > to {
                break;
            }
            if out.last() != Some(&e.at) {
                out.push(e.at);
            }
        }
        out
    }
}

/// Initial profile overridden by the latest ProfileChange at or before `t`.
pub fn profile_at(h: &ArtifactHistory, t: Timestamp) -> Result<&TrustProfile, EvalError> {
    h.ensure_deployed(t)?;
    Ok(h.profile_changes()
        .take_while(|(at, _)| *at <= t)
        .last()
        .map_or(&h.initial_profile, |(_, p)| p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FailedCondition {
    KindMismatch,
    ProfileMismatch,
    LevelMismatch,
    DeploymentMismatch,
    NoData,
}

impl FailedCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            FailedCondition::KindMismatch => "KindMismatch",
            FailedCondition::ProfileMismatch => "ProfileMismatch",
            FailedCondition::LevelMismatch => "LevelMismatch",
            FailedCondition::DeploymentMismatch => "DeploymentMismatch",
            FailedCondition::NoData => "NoData",
        }
    }
}

impl fmt::Display for FailedCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which condition failed, and whether it failed at an endpoint or
/// somewhere along the path between them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Failure {
    pub condition: FailedCondition,
    pub along_path: bool,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.along_path {
            write!(f, "{}(path)", self.condition)
        } else {
            write!(f, "{}", self.condition)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityVerdict {
    failure: Option<Failure>,
    pub details: String,
}

impl IdentityVerdict {
    pub fn identical(details: impl Into<String>) -> IdentityVerdict {
        IdentityVerdict {
            failure: None,
            details: details.into(),
        }
    }

    pub fn failed(condition: FailedCondition, details: impl Into<String>) -> IdentityVerdict {
        IdentityVerdict {
            failure: Some(Failure {
                condition,
                along_path: false,
            }),
            details: details.into(),
        }
    }

    pub fn failed_along_path(
        condition: FailedCondition,
        details: impl Into<String>,
    ) -> IdentityVerdict {
        IdentityVerdict {
            failure: Some(Failure {
                condition,
                along_path: true,
            }),
            details: details.into(),
        }
    }

    pub fn is_identical(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failure(&self) -> Option<Failure> {
        self.failure
    }

    pub fn failed_condition(&self) -> Option<FailedCondition> {
        self.failure.map(|f| f.condition)
    }
}

impl fmt::Display for IdentityVerdict {
    /// `identical` or `not-identical: <failure>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.failure {
            None => f.write_str("identical"),
            Some(failure) => write!(f, "not-identical: {failure}"),
        }
    }
}
