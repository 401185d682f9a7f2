//! Builders shared by unit tests.

use crate::decimal::Decimal;
use crate::dsl::{parse_contract, parse_ladder};
use crate::model::*;

pub fn id(s: &str) -> Ident {
    Ident::new(s).unwrap()
}

pub fn d(s: &str) -> Decimal {
    s.parse().unwrap()
}

pub fn ts(t: u64) -> Timestamp {
    Timestamp::new(t)
}

pub fn profile(srcs: &[&str]) -> TrustProfile {
    TrustProfile::new(srcs.iter().map(|s| parse_contract(s).unwrap())).unwrap()
}

pub fn accuracy_profile() -> TrustProfile {
    profile(&["accuracy >= 0.9"])
}

pub fn score_tf() -> TechnoFunction {
    TechnoFunction::new(Verb::Predict, id("numeric_score"), vec![id("tabular")])
}

pub fn measure(capability: &str, value: &str, at: u64) -> LifecycleEvent {
    LifecycleEvent::measurement(CapabilityMeasurement {
        capability: id(capability),
        value: d(value),
        at: ts(at),
        group: None,
    })
}

pub fn measure_group(capability: &str, group: &str, value: &str, at: u64) -> LifecycleEvent {
    LifecycleEvent::measurement(CapabilityMeasurement {
        capability: id(capability),
        value: d(value),
        at: ts(at),
        group: Some(id(group)),
    })
}

/// Accuracy-ladder history deployed at `t0` with the given `(tick, accuracy)` series.
pub fn accuracy_history(system: &str, t0: u64, series: &[(u64, &str)]) -> ArtifactHistory {
    let mut events = vec![LifecycleEvent::deployment(ts(t0))];
    events.extend(series.iter().map(|(t, v)| measure("accuracy", v, *t)));
    ArtifactHistory::new(
        id(system),
        score_tf(),
        accuracy_profile(),
        TrustLadder::accuracy_example(),
        events,
    )
    .unwrap()
}

pub fn history_with(system: &str, ladder: &str, events: Vec<LifecycleEvent>) -> ArtifactHistory {
    ArtifactHistory::new(
        id(system),
        score_tf(),
        accuracy_profile(),
        parse_ladder(ladder).unwrap(),
        events,
    )
    .unwrap()
}
