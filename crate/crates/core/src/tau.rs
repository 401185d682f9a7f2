//! Capability values, contract satisfaction and the trustworthiness level
//! τ(t) of an artifact history.
//!
//! Measurements are step-held: the value of a capability at `t` is the
//! latest measurement at or before `t`. τ is therefore piecewise constant
//! with possible changes only at event timestamps.

use std::collections::{BTreeMap, HashMap};

use crate::decimal::Decimal;
use crate::model::{
    ArtifactHistory, CapabilityMeasurement, ContractSpec, EvalError, Ident, Timestamp,
};

/// Latest measurement of `capability` at or before `t`. With `group` set,
/// only measurements for that group count; otherwise every measurement does.
pub fn capability_value_at(
    h: &ArtifactHistory,
    capability: &Ident,
    t: Timestamp,
    group: Option<&Ident>,
) -> Result<Decimal, EvalError> {
    h.ensure_deployed(t)?;
    h.measurements_of(capability)
        .rev()
        .skip_while(|m| m.at > t)
        .find(|m| group.is_none() || m.group.as_ref() == group)
        .map(|m| m.value)
        .ok_or_else(|| EvalError::NoData {
            capability: capability.clone(),
            at: t,
        })
}

fn no_data(c: &ContractSpec, t: Timestamp) -> EvalError {
    EvalError::NoData {
        capability: c.capability.clone(),
        at: t,
    }
}

/// Measurement series, split by group when `per_group` is set. Ungrouped
/// evaluation pools every measurement under the `None` key.
fn scopes<'a>(
    measurements: impl Iterator<Item = &'a CapabilityMeasurement>,
    per_group: bool,
) -> BTreeMap<Option<&'a Ident>, Vec<&'a CapabilityMeasurement>> {
    let mut out: BTreeMap<Option<&Ident>, Vec<&CapabilityMeasurement>> = BTreeMap::new();
    for m in measurements {
        let key = if per_group {
            match &m.group {
                Some(g) => Some(g),
                None => continue,
            }
        } else {
            None
        };
        out.entry(key).or_default().push(m);
    }
    out
}

/// Whether contract `c` holds for history `h` at time `t`.
///
/// Windowed contracts average the measurements in `[t - window, t]` and,
/// when `max-episode` is set, reject any maximal violating stretch of the
/// step-held signal that lasts longer than the allowance.
pub fn contract_satisfied(
    c: &ContractSpec,
    h: &ArtifactHistory,
    t: Timestamp,
) -> Result<bool, EvalError> {
    h.ensure_deployed(t)?;
    let upto: Vec<&CapabilityMeasurement> = h
        .measurements_of(&c.capability)
        .take_while(|m| m.at <= t)
        .collect();
    let scoped = scopes(upto.iter().copied(), c.per_group);
    if scoped.is_empty() {
        return Err(no_data(c, t));
    }
    let Some(window) = c.window else {
        // instantaneous: latest value of each scope
        return Ok(scoped.values().all(|series| {
            let latest = series.last().expect("non-empty scope");
            c.comparator.holds(latest.value, c.threshold)
        }));
    };

    let window_start = Timestamp::new(t.ticks().saturating_sub(window)).max(h.deployed_at());
    let mut any_scope = false;
    for series in scoped.values() {
        let in_window: Vec<&CapabilityMeasurement> = series
            .iter()
            .copied()
            .filter(|m| m.at >= window_start)
            .collect();
        if in_window.is_empty() {
            continue;
        }
        any_scope = true;
        let sum = in_window
            .iter()
            .try_fold(Decimal::ZERO, |acc, m| acc.checked_add(m.value));
        let scaled = c.threshold.checked_mul_count(in_window.len());
        let (Some(sum), Some(scaled)) = (sum, scaled) else {
            return Ok(false);
        };
        // mean (op) threshold  <=>  sum (op) threshold * n
        if !c.comparator.holds(sum, scaled) {
            return Ok(false);
        }
        if let Some(allowance) = c.max_episode {
            if longest_violation(c, series, window_start, t) > allowance {
                return Ok(false);
            }
        }
    }
    if any_scope {
        Ok(true)
    } else {
        Err(no_data(c, t))
    }
}

/// Longest maximal stretch within `[start, end]` during which the
/// step-held value of `series` violates the contract comparison.
fn longest_violation(
    c: &ContractSpec,
    series: &[&CapabilityMeasurement],
    start: Timestamp,
    end: Timestamp,
) -> u64 {
    let violates = |v: Decimal| !c.comparator.holds(v, c.threshold);
    let held = series.iter().rev().find(|m| m.at <= start).map(|m| m.value);
    let mut since = held.filter(|v| violates(*v)).map(|_| start);
    let mut longest = 0;
    for m in series.iter().filter(|m| m.at > start && m.at <= end) {
        match (since, violates(m.value)) {
            (None, true) => since = Some(m.at),
            (Some(s), false) => {
                longest = longest.max(m.at.ticks() - s.ticks());
                since = None;
            }
            _ => {}
        }
    }
    if let Some(s) = since {
        longest = longest.max(end.ticks() - s.ticks());
    }
    longest
}

/// τ(t): the level of the first ladder rule matching the step-held
/// capability values, or the ladder default.
pub fn tau_at(h: &ArtifactHistory, t: Timestamp) -> Result<Decimal, EvalError> {
    h.ensure_deployed(t)?;
    let ladder = h.ladder();
    let mut values: HashMap<&Ident, Decimal> = HashMap::new();
    for cap in ladder.capabilities() {
        values.insert(cap, capability_value_at(h, cap, t, None)?);
    }
    Ok(ladder.evaluate(|cap| values[cap]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TauPiece {
    pub from: Timestamp,
    pub to: Timestamp,
    pub level: Decimal,
}

/// Piecewise-constant τ over `[start, end)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTrajectory {
    pub start: Timestamp,
    pub end: Timestamp,
    pub pieces: Vec<TauPiece>,
    pub discontinuities: Vec<Timestamp>,
}

impl TauTrajectory {
    pub fn level_at(&self, t: Timestamp) -> Option<Decimal> {
        if t < self.start || t >= self.end {
            return None;
        }
        let idx = self.pieces.partition_point(|p| p.to <= t);
        self.pieces.get(idx).map(|p| p.level)
    }
}

/// Exact τ trajectory over `[from, to)`.
pub fn tau_trajectory(
    h: &ArtifactHistory,
    from: Timestamp,
    to: Timestamp,
) -> Result<TauTrajectory, EvalError> {
    h.ensure_deployed(from)?;
    if from >= to {
        return Err(EvalError::InvalidInterval { from, to });
    }
    let mut breakpoints = vec![from];
    breakpoints.extend(
        h.event_times_between(from, to)
            .into_iter()
            .filter(|&b| b > from && b < to),
    );

    let mut pieces: Vec<TauPiece> = Vec::new();
    for (i, &at) in breakpoints.iter().enumerate() {
        let level = tau_at(h, at)?;
        let next = breakpoints.get(i + 1).copied().unwrap_or(to);
        match pieces.last_mut() {
            Some(last) if last.level == level => last.to = next,
            _ => pieces.push(TauPiece {
                from: at,
                to: next,
                level,
            }),
        }
    }
    let discontinuities = pieces.iter().skip(1).map(|p| p.from).collect();
    Ok(TauTrajectory {
        start: from,
        end: to,
        pieces,
        discontinuities,
    })
}
