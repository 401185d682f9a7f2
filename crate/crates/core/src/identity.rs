//! Identity criteria over artifact histories.
//!
//! `x(t1) =φ y(t2)` holds iff, in this order of checking:
//!
//! 1. both systems were deployed at the same time;
//! 2. both techno-functions belong to the kind `φ`;
//! 3. their trust profiles in force at `t1` and `t2` are equal;
//! 4. `τx(t1) = τy(t2)`.
//!
//! Synchronic identity fixes `t1 = t2`, pointwise diachronic identity fixes
//! `x = y`. Path persistence additionally requires profile and level to stay
//! constant over the whole interval, and [`persistence_segments`] cuts a
//! history into the maximal stretches on which that holds.

use std::collections::BTreeMap;

use crate::decimal::Decimal;
use crate::exec::Execution;
use crate::model::{
    kind_membership, profile_at, profiles_equal, ArtifactHistory, EvalError, FailedCondition,
    Ident, IdentityVerdict, KindPath, Timestamp, TrustProfile,
};
use crate::tau::tau_at;

pub fn check_general_identity(
    x: &ArtifactHistory,
    t1: Timestamp,
    y: &ArtifactHistory,
    t2: Timestamp,
    kind: &KindPath,
) -> Result<IdentityVerdict, EvalError> {
    x.ensure_deployed(t1)?;
    y.ensure_deployed(t2)?;
    let (xi, yi) = (x.system_id(), y.system_id());

    if x.deployed_at() != y.deployed_at() {
        return Ok(IdentityVerdict::failed(
            FailedCondition::DeploymentMismatch,
            format!(
                "{xi} deployed at {}, {yi} deployed at {}",
                x.deployed_at(),
                y.deployed_at()
            ),
        ));
    }
    for h in [x, y] {
        if !kind_membership(h.techno_function(), kind) {
            return Ok(IdentityVerdict::failed(
                FailedCondition::KindMismatch,
                format!(
                    "{} ({}) is not of kind {kind}",
                    h.system_id(),
                    h.techno_function().kind_path()
                ),
            ));
        }
    }
    let px = profile_at(x, t1)?;
    let py = profile_at(y, t2)?;
    if !profiles_equal(px, py) {
        return Ok(IdentityVerdict::failed(
            FailedCondition::ProfileMismatch,
            format!(
                "{xi}@{t1} {} vs {yi}@{t2} {}",
                px.canonical_key(),
                py.canonical_key()
            ),
        ));
    }
    let (lx, ly) = match (tau_at(x, t1), tau_at(y, t2)) {
        (Ok(lx), Ok(ly)) => (lx, ly),
        (Err(e @ EvalError::NoData { .. }), _) | (_, Err(e @ EvalError::NoData { .. })) => {
            return Ok(IdentityVerdict::failed(
                FailedCondition::NoData,
                e.to_string(),
            ));
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    if lx != ly {
        return Ok(IdentityVerdict::failed(
            FailedCondition::LevelMismatch,
            format!("tau {xi}@{t1} = {lx}, tau {yi}@{t2} = {ly}"),
        ));
    }
    Ok(IdentityVerdict::identical(format!(
        "{xi}@{t1} = {yi}@{t2} in {kind} at level {lx}"
    )))
}

/// `x(t) =φ y(t)`.
pub fn check_synchronic(
    x: &ArtifactHistory,
    y: &ArtifactHistory,
    t: Timestamp,
    kind: &KindPath,
) -> Result<IdentityVerdict, EvalError> {
    check_general_identity(x, t, y, t, kind)
}

/// `x(t1) =φ x(t2)`, comparing only the two endpoints.
pub fn check_diachronic_pointwise(
    x: &ArtifactHistory,
    t1: Timestamp,
    t2: Timestamp,
    kind: &KindPath,
) -> Result<IdentityVerdict, EvalError> {
    check_general_identity(x, t1, x, t2, kind)
}

/// Pointwise diachronic identity plus constancy of profile and τ at every
/// instant of `[t1, t2]`.
pub fn check_persistence_path(
    x: &ArtifactHistory,
    t1: Timestamp,
    t2: Timestamp,
    kind: &KindPath,
) -> Result<IdentityVerdict, EvalError> {
    if t1 > t2 {
        return Err(EvalError::InvalidInterval { from: t1, to: t2 });
    }
    let endpoints = check_diachronic_pointwise(x, t1, t2, kind)?;
    if !endpoints.is_identical() {
        return Ok(endpoints);
    }
    let profile = profile_at(x, t1)?;
    if let Some((at, _)) = x
        .profile_changes()
        .find(|(at, p)| *at > t1 && *at <= t2 && !profiles_equal(p, profile))
    {
        return Ok(IdentityVerdict::failed_along_path(
            FailedCondition::ProfileMismatch,
            format!("profile of {} changes at {at}", x.system_id()),
        ));
    }
    let level = tau_at(x, t1)?;
    for at in x.event_times_between(t1, t2) {
        let here = match tau_at(x, at) {
            Ok(l) => l,
            Err(e @ EvalError::NoData { .. }) => {
                return Ok(IdentityVerdict::failed_along_path(
                    FailedCondition::NoData,
                    e.to_string(),
                ))
            }
            Err(e) => return Err(e),
        };
        if here != level {
            return Ok(IdentityVerdict::failed_along_path(
                FailedCondition::LevelMismatch,
                format!(
                    "tau of {} is {here} at {at}, {level} at the endpoints",
                    x.system_id()
                ),
            ));
        }
    }
    Ok(IdentityVerdict::identical(format!(
        "{} persists through [{t1}, {t2}] at level {level}",
        x.system_id()
    )))
}

/// A maximal stretch of constant profile and τ level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PersistenceSegment {
    pub from: Timestamp,
    /// Exclusive end; the last segment ends at the query's `to`.
    pub to: Timestamp,
    pub profile: TrustProfile,
    pub level: Decimal,
    pub incarnation_index: usize,
}

/// Splits `[from, to)` into maximal path-persistence segments.
pub fn persistence_segments(
    x: &ArtifactHistory,
    from: Timestamp,
    to: Timestamp,
    kind: &KindPath,
) -> Result<Vec<PersistenceSegment>, EvalError> {
    x.ensure_deployed(from)?;
    if from >= to {
        return Err(EvalError::InvalidInterval { from, to });
    }
    if !kind_membership(x.techno_function(), kind) {
        return Err(EvalError::NotOfKind {
            system: x.system_id().clone(),
            kind: kind.clone(),
        });
    }
    let mut breakpoints = vec![from];
    breakpoints.extend(
        x.event_times_between(from, to)
            .into_iter()
            .filter(|&b| b > from && b < to),
    );

    let mut segments: Vec<PersistenceSegment> = Vec::new();
    for (i, &at) in breakpoints.iter().enumerate() {
        let profile = profile_at(x, at)?;
        let level = tau_at(x, at)?;
        let next = breakpoints.get(i + 1).copied().unwrap_or(to);
        match segments.last_mut() {
            Some(last) if last.level == level && profiles_equal(&last.profile, profile) => {
                last.to = next
            }
            _ => {
                let incarnation_index = segments.len();
                segments.push(PersistenceSegment {
                    from: at,
                    to: next,
                    profile: profile.clone(),
                    level,
                    incarnation_index,
                });
            }
        }
    }
    Ok(segments)
}

/// Why a system was left out of a fleet partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exclusion {
    KindMismatch,
    BeforeDeployment,
    NoData,
}

impl Exclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            Exclusion::KindMismatch => "KindMismatch",
            Exclusion::BeforeDeployment => "BeforeDeployment",
            Exclusion::NoData => "NoData",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FleetPartition {
    /// Each class sorted by id; classes sorted by their smallest member.
    pub classes: Vec<Vec<Ident>>,
    /// Sorted by id.
    pub excluded: Vec<(Ident, Exclusion)>,
}

type ClassKey = (Timestamp, String, Decimal);

fn class_key(h: &ArtifactHistory, t: Timestamp, kind: &KindPath) -> Result<ClassKey, Exclusion> {
    if !kind_membership(h.techno_function(), kind) {
        return Err(Exclusion::KindMismatch);
    }
    let profile = profile_at(h, t).map_err(|_| Exclusion::BeforeDeployment)?;
    let level = tau_at(h, t).map_err(|e| match e {
        EvalError::BeforeDeployment { .. } => Exclusion::BeforeDeployment,
        _ => Exclusion::NoData,
    })?;
    Ok((h.deployed_at(), profile.canonical_key(), level))
}

/// Groups systems into synchronic identity classes at `t`.
///
/// Identity is an equivalence relation whose verdict depends only on
/// `(t0, canonical profile, τ(t))` once kind membership holds, so grouping by
/// that key yields exactly the classes of the pairwise relation.
pub fn partition_fleet(
    systems: &[ArtifactHistory],
    t: Timestamp,
    kind: &KindPath,
) -> FleetPartition {
    partition_fleet_with(systems, t, kind, Execution::default())
}

pub fn partition_fleet_with(
    systems: &[ArtifactHistory],
    t: Timestamp,
    kind: &KindPath,
    exec: Execution,
) -> FleetPartition {
    let keys = exec.map(systems, |h| class_key(h, t, kind));
    let mut groups: BTreeMap<ClassKey, Vec<Ident>> = BTreeMap::new();
    let mut excluded = Vec::new();
    for (h, key) in systems.iter().zip(keys) {
        match key {
            Ok(key) => groups.entry(key).or_default().push(h.system_id().clone()),
            Err(reason) => excluded.push((h.system_id().clone(), reason)),
        }
    }
    let mut classes: Vec<Vec<Ident>> = groups
        .into_values()
        .map(|mut members| {
            members.sort();
            members
        })
        .collect();
    classes.sort();
    excluded.sort();
    FleetPartition { classes, excluded }
}

/// `|τx(t) − τy(t)| ≤ ε`. Not transitive for `ε > 0`; kept as a diagnostic
/// for why identity compares levels exactly.
pub fn tolerance_relation(
    x: &ArtifactHistory,
    y: &ArtifactHistory,
    t: Timestamp,
    epsilon: Decimal,
) -> Result<bool, EvalError> {
    let lx = tau_at(x, t)?;
    let ly = tau_at(y, t)?;
    Ok((lx - ly).abs() <= epsilon)
}
