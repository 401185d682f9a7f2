//! Synthetic capability trajectories with drift and retraining restores.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decimal::Decimal;
use crate::model::{CapabilityMeasurement, Ident, Timestamp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DriftModel {
    Constant {
        level: Decimal,
    },
    /// Loses `rate` per tick from `start`.
    LinearDecay {
        start: Decimal,
        rate: Decimal,
    },
    /// Drops by `amount` at each listed tick.
    StepDecay {
        start: Decimal,
        drops: Vec<(Timestamp, Decimal)>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrajectorySpec {
    pub capability: Ident,
    pub model: DriftModel,
    /// Sampling period in ticks.
    pub sample_every: u64,
    /// Half-width of uniform jitter added to samples (not to restores).
    pub noise: Decimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid model parameters: {0}")]
    InvalidModel(String),
}

const NOISE_QUANTUM: i128 = 1_000; // 1e-6

/// Measurements of one capability over `span = [start, end)`.
///
/// Samples fall on `start + k * sample_every`, on every retraining tick and
/// on every step-drop tick. Between retrainings values follow `spec.model`;
/// at a retraining tick the value jumps to its restore target and the model
/// restarts from there. Values never go below zero. The output depends only
/// on the arguments and `seed`.
pub fn generate_trajectory(
    spec: &TrajectorySpec,
    retrainings: &[(Timestamp, Decimal)],
    span: (Timestamp, Timestamp),
    seed: u64,
) -> Result<Vec<CapabilityMeasurement>, GenerateError> {
    let (start, end) = span;
    let invalid = |msg: &str| Err(GenerateError::InvalidModel(msg.to_owned()));
    if start >= end {
        return invalid("empty span");
    }
    if spec.sample_every == 0 {
        return invalid("sampling period must be positive");
    }
    if spec.noise.is_negative() {
        return invalid("noise must be non-negative");
    }
    match &spec.model {
        DriftModel::Constant { level } if level.is_negative() => return invalid("negative level"),
        DriftModel::LinearDecay { rate, .. } if rate.is_negative() => {
            return invalid("negative decay rate")
        }
        DriftModel::StepDecay { drops, .. } if drops.iter().any(|(_, a)| a.is_negative()) => {
            return invalid("negative drop")
        }
        _ => {}
    }
    if retrainings.iter().any(|(_, v)| v.is_negative()) {
        return invalid("negative restore target");
    }

    let mut ticks: Vec<Timestamp> = (start.ticks()..end.ticks())
        .step_by(spec.sample_every as usize)
        .map(Timestamp::new)
        .collect();
    ticks.extend(
        retrainings
            .iter()
            .map(|(t, _)| *t)
            .filter(|t| *t >= start && *t < end),
    );
    if let DriftModel::StepDecay { drops, .. } = &spec.model {
        ticks.extend(
            drops
                .iter()
                .map(|(t, _)| *t)
                .filter(|t| *t >= start && *t < end),
        );
    }
    ticks.sort();
    ticks.dedup();

    let mut restores: Vec<(Timestamp, Decimal)> = retrainings.to_vec();
    restores.sort_by_key(|(t, _)| *t);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let quanta = spec.noise.nanos() / NOISE_QUANTUM;
    let mut out = Vec::with_capacity(ticks.len());
    for t in ticks {
        let anchor = restores
            .iter()
            .rev()
            .find(|(rt, _)| *rt <= t && *rt >= start);
        let (origin, base) = match (anchor, &spec.model) {
            (Some(&(rt, v)), _) => (rt, v),
            (None, DriftModel::Constant { level }) => (start, *level),
            (
                None,
                DriftModel::LinearDecay { start: v, .. } | DriftModel::StepDecay { start: v, .. },
            ) => (start, *v),
        };
        let elapsed = (t.ticks() - origin.ticks()) as usize;
        let drift = match &spec.model {
            DriftModel::Constant { .. } => Decimal::ZERO,
            DriftModel::LinearDecay { rate, .. } => rate.checked_mul_count(elapsed).unwrap_or(base),
            DriftModel::StepDecay { drops, .. } => drops
                .iter()
                .filter(|(dt, _)| *dt > origin && *dt <= t)
                .fold(Decimal::ZERO, |acc, (_, a)| acc + *a),
        };
        let mut value = base - drift;
        let is_restore = anchor.is_some_and(|(rt, _)| *rt == t);
        if quanta > 0 && !is_restore {
            value = value + Decimal::from_nanos(rng.random_range(-quanta..=quanta) * NOISE_QUANTUM);
        }
        out.push(CapabilityMeasurement {
            capability: spec.capability.clone(),
            value: value.max(Decimal::ZERO),
            at: t,
            group: None,
        });
    }
    Ok(out)
}
