use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use idem_core::scenario::{generate_trajectory, DriftModel, TrajectorySpec};
use idem_core::{
    parse_contract, partition_fleet_with, tau_trajectory, ArtifactHistory, Decimal, Execution,
    Ident, KindPath, LifecycleEvent, TechnoFunction, Timestamp, TrustLadder, TrustProfile, Verb,
};

fn fleet(n: usize) -> Vec<ArtifactHistory> {
    let tf = TechnoFunction::new(
        Verb::Predict,
        Ident::new("numeric_score").unwrap(),
        vec![Ident::new("tabular").unwrap()],
    );
    let profile = TrustProfile::new([parse_contract("accuracy >= 0.9").unwrap()]).unwrap();
    (0..n)
        .map(|i| {
            let spec = TrajectorySpec {
                capability: Ident::new("accuracy").unwrap(),
                model: DriftModel::LinearDecay {
                    start: "0.97".parse().unwrap(),
                    rate: Decimal::new(i as i64 % 7 + 1, 4).unwrap(),
                },
                sample_every: 10,
                noise: "0.01".parse().unwrap(),
            };
            let restores = [
                (Timestamp::new(1000), "0.96".parse().unwrap()),
                (Timestamp::new(2500), "0.95".parse().unwrap()),
            ];
            let ms = generate_trajectory(
                &spec,
                &restores,
                (Timestamp::new(0), Timestamp::new(4000)),
                i as u64,
            )
            .unwrap();
            let mut events = vec![LifecycleEvent::deployment(Timestamp::new(0))];
            events.extend(
                restores
                    .iter()
                    .map(|(t, _)| LifecycleEvent::retraining(*t, "scheduled")),
            );
            events.extend(ms.into_iter().map(LifecycleEvent::measurement));
            ArtifactHistory::new(
                Ident::new(format!("s{i}")).unwrap(),
                tf.clone(),
                profile.clone(),
                TrustLadder::accuracy_example(),
                events,
            )
            .unwrap()
        })
        .collect()
}

fn bench(c: &mut Criterion) {
    let kind: KindPath = "predict.numeric_score".parse().unwrap();
    let systems = fleet(400);
    let mut group = c.benchmark_group("partition");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &exec| {
                b.iter(|| {
                    partition_fleet_with(black_box(&systems), Timestamp::new(2000), &kind, exec)
                })
            },
        );
    }
    group.finish();

    let mut group = c.benchmark_group("tau_trajectory");
    for exec in [Execution::Sequential, Execution::Parallel] {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{exec:?}")),
            &exec,
            |b, &exec| {
                b.iter(|| {
                    exec.map(black_box(&systems), |h| {
                        tau_trajectory(h, Timestamp::new(0), Timestamp::new(4000))
                            .map(|t| t.pieces.len())
                    })
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
