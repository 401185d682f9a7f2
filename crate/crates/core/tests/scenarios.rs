mod oracle;

use idem_core::builtin_scenarios;
use idem_core::scenario::{render_partition, render_segments, Query};
use idem_core::{Decimal, Ident, Timestamp};

fn kind_of(k: &idem_core::KindPath) -> Vec<String> {
    k.to_string().split('.').map(str::to_owned).collect()
}

fn oracle_answer(fleet: &[oracle::Sys], q: &Query) -> String {
    let v = |r: Result<String, oracle::Miss>| r.expect("defined in every builtin query");
    match q {
        Query::General {
            x, t1, y, t2, kind, ..
        } => {
            let k = kind_of(kind);
            let k: Vec<&str> = k.iter().map(String::as_str).collect();
            v(oracle::verdict(
                oracle::find(fleet, x.as_str()),
                t1.ticks(),
                oracle::find(fleet, y.as_str()),
                t2.ticks(),
                &k,
            ))
        }
        Query::Synchronic { x, y, at, kind, .. } => {
            let k = kind_of(kind);
            let k: Vec<&str> = k.iter().map(String::as_str).collect();
            v(oracle::verdict(
                oracle::find(fleet, x.as_str()),
                at.ticks(),
                oracle::find(fleet, y.as_str()),
                at.ticks(),
                &k,
            ))
        }
        Query::Diachronic {
            x, t1, t2, kind, ..
        } => {
            let k = kind_of(kind);
            let k: Vec<&str> = k.iter().map(String::as_str).collect();
            let s = oracle::find(fleet, x.as_str());
            v(oracle::verdict(s, t1.ticks(), s, t2.ticks(), &k))
        }
        Query::Path {
            x, t1, t2, kind, ..
        } => {
            let k = kind_of(kind);
            let k: Vec<&str> = k.iter().map(String::as_str).collect();
            v(oracle::path(
                oracle::find(fleet, x.as_str()),
                t1.ticks(),
                t2.ticks(),
                &k,
            ))
        }
        Query::Segments { x, from, to, .. } => {
            let segs = oracle::segments(oracle::find(fleet, x.as_str()), from.ticks(), to.ticks())
                .unwrap();
            render_segments(
                segs.into_iter().map(|(a, b, l)| {
                    (Timestamp::new(a), Timestamp::new(b), Decimal::from_nanos(l))
                }),
            )
        }
        Query::Partition { at, kind, .. } => {
            let k = kind_of(kind);
            let k: Vec<&str> = k.iter().map(String::as_str).collect();
            let (classes, excluded) = oracle::partition(fleet, at.ticks(), &k);
            let id = |s: &String| Ident::new(s.as_str()).unwrap();
            let classes: Vec<Vec<Ident>> =
                classes.iter().map(|c| c.iter().map(id).collect()).collect();
            let excluded: Vec<Ident> = excluded.iter().map(id).collect();
            render_partition(&classes, excluded.iter())
        }
    }
}

fn frozen(q: &Query) -> String {
    match q {
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

#[test]
fn frozen_expectations_agree_with_oracle() {
    for s in builtin_scenarios() {
        let fleet = oracle::systems(&s.ledger);
        for q in &s.queries {
            assert_eq!(oracle_answer(&fleet, q), frozen(q), "{}: {q}", s.name);
        }
    }
}

#[test]
fn toy_decline_separates_every_straddling_pair() {
    let s = builtin_scenarios()
        .into_iter()
        .find(|s| s.name.as_str() == "toy_bob")
        .unwrap();
    let fleet = oracle::systems(&s.ledger);
    let x = oracle::find(&fleet, "bob_x");
    let k = ["predict", "numeric_score"];
    for t1 in (0..=100).step_by(5) {
        for t2 in (101..=300).step_by(7) {
            let v = oracle::verdict(x, t1, x, t2, &k).unwrap();
            assert_ne!(v, "identical", "{t1} vs {t2}");
        }
    }
}

#[test]
fn figure_squares() {
    let s = builtin_scenarios()
        .into_iter()
        .find(|s| s.name.as_str() == "figure_1")
        .unwrap();
    let fleet = oracle::systems(&s.ledger);
    let (x, y) = (oracle::find(&fleet, "fig_x"), oracle::find(&fleet, "fig_y"));
    let k = ["predict", "demand"];
    // identity holds exactly on [0, 60) ∪ [80, 100) ∪ [200, ∞)
    for t in 0..500 {
        let expected = t < 60 || (80..100).contains(&t) || t >= 200;
        assert_eq!(
            oracle::verdict(x, t, y, t, &k).unwrap() == "identical",
            expected,
            "t = {t}"
        );
    }
}
