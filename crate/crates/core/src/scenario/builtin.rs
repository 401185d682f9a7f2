//! The worked example scenarios.

use super::{PartitionExpect, Query, Scenario, SegmentExpect};
use crate::decimal::Decimal;
use crate::dsl::{parse_contract, parse_ladder};
use crate::ledger::{LedgerFile, Record, RecordBody, SystemDescriptor};
use crate::model::{Ident, KindPath, TechnoFunction, Timestamp, TrustProfile, Verb};

const ACCURACY_LADDER: &str =
    "level 1 when accuracy in [0.9, inf)\nlevel 0.5 when accuracy in [0.7, 0.9)\ndefault 0";

fn id(s: &str) -> Ident {
    Ident::new(s).expect("static ident")
}

fn dec(s: &str) -> Decimal {
    s.parse().expect("static decimal")
}

fn kind(s: &str) -> KindPath {
    s.parse().expect("static kind")
}

fn profile(contracts: &[&str]) -> TrustProfile {
    TrustProfile::new(
        contracts
            .iter()
            .map(|c| parse_contract(c).expect("static contract")),
    )
    .expect("static profile")
}

fn tf(verb: Verb, object: &str, resources: &[&str]) -> TechnoFunction {
    TechnoFunction::new(verb, id(object), resources.iter().map(|r| id(r)).collect())
}

#[derive(Default)]
struct Builder {
    file: LedgerFile,
}

impl Builder {
    fn push(&mut self, system: &str, at: u64, body: RecordBody) -> &mut Self {
        self.file
            .push(Record {
                system: id(system),
                at: Timestamp::new(at),
                body,
            })
            .expect("builtin ledger is well formed");
        self
    }

    fn deploy(
        &mut self,
        system: &str,
        at: u64,
        techno_function: TechnoFunction,
        contracts: &[&str],
        ladder: &str,
    ) -> &mut Self {
        let descriptor = SystemDescriptor {
            techno_function,
            profile: profile(contracts),
            ladder: parse_ladder(ladder).expect("static ladder"),
        };
        self.push(system, at, RecordBody::Deployment(descriptor))
    }

    fn measure(&mut self, system: &str, at: u64, values: &[(&str, &str)]) -> &mut Self {
        for (cap, v) in values {
            self.push(
                system,
                at,
                RecordBody::Measurement {
                    capability: id(cap),
                    value: dec(v),
                    group: None,
                },
            );
        }
        self
    }

    fn measure_group(
        &mut self,
        system: &str,
        at: u64,
        cap: &str,
        group: &str,
        v: &str,
    ) -> &mut Self {
        self.push(
            system,
            at,
            RecordBody::Measurement {
                capability: id(cap),
                value: dec(v),
                group: Some(id(group)),
            },
        )
    }

    fn retrain(&mut self, system: &str, at: u64, note: &str) -> &mut Self {
        self.push(
            system,
            at,
            RecordBody::Retraining {
                note: note.to_owned(),
            },
        )
    }

    fn change_profile(&mut self, system: &str, at: u64, contracts: &[&str]) -> &mut Self {
        self.push(system, at, RecordBody::ProfileChange(profile(contracts)))
    }

    fn build(&mut self) -> LedgerFile {
        std::mem::take(&mut self.file)
    }
}

fn synchronic(x: &str, y: &str, at: u64, k: &str, expect: &str) -> Query {
    Query::Synchronic {
        x: id(x),
        y: id(y),
        at: Timestamp::new(at),
        kind: kind(k),
        expect: expect.to_owned(),
    }
}

fn diachronic(x: &str, t1: u64, t2: u64, k: &str, expect: &str) -> Query {
    Query::Diachronic {
        x: id(x),
        t1: Timestamp::new(t1),
        t2: Timestamp::new(t2),
        kind: kind(k),
        expect: expect.to_owned(),
    }
}

fn path(x: &str, t1: u64, t2: u64, k: &str, expect: &str) -> Query {
    Query::Path {
        x: id(x),
        t1: Timestamp::new(t1),
        t2: Timestamp::new(t2),
        kind: kind(k),
        expect: expect.to_owned(),
    }
}

fn segments(x: &str, from: u64, to: u64, k: &str, expect: &[(u64, u64, &str)]) -> Query {
    Query::Segments {
        x: id(x),
        from: Timestamp::new(from),
        to: Timestamp::new(to),
        kind: kind(k),
        expect: expect
            .iter()
            .map(|(f, t, l)| SegmentExpect {
                from: Timestamp::new(*f),
                to: Timestamp::new(*t),
                level: dec(l),
            })
            .collect(),
    }
}

fn partition(at: u64, k: &str, classes: &[&[&str]], excluded: &[&str]) -> Query {
    Query::Partition {
        at: Timestamp::new(at),
        kind: kind(k),
        expect: PartitionExpect {
            classes: classes
                .iter()
                .map(|c| c.iter().map(|s| id(s)).collect())
                .collect(),
            excluded: excluded.iter().map(|s| id(s)).collect(),
        },
    }
}

const IDENTICAL: &str = "identical";
const LEVEL: &str = "not-identical: LevelMismatch";
const LEVEL_PATH: &str = "not-identical: LevelMismatch(path)";
const PROFILE: &str = "not-identical: ProfileMismatch";

fn toy_ledger(b: &mut Builder) {
    let f = || tf(Verb::Predict, "numeric_score", &["tabular"]);
    b.deploy("bob_x", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .deploy("bob_y", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .measure("bob_x", 0, &[("accuracy", "0.95")])
        .measure("bob_y", 0, &[("accuracy", "0.95")])
        .measure("bob_x", 101, &[("accuracy", "0.88")])
        .measure("bob_x", 150, &[("accuracy", "0.8")])
        .measure("bob_x", 200, &[("accuracy", "0.72")])
        .measure("bob_y", 200, &[("accuracy", "0.95")])
        .measure("bob_x", 250, &[("accuracy", "0.66")]);
}

fn toy_bob() -> Scenario {
    let mut b = Builder::default();
    toy_ledger(&mut b);
    let k = "predict.numeric_score";
    let queries = vec![
        synchronic("bob_x", "bob_y", 50, k, IDENTICAL),
        synchronic("bob_x", "bob_y", 200, k, LEVEL),
        diachronic("bob_x", 50, 101, k, LEVEL),
        diachronic("bob_x", 50, 200, k, LEVEL),
        diachronic("bob_x", 100, 300, k, LEVEL),
        diachronic("bob_x", 10, 90, k, IDENTICAL),
        diachronic("bob_x", 150, 200, k, IDENTICAL),
        path("bob_y", 0, 300, k, IDENTICAL),
    ];
    Scenario::new(id("toy_bob"), b.build(), queries, "accuracy starts falling right after tick 100, so bob_x before and after that tick are different systems")
        .expect("valid builtin")
}

fn warehouse_ledger(b: &mut Builder) {
    let f = || tf(Verb::Recognize, "parcel_label", &["camera"]);
    let contracts = [
        "accuracy >= 0.9",
        "safety >= 0.95",
        "uptime >= 0.999 over 30d max-episode 10m",
    ];
    let ladder = "level 1 when accuracy in [0.9, inf), safety in [0.95, inf)\nlevel 0.5 when accuracy in [0.7, inf), safety in [0.9, inf)\ndefault 0";
    b.deploy("m1", 0, f(), &contracts, ladder)
        .deploy("m2", 0, f(), &contracts, ladder)
        .measure(
            "m1",
            0,
            &[
                ("accuracy", "0.97"),
                ("safety", "0.99"),
                ("uptime", "0.9995"),
            ],
        )
        .measure(
            "m2",
            0,
            &[
                ("accuracy", "0.93"),
                ("safety", "0.96"),
                ("uptime", "0.9992"),
            ],
        )
        .measure("m1", 500, &[("accuracy", "0.97"), ("safety", "0.99")])
        .measure("m2", 500, &[("accuracy", "0.92"), ("safety", "0.97")]);
}

fn warehouse() -> Scenario {
    let mut b = Builder::default();
    warehouse_ledger(&mut b);
    let k = "recognize.parcel_label";
    let queries = vec![
        synchronic("m1", "m2", 0, k, IDENTICAL),
        synchronic("m1", "m2", 250, k, IDENTICAL),
        synchronic("m1", "m2", 600, k, IDENTICAL),
        path("m2", 0, 600, k, IDENTICAL),
        partition(250, k, &[&["m1", "m2"]], &[]),
    ];
    Scenario::new(
        id("warehouse"),
        b.build(),
        queries,
        "two sorters with different raw accuracy land on the same trust level",
    )
    .expect("valid builtin")
}

fn hospitals_ledger(b: &mut Builder) {
    let f = || tf(Verb::Recognize, "bone_fracture", &["xray"]);
    let contracts = ["accuracy >= 0.9", "robustness >= 0.85"];
    let ladder = "level 1 when accuracy in [0.9, inf), robustness in [0.85, inf)\nlevel 0.5 when accuracy in [0.7, inf)\ndefault 0";
    b.deploy("hosp_x", 0, f(), &contracts, ladder)
        .deploy("hosp_y", 0, f(), &contracts, ladder)
        .measure("hosp_x", 0, &[("accuracy", "0.94"), ("robustness", "0.9")])
        .measure("hosp_y", 0, &[("accuracy", "0.94"), ("robustness", "0.9")])
        .retrain("hosp_x", 100, "curated local data")
        .measure(
            "hosp_x",
            100,
            &[("accuracy", "0.95"), ("robustness", "0.9")],
        )
        .measure("hosp_y", 150, &[("accuracy", "0.88")])
        .retrain("hosp_x", 200, "curated local data")
        .measure(
            "hosp_x",
            200,
            &[("accuracy", "0.96"), ("robustness", "0.91")],
        )
        .retrain("hosp_y", 250, "small local dataset")
        .measure(
            "hosp_y",
            250,
            &[("accuracy", "0.86"), ("robustness", "0.8")],
        )
        .retrain("hosp_x", 300, "curated local data")
        .measure(
            "hosp_x",
            300,
            &[("accuracy", "0.96"), ("robustness", "0.92")],
        )
        .measure("hosp_y", 350, &[("accuracy", "0.72")])
        .measure("hosp_y", 400, &[("accuracy", "0.65")]);
}

fn hospitals() -> Scenario {
    let mut b = Builder::default();
    hospitals_ledger(&mut b);
    let k = "recognize.bone_fracture";
    let queries = vec![
        synchronic("hosp_x", "hosp_y", 50, k, IDENTICAL),
        synchronic("hosp_x", "hosp_y", 200, k, LEVEL),
        synchronic("hosp_x", "hosp_y", 400, k, LEVEL),
        path("hosp_x", 0, 400, k, IDENTICAL),
        path("hosp_y", 0, 400, k, LEVEL),
        diachronic("hosp_y", 50, 400, k, LEVEL),
        diachronic("hosp_y", 150, 350, k, IDENTICAL),
        path("hosp_y", 150, 350, k, IDENTICAL),
        partition(200, k, &[&["hosp_x"], &["hosp_y"]], &[]),
        segments(
            "hosp_y",
            0,
            500,
            k,
            &[(0, 150, "1"), (150, 400, "0.5"), (400, 500, "0")],
        ),
    ];
    Scenario::new(
        id("hospitals"),
        b.build(),
        queries,
        "same model shipped to two hospitals; retraining on poor data loses identity",
    )
    .expect("valid builtin")
}

fn llm_ledger(b: &mut Builder) {
    let f = || tf(Verb::Generate, "knowledge_pill", &["llm"]);
    let contracts = ["answer_relevancy >= 0.8", "contextual_relevancy >= 0.8"];
    let ladder =
        "level 1 when answer_relevancy in [0.8, inf), contextual_relevancy in [0.8, inf)\nlevel 0.5 when answer_relevancy in [0.6, inf)\ndefault 0";
    b.deploy("llm_home", 0, f(), &contracts, ladder)
        .deploy("llm_abroad", 0, f(), &contracts, ladder)
        .measure(
            "llm_home",
            0,
            &[
                ("answer_relevancy", "0.9"),
                ("contextual_relevancy", "0.88"),
            ],
        )
        .measure(
            "llm_abroad",
            0,
            &[
                ("answer_relevancy", "0.9"),
                ("contextual_relevancy", "0.88"),
            ],
        )
        .retrain("llm_abroad", 200, "fine-tuned on regional data")
        .change_profile(
            "llm_abroad",
            200,
            &[
                "answer_relevancy >= 0.8",
                "contextual_relevancy >= 0.8",
                "user_safety_bias <= 0.05 per-group",
            ],
        )
        .measure(
            "llm_abroad",
            200,
            &[
                ("answer_relevancy", "0.89"),
                ("contextual_relevancy", "0.86"),
            ],
        )
        .measure_group("llm_abroad", 200, "user_safety_bias", "minors", "0.02")
        .measure_group("llm_abroad", 200, "user_safety_bias", "adults", "0.01");
}

fn llm_two_countries() -> Scenario {
    let mut b = Builder::default();
    llm_ledger(&mut b);
    let k = "generate.knowledge_pill";
    let queries = vec![
        synchronic("llm_home", "llm_abroad", 100, k, IDENTICAL),
        synchronic("llm_home", "llm_abroad", 250, k, PROFILE),
        diachronic("llm_abroad", 100, 250, k, PROFILE),
        diachronic("llm_home", 100, 250, k, IDENTICAL),
        path("llm_abroad", 100, 250, k, PROFILE),
        partition(250, k, &[&["llm_abroad"], &["llm_home"]], &[]),
    ];
    Scenario::new(
        id("llm_two_countries"),
        b.build(),
        queries,
        "a new safety contract abroad changes the profile even though trust stays at 1",
    )
    .expect("valid builtin")
}

fn fitness_ledger(b: &mut Builder) {
    let f = tf(Verb::Generate, "workout_plan", &["fitness_data"]);
    let contracts = ["accuracy >= 0.85", "safety >= 0.95", "robustness >= 0.8"];
    let ladder = "level 1 when accuracy in [0.85, inf), safety in [0.95, inf)\nlevel 0.5 when accuracy in [0.7, inf)\ndefault 0";
    b.deploy("fitness_app", 0, f, &contracts, ladder)
        .measure(
            "fitness_app",
            0,
            &[
                ("accuracy", "0.9"),
                ("safety", "0.97"),
                ("robustness", "0.85"),
            ],
        )
        .measure("fitness_app", 200, &[("accuracy", "0.9")])
        .measure("fitness_app", 300, &[("accuracy", "0.82")])
        .measure("fitness_app", 400, &[("accuracy", "0.76")])
        .retrain("fitness_app", 500, "full overhaul")
        .measure(
            "fitness_app",
            500,
            &[
                ("accuracy", "0.91"),
                ("safety", "0.97"),
                ("robustness", "0.86"),
            ],
        )
        .measure("fitness_app", 600, &[("accuracy", "0.91")]);
}

fn fitness_app() -> Scenario {
    let mut b = Builder::default();
    fitness_ledger(&mut b);
    let k = "generate.workout_plan";
    let queries = vec![
        diachronic("fitness_app", 100, 600, k, IDENTICAL),
        path("fitness_app", 100, 600, k, LEVEL_PATH),
        path("fitness_app", 500, 700, k, IDENTICAL),
        segments(
            "fitness_app",
            0,
            700,
            k,
            &[(0, 300, "1"), (300, 500, "0.5"), (500, 700, "1")],
        ),
    ];
    Scenario::new(
        id("fitness_app"),
        b.build(),
        queries,
        "the same trust level before and after an overhaul, but not the same system throughout",
    )
    .expect("valid builtin")
}

fn figure_ledger(b: &mut Builder) {
    let f = || tf(Verb::Predict, "demand", &["time_series"]);
    b.deploy("fig_x", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .deploy("fig_y", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .measure("fig_x", 0, &[("accuracy", "0.95")])
        .measure("fig_y", 0, &[("accuracy", "0.92")])
        .measure("fig_x", 60, &[("accuracy", "0.85")])
        .measure("fig_y", 80, &[("accuracy", "0.75")])
        .retrain("fig_x", 100, "scheduled")
        .measure("fig_x", 100, &[("accuracy", "0.95")])
        .measure("fig_y", 150, &[("accuracy", "0.65")])
        .retrain("fig_y", 200, "scheduled")
        .measure("fig_y", 200, &[("accuracy", "0.94")])
        .measure("fig_x", 300, &[("accuracy", "0.93")])
        .measure("fig_y", 300, &[("accuracy", "0.93")]);
}

fn figure_1() -> Scenario {
    let mut b = Builder::default();
    figure_ledger(&mut b);
    let k = "predict.demand";
    let queries = vec![
        synchronic("fig_x", "fig_y", 30, k, IDENTICAL),
        synchronic("fig_x", "fig_y", 70, k, LEVEL),
        synchronic("fig_x", "fig_y", 90, k, IDENTICAL),
        synchronic("fig_x", "fig_y", 120, k, LEVEL),
        synchronic("fig_x", "fig_y", 170, k, LEVEL),
        synchronic("fig_x", "fig_y", 250, k, IDENTICAL),
        synchronic("fig_x", "fig_y", 400, k, IDENTICAL),
        path("fig_y", 200, 400, k, IDENTICAL),
        path("fig_x", 0, 400, k, LEVEL_PATH),
        segments(
            "fig_x",
            0,
            400,
            k,
            &[(0, 60, "1"), (60, 100, "0.5"), (100, 400, "1")],
        ),
        segments(
            "fig_y",
            0,
            400,
            k,
            &[
                (0, 80, "1"),
                (80, 150, "0.5"),
                (150, 200, "0"),
                (200, 400, "1"),
            ],
        ),
    ];
    Scenario::new(
        id("figure_1"),
        b.build(),
        queries,
        "two retrained systems whose identity comes and goes over time",
    )
    .expect("valid builtin")
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    vec![
        toy_bob(),
        warehouse(),
        hospitals(),
        llm_two_countries(),
        fitness_app(),
        figure_1(),
    ]
}

/// One ledger holding the five narrative examples (nine systems).
pub fn worked_examples_ledger() -> LedgerFile {
    let mut b = Builder::default();
    toy_ledger(&mut b);
    warehouse_ledger(&mut b);
    hospitals_ledger(&mut b);
    llm_ledger(&mut b);
    fitness_ledger(&mut b);
    b.build()
}

/// Three scorers at different accuracy plus one system of another kind.
pub fn three_system_fleet() -> LedgerFile {
    let f = || tf(Verb::Predict, "numeric_score", &["tabular"]);
    let mut b = Builder::default();
    b.deploy("x", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .deploy("y", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .deploy("z", 0, f(), &["accuracy >= 0.9"], ACCURACY_LADDER)
        .deploy(
            "w",
            0,
            tf(Verb::Recognize, "parcel_label", &["camera"]),
            &["accuracy >= 0.9"],
            ACCURACY_LADDER,
        )
        .measure("x", 0, &[("accuracy", "0.95")])
        .measure("y", 0, &[("accuracy", "0.92")])
        .measure("z", 0, &[("accuracy", "0.8")])
        .measure("w", 0, &[("accuracy", "0.95")]);
    b.build()
}
