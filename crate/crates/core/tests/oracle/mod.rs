//! Brute-force reference semantics, evaluated tick by tick from raw ledger
//! records. Shares no evaluation code with the library.
#![allow(dead_code)]

use std::collections::BTreeSet;

use idem_core::ledger::{LedgerFile, RecordBody};

#[derive(Clone, Debug)]
pub struct Rule {
    pub conditions: Vec<(String, i128, Option<i128>)>,
    pub level: i128,
}

#[derive(Clone, Debug)]
pub enum Ev {
    Measure { cap: String, value: i128 },
    Profile(BTreeSet<String>),
    Other,
}

#[derive(Clone, Debug)]
pub struct Sys {
    pub id: String,
    pub t0: u64,
    pub kind: Vec<String>,
    pub profile: BTreeSet<String>,
    pub rules: Vec<Rule>,
    pub default: i128,
    pub events: Vec<(u64, Ev)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Miss {
    Before,
    NoData,
}

pub fn systems(file: &LedgerFile) -> Vec<Sys> {
    let mut out: Vec<Sys> = Vec::new();
    for r in file.records() {
        let id = r.system.as_str().to_owned();
        if let RecordBody::Deployment(d) = &r.body {
            let tf = &d.techno_function;
            let mut kind = vec![
                tf.verb().as_str().to_owned(),
                tf.object().as_str().to_owned(),
            ];
            kind.extend(tf.resources().iter().map(|r| r.as_str().to_owned()));
            out.push(Sys {
                id,
                t0: r.at.ticks(),
                kind,
                profile: d.profile.renderings().map(str::to_owned).collect(),
                rules: d
                    .ladder
                    .rules()
                    .iter()
                    .map(|rule| Rule {
                        conditions: rule
                            .conditions
                            .iter()
                            .map(|c| {
                                (
                                    c.capability.as_str().to_owned(),
                                    c.lower.nanos(),
                                    c.upper.map(|u| u.nanos()),
                                )
                            })
                            .collect(),
                        level: rule.level.nanos(),
                    })
                    .collect(),
                default: d.ladder.default_level().nanos(),
                events: Vec::new(),
            });
            continue;
        }
        let sys = out
            .iter_mut()
            .find(|s| s.id == id)
            .expect("deployment first");
        let ev = match &r.body {
            RecordBody::Measurement {
                capability, value, ..
            } => Ev::Measure {
                cap: capability.as_str().to_owned(),
                value: value.nanos(),
            },
            RecordBody::ProfileChange(p) => {
                Ev::Profile(p.renderings().map(str::to_owned).collect())
            }
            _ => Ev::Other,
        };
        sys.events.push((r.at.ticks(), ev));
    }
    out
}

impl Sys {
    pub fn value(&self, cap: &str, t: u64) -> Option<i128> {
        let mut v = None;
        for (at, ev) in &self.events {
            if let Ev::Measure { cap: c, value } = ev {
                if *at <= t && c == cap {
                    v = Some(*value);
                }
            }
        }
        v
    }

    pub fn profile_at(&self, t: u64) -> Result<BTreeSet<String>, Miss> {
        if t < self.t0 {
            return Err(Miss::Before);
        }
        let mut p = self.profile.clone();
        for (at, ev) in &self.events {
            if let Ev::Profile(q) = ev {
                if *at <= t {
                    p = q.clone();
                }
            }
        }
        Ok(p)
    }

    pub fn tau(&self, t: u64) -> Result<i128, Miss> {
        if t < self.t0 {
            return Err(Miss::Before);
        }
        let mut caps: Vec<&str> = self
            .rules
            .iter()
            .flat_map(|r| r.conditions.iter().map(|c| c.0.as_str()))
            .collect();
        caps.sort();
        caps.dedup();
        for cap in &caps {
            self.value(cap, t).ok_or(Miss::NoData)?;
        }
        for rule in &self.rules {
            let fires = rule.conditions.iter().all(|(cap, lo, hi)| {
                let v = self.value(cap, t).unwrap();
                *lo <= v && hi.is_none_or(|h| v < h)
            });
            if fires {
                return Ok(rule.level);
            }
        }
        Ok(self.default)
    }

    pub fn of_kind(&self, kind: &[&str]) -> bool {
        kind.len() <= self.kind.len() && kind.iter().zip(&self.kind).all(|(a, b)| a == b)
    }
}

pub fn find<'a>(fleet: &'a [Sys], id: &str) -> &'a Sys {
    fleet.iter().find(|s| s.id == id).expect("known system")
}

pub fn level_text(nanos: i128) -> String {
    idem_core::Decimal::from_nanos(nanos).to_string()
}

/// Verdict text of the general criterion, or the reason it is undefined.
pub fn verdict(x: &Sys, t1: u64, y: &Sys, t2: u64, kind: &[&str]) -> Result<String, Miss> {
    if t1 < x.t0 || t2 < y.t0 {
        return Err(Miss::Before);
    }
    let fail = |c: &str| Ok(format!("not-identical: {c}"));
    if x.t0 != y.t0 {
        return fail("DeploymentMismatch");
    }
    if !x.of_kind(kind) || !y.of_kind(kind) {
        return fail("KindMismatch");
    }
    if x.profile_at(t1)? != y.profile_at(t2)? {
        return fail("ProfileMismatch");
    }
    match (x.tau(t1), y.tau(t2)) {
        (Ok(a), Ok(b)) if a == b => Ok("identical".to_owned()),
        (Ok(_), Ok(_)) => fail("LevelMismatch"),
        _ => fail("NoData"),
    }
}

pub fn path(x: &Sys, t1: u64, t2: u64, kind: &[&str]) -> Result<String, Miss> {
    let ends = verdict(x, t1, x, t2, kind)?;
    if ends != "identical" {
        return Ok(ends);
    }
    let p = x.profile_at(t1)?;
    if (t1..=t2).any(|t| x.profile_at(t).unwrap() != p) {
        return Ok("not-identical: ProfileMismatch(path)".to_owned());
    }
    let l = x.tau(t1)?;
    for t in t1..=t2 {
        match x.tau(t) {
            Err(_) => return Ok("not-identical: NoData(path)".to_owned()),
            Ok(v) if v != l => return Ok("not-identical: LevelMismatch(path)".to_owned()),
            Ok(_) => {}
        }
    }
    Ok("identical".to_owned())
}

/// Maximal runs of constant (profile, τ) over `[from, to)`.
pub fn segments(x: &Sys, from: u64, to: u64) -> Result<Vec<(u64, u64, i128)>, Miss> {
    let mut out: Vec<(u64, u64, i128, BTreeSet<String>)> = Vec::new();
    for t in from..to {
        let (p, l) = (x.profile_at(t)?, x.tau(t)?);
        match out.last_mut() {
            Some(last) if last.2 == l && last.3 == p => last.1 = t + 1,
            _ => out.push((t, t + 1, l, p)),
        }
    }
    Ok(out.into_iter().map(|(a, b, l, _)| (a, b, l)).collect())
}

/// Classes of the pairwise synchronic relation closed under union-find, plus
/// the systems for which it is undefined or the kind does not apply.
pub fn partition(fleet: &[Sys], t: u64, kind: &[&str]) -> (Vec<Vec<String>>, Vec<String>) {
    let eligible: Vec<&Sys> = fleet
        .iter()
        .filter(|s| s.of_kind(kind) && s.tau(t).is_ok())
        .collect();
    let mut excluded: Vec<String> = fleet
        .iter()
        .filter(|s| !(s.of_kind(kind) && s.tau(t).is_ok()))
        .map(|s| s.id.clone())
        .collect();
    let mut parent: Vec<usize> = (0..eligible.len()).collect();
    fn root(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..eligible.len() {
        for j in i + 1..eligible.len() {
            if verdict(eligible[i], t, eligible[j], t, kind).as_deref() == Ok("identical") {
                let (a, b) = (root(&mut parent, i), root(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut classes: Vec<Vec<String>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for (i, s) in eligible.iter().enumerate() {
        let r = root(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => classes[k].push(s.id.clone()),
            None => {
                roots.push(r);
                classes.push(vec![s.id.clone()]);
            }
        }
    }
    for c in &mut classes {
        c.sort();
    }
    classes.sort();
    excluded.sort();
    (classes, excluded)
}
