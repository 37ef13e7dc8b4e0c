//! Script views over a concept's assertions.
//!
//! A script is not stored as such: it is read off the field assertions
//! whose first argument is the script concept (`roleNN-of`, `eventNN-of`,
//! `performed-in`, `duration-of`, ...). Events sharing an index form a group
//! of roughly simultaneous events; groups run in index order. A group may
//! instead hold `[goto eventNN-of]`, which restarts the sequence at group NN.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::assertion::{Assertion, Measure, Term};
use crate::diagnostics::Severity;
use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;

/// Default number of goto traversals when unrolling a timeline.
pub const DEFAULT_UNROLL: usize = 3;

/// A script field predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Role(u8),
    RoleScript(u8),
    Event(u8),
    EntryCondition,
    Result,
    Goal,
    Emotion,
    PerformedIn,
    Duration,
    Period,
    Cost,
}

/// `01`..`99`
fn two_digits(s: &str) -> Option<u8> {
    let b = s.as_bytes();
    if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) {
        return None;
    }
    let n = (b[0] - b'0') * 10 + (b[1] - b'0');
    (n > 0).then_some(n)
}

impl Field {
    pub fn parse(predicate: &str) -> Option<Field> {
        Some(match predicate {
            "entry-condition-of" => Field::EntryCondition,
            "result-of" => Field::Result,
            "goal-of" => Field::Goal,
            "emotion-of" => Field::Emotion,
            "performed-in" => Field::PerformedIn,
            "duration-of" => Field::Duration,
            "period-of" => Field::Period,
            "cost-of" => Field::Cost,
            p => {
                if let Some(rest) = p.strip_prefix("event") {
                    Field::Event(two_digits(rest.strip_suffix("-of")?)?)
                } else {
                    let rest = p.strip_prefix("role")?;
                    match rest.strip_suffix("-script-of") {
                        Some(nn) => Field::RoleScript(two_digits(nn)?),
                        None => Field::Role(two_digits(rest.strip_suffix("-of")?)?),
                    }
                }
            }
        })
    }

    pub fn predicate(&self) -> String {
        match self {
            Field::Role(n) => format!("role{n:02}-of"),
            Field::RoleScript(n) => format!("role{n:02}-script-of"),
            Field::Event(n) => format!("event{n:02}-of"),
            Field::EntryCondition => "entry-condition-of".into(),
            Field::Result => "result-of".into(),
            Field::Goal => "goal-of".into(),
            Field::Emotion => "emotion-of".into(),
            Field::PerformedIn => "performed-in".into(),
            Field::Duration => "duration-of".into(),
            Field::Period => "period-of".into(),
            Field::Cost => "cost-of".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FindingCode {
    RoleGap,
    BadGotoTarget,
    GotoWithEvents,
    ArgNotRole,
    NonPositiveMeasure,
    WrongUnit,
    NoEvents,
    DuplicateScalar,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub code: FindingCode,
    pub message: String,
}

impl Finding {
    fn new(severity: Severity, code: FindingCode, message: impl Into<String>) -> Self {
        Finding { severity, code, message: message.into() }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:?}: {}", self.severity, self.code, self.message)
    }
}

/// Events sharing one index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventGroup {
    pub index: u8,
    pub events: Vec<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub goto_target: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Script {
    pub concept: String,
    #[serde(rename = "role-of")]
    pub roles: BTreeMap<u8, String>,
    #[serde(rename = "role-script-of")]
    pub role_scripts: BTreeMap<u8, String>,
    #[serde(rename = "event-of")]
    pub events: Vec<EventGroup>,
    #[serde(rename = "entry-condition-of")]
    pub entry_conditions: Vec<Assertion>,
    #[serde(rename = "result-of")]
    pub results: Vec<Assertion>,
    #[serde(rename = "goal-of")]
    pub goals: Vec<Assertion>,
    #[serde(rename = "emotion-of")]
    pub emotions: Vec<Assertion>,
    #[serde(rename = "performed-in")]
    pub places: Vec<String>,
    #[serde(rename = "duration-of")]
    pub duration: Option<Measure>,
    #[serde(rename = "period-of")]
    pub period: Option<Measure>,
    #[serde(rename = "cost-of")]
    pub cost: Option<Measure>,
    /// Problems noticed while building, reported again by [`validate`].
    #[serde(skip)]
    pub build_findings: Vec<Finding>,
}

impl Script {
    fn empty(concept: &str) -> Self {
        Script {
            concept: concept.to_string(),
            roles: BTreeMap::new(),
            role_scripts: BTreeMap::new(),
            events: Vec::new(),
            entry_conditions: Vec::new(),
            results: Vec::new(),
            goals: Vec::new(),
            emotions: Vec::new(),
            places: Vec::new(),
            duration: None,
            period: None,
            cost: None,
            build_findings: Vec::new(),
        }
    }

    pub fn group(&self, index: u8) -> Option<&EventGroup> {
        self.events.iter().find(|g| g.index == index)
    }

    /// Number of stored events, goto pseudo-events excluded.
    pub fn event_count(&self) -> usize {
        self.events.iter().map(|g| g.events.len()).sum()
    }
}

fn malformed(concept: &str, a: &Assertion, message: &str) -> Error {
    Error::MalformedField { concept: concept.to_string(), predicate: a.predicate.clone(), message: message.to_string() }
}

/// Gathers the script fields of `concept`, keeping file order within each
/// field.
pub fn build_script(kb: &KnowledgeBase, concept: &str) -> Result<Script> {
    if !kb.contains(concept) {
        return Err(Error::UnknownConcept(concept.to_string()));
    }
    let mut script = Script::empty(concept);
    let mut groups: BTreeMap<u8, EventGroup> = BTreeMap::new();
    for a in kb.assertions_about(concept) {
        let Some(field) = Field::parse(&a.predicate) else { continue };
        if a.args.len() != 2 {
            return Err(malformed(concept, a, "expected exactly one value after the script"));
        }
        let value = &a.args[1];
        let symbol = || value.as_symbol().map(str::to_string).ok_or_else(|| malformed(concept, a, "expected a symbol"));
        let nested = || value.as_assertion().cloned().ok_or_else(|| malformed(concept, a, "expected an assertion"));
        let measure = || value.as_measure().cloned().ok_or_else(|| malformed(concept, a, "expected a measure"));
        match field {
            Field::Role(n) | Field::RoleScript(n) => {
                let target = if matches!(field, Field::Role(_)) { &mut script.roles } else { &mut script.role_scripts };
                let v = symbol()?;
                match target.entry(n) {
                    std::collections::btree_map::Entry::Occupied(_) => script.build_findings.push(Finding::new(
                        Severity::Warning,
                        FindingCode::DuplicateScalar,
                        format!("{} given twice; keeping the first", field.predicate()),
                    )),
                    std::collections::btree_map::Entry::Vacant(slot) => {
                        slot.insert(v);
                    }
                }
            }
            Field::Event(n) => {
                let group =
                    groups.entry(n).or_insert_with(|| EventGroup { index: n, events: Vec::new(), goto_target: None });
                match value {
                    Term::Nested(inner) if inner.predicate == "goto" => {
                        let target = match inner.args.as_slice() {
                            [Term::Symbol(s)] => match Field::parse(s) {
                                Some(Field::Event(t)) => t,
                                _ => return Err(malformed(concept, a, "goto needs an eventNN-of target")),
                            },
                            _ => return Err(malformed(concept, a, "goto needs an eventNN-of target")),
                        };
                        if group.goto_target.is_some() {
                            script.build_findings.push(Finding::new(
                                Severity::Warning,
                                FindingCode::DuplicateScalar,
                                format!("group {n:02} has more than one goto; keeping the first"),
                            ));
                        } else {
                            group.goto_target = Some(target);
                        }
                    }
                    Term::Nested(_) | Term::Symbol(_) => group.events.push(value.clone()),
                    _ => return Err(malformed(concept, a, "expected an event")),
                }
            }
            Field::EntryCondition => script.entry_conditions.push(nested()?),
            Field::Result => script.results.push(nested()?),
            Field::Goal => script.goals.push(nested()?),
            Field::Emotion => script.emotions.push(nested()?),
            Field::PerformedIn => script.places.push(symbol()?),
            Field::Duration | Field::Period | Field::Cost => {
                let m = measure()?;
                let slot = match field {
                    Field::Duration => &mut script.duration,
                    Field::Period => &mut script.period,
                    _ => &mut script.cost,
                };
                if slot.is_some() {
                    script.build_findings.push(Finding::new(
                        Severity::Warning,
                        FindingCode::DuplicateScalar,
                        format!("{} given twice; keeping the first", field.predicate()),
                    ));
                } else {
                    *slot = Some(m);
                }
            }
        }
    }
    script.events = groups.into_values().collect();
    Ok(script)
}

/// True when `concept` has at least one `eventNN-of` assertion.
pub fn is_script(kb: &KnowledgeBase, concept: &str) -> Result<bool> {
    if !kb.contains(concept) {
        return Err(Error::UnknownConcept(concept.to_string()));
    }
    Ok(kb.assertions_about(concept).any(|a| matches!(Field::parse(&a.predicate), Some(Field::Event(_)))))
}

/// Expands gotos into a flat sequence of groups. Each goto may be taken at
/// most `unroll_limit` times in total; once the budget is spent the
/// sequence ends at the next goto.
pub fn timeline(script: &Script, unroll_limit: usize) -> Result<Vec<EventGroup>> {
    for g in &script.events {
        if let Some(t) = g.goto_target {
            if script.group(t).is_none() {
                return Err(Error::BadGotoTarget { script: script.concept.clone(), target: t });
            }
        }
    }
    let mut out = Vec::new();
    let mut jumps = 0;
    let mut i = 0;
    while i < script.events.len() {
        let g = &script.events[i];
        if !g.events.is_empty() {
            out.push(EventGroup { index: g.index, events: g.events.clone(), goto_target: None });
        }
        match g.goto_target {
            Some(t) if jumps < unroll_limit => {
                jumps += 1;
                i = script.events.iter().position(|x| x.index == t).expect("checked above");
            }
            Some(_) => break,
            None => i += 1,
        }
    }
    Ok(out)
}

/// One filler for a role when building an instance assertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Binding {
    /// Unspecified filler.
    Na,
    Instance {
        name: String,
        concept: String,
    },
}

impl Binding {
    pub fn instance(name: impl Into<String>, concept: impl Into<String>) -> Self {
        Binding::Instance { name: name.into(), concept: concept.into() }
    }
}

/// `[script filler1 filler2 ...]`, fillers in role order. Each filler's
/// concept must be the role concept or one of its descendants.
pub fn instance_assertion(kb: &KnowledgeBase, script: &Script, bindings: &[Binding]) -> Result<Assertion> {
    if bindings.len() > script.roles.len() {
        return Err(Error::TooManyBindings {
            script: script.concept.clone(),
            given: bindings.len(),
            roles: script.roles.len(),
        });
    }
    let mut args = Vec::with_capacity(bindings.len());
    for (binding, (&index, role)) in bindings.iter().zip(&script.roles) {
        match binding {
            Binding::Na => args.push(Term::Na),
            Binding::Instance { name, concept } => {
                if !kb.is_a(concept, role)? {
                    return Err(Error::RoleTypeMismatch {
                        index,
                        role: role.clone(),
                        instance: name.clone(),
                        concept: concept.clone(),
                    });
                }
                args.push(Term::symbol(name.clone()));
            }
        }
    }
    Ok(Assertion::new(script.concept.clone(), args))
}

/// Consistency checks. Never fails; everything is reported as findings.
pub fn validate(kb: &KnowledgeBase, script: &Script) -> Vec<Finding> {
    let mut out = script.build_findings.clone();
    let c = &script.concept;

    for (expected, &index) in (1u8..).zip(script.roles.keys()) {
        if index != expected {
            out.push(Finding::new(
                Severity::Error,
                FindingCode::RoleGap,
                format!("{c}: role indices must run 01, 02, ...; found role{index:02} where role{expected:02} belongs"),
            ));
            break;
        }
    }

    if script.events.is_empty() {
        out.push(Finding::new(Severity::Warning, FindingCode::NoEvents, format!("{c}: no events")));
    }
    for g in &script.events {
        if let Some(t) = g.goto_target {
            if script.group(t).is_none() {
                out.push(Finding::new(
                    Severity::Error,
                    FindingCode::BadGotoTarget,
                    format!("{c}: group {:02} jumps to missing group {t:02}", g.index),
                ));
            }
            if !g.events.is_empty() {
                out.push(Finding::new(
                    Severity::Warning,
                    FindingCode::GotoWithEvents,
                    format!("{c}: group {:02} mixes a goto with other events", g.index),
                ));
            }
        }
    }

    // Event arguments should be role concepts, their relatives, or `na`.
    let related =
        |sym: &str| script.roles.values().any(|r| kb.is_a(sym, r).unwrap_or(false) || kb.is_a(r, sym).unwrap_or(false));
    for g in &script.events {
        for ev in &g.events {
            let Term::Nested(a) = ev else { continue };
            let mut args: Vec<&str> = Vec::new();
            for arg in &a.args {
                match arg {
                    Term::Symbol(s) => args.push(s),
                    Term::Nested(inner) => args.extend(inner.args.iter().flat_map(Term::symbols)),
                    _ => {}
                }
            }
            for s in args {
                if !related(s) {
                    out.push(Finding::new(
                        Severity::Info,
                        FindingCode::ArgNotRole,
                        format!("{c}: event {:02} argument `{s}` is not a role concept", g.index),
                    ));
                }
            }
        }
    }

    let checks = [
        ("duration-of", &script.duration, true),
        ("period-of", &script.period, true),
        ("cost-of", &script.cost, false),
    ];
    for (pred, m, time) in checks {
        let Some(m) = m else { continue };
        let positive = if time { m.value() > 0.0 } else { m.value() >= 0.0 };
        if !positive {
            out.push(Finding::new(Severity::Error, FindingCode::NonPositiveMeasure, format!("{c}: {pred} is {m}")));
        }
        let unit_ok = if time { m.unit().is_time() } else { m.unit().is_currency() };
        if !unit_ok {
            out.push(Finding::new(
                Severity::Error,
                FindingCode::WrongUnit,
                format!("{c}: {pred} has unit {}", m.unit()),
            ));
        }
    }
    out
}

/// Fields that fall back to ancestors when a script does not set them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarField {
    Duration,
    Period,
    Cost,
    Places,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum FieldValue {
    Measure(Measure),
    Places(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "from", content = "concept")]
pub enum Provenance {
    Own,
    InheritedFrom(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inherited {
    pub value: FieldValue,
    pub provenance: Provenance,
}

fn own_scalar(kb: &KnowledgeBase, concept: &str, field: ScalarField) -> Option<FieldValue> {
    let wanted = match field {
        ScalarField::Duration => Field::Duration,
        ScalarField::Period => Field::Period,
        ScalarField::Cost => Field::Cost,
        ScalarField::Places => Field::PerformedIn,
    };
    let values = kb
        .assertions_about(concept)
        .filter(|a| Field::parse(&a.predicate) == Some(wanted) && a.args.len() == 2)
        .map(|a| &a.args[1]);
    if field == ScalarField::Places {
        let places: Vec<String> = values.filter_map(Term::as_symbol).map(str::to_string).collect();
        (!places.is_empty()).then_some(FieldValue::Places(places))
    } else {
        values.filter_map(Term::as_measure).next().cloned().map(FieldValue::Measure)
    }
}

/// A scalar field from the concept itself or, failing that, from the
/// nearest ancestor that sets it.
pub fn inherited_field(kb: &KnowledgeBase, concept: &str, field: ScalarField) -> Result<Option<Inherited>> {
    if !kb.contains(concept) {
        return Err(Error::UnknownConcept(concept.to_string()));
    }
    if let Some(value) = own_scalar(kb, concept, field) {
        return Ok(Some(Inherited { value, provenance: Provenance::Own }));
    }
    for ancestor in kb.ontology().ancestors(concept)? {
        if let Some(value) = own_scalar(kb, ancestor, field) {
            return Ok(Some(Inherited { value, provenance: Provenance::InheritedFrom(ancestor.to_string()) }));
        }
    }
    Ok(None)
}
