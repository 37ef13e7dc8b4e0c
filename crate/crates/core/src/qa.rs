//! Answers to nine fixed commonsense question templates.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::assertion::{Assertion, Term};
use crate::error::{Error, Result};
use crate::kb::KnowledgeBase;
use crate::ontology::Language;
use crate::recognizer::mention_set;
use crate::script::{build_script, inherited_field, is_script, EventGroup, FieldValue, Inherited, ScalarField, Script};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum QuestionKind {
    WhatDoes,
    UsedFor,
    WhereFound,
    ConsistOf,
    ResultOf,
    WhereDoesOne,
    HowLong,
    HowOften,
    HowMuch,
}

impl QuestionKind {
    pub const ALL: [QuestionKind; 9] = [
        QuestionKind::WhatDoes,
        QuestionKind::UsedFor,
        QuestionKind::WhereFound,
        QuestionKind::ConsistOf,
        QuestionKind::ResultOf,
        QuestionKind::WhereDoesOne,
        QuestionKind::HowLong,
        QuestionKind::HowOften,
        QuestionKind::HowMuch,
    ];

    /// Kinds whose subject has to be a script.
    pub fn needs_script(self) -> bool {
        !matches!(self, QuestionKind::WhatDoes | QuestionKind::UsedFor | QuestionKind::WhereFound)
    }

    /// Surface template as `(prefix, suffix)` around the blank.
    fn template(self) -> (&'static str, &'static str) {
        match self {
            QuestionKind::WhatDoes => ("What does a ", " do?"),
            QuestionKind::UsedFor => ("What is a ", " used for?"),
            QuestionKind::WhereFound => ("Where is a ", " found?"),
            QuestionKind::ConsistOf => ("What does ", " consist of?"),
            QuestionKind::ResultOf => ("What is the result of ", "?"),
            QuestionKind::WhereDoesOne => ("Where does one ", "?"),
            QuestionKind::HowLong => ("How long does ", " take?"),
            QuestionKind::HowOften => ("How often does one ", "?"),
            QuestionKind::HowMuch => ("How much does ", " cost?"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Question {
    pub kind: QuestionKind,
    pub subject: String,
    /// Set when the subject phrase was ambiguous.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Question {
    pub fn new(kind: QuestionKind, subject: impl Into<String>) -> Self {
        Question { kind, subject: subject.into(), note: None }
    }
}

/// What a script says about the subject of a "what does/what is it used
/// for" question.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Involvement {
    pub script: String,
    pub events: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "items", rename_all = "kebab-case")]
pub enum Payload {
    Involvements(Vec<Involvement>),
    Concepts(Vec<String>),
    Assertions(Vec<Assertion>),
    Groups(Vec<EventGroup>),
    Measure(Option<Inherited>),
}

impl Payload {
    /// An empty payload means "don't know".
    pub fn is_empty(&self) -> bool {
        match self {
            Payload::Involvements(v) => v.is_empty(),
            Payload::Concepts(v) => v.is_empty(),
            Payload::Assertions(v) => v.is_empty(),
            Payload::Groups(v) => v.is_empty(),
            Payload::Measure(m) => m.is_none(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Answer {
    pub question: Question,
    pub payload: Payload,
    /// Scripts the payload was drawn from.
    pub sources: Vec<String>,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = &self.question;
        if let Some(note) = &q.note {
            writeln!(f, "note: {note}")?;
        }
        if self.payload.is_empty() {
            return writeln!(f, "unknown");
        }
        match &self.payload {
            Payload::Involvements(items) => {
                for i in items {
                    writeln!(f, "{}:", i.script)?;
                    for e in &i.events {
                        writeln!(f, "  {e}")?;
                    }
                }
            }
            Payload::Concepts(cs) => writeln!(f, "{}", cs.join(", "))?,
            Payload::Assertions(asserts) => {
                for a in asserts {
                    writeln!(f, "{a}")?;
                }
            }
            Payload::Groups(groups) => {
                for g in groups {
                    let events: Vec<String> = g.events.iter().map(Term::to_string).collect();
                    match g.goto_target {
                        Some(t) => writeln!(
                            f,
                            "{:02}: {}goto {t:02}",
                            g.index,
                            if events.is_empty() { String::new() } else { format!("{} ; ", events.join(" ; ")) }
                        )?,
                        None => writeln!(f, "{:02}: {}", g.index, events.join(" ; "))?,
                    }
                }
            }
            Payload::Measure(Some(m)) => {
                let FieldValue::Measure(v) = &m.value else { unreachable!("measure payload") };
                match &m.provenance {
                    crate::script::Provenance::Own => writeln!(f, "{} {}", v.number_text(), v.unit())?,
                    crate::script::Provenance::InheritedFrom(a) => {
                        writeln!(f, "{} {} (from {a})", v.number_text(), v.unit())?
                    }
                }
            }
            Payload::Measure(None) => unreachable!("handled as empty"),
        }
        if !self.sources.is_empty() {
            writeln!(f, "source: {}", self.sources.join(", "))?;
        }
        Ok(())
    }
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

fn scripts(kb: &KnowledgeBase) -> Vec<Script> {
    kb.script_concepts().into_iter().filter_map(|c| build_script(kb, c).ok()).collect()
}

/// Events of `script` that mention anything in `targets`.
fn events_mentioning(script: &Script, targets: &dyn Fn(&str) -> bool) -> Vec<Term> {
    script.events.iter().flat_map(|g| &g.events).filter(|e| e.symbols().into_iter().any(targets)).cloned().collect()
}

fn places_of(kb: &KnowledgeBase, script: &str) -> Result<Vec<String>> {
    Ok(match inherited_field(kb, script, ScalarField::Places)? {
        Some(Inherited { value: FieldValue::Places(p), .. }) => p,
        _ => Vec::new(),
    })
}

pub fn answer(kb: &KnowledgeBase, q: &Question) -> Result<Answer> {
    let subject = q.subject.as_str();
    if !kb.contains(subject) {
        return Err(Error::UnknownConcept(subject.to_string()));
    }
    if q.kind.needs_script() && !is_script(kb, subject)? {
        return Err(Error::NotAScript(subject.to_string()));
    }
    let mut sources = Vec::new();
    let payload = match q.kind {
        QuestionKind::WhatDoes => {
            let mut out: Vec<Involvement> = Vec::new();
            let all = scripts(kb);
            // The subject itself first, then each ancestor, nearest first;
            // the first level that fills some role answers the question.
            let levels = std::iter::once(subject).chain(kb.ontology().ancestors(subject)?);
            for level in levels {
                for s in &all {
                    for (n, role) in &s.roles {
                        if role != level {
                            continue;
                        }
                        // Prefer the script told from this role's point of view.
                        let viewpoint = s.role_scripts.get(n).and_then(|v| all.iter().find(|x| &x.concept == v));
                        let target = viewpoint.unwrap_or(s);
                        push_unique(&mut sources, &s.concept);
                        if out.iter().any(|i| i.script == target.concept) {
                            continue;
                        }
                        push_unique(&mut sources, &target.concept);
                        out.push(Involvement {
                            script: target.concept.clone(),
                            events: events_mentioning(target, &|x| x == level),
                        });
                    }
                }
                if !out.is_empty() {
                    break;
                }
            }
            Payload::Involvements(out)
        }
        QuestionKind::UsedFor => {
            let mut out = Vec::new();
            for s in scripts(kb) {
                if mention_set(&s).contains(subject) {
                    let events = events_mentioning(&s, &|x| x == subject);
                    push_unique(&mut sources, &s.concept);
                    out.push(Involvement { script: s.concept, events });
                }
            }
            Payload::Involvements(out)
        }
        QuestionKind::WhereFound => {
            let mut out = Vec::new();
            for s in scripts(kb) {
                if mention_set(&s).contains(subject) {
                    let places = places_of(kb, &s.concept)?;
                    if !places.is_empty() {
                        push_unique(&mut sources, &s.concept);
                    }
                    for p in places {
                        push_unique(&mut out, &p);
                    }
                }
            }
            for g in kb.grids() {
                if g.legend_concepts().contains(&subject) {
                    // A grid is a particular place; report the kind of place
                    // it is when the hierarchy says so.
                    let parents = kb.ontology().parents(g.name())?;
                    let classes: Vec<&str> = parents.into_iter().filter(|p| *p != crate::ontology::ROOT).collect();
                    if classes.is_empty() {
                        push_unique(&mut out, g.name());
                    }
                    for c in classes {
                        push_unique(&mut out, c);
                    }
                    push_unique(&mut sources, g.name());
                }
            }
            Payload::Concepts(out)
        }
        QuestionKind::ConsistOf => {
            sources.push(subject.to_string());
            Payload::Groups(build_script(kb, subject)?.events)
        }
        QuestionKind::ResultOf => {
            sources.push(subject.to_string());
            Payload::Assertions(build_script(kb, subject)?.results)
        }
        QuestionKind::WhereDoesOne => {
            sources.push(subject.to_string());
            Payload::Concepts(places_of(kb, subject)?)
        }
        QuestionKind::HowLong | QuestionKind::HowOften | QuestionKind::HowMuch => {
            let field = match q.kind {
                QuestionKind::HowLong => ScalarField::Duration,
                QuestionKind::HowOften => ScalarField::Period,
                _ => ScalarField::Cost,
            };
            let value = inherited_field(kb, subject, field)?;
            if let Some(v) = &value {
                match &v.provenance {
                    crate::script::Provenance::Own => sources.push(subject.to_string()),
                    crate::script::Provenance::InheritedFrom(a) => sources.push(a.clone()),
                }
            }
            Payload::Measure(value)
        }
    };
    Ok(Answer { question: q.clone(), payload, sources })
}

fn strip_article(phrase: &str) -> &str {
    for article in ["a ", "an ", "the ", "A ", "An ", "The "] {
        if let Some(rest) = phrase.strip_prefix(article) {
            return rest.trim_start();
        }
    }
    phrase
}

fn fold_first(s: &str) -> String {
    crate::ontology::phrase_key(s)
}

/// Concepts a phrase may refer to: lexicon entries first, then a concept
/// whose name is the phrase with spaces turned into hyphens.
fn candidates<'a>(kb: &'a KnowledgeBase, phrase: &str) -> Vec<&'a str> {
    let mut out = kb.ontology().lookup_phrase(phrase, Language::English);
    let name = phrase.to_lowercase().split_whitespace().collect::<Vec<_>>().join("-");
    if let Some(id) = kb.ontology().id(&name) {
        let n = kb.ontology().name(id);
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

fn resolve(kb: &KnowledgeBase, kind: QuestionKind, phrase: &str) -> Result<(String, Option<String>)> {
    let found = candidates(kb, phrase);
    let pick = if kind.needs_script() {
        found.iter().find(|c| is_script(kb, c).unwrap_or(false)).or(found.first())
    } else {
        found.first()
    };
    let Some(&subject) = pick else {
        return Err(Error::UnknownSubjectPhrase(phrase.to_string()));
    };
    let note = (found.len() > 1).then(|| format!("`{phrase}` could mean {}; using {subject}", found.join(", ")));
    Ok((subject.to_string(), note))
}

/// Matches one of the nine English templates and resolves the blank.
pub fn parse_question(kb: &KnowledgeBase, text: &str) -> Result<Question> {
    let text = text.trim();
    let folded = fold_first(text);
    // Longer prefixes first so "What does X consist of?" is not read as
    // "What does X do?".
    let mut kinds = QuestionKind::ALL;
    kinds.sort_by_key(|k| std::cmp::Reverse(k.template().0.len() + k.template().1.len()));
    for kind in kinds {
        let (prefix, suffix) = kind.template();
        // The template's article is optional.
        let bare = prefix.strip_suffix("a ").map(|p| p.to_string());
        for p in std::iter::once(prefix.to_string()).chain(bare) {
            let p = fold_first(&p);
            if let Some(blank) = folded.strip_prefix(&p).and_then(|r| r.strip_suffix(suffix)) {
                let phrase = strip_article(blank.trim());
                if phrase.is_empty() {
                    continue;
                }
                let (subject, note) = resolve(kb, kind, phrase)?;
                return Ok(Question { kind, subject, note });
            }
        }
    }
    Err(Error::UnrecognizedTemplate(text.to_string()))
}

/// Writes a question back in its template, choosing a phrase that parses
/// back to the same subject whenever one exists.
pub fn render_question(kb: &KnowledgeBase, q: &Question) -> String {
    let (prefix, suffix) = q.kind.template();
    let fallback = q.subject.replace('-', " ");
    let lexemes = kb.ontology().lexemes_of(&q.subject, Language::English).unwrap_or_default();
    let phrase = lexemes
        .iter()
        .map(|s| s.to_string())
        .chain(std::iter::once(fallback.clone()))
        .find(|p| resolve(kb, q.kind, p).map(|(s, _)| s == q.subject).unwrap_or(false))
        .unwrap_or(fallback);
    format!("{prefix}{phrase}{suffix}")
}

/// Subjects for which every template is meaningful enough to round-trip.
pub fn subjects_of(kb: &KnowledgeBase, kind: QuestionKind) -> BTreeSet<String> {
    if kind.needs_script() {
        kb.script_concepts().into_iter().map(str::to_string).collect()
    } else {
        scripts(kb).iter().flat_map(mention_set).filter(|c| kb.contains(c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kb() -> KnowledgeBase {
        let text = "Object sleep
[English] sleep
[role01-of ^ sleeper]
[event01-of ^ [lie-on sleeper bed]]
[result-of ^ [restedness sleeper]]
[performed-in ^ bedroom]
Object sleeper
[ako ^ human]
Object dental-filling
[English] filling
Object have-filling-done
[English] filling
[cost-of ^ NUMBER:USD:200]
[role01-of ^ role-patient]
[event01-of ^ [fill-tooth dentist tooth dental-filling]]
";
        KnowledgeBase::from_texts([("t", text)]).kb
    }

    #[test]
    fn templates() {
        let kb = kb();
        let q = parse_question(&kb, "What is the result of sleep?").unwrap();
        assert_eq!((q.kind, q.subject.as_str()), (QuestionKind::ResultOf, "sleep"));
        let q = parse_question(&kb, "How much does a filling cost?").unwrap();
        assert_eq!((q.kind, q.subject.as_str()), (QuestionKind::HowMuch, "have-filling-done"));
        assert!(q.note.is_some());
        let q = parse_question(&kb, "What is a filling used for?").unwrap();
        assert_eq!(q.subject, "dental-filling");
        let q = parse_question(&kb, "what does sleep consist of?").unwrap();
        assert_eq!(q.kind, QuestionKind::ConsistOf);
        let q = parse_question(&kb, "What does a sleeper do?").unwrap();
        assert_eq!((q.kind, q.subject.as_str()), (QuestionKind::WhatDoes, "sleeper"));
    }

    #[test]
    fn template_failures() {
        let kb = kb();
        assert!(matches!(parse_question(&kb, "Why is the sky blue?"), Err(Error::UnrecognizedTemplate(_))));
        assert!(matches!(parse_question(&kb, "How long does a xyzzy take?"), Err(Error::UnknownSubjectPhrase(_))));
    }

    #[test]
    fn answers() {
        let kb = kb();
        let a = answer(&kb, &Question::new(QuestionKind::ResultOf, "sleep")).unwrap();
        assert_eq!(
            a.payload,
            Payload::Assertions(vec![crate::assertion::parse_assertion("[restedness sleeper]", None).unwrap()])
        );
        let a = answer(&kb, &Question::new(QuestionKind::HowLong, "sleep")).unwrap();
        assert!(a.payload.is_empty());
        assert_eq!(a.to_string(), "unknown\n");
        assert_eq!(
            answer(&kb, &Question::new(QuestionKind::HowMuch, "dental-filling")),
            Err(Error::NotAScript("dental-filling".into()))
        );
        assert_eq!(answer(&kb, &Question::new(QuestionKind::HowMuch, "zzz")), Err(Error::UnknownConcept("zzz".into())));
        let a = answer(&kb, &Question::new(QuestionKind::WhatDoes, "sleeper")).unwrap();
        let Payload::Involvements(items) = &a.payload else { panic!() };
        assert_eq!(items[0].script, "sleep");
        assert_eq!(items[0].events.len(), 1);
    }

    #[test]
    fn render_and_parse_agree() {
        let kb = kb();
        for kind in QuestionKind::ALL {
            for subject in subjects_of(&kb, kind) {
                let q = Question::new(kind, subject);
                let text = render_question(&kb, &q);
                let back = parse_question(&kb, &text).unwrap();
                assert_eq!((back.kind, &back.subject), (q.kind, &q.subject), "{text}");
            }
        }
    }
}
