//! Subevent, role and place tuples from first-order rules written as
//! s-expressions.
//!
//! Each top-level form is one assertion. Variables (`?X`) are
//! instantiated from `(isa ?X Type)` formulas anywhere in the same
//! assertion. Three predicates produce tuples:
//!
//! | predicate                       | tuple                              |
//! |---------------------------------|------------------------------------|
//! | `(subEvents P C)`               | `P:subEvents:C`                    |
//! | `(actsInCapacity R pred E cap)` | `E:actsInCapacity:R`               |
//! | `(eventOccursAt E L)`           | `E:eventOccursAt:L`                |
//!
//! An assertion that yields none of these instead yields one `Other`
//! tuple per known event it mentions.
//!
//! ```
//! use scriptbase::cycextract::{extract_tuples, parse_forms};
//!
//! let parsed = parse_forms("(=> (and (isa ?U ChangingOil) (eventOccursAt ?U ?X)) (isa ?X ServiceStation))");
//! let tuples = extract_tuples(&parsed.forms[0], &Default::default());
//! let lines: Vec<String> = tuples.iter().map(|t| t.to_string()).collect();
//! assert_eq!(lines, ["ChangingOil:eventOccursAt:ServiceStation"]);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::diagnostics::{Code, Diagnostic};
use crate::error::{Error, Result};
use crate::stats::{CensusRow, SummaryRow};

/// Tail of every `Other` tuple.
pub const OTHER_TAIL: &str = "*";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Form {
    Atom(String),
    List(Vec<Form>),
}

impl Form {
    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Form::Atom(a) => Some(a),
            Form::List(_) => None,
        }
    }

    /// Leading atom of a list.
    pub fn operator(&self) -> Option<&str> {
        match self {
            Form::List(items) => items.first()?.as_atom(),
            Form::Atom(_) => None,
        }
    }

    pub fn children(&self) -> &[Form] {
        match self {
            Form::List(items) => items,
            Form::Atom(_) => &[],
        }
    }

    /// This form and every form nested in it, depth first.
    pub fn walk(&self) -> Vec<&Form> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let children = out[i].children();
            out.extend(children);
            i += 1;
        }
        out
    }

    pub fn atoms(&self) -> impl Iterator<Item = &str> {
        self.walk().into_iter().filter_map(Form::as_atom)
    }
}

pub fn is_variable(atom: &str) -> bool {
    atom.len() > 1 && atom.starts_with('?')
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Atom(a) => f.write_str(a),
            Form::List(items) => {
                f.write_str("(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{item}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParsedForms {
    pub forms: Vec<Form>,
    pub diagnostics: Vec<Diagnostic>,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

enum Tok {
    Open,
    Close,
    Atom(String),
}

impl Lexer<'_> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Next token with the position it starts at.
    fn next(&mut self) -> Option<(Tok, usize, usize)> {
        loop {
            match *self.chars.peek()? {
                c if c.is_whitespace() => {
                    self.bump();
                }
                ';' => while self.bump().is_some_and(|c| c != '\n') {},
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let tok = match self.bump()? {
            '(' => Tok::Open,
            ')' => Tok::Close,
            '"' => {
                let mut s = String::from('"');
                while let Some(c) = self.bump() {
                    s.push(c);
                    if c == '"' {
                        break;
                    }
                }
                Tok::Atom(s)
            }
            c => {
                let mut s = String::from(c);
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ';' | '"') {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Tok::Atom(s)
            }
        };
        Some((tok, line, col))
    }
}

/// Reads every top-level form. An unmatched `)` is skipped and an
/// unclosed `(` drops the form it opens; both are reported.
pub fn parse_forms(text: &str) -> ParsedForms {
    let mut lexer = Lexer { chars: text.chars().peekable(), line: 1, col: 1 };
    let mut out = ParsedForms::default();
    // Open lists with the position of their `(`.
    let mut stack: Vec<(Vec<Form>, usize, usize)> = Vec::new();
    while let Some((tok, line, col)) = lexer.next() {
        match tok {
            Tok::Open => stack.push((Vec::new(), line, col)),
            Tok::Close => match stack.pop() {
                Some((items, _, _)) => {
                    let form = Form::List(items);
                    match stack.last_mut() {
                        Some((parent, _, _)) => parent.push(form),
                        None => out.forms.push(form),
                    }
                }
                None => out.diagnostics.push(Diagnostic::error(Code::UnbalancedParen, line, col, "unmatched `)`")),
            },
            Tok::Atom(a) => match stack.last_mut() {
                Some((parent, _, _)) => parent.push(Form::Atom(a)),
                None => out.forms.push(Form::Atom(a)),
            },
        }
    }
    if let Some((_, line, col)) = stack.first() {
        out.diagnostics.push(Diagnostic::error(Code::UnbalancedParen, *line, *col, "unclosed `(`"));
    }
    out
}

/// Exactly one balanced form.
pub fn parse_form(text: &str) -> Result<Form> {
    let mut parsed = parse_forms(text);
    if let Some(d) = parsed.diagnostics.first() {
        return Err(Error::UnbalancedParen { line: d.line, col: d.col });
    }
    match parsed.forms.len() {
        1 => Ok(parsed.forms.remove(0)),
        n => Err(Error::Syntax { line: 1, col: 1, message: format!("expected one form, found {n}") }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Relation {
    #[serde(rename = "subEvents")]
    SubEvents,
    #[serde(rename = "actsInCapacity")]
    ActsInCapacity,
    #[serde(rename = "eventOccursAt")]
    EventOccursAt,
    Other,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::SubEvents => "subEvents",
            Relation::ActsInCapacity => "actsInCapacity",
            Relation::EventOccursAt => "eventOccursAt",
            Relation::Other => "Other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Tuple {
    pub head: String,
    pub relation: Relation,
    pub tail: String,
}

impl Tuple {
    pub fn new(head: &str, relation: Relation, tail: &str) -> Self {
        Tuple { head: head.to_string(), relation, tail: tail.to_string() }
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.head, self.relation, self.tail)
    }
}

/// Types each variable is declared to have by `isa` formulas in `form`.
fn isa_bindings(form: &Form) -> BTreeMap<&str, Vec<&str>> {
    let mut out: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for f in form.walk() {
        if let [op, var, ty] = f.children() {
            if let (Some("isa"), Some(var), Some(ty)) = (op.as_atom(), var.as_atom(), ty.as_atom()) {
                if is_variable(var) && !is_variable(ty) {
                    let types = out.entry(var).or_default();
                    if !types.contains(&ty) {
                        types.push(ty);
                    }
                }
            }
        }
    }
    out
}

/// Ground symbols a term stands for. Empty when it cannot be grounded.
fn instantiate<'a>(term: &'a Form, bindings: &BTreeMap<&str, Vec<&'a str>>) -> Vec<&'a str> {
    match term.as_atom() {
        Some(a) if is_variable(a) => bindings.get(a).cloned().unwrap_or_default(),
        Some(a) => vec![a],
        None => Vec::new(),
    }
}

/// Tuples from a single top-level assertion. A variable with several
/// `isa` types yields one tuple per type.
pub fn extract_tuples(form: &Form, known_events: &BTreeSet<String>) -> BTreeSet<Tuple> {
    let bindings = isa_bindings(form);
    let mut out = BTreeSet::new();
    let mut emit = |relation, heads: &[&str], tails: &[&str]| {
        for h in heads {
            for t in tails {
                out.insert(Tuple::new(h, relation, t));
            }
        }
    };
    for f in form.walk() {
        let args = f.children();
        match (f.operator(), args.len()) {
            (Some("subEvents"), 3) => {
                emit(Relation::SubEvents, &instantiate(&args[1], &bindings), &instantiate(&args[2], &bindings))
            }
            (Some("actsInCapacity"), n) if n >= 4 => {
                emit(Relation::ActsInCapacity, &instantiate(&args[3], &bindings), &instantiate(&args[1], &bindings))
            }
            (Some("eventOccursAt"), 3) => {
                emit(Relation::EventOccursAt, &instantiate(&args[1], &bindings), &instantiate(&args[2], &bindings))
            }
            _ => {}
        }
    }
    if out.is_empty() {
        for atom in form.atoms() {
            if known_events.contains(atom) {
                out.insert(Tuple::new(atom, Relation::Other, OTHER_TAIL));
            }
        }
    }
    out
}

/// Union of the tuples of every form.
pub fn extract_all(forms: &[Form], known_events: &BTreeSet<String>) -> BTreeSet<Tuple> {
    forms.iter().flat_map(|f| extract_tuples(f, known_events)).collect()
}

/// One event name per line; blank lines and `;` comments are skipped.
pub fn parse_event_list(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(|l| l.split(';').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventCensus {
    pub rows: Vec<CensusRow>,
    /// `None` when no event has a `subEvents` tuple.
    pub summary: Option<SummaryRow>,
}

/// Counts per event, for the events that head at least one `subEvents`
/// tuple. Rows are ordered by event name.
pub fn event_census(tuples: &BTreeSet<Tuple>) -> EventCensus {
    let mut rows: BTreeMap<&str, CensusRow> = BTreeMap::new();
    for t in tuples.iter().filter(|t| t.relation == Relation::SubEvents) {
        rows.entry(&t.head).or_insert_with(|| CensusRow {
            script: t.head.clone(),
            subevents: 0,
            roles: 0,
            places: 0,
            other: 0,
        });
    }
    for t in tuples {
        if let Some(row) = rows.get_mut(t.head.as_str()) {
            match t.relation {
                Relation::SubEvents => row.subevents += 1,
                Relation::ActsInCapacity => row.roles += 1,
                Relation::EventOccursAt => row.places += 1,
                Relation::Other => row.other += 1,
            }
        }
    }
    let rows: Vec<CensusRow> = rows.into_values().collect();
    let summary = SummaryRow::from_rows("extracted", &rows);
    EventCensus { rows, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn events(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn lines(t: &BTreeSet<Tuple>) -> Vec<String> {
        let mut v: Vec<String> = t.iter().map(Tuple::to_string).collect();
        v.sort();
        v
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_form("()").unwrap(), Form::List(vec![]));
        let f = parse_form("(=> (isa ?X WeddingCeremony)\n  (duration ?X (HoursDuration 0.5 2)))").unwrap();
        assert_eq!(f.operator(), Some("=>"));
        assert!(f.walk().iter().any(|g| g.to_string() == "(HoursDuration 0.5 2)"));
        assert_eq!(parse_form("(a (b)"), Err(Error::UnbalancedParen { line: 1, col: 1 }));
        assert_eq!(parse_form("(a))"), Err(Error::UnbalancedParen { line: 1, col: 4 }));
        let p = parse_forms("; comment\n(a) ) (b\n");
        assert_eq!(p.forms, vec![Form::List(vec![Form::Atom("a".into())])]);
        assert_eq!(p.diagnostics.len(), 2);
        assert_eq!((p.diagnostics[1].line, p.diagnostics[1].col), (2, 7));
    }

    #[test]
    fn dancer() {
        let f = parse_form("(=> (isa ?U Dancer) (actsInCapacity ?U performedBy DancingProcess-Human HobbyCapacity))")
            .unwrap();
        assert_eq!(lines(&extract_tuples(&f, &events(&[]))), ["DancingProcess-Human:actsInCapacity:Dancer"]);
    }

    #[test]
    fn unbound_variables_block() {
        let f = parse_form("(=> (and (subEvents ?X ?U) (isa ?U Staining)) (foo ?X))").unwrap();
        assert!(extract_tuples(&f, &events(&[])).is_empty());
        let t = extract_tuples(&f, &events(&["Staining", "Painting"]));
        assert_eq!(lines(&t), ["Staining:Other:*"]);
    }

    #[test]
    fn several_types_per_variable() {
        let f = parse_form("(and (isa ?P A) (isa ?P B) (isa ?C D) (subEvents ?P ?C))").unwrap();
        assert_eq!(lines(&extract_tuples(&f, &events(&[]))), ["A:subEvents:D", "B:subEvents:D"]);
    }

    #[test]
    fn census() {
        let tuples: BTreeSet<Tuple> = [
            Tuple::new("A", Relation::SubEvents, "B"),
            Tuple::new("A", Relation::EventOccursAt, "Home"),
            Tuple::new("B", Relation::ActsInCapacity, "Cook"),
            Tuple::new("A", Relation::Other, OTHER_TAIL),
        ]
        .into();
        let c = event_census(&tuples);
        assert_eq!(c.rows, vec![CensusRow { script: "A".into(), subevents: 1, roles: 0, places: 1, other: 1 }]);
        assert_eq!(c.summary.unwrap().scripts, 1);
        assert_eq!(event_census(&BTreeSet::new()).summary, None);
    }
}
