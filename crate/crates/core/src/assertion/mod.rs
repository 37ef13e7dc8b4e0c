//! Assertions and the knowledge-base text format.
//!
//! A file is a sequence of `Object <name>` blocks. Each block carries
//! optional lexicon lines (`[English] power failure, blackout; [French] ...`)
//! followed by bracketed assertions such as `[ako ^ disaster]`, where `^`
//! stands for the block's own concept. Lines starting with `;` are comments.
//! A line starting with `==` opens a grid, which runs to the next empty line.

mod measure;
mod parse;
mod serialize;

use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::ontology::Language;

pub use measure::{parse_measure, Measure, Unit, UNITS};
pub use parse::{parse_assertion, parse_database, parse_database_with_default, ParsedDatabase};
pub use serialize::{serialize, serialize_block};

/// Reserved argument meaning "unspecified".
pub const NA: &str = "na";

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Symbol(String),
    Na,
    Measure(Measure),
    Nested(Assertion),
}

impl Term {
    pub fn symbol(name: impl Into<String>) -> Self {
        Term::Symbol(name.into())
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Term::Symbol(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_assertion(&self) -> Option<&Assertion> {
        match self {
            Term::Nested(a) => Some(a),
            _ => None,
        }
    }

    pub fn as_measure(&self) -> Option<&Measure> {
        match self {
            Term::Measure(m) => Some(m),
            _ => None,
        }
    }

    /// Every symbol in this term, depth first, predicates included.
    pub fn symbols(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Symbol(s) => out.push(s),
            Term::Nested(a) => a.collect_symbols(out),
            Term::Na | Term::Measure(_) => {}
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Symbol(s) => f.write_str(s),
            Term::Na => f.write_str(NA),
            Term::Measure(m) => write!(f, "{m}"),
            Term::Nested(a) => write!(f, "{a}"),
        }
    }
}

/// JSON shape: symbols are strings, `na` is null, measures are
/// `{"unit", "value"}` objects and nested assertions are
/// `{"predicate", "args"}` objects.
impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Term::Symbol(s) => serializer.serialize_str(s),
            Term::Na => serializer.serialize_none(),
            Term::Measure(m) => m.serialize(serializer),
            Term::Nested(a) => a.serialize(serializer),
        }
    }
}

/// `[predicate arg1 arg2 ...]`
#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Assertion {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Assertion { predicate: predicate.into(), args }
    }

    /// First argument when it is a symbol; for script fields this is the
    /// concept the assertion is about.
    pub fn subject(&self) -> Option<&str> {
        self.args.first().and_then(Term::as_symbol)
    }

    pub fn symbols(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<&'a str>) {
        out.push(&self.predicate);
        for arg in &self.args {
            arg.collect_symbols(out);
        }
    }

    /// True when `symbol` occurs anywhere inside, predicate included.
    pub fn mentions(&self, symbol: &str) -> bool {
        self.symbols().contains(&symbol)
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.predicate)?;
        for arg in &self.args {
            write!(f, " {arg}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for Assertion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2))?;
        map.serialize_entry("predicate", &self.predicate)?;
        map.serialize_entry("args", &self.args)?;
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LexiconLine {
    pub language: Language,
    pub phrases: Vec<String>,
}

/// One `Object` block as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObjectBlock {
    pub concept: String,
    pub lexicon: Vec<LexiconLine>,
    pub assertions: Vec<Assertion>,
    /// 1-based line of the header, or 0 when the concept was supplied
    /// externally.
    #[serde(skip)]
    pub line: usize,
}

impl ObjectBlock {
    pub fn new(concept: impl Into<String>) -> Self {
        ObjectBlock { concept: concept.into(), lexicon: Vec::new(), assertions: Vec::new(), line: 0 }
    }

    /// Structural equality, ignoring source positions.
    pub fn same_content(&self, other: &ObjectBlock) -> bool {
        self.concept == other.concept && self.lexicon == other.lexicon && self.assertions == other.assertions
    }
}

/// Symbol grammar: an ASCII letter or digit, then letters, digits, `-` or
/// `_`; non-ASCII letters are allowed anywhere for French-derived names.
pub fn is_symbol(token: &str) -> bool {
    let mut chars = token.chars();
    let Some(first) = chars.next() else { return false };
    let ok_start = first.is_ascii_alphanumeric() || (!first.is_ascii() && first.is_alphabetic());
    ok_start && chars.all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_' || (!c.is_ascii() && c.is_alphabetic()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_grammar() {
        assert!(is_symbol("blackout"));
        assert!(is_symbol("event01-of"));
        assert!(is_symbol("électricité"));
        assert!(is_symbol("John"));
        assert!(!is_symbol(""));
        assert!(!is_symbol("-x"));
        assert!(!is_symbol("a:b"));
        assert!(!is_symbol("^"));
    }

    #[test]
    fn display_nested() {
        let a = Assertion::new(
            "event02-of",
            vec![
                Term::symbol("blackout"),
                Term::Nested(Assertion::new(
                    "fetch-from",
                    vec![Term::symbol("human"), Term::Na, Term::symbol("light-source")],
                )),
            ],
        );
        assert_eq!(a.to_string(), "[event02-of blackout [fetch-from human na light-source]]");
        assert_eq!(a.symbols(), vec!["event02-of", "blackout", "fetch-from", "human", "light-source"]);
        assert!(a.mentions("light-source"));
        assert!(!a.mentions("na"));
    }

    #[test]
    fn json_shape() {
        let a = Assertion::new("x", vec![Term::Na, Term::symbol("y")]);
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"predicate":"x","args":[null,"y"]}"#);
    }
}
