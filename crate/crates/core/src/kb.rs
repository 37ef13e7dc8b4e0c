//! Loading files into an immutable knowledge base.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use crate::assertion::{parse_database, Assertion, ObjectBlock, ParsedDatabase, Term};
use crate::diagnostics::{Code, Diagnostic, SourcedDiagnostic};
use crate::error::Result;
use crate::grid::Grid;
use crate::ontology::{Ontology, ROOT};
use crate::script::Field;

/// Predicates with built-in meaning; they are registered silently.
fn is_builtin(symbol: &str) -> bool {
    matches!(symbol, "ako" | "goto" | ROOT) || Field::parse(symbol).is_some()
}

/// Concepts, assertions and grids. Read-only once built.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    ontology: Ontology,
    assertions: Vec<Assertion>,
    by_subject: HashMap<String, Vec<usize>>,
    grids: BTreeMap<String, Grid>,
}

/// Result of [`KbBuilder::build`]: the knowledge base plus everything
/// worth telling the user about the load.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub kb: KnowledgeBase,
    pub diagnostics: Vec<SourcedDiagnostic>,
}

impl Loaded {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.diagnostic.is_error())
    }
}

/// Collects parsed files; later files may extend concepts from earlier ones.
#[derive(Debug, Default)]
pub struct KbBuilder {
    sources: Vec<(String, ParsedDatabase)>,
}

impl KbBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_text(&mut self, source: &str, text: &str) -> &mut Self {
        self.add_parsed(source, parse_database(text))
    }

    pub fn add_parsed(&mut self, source: &str, parsed: ParsedDatabase) -> &mut Self {
        self.sources.push((source.to_string(), parsed));
        self
    }

    pub fn add_file(&mut self, path: impl AsRef<Path>) -> std::io::Result<&mut Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Ok(self.add_text(&path.display().to_string(), &text))
    }

    pub fn build(self) -> Loaded {
        let mut diagnostics = Vec::new();
        let mut ontology = Ontology::new();
        let mut blocks: Vec<(&str, &ObjectBlock)> = Vec::new();
        let mut grids = BTreeMap::new();

        // Pass 1: everything that is defined somewhere.
        let mut defined: HashMap<&str, (&str, usize)> = HashMap::new();
        for (source, parsed) in &self.sources {
            diagnostics.extend(
                parsed.diagnostics.iter().map(|d| SourcedDiagnostic { source: source.clone(), diagnostic: d.clone() }),
            );
            for block in &parsed.blocks {
                if let Some((first_source, first_line)) = defined.get(block.concept.as_str()) {
                    diagnostics.push(SourcedDiagnostic {
                        source: source.clone(),
                        diagnostic: Diagnostic::warning(
                            Code::DuplicateBlock,
                            block.line,
                            1,
                            format!(
                                "`{}` already defined at {first_source}:{first_line}; appending assertions",
                                block.concept
                            ),
                        ),
                    });
                } else {
                    defined.insert(&block.concept, (source, block.line));
                }
                ontology.declare(&block.concept);
                blocks.push((source, block));
            }
            for (grid, line) in parsed.grids.iter().zip(&parsed.grid_lines) {
                defined.entry(grid.name()).or_insert((source, *line));
                ontology.declare(grid.name());
                grids.insert(grid.name().to_string(), grid.clone());
            }
        }

        // Pass 2: symbols used but never defined are parked under the root.
        let mut warned: HashSet<String> = HashSet::new();
        let mut register = |ontology: &mut Ontology, symbol: &str, source: &str, line: usize, diags: &mut Vec<_>| {
            if ontology.contains(symbol) {
                return;
            }
            ontology.declare(symbol);
            if !is_builtin(symbol) && warned.insert(symbol.to_string()) {
                diags.push(SourcedDiagnostic {
                    source: source.to_string(),
                    diagnostic: Diagnostic::warning(
                        Code::UnknownSymbol,
                        line,
                        1,
                        format!("`{symbol}` is not defined; registering it under `{ROOT}`"),
                    ),
                });
            }
        };
        for (source, block) in &blocks {
            for a in &block.assertions {
                for symbol in a.symbols() {
                    register(&mut ontology, symbol, source, block.line, &mut diagnostics);
                }
            }
        }
        for (source, parsed) in &self.sources {
            for (grid, line) in parsed.grids.iter().zip(&parsed.grid_lines) {
                for concept in grid.legend_concepts() {
                    register(&mut ontology, concept, source, *line, &mut diagnostics);
                }
            }
        }

        // Pass 3: hierarchy.
        for (source, block) in &blocks {
            for a in block.assertions.iter().filter(|a| a.predicate == "ako") {
                let edge = match (a.args.first(), a.args.get(1), a.args.len()) {
                    (Some(Term::Symbol(child)), Some(Term::Symbol(parent)), 2) => Some((child, parent)),
                    _ => None,
                };
                let result = match edge {
                    Some((child, parent)) => {
                        ontology.add_parent(child, parent).map_err(|e| (Code::CycleDetected, e.to_string()))
                    }
                    None => Err((Code::SyntaxError, format!("`ako` needs exactly two symbols: {a}"))),
                };
                if let Err((code, message)) = result {
                    diagnostics.push(SourcedDiagnostic {
                        source: source.to_string(),
                        diagnostic: Diagnostic::error(code, block.line, 1, message),
                    });
                }
            }
        }
        ontology.attach_orphans();

        // Pass 4: lexicon and assertion index.
        let mut assertions = Vec::new();
        let mut by_subject: HashMap<String, Vec<usize>> = HashMap::new();
        for (_, block) in &blocks {
            for line in &block.lexicon {
                for phrase in &line.phrases {
                    ontology.link_lexeme(phrase, line.language, &block.concept).expect("block concept declared");
                }
            }
            for a in &block.assertions {
                if let Some(subject) = a.subject() {
                    by_subject.entry(subject.to_string()).or_default().push(assertions.len());
                }
                assertions.push(a.clone());
            }
        }

        Loaded { kb: KnowledgeBase { ontology, assertions, by_subject, grids }, diagnostics }
    }
}

impl KnowledgeBase {
    /// Loads in-memory `(source name, text)` pairs.
    pub fn from_texts<'a>(texts: impl IntoIterator<Item = (&'a str, &'a str)>) -> Loaded {
        let mut builder = KbBuilder::new();
        for (source, text) in texts {
            builder.add_text(source, text);
        }
        builder.build()
    }

    pub fn from_files<P: AsRef<Path>>(paths: impl IntoIterator<Item = P>) -> std::io::Result<Loaded> {
        let mut builder = KbBuilder::new();
        for p in paths {
            builder.add_file(p)?;
        }
        Ok(builder.build())
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.ontology.contains(concept)
    }

    pub fn is_a(&self, a: &str, b: &str) -> Result<bool> {
        self.ontology.is_a(a, b)
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    /// Assertions whose first argument is `concept`, in load order.
    pub fn assertions_about<'a>(&'a self, concept: &str) -> impl Iterator<Item = &'a Assertion> + 'a {
        self.by_subject.get(concept).into_iter().flatten().map(move |&i| &self.assertions[i])
    }

    pub fn grids(&self) -> impl Iterator<Item = &Grid> {
        self.grids.values()
    }

    pub fn grid(&self, name: &str) -> Option<&Grid> {
        self.grids.get(name)
    }

    /// Concepts with at least one `eventNN-of` assertion, sorted by name.
    pub fn script_concepts(&self) -> Vec<&str> {
        let set: BTreeSet<&str> = self
            .by_subject
            .iter()
            .filter(|(_, idx)| {
                idx.iter().any(|&i| matches!(Field::parse(&self.assertions[i].predicate), Some(Field::Event(_))))
            })
            .map(|(s, _)| s.as_str())
            .collect();
        set.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::Severity;
    use crate::ontology::Language;

    #[test]
    fn unknown_symbols_are_parked_under_root() {
        let loaded = KnowledgeBase::from_texts([("t", "Object blackout\n[ako ^ disaster]\n[role01-of ^ human]\n")]);
        let kb = &loaded.kb;
        assert!(kb.is_a("blackout", "disaster").unwrap());
        assert!(kb.is_a("human", ROOT).unwrap());
        let warned: Vec<_> = loaded.diagnostics.iter().filter(|d| d.diagnostic.code == Code::UnknownSymbol).collect();
        assert_eq!(warned.len(), 2, "{warned:?}");
        assert!(warned.iter().all(|d| d.diagnostic.severity == Severity::Warning));
        assert!(!loaded.has_errors());
    }

    #[test]
    fn duplicate_blocks_append() {
        let loaded = KnowledgeBase::from_texts([
            ("a", "Object x\n[color-of ^ red]\n"),
            ("b", "Object x\n[English] ex\n[size-of ^ big]\n"),
        ]);
        assert_eq!(loaded.kb.assertions_about("x").count(), 2);
        assert_eq!(loaded.kb.ontology().lookup_phrase("ex", Language::English), vec!["x"]);
        assert!(loaded.diagnostics.iter().any(|d| d.diagnostic.code == Code::DuplicateBlock && d.source == "b"));
    }

    #[test]
    fn cycles_are_load_errors() {
        let loaded = KnowledgeBase::from_texts([("t", "Object a\n[ako ^ b]\nObject b\n[ako ^ a]\n")]);
        assert!(loaded.has_errors());
        assert!(loaded.kb.is_a("a", ROOT).unwrap());
        assert!(loaded.kb.is_a("b", ROOT).unwrap());
    }

    #[test]
    fn script_concepts_need_events() {
        let loaded =
            KnowledgeBase::from_texts([("t", "Object s\n[event01-of ^ [go x]]\nObject p\n[performed-in ^ home]\n")]);
        assert_eq!(loaded.kb.script_concepts(), vec!["s"]);
    }
}
