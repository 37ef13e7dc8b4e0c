//! Concept hierarchy and bilingual lexicon.
//!
//! Concepts form a single-rooted DAG under [`ROOT`]. A concept may have
//! several parents; edges that would close a cycle are refused. Lexical
//! entries are `(phrase, language)` pairs linked many-to-many with concepts.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Name of the root concept.
pub const ROOT: &str = "concept";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConceptId(u32);

impl ConceptId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Language {
    English,
    French,
}

impl Language {
    pub const ALL: [Language; 2] = [Language::English, Language::French];
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::English => "English",
            Language::French => "French",
        })
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "English" | "english" | "en" => Ok(Language::English),
            "French" | "french" | "fr" => Ok(Language::French),
            other => Err(format!("unknown language `{other}`")),
        }
    }
}

#[derive(Debug, Clone)]
struct Node {
    name: String,
    parents: Vec<ConceptId>,
    lexemes: Vec<(Language, String)>,
}

/// Lowercases the first character only; everything else is matched exactly.
pub(crate) fn phrase_key(phrase: &str) -> String {
    let mut chars = phrase.chars();
    match chars.next() {
        Some(first) => first.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

#[derive(Debug, Clone)]
pub struct Ontology {
    nodes: Vec<Node>,
    by_name: HashMap<String, ConceptId>,
    lexicon: HashMap<(Language, String), Vec<ConceptId>>,
}

impl Default for Ontology {
    fn default() -> Self {
        Self::new()
    }
}

impl Ontology {
    /// An ontology holding only the root concept.
    pub fn new() -> Self {
        let mut ontology = Ontology { nodes: Vec::new(), by_name: HashMap::new(), lexicon: HashMap::new() };
        ontology.push(ROOT);
        ontology
    }

    fn push(&mut self, name: &str) -> ConceptId {
        let id = ConceptId(self.nodes.len() as u32);
        self.nodes.push(Node { name: name.to_string(), parents: Vec::new(), lexemes: Vec::new() });
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> ConceptId {
        ConceptId(0)
    }

    pub fn id(&self, name: &str) -> Option<ConceptId> {
        self.by_name.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.by_name.contains_key(name)
    }

    fn require(&self, name: &str) -> Result<ConceptId> {
        self.id(name).ok_or_else(|| Error::UnknownConcept(name.to_string()))
    }

    pub fn name(&self, id: ConceptId) -> &str {
        &self.nodes[id.index()].name
    }

    /// All concept names in insertion order.
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.nodes.iter().map(|n| n.name.as_str())
    }

    pub fn parents(&self, name: &str) -> Result<Vec<&str>> {
        let id = self.require(name)?;
        Ok(self.nodes[id.index()].parents.iter().map(|&p| self.name(p)).collect())
    }

    /// Registers a concept under existing parents. A concept given no
    /// parents is placed directly under the root.
    pub fn add_concept(&mut self, name: &str, parents: &[&str]) -> Result<ConceptId> {
        if self.contains(name) {
            return Err(Error::DuplicateConcept(name.to_string()));
        }
        let parent_ids = parents
            .iter()
            .map(|p| self.id(p).ok_or_else(|| Error::UnknownParent(p.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let id = self.push(name);
        if parent_ids.is_empty() {
            let root = self.root();
            self.nodes[id.index()].parents.push(root);
        } else {
            for p in parent_ids {
                if !self.nodes[id.index()].parents.contains(&p) {
                    self.nodes[id.index()].parents.push(p);
                }
            }
        }
        Ok(id)
    }

    /// Registers `name` with no parents if it is not already present.
    /// Used by the loader, which attaches parents afterwards and calls
    /// [`Ontology::attach_orphans`] once every file is in.
    pub fn declare(&mut self, name: &str) -> ConceptId {
        match self.id(name) {
            Some(id) => id,
            None => self.push(name),
        }
    }

    /// Adds a parent edge; both concepts must already exist.
    pub fn add_parent(&mut self, child: &str, parent: &str) -> Result<()> {
        let c = self.require(child)?;
        let p = self.id(parent).ok_or_else(|| Error::UnknownParent(parent.to_string()))?;
        if c == self.root() || self.reaches(p, c) {
            return Err(Error::CycleDetected { child: child.to_string(), parent: parent.to_string() });
        }
        let parents = &mut self.nodes[c.index()].parents;
        if !parents.contains(&p) {
            parents.push(p);
            // A concept that was parked under the root by default loses that
            // link once it gets a real parent.
            let root = ConceptId(0);
            if p != root {
                parents.retain(|&x| x != root);
            }
        }
        Ok(())
    }

    /// Puts every parentless non-root concept under the root.
    pub fn attach_orphans(&mut self) {
        for node in self.nodes.iter_mut().skip(1) {
            if node.parents.is_empty() {
                node.parents.push(ConceptId(0));
            }
        }
    }

    fn reaches(&self, from: ConceptId, to: ConceptId) -> bool {
        if from == to {
            return true;
        }
        let mut seen = HashSet::new();
        let mut stack = vec![from];
        while let Some(id) = stack.pop() {
            if id == to {
                return true;
            }
            if seen.insert(id) {
                stack.extend(self.nodes[id.index()].parents.iter().copied());
            }
        }
        false
    }

    /// Reflexive, transitive ISA test.
    pub fn is_a(&self, a: &str, b: &str) -> Result<bool> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        Ok(self.reaches(a, b))
    }

    /// Like [`Ontology::is_a`] but only follows at most `max_hops` parent links.
    pub fn is_a_within(&self, a: &str, b: &str, max_hops: usize) -> Result<bool> {
        let a = self.require(a)?;
        let b = self.require(b)?;
        let mut frontier = vec![a];
        let mut seen = HashSet::from([a]);
        for hop in 0..=max_hops {
            if frontier.contains(&b) {
                return Ok(true);
            }
            if hop == max_hops {
                break;
            }
            let mut next = Vec::new();
            for id in frontier {
                for &p in &self.nodes[id.index()].parents {
                    if seen.insert(p) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        Ok(false)
    }

    /// Proper ancestors of `name`, grouped into strata by longest distance
    /// from `name` and ordered by discovery within a stratum. The root is
    /// always alone in the final stratum.
    pub fn ancestors(&self, name: &str) -> Result<Vec<&str>> {
        let start = self.require(name)?;

        // Breadth-first discovery of the ancestor set.
        let mut order = Vec::new();
        let mut discovered = HashMap::from([(start, 0usize)]);
        let mut queue = VecDeque::from([start]);
        while let Some(id) = queue.pop_front() {
            for &p in &self.nodes[id.index()].parents {
                if let std::collections::hash_map::Entry::Vacant(slot) = discovered.entry(p) {
                    slot.insert(order.len() + 1);
                    order.push(p);
                    queue.push_back(p);
                }
            }
        }

        // Longest path from `start`, computed in topological order.
        let mut pending: HashMap<ConceptId, usize> = HashMap::new();
        for &id in std::iter::once(&start).chain(order.iter()) {
            for &p in &self.nodes[id.index()].parents {
                *pending.entry(p).or_default() += 1;
            }
        }
        let mut depth: HashMap<ConceptId, usize> = HashMap::from([(start, 0)]);
        let mut ready = vec![start];
        while let Some(id) = ready.pop() {
            let d = depth[&id];
            for &p in &self.nodes[id.index()].parents {
                let entry = depth.entry(p).or_default();
                *entry = (*entry).max(d + 1);
                let left = pending.get_mut(&p).expect("parent counted");
                *left -= 1;
                if *left == 0 {
                    ready.push(p);
                }
            }
        }

        let mut result = order;
        result.sort_by_key(|id| (depth[id], discovered[id]));
        Ok(result.into_iter().map(|id| self.name(id)).collect())
    }

    /// Links a phrase to a concept. Repeating a link is a no-op.
    pub fn link_lexeme(&mut self, phrase: &str, language: Language, concept: &str) -> Result<()> {
        let id = self.require(concept)?;
        let node = &mut self.nodes[id.index()];
        if node.lexemes.iter().any(|(l, p)| *l == language && p == phrase) {
            return Ok(());
        }
        node.lexemes.push((language, phrase.to_string()));
        let linked = self.lexicon.entry((language, phrase_key(phrase))).or_default();
        if !linked.contains(&id) {
            linked.push(id);
        }
        Ok(())
    }

    /// Concepts linked to `phrase`, in link order. Unknown phrases give an
    /// empty list.
    pub fn lookup_phrase(&self, phrase: &str, language: Language) -> Vec<&str> {
        self.lexicon
            .get(&(language, phrase_key(phrase)))
            .map(|ids| ids.iter().map(|&id| self.name(id)).collect())
            .unwrap_or_default()
    }

    pub fn lexemes_of(&self, concept: &str, language: Language) -> Result<Vec<&str>> {
        let id = self.require(concept)?;
        Ok(self.nodes[id.index()].lexemes.iter().filter(|(l, _)| *l == language).map(|(_, p)| p.as_str()).collect())
    }

    /// Number of distinct `(language, phrase)` entries in the lexicon.
    pub fn lexicon_len(&self) -> usize {
        self.nodes.iter().map(|n| n.lexemes.len()).sum()
    }
}
