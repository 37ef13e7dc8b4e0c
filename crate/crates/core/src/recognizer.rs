//! Guessing which scripts a piece of text is about.
//!
//! Words and phrases in the text activate concepts through the lexicon.
//! Each script is then scored by how many distinct activated concepts it
//! mentions, either directly or (with generalization on) through an
//! ancestor of the activated concept.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::kb::KnowledgeBase;
use crate::ontology::Language;
use crate::script::{build_script, Script};

/// Longest phrase, in tokens, tried against the lexicon.
pub const MAX_PHRASE_TOKENS: usize = 4;

const STOPWORDS_EN: &str = include_str!("../data/stopwords-en.txt");

fn stopwords() -> &'static BTreeSet<&'static str> {
    static WORDS: OnceLock<BTreeSet<&'static str>> = OnceLock::new();
    WORDS.get_or_init(|| STOPWORDS_EN.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with(';')).collect())
}

pub fn is_stopword(word: &str) -> bool {
    stopwords().contains(word.to_lowercase().as_str())
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    start: usize,
    end: usize,
}

/// Words are runs of alphanumerics, with inner apostrophes and hyphens.
fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    for (i, &(pos, c)) in chars.iter().enumerate() {
        let joiner = (c == '\'' || c == '-' || c == '’')
            && start.is_some()
            && chars.get(i + 1).is_some_and(|(_, n)| n.is_alphanumeric());
        if c.is_alphanumeric() || joiner {
            start.get_or_insert(pos);
        } else if let Some(s) = start.take() {
            out.push(Token { text: &text[s..pos], start: s, end: pos });
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &text[s..], start: s, end: text.len() });
    }
    out
}

/// Candidate base forms after naive suffix stripping.
fn stems(word: &str) -> Vec<String> {
    let mut out = Vec::new();
    for suffix in ["ing", "ed", "es", "s"] {
        if let Some(base) = word.strip_suffix(suffix) {
            if base.chars().count() >= 2 {
                out.push(base.to_string());
                // poured -> pour, but baked -> bake
                if suffix == "ed" || suffix == "ing" {
                    out.push(format!("{base}e"));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Activation {
    pub concept: String,
    /// Byte span of the matched words in the input.
    pub span: (usize, usize),
    pub surface: String,
    /// Lexicon phrase that matched (after any suffix stripping).
    pub phrase: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ActivationSet {
    pub items: Vec<Activation>,
}

impl ActivationSet {
    /// Distinct activated concepts in order of first activation.
    pub fn concepts(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for a in &self.items {
            if !out.contains(&a.concept.as_str()) {
                out.push(&a.concept);
            }
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Greedy longest match of up to [`MAX_PHRASE_TOKENS`] words against the
/// lexicon, left to right. Single words that miss are retried with common
/// suffixes removed. Stop words never activate anything on their own.
pub fn activate(text: &str, language: Language, kb: &KnowledgeBase) -> ActivationSet {
    let lexicon = kb.ontology();
    let tokens = tokenize(text);
    let mut items = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut matched = None;
        for n in (1..=MAX_PHRASE_TOKENS.min(tokens.len() - i)).rev() {
            let words = &tokens[i..i + n];
            if n == 1 && language == Language::English && is_stopword(words[0].text) {
                break;
            }
            let phrase = words.iter().map(|t| t.text).collect::<Vec<_>>().join(" ");
            let mut concepts = lexicon.lookup_phrase(&phrase, language);
            let mut used = phrase.clone();
            if concepts.is_empty() && n == 1 {
                let lowered = phrase.to_lowercase();
                for stem in stems(&lowered) {
                    concepts = lexicon.lookup_phrase(&stem, language);
                    if !concepts.is_empty() {
                        used = stem;
                        break;
                    }
                }
            }
            if !concepts.is_empty() {
                matched = Some((n, used, concepts));
                break;
            }
        }
        match matched {
            Some((n, phrase, concepts)) => {
                let (start, end) = (tokens[i].start, tokens[i + n - 1].end);
                for concept in concepts {
                    items.push(Activation {
                        concept: concept.to_string(),
                        span: (start, end),
                        surface: text[start..end].to_string(),
                        phrase: phrase.clone(),
                    });
                }
                i += n;
            }
            None => i += 1,
        }
    }
    ActivationSet { items }
}

/// Every concept a script refers to: roles, event predicates and
/// arguments (nested ones included, `na` excluded) and places.
pub fn mention_set(script: &Script) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = script.roles.values().cloned().collect();
    for g in &script.events {
        for ev in &g.events {
            out.extend(ev.symbols().into_iter().map(str::to_string));
        }
    }
    out.extend(script.places.iter().cloned());
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoreOptions {
    /// Let an activated concept support scripts that mention one of its
    /// ancestors.
    pub generalization: bool,
    /// Upper bound on parent links followed when generalizing.
    pub max_hops: Option<usize>,
}

impl Default for ScoreOptions {
    fn default() -> Self {
        ScoreOptions { generalization: true, max_hops: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecognitionResult {
    pub script: String,
    pub score: f64,
    pub evidence: Vec<String>,
}

/// `score 2.0 for script take-shower based on shampoo, hair`
impl fmt::Display for RecognitionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "score {:.1} for script {} based on {}", self.score, self.script, self.evidence.join(", "))
    }
}

fn supports(kb: &KnowledgeBase, activated: &str, mentions: &BTreeSet<String>, options: ScoreOptions) -> bool {
    if mentions.contains(activated) {
        return true;
    }
    if !options.generalization {
        return false;
    }
    mentions.iter().any(|m| match options.max_hops {
        Some(h) => kb.ontology().is_a_within(activated, m, h).unwrap_or(false),
        None => kb.is_a(activated, m).unwrap_or(false),
    })
}

/// Scores every script against the activations. Each distinct supporting
/// concept adds 1.0. Results are ordered by score, then script name;
/// scripts with no support are left out.
pub fn score_scripts(activations: &ActivationSet, kb: &KnowledgeBase, options: ScoreOptions) -> Vec<RecognitionResult> {
    let concepts = activations.concepts();
    if concepts.is_empty() {
        return Vec::new();
    }
    let mut results = Vec::new();
    for name in kb.script_concepts() {
        // Scripts with malformed fields simply cannot be recognized.
        let Ok(script) = build_script(kb, name) else { continue };
        let mentions = mention_set(&script);
        let evidence: Vec<String> =
            concepts.iter().filter(|c| supports(kb, c, &mentions, options)).map(|c| c.to_string()).collect();
        if !evidence.is_empty() {
            results.push(RecognitionResult { script: name.to_string(), score: evidence.len() as f64, evidence });
        }
    }
    results.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.script.cmp(&b.script)));
    results
}

/// [`activate`] followed by [`score_scripts`].
pub fn recognize(text: &str, language: Language, kb: &KnowledgeBase, options: ScoreOptions) -> Vec<RecognitionResult> {
    score_scripts(&activate(text, language, kb), kb, options)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kb() -> KnowledgeBase {
        let text = "Object blackout
[English] power failure, blackout
[role01-of ^ human]
[event01-of ^ [electronic-device-broken electricity-network]]
[event02-of ^ [fetch-from human na light-source]]
[performed-in ^ house]
Object power
[English] power
Object failure
[English] failure
Object cake
[English] cake
Object bake-cake
[English] bake
[event01-of ^ [bake human cake]]
";
        KnowledgeBase::from_texts([("t", text)]).kb
    }

    #[test]
    fn tokens() {
        let t: Vec<_> = tokenize("John's dog-walker, ate.").into_iter().map(|t| t.text).collect();
        assert_eq!(t, vec!["John's", "dog-walker", "ate"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("  ...  ").is_empty());
    }

    #[test]
    fn longest_phrase_wins() {
        let kb = kb();
        let acts = activate("A power failure hit.", Language::English, &kb);
        assert_eq!(acts.concepts(), vec!["blackout"]);
        assert_eq!(acts.items[0].surface, "power failure");
        assert_eq!(acts.items[0].span, (2, 15));
        let acts = activate("power", Language::English, &kb);
        assert_eq!(acts.concepts(), vec!["power"]);
    }

    #[test]
    fn suffixes_and_case() {
        let kb = kb();
        assert_eq!(activate("Cakes", Language::English, &kb).concepts(), vec!["cake"]);
        assert_eq!(activate("baked", Language::English, &kb).concepts(), vec!["bake-cake"]);
        assert_eq!(activate("baking", Language::English, &kb).concepts(), vec!["bake-cake"]);
        assert!(activate("", Language::English, &kb).is_empty());
    }

    #[test]
    fn mentions_skip_na() {
        let kb = kb();
        let s = build_script(&kb, "blackout").unwrap();
        let m = mention_set(&s);
        for c in ["human", "electricity-network", "fetch-from", "light-source", "house", "electronic-device-broken"] {
            assert!(m.contains(c), "{c}");
        }
        assert!(!m.contains("na"));
    }

    #[test]
    fn rendering() {
        let r = RecognitionResult {
            script: "take-shower".into(),
            score: 2.0,
            evidence: vec!["shampoo".into(), "hair".into()],
        };
        assert_eq!(r.to_string(), "score 2.0 for script take-shower based on shampoo, hair");
    }
}
