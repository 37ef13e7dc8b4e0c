//! Property checks shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use scriptbase::assertion::parse_database;
use scriptbase::cycextract::parse_forms;
use scriptbase::fixtures;
use scriptbase::grid::parse_grid;
use scriptbase::recognizer::{score_scripts, Activation, ActivationSet, ScoreOptions};
use scriptbase::script::{build_script, timeline};
use scriptbase::{KnowledgeBase, Language, Ontology};

pub const CASES: u32 = 1000;

// ---- is_a against a brute-force closure ----

/// A random DAG: node `i` may only take parents with smaller indices.
#[derive(Debug, Clone)]
pub struct Dag {
    pub parents: Vec<Vec<usize>>,
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
}

pub fn dag() -> impl Strategy<Value = Dag> {
    (1usize..=200).prop_flat_map(|n| {
        let parents = (0..n)
            .map(|i| if i == 0 { Just(Vec::new()).boxed() } else { prop::collection::vec(0..i, 0..=3).boxed() })
            .collect::<Vec<_>>();
        (parents, prop::collection::vec((0..n, 0..n), 64), prop::collection::vec((0..n, 0..n, 0..n), 32))
            .prop_map(|(parents, pairs, triples)| Dag { parents, pairs, triples })
    })
}

fn node(i: usize) -> String {
    format!("n{i}")
}

/// `reach[a]` holds every node `a` can climb to, itself included.
fn closure(parents: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    let mut reach: Vec<BTreeSet<usize>> = Vec::with_capacity(parents.len());
    for (i, ps) in parents.iter().enumerate() {
        let mut set = BTreeSet::from([i]);
        for &p in ps {
            set.extend(reach[p].iter().copied());
        }
        reach.push(set);
    }
    reach
}

pub fn check_is_a(d: &Dag) -> Result<(), TestCaseError> {
    let mut o = Ontology::new();
    for (i, ps) in d.parents.iter().enumerate() {
        let names: Vec<String> = ps.iter().map(|&p| node(p)).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        o.add_concept(&node(i), &refs).map_err(|e| TestCaseError::fail(e.to_string()))?;
    }
    let reach = closure(&d.parents);
    for i in 0..d.parents.len() {
        prop_assert!(o.is_a(&node(i), &node(i)).unwrap());
        prop_assert!(o.is_a(&node(i), "concept").unwrap());
    }
    for &(a, b) in &d.pairs {
        prop_assert_eq!(o.is_a(&node(a), &node(b)).unwrap(), reach[a].contains(&b), "is_a(n{}, n{})", a, b);
    }
    for &(a, b, c) in &d.triples {
        if o.is_a(&node(a), &node(b)).unwrap() && o.is_a(&node(b), &node(c)).unwrap() {
            prop_assert!(o.is_a(&node(a), &node(c)).unwrap());
        }
    }
    // Closing a cycle is refused.
    for &(a, b) in &d.pairs {
        if a != b && reach[a].contains(&b) {
            prop_assert!(o.add_parent(&node(b), &node(a)).is_err());
        }
    }
    Ok(())
}

// ---- recognizer scoring ----

pub fn concept_names(kb: &KnowledgeBase) -> Vec<String> {
    kb.ontology().names().map(str::to_string).collect()
}

fn activations(names: &[String], picks: &[usize]) -> ActivationSet {
    ActivationSet {
        items: picks
            .iter()
            .map(|&i| {
                let c = names[i % names.len()].clone();
                Activation { concept: c.clone(), span: (0, 0), surface: c.clone(), phrase: c }
            })
            .collect(),
    }
}

pub fn picks() -> impl Strategy<Value = (Vec<usize>, usize, bool)> {
    (prop::collection::vec(any::<usize>(), 0..8), any::<usize>(), any::<bool>())
}

pub fn check_scoring(
    kb: &KnowledgeBase,
    names: &[String],
    (base, extra, generalization): &(Vec<usize>, usize, bool),
) -> Result<(), TestCaseError> {
    let options = ScoreOptions { generalization: *generalization, ..ScoreOptions::default() };
    let before = score_scripts(&activations(names, base), kb, options);
    for r in &before {
        prop_assert_eq!(r.score, r.evidence.len() as f64);
        let distinct: BTreeSet<&String> = r.evidence.iter().collect();
        prop_assert_eq!(distinct.len(), r.evidence.len());
    }
    let mut more = base.clone();
    more.push(*extra);
    let after = score_scripts(&activations(names, &more), kb, options);
    for r in &before {
        let grown = after.iter().find(|x| x.script == r.script);
        prop_assert!(grown.is_some_and(|g| g.score >= r.score), "{} dropped", r.script);
    }
    Ok(())
}

// ---- timeline length bound ----

/// `(groups, unroll)`: each group is either some events or a jump target.
pub fn looping_script() -> impl Strategy<Value = (Vec<Result<u8, u8>>, usize)> {
    (1u8..=8).prop_flat_map(|n| {
        (prop::collection::vec(prop_oneof![(1u8..=3).prop_map(Ok), (1..=n).prop_map(Err)], n as usize), 0usize..6)
    })
}

pub fn check_timeline((groups, unroll): &(Vec<Result<u8, u8>>, usize)) -> Result<(), TestCaseError> {
    let mut text = String::from("Object s\n");
    for (i, g) in groups.iter().enumerate() {
        let idx = i + 1;
        match g {
            Ok(k) => {
                for e in 0..*k {
                    text.push_str(&format!("[event{idx:02}-of ^ [step{idx} e{e}]]\n"));
                }
            }
            Err(t) => text.push_str(&format!("[event{idx:02}-of ^ [goto event{t:02}-of]]\n")),
        }
    }
    let kb = KnowledgeBase::from_texts([("t", text.as_str())]).kb;
    let script = build_script(&kb, "s").map_err(|e| TestCaseError::fail(e.to_string()))?;
    let steps = timeline(&script, *unroll).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let event_groups = groups.iter().filter(|g| g.is_ok()).count();
    prop_assert!(steps.len() <= event_groups * (unroll + 1), "{} > {} x {}", steps.len(), event_groups, unroll + 1);
    Ok(())
}

// ---- lexicon consistency ----

pub fn links() -> impl Strategy<Value = Vec<(usize, bool, usize)>> {
    prop::collection::vec((0usize..12, any::<bool>(), 0usize..10), 0..40)
}

const PHRASES: [&str; 12] = [
    "orange",
    "Orange",
    "power failure",
    "panne de courant",
    "bed",
    "lit",
    "hair",
    "Hair",
    "été",
    "black out",
    "x",
    "y z",
];

pub fn check_lexicon(links: &[(usize, bool, usize)]) -> Result<(), TestCaseError> {
    let mut o = Ontology::new();
    for c in 0..10 {
        o.add_concept(&format!("c{c}"), &[]).unwrap();
    }
    for &(p, french, c) in links {
        let lang = if french { Language::French } else { Language::English };
        o.link_lexeme(PHRASES[p], lang, &format!("c{c}")).unwrap();
    }
    for lang in Language::ALL {
        for c in 0..10 {
            let concept = format!("c{c}");
            for p in o.lexemes_of(&concept, lang).unwrap() {
                prop_assert!(o.lookup_phrase(p, lang).contains(&concept.as_str()));
            }
        }
        for p in PHRASES {
            for c in o.lookup_phrase(p, lang) {
                let forms = o.lexemes_of(c, lang).unwrap();
                prop_assert!(forms.iter().any(|f| o.lookup_phrase(f, lang).contains(&c)));
                prop_assert!(forms.iter().any(|f| o.lookup_phrase(f, lang) == o.lookup_phrase(p, lang)));
            }
        }
    }
    Ok(())
}

// ---- parser totality ----

#[derive(Debug, Clone)]
pub enum Edit {
    Delete(usize, usize),
    Insert(usize, String),
    Duplicate(usize, usize),
}

pub fn mutated_text() -> impl Strategy<Value = (usize, Vec<Edit>)> {
    let edit = prop_oneof![
        (any::<usize>(), 0usize..20).prop_map(|(a, n)| Edit::Delete(a, n)),
        (any::<usize>(), "[\\[\\]\\(\\)^:;,. \n=/a-zA-Z0-9é&-]{1,6}").prop_map(|(a, s)| Edit::Insert(a, s)),
        (any::<usize>(), 0usize..40).prop_map(|(a, n)| Edit::Duplicate(a, n)),
    ];
    (0usize..fixture_texts().len(), prop::collection::vec(edit, 1..6))
}

pub fn fixture_texts() -> Vec<&'static str> {
    let mut v: Vec<&str> = fixtures::KB_FILES.iter().map(|(_, t)| *t).collect();
    v.push(fixtures::CYC_RULES);
    v
}

fn boundary(s: &str, at: usize) -> usize {
    let mut i = at % (s.len() + 1);
    while !s.is_char_boundary(i) {
        i -= 1;
    }
    i
}

pub fn apply(text: &str, edits: &[Edit]) -> String {
    let mut s = text.to_string();
    for e in edits {
        match e {
            Edit::Delete(a, n) => {
                let start = boundary(&s, *a);
                let end = boundary(&s, (start + n).min(s.len()));
                s.replace_range(start..end.max(start), "");
            }
            Edit::Insert(a, t) => {
                let at = boundary(&s, *a);
                s.insert_str(at, t);
            }
            Edit::Duplicate(a, n) => {
                let start = boundary(&s, *a);
                let end = boundary(&s, (start + n).min(s.len())).max(start);
                let piece = s[start..end].to_string();
                s.insert_str(end, &piece);
            }
        }
    }
    s
}

pub fn check_parser_totality((which, edits): &(usize, Vec<Edit>)) -> Result<(), TestCaseError> {
    let text = apply(fixture_texts()[*which], edits);
    let parsed = parse_database(&text);
    for d in &parsed.diagnostics {
        prop_assert!(d.line >= 1 && d.col >= 1, "{:?}", d);
    }
    // Whatever survived parsing must load and reserialize.
    let _ = KnowledgeBase::from_texts([("m", text.as_str())]);
    let again = parse_database(&parsed.to_text());
    prop_assert!(!again.has_errors(), "{:?}\n{}", again.diagnostics, parsed.to_text());
    prop_assert!(parsed.same_content(&again), "not a fixpoint:\n{}", parsed.to_text());
    let _ = parse_grid(&text);
    let _ = parse_forms(&text);
    Ok(())
}
