//! A knowledge base of commonsense scripts: stereotyped activities with
//! numbered roles, ordered events, entry conditions, results, goals,
//! emotions, places, duration, frequency and cost, plus an English/French
//! lexicon linking words and phrases to concepts.
//!
//! ```
//! use scriptbase::{KnowledgeBase, script};
//!
//! let text = "Object blackout
//! [English] power failure, blackout
//! [ako ^ disaster]
//! [event01-of ^ [electronic-device-broken electricity-network]]
//! [event02-of ^ [fetch-from human na light-source]]
//! [role01-of ^ human]
//! [role02-of ^ electricity-network]
//! ";
//! let loaded = KnowledgeBase::from_texts([("blackout.tt", text)]);
//! let kb = loaded.kb;
//! let s = script::build_script(&kb, "blackout").unwrap();
//! assert_eq!(s.roles.len(), 2);
//! assert!(kb.is_a("blackout", "disaster").unwrap());
//! ```

pub mod assertion;
pub mod cli;
pub mod cycextract;
pub mod diagnostics;
mod error;
pub mod fixtures;
pub mod grid;
pub mod kb;
pub mod ontology;
pub mod qa;
pub mod recognizer;
pub mod script;
pub mod stats;

pub use assertion::{Assertion, Measure, ObjectBlock, Term};
pub use diagnostics::{Diagnostic, Severity};
pub use error::{Error, Result};
pub use grid::Grid;
pub use kb::{KbBuilder, KnowledgeBase, Loaded};
pub use ontology::{Language, Ontology};
pub use script::Script;
