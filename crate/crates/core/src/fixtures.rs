//! Data bundled with the crate.

use std::collections::BTreeSet;

use crate::kb::{KnowledgeBase, Loaded};

pub const ONTOLOGY: &str = include_str!("../data/ontology.tt");
pub const BLACKOUT: &str = include_str!("../data/published/blackout.tt");
pub const MAIL_LETTER_AT_POST_OFFICE: &str = include_str!("../data/published/mail-letter-at-post-office.tt");
pub const HAVE_FILLING_DONE: &str = include_str!("../data/published/have-filling-done.tt");
pub const EXTRA_SCRIPTS: &str = include_str!("../data/extra.tt");
pub const HOTEL_ROOM1: &str = include_str!("../data/hotel-room1.tt");
pub const CYC_RULES: &str = include_str!("../data/cyc/rules.lisp");
pub const CYC_EVENTS: &str = include_str!("../data/cyc/events.txt");

/// Every knowledge-base file, as `(file name, text)` in load order.
pub const KB_FILES: [(&str, &str); 6] = [
    ("ontology.tt", ONTOLOGY),
    ("blackout.tt", BLACKOUT),
    ("mail-letter-at-post-office.tt", MAIL_LETTER_AT_POST_OFFICE),
    ("have-filling-done.tt", HAVE_FILLING_DONE),
    ("extra.tt", EXTRA_SCRIPTS),
    ("hotel-room1.tt", HOTEL_ROOM1),
];

/// The three scripts with published listings.
pub const CENSUS_FILES: [(&str, &str); 3] = [
    ("blackout.tt", BLACKOUT),
    ("mail-letter-at-post-office.tt", MAIL_LETTER_AT_POST_OFFICE),
    ("have-filling-done.tt", HAVE_FILLING_DONE),
];

pub fn load() -> Loaded {
    KnowledgeBase::from_texts(KB_FILES)
}

pub fn kb() -> KnowledgeBase {
    load().kb
}

pub fn cyc_events() -> BTreeSet<String> {
    crate::cycextract::parse_event_list(CYC_EVENTS)
}
