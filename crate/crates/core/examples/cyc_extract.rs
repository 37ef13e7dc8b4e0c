//! Pulls event tuples out of logical rules and summarizes them.

use scriptbase::cycextract::{event_census, extract_all, parse_forms};
use scriptbase::fixtures;

fn main() {
    let parsed = parse_forms(fixtures::CYC_RULES);
    let known = fixtures::cyc_events();
    let tuples = extract_all(&parsed.forms, &known);
    for t in &tuples {
        println!("{t}");
    }
    let census = event_census(&tuples);
    for row in &census.rows {
        println!(
            "{}: {} subevents, {} roles, {} places, {} other",
            row.script, row.subevents, row.roles, row.places, row.other
        );
    }
    if let Some(s) = census.summary {
        println!("{s}");
    }
}
