//! Loads a file with problems and prints what the loader and checker report.

use scriptbase::script::{build_script, validate};
use scriptbase::KnowledgeBase;

const FLAWED: &str = "Object leaky-loop
[ako ^ action]
[role01-of ^ human]
[role03-of ^ plumber]
[event01-of ^ [call human plumber]]
[event02-of ^ [goto event09-of]]
[duration-of ^ NUMBER:second:-5]

Object broken
[ako ^ [nested]]
[event01-of ^ [open door
";

fn main() -> scriptbase::Result<()> {
    let loaded = KnowledgeBase::from_texts([("flawed.tt", FLAWED)]);
    for d in &loaded.diagnostics {
        println!("{d}");
    }
    let script = build_script(&loaded.kb, "leaky-loop")?;
    for finding in validate(&loaded.kb, &script) {
        println!("{finding}");
    }
    Ok(())
}
