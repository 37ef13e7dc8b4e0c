//! Parses an object block and prints the script view built from it.

use scriptbase::script::build_script;
use scriptbase::{fixtures, KnowledgeBase};

fn main() -> scriptbase::Result<()> {
    let loaded = KnowledgeBase::from_texts(fixtures::KB_FILES);
    let kb = &loaded.kb;
    let script = build_script(kb, "blackout")?;
    println!("script {}", script.concept);
    for (i, role) in &script.roles {
        println!("  role {i:02}: {role}");
    }
    for group in &script.events {
        for event in &group.events {
            println!("  event {:02}: {event}", group.index);
        }
    }
    println!("  places: {}", script.places.join(", "));
    if let Some(d) = &script.duration {
        println!("  duration: {d}");
    }
    println!("ancestors: {:?}", kb.ontology().ancestors("blackout")?);
    Ok(())
}
