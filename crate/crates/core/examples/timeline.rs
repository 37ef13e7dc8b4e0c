//! Expands a looping script into a flat event sequence.

use scriptbase::script::{build_script, timeline};
use scriptbase::{fixtures, KnowledgeBase};

const LOOP: &str = "Object practice-scales
[role01-of ^ human]
[event01-of ^ [play-scale ^ na]]
[event02-of ^ [rest human]]
[event02-of ^ [drink-from human na]]
[event03-of ^ [goto event01-of]]
";

fn main() -> scriptbase::Result<()> {
    let kb = KnowledgeBase::from_texts([("practice.tt", LOOP)]).kb;
    let script = build_script(&kb, "practice-scales")?;
    for limit in [0, 2] {
        println!("unroll {limit}:");
        for (step, group) in timeline(&script, limit)?.iter().enumerate() {
            let events: Vec<String> = group.events.iter().map(ToString::to_string).collect();
            println!("  {:>2}  {:02}  {}", step + 1, group.index, events.join(" + "));
        }
    }
    let mail = build_script(&fixtures::kb(), "mail-letter-at-post-office")?;
    println!("mail-letter-at-post-office: {} groups", timeline(&mail, 3)?.len());
    Ok(())
}
