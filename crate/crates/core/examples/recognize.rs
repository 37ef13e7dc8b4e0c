//! Ranks scripts against a few sentences, with and without generalization.

use scriptbase::recognizer::{activate, recognize, ScoreOptions};
use scriptbase::{fixtures, Language};

fn main() {
    let kb = fixtures::kb();
    let inputs = [
        ("He rinsed the shampoo out of his hair.", Language::English),
        ("The poodle pulled on its leash.", Language::English),
        ("Panne de courant : il cherche une bougie dans la maison.", Language::French),
    ];
    for (text, lang) in inputs {
        println!("> {text}");
        let concepts: Vec<String> = activate(text, lang, &kb).concepts().iter().map(|c| c.to_string()).collect();
        println!("  concepts: {}", concepts.join(", "));
        for r in recognize(text, lang, &kb, ScoreOptions::default()) {
            println!("  {r}");
        }
    }
    let exact = ScoreOptions { generalization: false, max_hops: None };
    println!("> without generalization:");
    for r in recognize("The poodle pulled on its leash.", Language::English, &kb, exact) {
        println!("  {r}");
    }
}
