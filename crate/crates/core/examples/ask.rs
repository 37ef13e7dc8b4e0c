//! Answers one question of each template over the bundled data.

use scriptbase::fixtures;
use scriptbase::qa::{answer, parse_question};

fn main() {
    let kb = fixtures::kb();
    for text in [
        "What does a waiter do?",
        "What is shampoo used for?",
        "Where is a minibar found?",
        "What does blackout consist of?",
        "What is the result of take a shower?",
        "Where does one mail a letter at the post office?",
        "How long does a power failure take?",
        "How often does one mail a letter at the post office?",
        "How much does eat-in-fast-food-restaurant cost?",
    ] {
        println!("> {text}");
        match parse_question(&kb, text).and_then(|q| answer(&kb, &q)) {
            Ok(a) => print!("{a}"),
            Err(e) => println!("error: {e}"),
        }
        println!();
    }
}
