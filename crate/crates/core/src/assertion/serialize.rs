use std::fmt::Write;

use crate::assertion::ObjectBlock;

/// Writes blocks back in the file format: header, one lexicon line per
/// language entry, then one assertion per line in stored order. The block's
/// own concept is written as `^`.
pub fn serialize(blocks: &[ObjectBlock]) -> String {
    let mut out = String::new();
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&serialize_block(block));
    }
    out
}

pub fn serialize_block(block: &ObjectBlock) -> String {
    let mut out = String::new();
    writeln!(out, "Object {}", block.concept).unwrap();
    for line in &block.lexicon {
        writeln!(out, "[{}] {}", line.language, line.phrases.join(", ")).unwrap();
    }
    for a in &block.assertions {
        let text = a.to_string();
        writeln!(out, "{}", self_ref(&text, &block.concept)).unwrap();
    }
    out
}

/// Replaces whole-token occurrences of `concept` with `^`.
fn self_ref(text: &str, concept: &str) -> String {
    text.split(' ')
        .map(|tok| {
            let core = tok.trim_start_matches('[').trim_end_matches(']');
            if core == concept && !tok.starts_with('[') {
                tok.replacen(concept, "^", 1)
            } else {
                tok.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
