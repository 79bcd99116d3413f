//! Tags and parses region phrases, then reads triples off each parse.
//!
//! `cargo run --example phrase_parsing -- "a dog catching a frisbee"`

use visual_commonsense::phrase::tokenize_and_tag;
use visual_commonsense::seen::extract_region_triples;
use visual_commonsense::{parse_phrase, Lexicon, PhraseOutcome};

fn main() {
    let lex = Lexicon::builtin();
    let args: Vec<String> = std::env::args().skip(1).collect();
    let phrases: Vec<String> = if args.is_empty() {
        [
            "man before the yellow car",
            "man hit by a yellow car",
            "car driving on the road",
            "a small car",
            "a running man",
            "the red traffic lights next to a busy city street",
            "the sky is blue",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    } else {
        args
    };

    for phrase in &phrases {
        println!("{phrase}");
        if let Ok(tokens) = tokenize_and_tag(phrase, &lex) {
            let tags: Vec<String> = tokens.iter().map(|t| format!("{}/{:?}", t.surface, t.pos)).collect();
            println!("  tags: {}", tags.join(" "));
        }
        match parse_phrase(phrase, &lex) {
            PhraseOutcome::Parsed(p) => {
                for (head, category, tail) in extract_region_triples(&p) {
                    println!("  ({head}, {category}, {tail})");
                }
            }
            PhraseOutcome::Empty => println!("  empty"),
            PhraseOutcome::Unparseable => println!("  outside the grammar, skipped"),
        }
    }
}
