//! Lists the eleven categories and maps part-of-speech classes onto the seen layer.

use visual_commonsense::taxonomy::{kb_relation_to_category, pos_to_seen_category, Voice, WordClass};
use visual_commonsense::{parse_category, CategoryPath};

fn main() {
    for c in CategoryPath::ALL {
        println!("{:2}  {}", c.index(), c);
    }

    let parsed = parse_category("/Unseen/Action/UsedFor").unwrap();
    assert_eq!(parsed, CategoryPath::UNSEEN_USED_FOR);
    assert!(parse_category("/Seen/Action/UsedFor").is_err());

    for (class, voice) in [
        (WordClass::Adjective, Voice::None),
        (WordClass::Preposition, Voice::None),
        (WordClass::Verb, Voice::Active),
        (WordClass::Verb, Voice::Passive),
        (WordClass::Determiner, Voice::None),
    ] {
        match pos_to_seen_category(class, voice) {
            Some(c) => println!("{class:?}/{voice:?} -> {c}"),
            None => println!("{class:?}/{voice:?} -> not mapped"),
        }
    }

    println!("KB UsedFor -> {:?}", kb_relation_to_category("UsedFor").map(|c| c.to_string()));
    println!("KB IsA     -> {:?}", kb_relation_to_category("IsA").map(|c| c.to_string()));
}
