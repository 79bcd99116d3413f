//! Word lists that drive the tagger and the lemmatizer.
//!
//! Each list is a plain UTF-8 file with one entry per line (`word` or
//! `word<TAB>lemma`). Everything after a `#` is a comment. A directory passed
//! to [`Lexicon::load_dir`] may override any subset of the files below; the
//! rest fall back to the bundled lists.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub const DETERMINERS_FILE: &str = "determiners.txt";
pub const PREPOSITIONS_FILE: &str = "prepositions.txt";
pub const ADJECTIVES_FILE: &str = "adjectives.txt";
pub const IRREGULAR_PARTICIPLES_FILE: &str = "irregular_participles.txt";
pub const IRREGULAR_PLURALS_FILE: &str = "irregular_plurals.txt";
pub const KNOWN_NOUNS_FILE: &str = "known_nouns.txt";
pub const FUNCTION_WORDS_FILE: &str = "function_words.txt";

const BUILTIN_DETERMINERS: &str = include_str!("../lexicon/determiners.txt");
const BUILTIN_PREPOSITIONS: &str = include_str!("../lexicon/prepositions.txt");
const BUILTIN_ADJECTIVES: &str = include_str!("../lexicon/adjectives.txt");
const BUILTIN_PARTICIPLES: &str = include_str!("../lexicon/irregular_participles.txt");
const BUILTIN_PLURALS: &str = include_str!("../lexicon/irregular_plurals.txt");
const BUILTIN_NOUNS: &str = include_str!("../lexicon/known_nouns.txt");
const BUILTIN_FUNCTION_WORDS: &str = include_str!("../lexicon/function_words.txt");

#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    pub determiners: HashSet<String>,
    /// May hold multi-word prepositions ("in front of").
    pub prepositions: HashSet<String>,
    pub adjectives: HashSet<String>,
    pub irregular_participles: HashMap<String, String>,
    pub irregular_plurals: HashMap<String, String>,
    /// Noun lemmas, including multi-word compound heads ("traffic light").
    pub known_nouns: HashSet<String>,
    /// Closed-class words the phrase grammar does not cover (copulas,
    /// conjunctions, pronouns). Tagged OTHER.
    pub function_words: HashSet<String>,
}

fn entries(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter_map(|line| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some(line)
    })
}

fn normalize_entry(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_set(text: &str) -> HashSet<String> {
    entries(text).map(normalize_entry).collect()
}

fn parse_map(text: &str, source: &Path) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut cols = body.split('\t');
        match (cols.next(), cols.next(), cols.next()) {
            (Some(word), Some(lemma), None) if !word.trim().is_empty() && !lemma.trim().is_empty() => {
                map.insert(normalize_entry(word), normalize_entry(lemma));
            }
            _ => return Err(Error::malformed(source, idx + 1, "expected word<TAB>lemma")),
        }
    }
    Ok(map)
}

impl Lexicon {
    /// The lists bundled with the crate.
    pub fn builtin() -> Self {
        Self::from_sources(|_| Ok(None)).expect("bundled lexicon is well-formed")
    }

    /// Loads lists from `dir`, falling back to the bundled list for any file
    /// that is absent.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "lexicon directory not found"),
            ));
        }
        Self::from_sources(|name| {
            let path = dir.join(name);
            if path.exists() {
                fs::read_to_string(&path).map(Some).map_err(|e| Error::io(&path, e))
            } else {
                Ok(None)
            }
        })
    }

    fn from_sources(mut read: impl FnMut(&str) -> Result<Option<String>>) -> Result<Self> {
        let mut text = |name: &str, fallback: &'static str| -> Result<String> {
            Ok(read(name)?.unwrap_or_else(|| fallback.to_string()))
        };
        let lex = Lexicon {
            determiners: parse_set(&text(DETERMINERS_FILE, BUILTIN_DETERMINERS)?),
            prepositions: parse_set(&text(PREPOSITIONS_FILE, BUILTIN_PREPOSITIONS)?),
            adjectives: parse_set(&text(ADJECTIVES_FILE, BUILTIN_ADJECTIVES)?),
            irregular_participles: parse_map(
                &text(IRREGULAR_PARTICIPLES_FILE, BUILTIN_PARTICIPLES)?,
                Path::new(IRREGULAR_PARTICIPLES_FILE),
            )?,
            irregular_plurals: parse_map(
                &text(IRREGULAR_PLURALS_FILE, BUILTIN_PLURALS)?,
                Path::new(IRREGULAR_PLURALS_FILE),
            )?,
            known_nouns: parse_set(&text(KNOWN_NOUNS_FILE, BUILTIN_NOUNS)?),
            function_words: parse_set(&text(FUNCTION_WORDS_FILE, BUILTIN_FUNCTION_WORDS)?),
        };
        lex.validate()?;
        Ok(lex)
    }

    /// Closed classes must be pairwise disjoint. Adjectives and nouns may
    /// overlap; the tagger resolves those by position.
    pub fn validate(&self) -> Result<()> {
        let participles: HashSet<String> = self.irregular_participles.keys().cloned().collect();
        let classes: [(&str, &HashSet<String>); 4] = [
            ("determiners", &self.determiners),
            ("prepositions", &self.prepositions),
            ("function words", &self.function_words),
            ("irregular participles", &participles),
        ];
        for (i, (a_name, a)) in classes.iter().enumerate() {
            for (b_name, b) in &classes[i + 1..] {
                let mut shared: Vec<&String> = a.intersection(b).collect();
                if !shared.is_empty() {
                    shared.sort();
                    return Err(Error::InvalidConfig(format!(
                        "lexicon lists {a_name} and {b_name} share {shared:?}"
                    )));
                }
            }
            for (open_name, open) in [("adjectives", &self.adjectives), ("known nouns", &self.known_nouns)] {
                let mut shared: Vec<&String> = a.intersection(open).collect();
                if !shared.is_empty() {
                    shared.sort();
                    return Err(Error::InvalidConfig(format!(
                        "lexicon lists {a_name} and {open_name} share {shared:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Longest preposition entry, in words.
    pub fn max_preposition_words(&self) -> usize {
        self.prepositions
            .iter()
            .map(|p| p.split(' ').count())
            .max()
            .unwrap_or(1)
    }

    pub fn is_ambiguous_adjective(&self, word: &str, noun_lemma: &str) -> bool {
        self.adjectives.contains(word) && self.known_nouns.contains(noun_lemma)
    }
}
