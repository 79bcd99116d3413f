//! Tokenizer, tagger and constrained grammar for region phrases.
//!
//! Region phrases are short and regular ("a thin man behind the yellow car",
//! "car driving on the road"), so a lexicon-driven tagger and a small grammar
//! cover them:
//!
//! ```text
//! Phrase := NP
//!         | NP PREP NP                 (PP_PHRASE)
//!         | NP VBG NP? (PREP NP)?      (VP_PHRASE, active)
//!         | NP VBN (PREP NP)?          (VP_PHRASE, passive; PREP usually "by")
//! NP     := DET? (ADJ | VBG)* NOUN+
//! ```
//!
//! Anything else is [`Unparseable`] and is skipped by the builders.

use std::fmt;

use crate::error::{Error, Result};
use crate::lemma::{singularize, vbg_lemma, vbn_lemma};
use crate::lexicon::Lexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pos {
    Det,
    Adj,
    Noun,
    Prep,
    Vbg,
    Vbn,
    Other,
}

impl Pos {
    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Det => "DET",
            Pos::Adj => "ADJ",
            Pos::Noun => "NOUN",
            Pos::Prep => "PREP",
            Pos::Vbg => "VBG",
            Pos::Vbn => "VBN",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedToken {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
}

/// Lowercases, strips punctuation and splits on whitespace. Possessive `'s`
/// is dropped; inner hyphens and apostrophes are kept.
pub fn tokenize(phrase: &str) -> Vec<String> {
    let cleaned: String = phrase
        .chars()
        .flat_map(char::to_lowercase)
        .map(|c| if c.is_alphanumeric() || c == '-' || c == '\'' { c } else { ' ' })
        .collect();
    cleaned
        .split_whitespace()
        .map(|w| {
            let w = w.strip_suffix("'s").unwrap_or(w);
            w.trim_matches(|c| c == '-' || c == '\'').to_string()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

/// Merges runs of words that form a multi-word preposition ("in front of")
/// into single tokens, longest match first.
fn merge_prepositions(words: Vec<String>, lexicon: &Lexicon) -> Vec<String> {
    let max = lexicon.max_preposition_words();
    let mut out = Vec::with_capacity(words.len());
    let mut i = 0;
    while i < words.len() {
        let mut taken = 1;
        for n in (2..=max.min(words.len() - i)).rev() {
            let joined = words[i..i + n].join(" ");
            if lexicon.prepositions.contains(&joined) {
                out.push(joined);
                taken = n;
                break;
            }
        }
        if taken == 1 {
            out.push(words[i].clone());
        }
        i += taken;
    }
    out
}

/// Tag before positional resolution.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Draft {
    Fixed(Pos),
    AdjOrNoun,
}

fn draft_tag(word: &str, lexicon: &Lexicon) -> Draft {
    if lexicon.determiners.contains(word) {
        return Draft::Fixed(Pos::Det);
    }
    if lexicon.prepositions.contains(word) {
        return Draft::Fixed(Pos::Prep);
    }
    if lexicon.function_words.contains(word) {
        return Draft::Fixed(Pos::Other);
    }
    if lexicon.irregular_participles.contains_key(word) {
        return Draft::Fixed(if word.ends_with("ing") { Pos::Vbg } else { Pos::Vbn });
    }
    let noun_lemma = singularize(word, lexicon);
    let is_adj = lexicon.adjectives.contains(word);
    let is_noun = lexicon.known_nouns.contains(&noun_lemma);
    match (is_adj, is_noun) {
        (true, true) => return Draft::AdjOrNoun,
        (true, false) => return Draft::Fixed(Pos::Adj),
        (false, true) => return Draft::Fixed(Pos::Noun),
        (false, false) => {}
    }
    if !word.chars().all(|c| c.is_ascii_alphabetic()) {
        return Draft::Fixed(if word.chars().any(|c| c.is_alphabetic()) {
            Pos::Noun
        } else {
            Pos::Other
        });
    }
    if word.len() >= 5 && word.ends_with("ing") {
        return Draft::Fixed(Pos::Vbg);
    }
    if word.len() >= 4 && word.ends_with("ed") && !word.ends_with("eed") {
        return Draft::Fixed(Pos::Vbn);
    }
    Draft::Fixed(Pos::Noun)
}

fn lemma_for(word: &str, pos: Pos, lexicon: &Lexicon) -> String {
    match pos {
        Pos::Noun => singularize(word, lexicon),
        Pos::Vbg => vbg_lemma(word, lexicon),
        Pos::Vbn => vbn_lemma(word, lexicon),
        _ => word.to_string(),
    }
}

/// Tokenizes and tags a phrase.
///
/// Tag precedence: determiner, preposition, function word, irregular
/// participle, lexicon adjective/noun, `-ing` (VBG), `-ed` (VBN), then NOUN.
/// A word listed as both adjective and noun is ADJ only when the next token is
/// an ADJ or NOUN and the two do not form a known compound noun.
pub fn tokenize_and_tag(phrase: &str, lexicon: &Lexicon) -> Result<Vec<TaggedToken>> {
    let words = merge_prepositions(tokenize(phrase), lexicon);
    if words.is_empty() {
        return Err(Error::EmptyPhrase);
    }
    let drafts: Vec<Draft> = words.iter().map(|w| draft_tag(w, lexicon)).collect();
    let mut tags = vec![Pos::Other; words.len()];
    for i in (0..words.len()).rev() {
        tags[i] = match drafts[i] {
            Draft::Fixed(p) => p,
            Draft::AdjOrNoun => {
                let next = tags.get(i + 1).copied();
                let forms_compound = i + 1 < words.len()
                    && lexicon.known_nouns.contains(&format!(
                        "{} {}",
                        words[i],
                        singularize(&words[i + 1], lexicon)
                    ));
                if matches!(next, Some(Pos::Adj) | Some(Pos::Noun)) && !forms_compound {
                    Pos::Adj
                } else {
                    Pos::Noun
                }
            }
        };
    }
    Ok(words
        .into_iter()
        .zip(tags)
        .map(|(surface, pos)| TaggedToken {
            lemma: lemma_for(&surface, pos, lexicon),
            surface,
            pos,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhraseKind {
    Np,
    PpPhrase,
    VpPhrase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbPayload {
    pub lemma: String,
    /// [`Pos::Vbg`] or [`Pos::Vbn`].
    pub pos: Pos,
    /// Verb with its simplified complement, e.g. "driving on road" or
    /// "hit by a car".
    pub complement: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseParse {
    pub kind: PhraseKind,
    pub root_noun: String,
    pub adjectives: Vec<String>,
    /// Lemmas of participles modifying the root noun ("a running man").
    pub np_participles: Vec<String>,
    pub prep: Option<String>,
    pub tail_head_noun: Option<String>,
    pub verb: Option<VerbPayload>,
    pub tokens: Vec<TaggedToken>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Unparseable;

impl fmt::Display for Unparseable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("phrase does not match the region-phrase grammar")
    }
}

impl std::error::Error for Unparseable {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotAnNp;

impl fmt::Display for NotAnNp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("token span is not a noun phrase")
    }
}

impl std::error::Error for NotAnNp {}

/// A recognized noun phrase inside a token slice.
#[derive(Debug, Clone, PartialEq, Eq)]
struct NpSpan {
    det: Option<usize>,
    modifiers: std::ops::Range<usize>,
    nouns: std::ops::Range<usize>,
}

impl NpSpan {
    fn end(&self) -> usize {
        self.nouns.end
    }
}

fn match_np(tokens: &[TaggedToken], start: usize) -> Option<NpSpan> {
    let mut i = start;
    let det = (tokens.get(i)?.pos == Pos::Det).then(|| {
        i += 1;
        i - 1
    });
    let mod_start = i;
    while tokens.get(i).is_some_and(|t| matches!(t.pos, Pos::Adj | Pos::Vbg)) {
        i += 1;
    }
    let modifiers = mod_start..i;
    // A trailing VBG right after the head belongs to the verb phrase, so the
    // modifier run must be followed by at least one noun.
    let noun_start = i;
    while tokens.get(i).is_some_and(|t| t.pos == Pos::Noun) {
        i += 1;
    }
    if i == noun_start {
        return None;
    }
    Some(NpSpan {
        det,
        modifiers,
        nouns: noun_start..i,
    })
}

/// Head lemma of a noun run. The longest trailing run that is a known
/// compound noun wins; otherwise the last noun is the head.
fn head_of(tokens: &[TaggedToken], nouns: std::ops::Range<usize>, lexicon: &Lexicon) -> String {
    let last = nouns.end - 1;
    for s in nouns.start..last {
        let candidate = tokens[s..nouns.end]
            .iter()
            .map(|t| t.lemma.as_str())
            .collect::<Vec<_>>()
            .join(" ");
        if lexicon.known_nouns.contains(&candidate) {
            return candidate;
        }
    }
    tokens[last].lemma.clone()
}

/// Reduces a noun phrase to its head lemma: "the yellow car" -> "car".
pub fn simplify_np(tokens: &[TaggedToken], lexicon: &Lexicon) -> std::result::Result<String, NotAnNp> {
    match match_np(tokens, 0) {
        Some(span) if span.end() == tokens.len() => Ok(head_of(tokens, span.nouns, lexicon)),
        _ => Err(NotAnNp),
    }
}

/// Parses tagged tokens against the region-phrase grammar.
pub fn parse_region_phrase(
    tokens: &[TaggedToken],
    lexicon: &Lexicon,
) -> std::result::Result<PhraseParse, Unparseable> {
    let root = match_np(tokens, 0).ok_or(Unparseable)?;
    let mut parse = PhraseParse {
        kind: PhraseKind::Np,
        root_noun: head_of(tokens, root.nouns.clone(), lexicon),
        adjectives: Vec::new(),
        np_participles: Vec::new(),
        prep: None,
        tail_head_noun: None,
        verb: None,
        tokens: tokens.to_vec(),
    };
    for t in &tokens[root.modifiers.clone()] {
        match t.pos {
            Pos::Adj => parse.adjectives.push(t.lemma.clone()),
            Pos::Vbg => parse.np_participles.push(t.lemma.clone()),
            _ => unreachable!("NP modifiers are ADJ or VBG"),
        }
    }

    let mut i = root.end();
    let Some(next) = tokens.get(i) else {
        return Ok(parse);
    };
    match next.pos {
        Pos::Prep => {
            let tail = match_np(tokens, i + 1).ok_or(Unparseable)?;
            if tail.end() != tokens.len() {
                return Err(Unparseable);
            }
            parse.kind = PhraseKind::PpPhrase;
            parse.prep = Some(next.surface.clone());
            parse.tail_head_noun = Some(head_of(tokens, tail.nouns, lexicon));
        }
        Pos::Vbg => {
            let mut complement = vec![next.surface.clone()];
            i += 1;
            if let Some(obj) = match_np(tokens, i) {
                complement.push(head_of(tokens, obj.nouns.clone(), lexicon));
                i = obj.end();
            }
            if let Some(prep) = tokens.get(i).filter(|t| t.pos == Pos::Prep) {
                let obj = match_np(tokens, i + 1).ok_or(Unparseable)?;
                complement.push(prep.surface.clone());
                complement.push(head_of(tokens, obj.nouns.clone(), lexicon));
                i = obj.end();
            }
            if i != tokens.len() {
                return Err(Unparseable);
            }
            parse.kind = PhraseKind::VpPhrase;
            parse.verb = Some(VerbPayload {
                lemma: next.lemma.clone(),
                pos: Pos::Vbg,
                complement: complement.join(" "),
            });
        }
        Pos::Vbn => {
            let mut complement = vec![next.surface.clone()];
            i += 1;
            if let Some(prep) = tokens.get(i).filter(|t| t.pos == Pos::Prep) {
                let agent = match_np(tokens, i + 1).ok_or(Unparseable)?;
                complement.push(prep.surface.clone());
                // The passive agent keeps its determiner: "hit by a car".
                if prep.surface == "by" {
                    if let Some(d) = agent.det {
                        complement.push(tokens[d].surface.clone());
                    }
                }
                complement.push(head_of(tokens, agent.nouns.clone(), lexicon));
                i = agent.end();
            }
            if i != tokens.len() {
                return Err(Unparseable);
            }
            parse.kind = PhraseKind::VpPhrase;
            parse.verb = Some(VerbPayload {
                lemma: next.lemma.clone(),
                pos: Pos::Vbn,
                complement: complement.join(" "),
            });
        }
        _ => return Err(Unparseable),
    }
    Ok(parse)
}

/// Outcome of running the full tokenize/tag/parse chain on raw text.
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum PhraseOutcome {
    Parsed(PhraseParse),
    Empty,
    Unparseable,
}

pub fn parse_phrase(phrase: &str, lexicon: &Lexicon) -> PhraseOutcome {
    match tokenize_and_tag(phrase, lexicon) {
        Err(_) => PhraseOutcome::Empty,
        Ok(tokens) => match parse_region_phrase(&tokens, lexicon) {
            Ok(p) => PhraseOutcome::Parsed(p),
            Err(Unparseable) => PhraseOutcome::Unparseable,
        },
    }
}
