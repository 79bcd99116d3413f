//! Seen commonsense: scene-graph triples mapped by part of speech,
//! co-occurrence, and triples read off region phrases.

use std::collections::HashSet;

use crate::bbox::overlap_ratio;
use crate::diagnostics::Diagnostics;
use crate::ingest::{GroundedObject, ImageRecord, ObjectSlot, Region, SceneTriple, TripleKind};
use crate::lemma::lemmatize;
use crate::lexicon::Lexicon;
use crate::phrase::{parse_phrase, simplify_np, tokenize_and_tag, PhraseKind, PhraseOutcome, PhraseParse, Pos};
use crate::taxonomy::{pos_to_seen_category, CategoryPath, Voice, WordClass};
use crate::triple::{CommonsenseTriple, Provenance};

/// Default containment threshold for region localization.
pub const DEFAULT_TAU: f64 = 0.5;

const COPULAS: [&str; 8] = ["is", "are", "was", "were", "be", "been", "being", "am"];

fn strip_copula(text: &str) -> String {
    let mut words: Vec<&str> = text.split_whitespace().collect();
    while words.first().is_some_and(|w| COPULAS.contains(w)) {
        words.remove(0);
    }
    words.join(" ")
}

/// Word class and voice for the first content token of a predicate.
/// `attribute_slot` marks the text of an attribute record: an open-class
/// word the lexicon does not know is read as an adjective there.
fn classify(text: &str, lexicon: &Lexicon, attribute_slot: bool) -> Option<(WordClass, Voice)> {
    let tokens = tokenize_and_tag(text, lexicon).ok()?;
    let first = tokens.iter().find(|t| t.pos != Pos::Det)?;
    Some(match first.pos {
        Pos::Adj => (WordClass::Adjective, Voice::None),
        Pos::Prep => (WordClass::Preposition, Voice::None),
        Pos::Vbg => (WordClass::Verb, Voice::Active),
        Pos::Vbn => (WordClass::Verb, Voice::Passive),
        Pos::Noun if attribute_slot => (WordClass::Adjective, Voice::None),
        // A bare open-class word in predicate position is a verb ("play").
        Pos::Noun => (WordClass::Verb, Voice::Active),
        Pos::Det | Pos::Other => (WordClass::Other, Voice::None),
    })
}

fn simplified_name(name: &str, lexicon: &Lexicon) -> String {
    tokenize_and_tag(name, lexicon)
        .ok()
        .and_then(|t| simplify_np(&t, lexicon).ok())
        .unwrap_or_else(|| lemmatize(name, lexicon))
}

/// Maps one scene-graph triple onto the seen layer, or `None` when its
/// predicate carries no mappable part of speech.
pub fn map_scene_triple(t: &SceneTriple, image: &ImageRecord, lexicon: &Lexicon) -> Option<CommonsenseTriple> {
    let predicate = strip_copula(&t.predicate);
    let (category, tail) = match (&t.kind, &t.object) {
        (TripleKind::Attribute, ObjectSlot::Text(attr)) => {
            let text = if predicate.is_empty() {
                attr.clone()
            } else {
                format!("{predicate} {attr}")
            };
            let (class, voice) = classify(&text, lexicon, true)?;
            (pos_to_seen_category(class, voice)?, text)
        }
        (TripleKind::Relationship, ObjectSlot::Object(obj)) => {
            if predicate.is_empty() {
                return None;
            }
            let (class, voice) = classify(&predicate, lexicon, false)?;
            let category = pos_to_seen_category(class, voice)?;
            let object = image.object(*obj)?;
            (category, format!("{predicate} {}", simplified_name(&object.name, lexicon)))
        }
        _ => return None,
    };
    if tail.trim().is_empty() {
        return None;
    }
    Some(CommonsenseTriple::seen(t.subject_id, category, tail, Provenance::SceneTriple))
}

/// Directed LocatedNear triples between every pair of differently named
/// objects in one image.
pub fn cooccurrence_triples(objects: &[GroundedObject]) -> Vec<CommonsenseTriple> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in objects {
        for b in objects {
            if a.object_id == b.object_id || a.name == b.name {
                continue;
            }
            if seen.insert((a.object_id, b.name.as_str())) {
                out.push(CommonsenseTriple::seen(
                    a.object_id,
                    CategoryPath::SEEN_LOCATED_NEAR,
                    b.name.clone(),
                    Provenance::CoOccurrence,
                ));
            }
        }
    }
    out
}

/// Triple skeletons `(head lemma, category, tail)` read off a parsed phrase.
pub fn extract_region_triples(parse: &PhraseParse) -> Vec<(String, CategoryPath, String)> {
    let root = &parse.root_noun;
    let mut out = Vec::new();
    for adj in &parse.adjectives {
        out.push((root.clone(), CategoryPath::SEEN_HAS_PROPERTY, adj.clone()));
    }
    for participle in &parse.np_participles {
        out.push((root.clone(), CategoryPath::SEEN_CAPABLE_OF, participle.clone()));
    }
    match parse.kind {
        PhraseKind::Np => {}
        PhraseKind::PpPhrase => {
            if let (Some(prep), Some(tail)) = (&parse.prep, &parse.tail_head_noun) {
                out.push((root.clone(), CategoryPath::SEEN_RELATEDNESS, format!("{prep} {tail}")));
            }
        }
        PhraseKind::VpPhrase => {
            if let Some(verb) = &parse.verb {
                let category = match verb.pos {
                    Pos::Vbn => CategoryPath::SEEN_RECEIVES_ACTION,
                    _ => CategoryPath::SEEN_CAPABLE_OF,
                };
                out.push((root.clone(), category, verb.complement.clone()));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Localization<'a> {
    Match(&'a GroundedObject),
    NoMatch,
    Ambiguous,
}

fn candidates<'a>(
    region: &'a Region,
    objects: &'a [GroundedObject],
    tau: f64,
) -> impl Iterator<Item = &'a GroundedObject> + 'a {
    objects
        .iter()
        .filter(move |o| overlap_ratio(&region.bbox, &o.bbox) >= tau)
}

fn match_in_candidates<'a>(
    lemma: &str,
    region: &'a Region,
    objects: &'a [GroundedObject],
    tau: f64,
    lexicon: &Lexicon,
) -> Localization<'a> {
    let mut hits = candidates(region, objects, tau).filter(|o| lemmatize(&o.name, lexicon) == lemma);
    match (hits.next(), hits.next()) {
        (None, _) => Localization::NoMatch,
        (Some(o), None) => Localization::Match(o),
        (Some(_), Some(_)) => Localization::Ambiguous,
    }
}

/// Grounds a region-derived head to the single object inside the region
/// (overlap ratio >= `tau`) whose lemmatized name equals `head_name`.
pub fn localize<'a>(
    head_name: &str,
    region: &'a Region,
    objects: &'a [GroundedObject],
    tau: f64,
    lexicon: &Lexicon,
) -> Localization<'a> {
    match_in_candidates(head_name, region, objects, tau, lexicon)
}

fn sort_key(t: &CommonsenseTriple) -> (crate::ingest::ObjectId, String, String) {
    (t.head, t.category.canonical(), t.tail.clone())
}

/// Every seen triple for one image, deduplicated on (head, category, tail)
/// with the first provenance kept, ordered by head id, category string, tail.
pub fn build_seen(image: &ImageRecord, lexicon: &Lexicon, tau: f64, diag: &mut Diagnostics) -> Vec<CommonsenseTriple> {
    let mut all = Vec::new();

    for t in &image.triples {
        diag.scene_triples += 1;
        match map_scene_triple(t, image, lexicon) {
            Some(ct) => all.push(ct),
            None => diag.not_mapped += 1,
        }
    }

    all.extend(cooccurrence_triples(&image.objects));

    for region in &image.regions {
        diag.regions += 1;
        let parse = match parse_phrase(&region.phrase, lexicon) {
            PhraseOutcome::Parsed(p) => p,
            PhraseOutcome::Unparseable => {
                diag.unparseable += 1;
                continue;
            }
            PhraseOutcome::Empty => {
                diag.empty_phrase += 1;
                continue;
            }
        };
        let skeletons = extract_region_triples(&parse);
        if skeletons.is_empty() {
            continue;
        }
        let head = match localize(&parse.root_noun, region, &image.objects, tau, lexicon) {
            Localization::Match(o) => o,
            Localization::NoMatch => {
                diag.no_match += 1;
                continue;
            }
            Localization::Ambiguous => {
                diag.ambiguous += 1;
                continue;
            }
        };
        if let Some(tail) = &parse.tail_head_noun {
            match match_in_candidates(tail, region, &image.objects, tau, lexicon) {
                Localization::Match(_) => diag.tail_grounded += 1,
                _ => diag.tail_text_only += 1,
            }
        }
        for (_, category, tail) in skeletons {
            all.push(CommonsenseTriple::seen(head.object_id, category, tail, Provenance::RegionPhrase));
        }
    }

    let mut keys = HashSet::new();
    all.retain(|t| !t.tail.trim().is_empty() && keys.insert((t.head, t.category, t.tail.clone())));
    all.sort_by_cached_key(sort_key);
    all
}
