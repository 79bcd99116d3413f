//! Unseen commonsense retrieved from the KB for each grounded object.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::diagnostics::Diagnostics;
use crate::ingest::{normalize_concept, GroundedObject, ImageRecord, KbIndex, ObjectId};
use crate::lemma::lemmatize;
use crate::lexicon::Lexicon;
use crate::phrase::tokenize_and_tag;
use crate::taxonomy::{kb_relation_to_category, CategoryPath, Relation, KB_RELATIONS};
use crate::triple::{CommonsenseTriple, Provenance};

/// Lookup keys for one object: surface name, lemma, and their underscore
/// spellings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub object_id: ObjectId,
    pub forms: Vec<String>,
}

pub fn make_synset(object: &GroundedObject, lexicon: &Lexicon) -> Synset {
    let surface = object.name.clone();
    let lemma = lemmatize(&surface, lexicon);
    let mut forms: Vec<String> = Vec::with_capacity(4);
    for f in [
        surface.clone(),
        lemma.clone(),
        surface.replace(' ', "_"),
        lemma.replace(' ', "_"),
    ] {
        if !forms.contains(&f) {
            forms.push(f);
        }
    }
    Synset {
        object_id: object.object_id,
        forms,
    }
}

/// Unseen triples for `object`: every in-scope KB edge whose head is one of
/// the object's synset forms. Duplicate (category, tail) pairs keep the
/// highest weight; otherwise first-retrieved order is kept.
pub fn retrieve_unseen(object: &GroundedObject, kb: &KbIndex, lexicon: &Lexicon) -> Vec<CommonsenseTriple> {
    let synset = make_synset(object, lexicon);
    let mut heads: Vec<String> = Vec::new();
    for form in &synset.forms {
        let key = normalize_concept(form);
        if !heads.contains(&key) {
            heads.push(key);
        }
    }
    let mut out: Vec<CommonsenseTriple> = Vec::new();
    let mut slot: HashMap<(CategoryPath, String), usize> = HashMap::new();
    for head in &heads {
        if !kb.has_head(head) {
            continue;
        }
        for relation in KB_RELATIONS {
            let category = kb_relation_to_category(relation).expect("KB_RELATIONS are all mapped");
            for edge in kb.lookup(head, relation) {
                match slot.get(&(category, edge.tail.clone())) {
                    Some(&i) => {
                        if edge.weight > out[i].score {
                            out[i].score = edge.weight;
                        }
                    }
                    None => {
                        slot.insert((category, edge.tail.clone()), out.len());
                        out.push(CommonsenseTriple {
                            head: object.object_id,
                            category,
                            tail: edge.tail.clone(),
                            provenance: Provenance::KbRetrieval,
                            score: edge.weight,
                        });
                    }
                }
            }
        }
    }
    out
}

/// Drops unseen triples whose (relation, tail) already appears among the
/// object's seen triples.
pub fn dedup_against_seen(unseen: Vec<CommonsenseTriple>, seen: &[CommonsenseTriple]) -> Vec<CommonsenseTriple> {
    let seen_keys: HashSet<(ObjectId, Relation, &str)> = seen
        .iter()
        .map(|t| (t.head, t.category.relation(), t.tail.as_str()))
        .collect();
    unseen
        .into_iter()
        .filter(|t| !seen_keys.contains(&(t.head, t.category.relation(), t.tail.as_str())))
        .collect()
}

/// True when the tail's lemmatized tokens contain the word sequence of one of
/// `image_lemmas` other than `head_lemma`.
pub fn mentions_image_object(
    tail: &str,
    image_lemmas: &HashSet<String>,
    head_lemma: &str,
    lexicon: &Lexicon,
) -> bool {
    let Ok(tokens) = tokenize_and_tag(tail, lexicon) else {
        return false;
    };
    let words: Vec<&str> = tokens
        .iter()
        .flat_map(|t| t.lemma.split(' '))
        .collect();
    image_lemmas.iter().filter(|l| l.as_str() != head_lemma).any(|name| {
        let target: Vec<&str> = name.split(' ').collect();
        !target.is_empty() && words.windows(target.len()).any(|w| w == target.as_slice())
    })
}

/// Orders one object's unseen triples: tails mentioning another object in
/// the image first, then by descending score, then by tail text. Category is
/// a final tiebreak so the order is total.
pub fn object_aware_sort(
    triples: Vec<CommonsenseTriple>,
    image_lemmas: &HashSet<String>,
    head_lemma: &str,
    lexicon: &Lexicon,
) -> Vec<CommonsenseTriple> {
    let mut keyed: Vec<(bool, CommonsenseTriple)> = triples
        .into_iter()
        .map(|t| (mentions_image_object(&t.tail, image_lemmas, head_lemma, lexicon), t))
        .collect();
    keyed.sort_by(|(ma, a), (mb, b)| compare_unseen(*ma, a, *mb, b));
    keyed.into_iter().map(|(_, t)| t).collect()
}

pub(crate) fn compare_unseen(ma: bool, a: &CommonsenseTriple, mb: bool, b: &CommonsenseTriple) -> Ordering {
    mb.cmp(&ma)
        .then_with(|| b.score.total_cmp(&a.score))
        .then_with(|| a.tail.cmp(&b.tail))
        .then_with(|| a.category.cmp(&b.category))
}

/// Lemmas of every object name in an image.
pub fn image_lemmas(image: &ImageRecord, lexicon: &Lexicon) -> HashSet<String> {
    image.objects.iter().map(|o| lemmatize(&o.name, lexicon)).collect()
}

/// Unseen triples for every object of an image, in object order; each
/// object's list is object-aware sorted.
pub fn build_unseen(
    image: &ImageRecord,
    seen: &[CommonsenseTriple],
    kb: &KbIndex,
    lexicon: &Lexicon,
    dedup_seen: bool,
    diag: &mut Diagnostics,
) -> Vec<CommonsenseTriple> {
    let lemmas = image_lemmas(image, lexicon);
    let mut out = Vec::new();
    for object in &image.objects {
        let mut unseen = retrieve_unseen(object, kb, lexicon);
        if dedup_seen {
            let before = unseen.len();
            let own: Vec<CommonsenseTriple> = seen.iter().filter(|t| t.head == object.object_id).cloned().collect();
            unseen = dedup_against_seen(unseen, &own);
            diag.unseen_dropped_as_seen += (before - unseen.len()) as u64;
        }
        let head_lemma = lemmatize(&object.name, lexicon);
        out.extend(object_aware_sort(unseen, &lemmas, &head_lemma, lexicon));
    }
    out
}
