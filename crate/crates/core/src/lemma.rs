//! Rule-based English lemmatization for object names and participles.

use crate::lexicon::Lexicon;

fn is_vowel(c: u8) -> bool {
    matches!(c, b'a' | b'e' | b'i' | b'o' | b'u')
}

fn is_consonant(c: u8) -> bool {
    c.is_ascii_lowercase() && !is_vowel(c)
}

fn pick_known(lexicon: &Lexicon, candidates: &[String]) -> Option<String> {
    candidates.iter().find(|c| lexicon.known_nouns.contains(*c)).cloned()
}

/// Singular form of a single lowercase noun.
///
/// The irregular-plural map wins, then words already listed as known nouns
/// are left alone, then suffix rules apply. Where a suffix rule has more than
/// one plausible output the first candidate found in `known_nouns` is used.
pub fn singularize(word: &str, lexicon: &Lexicon) -> String {
    if let Some(lemma) = lexicon.irregular_plurals.get(word) {
        return lemma.clone();
    }
    if lexicon.known_nouns.contains(word) || !word.is_ascii() {
        return word.to_string();
    }
    let len = word.len();
    let drop_s = || word[..len - 1].to_string();

    if len > 4 && word.ends_with("ies") {
        let y_form = format!("{}y", &word[..len - 3]);
        return pick_known(lexicon, &[y_form.clone(), drop_s()]).unwrap_or(y_form);
    }
    if len > 4 && word.ends_with("ves") {
        let stem = &word[..len - 3];
        let candidates = [format!("{stem}f"), format!("{stem}fe"), drop_s()];
        return pick_known(lexicon, &candidates).unwrap_or_else(drop_s);
    }
    for suffix in ["ses", "xes", "zes", "ches", "shes"] {
        if len > suffix.len() + 1 && word.ends_with(suffix) {
            let drop_es = word[..len - 2].to_string();
            if let Some(known) = pick_known(lexicon, &[drop_es.clone(), drop_s()]) {
                return known;
            }
            let keep_e = match suffix {
                // glasses -> glass, buses -> bus, but horses -> horse
                "ses" => !(drop_es.ends_with("ss") || drop_es.ends_with("us")),
                // buzzes -> buzz, but prizes -> prize
                "zes" => !drop_es.ends_with("zz"),
                _ => false,
            };
            return if keep_e { drop_s() } else { drop_es };
        }
    }
    if len > 2
        && word.ends_with('s')
        && !["ss", "us", "is"].iter().any(|s| word.ends_with(s))
    {
        return drop_s();
    }
    word.to_string()
}

/// Lemma of an object name. Multi-word names are lemmatized on their last
/// word ("traffic lights" -> "traffic light").
pub fn lemmatize(name: &str, lexicon: &Lexicon) -> String {
    let words: Vec<&str> = name.split_whitespace().collect();
    let Some((last, rest)) = words.split_last() else {
        return String::new();
    };
    let whole = name.split_whitespace().collect::<Vec<_>>().join(" ");
    if let Some(lemma) = lexicon.irregular_plurals.get(&whole) {
        return lemma.clone();
    }
    let mut out: Vec<String> = rest.iter().map(|w| w.to_string()).collect();
    out.push(singularize(last, lexicon));
    out.join(" ")
}

/// Undoes spelling changes made when adding -ing or -ed to a verb stem.
fn restore_stem(stem: &str) -> String {
    let b = stem.as_bytes();
    let n = b.len();
    if n >= 3 && b[n - 1] == b[n - 2] && is_consonant(b[n - 1]) && !matches!(b[n - 1], b'l' | b's' | b'z' | b'f') {
        // running -> run, stopped -> stop
        return stem[..n - 1].to_string();
    }
    if n <= 2 {
        // used -> use
        return format!("{stem}e");
    }
    let last = b[n - 1];
    let needs_e = last == b'v'
        || last == b'u'
        || (last == b'c' && b[n - 2] != b'k' && b[n - 2] != b'c')
        || (last == b'g' && matches!(b[n - 2], b'r' | b'd'))
        || (n <= 4
            && is_consonant(last)
            && !matches!(last, b'w' | b'x' | b'y')
            && is_vowel(b[n - 2])
            && is_consonant(b[n - 3])
            && (n == 3 || is_consonant(b[0])));
    if needs_e {
        format!("{stem}e")
    } else {
        stem.to_string()
    }
}

/// Base form of a present participle (`-ing`).
pub fn vbg_lemma(word: &str, lexicon: &Lexicon) -> String {
    if let Some(lemma) = lexicon.irregular_participles.get(word) {
        return lemma.clone();
    }
    match word.strip_suffix("ing") {
        Some(stem) if !stem.is_empty() && word.is_ascii() => restore_stem(stem),
        _ => word.to_string(),
    }
}

/// Base form of a past participle (`-ed` or irregular).
pub fn vbn_lemma(word: &str, lexicon: &Lexicon) -> String {
    if let Some(lemma) = lexicon.irregular_participles.get(word) {
        return lemma.clone();
    }
    if !word.is_ascii() {
        return word.to_string();
    }
    if let Some(stem) = word.strip_suffix("ied") {
        // tied -> tie, dried -> dry
        return if word.len() <= 4 {
            format!("{stem}ie")
        } else {
            format!("{stem}y")
        };
    }
    match word.strip_suffix("ed") {
        Some(stem) if !stem.is_empty() => restore_stem(stem),
        _ => word.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex() -> Lexicon {
        Lexicon::builtin()
    }

    #[test]
    fn regular_and_irregular_plurals() {
        let l = lex();
        assert_eq!(lemmatize("cars", &l), "car");
        assert_eq!(lemmatize("men", &l), "man");
        assert_eq!(lemmatize("skateboard", &l), "skateboard");
        assert_eq!(lemmatize("traffic lights", &l), "traffic light");
        assert_eq!(lemmatize("benches", &l), "bench");
        assert_eq!(lemmatize("boxes", &l), "box");
        assert_eq!(lemmatize("horses", &l), "horse");
        assert_eq!(lemmatize("glass", &l), "glass");
        assert_eq!(lemmatize("gloves", &l), "glove");
        assert_eq!(lemmatize("knives", &l), "knife");
        assert_eq!(lemmatize("berries", &l), "berry");
        assert_eq!(lemmatize("bus", &l), "bus");
    }

    #[test]
    fn participles() {
        let l = lex();
        for (w, want) in [
            ("running", "run"),
            ("driving", "drive"),
            ("playing", "play"),
            ("sitting", "sit"),
            ("standing", "stand"),
            ("walking", "walk"),
            ("riding", "ride"),
            ("smiling", "smile"),
            ("skating", "skate"),
            ("eating", "eat"),
            ("falling", "fall"),
            ("dancing", "dance"),
            ("flying", "fly"),
            ("lying", "lie"),
            ("skiing", "ski"),
            ("looking", "look"),
            ("hanging", "hang"),
        ] {
            assert_eq!(vbg_lemma(w, &l), want, "{w}");
        }
        for (w, want) in [
            ("parked", "park"),
            ("hit", "hit"),
            ("stopped", "stop"),
            ("tied", "tie"),
            ("dried", "dry"),
            ("covered", "cover"),
            ("used", "use"),
            ("lined", "line"),
            ("filled", "fill"),
            ("placed", "place"),
            ("stacked", "stack"),
        ] {
            assert_eq!(vbn_lemma(w, &l), want, "{w}");
        }
    }
}
