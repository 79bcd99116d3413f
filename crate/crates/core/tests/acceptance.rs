//! Acceptance gate. Prints one PASS/FAIL/SKIP line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::{BTreeMap, HashSet};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use visual_commonsense::dataset::{line_to_record, record_to_line, ObjectEntry};
use visual_commonsense::instruct::build_instruction_samples;
use visual_commonsense::lemma::lemmatize;
use visual_commonsense::pipeline::build_all_samples;
use visual_commonsense::seen::{cooccurrence_triples, extract_region_triples};
use visual_commonsense::taxonomy::{kb_relation_to_category, KB_RELATIONS};
use visual_commonsense::unseen::{mentions_image_object, object_aware_sort, retrieve_unseen};
use visual_commonsense::{
    build_dataset, compute_stats, export_dataset, load_kb, load_scene_corpus, overlap_ratio, parse_phrase, BBox,
    BuildOptions, CategoryPath, CommonsenseTriple, DatasetRecord, ExportConfig, GroundedObject, ImageId, KbIndex,
    Lexicon, ObjectId, PhraseOutcome, Provenance,
};

type Outcome = Result<String, String>;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn region_triples(phrase: &str, lex: &Lexicon) -> Vec<(String, String, String)> {
    match parse_phrase(phrase, lex) {
        PhraseOutcome::Parsed(p) => extract_region_triples(&p)
            .into_iter()
            .map(|(h, c, t)| (h, c.canonical(), t))
            .collect(),
        _ => Vec::new(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn criterion_1_mapping_rules() -> Outcome {
    let lex = Lexicon::builtin();
    let golden = [
        ("man before the yellow car", ("man", "/Seen/Space/Relatedness", "before car")),
        ("man hit by a yellow car", ("man", "/Seen/Action/ReceivesAction", "hit by a car")),
        ("car driving on the road", ("car", "/Seen/Action/CapableOf", "driving on road")),
        ("a small car", ("car", "/Seen/Property/HasProperty", "small")),
        ("a running man", ("man", "/Seen/Action/CapableOf", "run")),
    ];
    let start = Instant::now();
    for (phrase, (h, c, t)) in golden {
        let got = region_triples(phrase, &lex);
        let want = vec![(h.to_string(), c.to_string(), t.to_string())];
        if got != want {
            return Err(format!("{phrase:?}: got {got:?}, want {want:?}"));
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("5/5 exact in {:?}", start.elapsed()))
}

fn criterion_2_taxonomy() -> Outcome {
    let table = [
        ("car", "/Seen/Property/HasProperty", "yellow"),
        ("car", "/Seen/Space/LocatedNear", "streetlight"),
        ("car", "/Seen/Space/Relatedness", "after a car"),
        ("car", "/Seen/Action/CapableOf", "drive on road"),
        ("skateboard", "/Seen/Action/ReceivesAction", "played by man"),
        ("iron", "/Unseen/Property/HasProperty", "hard"),
        ("car", "/Unseen/Property/CreatedBy", "factory"),
        ("man", "/Unseen/Space/LocatedNear", "sofa"),
        ("man", "/Unseen/Action/CapableOf", "grow up"),
        ("car", "/Unseen/Action/UsedFor", "drive to work"),
        ("car", "/Unseen/Action/ReceivesAction", "hit"),
    ];
    let mut objects = Vec::new();
    for (i, (head, path, tail)) in table.iter().enumerate() {
        let category: CategoryPath = path.parse().map_err(|e| format!("{path}: {e}"))?;
        if category.to_string() != *path {
            return Err(format!("{path} serialized as {category}"));
        }
        let id = ObjectId(i as u64 + 1);
        let provenance = if category.is_seen() { Provenance::RegionPhrase } else { Provenance::KbRetrieval };
        let triple = CommonsenseTriple { head: id, category, tail: tail.to_string(), provenance, score: 1.0 };
        if !triple.is_well_formed() {
            return Err(format!("{path} not constructible"));
        }
        let object = GroundedObject {
            object_id: id,
            image_id: ImageId(1),
            name: head.to_string(),
            bbox: BBox::new(0, 0, 10, 10).unwrap(),
        };
        objects.push(ObjectEntry::new(object, vec![triple]));
    }
    let record = DatasetRecord { image_id: ImageId(1), objects };
    let line = record_to_line(&record);
    for (_, path, _) in &table {
        if !line.contains(path) {
            return Err(format!("{path} missing from exported line"));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let file = dir.path().join("taxonomy.tsv");
    export_dataset(std::slice::from_ref(&record), &file).map_err(|e| e.to_string())?;
    let back = visual_commonsense::import_dataset(&file).map_err(|e| e.to_string())?;
    if back != vec![record.clone()] || line_to_record(&line).as_ref() != Ok(&record) {
        return Err("round trip changed the record".into());
    }
    Ok("11/11 constructible, canonical, round-trip".into())
}

/// Fraction of the object's pixels that also lie in the region, by counting.
fn raster_ratio(region: (u32, u32, u32, u32), object: (u32, u32, u32, u32)) -> (u64, u64) {
    let inside = |b: (u32, u32, u32, u32), x: u32, y: u32| x >= b.0 && x < b.0 + b.2 && y >= b.1 && y < b.1 + b.3;
    let mut shared = 0u64;
    for y in object.1..object.1 + object.3 {
        for x in object.0..object.0 + object.2 {
            if inside(region, x, y) {
                shared += 1;
            }
        }
    }
    (shared, object.2 as u64 * object.3 as u64)
}

fn criterion_3_geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let boxed = |rng: &mut ChaCha8Rng| (rng.gen_range(0..80), rng.gen_range(0..80), rng.gen_range(1..60), rng.gen_range(1..60));
    let start = Instant::now();
    for i in 0..1000 {
        let r = boxed(&mut rng);
        let o = boxed(&mut rng);
        let got = overlap_ratio(&BBox::new(r.0, r.1, r.2, r.3).unwrap(), &BBox::new(o.0, o.1, o.2, o.3).unwrap());
        let (shared, area) = raster_ratio(r, o);
        let want = shared as f64 / area as f64;
        if got != want {
            return Err(format!("pair {i}: region {r:?} object {o:?}: {got} != {want}"));
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("1000/1000 exact in {:?}", start.elapsed()))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn criterion_4_cooccurrence() -> Outcome {
    let strategy = (0usize..=20, any::<u64>());
    runner(200)
        .run(&strategy, |(n, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let objects: Vec<GroundedObject> = (0..n)
                .map(|i| GroundedObject {
                    object_id: ObjectId(i as u64 * 7 + 1),
                    image_id: ImageId(1),
                    name: format!("thing{i}"),
                    bbox: BBox::new(rng.gen_range(0..100), rng.gen_range(0..100), rng.gen_range(1..50), rng.gen_range(1..50)).unwrap(),
                })
                .collect();
            let triples = cooccurrence_triples(&objects);
            prop_assert!(triples.iter().all(|t| t.category == CategoryPath::SEEN_LOCATED_NEAR));
            prop_assert_eq!(triples.len(), n * n.saturating_sub(1));
            Ok(())
        })
        .map(|_| "200 cases, count = n(n-1)".to_string())
        .map_err(|e| e.to_string())
}

const HEADS: [&str; 10] = ["man", "men", "car", "cars", "traffic light", "traffic_light", "dog", "tree", "bus", "buses"];
const TAILS: [&str; 10] = ["grow up", "hit by a car", "factory", "drive to work", "street", "bark", "near a tree", "transport", "hard", "sofa"];
const RELATIONS: [&str; 8] = ["HasProperty", "CreatedBy", "LocatedNear", "CapableOf", "UsedFor", "ReceivesAction", "IsA", "AtLocation"];

/// Linear scan over every edge: heads equal to the object's name or its
/// lemma (underscores read as spaces), in-scope relations only, max weight.
fn brute_force(kb: &KbIndex, name: &str, lex: &Lexicon) -> BTreeMap<(CategoryPath, String), f64> {
    let keys = [name.to_string(), lemmatize(name, lex)];
    let mut out: BTreeMap<(CategoryPath, String), f64> = BTreeMap::new();
    for e in kb.edges() {
        if !keys.iter().any(|k| *k == e.head.replace('_', " ")) || !KB_RELATIONS.contains(&e.relation.as_str()) {
            continue;
        }
        let cat = kb_relation_to_category(&e.relation).unwrap();
        let w = out.entry((cat, e.tail.clone())).or_insert(f64::NEG_INFINITY);
        *w = w.max(e.weight);
    }
    out
}

fn criterion_5_unseen() -> Outcome {
    let lex = Lexicon::builtin();
    let strategy = (1usize..=10_000, any::<u64>(), 0usize..HEADS.len());
    let retrieval = runner(200).run(&strategy, |(edges, seed, pick)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let edges = if seed % 20 == 0 { edges } else { edges % 500 + 1 };
        let mut text = String::new();
        for _ in 0..edges {
            text.push_str(&format!(
                "{}\t{}\t{}\t{:.3}\n",
                HEADS[rng.gen_range(0..HEADS.len())],
                RELATIONS[rng.gen_range(0..RELATIONS.len())],
                TAILS[rng.gen_range(0..TAILS.len())],
                rng.gen_range(0.0..5.0)
            ));
        }
        let kb = KbIndex::parse_str(&text).unwrap();
        let name = HEADS[pick].replace('_', " ");
        let object = GroundedObject { object_id: ObjectId(1), image_id: ImageId(1), name: name.clone(), bbox: BBox::new(0, 0, 1, 1).unwrap() };
        let got = retrieve_unseen(&object, &kb, &lex);
        let mut as_map = BTreeMap::new();
        for t in &got {
            prop_assert!(as_map.insert((t.category, t.tail.clone()), t.score).is_none(), "duplicate {:?}", t);
        }
        prop_assert_eq!(as_map, brute_force(&kb, &name, &lex));
        Ok(())
    });
    retrieval.map_err(|e| format!("retrieval: {e}"))?;

    let names = ["man", "car", "dog", "tree", "bus", "street", "sofa"];
    let strategy = (prop::collection::vec((0usize..TAILS.len(), 0.0f64..5.0), 0..30), prop::collection::vec(0usize..names.len(), 1..5));
    let sorting = runner(200).run(&strategy, |(items, in_image)| {
        let lemmas: HashSet<String> = in_image.iter().map(|&i| names[i].to_string()).collect();
        let head = names[in_image[0]];
        let triples: Vec<CommonsenseTriple> = items
            .iter()
            .map(|&(t, score)| CommonsenseTriple {
                head: ObjectId(1),
                category: CategoryPath::UNSEEN_CAPABLE_OF,
                tail: TAILS[t].to_string(),
                provenance: Provenance::KbRetrieval,
                score,
            })
            .collect();
        let sorted = object_aware_sort(triples.clone(), &lemmas, head, &lex);
        prop_assert_eq!(sorted.len(), triples.len());
        // word-level oracle: some other in-image name occurs as a whole word
        let mentions = |tail: &str| tail.split(' ').any(|w| w != head && lemmas.contains(w));
        let flags: Vec<bool> = sorted.iter().map(|t| mentions(&t.tail)).collect();
        prop_assert!(flags.windows(2).all(|w| w[0] || !w[1]), "non-mention before mention: {:?}", flags);
        for t in &sorted {
            prop_assert_eq!(mentions(&t.tail), mentions_image_object(&t.tail, &lemmas, head, &lex));
        }
        Ok(())
    });
    sorting.map_err(|e| format!("sorting: {e}"))?;
    Ok("200 retrieval cases match brute force, 200 sort cases mention-first".into())
}

type Gold = HashSet<(String, String, String)>;

fn load_gold() -> Result<Vec<(String, Gold)>, String> {
    let text = std::fs::read_to_string(data("region_phrases_gold.tsv")).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let (phrase, labels) = line.split_once('\t').ok_or_else(|| format!("bad line {line:?}"))?;
        let mut gold = Gold::new();
        if labels != "-" {
            for item in labels.split("; ") {
                let parts: Vec<&str> = item.split('|').collect();
                if parts.len() != 3 {
                    return Err(format!("bad label {item:?}"));
                }
                gold.insert((parts[0].into(), parts[1].into(), parts[2].into()));
            }
        }
        out.push((phrase.to_string(), gold));
    }
    Ok(out)
}

fn criterion_6_precision() -> Outcome {
    let lex = Lexicon::builtin();
    let corpus = load_gold()?;
    if corpus.len() != 200 {
        return Err(format!("desk corpus has {} phrases, expected 200", corpus.len()));
    }
    let (mut produced, mut correct, mut gold_total) = (0usize, 0usize, 0usize);
    let mut wrong = Vec::new();
    for (phrase, gold) in &corpus {
        gold_total += gold.len();
        for t in region_triples(phrase, &lex) {
            produced += 1;
            if gold.contains(&t) {
                correct += 1;
            } else {
                wrong.push(format!("{phrase:?} -> {t:?}"));
            }
        }
    }
    let precision = correct as f64 / produced.max(1) as f64;
    let recall = correct as f64 / gold_total.max(1) as f64;
    let summary = format!("precision {correct}/{produced} = {precision:.4}, recall {correct}/{gold_total} = {recall:.4}");
    for w in &wrong {
        println!("    wrong: {w}");
    }
    if precision >= 0.95 {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn run_pipeline(workers: usize, dir: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let lex = Lexicon::builtin();
    let corpus = load_scene_corpus(data("scene_50.tsv")).map_err(|e| e.to_string())?;
    let kb = load_kb(data("kb_toy.tsv")).map_err(|e| e.to_string())?;
    let config = ExportConfig::default();
    let opts = BuildOptions { workers, ..BuildOptions::from_config(&config) };
    let out = build_dataset(&corpus, Some(&kb), &lex, &opts).map_err(|e| e.to_string())?;
    let samples = build_all_samples(&out.records, &config, workers).map_err(|e| e.to_string())?;
    let ds = dir.join(format!("dataset_{workers}.tsv"));
    let inst = dir.join(format!("instructions_{workers}.jsonl"));
    export_dataset(&out.records, &ds).map_err(|e| e.to_string())?;
    visual_commonsense::instruct::export_samples(&samples, &inst).map_err(|e| e.to_string())?;
    Ok((std::fs::read(ds).unwrap(), std::fs::read(inst).unwrap()))
}

fn criterion_7_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (d1, i1) = run_pipeline(1, dir.path())?;
    let (d8, i8) = run_pipeline(8, dir.path())?;
    if d1 != d8 {
        return Err("dataset files differ between 1 and 8 workers".into());
    }
    if i1 != i8 {
        return Err("instruction files differ between 1 and 8 workers".into());
    }
    if d1.is_empty() || i1.is_empty() {
        return Err("empty output".into());
    }
    Ok(format!("dataset {} bytes, instructions {} bytes, identical", d1.len(), i1.len()))
}

fn criterion_8_sep_counts() -> Outcome {
    let strategy = (1usize..8, 0usize..8, 0usize..8, 1usize..25, any::<u64>());
    runner(256)
        .run(&strategy, |(m, k, j, n, seed)| {
            prop_assume!(k + j >= 1);
            let config = ExportConfig { m, k, j, seed, ..ExportConfig::default() };
            let mut triples = Vec::new();
            for i in 0..n {
                triples.push(CommonsenseTriple::seen(ObjectId(1), CategoryPath::SEEN_HAS_PROPERTY, format!("s{i}"), Provenance::SceneTriple));
                triples.push(CommonsenseTriple {
                    head: ObjectId(1),
                    category: CategoryPath::UNSEEN_USED_FOR,
                    tail: format!("u{i}"),
                    provenance: Provenance::KbRetrieval,
                    score: 1.0,
                });
            }
            let object = GroundedObject { object_id: ObjectId(1), image_id: ImageId(9), name: "man".into(), bbox: BBox::new(0, 0, 4, 4).unwrap() };
            let record = DatasetRecord { image_id: ImageId(9), objects: vec![ObjectEntry::new(object, triples)] };
            let samples = build_instruction_samples(&record, &config);
            prop_assert_eq!(samples.len(), 2);
            let seen_seps = samples[0].target.matches("[sep]").count();
            let unseen_seps = samples[1].target.matches("[sep]").count();
            prop_assert_eq!(seen_seps, m.min(n) - 1);
            prop_assert_eq!(unseen_seps, k.min(n) + j.min(n.saturating_sub(k)) - 1);
            Ok(())
        })
        .map(|_| "256 cases match closed form".to_string())
        .map_err(|e| e.to_string())
}

fn criterion_9_full_scale() -> Option<Outcome> {
    let scene = std::env::var_os("VCKB_FULL_SCENE")?;
    let kb = std::env::var_os("VCKB_FULL_KB")?;
    let run = || -> Outcome {
        let lex = Lexicon::builtin();
        let corpus = load_scene_corpus(&scene).map_err(|e| e.to_string())?;
        let kb = load_kb(&kb).map_err(|e| e.to_string())?;
        let out = build_dataset(&corpus, Some(&kb), &lex, &BuildOptions::default()).map_err(|e| e.to_string())?;
        let s = compute_stats(&out.records);
        let names_ok = (s.unique_object_names as f64 - 18_136.0).abs() <= 0.02 * 18_136.0;
        let total = s.total_triples() as f64;
        let magnitude_ok = (1.4e6..1.4e8).contains(&total);
        let summary = format!(
            "images {}, boxes {}, names {}, triples {}",
            s.image_count, s.bbox_count, s.unique_object_names, s.total_triples()
        );
        if s.image_count == 106_277 && s.bbox_count == 2_449_126 && names_ok && magnitude_ok {
            Ok(summary)
        } else {
            Err(summary)
        }
    };
    Some(run())
}

fn main() {
    let mut failed = 0;
    let mut report = |n: u32, name: &str, outcome: Option<Outcome>| {
        let line = match outcome {
            Some(Ok(msg)) => format!("criterion {n} {name}: PASS ({msg})"),
            Some(Err(msg)) => {
                failed += 1;
                format!("criterion {n} {name}: FAIL ({msg})")
            }
            None => format!("criterion {n} {name}: SKIP (set VCKB_FULL_SCENE and VCKB_FULL_KB)"),
        };
        println!("{line}");
    };
    report(1, "mapping-rule golden suite", Some(criterion_1_mapping_rules()));
    report(2, "taxonomy golden suite", Some(criterion_2_taxonomy()));
    report(3, "geometry oracle", Some(criterion_3_geometry()));
    report(4, "co-occurrence count", Some(criterion_4_cooccurrence()));
    report(5, "unseen retrieval oracle and sort", Some(criterion_5_unseen()));
    report(6, "desk corpus precision", Some(criterion_6_precision()));
    report(7, "export determinism", Some(criterion_7_determinism()));
    report(8, "instruction sep counts", Some(criterion_8_sep_counts()));
    report(9, "full-scale reproduction", criterion_9_full_scale());
    if failed > 0 {
        std::process::exit(1);
    }
}
