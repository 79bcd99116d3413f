//! Dataset records and their line-delimited file format.
//!
//! One image per line, tab-separated, fields in this order:
//!
//! ```text
//! image_id  object_count  { object }*
//! object   := object_id  name  x  y  w  h  group_count  { group }*
//! group    := category  triple_count  { triple }*
//! triple   := provenance  score  tail
//! ```
//!
//! Groups appear in taxonomy order. `name` and `tail` are escaped: backslash
//! as `\\`, tab as `\t`, newline as `\n`, carriage return as `\r`.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::bbox::BBox;
use crate::error::{Error, Result};
use crate::ingest::{GroundedObject, ImageId, ObjectId};
use crate::lemma::lemmatize;
use crate::lexicon::Lexicon;
use crate::taxonomy::{parse_category, CategoryPath};
use crate::triple::{CommonsenseTriple, Provenance};

#[derive(Debug, Clone, PartialEq)]
pub struct CategoryGroup {
    pub category: CategoryPath,
    pub triples: Vec<CommonsenseTriple>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObjectEntry {
    pub object: GroundedObject,
    /// Non-empty groups in taxonomy order.
    pub groups: Vec<CategoryGroup>,
}

impl ObjectEntry {
    /// Groups `triples` by category, keeping their relative order.
    pub fn new(object: GroundedObject, triples: Vec<CommonsenseTriple>) -> Self {
        let mut buckets: BTreeMap<CategoryPath, Vec<CommonsenseTriple>> = BTreeMap::new();
        for t in triples {
            buckets.entry(t.category).or_default().push(t);
        }
        ObjectEntry {
            object,
            groups: buckets
                .into_iter()
                .map(|(category, triples)| CategoryGroup { category, triples })
                .collect(),
        }
    }

    pub fn group(&self, category: CategoryPath) -> Option<&CategoryGroup> {
        self.groups.iter().find(|g| g.category == category)
    }

    pub fn triples(&self) -> impl Iterator<Item = &CommonsenseTriple> {
        self.groups.iter().flat_map(|g| g.triples.iter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetRecord {
    pub image_id: ImageId,
    pub objects: Vec<ObjectEntry>,
}

impl DatasetRecord {
    pub fn triple_count(&self) -> usize {
        self.objects.iter().map(|o| o.triples().count()).sum()
    }

    /// Every triple's head is its enclosing object and every group is
    /// non-empty and homogeneous.
    pub fn check_invariants(&self) -> Result<()> {
        for entry in &self.objects {
            if entry.object.image_id != self.image_id {
                return Err(Error::Invariant(format!(
                    "object {} filed under image {}",
                    entry.object.object_id, self.image_id
                )));
            }
            for g in &entry.groups {
                if g.triples.is_empty() {
                    return Err(Error::Invariant(format!("empty {} group", g.category)));
                }
                for t in &g.triples {
                    if t.head != entry.object.object_id || t.category != g.category || !t.is_well_formed() {
                        return Err(Error::Invariant(format!(
                            "triple ({}, {}, {:?}) misfiled under object {}",
                            t.head, t.category, t.tail, entry.object.object_id
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(text: &str) -> std::result::Result<String, String> {
    let mut out = String::with_capacity(text.len());
    let mut chars = text.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => return Err(format!("bad escape \\{}", other.map(String::from).unwrap_or_default())),
        }
    }
    Ok(out)
}

/// Serializes one record as a single line (without the trailing newline).
pub fn record_to_line(record: &DatasetRecord) -> String {
    let mut f: Vec<String> = vec![record.image_id.to_string(), record.objects.len().to_string()];
    for entry in &record.objects {
        let o = &entry.object;
        f.push(o.object_id.to_string());
        f.push(escape(&o.name));
        f.extend([o.bbox.x(), o.bbox.y(), o.bbox.w(), o.bbox.h()].map(|v| v.to_string()));
        f.push(entry.groups.len().to_string());
        for g in &entry.groups {
            f.push(g.category.canonical());
            f.push(g.triples.len().to_string());
            for t in &g.triples {
                f.push(t.provenance.to_string());
                f.push(t.score.to_string());
                f.push(escape(&t.tail));
            }
        }
    }
    f.join("\t")
}

struct Fields<'a> {
    iter: std::str::Split<'a, char>,
}

impl<'a> Fields<'a> {
    fn next(&mut self, what: &str) -> std::result::Result<&'a str, String> {
        self.iter.next().ok_or_else(|| format!("missing {what}"))
    }

    fn parse<T: std::str::FromStr>(&mut self, what: &str) -> std::result::Result<T, String> {
        let v = self.next(what)?;
        v.parse().map_err(|_| format!("bad {what} {v:?}"))
    }
}

/// Parses one dataset line.
pub fn line_to_record(line: &str) -> std::result::Result<DatasetRecord, String> {
    let mut f = Fields { iter: line.split('\t') };
    let image_id = ImageId(f.parse("image id")?);
    let n_objects: usize = f.parse("object count")?;
    let mut objects = Vec::new();
    for _ in 0..n_objects {
        let object_id = ObjectId(f.parse("object id")?);
        let name = unescape(f.next("object name")?)?;
        if name.is_empty() {
            return Err("empty object name".into());
        }
        let (x, y, w, h) = (f.parse("x")?, f.parse("y")?, f.parse("w")?, f.parse("h")?);
        let bbox = BBox::new(x, y, w, h).map_err(|e| e.to_string())?;
        let n_groups: usize = f.parse("group count")?;
        let mut groups = Vec::new();
        for _ in 0..n_groups {
            let category = parse_category(f.next("category")?).map_err(|e| e.to_string())?;
            if groups.last().is_some_and(|g: &CategoryGroup| g.category >= category) {
                return Err(format!("category {category} out of order"));
            }
            let n_triples: usize = f.parse("triple count")?;
            if n_triples == 0 {
                return Err(format!("empty {category} group"));
            }
            let mut triples = Vec::new();
            for _ in 0..n_triples {
                let provenance: Provenance = f.next("provenance")?.parse()?;
                let score: f64 = f.parse("score")?;
                let tail = unescape(f.next("tail")?)?;
                let t = CommonsenseTriple { head: object_id, category, tail, provenance, score };
                if !t.is_well_formed() {
                    return Err(format!("ill-formed triple {t:?}"));
                }
                triples.push(t);
            }
            groups.push(CategoryGroup { category, triples });
        }
        objects.push(ObjectEntry {
            object: GroundedObject { object_id, image_id, name, bbox },
            groups,
        });
    }
    if f.iter.next().is_some() {
        return Err("trailing fields".into());
    }
    Ok(DatasetRecord { image_id, objects })
}

pub fn write_dataset_to(records: &[DatasetRecord], out: &mut impl Write) -> std::io::Result<()> {
    for r in records {
        out.write_all(record_to_line(r).as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Writes records, one per line, in the given order.
pub fn export_dataset(records: &[DatasetRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_dataset_to(records, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_dataset(src: &Path, reader: impl BufRead) -> Result<Vec<DatasetRecord>> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(src, e))?;
        if line.is_empty() {
            continue;
        }
        out.push(line_to_record(&line).map_err(|reason| Error::malformed(src, idx + 1, reason))?);
    }
    Ok(out)
}

pub fn import_dataset(path: impl AsRef<Path>) -> Result<Vec<DatasetRecord>> {
    let path = path.as_ref();
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_dataset(path, BufReader::new(f))
}

/// Corpus-level counts over built records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    pub image_count: usize,
    pub bbox_count: usize,
    pub unique_object_names: usize,
    /// Distinct (head name, category, tail) tuples per category; always holds
    /// all eleven categories.
    pub per_category: BTreeMap<CategoryPath, usize>,
}

impl Stats {
    pub fn total_triples(&self) -> usize {
        self.per_category.values().sum()
    }

    /// Tab-separated `key value` lines.
    pub fn to_tsv(&self) -> String {
        let mut s = format!(
            "image_count\t{}\nbbox_count\t{}\nunique_object_names\t{}\ntotal_triples\t{}\n",
            self.image_count,
            self.bbox_count,
            self.unique_object_names,
            self.total_triples()
        );
        for (c, n) in &self.per_category {
            s.push_str(&format!("{c}\t{n}\n"));
        }
        s
    }
}

pub fn compute_stats(records: &[DatasetRecord]) -> Stats {
    let mut names: HashSet<&str> = HashSet::new();
    let mut distinct: Vec<HashSet<(&str, &str)>> = vec![HashSet::new(); CategoryPath::ALL.len()];
    let mut bbox_count = 0;
    for r in records {
        bbox_count += r.objects.len();
        for entry in &r.objects {
            names.insert(&entry.object.name);
            for g in &entry.groups {
                for t in &g.triples {
                    distinct[g.category.index()].insert((&entry.object.name, &t.tail));
                }
            }
        }
    }
    Stats {
        image_count: records.len(),
        bbox_count,
        unique_object_names: names.len(),
        per_category: CategoryPath::ALL
            .iter()
            .map(|c| (*c, distinct[c.index()].len()))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryHit<'a> {
    pub image_id: ImageId,
    pub object: &'a GroundedObject,
    pub triple: &'a CommonsenseTriple,
}

/// Triples of `category` whose head name lemmatizes to the same lemma as
/// `object_name`, in record order.
pub fn query<'a>(
    records: &'a [DatasetRecord],
    object_name: &str,
    category: CategoryPath,
    lexicon: &Lexicon,
) -> Vec<QueryHit<'a>> {
    let want = lemmatize(&crate::ingest::normalize_name(object_name), lexicon);
    let mut hits = Vec::new();
    for r in records {
        for entry in &r.objects {
            if lemmatize(&entry.object.name, lexicon) != want {
                continue;
            }
            if let Some(g) = entry.group(category) {
                hits.extend(g.triples.iter().map(|t| QueryHit {
                    image_id: r.image_id,
                    object: &entry.object,
                    triple: t,
                }));
            }
        }
    }
    hits
}

/// [`query`] with the category given as text.
pub fn query_str<'a>(
    records: &'a [DatasetRecord],
    object_name: &str,
    category: &str,
    lexicon: &Lexicon,
) -> Result<Vec<QueryHit<'a>>> {
    Ok(query(records, object_name, parse_category(category)?, lexicon))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn object(id: u64, name: &str) -> GroundedObject {
        GroundedObject {
            object_id: ObjectId(id),
            image_id: ImageId(5),
            name: name.into(),
            bbox: BBox::new(1, 2, 3, 4).unwrap(),
        }
    }

    fn record() -> DatasetRecord {
        let seen = |c, tail: &str| CommonsenseTriple::seen(ObjectId(1), c, tail, Provenance::RegionPhrase);
        let unseen = |tail: &str, score| CommonsenseTriple {
            head: ObjectId(1),
            category: CategoryPath::UNSEEN_USED_FOR,
            tail: tail.into(),
            provenance: Provenance::KbRetrieval,
            score,
        };
        DatasetRecord {
            image_id: ImageId(5),
            objects: vec![
                ObjectEntry::new(
                    object(1, "car"),
                    vec![
                        unseen("drive\tto\nwork \\ home", 2.5),
                        seen(CategoryPath::SEEN_HAS_PROPERTY, "yellow"),
                        unseen("transport", 0.1),
                    ],
                ),
                ObjectEntry::new(object(2, "men"), Vec::new()),
            ],
        }
    }

    #[test]
    fn grouping_follows_taxonomy_order_and_keeps_order_within_groups() {
        let r = record();
        let g = &r.objects[0].groups;
        assert_eq!(g[0].category, CategoryPath::SEEN_HAS_PROPERTY);
        assert_eq!(g[1].triples[0].tail, "drive\tto\nwork \\ home");
        assert_eq!(g[1].triples[1].tail, "transport");
        r.check_invariants().unwrap();
    }

    #[test]
    fn line_escapes_and_round_trips() {
        let r = record();
        let line = record_to_line(&r);
        assert!(!line.contains('\n'));
        assert!(line.contains("drive\\tto\\nwork \\\\ home"));
        assert_eq!(line_to_record(&line).unwrap(), r);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.tsv");
        export_dataset(&[record()], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 1);
        assert_eq!(import_dataset(&path).unwrap(), vec![record()]);
    }

    #[test]
    fn malformed_lines() {
        let line = record_to_line(&record());
        for bad in [
            format!("{line}\textra"),
            line.replace("/Seen/Property/HasProperty", "/Seen/Action/UsedFor"),
            line.replacen("\t2\t", "\t3\t", 1),
            "x".to_string(),
            line.replace("\\\\", "\\q"),
        ] {
            assert!(line_to_record(&bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn stats_count_distinct_tuples() {
        let mut r2 = record();
        r2.image_id = ImageId(6);
        for e in &mut r2.objects {
            e.object.image_id = ImageId(6);
        }
        let s = compute_stats(&[record(), r2]);
        assert_eq!((s.image_count, s.bbox_count, s.unique_object_names), (2, 4, 2));
        assert_eq!(s.per_category[&CategoryPath::UNSEEN_USED_FOR], 2);
        assert_eq!(s.per_category[&CategoryPath::SEEN_HAS_PROPERTY], 1);
        assert_eq!(s.per_category.len(), 11);
        assert_eq!(s.total_triples(), 3);

        let empty = compute_stats(&[]);
        assert_eq!((empty.image_count, empty.bbox_count, empty.unique_object_names, empty.total_triples()), (0, 0, 0, 0));
        assert_eq!(empty.per_category.len(), 11);
    }

    #[test]
    fn query_by_lemma() {
        let l = Lexicon::builtin();
        let recs = [record()];
        assert_eq!(query(&recs, "cars", CategoryPath::UNSEEN_USED_FOR, &l).len(), 2);
        assert_eq!(query(&recs, "car", CategoryPath::UNSEEN_USED_FOR, &l)[0].triple.tail, "drive\tto\nwork \\ home");
        assert!(query(&recs, "unicorn", CategoryPath::SEEN_HAS_PROPERTY, &l).is_empty());
        assert!(matches!(query_str(&recs, "car", "/Seen/Action/UsedFor", &l), Err(Error::InvalidCategory(_))));
    }
}
