//! Scene-graph corpus and commonsense-KB ingestion.
//!
//! Scene corpus files are UTF-8, one tab-separated record per line, with a
//! one-letter record type in the first column:
//!
//! ```text
//! I  image_id  width  height                 (width/height may be "-")
//! O  object_id image_id name x y w h
//! T  image_id  subject_id A|R predicate object
//! R  image_id  x y w h phrase
//! ```
//!
//! For `T` records, `A` (attribute) takes a text literal as `object` and `R`
//! (relationship) takes an object id from the same image. Blank lines and
//! lines starting with `#` are skipped. A directory is read file by file in
//! name order.
//!
//! KB files are tab-separated `head relation tail [weight]`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bbox::BBox;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ImageId(pub u64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectId(pub u64);

impl fmt::Display for ImageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An object instance grounded to a box in one image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroundedObject {
    pub object_id: ObjectId,
    pub image_id: ImageId,
    /// Lowercased, whitespace-normalized.
    pub name: String,
    pub bbox: BBox,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TripleKind {
    Attribute,
    Relationship,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObjectSlot {
    Text(String),
    Object(ObjectId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SceneTriple {
    pub image_id: ImageId,
    pub subject_id: ObjectId,
    pub predicate: String,
    pub object: ObjectSlot,
    pub kind: TripleKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub image_id: ImageId,
    pub phrase: String,
    pub bbox: BBox,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRecord {
    pub id: ImageId,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub objects: Vec<GroundedObject>,
    pub triples: Vec<SceneTriple>,
    pub regions: Vec<Region>,
}

impl ImageRecord {
    pub fn new(id: ImageId, width: Option<u32>, height: Option<u32>) -> Self {
        ImageRecord {
            id,
            width,
            height,
            objects: Vec::new(),
            triples: Vec::new(),
            regions: Vec::new(),
        }
    }

    pub fn image_id(&self) -> ImageId {
        self.id
    }

    pub fn object(&self, id: ObjectId) -> Option<&GroundedObject> {
        self.objects.iter().find(|o| o.object_id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorpusCounts {
    pub images: usize,
    pub objects: usize,
    pub triples: usize,
    pub regions: usize,
}

/// Indexed scene-graph corpus. Images iterate in ascending id order; objects,
/// triples and regions keep their input order within an image.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SceneCorpus {
    images: BTreeMap<ImageId, ImageRecord>,
    counts: CorpusCounts,
}

/// Lowercases and collapses internal whitespace.
pub fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

struct Located<T> {
    source: PathBuf,
    line: usize,
    record: T,
}

/// Image id with optional width and height.
type ImageHeader = (ImageId, Option<u32>, Option<u32>);

#[derive(Default)]
struct RawCorpus {
    images: Vec<Located<ImageHeader>>,
    objects: Vec<Located<GroundedObject>>,
    triples: Vec<Located<SceneTriple>>,
    regions: Vec<Located<Region>>,
}

fn field<T: FromStr>(value: &str, what: &str, src: &Path, line: usize) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::malformed(src, line, format!("bad {what} {value:?}")))
}

fn dimension(value: &str, src: &Path, line: usize) -> Result<Option<u32>> {
    match value.trim() {
        "-" | "" => Ok(None),
        v => field(v, "image dimension", src, line).map(Some),
    }
}

fn parse_box(cols: &[&str], src: &Path, line: usize) -> Result<BBox> {
    let x = field(cols[0], "x", src, line)?;
    let y = field(cols[1], "y", src, line)?;
    let w = field(cols[2], "width", src, line)?;
    let h = field(cols[3], "height", src, line)?;
    BBox::new(x, y, w, h).map_err(|e| Error::malformed(src, line, e.to_string()))
}

impl RawCorpus {
    fn push_line(&mut self, src: &Path, line_no: usize, line: &str) -> Result<()> {
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.starts_with('#') {
            return Ok(());
        }
        let (kind, rest) = line
            .split_once('\t')
            .ok_or_else(|| Error::malformed(src, line_no, "missing record type"))?;
        let wrong_arity = |n: usize| Error::malformed(src, line_no, format!("{kind} record needs {n} fields"));
        match kind {
            "I" => {
                let cols: Vec<&str> = rest.split('\t').collect();
                if cols.len() != 3 {
                    return Err(wrong_arity(3));
                }
                let id = ImageId(field(cols[0], "image id", src, line_no)?);
                let w = dimension(cols[1], src, line_no)?;
                let h = dimension(cols[2], src, line_no)?;
                if w == Some(0) || h == Some(0) {
                    return Err(Error::malformed(src, line_no, "image dimensions must be positive"));
                }
                self.images.push(Located { source: src.into(), line: line_no, record: (id, w, h) });
            }
            "O" => {
                let cols: Vec<&str> = rest.split('\t').collect();
                if cols.len() != 7 {
                    return Err(wrong_arity(7));
                }
                let name = normalize_name(cols[2]);
                if name.is_empty() {
                    return Err(Error::malformed(src, line_no, "empty object name"));
                }
                let record = GroundedObject {
                    object_id: ObjectId(field(cols[0], "object id", src, line_no)?),
                    image_id: ImageId(field(cols[1], "image id", src, line_no)?),
                    name,
                    bbox: parse_box(&cols[3..7], src, line_no)?,
                };
                self.objects.push(Located { source: src.into(), line: line_no, record });
            }
            "T" => {
                let cols: Vec<&str> = rest.split('\t').collect();
                if cols.len() != 5 {
                    return Err(wrong_arity(5));
                }
                let image_id = ImageId(field(cols[0], "image id", src, line_no)?);
                let subject_id = ObjectId(field(cols[1], "subject id", src, line_no)?);
                let predicate = normalize_name(cols[3]);
                let (kind, object) = match cols[2] {
                    "A" => {
                        let text = normalize_name(cols[4]);
                        if text.is_empty() {
                            return Err(Error::malformed(src, line_no, "empty attribute"));
                        }
                        (TripleKind::Attribute, ObjectSlot::Text(text))
                    }
                    "R" => {
                        if predicate.is_empty() {
                            return Err(Error::malformed(src, line_no, "empty relationship predicate"));
                        }
                        let id = ObjectId(field(cols[4], "object id", src, line_no)?);
                        (TripleKind::Relationship, ObjectSlot::Object(id))
                    }
                    other => {
                        return Err(Error::malformed(src, line_no, format!("unknown triple kind {other:?}")))
                    }
                };
                let record = SceneTriple { image_id, subject_id, predicate, object, kind };
                self.triples.push(Located { source: src.into(), line: line_no, record });
            }
            "R" => {
                let cols: Vec<&str> = rest.splitn(6, '\t').collect();
                if cols.len() != 6 {
                    return Err(wrong_arity(6));
                }
                let phrase = cols[5].trim().to_string();
                if phrase.is_empty() {
                    return Err(Error::malformed(src, line_no, "empty region phrase"));
                }
                let record = Region {
                    image_id: ImageId(field(cols[0], "image id", src, line_no)?),
                    bbox: parse_box(&cols[1..5], src, line_no)?,
                    phrase,
                };
                self.regions.push(Located { source: src.into(), line: line_no, record });
            }
            other => return Err(Error::malformed(src, line_no, format!("unknown record type {other:?}"))),
        }
        Ok(())
    }

    fn read(&mut self, src: &Path, reader: impl BufRead) -> Result<()> {
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(src, e))?;
            self.push_line(src, idx + 1, &line)?;
        }
        Ok(())
    }

    fn into_corpus(self) -> Result<SceneCorpus> {
        let mut images: BTreeMap<ImageId, ImageRecord> = BTreeMap::new();
        for Located { source, line, record: (id, width, height) } in self.images {
            if images.contains_key(&id) {
                return Err(Error::malformed(source, line, format!("duplicate image id {id}")));
            }
            images.insert(id, ImageRecord::new(id, width, height));
        }
        let dangling = |source: PathBuf, line: usize, reason: String| Error::DanglingReference { path: source, line, reason };

        let mut owner: HashMap<ObjectId, ImageId> = HashMap::new();
        for Located { source, line, record } in self.objects {
            let Some(image) = images.get_mut(&record.image_id) else {
                return Err(dangling(source, line, format!("object {} in unknown image {}", record.object_id, record.image_id)));
            };
            if owner.insert(record.object_id, record.image_id).is_some() {
                return Err(Error::malformed(source, line, format!("duplicate object id {}", record.object_id)));
            }
            if let (Some(w), Some(h)) = (image.width, image.height) {
                record
                    .bbox
                    .check_within(w, h)
                    .map_err(|e| Error::malformed(&source, line, e.to_string()))?;
            }
            image.objects.push(record);
        }

        for Located { source, line, record } in self.triples {
            let in_image = |id: ObjectId| owner.get(&id) == Some(&record.image_id);
            if !in_image(record.subject_id) {
                return Err(dangling(source, line, format!("subject {} is not an object of image {}", record.subject_id, record.image_id)));
            }
            if let ObjectSlot::Object(obj) = &record.object {
                if !in_image(*obj) {
                    return Err(dangling(source, line, format!("object {} is not an object of image {}", obj, record.image_id)));
                }
            }
            images
                .get_mut(&record.image_id)
                .expect("subject ownership implies the image exists")
                .triples
                .push(record);
        }

        for Located { source, line, record } in self.regions {
            let Some(image) = images.get_mut(&record.image_id) else {
                return Err(dangling(source, line, format!("region in unknown image {}", record.image_id)));
            };
            if let (Some(w), Some(h)) = (image.width, image.height) {
                record
                    .bbox
                    .check_within(w, h)
                    .map_err(|e| Error::malformed(&source, line, e.to_string()))?;
            }
            image.regions.push(record);
        }

        if images.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut corpus = SceneCorpus { images, counts: CorpusCounts::default() };
        corpus.counts = corpus.recount();
        Ok(corpus)
    }
}

fn files_in(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_dir() {
        let mut files = Vec::new();
        for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
            let entry = entry.map_err(|e| Error::io(path, e))?;
            let p = entry.path();
            if p.is_file() {
                files.push(p);
            }
        }
        files.sort();
        Ok(files)
    } else {
        Ok(vec![path.to_path_buf()])
    }
}

/// Loads and validates a scene corpus from a file or a directory of files.
pub fn load_scene_corpus(path: impl AsRef<Path>) -> Result<SceneCorpus> {
    let path = path.as_ref();
    let mut raw = RawCorpus::default();
    for file in files_in(path)? {
        let f = fs::File::open(&file).map_err(|e| Error::io(&file, e))?;
        raw.read(&file, BufReader::new(f))?;
    }
    raw.into_corpus()
}

impl SceneCorpus {
    /// Parses corpus records from an in-memory string.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut raw = RawCorpus::default();
        raw.read(Path::new("<memory>"), text.as_bytes())?;
        raw.into_corpus()
    }

    pub fn images(&self) -> impl Iterator<Item = &ImageRecord> {
        self.images.values()
    }

    pub fn image(&self, id: ImageId) -> Option<&ImageRecord> {
        self.images.get(&id)
    }

    pub fn image_count(&self) -> usize {
        self.counts.images
    }

    /// Number of grounded object boxes.
    pub fn bbox_count(&self) -> usize {
        self.counts.objects
    }

    pub fn counts(&self) -> CorpusCounts {
        self.counts
    }

    /// Recomputes counts by walking every image.
    pub fn recount(&self) -> CorpusCounts {
        self.images.values().fold(CorpusCounts::default(), |mut c, img| {
            c.images += 1;
            c.objects += img.objects.len();
            c.triples += img.triples.len();
            c.regions += img.regions.len();
            c
        })
    }

    /// Writes the corpus in canonical record order (images ascending; then all
    /// objects, triples and regions of that image).
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        self.write_to(&mut out).map_err(|e| Error::io(path, e))?;
        out.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        let dim = |d: Option<u32>| d.map_or_else(|| "-".to_string(), |v| v.to_string());
        for img in self.images.values() {
            writeln!(out, "I\t{}\t{}\t{}", img.image_id(), dim(img.width), dim(img.height))?;
            for o in &img.objects {
                let b = o.bbox;
                writeln!(out, "O\t{}\t{}\t{}\t{}\t{}\t{}\t{}", o.object_id, o.image_id, o.name, b.x(), b.y(), b.w(), b.h())?;
            }
            for t in &img.triples {
                let (kind, object) = match &t.object {
                    ObjectSlot::Text(s) => ("A", s.clone()),
                    ObjectSlot::Object(id) => ("R", id.to_string()),
                };
                writeln!(out, "T\t{}\t{}\t{}\t{}\t{}", t.image_id, t.subject_id, kind, t.predicate, object)?;
            }
            for r in &img.regions {
                let b = r.bbox;
                writeln!(out, "R\t{}\t{}\t{}\t{}\t{}\t{}", r.image_id, b.x(), b.y(), b.w(), b.h(), r.phrase)?;
            }
        }
        Ok(())
    }
}

/// One edge of the commonsense KB.
#[derive(Debug, Clone, PartialEq)]
pub struct KbEdge {
    pub head: String,
    pub relation: String,
    pub tail: String,
    pub weight: f64,
}

/// Normalizes a KB concept: strips a `/c/<lang>/` URI prefix and any trailing
/// sense tag, maps underscores to spaces, lowercases.
pub fn normalize_concept(text: &str) -> String {
    let text = text.trim();
    let text = match text.strip_prefix("/c/") {
        Some(rest) => rest.split('/').nth(1).unwrap_or(""),
        None => text,
    };
    normalize_name(&text.replace('_', " "))
}

fn normalize_relation(text: &str) -> String {
    let text = text.trim();
    text.strip_prefix("/r/").unwrap_or(text).to_string()
}

/// KB edges indexed by `(head, relation)`.
#[derive(Debug, Clone, Default)]
pub struct KbIndex {
    edges: Vec<KbEdge>,
    by_key: HashMap<(String, String), Vec<usize>>,
    heads: HashSet<String>,
}

impl KbIndex {
    pub fn from_edges(edges: Vec<KbEdge>) -> Self {
        let mut by_key: HashMap<(String, String), Vec<usize>> = HashMap::new();
        let mut heads = HashSet::new();
        for (i, e) in edges.iter().enumerate() {
            by_key.entry((e.head.clone(), e.relation.clone())).or_default().push(i);
            heads.insert(e.head.clone());
        }
        KbIndex { edges, by_key, heads }
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        read_kb(Path::new("<memory>"), text.as_bytes())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[KbEdge] {
        &self.edges
    }

    pub fn has_head(&self, head: &str) -> bool {
        self.heads.contains(head)
    }

    /// Edges with this head and relation, in file order.
    pub fn lookup<'a>(&'a self, head: &str, relation: &str) -> impl Iterator<Item = &'a KbEdge> + 'a {
        self.by_key
            .get(&(head.to_string(), relation.to_string()))
            .into_iter()
            .flatten()
            .map(move |&i| &self.edges[i])
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        for e in &self.edges {
            writeln!(out, "{}\t{}\t{}\t{}", e.head, e.relation, e.tail, e.weight)?;
        }
        Ok(())
    }
}

fn read_kb(src: &Path, reader: impl BufRead) -> Result<KbIndex> {
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(src, e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 || cols.len() > 4 {
            return Err(Error::malformed(src, line_no, "expected head<TAB>relation<TAB>tail[<TAB>weight]"));
        }
        let head = normalize_concept(cols[0]);
        let relation = normalize_relation(cols[1]);
        let tail = normalize_concept(cols[2]);
        if head.is_empty() || tail.is_empty() || relation.is_empty() {
            return Err(Error::malformed(src, line_no, "empty head, relation or tail"));
        }
        let weight = match cols.get(3).map(|w| w.trim()) {
            None | Some("") => 1.0,
            Some(w) => w
                .parse::<f64>()
                .ok()
                .filter(|w| w.is_finite() && *w >= 0.0)
                .ok_or_else(|| Error::malformed(src, line_no, format!("bad weight {w:?}")))?,
        };
        edges.push(KbEdge { head, relation, tail, weight });
    }
    if edges.is_empty() {
        return Err(Error::EmptyKb);
    }
    Ok(KbIndex::from_edges(edges))
}

/// Loads a tab-separated KB edge file.
pub fn load_kb(path: impl AsRef<Path>) -> Result<KbIndex> {
    let path = path.as_ref();
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_kb(path, BufReader::new(f))
}
