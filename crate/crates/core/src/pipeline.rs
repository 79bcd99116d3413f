//! End-to-end build: corpus (+ optional KB) to dataset records.
//!
//! Images are processed independently on a worker pool; results come back in
//! image-id order regardless of the worker count.

use rayon::prelude::*;

use crate::config::ExportConfig;
use crate::dataset::{DatasetRecord, ObjectEntry};
use crate::diagnostics::Diagnostics;
use crate::error::{Error, Result};
use crate::ingest::{ImageRecord, KbIndex, SceneCorpus};
use crate::instruct::{build_instruction_samples, InstructionSample};
use crate::lexicon::Lexicon;
use crate::seen::{build_seen, DEFAULT_TAU};
use crate::triple::CommonsenseTriple;
use crate::unseen::build_unseen;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildOptions {
    pub tau: f64,
    pub dedup_against_seen: bool,
    pub include_seen: bool,
    pub include_unseen: bool,
    /// 0 means one per available core.
    pub workers: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            tau: DEFAULT_TAU,
            dedup_against_seen: true,
            include_seen: true,
            include_unseen: true,
            workers: 0,
        }
    }
}

impl BuildOptions {
    pub fn from_config(config: &ExportConfig) -> Self {
        BuildOptions {
            tau: config.tau,
            dedup_against_seen: config.dedup_against_seen,
            ..BuildOptions::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOutput {
    pub records: Vec<DatasetRecord>,
    pub diagnostics: Diagnostics,
}

/// Builds the record for one image.
pub fn build_record(
    image: &ImageRecord,
    kb: Option<&KbIndex>,
    lexicon: &Lexicon,
    opts: &BuildOptions,
) -> (DatasetRecord, Diagnostics) {
    let mut diag = Diagnostics::default();
    let seen = build_seen(image, lexicon, opts.tau, &mut diag);
    let unseen = match kb {
        Some(kb) if opts.include_unseen => {
            build_unseen(image, &seen, kb, lexicon, opts.dedup_against_seen, &mut diag)
        }
        _ => Vec::new(),
    };
    let seen = if opts.include_seen { seen } else { Vec::new() };

    let objects = image
        .objects
        .iter()
        .map(|o| {
            let own: Vec<CommonsenseTriple> = seen
                .iter()
                .chain(unseen.iter())
                .filter(|t| t.head == o.object_id)
                .cloned()
                .collect();
            ObjectEntry::new(o.clone(), own)
        })
        .collect();
    (DatasetRecord { image_id: image.id, objects }, diag)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invariant(format!("worker pool: {e}")))
}

pub fn build_dataset(
    corpus: &SceneCorpus,
    kb: Option<&KbIndex>,
    lexicon: &Lexicon,
    opts: &BuildOptions,
) -> Result<BuildOutput> {
    if !(opts.tau > 0.0 && opts.tau <= 1.0) {
        return Err(Error::InvalidConfig(format!("tau must be in (0, 1], got {}", opts.tau)));
    }
    let images: Vec<&ImageRecord> = corpus.images().collect();
    let results: Vec<(DatasetRecord, Diagnostics)> = pool(opts.workers)?.install(|| {
        images
            .par_iter()
            .map(|img| build_record(img, kb, lexicon, opts))
            .collect()
    });
    let mut records = Vec::with_capacity(results.len());
    let mut diagnostics = Diagnostics::default();
    for (r, d) in results {
        r.check_invariants()?;
        records.push(r);
        diagnostics += d;
    }
    Ok(BuildOutput { records, diagnostics })
}

/// Instruction samples for every record, in record order.
pub fn build_all_samples(records: &[DatasetRecord], config: &ExportConfig, workers: usize) -> Result<Vec<InstructionSample>> {
    config.validate()?;
    let per_record: Vec<Vec<InstructionSample>> = pool(workers)?.install(|| {
        records
            .par_iter()
            .map(|r| build_instruction_samples(r, config))
            .collect()
    });
    Ok(per_record.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::CategoryPath;

    const CORPUS: &str = "I\t1\t800\t600\n\
        O\t1\t1\tman\t100\t200\t80\t200\n\
        O\t2\t1\tcar\t300\t250\t250\t150\n\
        T\t1\t1\tA\tis\ttall\n\
        R\t1\t300\t250\t250\t150\ta small car\n\
        I\t2\t-\t-\n\
        O\t3\t2\tdog\t0\t0\t10\t10\n";

    const KB: &str = "car\tUsedFor\ttransport\t2.0\nman\tCapableOf\tdrive a car\t1.0\ncar\tHasProperty\tsmall\t1.0\n";

    #[test]
    fn records_cover_every_object() {
        let corpus = SceneCorpus::parse_str(CORPUS).unwrap();
        let kb = KbIndex::parse_str(KB).unwrap();
        let out = build_dataset(&corpus, Some(&kb), &Lexicon::builtin(), &BuildOptions::default()).unwrap();
        assert_eq!(out.records.len(), 2);
        assert_eq!(out.records[1].objects.len(), 1);
        assert!(out.records[1].objects[0].groups.is_empty());
        let car = &out.records[0].objects[1];
        assert_eq!(car.group(CategoryPath::SEEN_HAS_PROPERTY).unwrap().triples[0].tail, "small");
        // the KB "small" duplicates a seen property and is dropped
        assert!(car.group(CategoryPath::UNSEEN_HAS_PROPERTY).is_none());
        assert_eq!(out.diagnostics.unseen_dropped_as_seen, 1);
    }

    #[test]
    fn seen_only_and_unseen_only() {
        let corpus = SceneCorpus::parse_str(CORPUS).unwrap();
        let kb = KbIndex::parse_str(KB).unwrap();
        let lex = Lexicon::builtin();
        let seen_only = BuildOptions { include_unseen: false, ..BuildOptions::default() };
        let out = build_dataset(&corpus, Some(&kb), &lex, &seen_only).unwrap();
        assert!(out.records.iter().flat_map(|r| &r.objects).flat_map(|o| o.triples()).all(|t| t.category.is_seen()));
        let unseen_only = BuildOptions { include_seen: false, ..BuildOptions::default() };
        let out = build_dataset(&corpus, Some(&kb), &lex, &unseen_only).unwrap();
        assert!(out.records.iter().flat_map(|r| &r.objects).flat_map(|o| o.triples()).all(|t| !t.category.is_seen()));
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let corpus = SceneCorpus::parse_str(CORPUS).unwrap();
        let kb = KbIndex::parse_str(KB).unwrap();
        let lex = Lexicon::builtin();
        let a = build_dataset(&corpus, Some(&kb), &lex, &BuildOptions { workers: 1, ..BuildOptions::default() }).unwrap();
        let b = build_dataset(&corpus, Some(&kb), &lex, &BuildOptions { workers: 4, ..BuildOptions::default() }).unwrap();
        assert_eq!(a, b);
    }
}
