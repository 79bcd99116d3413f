//! Instruction-tuning samples: one per (object, category) with at least one
//! triple, the target being the selected tails joined by the separator.

use std::io::Write;
use std::path::Path;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExportConfig;
use crate::dataset::{DatasetRecord, ObjectEntry};
use crate::error::{Error, Result};
use crate::ingest::{ImageId, ObjectId};
use crate::taxonomy::CategoryPath;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionSample {
    pub instruction: String,
    pub target: String,
}

/// Generator for one (image, object, category) pair. The key is hashed so
/// that neighbouring ids give unrelated streams.
pub fn pair_rng(seed: u64, image: ImageId, object: ObjectId, category: CategoryPath) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(image.0.to_le_bytes());
    h.update(object.0.to_le_bytes());
    h.update(category.canonical().as_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Picks `amount` distinct indices of `0..n` uniformly, returned ascending.
fn sample_sorted(rng: &mut ChaCha8Rng, n: usize, amount: usize) -> Vec<usize> {
    let mut idx = sample(rng, n, amount.min(n)).into_vec();
    idx.sort_unstable();
    idx
}

/// Indices of the tails selected for a seen group of `n` tails.
pub fn select_seen(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<usize> {
    sample_sorted(rng, n, m)
}

/// Indices for an unseen group of `n` sorted tails: the first `k`, then up to
/// `j` drawn from the rest.
pub fn select_unseen(rng: &mut ChaCha8Rng, n: usize, k: usize, j: usize) -> Vec<usize> {
    let top = k.min(n);
    let mut idx: Vec<usize> = (0..top).collect();
    idx.extend(sample_sorted(rng, n - top, j).into_iter().map(|i| i + top));
    idx
}

pub fn render_instruction(config: &ExportConfig, image: ImageId, entry: &ObjectEntry, category: CategoryPath) -> String {
    let b = entry.object.bbox;
    config
        .template
        .replace("{image_id}", &image.to_string())
        .replace("{description}", config.description(category))
        .replace("{name}", &entry.object.name)
        .replace("{category}", &category.canonical())
        .replace("{x}", &b.x().to_string())
        .replace("{y}", &b.y().to_string())
        .replace("{w}", &b.w().to_string())
        .replace("{h}", &b.h().to_string())
}

pub fn build_instruction_samples(record: &DatasetRecord, config: &ExportConfig) -> Vec<InstructionSample> {
    let mut out = Vec::new();
    for entry in &record.objects {
        for group in &entry.groups {
            let n = group.triples.len();
            if n == 0 {
                continue;
            }
            let mut rng = pair_rng(config.seed, record.image_id, entry.object.object_id, group.category);
            let picked = if group.category.is_seen() {
                select_seen(&mut rng, n, config.m)
            } else {
                select_unseen(&mut rng, n, config.k, config.j)
            };
            if picked.is_empty() {
                continue;
            }
            let tails: Vec<&str> = picked.iter().map(|&i| group.triples[i].tail.as_str()).collect();
            out.push(InstructionSample {
                instruction: render_instruction(config, record.image_id, entry, group.category),
                target: tails.join(&config.sep),
            });
        }
    }
    out
}

pub fn write_samples_to(samples: &[InstructionSample], out: &mut impl Write) -> std::io::Result<()> {
    for s in samples {
        serde_json::to_writer(&mut *out, s)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn export_samples(samples: &[InstructionSample], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = std::io::BufWriter::new(file);
    write_samples_to(samples, &mut out).map_err(|e| Error::io(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}
