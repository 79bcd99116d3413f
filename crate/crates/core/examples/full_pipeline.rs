//! Full build on the bundled fixture: dataset, stats, instruction samples.
//!
//! `cargo run --example full_pipeline -- [scene] [kb] [out_dir]`

use std::path::PathBuf;

use visual_commonsense::instruct::export_samples;
use visual_commonsense::pipeline::build_all_samples;
use visual_commonsense::{build_dataset, compute_stats, export_dataset, load_kb, load_scene_corpus, BuildOptions, ExportConfig, Lexicon};

fn main() -> visual_commonsense::Result<()> {
    let data = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut args = std::env::args().skip(1);
    let scene = args.next().map(PathBuf::from).unwrap_or(data.join("scene_50.tsv"));
    let kb = args.next().map(PathBuf::from).unwrap_or(data.join("kb_toy.tsv"));
    let out = args.next().map(PathBuf::from).unwrap_or(std::env::temp_dir().join("vckb_example"));
    std::fs::create_dir_all(&out).expect("create output dir");

    let lex = Lexicon::builtin();
    let config = ExportConfig::default();
    let corpus = load_scene_corpus(&scene)?;
    let kb = load_kb(&kb)?;
    let built = build_dataset(&corpus, Some(&kb), &lex, &BuildOptions::from_config(&config))?;
    eprintln!("{}", built.diagnostics);

    print!("{}", compute_stats(&built.records).to_tsv());
    export_dataset(&built.records, out.join("dataset.tsv"))?;
    let samples = build_all_samples(&built.records, &config, 0)?;
    export_samples(&samples, out.join("instructions.jsonl"))?;
    println!("wrote {} records and {} samples to {}", built.records.len(), samples.len(), out.display());
    Ok(())
}
