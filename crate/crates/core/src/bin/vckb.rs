use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use visual_commonsense::dataset::{export_dataset, import_dataset, query_str, write_dataset_to, DatasetRecord};
use visual_commonsense::instruct::{export_samples, write_samples_to};
use visual_commonsense::pipeline::build_all_samples;
use visual_commonsense::{
    build_dataset, compute_stats, load_kb, load_scene_corpus, BuildOptions, Error, ExportConfig, Lexicon, Result,
};

#[derive(Parser)]
#[command(name = "vckb", version, about = "Build and query a grounded visual-commonsense dataset")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a scene corpus (and KB), print record counts, and with --out
    /// write the corpus back in canonical form.
    Ingest(Common),
    /// Seen triples only.
    BuildSeen(Common),
    /// Unseen triples only; needs --kb.
    BuildUnseen(Common),
    /// Corpus statistics from --dataset or a fresh build.
    Stats(Common),
    /// Full dataset, seen and unseen.
    Export(Common),
    /// Instruction samples as JSON lines.
    ExportInstructions(Common),
    /// Triples of one category for an object name.
    Query(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    scene: Option<PathBuf>,
    #[arg(long)]
    kb: Option<PathBuf>,
    /// Directory of lexicon lists overriding the built-in ones.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// A previously exported dataset file.
    #[arg(long)]
    dataset: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    sep: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    object: Option<String>,
    #[arg(long)]
    category: Option<String>,
    /// Print skip counters to stderr.
    #[arg(long)]
    diagnostics: bool,
}

impl Common {
    fn config(&self) -> Result<ExportConfig> {
        let mut c = match &self.config {
            Some(p) => ExportConfig::load(p)?,
            None => ExportConfig::default(),
        };
        if let Some(v) = self.tau {
            c.tau = v;
        }
        if let Some(v) = self.m {
            c.m = v;
        }
        if let Some(v) = self.k {
            c.k = v;
        }
        if let Some(v) = self.j {
            c.j = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = &self.sep {
            c.sep = v.clone();
        }
        c.validate()?;
        Ok(c)
    }

    fn lexicon(&self) -> Result<Lexicon> {
        let lex = match &self.lexicon {
            Some(dir) => Lexicon::load_dir(dir)?,
            None => Lexicon::builtin(),
        };
        lex.validate()?;
        Ok(lex)
    }

    fn require<'a>(&self, v: &'a Option<PathBuf>, flag: &str) -> Result<&'a PathBuf> {
        v.as_ref().ok_or_else(|| Error::InvalidConfig(format!("--{flag} is required")))
    }

    fn build(&self, config: &ExportConfig, include_seen: bool, include_unseen: bool) -> Result<Vec<DatasetRecord>> {
        let lex = self.lexicon()?;
        let corpus = load_scene_corpus(self.require(&self.scene, "scene")?)?;
        let kb = match &self.kb {
            Some(p) => Some(load_kb(p)?),
            None => None,
        };
        let opts = BuildOptions {
            include_seen,
            include_unseen,
            workers: self.workers,
            ..BuildOptions::from_config(config)
        };
        let out = build_dataset(&corpus, kb.as_ref(), &lex, &opts)?;
        if self.diagnostics {
            eprintln!("{}", out.diagnostics);
        }
        Ok(out.records)
    }

    /// Records from --dataset if given, else a full build.
    fn records(&self, config: &ExportConfig) -> Result<Vec<DatasetRecord>> {
        match &self.dataset {
            Some(p) => import_dataset(p),
            None => self.build(config, true, true),
        }
    }

    fn write_text(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| io_err(p, e)),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| io_err(&PathBuf::from("<stdout>"), e)),
        }
    }

    fn write_records(&self, records: &[DatasetRecord]) -> Result<()> {
        match &self.out {
            Some(p) => export_dataset(records, p),
            None => {
                let mut out = std::io::stdout().lock();
                write_dataset_to(records, &mut out).map_err(|e| io_err(&PathBuf::from("<stdout>"), e))
            }
        }
    }
}

fn io_err(path: &std::path::Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => {
            a.config()?;
            let corpus = load_scene_corpus(a.require(&a.scene, "scene")?)?;
            let c = corpus.counts();
            let mut text = format!(
                "images\t{}\nobjects\t{}\nscene_triples\t{}\nregions\t{}\n",
                c.images, c.objects, c.triples, c.regions
            );
            if let Some(p) = &a.kb {
                text.push_str(&format!("kb_edges\t{}\n", load_kb(p)?.len()));
            }
            if let Some(p) = &a.out {
                corpus.write(p)?;
            }
            print!("{text}");
            Ok(())
        }
        Command::BuildSeen(a) => {
            let cfg = a.config()?;
            a.write_records(&a.build(&cfg, true, false)?)
        }
        Command::BuildUnseen(a) => {
            let cfg = a.config()?;
            a.require(&a.kb, "kb")?;
            a.write_records(&a.build(&cfg, false, true)?)
        }
        Command::Stats(a) => {
            let cfg = a.config()?;
            a.write_text(&compute_stats(&a.records(&cfg)?).to_tsv())
        }
        Command::Export(a) => {
            let cfg = a.config()?;
            a.write_records(&a.records(&cfg)?)
        }
        Command::ExportInstructions(a) => {
            let cfg = a.config()?;
            let samples = build_all_samples(&a.records(&cfg)?, &cfg, a.workers)?;
            match &a.out {
                Some(p) => export_samples(&samples, p),
                None => write_samples_to(&samples, &mut std::io::stdout().lock())
                    .map_err(|e| io_err(&PathBuf::from("<stdout>"), e)),
            }
        }
        Command::Query(a) => {
            let cfg = a.config()?;
            let object = a.object.as_deref().ok_or_else(|| Error::InvalidConfig("--object is required".into()))?;
            let category = a.category.as_deref().ok_or_else(|| Error::InvalidConfig("--category is required".into()))?;
            let records = a.records(&cfg)?;
            let lex = a.lexicon()?;
            let mut text = String::new();
            for hit in query_str(&records, object, category, &lex)? {
                text.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    hit.image_id, hit.object.object_id, hit.object.name, hit.triple.category, hit.triple.tail
                ));
            }
            a.write_text(&text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("vckb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
