//! Grounded visual-commonsense knowledge base construction.
//!
//! Scene-graph corpora (objects, attribute/relationship triples, region
//! phrases) are turned into commonsense triples whose head is a grounded
//! object, classified under an eleven-leaf `/Visibility/Aspect/Relation`
//! taxonomy. Seen triples come from the image annotations; unseen ones are
//! retrieved from a general commonsense edge file and ranked by whether they
//! mention other objects in the same image.
//!
//! ```
//! use visual_commonsense::{build_dataset, BuildOptions, Lexicon, SceneCorpus};
//!
//! let corpus = SceneCorpus::parse_str(
//!     "I\t1\t640\t480\nO\t1\t1\tcar\t10\t10\t100\t50\nR\t1\t10\t10\t100\t50\ta small car\n",
//! )?;
//! let out = build_dataset(&corpus, None, &Lexicon::builtin(), &BuildOptions::default())?;
//! let car = &out.records[0].objects[0];
//! assert_eq!(car.groups[0].category.to_string(), "/Seen/Property/HasProperty");
//! assert_eq!(car.groups[0].triples[0].tail, "small");
//! # Ok::<(), visual_commonsense::Error>(())
//! ```

pub mod bbox;
pub mod config;
pub mod dataset;
pub mod diagnostics;
pub mod error;
pub mod ingest;
pub mod instruct;
pub mod lemma;
pub mod lexicon;
pub mod phrase;
pub mod pipeline;
pub mod seen;
pub mod taxonomy;
pub mod triple;
pub mod unseen;

pub use bbox::{overlap_ratio, BBox};
pub use config::ExportConfig;
pub use dataset::{compute_stats, export_dataset, import_dataset, query, DatasetRecord, ObjectEntry, Stats};
pub use diagnostics::Diagnostics;
pub use error::{Error, Result};
pub use ingest::{load_kb, load_scene_corpus, GroundedObject, ImageId, ImageRecord, KbIndex, ObjectId, SceneCorpus};
pub use instruct::{build_instruction_samples, InstructionSample};
pub use lexicon::Lexicon;
pub use phrase::{parse_phrase, PhraseOutcome};
pub use pipeline::{build_dataset, BuildOptions, BuildOutput};
pub use taxonomy::{parse_category, CategoryPath};
pub use triple::{CommonsenseTriple, Provenance};
