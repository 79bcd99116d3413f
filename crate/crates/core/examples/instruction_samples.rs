//! Builds instruction samples for one record under a few sampling settings.

use visual_commonsense::dataset::ObjectEntry;
use visual_commonsense::{
    build_instruction_samples, BBox, CategoryPath, CommonsenseTriple, DatasetRecord, ExportConfig, GroundedObject,
    ImageId, ObjectId, Provenance,
};

fn main() {
    let head = ObjectId(1);
    let mut triples: Vec<CommonsenseTriple> = ["tall", "thin", "young"]
        .iter()
        .map(|t| CommonsenseTriple::seen(head, CategoryPath::SEEN_HAS_PROPERTY, *t, Provenance::SceneTriple))
        .collect();
    for (tail, score) in [("a", 4.0), ("b", 3.0), ("c", 2.0), ("d", 1.0)] {
        triples.push(CommonsenseTriple {
            head,
            category: CategoryPath::UNSEEN_CAPABLE_OF,
            tail: tail.into(),
            provenance: Provenance::KbRetrieval,
            score,
        });
    }
    let object = GroundedObject { object_id: head, image_id: ImageId(42), name: "man".into(), bbox: BBox::new(100, 200, 80, 200).unwrap() };
    let record = DatasetRecord { image_id: ImageId(42), objects: vec![ObjectEntry::new(object, triples)] };

    for (m, k, j, seed) in [(2, 2, 1, 2024), (2, 2, 1, 7), (1, 4, 0, 2024)] {
        let config = ExportConfig { m, k, j, seed, ..ExportConfig::default() };
        println!("m={m} k={k} j={j} seed={seed}");
        for s in build_instruction_samples(&record, &config) {
            println!("  {}\n    -> {}", s.instruction, s.target);
        }
    }
}
