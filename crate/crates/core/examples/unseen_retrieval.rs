//! Retrieves unseen triples from a small edge list and ranks them per object.

use visual_commonsense::unseen::{build_unseen, make_synset};
use visual_commonsense::{Diagnostics, KbIndex, Lexicon, SceneCorpus};

const IMAGE: &str = "\
I\t7\t640\t480
O\t1\t7\tmen\t10\t10\t100\t300
O\t2\t7\tcars\t200\t200\t300\t150
";

const KB: &str = "\
/c/en/man\t/r/CapableOf\tgrow up\t2.0
man\tReceivesAction\thit by a car\t1.0
man\tLocatedNear\tsofa\t1.5
man\tIsA\tperson\t3.0
car\tUsedFor\tdrive to work\t2.0
car\tCreatedBy\tfactory\t1.0
car\tCapableOf\thit a man\t0.5
";

fn main() {
    let lex = Lexicon::builtin();
    let kb = KbIndex::parse_str(KB).unwrap();
    let corpus = SceneCorpus::parse_str(IMAGE).unwrap();
    let image = corpus.images().next().unwrap();
    for o in &image.objects {
        println!("{} -> synset {:?}", o.name, make_synset(o, &lex).forms);
    }
    let mut diag = Diagnostics::default();
    for t in build_unseen(image, &[], &kb, &lex, true, &mut diag) {
        let name = &image.object(t.head).unwrap().name;
        println!("({name}, {}, {})  score {}", t.category, t.tail, t.score);
    }
}
