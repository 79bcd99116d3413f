//! Seen triples for one annotated image: scene triples, co-occurrence, and
//! localized region phrases.

use visual_commonsense::seen::build_seen;
use visual_commonsense::{Diagnostics, Lexicon, SceneCorpus};

const IMAGE: &str = "\
I\t1\t800\t600
O\t1\t1\tman\t100\t200\t80\t200
O\t2\t1\tcar\t300\t250\t250\t150
O\t3\t1\tskateboard\t120\t380\t60\t20
T\t1\t1\tA\tis\ttall
T\t1\t1\tR\tplaying\t3
R\t1\t95\t195\t100\t210\ta thin man behind the car
R\t1\t290\t240\t270\t170\tyellow car parked on the street
R\t1\t0\t0\t20\t20\ta bird in the sky
";

fn main() {
    let lex = Lexicon::builtin();
    let corpus = SceneCorpus::parse_str(IMAGE).unwrap();
    let image = corpus.images().next().unwrap();
    let mut diag = Diagnostics::default();
    for t in build_seen(image, &lex, 0.5, &mut diag) {
        let name = &image.object(t.head).unwrap().name;
        println!("({name}, {}, {})  [{}]", t.category, t.tail, t.provenance);
    }
    println!("{diag}");
}
