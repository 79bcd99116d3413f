use std::fmt;
use std::ops::AddAssign;

/// Skip counters collected during a build. Summed over images, so the totals
/// do not depend on how work was split across workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Diagnostics {
    pub scene_triples: u64,
    pub not_mapped: u64,
    pub regions: u64,
    pub unparseable: u64,
    pub empty_phrase: u64,
    pub no_match: u64,
    pub ambiguous: u64,
    /// Relatedness tails that name exactly one object in the region.
    pub tail_grounded: u64,
    /// Relatedness tails kept as plain text.
    pub tail_text_only: u64,
    pub unseen_dropped_as_seen: u64,
}

impl Diagnostics {
    /// Share of regions whose phrase fell outside the grammar.
    pub fn skip_rate(&self) -> f64 {
        if self.regions == 0 {
            0.0
        } else {
            (self.unparseable + self.empty_phrase) as f64 / self.regions as f64
        }
    }
}

impl AddAssign for Diagnostics {
    fn add_assign(&mut self, o: Self) {
        self.scene_triples += o.scene_triples;
        self.not_mapped += o.not_mapped;
        self.regions += o.regions;
        self.unparseable += o.unparseable;
        self.empty_phrase += o.empty_phrase;
        self.no_match += o.no_match;
        self.ambiguous += o.ambiguous;
        self.tail_grounded += o.tail_grounded;
        self.tail_text_only += o.tail_text_only;
        self.unseen_dropped_as_seen += o.unseen_dropped_as_seen;
    }
}

impl std::iter::Sum for Diagnostics {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Diagnostics::default(), |mut acc, d| {
            acc += d;
            acc
        })
    }
}

/// One tab-separated summary record.
impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "diagnostics\tscene_triples={}\tnot_mapped={}\tregions={}\tunparseable={}\tempty_phrase={}\tno_match={}\tambiguous={}\ttail_grounded={}\ttail_text_only={}\tunseen_dropped_as_seen={}\tskip_rate={:.4}",
            self.scene_triples,
            self.not_mapped,
            self.regions,
            self.unparseable,
            self.empty_phrase,
            self.no_match,
            self.ambiguous,
            self.tail_grounded,
            self.tail_text_only,
            self.unseen_dropped_as_seen,
            self.skip_rate()
        )
    }
}
