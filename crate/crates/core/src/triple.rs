use std::fmt;
use std::str::FromStr;

use crate::ingest::ObjectId;
use crate::taxonomy::{CategoryPath, Visibility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    SceneTriple,
    CoOccurrence,
    RegionPhrase,
    KbRetrieval,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::SceneTriple => "scene",
            Provenance::CoOccurrence => "cooccurrence",
            Provenance::RegionPhrase => "region",
            Provenance::KbRetrieval => "kb",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scene" => Ok(Provenance::SceneTriple),
            "cooccurrence" => Ok(Provenance::CoOccurrence),
            "region" => Ok(Provenance::RegionPhrase),
            "kb" => Ok(Provenance::KbRetrieval),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

/// A grounded commonsense triple `(head object, category, tail)`.
///
/// `score` ranks unseen triples and is 0 for seen ones.
#[derive(Debug, Clone, PartialEq)]
pub struct CommonsenseTriple {
    pub head: ObjectId,
    pub category: CategoryPath,
    pub tail: String,
    pub provenance: Provenance,
    pub score: f64,
}

impl CommonsenseTriple {
    pub fn seen(head: ObjectId, category: CategoryPath, tail: impl Into<String>, provenance: Provenance) -> Self {
        CommonsenseTriple {
            head,
            category,
            tail: tail.into(),
            provenance,
            score: 0.0,
        }
    }

    /// Visibility agrees with provenance and the tail has content.
    pub fn is_well_formed(&self) -> bool {
        let unseen = self.category.visibility() == Visibility::Unseen;
        let from_kb = self.provenance == Provenance::KbRetrieval;
        unseen == from_kb && !self.tail.trim().is_empty()
    }
}
