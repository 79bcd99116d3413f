//! The three-layer visual-commonsense taxonomy.
//!
//! A category is a path `/<Visibility>/<Aspect>/<Relation>`. Only eleven of
//! the 2 x 3 x 7 combinations are meaningful; [`CategoryPath`] cannot be built
//! for any other combination.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Visibility {
    Seen,
    Unseen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aspect {
    Property,
    Action,
    Space,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    HasProperty,
    CreatedBy,
    LocatedNear,
    Relatedness,
    CapableOf,
    UsedFor,
    ReceivesAction,
}

impl Visibility {
    pub const ALL: [Visibility; 2] = [Visibility::Seen, Visibility::Unseen];

    pub fn as_str(self) -> &'static str {
        match self {
            Visibility::Seen => "Seen",
            Visibility::Unseen => "Unseen",
        }
    }
}

impl Aspect {
    pub const ALL: [Aspect; 3] = [Aspect::Property, Aspect::Action, Aspect::Space];

    pub fn as_str(self) -> &'static str {
        match self {
            Aspect::Property => "Property",
            Aspect::Action => "Action",
            Aspect::Space => "Space",
        }
    }
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::HasProperty,
        Relation::CreatedBy,
        Relation::LocatedNear,
        Relation::Relatedness,
        Relation::CapableOf,
        Relation::UsedFor,
        Relation::ReceivesAction,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Relation::HasProperty => "HasProperty",
            Relation::CreatedBy => "CreatedBy",
            Relation::LocatedNear => "LocatedNear",
            Relation::Relatedness => "Relatedness",
            Relation::CapableOf => "CapableOf",
            Relation::UsedFor => "UsedFor",
            Relation::ReceivesAction => "ReceivesAction",
        }
    }
}

macro_rules! name_lookup {
    ($ty:ty, $s:expr) => {
        <$ty>::ALL.iter().copied().find(|v| v.as_str() == $s)
    };
}

/// One leaf of the taxonomy.
///
/// Ordering follows [`CategoryPath::ALL`], which is also the order categories
/// are grouped in exported records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CategoryPath {
    visibility: Visibility,
    aspect: Aspect,
    relation: Relation,
}

const fn leaf(visibility: Visibility, aspect: Aspect, relation: Relation) -> CategoryPath {
    CategoryPath {
        visibility,
        aspect,
        relation,
    }
}

impl CategoryPath {
    pub const SEEN_HAS_PROPERTY: CategoryPath =
        leaf(Visibility::Seen, Aspect::Property, Relation::HasProperty);
    pub const SEEN_LOCATED_NEAR: CategoryPath =
        leaf(Visibility::Seen, Aspect::Space, Relation::LocatedNear);
    pub const SEEN_RELATEDNESS: CategoryPath =
        leaf(Visibility::Seen, Aspect::Space, Relation::Relatedness);
    pub const SEEN_CAPABLE_OF: CategoryPath =
        leaf(Visibility::Seen, Aspect::Action, Relation::CapableOf);
    pub const SEEN_RECEIVES_ACTION: CategoryPath =
        leaf(Visibility::Seen, Aspect::Action, Relation::ReceivesAction);
    pub const UNSEEN_HAS_PROPERTY: CategoryPath =
        leaf(Visibility::Unseen, Aspect::Property, Relation::HasProperty);
    pub const UNSEEN_CREATED_BY: CategoryPath =
        leaf(Visibility::Unseen, Aspect::Property, Relation::CreatedBy);
    pub const UNSEEN_LOCATED_NEAR: CategoryPath =
        leaf(Visibility::Unseen, Aspect::Space, Relation::LocatedNear);
    pub const UNSEEN_CAPABLE_OF: CategoryPath =
        leaf(Visibility::Unseen, Aspect::Action, Relation::CapableOf);
    pub const UNSEEN_USED_FOR: CategoryPath =
        leaf(Visibility::Unseen, Aspect::Action, Relation::UsedFor);
    pub const UNSEEN_RECEIVES_ACTION: CategoryPath =
        leaf(Visibility::Unseen, Aspect::Action, Relation::ReceivesAction);

    /// Every valid leaf, seen layer first.
    pub const ALL: [CategoryPath; 11] = [
        Self::SEEN_HAS_PROPERTY,
        Self::SEEN_LOCATED_NEAR,
        Self::SEEN_RELATEDNESS,
        Self::SEEN_CAPABLE_OF,
        Self::SEEN_RECEIVES_ACTION,
        Self::UNSEEN_HAS_PROPERTY,
        Self::UNSEEN_CREATED_BY,
        Self::UNSEEN_LOCATED_NEAR,
        Self::UNSEEN_CAPABLE_OF,
        Self::UNSEEN_USED_FOR,
        Self::UNSEEN_RECEIVES_ACTION,
    ];

    /// Returns the leaf for this combination, or `None` if the taxonomy has no
    /// such leaf.
    pub fn new(visibility: Visibility, aspect: Aspect, relation: Relation) -> Option<Self> {
        let candidate = leaf(visibility, aspect, relation);
        Self::ALL.contains(&candidate).then_some(candidate)
    }

    pub fn visibility(self) -> Visibility {
        self.visibility
    }

    pub fn aspect(self) -> Aspect {
        self.aspect
    }

    pub fn relation(self) -> Relation {
        self.relation
    }

    pub fn is_seen(self) -> bool {
        self.visibility == Visibility::Seen
    }

    /// Position in [`CategoryPath::ALL`].
    pub fn index(self) -> usize {
        Self::ALL
            .iter()
            .position(|c| *c == self)
            .expect("CategoryPath values are always valid leaves")
    }

    pub fn canonical(self) -> String {
        self.to_string()
    }
}

impl PartialOrd for CategoryPath {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CategoryPath {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl fmt::Display for CategoryPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "/{}/{}/{}",
            self.visibility.as_str(),
            self.aspect.as_str(),
            self.relation.as_str()
        )
    }
}

impl FromStr for CategoryPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_category(s)
    }
}

/// Parses a canonical `/<Visibility>/<Aspect>/<Relation>` string.
/// Segment names are matched case-sensitively.
pub fn parse_category(text: &str) -> Result<CategoryPath, Error> {
    let invalid = || Error::InvalidCategory(text.to_string());
    let rest = text.strip_prefix('/').ok_or_else(invalid)?;
    let mut parts = rest.split('/');
    let (Some(v), Some(a), Some(r), None) = (parts.next(), parts.next(), parts.next(), parts.next())
    else {
        return Err(invalid());
    };
    let visibility = name_lookup!(Visibility, v).ok_or_else(invalid)?;
    let aspect = name_lookup!(Aspect, a).ok_or_else(invalid)?;
    let relation = name_lookup!(Relation, r).ok_or_else(invalid)?;
    CategoryPath::new(visibility, aspect, relation).ok_or_else(invalid)
}

/// Maps a commonsense-KB relation label onto the unseen layer. Labels outside
/// the six unseen relations give `None`.
pub fn kb_relation_to_category(relation_name: &str) -> Option<CategoryPath> {
    match relation_name {
        "HasProperty" => Some(CategoryPath::UNSEEN_HAS_PROPERTY),
        "CreatedBy" => Some(CategoryPath::UNSEEN_CREATED_BY),
        "LocatedNear" => Some(CategoryPath::UNSEEN_LOCATED_NEAR),
        "CapableOf" => Some(CategoryPath::UNSEEN_CAPABLE_OF),
        "UsedFor" => Some(CategoryPath::UNSEEN_USED_FOR),
        "ReceivesAction" => Some(CategoryPath::UNSEEN_RECEIVES_ACTION),
        _ => None,
    }
}

/// KB relation labels that map into the unseen layer.
pub const KB_RELATIONS: [&str; 6] = [
    "HasProperty",
    "CreatedBy",
    "LocatedNear",
    "CapableOf",
    "UsedFor",
    "ReceivesAction",
];

/// Coarse word class used when mapping scene-graph predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordClass {
    Adjective,
    Preposition,
    Verb,
    Noun,
    Determiner,
    Other,
}

impl FromStr for WordClass {
    type Err = Error;

    /// Accepts the tagger's tags as well as common universal tags.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ADJ" | "JJ" => WordClass::Adjective,
            "PREP" | "ADP" | "IN" => WordClass::Preposition,
            "VERB" | "VBG" | "VBN" | "VB" | "VBD" | "VBZ" | "VBP" => WordClass::Verb,
            "NOUN" | "NN" | "NNS" => WordClass::Noun,
            "DET" | "DT" => WordClass::Determiner,
            "OTHER" | "X" => WordClass::Other,
            _ => return Err(Error::InvalidConfig(format!("unknown part-of-speech tag {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Voice {
    Active,
    Passive,
    None,
}

/// Selects the seen leaf for a predicate's word class.
pub fn pos_to_seen_category(class: WordClass, voice: Voice) -> Option<CategoryPath> {
    match (class, voice) {
        (WordClass::Adjective, _) => Some(CategoryPath::SEEN_HAS_PROPERTY),
        (WordClass::Preposition, _) => Some(CategoryPath::SEEN_RELATEDNESS),
        (WordClass::Verb, Voice::Active) => Some(CategoryPath::SEEN_CAPABLE_OF),
        (WordClass::Verb, Voice::Passive) => Some(CategoryPath::SEEN_RECEIVES_ACTION),
        _ => None,
    }
}
