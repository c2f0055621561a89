use thiserror::Error;

use crate::word::Word;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("depth {depth} exceeds the maximum depth {max}")]
    DepthOverflow { depth: usize, max: u8 },

    #[error("pair {source_word}->{target} has unequal lengths")]
    UnequalLength { source_word: Word, target: Word },

    #[error("{side} words {first} and {second} are not prefix-free")]
    NotPrefixFree {
        side: &'static str,
        first: Word,
        second: Word,
    },

    #[error("overlapping {side}: part {part} word {word} meets an earlier part")]
    Overlap {
        side: &'static str,
        part: usize,
        word: Word,
    },

    #[error("level {level} is below the map depth {depth}")]
    LevelTooSmall { level: u8, depth: u8 },

    #[error("word {0} lies outside the domain")]
    OutsideDomain(Word),

    #[error("word {0} is too short to resolve the map")]
    TooShort(Word),

    #[error("map is not total (source kraft {source_kraft}, target kraft {target_kraft})")]
    NotTotal {
        source_kraft: String,
        target_kraft: String,
    },

    #[error("invariant-measure obstruction: kraft {kraft_a} != {kraft_b} at lambda = 1/2")]
    InvariantMeasureObstruction { kraft_a: String, kraft_b: String },

    #[error("depth exhausted at level {level}: best leftover {best} exceeds {epsilon}")]
    DepthExhausted {
        level: u8,
        best: String,
        epsilon: String,
    },

    #[error("table would need {pieces} pieces, above the limit {limit}")]
    TooManyPieces { pieces: u128, limit: u128 },

    #[error("permutation degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group degree {degree} exceeds the search bound {bound}")]
    GroupTooLarge { degree: usize, bound: usize },

    #[error("no conjugator on piece {piece}")]
    NoConjugator { piece: Word },

    #[error("value {value} on piece {piece} has no point of the net within epsilon")]
    NotDense { piece: Word, value: usize },

    #[error("type sets differ: {0}")]
    TypeSetMismatch(String),

    #[error("block is not transitive: {0}")]
    NotTransitive(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}
