//! Group descriptors, normal forms and the property knowledge base.

pub mod cayley;
pub mod descriptor;
pub mod engine;
pub mod kb;
pub mod rewrite;
pub mod snf;
pub mod subgroup;
pub mod word;

use thiserror::Error;

pub use cayley::{cayley_ball, CayleyBall, DEFAULT_MAX_CELLS, MAX_RADIUS};
pub use descriptor::{GroupDescriptor, Presentation, SymbolicKind};
pub use engine::NormalForm;
pub use kb::{embedding_facts, factor_of, properties_of, EmbeddingFacts, Fact, GroupProperties};
pub use rewrite::RewritingSystem;
pub use snf::{abelianize, smith_diagonal, AbelianInvariants};
pub use word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("cannot parse word {word:?} at token {token:?}")]
    BadWord { word: String, token: String },
    #[error("rewriting system is not confluent: {left:?} and {right:?} are both irreducible")]
    NotConfluent { left: Word, right: Word },
    #[error("rule is not shortlex decreasing")]
    NotShortlexDecreasing { lhs: Word, rhs: Word },
    #[error("word uses a generator outside the alphabet")]
    GeneratorOutOfRange,
    #[error("completion exceeded {0} rules")]
    CompletionDiverged(usize),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("word problem unavailable: {0}")]
    WordProblemUnavailable(String),
    #[error("edge injection is not injective")]
    NotInjective,
    #[error("ball too large: {what} exceeds {limit}")]
    BallTooLarge { limit: usize, what: &'static str },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("relator {0} is not trivial under the rewriting system")]
    RelatorNotTrivial(String),
    #[error("presentation is partial (contains symbolic pieces)")]
    IncompletePresentation,
    #[error("refusing estimated or unknown properties for {0}")]
    RefusesEstimate(String),
}
