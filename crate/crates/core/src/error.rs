use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid order n = {0}: a circulant graph needs n >= 3")]
    OrderTooSmall(usize),

    #[error("generator list is empty")]
    EmptyGenerators,

    #[error("generator {gen} is outside [1, {max}] for n = {n}")]
    GeneratorOutOfRange { gen: i64, n: usize, max: usize },

    #[error("vertex {vertex} is outside Z_{n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("a code must be nonempty")]
    EmptyCode,

    #[error("code lives in Z_{code} but the graph has order {graph}")]
    OrderMismatch { code: usize, graph: usize },

    #[error("period {period} does not divide n = {n}")]
    PeriodDoesNotDivide { period: usize, n: usize },

    #[error("residue {residue} is outside [0, {period})")]
    ResidueOutOfRange { residue: usize, period: usize },

    #[error("family {family} not applicable: {condition}")]
    NotApplicable {
        family: &'static str,
        condition: String,
    },

    #[error("bound {bound} not applicable: {reason}")]
    BoundNotApplicable {
        bound: &'static str,
        reason: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("solver supports n <= {max}, got n = {n}")]
    SolverOrderTooLarge { n: usize, max: usize },

    #[error("malformed code document: {0}")]
    Format(String),

    #[error("unknown {what} `{name}`")]
    UnknownName { what: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
