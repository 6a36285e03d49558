use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("graph is disconnected: vertex {unreached} is not reachable from vertex 0")]
    Disconnected { unreached: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    MultiEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a probability measure: {0}")]
    NotAMeasure(String),
    #[error("measure is not balanced")]
    NotBalanced,
    #[error("bad coefficients: {0}")]
    BadCoefficients(String),
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("extrapolation hypotheses violated: {0}")]
    Hypothesis(String),
    #[error("degenerate line family: the two measures coincide")]
    Degenerate,
    #[error("balanced interval is unbounded on the {0} side")]
    Unbounded(&'static str),
    #[error("bad subsets: {0}")]
    BadSubsets(String),
    #[error("graph has {n} vertices, above the enumeration limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("bad join family spec: {0}")]
    BadSpec(String),
    #[error("empty choice of triples")]
    EmptyChoice,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("not a permutation: {0}")]
    BadPermutation(String),
    #[error("invalid distance matrix: {0}")]
    InvalidMetric(String),
}
