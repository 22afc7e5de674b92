use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed rational `{0}`")]
    Rational(String),
    #[error("malformed exponent key `{0}`")]
    ExponentKey(String),
    #[error("malformed degree key `{0}`")]
    DegreeKey(String),
    #[error("json: {0}")]
    Json(String),
    #[error("schema: {0}")]
    Schema(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json(e.to_string())
    }
}

/// Violations of the chain-complex invariants over the rationals.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("degree range [{lo}, {hi}] is empty")]
    EmptyRange { lo: i64, hi: i64 },
    #[error("differential in degree {degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        degree: i64,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("d∘d ≠ 0 at degree {0}")]
    NotSquareZero(i64),
    #[error("map component in degree {0} does not commute with the differentials")]
    NotChainMap(i64),
    #[error("map component in degree {degree} has wrong shape")]
    MapShape { degree: i64 },
    #[error("{0}")]
    Other(String),
}

/// Violations of the line-bundle complex invariants.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LbError {
    #[error("polynomial entry ({row},{col}) of d^{degree} has degree {found}, expected {expected}")]
    Grading {
        degree: i64,
        row: usize,
        col: usize,
        found: i64,
        expected: i64,
    },
    #[error("polynomial in {found} variables where P^{m} needs {expected}")]
    Variables { m: i64, found: usize, expected: usize },
    #[error("differential d^{degree} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        degree: i64,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("d∘d ≠ 0 at degree {degree}, entry ({row},{col})")]
    NotSquareZero { degree: i64, row: usize, col: usize },
    #[error("map component in degree {degree} fails to commute at entry ({row},{col})")]
    NotChainMap { degree: i64, row: usize, col: usize },
    #[error("map source/target mismatch: {0}")]
    Mismatch(String),
    #[error("empty projective space P^-1 carries no line bundles")]
    EmptySpace,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CechError {
    #[error("Čech floor did not stabilise by E = {cap} (last floors {history:?}); euler certificate {euler_ok}")]
    NoStabilization {
        cap: u32,
        history: Vec<u32>,
        euler_ok: bool,
    },
    #[error("reduced Čech differential is not square-zero: {0}")]
    Internal(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("n must be at least 1")]
    ZeroDimension,
    #[error("subset must be a nonempty subset of 1..={n}")]
    BadSubset { n: usize },
    #[error("point has no vanishing radius, so it does not lie on L_0")]
    NotOnZeroFiber,
    #[error("point is not on P(τ): {0}")]
    NotOnSection(String),
    #[error("τ must lie strictly between -1 and 1 turns")]
    TauOutOfRange,
    #[error("malformed point: {0}")]
    BadPoint(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperError {
    #[error("hyperplane needs n >= 2, got {0}")]
    SmallN(usize),
    #[error("section coefficient {0} is zero")]
    ZeroCoefficient(usize),
    #[error("object lives on P^{found}, expected P^{expected}")]
    WrongSpace { found: i64, expected: i64 },
    #[error("coordinate index {alpha} out of 1..={n}")]
    BadIndex { alpha: usize, n: usize },
    #[error("no chain homotopy exists: {0}")]
    NoHomotopy(String),
    #[error(transparent)]
    Lb(#[from] LbError),
    #[error(transparent)]
    Cech(#[from] CechError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchoberError {
    #[error("p is {p_rows}x{p_cols} and q is {q_rows}x{q_cols}; shapes are incompatible")]
    Shape {
        p_rows: usize,
        p_cols: usize,
        q_rows: usize,
        q_cols: usize,
    },
    #[error("monodromy m_{0} is not invertible")]
    SingularMonodromy(&'static str),
    #[error("ledger entry τ = {0} is not a whole number of turns")]
    NotFullLoop(String),
    #[error("diagram: {0}")]
    Diagram(String),
    #[error(transparent)]
    Lb(#[from] LbError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Cech(#[from] CechError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CellError {
    #[error("cell structure must contain the marked point 0 as its first vertex")]
    MissingMarkedPoint,
    #[error("vertex positions must be distinct and lie in [0, 1)")]
    BadPositions,
    #[error("target cell structure does not refine the source")]
    NotRefinement,
    #[error("generization map at incidence {0} is not a chain map")]
    BadGeneralization(usize),
    #[error("monodromy must be nonzero")]
    ZeroMonodromy,
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
