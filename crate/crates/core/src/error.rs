use thiserror::Error;

/// Everything that can go wrong while building or evaluating an invariant.
///
/// Element, arc and index values carried in variants are 1-based, matching
/// the text and JSON formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("quandle axiom {axiom} fails at {}", fmt_tuple(.witness))]
    AxiomViolation { axiom: u8, witness: Vec<usize> },

    #[error("table entry at row {row}, column {col} is {value}, expected 1..={size}")]
    OutOfRangeEntry {
        row: usize,
        col: usize,
        value: i64,
        size: usize,
    },

    #[error("{what} {value} out of range 1..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        max: usize,
    },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("map {map} is not a quandle endomorphism: f({x}>{y}) != f({x})>f({y})")]
    NotEndomorphism { map: String, x: usize, y: usize },

    #[error("endomorphism #{index} of S is not a quandle endomorphism")]
    NonEndomorphismInS { index: usize },

    #[error("cochain fails the 2-cocycle condition at {}", fmt_tuple(.witness))]
    NonCocycle { witness: Vec<usize> },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("{0} is not prime")]
    NonPrimeModulus(u64),

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("arc {arc} appears {in_count} times as under-in and {out_count} times as under-out (expected 1 and 1)")]
    ArcUnderUseCount {
        arc: usize,
        in_count: usize,
        out_count: usize,
    },

    #[error("crossing {crossing} references arc {arc}, but the diagram has {arc_count} arcs")]
    OutOfRangeArc {
        crossing: usize,
        arc: usize,
        arc_count: usize,
    },

    #[error("malformed PD code: {0}")]
    MalformedPd(String),

    #[error("cannot orient PD crossing {crossing}: {reason}")]
    AmbiguousOrientation { crossing: usize, reason: String },

    #[error("coloring violates crossing {crossing}")]
    InvalidColoring { crossing: usize },

    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    #[error("unknown diagram {0:?}")]
    UnknownDiagram(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Failures of a mathematical check (axioms, cocycle condition,
    /// endomorphism property, diagram consistency), as opposed to input that
    /// could not be read at all.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Syntax { .. }
                | Error::Parse(_)
                | Error::SizeLimitExceeded { .. }
                | Error::UnknownDiagram(_)
        )
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

fn fmt_tuple(xs: &[usize]) -> String {
    let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

pub type Result<T> = std::result::Result<T, Error>;
