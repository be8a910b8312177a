use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("missing table entry for ({0}, {1})")]
    MissingTableEntry(String, String),
    #[error("product degree {0} escapes the declared window")]
    WindowOverflow(i64),
    #[error("differential does not square to zero at degree {degree}, column {column}")]
    DSquaredNonzero { degree: i64, column: usize },
    #[error("unsupported ring for this computation: {0}")]
    UnsupportedRing(String),
    #[error("no group declaration on the algebra")]
    NoGroupDeclaration,
    #[error("field scalars required: {0}")]
    FieldRequired(String),
    #[error("not a chain map at degree {degree}, column {column}: residual {residual}")]
    NotAChainMap { degree: i64, column: usize, residual: String },
    #[error("not a chain homotopy at degree {degree}, column {column}: residual {residual}")]
    NotAHomotopy { degree: i64, column: usize, residual: String },
    #[error("not a module morphism: {0}")]
    NotModuleMorphism(String),
    #[error("algebra carries no involution")]
    NoInvolution,
    #[error("sign character inconsistent with group relations: {0}")]
    InconsistentCharacter(String),
    #[error("action of degree-0 generator {0} does not factor through the declared group")]
    ActionNotGroupFactored(String),
    #[error("duality pairing mismatch at ({0}, {1}): {2}")]
    PairingMismatch(String, String, String),
    #[error("unknown example {0}")]
    UnknownExample(String),
    #[error("unknown coefficient tag {0}")]
    UnknownTag(String),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("unresolved name at {path}: {name}")]
    UnresolvedName { path: String, name: String },
    #[error("schema violation at {path}: {msg}")]
    SchemaViolation { path: String, msg: String },
    #[error("scalar context mismatch: {0}")]
    ScalarMismatch(String),
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code for the command-line interface: 2 for parse and
    /// lookup failures, 3 for mathematical validation failures, 4 for
    /// refused computations, 5 for internal invariant breaches.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            SyntaxError { .. } | UnknownExample(_) | UnknownTag(_) | UnresolvedName { .. }
            | SchemaViolation { .. } => 2,
            InvalidPresentation(_) | MissingTableEntry(..) | WindowOverflow(_)
            | NotAChainMap { .. } | NotAHomotopy { .. } | NotModuleMorphism(_)
            | InconsistentCharacter(_) | ActionNotGroupFactored(_) | PairingMismatch(..)
            | NoInvolution | NoGroupDeclaration | ScalarMismatch(_) => 3,
            UnsupportedRing(_) | FieldRequired(_) => 4,
            Internal(_) | DSquaredNonzero { .. } => 5,
        }
    }
}
