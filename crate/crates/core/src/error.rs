use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unbalanced bracket")]
    UnbalancedBracket { line: usize, col: usize },
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("malformed number `{0}`")]
    MalformedNumber(String),
    #[error("`^` used outside of an Object block")]
    SelfRefWithoutContext,

    #[error("concept `{0}` already exists")]
    DuplicateConcept(String),
    #[error("unknown parent concept `{0}`")]
    UnknownParent(String),
    #[error("adding `{child}` under `{parent}` would create a cycle")]
    CycleDetected { child: String, parent: String },
    #[error("unknown concept `{0}`")]
    UnknownConcept(String),

    #[error("malformed `{predicate}` assertion on `{concept}`: {message}")]
    MalformedField { concept: String, predicate: String, message: String },
    #[error("script `{script}` jumps to missing event group {target:02}")]
    BadGotoTarget { script: String, target: u8 },
    #[error("`{instance}` ({concept}) cannot fill role {index:02} ({role})")]
    RoleTypeMismatch { index: u8, role: String, instance: String, concept: String },
    #[error("{given} bindings given but script `{script}` has {roles} roles")]
    TooManyBindings { script: String, given: usize, roles: usize },
    #[error("`{0}` is not a script")]
    NotAScript(String),

    #[error("grid header must look like `==name//`, got `{0}`")]
    MalformedHeader(String),
    #[error("cell ({col}, {row}) is outside the {width}x{height} grid")]
    OutOfBounds { col: usize, row: usize, width: usize, height: usize },

    #[error("question does not match any template: `{0}`")]
    UnrecognizedTemplate(String),
    #[error("no concept for phrase `{0}`")]
    UnknownSubjectPhrase(String),

    #[error("{line}:{col}: unbalanced parenthesis")]
    UnbalancedParen { line: usize, col: usize },

    #[error("no scripts in the knowledge base")]
    EmptyDatabase,
}
