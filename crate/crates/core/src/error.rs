use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("letter {letter} has zero index; a_0 and b_0 do not exist")]
    ZeroIndex { letter: char },

    #[error("side-alternation violated at junction {junction} (between letters {junction} and {next})")]
    SideAlternation { junction: usize, next: usize },

    #[error("empty word")]
    EmptyWord,

    #[error("invalid local system: {0}")]
    LocalSystem(String),

    #[error("word does not close up: horizontal drift {h}, vertical drift {v}")]
    NotClosed { h: i64, v: i64 },

    #[error("curve is not reduced: detour at crossing {0}")]
    NotReduced(usize),

    #[error("invalid cabling parameters: {0}")]
    InvalidParams(String),

    #[error("merge requires a word of c-letters only; found {0}")]
    NotCWord(String),

    #[error("key curve input has a vertical tangent")]
    VerticalTangent,

    #[error("matrix determinant must be +1 or -1, got {0}")]
    Determinant(i64),

    #[error("not a distinguished (wrapping) component: {0}")]
    NotGamma0(String),

    #[error("invalid multicurve: {0}")]
    InvalidMulticurve(String),

    #[error("curve is not an L-space curve")]
    NotLSpace,
}

pub type Result<T, E = CurveError> = std::result::Result<T, E>;
