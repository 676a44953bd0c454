use thiserror::Error;

/// The condition of a "large enough" place set that a candidate violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bullet {
    AtLeastTwoPlaces,
    FullValueGroup,
    CharacterOrders,
    ConductorBound,
    Representatives,
}

impl Bullet {
    pub fn name(self) -> &'static str {
        match self {
            Bullet::AtLeastTwoPlaces => "at-least-two-places",
            Bullet::FullValueGroup => "full-value-group",
            Bullet::CharacterOrders => "character-orders",
            Bullet::ConductorBound => "conductor-bound",
            Bullet::Representatives => "class-representatives",
        }
    }
}

impl std::fmt::Display for Bullet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: cannot combine log-q degree {left} with degree {right}")]
    DegreeMismatch { left: i32, right: i32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime power in the supported range 2..=16")]
    UnsupportedFieldSize(u32),
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("place set rejected ({bullet}): {detail}")]
    InvalidPlaceSet { bullet: Bullet, detail: String },
    #[error("function is not compactly supported on the multiplicative group")]
    NonCompactSupport,
    #[error("periodization is not square integrable: {0}")]
    NotSquareIntegrable(String),
    #[error("malformed tail: {0}")]
    MalformedTail(String),
    #[error("depth {depth} too small: {detail}")]
    DepthTooSmall { depth: i64, detail: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },
}

impl Error {
    pub(crate) fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            context: context.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
