use std::fmt;

/// Grid location of a state, in interior indices (ghost points may be negative).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub i: isize,
    pub j: isize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid state{}: rho = {rho}, p = {p}", fmt_location(.location))]
    InvalidState {
        rho: f64,
        p: f64,
        location: Option<Location>,
    },
    #[error("stencil index {index} out of range for line of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no exact solution available for case `{0}`")]
    MissingExactSolution(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_location(location: &Option<Location>) -> String {
    match location {
        Some(loc) => format!(" at {loc}"),
        None => String::new(),
    }
}

impl Error {
    /// Attach a grid location to an invalid-state error that does not carry one yet.
    pub fn at(self, i: isize, j: isize) -> Self {
        match self {
            Error::InvalidState {
                rho,
                p,
                location: None,
            } => Error::InvalidState {
                rho,
                p,
                location: Some(Location { i, j }),
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
