use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A real-valued argument outside its admissible interval.
    #[error("{name} = {value} is outside {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid system shape (L={l}, N={particles}, n={block}): {reason}")]
    Shape {
        l: usize,
        particles: usize,
        block: usize,
        reason: &'static str,
    },

    #[error("sector r={r} is not admissible; admissible range is 0..={max}")]
    Sector { r: usize, max: usize },

    #[error("block quantum numbers (k={k}, s={s}) are not admissible for n={block}")]
    BlockLabel { k: usize, s: usize, block: usize },

    #[error("L={l} exceeds the dense-matrix limit of {max}")]
    TooLarge { l: usize, max: usize },

    #[error("eigenvalue clusters at {a} and {b} are closer than the separation guard")]
    ClusterAmbiguity { a: f64, b: f64 },

    #[error("{solver} did not converge after {iterations} iterations")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
    },

    #[error("{0}")]
    Argument(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            expected,
        }
    }
}
