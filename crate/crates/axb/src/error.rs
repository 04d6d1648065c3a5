//! Error and inconsistency-certificate types shared across the crate.

use std::fmt;

use crate::scalar::Scalar;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Operands do not have conformable shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A token could not be read as an integer or `p/q` rational.
    #[error("invalid number `{0}`")]
    InvalidNumber(String),

    /// Text input could not be parsed; positions are 1-based.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// An injected factorization failed verification.
    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    /// A supplied matrix is not a {1}-inverse of its target.
    #[error("invalid {{1}}-inverse: {0}")]
    InvalidInverse(String),

    /// The equation has no solution; the certificate names the nonzero
    /// entries that block consistency.
    #[error("equation is inconsistent\n{0}")]
    Inconsistent(Certificate),

    /// A substitution left a free parameter without a value.
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),

    /// A parametric matrix was built with a repeated parameter name.
    #[error("duplicate parameter `{0}`")]
    DuplicateParameter(String),
}

/// Evidence that an instance is inconsistent.
///
/// The direct route reports, for each nonzero block of `C' = QCS` that the
/// consistency criterion requires to vanish, the position of the entry with
/// the largest absolute numerator. The Kronecker route reports the nonzero
/// entries in the tail of the transformed right-hand side column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Violations in the transformed right-hand side `C' = QCS`.
    Blocks(Vec<BlockViolation>),
    /// Nonzero entries among the last `ml - ab` coordinates of `c''`.
    Tail(Vec<TailViolation>),
}

/// Which block of the transformed right-hand side holds a violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsBlock {
    /// First `a` rows, last `l - b` columns.
    TopRight,
    /// Last `m - a` rows, first `b` columns.
    BottomLeft,
    /// Last `m - a` rows, last `l - b` columns.
    BottomRight,
}

/// A nonzero entry of `C'` inside a block that must vanish.
/// `row`/`col` are positions in the full transformed matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockViolation {
    pub block: RhsBlock,
    pub row: usize,
    pub col: usize,
    pub value: Scalar,
}

/// A nonzero entry in the tail of the transformed column `c''`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailViolation {
    pub index: usize,
    pub value: Scalar,
}

impl fmt::Display for RhsBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RhsBlock::TopRight => "top-right",
            RhsBlock::BottomLeft => "bottom-left",
            RhsBlock::BottomRight => "bottom-right",
        };
        f.write_str(name)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Blocks(violations) => {
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(
                        f,
                        "C'[{},{}] = {} ({} block)",
                        v.row, v.col, v.value, v.block
                    )?;
                }
                Ok(())
            }
            Certificate::Tail(violations) => {
                for (i, v) in violations.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "c''[{}] = {}", v.index, v.value)?;
                }
                Ok(())
            }
        }
    }
}
