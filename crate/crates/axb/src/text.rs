//! The shared plain-text matrix format and the witness-file format.
//!
//! Matrix format: UTF-8 lines; `#` starts a comment running to end of line;
//! blank lines are ignored; every remaining line is one row of
//! whitespace-separated integers or `p/q` rationals; all rows must have the
//! same length. Emission (via [`Matrix`]'s `Display`) uses single spaces and
//! lowest-terms rationals.
//!
//! Witness files carry injected rank-normal-form factors in four sections,
//! each headed by a line `Q:`, `P:`, `R:` or `S:` and followed by a matrix
//! in the format above.

use crate::error::Error;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// Parses the shared text format. Empty input yields a `0x0` matrix.
pub fn parse_matrix(input: &str) -> Result<Matrix, Error> {
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let Some(row) = parse_row(raw, line_no)? else {
            continue;
        };
        if let Some(expected) = width {
            if row.len() != expected {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("row has {} entries, expected {expected}", row.len()),
                });
            }
        } else {
            width = Some(row.len());
        }
        rows.push(row);
    }
    Matrix::from_rows(rows)
}

/// Parses one line as a matrix row. Returns `None` for blank or
/// comment-only lines.
fn parse_row(raw: &str, line_no: usize) -> Result<Option<Vec<Scalar>>, Error> {
    let content = match raw.find('#') {
        Some(pos) => &raw[..pos],
        None => raw,
    };
    if content.trim().is_empty() {
        return Ok(None);
    }
    let mut row = Vec::new();
    for (col0, token) in tokens_with_columns(content) {
        let value: Scalar = token.parse().map_err(|_| Error::Parse {
            line: line_no,
            column: col0 + 1,
            message: format!("invalid number `{token}`"),
        })?;
        row.push(value);
    }
    Ok(Some(row))
}

/// Splits on whitespace, keeping each token's 0-based character column.
fn tokens_with_columns(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    let mut char_index = 0usize;
    let mut byte_start = 0usize;
    for (byte_index, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(col) = start.take() {
                out.push((col, &line[byte_start..byte_index]));
            }
        } else if start.is_none() {
            start = Some(char_index);
            byte_start = byte_index;
        }
        char_index += 1;
    }
    if let Some(col) = start {
        out.push((col, &line[byte_start..]));
    }
    out
}

/// Injected rank-normal-form factors: `Q A P = E_A` and `R B S = E_B`.
#[derive(Debug, Clone)]
pub struct WitnessFile {
    pub q: Matrix,
    pub p: Matrix,
    pub r: Matrix,
    pub s: Matrix,
}

/// Parses a witness file with sections `Q:`, `P:`, `R:`, `S:`.
pub fn parse_witness_file(input: &str) -> Result<WitnessFile, Error> {
    const HEADERS: [&str; 4] = ["Q:", "P:", "R:", "S:"];
    let mut sections: [Option<Vec<Vec<Scalar>>>; 4] = [None, None, None, None];
    let mut current: Option<usize> = None;

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if let Some(pos) = HEADERS.iter().position(|&h| trimmed == h) {
            if sections[pos].is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("duplicate section {}", HEADERS[pos]),
                });
            }
            sections[pos] = Some(Vec::new());
            current = Some(pos);
            continue;
        }
        let Some(row) = parse_row(raw, line_no)? else {
            continue;
        };
        let Some(section) = current else {
            return Err(Error::Parse {
                line: line_no,
                column: 1,
                message: "matrix row before any Q:/P:/R:/S: header".to_string(),
            });
        };
        sections[section].as_mut().expect("section started").push(row);
    }

    let mut matrices = Vec::with_capacity(4);
    for (pos, section) in sections.into_iter().enumerate() {
        let rows = section.ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("missing section {}", HEADERS[pos]),
        })?;
        matrices.push(Matrix::from_rows(rows).map_err(|e| Error::Parse {
            line: 1,
            column: 1,
            message: format!("section {}: {e}", HEADERS[pos]),
        })?);
    }
    let s = matrices.pop().expect("four sections");
    let r = matrices.pop().expect("four sections");
    let p = matrices.pop().expect("four sections");
    let q = matrices.pop().expect("four sections");
    Ok(WitnessFile { q, p, r, s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_comments_blanks_and_rationals() {
        let input = "# system matrix\n1 2 0\n\n  0 -1/2 3   # trailing note\n";
        let m = parse_matrix(input).unwrap();
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(1, 1)], Scalar::new(-1, 2));
    }

    #[test]
    fn empty_input_is_empty_matrix() {
        assert_eq!(parse_matrix("").unwrap().shape(), (0, 0));
        assert_eq!(parse_matrix("# only comments\n\n").unwrap().shape(), (0, 0));
    }

    #[test]
    fn reports_bad_token_position() {
        let err = parse_matrix("1 2\n3 x\n").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!((line, column), (2, 3));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn reports_ragged_rows() {
        let err = parse_matrix("1 2 3\n4 5\n").unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("expected 3"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn witness_file_round_trip() {
        let input = "Q:\n1 0\n0 1\n# a comment\nP:\n2\nR:\n1 0\n-1 1\nS:\n1 -1\n0 1\n";
        let w = parse_witness_file(input).unwrap();
        assert_eq!(w.q, Matrix::identity(2));
        assert_eq!(w.p, Matrix::from_ints(&[&[2]]));
        assert_eq!(w.r, Matrix::from_ints(&[&[1, 0], &[-1, 1]]));
        assert_eq!(w.s, Matrix::from_ints(&[&[1, -1], &[0, 1]]));
    }

    #[test]
    fn witness_file_requires_all_sections() {
        let err = parse_witness_file("Q:\n1\nP:\n1\nR:\n1\n").unwrap_err();
        assert!(err.to_string().contains("missing section S:"));
        let err = parse_witness_file("1 2\n").unwrap_err();
        assert!(err.to_string().contains("before any"));
    }

    proptest! {
        #[test]
        fn emit_parse_round_trip(
            rows in 1usize..=4, cols in 1usize..=4,
            nums in proptest::collection::vec(-9i64..=9, 16),
            dens in proptest::collection::vec(1i64..=5, 16),
        ) {
            let m = Matrix::from_fn(rows, cols, |i, j| {
                let t = i * cols + j;
                Scalar::new(nums[t], dens[t])
            });
            let parsed = parse_matrix(&m.to_string()).unwrap();
            prop_assert_eq!(parsed, m);
        }
    }
}
