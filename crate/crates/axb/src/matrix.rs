//! Dense matrices over exact rational scalars, the Kronecker/vec toolkit,
//! and permutation matrices.
//!
//! Entries are stored row-major with 0-based indexing. Matrices with zero
//! rows or zero columns are first-class values so that block formulas can
//! degenerate without special cases.

use std::cell::Cell;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Range, Sub};

use crate::error::Error;
use crate::scalar::Scalar;

thread_local! {
    static PEAK_ENTRIES: Cell<usize> = const { Cell::new(0) };
}

fn note_alloc(entries: usize) {
    PEAK_ENTRIES.with(|c| {
        if entries > c.get() {
            c.set(entries);
        }
    });
}

/// Resets the per-thread high-water mark for single-matrix size.
pub fn reset_peak_entry_count() {
    PEAK_ENTRIES.with(|c| c.set(0));
}

/// Largest entry count of any matrix materialized on this thread since the
/// last reset. Used by the benchmark harness to contrast the two routes.
pub fn peak_entry_count() -> usize {
    PEAK_ENTRIES.with(|c| c.get())
}

/// A dense `rows x cols` matrix of [`Scalar`] entries.
#[derive(PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Clone for Matrix {
    fn clone(&self) -> Self {
        note_alloc(self.entries.len());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
    }
}

impl Matrix {
    fn from_vec(rows: usize, cols: usize, entries: Vec<Scalar>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        note_alloc(entries.len());
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_vec(rows, cols, vec![Scalar::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| {
            if i == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    /// `rank x rank` identity in the top-left corner, zeros elsewhere.
    /// This is the target shape of every rank normal form.
    pub fn partial_identity(rows: usize, cols: usize, rank: usize) -> Self {
        assert!(rank <= rows.min(cols), "rank exceeds dimensions");
        Matrix::from_fn(rows, cols, |i, j| {
            if i == j && i < rank {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::from_vec(rows, cols, entries)
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, Error> {
        let height = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::ShapeMismatch(format!(
                    "row {i} has {} entries, expected {width}",
                    row.len()
                )));
            }
        }
        Ok(Matrix::from_vec(
            height,
            width,
            rows.into_iter().flatten().collect(),
        ))
    }

    /// Convenience constructor for integer literals in tests and examples.
    /// Panics on ragged input.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
        .expect("ragged integer literal")
    }

    /// Single-column matrix from a list of integers.
    pub fn column_from_ints(values: &[i64]) -> Self {
        Matrix::from_fn(values.len(), 1, |i, _| Scalar::from_int(values[i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn scale(&self, factor: &Scalar) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| factor * &self[(i, j)])
    }

    /// Checked product; see also `&a * &b` which panics on shape mismatch.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self * rhs)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        self.require_same_shape(rhs, "add")?;
        Ok(self + rhs)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix, Error> {
        self.require_same_shape(rhs, "subtract")?;
        Ok(self - rhs)
    }

    fn require_same_shape(&self, rhs: &Matrix, what: &str) -> Result<(), Error> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(format!(
                "cannot {what} {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i,j] * other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let (k, l) = other.shape();
        Matrix::from_fn(self.rows * k, self.cols * l, |r, c| {
            &self[(r / k, c / l)] * &other[(r % k, c % l)]
        })
    }

    /// Stacks the columns into a single `rows*cols x 1` column; column `j`
    /// occupies result rows `j*rows .. (j+1)*rows`.
    pub fn vec(&self) -> Matrix {
        let n = self.rows;
        Matrix::from_fn(self.rows * self.cols, 1, |r, _| {
            self[(r % n, r / n)].clone()
        })
    }

    /// Inverse of [`Matrix::vec`]: reshapes an `n*k x 1` column into `n x k`.
    pub fn unvec(column: &Matrix, rows: usize, cols: usize) -> Result<Matrix, Error> {
        if column.cols != 1 || column.rows != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot reshape {}x{} column into {rows}x{cols}",
                column.rows, column.cols
            )));
        }
        Ok(Matrix::from_fn(rows, cols, |i, j| {
            column[(j * rows + i, 0)].clone()
        }))
    }

    pub fn column(&self, j: usize) -> Matrix {
        assert!(j < self.cols, "column index out of range");
        Matrix::from_fn(self.rows, 1, |i, _| self[(i, j)].clone())
    }

    pub fn row(&self, i: usize) -> Matrix {
        assert!(i < self.rows, "row index out of range");
        Matrix::from_fn(1, self.cols, |_, j| self[(i, j)].clone())
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Matrix {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "submatrix out of range");
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)].clone()
        })
    }

    /// Assembles `[[tl, tr], [bl, br]]`. Panics on inconsistent block shapes;
    /// any block may have zero rows or columns.
    pub fn from_blocks(tl: &Matrix, tr: &Matrix, bl: &Matrix, br: &Matrix) -> Matrix {
        assert_eq!(tl.rows, tr.rows, "top blocks disagree on rows");
        assert_eq!(bl.rows, br.rows, "bottom blocks disagree on rows");
        assert_eq!(tl.cols, bl.cols, "left blocks disagree on cols");
        assert_eq!(tr.cols, br.cols, "right blocks disagree on cols");
        Matrix::from_fn(tl.rows + bl.rows, tl.cols + tr.cols, |i, j| {
            match (i < tl.rows, j < tl.cols) {
                (true, true) => tl[(i, j)].clone(),
                (true, false) => tr[(i, j - tl.cols)].clone(),
                (false, true) => bl[(i - tl.rows, j)].clone(),
                (false, false) => br[(i - tl.rows, j - tl.cols)].clone(),
            }
        })
    }

    pub fn vstack(top: &Matrix, bottom: &Matrix) -> Matrix {
        assert_eq!(top.cols, bottom.cols, "vstack needs equal column counts");
        Matrix::from_fn(top.rows + bottom.rows, top.cols, |i, j| {
            if i < top.rows {
                top[(i, j)].clone()
            } else {
                bottom[(i - top.rows, j)].clone()
            }
        })
    }

    pub fn hstack(left: &Matrix, right: &Matrix) -> Matrix {
        assert_eq!(left.rows, right.rows, "hstack needs equal row counts");
        Matrix::from_fn(left.rows, left.cols + right.cols, |i, j| {
            if j < left.cols {
                left[(i, j)].clone()
            } else {
                right[(i, j - left.cols)].clone()
            }
        })
    }

    pub(crate) fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + c1, i * self.cols + c2);
        }
    }

    pub(crate) fn scale_row(&mut self, r: usize, factor: &Scalar) {
        for j in 0..self.cols {
            self[(r, j)] *= factor;
        }
    }

    /// `row[target] -= factor * row[source]`
    pub(crate) fn sub_scaled_row(&mut self, target: usize, source: usize, factor: &Scalar) {
        for j in 0..self.cols {
            let delta = factor * &self[(source, j)];
            self[(target, j)] -= &delta;
        }
    }

    /// `col[target] -= factor * col[source]`
    pub(crate) fn sub_scaled_col(&mut self, target: usize, source: usize, factor: &Scalar) {
        for i in 0..self.rows {
            let delta = factor * &self[(i, source)];
            self[(i, target)] -= &delta;
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = &self[(i, t)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let product = a * &rhs[(t, j)];
                    out[(i, j)] += product;
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &rhs[(i, j)])
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Matrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &rhs[(i, j)])
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }
}

/// Emits the shared text format: one row per line, entries separated by a
/// single space, rationals in lowest terms.
impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                writeln!(f)?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}\n{}", self.rows, self.cols, self)
    }
}

/// A permutation matrix of size `n`, stored as the column position of the
/// single 1 in each row: row `r` has its 1 in column `image[r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMatrix {
    image: Vec<usize>,
}

impl PermutationMatrix {
    pub fn identity(n: usize) -> Self {
        PermutationMatrix {
            image: (0..n).collect(),
        }
    }

    /// Validates that `image` is a bijection on `0..image.len()`.
    pub fn from_image(image: Vec<usize>) -> Result<Self, Error> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &target in &image {
            if target >= n || seen[target] {
                return Err(Error::ShapeMismatch(format!(
                    "image is not a bijection on 0..{n}"
                )));
            }
            seen[target] = true;
        }
        Ok(PermutationMatrix { image })
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Transpose, which for a permutation matrix is also the inverse.
    pub fn transposed(&self) -> PermutationMatrix {
        let mut image = vec![0; self.image.len()];
        for (row, &col) in self.image.iter().enumerate() {
            image[col] = row;
        }
        PermutationMatrix { image }
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.size();
        Matrix::from_fn(n, n, |i, j| {
            if self.image[i] == j {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        })
    }

    /// Left action `P * m`: row `r` of the result is row `image[r]` of `m`.
    pub fn permute_rows(&self, m: &Matrix) -> Matrix {
        assert_eq!(self.size(), m.rows(), "row permutation size mismatch");
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(self.image[i], j)].clone())
    }

    /// Right action `m * P`: column `c` of the result is column
    /// `image^{-1}[c]` of `m`.
    pub fn permute_cols(&self, m: &Matrix) -> Matrix {
        assert_eq!(self.size(), m.cols(), "column permutation size mismatch");
        let inverse = self.transposed();
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, inverse.image[j])].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = Matrix> {
        (0..=max_dim, 0..=max_dim).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..=3, r * c)
                .prop_map(move |v| Matrix::from_fn(r, c, |i, j| Scalar::from_int(v[i * c + j])))
        })
    }

    #[test]
    fn kron_identity_case() {
        let b = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        let one = Matrix::from_ints(&[&[1]]);
        assert_eq!(one.kron(&b), b);
    }

    #[test]
    fn kron_block_layout() {
        // first rows of B^T (x) A for A 3x2, B 3x3 as used throughout the crate tests
        let a = Matrix::from_ints(&[&[1, 2], &[0, 1], &[1, 1]]);
        let b = Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 1], &[1, 1, 1]]);
        let system = b.transpose().kron(&a);
        assert_eq!(system.shape(), (9, 6));
        assert_eq!(system.row(0), Matrix::from_ints(&[&[1, 2, 0, 0, 1, 2]]));
        assert_eq!(system.row(1), Matrix::from_ints(&[&[0, 1, 0, 0, 0, 1]]));
    }

    #[test]
    fn vec_stacks_columns() {
        let x = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert_eq!(x.vec(), Matrix::column_from_ints(&[1, 3, 2, 4]));
    }

    #[test]
    fn unvec_inverts_vec() {
        let v = Matrix::column_from_ints(&[1, 3, 2, 4]);
        let x = Matrix::unvec(&v, 2, 2).unwrap();
        assert_eq!(x, Matrix::from_ints(&[&[1, 2], &[3, 4]]));
        // single-row case: unvec(v, 1, p) lays the column out as a row
        let row = Matrix::unvec(&Matrix::column_from_ints(&[5, 6, 7]), 1, 3).unwrap();
        assert_eq!(row, Matrix::from_ints(&[&[5, 6, 7]]));
    }

    #[test]
    fn unvec_shape_errors() {
        let v = Matrix::column_from_ints(&[1, 2, 3]);
        assert!(matches!(
            Matrix::unvec(&v, 2, 2),
            Err(Error::ShapeMismatch(_))
        ));
        let wide = Matrix::from_ints(&[&[1, 2], &[3, 4]]);
        assert!(Matrix::unvec(&wide, 4, 1).is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let a = Matrix::from_ints(&[&[1, 2], &[3, 4], &[5, 6]]);
        assert_eq!(&Matrix::identity(3) * &a, a);
        assert_eq!(&a * &Matrix::identity(2), a);
    }

    #[test]
    fn matmul_checked_shape_error() {
        let a = Matrix::zeros(2, 3);
        let b = Matrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn empty_matrices_multiply() {
        let a = Matrix::zeros(2, 0);
        let b = Matrix::zeros(0, 3);
        let prod = &a * &b;
        assert_eq!(prod, Matrix::zeros(2, 3));
        let empty = Matrix::zeros(0, 0);
        assert_eq!((&empty * &empty).shape(), (0, 0));
    }

    #[test]
    fn blocks_assemble_with_empty_parts() {
        let tl = Matrix::from_ints(&[&[1]]);
        let tr = Matrix::zeros(1, 0);
        let bl = Matrix::zeros(0, 1);
        let br = Matrix::zeros(0, 0);
        assert_eq!(Matrix::from_blocks(&tl, &tr, &bl, &br), tl);
    }

    #[test]
    fn partial_identity_pattern() {
        let e = Matrix::partial_identity(3, 2, 2);
        assert_eq!(e, Matrix::from_ints(&[&[1, 0], &[0, 1], &[0, 0]]));
        assert_eq!(Matrix::partial_identity(2, 2, 0), Matrix::zeros(2, 2));
    }

    #[test]
    fn permutation_matrix_has_one_per_row_and_col() {
        let p = PermutationMatrix::from_image(vec![2, 0, 1]).unwrap();
        let m = p.to_matrix();
        for i in 0..3 {
            let row_ones = (0..3).filter(|&j| m[(i, j)].is_one()).count();
            let col_ones = (0..3).filter(|&j| m[(j, i)].is_one()).count();
            assert_eq!((row_ones, col_ones), (1, 1));
        }
        assert!(PermutationMatrix::from_image(vec![0, 0, 1]).is_err());
        assert!(PermutationMatrix::from_image(vec![0, 3, 1]).is_err());
    }

    #[test]
    fn permutation_actions_match_matrix_products() {
        let p = PermutationMatrix::from_image(vec![1, 2, 0]).unwrap();
        let m = Matrix::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(p.permute_rows(&m), &p.to_matrix() * &m);
        assert_eq!(p.permute_cols(&m), &m * &p.to_matrix());
        let id = &p.to_matrix() * &p.transposed().to_matrix();
        assert_eq!(id, Matrix::identity(3));
    }

    proptest! {
        #[test]
        fn kron_transpose_identity(a in small_matrix(3), b in small_matrix(2)) {
            let lhs = a.transpose().kron(&b.transpose());
            let rhs = a.kron(&b).transpose();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn vec_unvec_round_trip(x in small_matrix(4)) {
            let v = x.vec();
            prop_assert_eq!(v.shape(), (x.rows() * x.cols(), 1));
            let back = Matrix::unvec(&v, x.rows(), x.cols()).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn mixed_product_rule(
            a in small_matrix(3), c_cols in 0usize..=3,
            b in small_matrix(2), d_cols in 0usize..=3,
            seed in proptest::collection::vec(-3i64..=3, 0..=36),
        ) {
            // build C and D conformable with A and B
            let pick = |t: usize| Scalar::from_int(seed.get(t % seed.len().max(1)).copied().unwrap_or(1));
            let c = Matrix::from_fn(a.cols(), c_cols, |i, j| pick(i * 7 + j));
            let d = Matrix::from_fn(b.cols(), d_cols, |i, j| pick(i * 5 + j + 3));
            let lhs = &a.kron(&b) * &c.kron(&d);
            let rhs = (&a * &c).kron(&(&b * &d));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
