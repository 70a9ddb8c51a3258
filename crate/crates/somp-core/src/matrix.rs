//! Dense row-major matrix storage used by every numeric routine in the
//! crate. Matrices are real-valued, finite by construction, and never empty.

use crate::linalg::LinalgError;

/// Dense real matrix with row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major entries. Every entry must be finite
    /// and `data` must hold exactly `rows * cols` values.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadEntryCount {
                rows,
                cols,
                entries: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(LinalgError::NonFiniteEntry {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// All-zero matrix. Dimensions must be nonzero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be nonzero");
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Identity matrix of size `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major view of the entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.rows && col < self.cols);
        self.data[row * self.cols + col] = value;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// `self * rhs`; the inner dimensions must agree.
    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                context: "matrix product",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += aik * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// Entry-wise difference `self - rhs`; shapes must match.
    pub fn sub(&self, rhs: &DenseMatrix) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch {
                context: "matrix difference",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Column `col` as an `rows x 1` matrix.
    pub fn column(&self, col: usize) -> Self {
        assert!(col < self.cols, "column index out of range");
        let mut out = Self::zeros(self.rows, 1);
        for i in 0..self.rows {
            out.data[i] = self.get(i, col);
        }
        out
    }

    /// Submatrix keeping the listed columns in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self, LinalgError> {
        if indices.is_empty() {
            return Err(LinalgError::EmptyMatrix {
                rows: self.rows,
                cols: 0,
            });
        }
        if let Some(&bad) = indices.iter().find(|&&j| j >= self.cols) {
            return Err(LinalgError::ColumnOutOfRange {
                col: bad,
                cols: self.cols,
            });
        }
        let mut out = Self::zeros(self.rows, indices.len());
        for i in 0..self.rows {
            for (jj, &j) in indices.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Euclidean norm of column `col`.
    pub fn column_norm(&self, col: usize) -> f64 {
        (0..self.rows)
            .map(|i| {
                let x = self.get(i, col);
                x * x
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Dot product of column `col` of `self` with column `other_col` of
    /// `other`. Row counts must agree.
    pub fn column_dot(&self, col: usize, other: &DenseMatrix, other_col: usize) -> f64 {
        assert_eq!(self.rows, other.rows, "column dot needs equal row counts");
        let mut acc = 0.0;
        for i in 0..self.rows {
            acc += self.get(i, col) * other.get(i, other_col);
        }
        acc
    }

    pub fn scale_column(&mut self, col: usize, factor: f64) {
        assert!(col < self.cols, "column index out of range");
        for i in 0..self.rows {
            let v = self.get(i, col) * factor;
            self.set(i, col, v);
        }
    }

    /// Gram matrix of the columns, `selfᵀ self`. Filled symmetrically so
    /// that `g[i][j]` and `g[j][i]` are the same float.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut g = Self::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let d = self.column_dot(i, self, j);
                g.set(i, j, d);
                g.set(j, i, d);
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_rows_validates_shape_and_entries() {
        assert!(matches!(
            DenseMatrix::from_rows(0, 2, vec![]),
            Err(LinalgError::EmptyMatrix { .. })
        ));
        assert!(matches!(
            DenseMatrix::from_rows(2, 2, vec![1.0; 3]),
            Err(LinalgError::BadEntryCount { .. })
        ));
        let err = DenseMatrix::from_rows(2, 2, vec![1.0, 2.0, f64::NAN, 4.0]).unwrap_err();
        assert!(matches!(err, LinalgError::NonFiniteEntry { row: 1, col: 0 }));
        assert!(DenseMatrix::from_rows(2, 3, vec![0.0; 6]).is_ok());
    }

    #[test]
    fn transpose_and_matmul_agree_with_hand_computation() {
        let a = DenseMatrix::from_rows(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let at = a.transpose();
        assert_eq!(at.get(2, 1), 6.0);
        // (AᵀA)₀₀ = 1 + 16, (AᵀA)₁₂ = 2*3 + 5*6
        let ata = at.matmul(&a).unwrap();
        assert_eq!(ata.get(0, 0), 17.0);
        assert_eq!(ata.get(1, 2), 36.0);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn select_columns_keeps_requested_order() {
        let a = DenseMatrix::from_rows(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let picked = a.select_columns(&[2, 0]).unwrap();
        assert_eq!(picked.get(0, 0), 3.0);
        assert_eq!(picked.get(1, 1), 4.0);
        assert!(a.select_columns(&[3]).is_err());
        assert!(a.select_columns(&[]).is_err());
    }

    #[test]
    fn gram_is_exactly_symmetric() {
        let a = DenseMatrix::from_rows(
            3,
            3,
            vec![0.3, -1.2, 0.7, 2.0, 0.4, -0.9, -0.5, 1.1, 0.6],
        )
        .unwrap();
        let g = a.gram();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.get(i, j).to_bits(), g.get(j, i).to_bits());
            }
        }
    }

    #[test]
    fn norms_match_definitions() {
        let a = DenseMatrix::from_rows(2, 2, vec![3.0, 0.0, 4.0, 0.0]).unwrap();
        assert_eq!(a.frobenius_norm(), 5.0);
        assert_eq!(a.column_norm(0), 5.0);
        assert_eq!(a.column_norm(1), 0.0);
        assert_eq!(a.column_dot(0, &a, 0), 25.0);
    }

    #[test]
    fn column_extracts_single_column() {
        let a = DenseMatrix::from_rows(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let c = a.column(1);
        assert_eq!((c.rows(), c.cols()), (2, 1));
        assert_eq!(c.get(0, 0), 2.0);
        assert_eq!(c.get(1, 0), 5.0);
    }
}
