//! Dense linear-algebra kernels: thin QR, least squares, projections,
//! symmetric eigenvalue extremes, and the two induced norms the pursuit and
//! certification layers rely on. Everything is written for desk-scale
//! problems; clarity and reproducibility win over asymptotic tricks.

use crate::matrix::DenseMatrix;
use crate::tolerances;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {} entries, got {entries}", rows * cols)]
    BadEntryCount {
        rows: usize,
        cols: usize,
        entries: usize,
    },
    #[error("entry at ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("column index {col} out of range for {cols} columns")]
    ColumnOutOfRange { col: usize, cols: usize },
    #[error("{context}: dimensions {left:?} and {right:?} do not agree")]
    DimensionMismatch {
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("QR factorization needs rows >= columns (got {rows}x{cols})")]
    MoreColumnsThanRows { rows: usize, cols: usize },
    #[error("matrix is rank deficient: rank {rank} < {cols} columns")]
    RankDeficient { rank: usize, cols: usize },
    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {deviation:e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
}

/// Thin QR factorization `A = Q R` with `Q` of shape `m x k` (orthonormal
/// columns) and `R` upper triangular `k x k` with nonnegative diagonal.
#[derive(Debug, Clone)]
pub struct QrFactorization {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
    /// Number of diagonal entries of `R` above the relative rank threshold.
    pub rank: usize,
}

/// Householder thin QR of an `m x k` matrix with `m >= k`.
///
/// The diagonal of `R` is sign-normalized to be nonnegative, which makes the
/// factorization of a full-rank matrix unique and keeps golden outputs
/// stable. The rank counts diagonal entries larger than
/// [`tolerances::QR_RANK_RELATIVE`] times the largest diagonal magnitude.
pub fn qr_decompose(a: &DenseMatrix) -> Result<QrFactorization, LinalgError> {
    let m = a.rows();
    let k = a.cols();
    if m < k {
        return Err(LinalgError::MoreColumnsThanRows { rows: m, cols: k });
    }

    let mut work = a.clone();
    // Unit Householder vectors; an empty vector marks a skipped (zero) column.
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(k);

    for j in 0..k {
        let mut v: Vec<f64> = (j..m).map(|i| work.get(i, j)).collect();
        let norm_x = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            reflectors.push(Vec::new());
            continue;
        }
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * norm_x;
        let norm_v = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        for e in v.iter_mut() {
            *e /= norm_v;
        }
        for col in j..k {
            let mut dot = 0.0;
            for i in j..m {
                dot += v[i - j] * work.get(i, col);
            }
            if dot != 0.0 {
                for i in j..m {
                    let w = work.get(i, col) - 2.0 * dot * v[i - j];
                    work.set(i, col, w);
                }
            }
        }
        for i in j + 1..m {
            work.set(i, j, 0.0);
        }
        reflectors.push(v);
    }

    let mut r = DenseMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            r.set(i, j, work.get(i, j));
        }
    }

    // Thin Q: apply the reflectors, last to first, to the leading k columns
    // of the identity.
    let mut q = DenseMatrix::zeros(m, k);
    for j in 0..k {
        q.set(j, j, 1.0);
    }
    for j in (0..k).rev() {
        let v = &reflectors[j];
        if v.is_empty() {
            continue;
        }
        for col in 0..k {
            let mut dot = 0.0;
            for i in j..m {
                dot += v[i - j] * q.get(i, col);
            }
            if dot != 0.0 {
                for i in j..m {
                    let w = q.get(i, col) - 2.0 * dot * v[i - j];
                    q.set(i, col, w);
                }
            }
        }
    }

    for j in 0..k {
        if r.get(j, j) < 0.0 {
            for col in j..k {
                let w = -r.get(j, col);
                r.set(j, col, w);
            }
            for i in 0..m {
                let w = -q.get(i, j);
                q.set(i, j, w);
            }
        }
    }

    let max_diag = (0..k).map(|j| r.get(j, j).abs()).fold(0.0_f64, f64::max);
    let rank = if max_diag == 0.0 {
        0
    } else {
        (0..k)
            .filter(|&j| r.get(j, j).abs() > tolerances::QR_RANK_RELATIVE * max_diag)
            .count()
    };

    Ok(QrFactorization { q, r, rank })
}

/// Least-squares solve `min_X ‖A X − B‖_F` through the thin QR of `A`.
/// Requires `A` to have full column rank.
pub fn least_squares(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            context: "least squares",
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    let f = qr_decompose(a)?;
    if f.rank < a.cols() {
        return Err(LinalgError::RankDeficient {
            rank: f.rank,
            cols: a.cols(),
        });
    }
    let k = a.cols();
    let rhs = f.q.transpose().matmul(b)?;
    let mut x = DenseMatrix::zeros(k, b.cols());
    for col in 0..b.cols() {
        for i in (0..k).rev() {
            let mut acc = rhs.get(i, col);
            for j in i + 1..k {
                acc -= f.r.get(i, j) * x.get(j, col);
            }
            x.set(i, col, acc / f.r.get(i, i));
        }
    }
    Ok(x)
}

/// Orthogonal projection of the columns of `y` onto the column span of
/// `basis`. Requires `basis` to have full column rank.
pub fn project_onto_span(basis: &DenseMatrix, y: &DenseMatrix) -> Result<DenseMatrix, LinalgError> {
    let coeff = least_squares(basis, y)?;
    basis.matmul(&coeff)
}

/// Smallest and largest eigenvalue of a symmetric matrix via cyclic Jacobi
/// rotations. The input must be symmetric within
/// [`tolerances::SYMMETRY_RELATIVE`] relative to its Frobenius norm.
pub fn symmetric_eigen_extremes(g: &DenseMatrix) -> Result<(f64, f64), LinalgError> {
    let n = g.rows();
    if n != g.cols() {
        return Err(LinalgError::DimensionMismatch {
            context: "symmetric eigensolver",
            left: (g.rows(), g.cols()),
            right: (g.cols(), g.rows()),
        });
    }
    let scale = g.frobenius_norm();
    for i in 0..n {
        for j in i + 1..n {
            let dev = (g.get(i, j) - g.get(j, i)).abs();
            if dev > tolerances::SYMMETRY_RELATIVE * scale {
                return Err(LinalgError::NotSymmetric {
                    row: i,
                    col: j,
                    deviation: dev,
                });
            }
        }
    }
    let mut buf = g.data().to_vec();
    jacobi_extremes_in_place(&mut buf, n)
}

/// Cyclic Jacobi on a row-major symmetric `n x n` buffer. The buffer is
/// consumed as scratch space. Exposed crate-internally so enumeration loops
/// can reuse one allocation across millions of small solves.
pub(crate) fn jacobi_extremes_in_place(a: &mut [f64], n: usize) -> Result<(f64, f64), LinalgError> {
    debug_assert_eq!(a.len(), n * n);
    if n == 1 {
        return Ok((a[0], a[0]));
    }
    let fro = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok((0.0, 0.0));
    }
    let threshold = tolerances::JACOBI_OFF_DIAGONAL_RELATIVE * fro;

    let off_ok = |a: &[f64]| {
        for p in 0..n {
            for q in p + 1..n {
                if a[p * n + q].abs() > threshold {
                    return false;
                }
            }
        }
        true
    };

    let mut converged = off_ok(a);
    let mut sweeps = 0;
    while !converged && sweeps < tolerances::JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    if i == p || i == q {
                        continue;
                    }
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    let new_ip = c * aip - s * aiq;
                    let new_iq = s * aip + c * aiq;
                    a[i * n + p] = new_ip;
                    a[p * n + i] = new_ip;
                    a[i * n + q] = new_iq;
                    a[q * n + i] = new_iq;
                }
            }
        }
        sweeps += 1;
        converged = off_ok(a);
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: tolerances::JACOBI_MAX_SWEEPS,
        });
    }
    let mut lo = a[0];
    let mut hi = a[0];
    for i in 1..n {
        let d = a[i * n + i];
        lo = lo.min(d);
        hi = hi.max(d);
    }
    Ok((lo, hi))
}

/// Largest singular value, computed as `sqrt(max eigenvalue of MᵀM)`.
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64, LinalgError> {
    let gram = m.gram();
    let (_, hi) = symmetric_eigen_extremes(&gram)?;
    Ok(hi.max(0.0).sqrt())
}

/// Induced infinity norm: the maximum absolute row sum.
pub fn inf_induced_norm(m: &DenseMatrix) -> f64 {
    let mut best = 0.0_f64;
    for i in 0..m.rows() {
        let mut acc = 0.0;
        for j in 0..m.cols() {
            acc += m.get(i, j).abs();
        }
        best = best.max(acc);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::seeded_matrix;
    use approx::assert_abs_diff_eq;

    fn max_abs(m: &DenseMatrix) -> f64 {
        m.data().iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    #[test]
    fn qr_of_identity_columns_is_trivial() {
        let a = DenseMatrix::from_rows(3, 2, vec![1.0, 0.0, 0.0, 1.0, 0.0, 0.0]).unwrap();
        let f = qr_decompose(&a).unwrap();
        assert_eq!(f.rank, 2);
        for i in 0..3 {
            for j in 0..2 {
                assert_abs_diff_eq!(f.q.get(i, j), a.get(i, j), epsilon = 1e-14);
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(f.r.get(i, j), expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn qr_flags_duplicate_columns_as_rank_one() {
        let a = DenseMatrix::from_rows(2, 2, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let f = qr_decompose(&a).unwrap();
        assert_eq!(f.rank, 1);
    }

    #[test]
    fn qr_rejects_wide_matrices() {
        let a = DenseMatrix::from_rows(2, 3, vec![0.0; 6]).unwrap();
        assert!(matches!(
            qr_decompose(&a),
            Err(LinalgError::MoreColumnsThanRows { .. })
        ));
    }

    #[test]
    fn qr_reconstructs_seeded_input_with_orthonormal_q() {
        let a = seeded_matrix(11, 10, 4);
        let f = qr_decompose(&a).unwrap();
        assert_eq!(f.rank, 4);

        let qtq = f.q.transpose().matmul(&f.q).unwrap();
        let dev = qtq.sub(&DenseMatrix::identity(4)).unwrap();
        assert!(max_abs(&dev) <= tolerances::ORTHONORMALITY);

        let recon = f.q.matmul(&f.r).unwrap();
        let err = a.sub(&recon).unwrap().frobenius_norm();
        assert!(err <= tolerances::QR_RECONSTRUCTION * a.frobenius_norm());

        // R strictly upper triangular below the diagonal, nonnegative on it.
        for i in 0..4 {
            assert!(f.r.get(i, i) >= 0.0);
            for j in 0..i {
                assert_eq!(f.r.get(i, j), 0.0);
            }
        }
    }

    #[test]
    fn least_squares_on_identity_returns_rhs() {
        let a = DenseMatrix::identity(3);
        let b = DenseMatrix::from_rows(3, 2, vec![1.0, 4.0, 2.0, 5.0, 3.0, 6.0]).unwrap();
        let x = least_squares(&a, &b).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                assert_abs_diff_eq!(x.get(i, j), b.get(i, j), epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn least_squares_single_column_matches_hand_result() {
        // Normal equation: 2x = 2, so x = 1.
        let a = DenseMatrix::from_rows(3, 1, vec![1.0, 1.0, 0.0]).unwrap();
        let b = DenseMatrix::from_rows(3, 1, vec![2.0, 0.0, 0.0]).unwrap();
        let x = least_squares(&a, &b).unwrap();
        assert_abs_diff_eq!(x.get(0, 0), 1.0, epsilon = 1e-14);
    }

    /// Independent oracle: solve the normal equations `AᵀA X = AᵀB` by
    /// Gaussian elimination with partial pivoting.
    fn normal_equations_solve(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
        let ata = a.transpose().matmul(a).unwrap();
        let atb = a.transpose().matmul(b).unwrap();
        let n = ata.rows();
        let k = atb.cols();
        let mut aug = DenseMatrix::zeros(n, n + k);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, ata.get(i, j));
            }
            for j in 0..k {
                aug.set(i, n + j, atb.get(i, j));
            }
        }
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&p, &q| {
                    aug.get(p, col)
                        .abs()
                        .partial_cmp(&aug.get(q, col).abs())
                        .unwrap()
                })
                .unwrap();
            if pivot_row != col {
                for j in 0..n + k {
                    let tmp = aug.get(col, j);
                    aug.set(col, j, aug.get(pivot_row, j));
                    aug.set(pivot_row, j, tmp);
                }
            }
            let pivot = aug.get(col, col);
            assert!(pivot.abs() > 1e-12, "oracle hit a singular system");
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = aug.get(row, col) / pivot;
                if factor != 0.0 {
                    for j in col..n + k {
                        let v = aug.get(row, j) - factor * aug.get(col, j);
                        aug.set(row, j, v);
                    }
                }
            }
        }
        let mut x = DenseMatrix::zeros(n, k);
        for i in 0..n {
            for j in 0..k {
                x.set(i, j, aug.get(i, n + j) / aug.get(i, i));
            }
        }
        x
    }

    #[test]
    fn least_squares_matches_normal_equations_oracle() {
        let a = seeded_matrix(23, 12, 3);
        let b = seeded_matrix(29, 12, 2);
        let x = least_squares(&a, &b).unwrap();
        let x_oracle = normal_equations_solve(&a, &b);
        let err = x.sub(&x_oracle).unwrap().frobenius_norm();
        assert!(
            err <= 1e-9 * x_oracle.frobenius_norm().max(1.0),
            "QR and normal-equation solutions disagree: {err:e}"
        );
    }

    #[test]
    fn least_squares_rejects_rank_deficient_systems() {
        let a = DenseMatrix::from_rows(3, 2, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        let b = DenseMatrix::from_rows(3, 1, vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            least_squares(&a, &b),
            Err(LinalgError::RankDeficient { rank: 1, cols: 2 })
        ));
    }

    #[test]
    fn projection_onto_first_axis_zeroes_other_coordinates() {
        let basis = DenseMatrix::from_rows(3, 1, vec![1.0, 0.0, 0.0]).unwrap();
        let y = DenseMatrix::from_rows(3, 1, vec![2.0, 3.0, 4.0]).unwrap();
        let p = project_onto_span(&basis, &y).unwrap();
        assert_abs_diff_eq!(p.get(0, 0), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.get(1, 0), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.get(2, 0), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn projection_fixes_vectors_already_in_the_span() {
        let basis = seeded_matrix(31, 8, 3);
        let coeff = seeded_matrix(37, 3, 2);
        let y = basis.matmul(&coeff).unwrap();
        let p = project_onto_span(&basis, &y).unwrap();
        let err = y.sub(&p).unwrap().frobenius_norm();
        assert!(err <= 1e-10 * y.frobenius_norm());
    }

    #[test]
    fn projection_residual_is_orthogonal_and_projector_idempotent() {
        let basis = seeded_matrix(41, 9, 4);
        let y = seeded_matrix(43, 9, 3);
        let py = project_onto_span(&basis, &y).unwrap();
        let residual = y.sub(&py).unwrap();
        let cross = basis.transpose().matmul(&residual).unwrap();
        assert!(
            max_abs(&cross)
                <= tolerances::PROJECTION_ORTHOGONALITY * y.frobenius_norm()
        );
        let ppy = project_onto_span(&basis, &py).unwrap();
        let drift = ppy.sub(&py).unwrap().frobenius_norm();
        assert!(drift <= tolerances::PROJECTOR_IDEMPOTENCE * y.frobenius_norm());
    }

    #[test]
    fn eigen_extremes_of_identity_are_unit() {
        let (lo, hi) = symmetric_eigen_extremes(&DenseMatrix::identity(4)).unwrap();
        assert_abs_diff_eq!(lo, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigen_extremes_of_two_by_two_correlation_matrix() {
        let g = DenseMatrix::from_rows(2, 2, vec![1.0, 0.5, 0.5, 1.0]).unwrap();
        let (lo, hi) = symmetric_eigen_extremes(&g).unwrap();
        assert_abs_diff_eq!(lo, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn eigen_rejects_asymmetric_input() {
        let g = DenseMatrix::from_rows(2, 2, vec![1.0, 0.5, 0.2, 1.0]).unwrap();
        assert!(matches!(
            symmetric_eigen_extremes(&g),
            Err(LinalgError::NotSymmetric { .. })
        ));
    }

    /// Independent oracle: locate the extreme roots of `det(G - xI)` by sign
    /// scanning plus bisection inside the Gershgorin interval. The
    /// determinant uses Gaussian elimination with partial pivoting and shares
    /// no code with the Jacobi path.
    fn charpoly_extreme_roots(g: &DenseMatrix) -> (f64, f64) {
        let n = g.rows();
        let det_shifted = |x: f64| -> f64 {
            let mut m: Vec<f64> = g.data().to_vec();
            for i in 0..n {
                m[i * n + i] -= x;
            }
            let mut det = 1.0_f64;
            for col in 0..n {
                let pivot_row = (col..n)
                    .max_by(|&p, &q| {
                        m[p * n + col]
                            .abs()
                            .partial_cmp(&m[q * n + col].abs())
                            .unwrap()
                    })
                    .unwrap();
                if m[pivot_row * n + col] == 0.0 {
                    return 0.0;
                }
                if pivot_row != col {
                    for j in 0..n {
                        m.swap(col * n + j, pivot_row * n + j);
                    }
                    det = -det;
                }
                let pivot = m[col * n + col];
                det *= pivot;
                for row in col + 1..n {
                    let factor = m[row * n + col] / pivot;
                    if factor != 0.0 {
                        for j in col..n {
                            m[row * n + j] -= factor * m[col * n + j];
                        }
                    }
                }
            }
            det
        };

        let mut lo_bound = f64::INFINITY;
        let mut hi_bound = f64::NEG_INFINITY;
        for i in 0..n {
            let radius: f64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| g.get(i, j).abs())
                .sum();
            lo_bound = lo_bound.min(g.get(i, i) - radius);
            hi_bound = hi_bound.max(g.get(i, i) + radius);
        }
        lo_bound -= 1.0;
        hi_bound += 1.0;

        let bisect = |mut a: f64, mut b: f64| -> f64 {
            // det(G - xI) = prod(lambda_i - x), positive below the smallest
            // eigenvalue; the sign at `a` is recorded and refined toward the
            // first change.
            let fa = det_shifted(a);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if det_shifted(mid) * fa > 0.0 {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        };

        let steps = 4000;
        let h = (hi_bound - lo_bound) / steps as f64;
        let mut min_root = None;
        let mut x = lo_bound;
        let f_lo = det_shifted(lo_bound);
        for _ in 0..steps {
            let next = x + h;
            if det_shifted(next) * f_lo <= 0.0 {
                min_root = Some(bisect(x, next));
                break;
            }
            x = next;
        }
        let mut max_root = None;
        let f_hi = det_shifted(hi_bound);
        let mut y = hi_bound;
        for _ in 0..steps {
            let next = y - h;
            if det_shifted(next) * f_hi <= 0.0 {
                max_root = Some(bisect(next, y));
                break;
            }
            y = next;
        }
        (min_root.expect("no lower root"), max_root.expect("no upper root"))
    }

    #[test]
    fn eigen_extremes_match_characteristic_polynomial_oracle() {
        let a = seeded_matrix(47, 8, 6);
        let g = a.gram();
        let (lo, hi) = symmetric_eigen_extremes(&g).unwrap();
        let (lo_oracle, hi_oracle) = charpoly_extreme_roots(&g);
        assert_abs_diff_eq!(lo, lo_oracle, epsilon = 1e-8);
        assert_abs_diff_eq!(hi, hi_oracle, epsilon = 1e-8);
    }

    #[test]
    fn eigen_extremes_bracket_rayleigh_quotients() {
        use rand::Rng;
        let a = seeded_matrix(53, 7, 5);
        let g = a.gram();
        let (lo, hi) = symmetric_eigen_extremes(&g).unwrap();
        let mut rng = crate::testutil::test_rng(59);
        for _ in 0..1000 {
            let v: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm2: f64 = v.iter().map(|x| x * x).sum();
            if norm2 == 0.0 {
                continue;
            }
            let mut quad = 0.0;
            for i in 0..5 {
                for j in 0..5 {
                    quad += v[i] * g.get(i, j) * v[j];
                }
            }
            let rayleigh = quad / norm2;
            assert!(rayleigh >= lo - 1e-12 && rayleigh <= hi + 1e-12);
        }
    }

    #[test]
    fn spectral_norm_of_diagonal_matrix_is_largest_entry() {
        let d = DenseMatrix::from_rows(2, 2, vec![3.0, 0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(spectral_norm(&d).unwrap(), 3.0, epsilon = 1e-12);
        let z = DenseMatrix::zeros(2, 3);
        assert_eq!(spectral_norm(&z).unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_dominates_sampled_rayleigh_lower_bound() {
        let m = seeded_matrix(61, 5, 7);
        let sigma = spectral_norm(&m).unwrap();
        // Lower-bound oracle: best ratio over random directions, refined by
        // repeated application of MᵀM (still only ever a lower bound).
        use rand::Rng;
        let mut rng = crate::testutil::test_rng(67);
        let mut best = 0.0_f64;
        let mut best_v: Option<Vec<f64>> = None;
        for _ in 0..2000 {
            let v: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let image_norm = {
                let mut acc = 0.0;
                for i in 0..5 {
                    let mut row = 0.0;
                    for j in 0..7 {
                        row += m.get(i, j) * v[j];
                    }
                    acc += row * row;
                }
                acc.sqrt()
            };
            let ratio = image_norm / norm;
            if ratio > best {
                best = ratio;
                best_v = Some(v);
            }
        }
        let mut v = best_v.unwrap();
        for _ in 0..200 {
            // v <- MᵀM v, normalized; track the achieved ratio.
            let mut mv = vec![0.0; 5];
            for i in 0..5 {
                for j in 0..7 {
                    mv[i] += m.get(i, j) * v[j];
                }
            }
            let mut mtmv = vec![0.0; 7];
            for j in 0..7 {
                for i in 0..5 {
                    mtmv[j] += m.get(i, j) * mv[i];
                }
            }
            let norm: f64 = mtmv.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            for x in mtmv.iter_mut() {
                *x /= norm;
            }
            v = mtmv;
            let mut acc = 0.0;
            for i in 0..5 {
                let mut row = 0.0;
                for j in 0..7 {
                    row += m.get(i, j) * v[j];
                }
                acc += row * row;
            }
            best = best.max(acc.sqrt());
        }
        assert!(best <= sigma + 1e-10, "lower bound exceeded the norm");
        assert!(sigma - best <= 1e-3, "sampled bound too far below: {}", sigma - best);
    }

    #[test]
    fn inf_norm_is_max_absolute_row_sum() {
        let m = DenseMatrix::from_rows(2, 2, vec![1.0, -2.0, 3.0, 0.0]).unwrap();
        assert_eq!(inf_induced_norm(&m), 3.0);
        assert_eq!(inf_induced_norm(&DenseMatrix::identity(5)), 1.0);
    }

    #[test]
    fn inf_norm_matches_sign_vector_enumeration() {
        let m = seeded_matrix(71, 4, 6);
        let norm = inf_induced_norm(&m);
        // ‖M‖_{inf->inf} = max over v in {-1,1}^6 of ‖Mv‖_inf.
        let mut best = 0.0_f64;
        for mask in 0u32..(1 << 6) {
            let v: Vec<f64> = (0..6)
                .map(|j| if mask & (1 << j) != 0 { 1.0 } else { -1.0 })
                .collect();
            for i in 0..4 {
                let mut acc = 0.0;
                for j in 0..6 {
                    acc += m.get(i, j) * v[j];
                }
                best = best.max(acc.abs());
            }
        }
        assert_abs_diff_eq!(norm, best, epsilon = 1e-12);
    }
}
