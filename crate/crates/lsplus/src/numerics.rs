//! Exact integer and rational linear algebra.
//!
//! Every routine here works over arbitrary-precision integers
//! ([`BigInt`]) or normalized rationals ([`BigRational`]); nothing rounds.
//! Matrices are dense and row-major, which is all the problem sizes in this
//! crate (dimension at most about 20) require.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors raised by the exact linear algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericsError {
    /// Operand shapes are incompatible.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A CSV matrix could not be parsed.
    #[error("malformed matrix CSV at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
    /// The feasible region of a linear program is empty.
    #[error("linear program is infeasible")]
    Infeasible,
}

/// Dense matrix of arbitrary-precision integers in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

/// Dense vector of normalized rationals.
pub type RatVector = Vec<BigRational>;

/// Dense matrix of normalized rationals in row-major order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

macro_rules! dense_common {
    ($ty:ident, $elem:ty) => {
        impl $ty {
            /// All-zero matrix.
            pub fn zeros(rows: usize, cols: usize) -> Self {
                Self { rows, cols, entries: vec![<$elem>::zero(); rows * cols] }
            }

            /// Identity matrix of order `n`.
            pub fn identity(n: usize) -> Self {
                let mut m = Self::zeros(n, n);
                for i in 0..n {
                    m.entries[i * n + i] = <$elem>::one();
                }
                m
            }

            /// Builds a matrix from a row-major entry list.
            pub fn from_entries(rows: usize, cols: usize, entries: Vec<$elem>) -> Result<Self, NumericsError> {
                if entries.len() != rows * cols {
                    return Err(NumericsError::DimensionMismatch(format!(
                        "{} entries for a {rows}x{cols} matrix",
                        entries.len()
                    )));
                }
                Ok(Self { rows, cols, entries })
            }

            /// Builds a matrix from explicit rows; all rows must have equal length.
            pub fn from_row_vecs(rows: Vec<Vec<$elem>>) -> Result<Self, NumericsError> {
                let r = rows.len();
                let c = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|row| row.len() != c) {
                    return Err(NumericsError::DimensionMismatch("ragged rows".into()));
                }
                Ok(Self { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
            }

            /// Number of rows.
            pub fn rows(&self) -> usize {
                self.rows
            }

            /// Number of columns.
            pub fn cols(&self) -> usize {
                self.cols
            }

            /// True when the matrix has as many rows as columns.
            pub fn is_square(&self) -> bool {
                self.rows == self.cols
            }

            /// Entry at row `i`, column `j` (0-based).
            pub fn get(&self, i: usize, j: usize) -> &$elem {
                &self.entries[i * self.cols + j]
            }

            /// Overwrites the entry at row `i`, column `j` (0-based).
            pub fn set(&mut self, i: usize, j: usize, value: $elem) {
                self.entries[i * self.cols + j] = value;
            }

            /// Row-major entries.
            pub fn entries(&self) -> &[$elem] {
                &self.entries
            }

            /// Copy of row `i`.
            pub fn row(&self, i: usize) -> Vec<$elem> {
                self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
            }

            /// Copy of column `j`.
            pub fn col(&self, j: usize) -> Vec<$elem> {
                (0..self.rows).map(|i| self.get(i, j).clone()).collect()
            }

            /// Transposed copy.
            pub fn transpose(&self) -> Self {
                let mut t = Self::zeros(self.cols, self.rows);
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        t.entries[j * self.rows + i] = self.get(i, j).clone();
                    }
                }
                t
            }

            /// True when the matrix is square and equal to its transpose.
            pub fn is_symmetric(&self) -> bool {
                self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
            }

            /// True when every entry is zero.
            pub fn is_zero(&self) -> bool {
                self.entries.iter().all(Zero::is_zero)
            }

            /// Main diagonal of a square matrix.
            pub fn diagonal(&self) -> Vec<$elem> {
                (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
            }

            /// Exact matrix product.
            pub fn mul(&self, other: &Self) -> Result<Self, NumericsError> {
                if self.cols != other.rows {
                    return Err(NumericsError::DimensionMismatch(format!(
                        "{}x{} times {}x{}",
                        self.rows, self.cols, other.rows, other.cols
                    )));
                }
                let mut out = Self::zeros(self.rows, other.cols);
                for i in 0..self.rows {
                    for k in 0..self.cols {
                        let a = self.get(i, k);
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..other.cols {
                            let b = other.get(k, j);
                            if !b.is_zero() {
                                out.entries[i * other.cols + j] += a * b;
                            }
                        }
                    }
                }
                Ok(out)
            }

            /// Exact entrywise sum.
            pub fn add(&self, other: &Self) -> Result<Self, NumericsError> {
                if self.rows != other.rows || self.cols != other.cols {
                    return Err(NumericsError::DimensionMismatch(format!(
                        "{}x{} plus {}x{}",
                        self.rows, self.cols, other.rows, other.cols
                    )));
                }
                let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
                Ok(Self { rows: self.rows, cols: self.cols, entries })
            }

            /// Multiplies every entry by `c`.
            pub fn scale(&self, c: &$elem) -> Self {
                Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| a * c).collect() }
            }

            /// Principal or general submatrix selected by row and column index lists.
            pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
                let mut out = Self::zeros(rows.len(), cols.len());
                for (a, &i) in rows.iter().enumerate() {
                    for (b, &j) in cols.iter().enumerate() {
                        out.entries[a * cols.len() + b] = self.get(i, j).clone();
                    }
                }
                out
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                writeln!(f, "{}x{} [", self.rows, self.cols)?;
                for i in 0..self.rows {
                    let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
                    writeln!(f, "  [{}]", row.join(", "))?;
                }
                write!(f, "]")
            }
        }
    };
}

dense_common!(IntMatrix, BigInt);
dense_common!(RatMatrix, BigRational);

impl IntMatrix {
    /// Builds a matrix from rows of machine integers.
    pub fn from_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| BigInt::from(v))).collect();
        Self { rows: rows.len(), cols: C, entries }
    }

    /// Builds a matrix from nested vectors of machine integers.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, NumericsError> {
        Self::from_row_vecs(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// Lossless conversion to a rational matrix.
    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| BigRational::from_integer(e.clone())).collect(),
        }
    }

    /// Parses the CSV matrix format: one row per line, comma separated
    /// integers, no header, LF or CRLF line ends, no trailing comma.
    pub fn parse_csv(text: &str) -> Result<Self, NumericsError> {
        let rat = RatMatrix::parse_csv(text)?;
        let mut entries = Vec::with_capacity(rat.entries.len());
        for (idx, e) in rat.entries.iter().enumerate() {
            if !e.is_integer() {
                return Err(NumericsError::MalformedCsv {
                    line: idx / rat.cols.max(1) + 1,
                    message: format!("non-integer entry {e}"),
                });
            }
            entries.push(e.to_integer());
        }
        Ok(Self { rows: rat.rows, cols: rat.cols, entries })
    }

    /// Serializes in the CSV matrix format with LF line ends.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

impl RatMatrix {
    /// Parses the CSV matrix format, accepting `p/q` rational entries.
    pub fn parse_csv(text: &str) -> Result<Self, NumericsError> {
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (lineno, raw) in text.split('\n').enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for field in line.split(',') {
                let field = field.trim();
                let value = parse_rational(field).ok_or_else(|| NumericsError::MalformedCsv {
                    line: lineno + 1,
                    message: format!("cannot parse entry {field:?}"),
                })?;
                row.push(value);
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(NumericsError::MalformedCsv {
                        line: lineno + 1,
                        message: format!("expected {} entries, found {}", first.len(), row.len()),
                    });
                }
            }
            rows.push(row);
        }
        Self::from_row_vecs(rows)
    }

    /// Serializes in the CSV matrix format, writing `p/q` for non-integers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigRational::to_string).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Parses an integer or a `p/q` rational literal.
pub fn parse_rational(field: &str) -> Option<BigRational> {
    if field.is_empty() {
        return None;
    }
    match field.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => field.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Convenience constructor for the rational `p/q`.
pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact matrix product `A·B`.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, NumericsError> {
    a.mul(b)
}

/// True iff `v` is square, symmetric, and `Σ_{j≠i} |v_ij| ≤ v_ii` for every row.
pub fn is_diag_dominant(v: &IntMatrix) -> bool {
    diag_dominance_violation(v).is_none()
}

/// First reason `v` fails to be symmetric and diagonally dominant, if any.
pub fn diag_dominance_violation(v: &IntMatrix) -> Option<String> {
    if !v.is_square() {
        return Some(format!("matrix is {}x{}, not square", v.rows(), v.cols()));
    }
    if !v.is_symmetric() {
        return Some("matrix is not symmetric".into());
    }
    for i in 0..v.rows() {
        let off: BigInt = (0..v.cols()).filter(|&j| j != i).map(|j| v.get(i, j).abs()).sum();
        if &off > v.get(i, i) {
            return Some(format!("row {i}: off-diagonal sum {off} exceeds diagonal {}", v.get(i, i)));
        }
    }
    None
}

/// Rational counterpart of [`is_diag_dominant`].
pub fn is_diag_dominant_rat(v: &RatMatrix) -> bool {
    if !v.is_symmetric() {
        return false;
    }
    (0..v.rows()).all(|i| {
        let off: BigRational = (0..v.cols()).filter(|&j| j != i).map(|j| v.get(i, j).abs()).sum();
        &off <= v.get(i, i)
    })
}

/// Rank over the rationals via fraction-free Gaussian elimination.
pub fn rational_rank(m: &RatMatrix) -> usize {
    row_echelon(m).1
}

/// Reduced row echelon form and rank.
pub fn row_echelon(m: &RatMatrix) -> (RatMatrix, usize) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a.get(r, c).is_zero()) else {
            continue;
        };
        for j in 0..cols {
            a.entries.swap(p * cols + j, rank * cols + j);
        }
        let pivot = a.get(rank, c).clone();
        for j in 0..cols {
            let v = a.get(rank, j) / &pivot;
            a.set(rank, j, v);
        }
        for r in 0..rows {
            if r != rank && !a.get(r, c).is_zero() {
                let f = a.get(r, c).clone();
                for j in 0..cols {
                    let v = a.get(r, j) - &f * a.get(rank, j);
                    a.set(r, j, v);
                }
            }
        }
        rank += 1;
    }
    (a, rank)
}

/// Rank of an integer matrix.
pub fn integer_rank(m: &IntMatrix) -> usize {
    bareiss_rank(m.rows, m.cols, m.entries.clone())
}

/// Fraction-free (Bareiss) elimination rank, used on integer data.
fn bareiss_rank(rows: usize, cols: usize, mut a: Vec<BigInt>) -> usize {
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            a.swap(p * cols + j, rank * cols + j);
        }
        let pivot = a[rank * cols + c].clone();
        for r in rank + 1..rows {
            let f = a[r * cols + c].clone();
            for j in 0..cols {
                let v = (&pivot * &a[r * cols + j] - &f * &a[rank * cols + j]) / &prev;
                a[r * cols + j] = v;
            }
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Exact determinant of a square rational matrix.
pub fn determinant(m: &RatMatrix) -> BigRational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows;
    let mut a = m.clone();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            for j in 0..n {
                a.entries.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let pivot = a.get(c, c).clone();
        det *= &pivot;
        for r in c + 1..n {
            if a.get(r, c).is_zero() {
                continue;
            }
            let f = a.get(r, c) / &pivot;
            for j in c..n {
                let v = a.get(r, j) - &f * a.get(c, j);
                a.set(r, j, v);
            }
        }
    }
    det
}

/// Inverse of a nonsingular square rational matrix.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows;
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, BigRational::one());
    }
    let (red, _) = row_echelon(&aug);
    for i in 0..n {
        if red.get(i, i) != &BigRational::one() {
            return None;
        }
    }
    let cols: Vec<usize> = (n..2 * n).collect();
    let rows: Vec<usize> = (0..n).collect();
    Some(red.submatrix(&rows, &cols))
}

/// Exact `L·D·Lᵀ` factorization of a symmetric matrix without pivoting.
///
/// Returns the unit lower-triangular `L` and the diagonal `D`, or `None` if a
/// zero pivot is met before the factorization completes.
pub fn ldl(m: &RatMatrix) -> Option<(RatMatrix, Vec<BigRational>)> {
    let n = m.rows;
    let mut l = RatMatrix::identity(n);
    let mut d = vec![BigRational::zero(); n];
    for j in 0..n {
        let mut dj = m.get(j, j).clone();
        for k in 0..j {
            dj -= l.get(j, k) * l.get(j, k) * &d[k];
        }
        if dj.is_zero() {
            return None;
        }
        for i in j + 1..n {
            let mut v = m.get(i, j).clone();
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k) * &d[k];
            }
            l.set(i, j, v / &dj);
        }
        d[j] = dj;
    }
    Some((l, d))
}

/// True iff the symmetric rational matrix is positive definite
/// (every pivot of its exact `LDLᵀ` factorization is positive).
pub fn is_positive_definite(m: &RatMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    let n = m.rows;
    let mut l = RatMatrix::identity(n);
    let mut d = vec![BigRational::zero(); n];
    for j in 0..n {
        let mut dj = m.get(j, j).clone();
        for k in 0..j {
            dj -= l.get(j, k) * l.get(j, k) * &d[k];
        }
        if !dj.is_positive() {
            return false;
        }
        for i in j + 1..n {
            let mut v = m.get(i, j).clone();
            for k in 0..j {
                v -= l.get(i, k) * l.get(j, k) * &d[k];
            }
            l.set(i, j, v / &dj);
        }
        d[j] = dj;
    }
    true
}

/// Coefficients `c_0..c_n` of the characteristic polynomial `det(tI − M)`,
/// computed exactly with the Faddeev–LeVerrier recurrence.
pub fn characteristic_polynomial(m: &RatMatrix) -> Vec<BigRational> {
    let n = m.rows;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut mk = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk).expect("square");
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let am = m.mul(&mk).expect("square");
        let tr: BigRational = am.diagonal().into_iter().sum();
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k));
    }
    coeffs
}

/// Independent PSD oracle: a real symmetric matrix is positive semidefinite
/// iff the coefficients of `det(tI − M)` alternate in sign (zeros allowed).
pub fn is_psd_by_charpoly(m: &RatMatrix) -> bool {
    if !m.is_symmetric() {
        return false;
    }
    let c = characteristic_polynomial(m);
    let n = m.rows;
    (0..=n).all(|k| {
        // the coefficient of t^k must have sign (-1)^(n-k) or be zero
        let v = &c[k];
        v.is_zero() || (n - k).is_multiple_of(2) == v.is_positive()
    })
}

/// Result of [`lp_max_exact`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Finite optimum value.
    Optimal(BigRational),
    /// The objective is unbounded above on the feasible region.
    Unbounded,
}

/// Maximizes `objective·x` over `{x : a·x ≤ b for every (a, b)}` exactly.
///
/// Variables are free; callers supply bounds such as `0 ≤ x ≤ 1` as explicit
/// constraints. Uses a two-phase dense tableau simplex with Bland's rule, so
/// the pivot sequence and the result are deterministic.
pub fn lp_max_exact(
    constraints: &[(RatVector, BigRational)],
    objective: &[BigRational],
) -> Result<LpOutcome, NumericsError> {
    let n = objective.len();
    for (a, _) in constraints {
        if a.len() != n {
            return Err(NumericsError::DimensionMismatch(format!(
                "constraint of length {} for {n} variables",
                a.len()
            )));
        }
    }
    // Free variables split as x = p - q with p, q ≥ 0.
    let nv = 2 * n;
    let rows: Vec<Vec<BigRational>> =
        constraints.iter().map(|(a, _)| a.iter().cloned().chain(a.iter().map(|v| -v)).collect()).collect();
    let rhs: Vec<BigRational> = constraints.iter().map(|(_, b)| b.clone()).collect();
    let mut c: Vec<BigRational> = objective.iter().cloned().chain(objective.iter().map(|v| -v)).collect();
    c.resize(nv, BigRational::zero());
    Simplex::new(rows, rhs).maximize(&c)
}

/// Dense tableau for `max c·x, A x ≤ b, x ≥ 0` with slack and artificial columns.
struct Simplex {
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
}

impl Simplex {
    fn new(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Self {
        Self { a, b }
    }

    fn maximize(self, c: &[BigRational]) -> Result<LpOutcome, NumericsError> {
        let m = self.a.len();
        let nv = c.len();
        // Columns: structural (nv), slack (m), artificial (one per negative rhs row).
        let neg_rows: Vec<usize> = (0..m).filter(|&i| self.b[i].is_negative()).collect();
        let total = nv + m + neg_rows.len();
        let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        let mut basis = vec![0usize; m];
        let mut art_col = 0;
        for i in 0..m {
            let mut row = vec![BigRational::zero(); total + 1];
            let flip = self.b[i].is_negative();
            for j in 0..nv {
                row[j] = if flip { -self.a[i][j].clone() } else { self.a[i][j].clone() };
            }
            row[nv + i] = if flip { -BigRational::one() } else { BigRational::one() };
            row[total] = self.b[i].abs();
            if flip {
                row[nv + m + art_col] = BigRational::one();
                basis[i] = nv + m + art_col;
                art_col += 1;
            } else {
                basis[i] = nv + i;
            }
            t.push(row);
        }
        if !neg_rows.is_empty() {
            // Phase 1: minimize the sum of artificials.
            let mut obj = vec![BigRational::zero(); total + 1];
            for j in nv + m..total {
                obj[j] = -BigRational::one();
            }
            let value = run_simplex(&mut t, &mut basis, &obj, total, total)?;
            let Some(value) = value else {
                return Err(NumericsError::Infeasible);
            };
            if value.is_negative() {
                return Err(NumericsError::Infeasible);
            }
            // Drive remaining artificial basics out of the basis.
            for i in 0..m {
                if basis[i] >= nv + m {
                    if let Some(j) = (0..nv + m).find(|&j| !t[i][j].is_zero()) {
                        pivot(&mut t, &mut basis, i, j);
                    }
                }
            }
        }
        let mut obj = vec![BigRational::zero(); total + 1];
        obj[..nv].clone_from_slice(c);
        // Artificial columns are frozen at zero in phase 2.
        match run_simplex(&mut t, &mut basis, &obj, total, nv + m)? {
            Some(v) => Ok(LpOutcome::Optimal(v)),
            None => Ok(LpOutcome::Unbounded),
        }
    }
}

fn pivot(t: &mut [Vec<BigRational>], basis: &mut [usize], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v /= &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i != r && !row[c].is_zero() {
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
    }
    basis[r] = c;
}

/// Bland's-rule primal simplex; returns `None` when unbounded.
/// Only columns `< allowed` may enter the basis.
fn run_simplex(
    t: &mut [Vec<BigRational>],
    basis: &mut [usize],
    obj: &[BigRational],
    total: usize,
    allowed: usize,
) -> Result<Option<BigRational>, NumericsError> {
    loop {
        // reduced cost r_j = c_j - c_B · column_j
        let mut entering = None;
        for j in 0..allowed {
            if basis.contains(&j) {
                continue;
            }
            let mut r = obj[j].clone();
            for (i, row) in t.iter().enumerate() {
                if !row[j].is_zero() {
                    r -= &obj[basis[i]] * &row[j];
                }
            }
            if r.is_positive() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            let mut value = BigRational::zero();
            for (i, row) in t.iter().enumerate() {
                value += &obj[basis[i]] * &row[total];
            }
            return Ok(Some(value));
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[j].is_positive() {
                let ratio = &row[total] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            return Ok(None);
        };
        pivot(t, basis, r, j);
    }
}

/// Greatest common divisor of a slice of integers (0 for an all-zero slice).
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values.iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

/// Least common multiple of the denominators of a rational slice.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()))
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(v: &BigInt) -> BigInt {
    assert!(!v.is_negative(), "square root of a negative integer");
    v.sqrt()
}

/// Lossy conversion used only for human-readable diagnostics.
pub fn approx_f64(v: &BigRational) -> f64 {
    v.numer().to_f64().unwrap_or(f64::NAN) / v.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_small_matrices() {
        let a = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        let b = IntMatrix::from_rows(&[[0], [1]]);
        assert_eq!(mat_mul(&a, &b).unwrap(), IntMatrix::from_rows(&[[2], [4]]));
        let i3 = IntMatrix::identity(3);
        assert_eq!(mat_mul(&i3, &i3).unwrap(), i3);
        assert!(mat_mul(&a, &i3).is_err());
    }

    #[test]
    fn diagonal_dominance() {
        assert!(is_diag_dominant(&IntMatrix::identity(4)));
        assert!(!is_diag_dominant(&IntMatrix::from_rows(&[[2, -3], [-3, 2]])));
        assert!(!is_diag_dominant(&IntMatrix::from_rows(&[[2, 1], [0, 2]])));
    }

    #[test]
    fn ranks() {
        assert_eq!(rational_rank(&RatMatrix::zeros(3, 4)), 0);
        assert_eq!(rational_rank(&RatMatrix::identity(5)), 5);
        assert_eq!(rational_rank(&IntMatrix::from_rows(&[[1, 2], [2, 4]]).to_rat()), 1);
        assert_eq!(integer_rank(&IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]])), 2);
    }

    #[test]
    fn csv_round_trip_and_crlf() {
        let m = IntMatrix::parse_csv("1,-2\r\n3,4\r\n").unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[[1, -2], [3, 4]]));
        assert_eq!(IntMatrix::parse_csv(&m.to_csv()).unwrap(), m);
        assert!(IntMatrix::parse_csv("1,2,\n3,4\n").is_err());
        assert!(IntMatrix::parse_csv("1,2\n3\n").is_err());
        let r = RatMatrix::parse_csv("1/2,3\n").unwrap();
        assert_eq!(r.get(0, 0), &rat(1, 2));
    }

    #[test]
    fn lp_simple_bounds() {
        let c = vec![(vec![rat(1, 1)], rat(1, 1)), (vec![rat(-1, 1)], rat(0, 1))];
        assert_eq!(lp_max_exact(&c, &[rat(1, 1)]).unwrap(), LpOutcome::Optimal(rat(1, 1)));
        let only_lower = vec![(vec![rat(-1, 1)], rat(0, 1))];
        assert_eq!(lp_max_exact(&only_lower, &[rat(1, 1)]).unwrap(), LpOutcome::Unbounded);
        let infeasible = vec![(vec![rat(1, 1)], rat(-1, 1)), (vec![rat(-1, 1)], rat(0, 1))];
        assert_eq!(lp_max_exact(&infeasible, &[rat(1, 1)]), Err(NumericsError::Infeasible));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_rows(&[[2, 1], [1, 3]]).to_rat();
        assert_eq!(determinant(&m), rat(5, 1));
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        assert!(inverse(&IntMatrix::from_rows(&[[1, 2], [2, 4]]).to_rat()).is_none());
    }

    #[test]
    fn psd_oracles_agree_on_small_cases() {
        let pd = IntMatrix::from_rows(&[[2, -1], [-1, 2]]).to_rat();
        let indef = IntMatrix::from_rows(&[[1, 2], [2, 1]]).to_rat();
        let semi = IntMatrix::from_rows(&[[1, 1], [1, 1]]).to_rat();
        assert!(is_positive_definite(&pd) && is_psd_by_charpoly(&pd));
        assert!(!is_positive_definite(&indef) && !is_psd_by_charpoly(&indef));
        assert!(!is_positive_definite(&semi) && is_psd_by_charpoly(&semi));
        assert_eq!(characteristic_polynomial(&pd), vec![rat(3, 1), rat(-4, 1), rat(1, 1)]);
    }
}
