//! Dense exact integer matrices and Smith normal form.
//!
//! Everything here works over [`BigInt`], so no entry can overflow. The Smith
//! normal form is the workhorse used to read off the isomorphism type of a
//! finitely presented abelian group (see [`cokernel`]).

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::group::FgAbGroup;

/// A dense row-major matrix of arbitrary precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row-major entries. Returns `None` when the entry
    /// count does not match the shape.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Option<Self> {
        (entries.len() == rows * cols).then_some(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from a slice of rows. All rows must have equal length.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Option<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Self::from_entries(rows.len(), cols, entries)
    }

    /// Builds an `n`-row matrix whose columns are the given vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(n: usize, columns: &[Vec<T>]) -> Option<Self> {
        if columns.iter().any(|c| c.len() != n) {
            return None;
        }
        let mut m = Self::zeros(n, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone().into();
            }
        }
        Some(m)
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(d: &[T]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`. `None` if row counts differ.
    pub fn hcat(&self, other: &IntMatrix) -> Option<Self> {
        if self.rows != other.rows {
            return None;
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Some(m)
    }

    /// The submatrix consisting of the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, columns.len());
        for (k, &j) in columns.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, k)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let delta = &self.entries[src * self.cols + j] * factor;
            self.entries[dst * self.cols + j] += delta;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let delta = &self.entries[i * self.cols + src] * factor;
            self.entries[i * self.cols + dst] += delta;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let e = &mut self.entries[r * self.cols + j];
            *e = -std::mem::take(e);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// Output of [`smith_normal_form`].
///
/// `u * input * v` is the `rows x cols` matrix with `d` on its diagonal.
/// The diagonal has length `min(rows, cols)`; entries are nonnegative and each
/// divides the next nonzero one, with zeros collected at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal matrix `u * input * v` should equal.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.u.rows(), self.v.cols());
        for (i, x) in self.d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }
}

/// Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (d, u, v) = snf_impl(m.clone(), true);
    SnfResult {
        d,
        u: u.expect("transforms requested"),
        v: v.expect("transforms requested"),
    }
}

/// Invariant factors only; skips the bookkeeping for `u` and `v`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    snf_impl(m.clone(), false).0
}

type SnfParts = (Vec<BigInt>, Option<IntMatrix>, Option<IntMatrix>);

fn snf_impl(mut a: IntMatrix, track: bool) -> SnfParts {
    let (rows, cols) = (a.rows, a.cols);
    let mut u = track.then(|| IntMatrix::identity(rows));
    let mut v = track.then(|| IntMatrix::identity(cols));
    let k = rows.min(cols);

    for t in 0..k {
        // Bring the smallest nonzero entry of the trailing block to (t, t).
        let Some((pi, pj)) = min_abs_position(&a, t..rows, t..cols) else {
            break;
        };
        swap_rc(&mut a, &mut u, &mut v, t, pi, pj);

        loop {
            let mut dirty = false;
            // Clear column t below the pivot.
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &a[(t, t)]);
                a.add_row_multiple(i, t, &q);
                if let Some(u) = u.as_mut() {
                    u.add_row_multiple(i, t, &q);
                }
                dirty |= !a[(i, t)].is_zero();
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &a[(t, t)]);
                a.add_col_multiple(j, t, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, t, &q);
                }
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                // A remainder survived; it is strictly smaller than the pivot.
                let (pi, pj) = cross_min_position(&a, t);
                swap_rc(&mut a, &mut u, &mut v, t, pi, pj);
                continue;
            }
            // Pivot is alone in its row and column; enforce divisibility.
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[(i, j)].is_multiple_of(&a[(t, t)]));
            match bad {
                Some((i, _)) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    if let Some(u) = u.as_mut() {
                        u.add_row_multiple(t, i, &BigInt::one());
                    }
                }
                None => break,
            }
        }

        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
        }
    }

    let d = (0..k).map(|i| a[(i, i)].clone()).collect();
    (d, u, v)
}

fn min_abs_position(
    a: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = a[(i, j)].abs();
            if x.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| x < *b) {
                best = Some(((i, j), x));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Smallest nonzero entry in row t or column t (the pivot itself included).
fn cross_min_position(a: &IntMatrix, t: usize) -> (usize, usize) {
    let col = min_abs_position(a, t..a.rows, t..t + 1);
    let row = min_abs_position(a, t..t + 1, t..a.cols);
    match (col, row) {
        (Some(c), Some(r)) => {
            if a[c].abs() <= a[r].abs() {
                c
            } else {
                r
            }
        }
        (Some(p), None) | (None, Some(p)) => p,
        (None, None) => (t, t),
    }
}

fn swap_rc(
    a: &mut IntMatrix,
    u: &mut Option<IntMatrix>,
    v: &mut Option<IntMatrix>,
    t: usize,
    i: usize,
    j: usize,
) {
    a.swap_rows(t, i);
    if let Some(u) = u.as_mut() {
        u.swap_rows(t, i);
    }
    a.swap_cols(t, j);
    if let Some(v) = v.as_mut() {
        v.swap_cols(t, j);
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                a[(i, j)] = num / &prev;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

/// Rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).iter().filter(|d| !d.is_zero()).count()
}

/// The abelian group `Z^n / (column span of relations)`, where `n` is the row
/// count of `relations`.
pub fn cokernel(relations: &IntMatrix) -> FgAbGroup {
    let d = invariant_factors(relations);
    let nonzero = d.iter().filter(|x| !x.is_zero()).count();
    let free = relations.rows - nonzero;
    let torsion = d
        .into_iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.magnitude().clone());
    FgAbGroup::from_parts(free, torsion)
}

/// A basis of the column span: the nonzero columns of `m * v`, where `v` is
/// the right transform of the Smith normal form.
pub fn column_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let mv = m * &snf.v;
    let keep: Vec<usize> = (0..mv.cols())
        .filter(|&j| (0..mv.rows()).any(|i| !mv[(i, j)].is_zero()))
        .collect();
    mv.select_columns(&keep)
}
