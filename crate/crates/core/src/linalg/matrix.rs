use std::fmt;

use super::scalar::Field;

/// Dense row-major matrix. Vectors are columns: `m.apply(x)` is `m · x`.
#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of Gauss–Jordan elimination.
#[derive(Clone, PartialEq)]
pub struct Rref<F> {
    pub rank: usize,
    /// Nonzero rows of the reduced row echelon form.
    pub basis: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<F>], rows: usize) -> Self {
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out: Matrix<F> = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c).plus(&a.times(b));
                        out.set(r, c, v);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &[F]) -> Vec<F> {
        assert_eq!(x.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, b) in self.row(r).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.plus(&a.times(b));
                    }
                }
                acc
            })
            .collect()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn rref(&self) -> Rref<F> {
        let (rows, pivots) = eliminate(self.row_vecs(), self.cols, true);
        let rank = rows.len();
        Rref { rank, basis: Matrix::from_rows(rows, self.cols), pivots }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.row_vecs(), self.cols)
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return F::zero();
            };
            if p != col {
                a.swap(p, col);
                det = det.negated();
            }
            det = det.times(&a[col][col]);
            let inv = a[col][col].recip();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].times(&inv);
                let (top, bottom) = a.split_at_mut(r);
                for c in col..n {
                    if !top[col][c].is_zero() {
                        bottom[0][c].sub_mul_assign(&f, &top[col][c]);
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        let n = self.rows;
        assert_eq!(n, self.cols);
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                F::one()
            } else {
                F::zero()
            }
        });
        let red = aug.rref();
        if red.pivots.len() < n || red.pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| red.basis.get(r, c + n).clone()))
    }
}

/// Rank via forward elimination only.
pub fn rank_of_rows<F: Field>(rows: Vec<Vec<F>>, cols: usize) -> usize {
    eliminate(rows, cols, false).0.len()
}

/// Gaussian elimination on row vectors. With `reduce` the result is the
/// reduced row echelon form; otherwise only an echelon form (sufficient for
/// ranks). Returns the nonzero rows and their pivot columns.
pub(crate) fn eliminate<F: Field>(mut rows: Vec<Vec<F>>, cols: usize, reduce: bool) -> (Vec<Vec<F>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let mut pivots = Vec::new();
    let mut done = 0usize;
    for col in 0..cols {
        if done == rows.len() {
            break;
        }
        let Some(p) = (done..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(done, p);
        let inv = rows[done][col].recip();
        if !inv.is_one() {
            for x in rows[done][col..].iter_mut() {
                if !x.is_zero() {
                    *x = x.times(&inv);
                }
            }
        }
        let support: Vec<usize> = (col..cols).filter(|&c| !rows[done][c].is_zero()).collect();
        let pivot_row = std::mem::take(&mut rows[done]);
        let start = if reduce { 0 } else { done + 1 };
        for (r, row) in rows.iter_mut().enumerate().skip(start) {
            if r == done || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &c in &support {
                row[c].sub_mul_assign(&f, &pivot_row[c]);
            }
        }
        rows[done] = pivot_row;
        pivots.push(col);
        done += 1;
    }
    rows.truncate(done);
    (rows, pivots)
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> fmt::Debug for Rref<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rref(rank {}, pivots {:?}) {:?}", self.rank, self.pivots, self.basis)
    }
}
