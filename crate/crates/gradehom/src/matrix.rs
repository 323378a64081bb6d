//! Dense exact matrices and Gaussian elimination.
//!
//! Row-major storage, column-vector convention: a matrix of shape r×c maps
//! K^c → K^r by left multiplication. All eliminations pick the leftmost
//! nonzero pivot; over an exact field no other pivoting is needed, and every
//! result is bit-for-bit reproducible.

use crate::field::{FieldSpec, Scalar};
use num_traits::Zero;
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

/// Result of row reduction: the reduced matrix plus its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref<K: Scalar> {
    pub matrix: Matrix<K>,
    pub pivots: Vec<usize>,
}

impl<K: Scalar> Matrix<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Column vector from a slice.
    pub fn column(v: &[K]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<K> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &K> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn bind_field(&self, spec: &FieldSpec) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.bind(spec)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| s.clone() * a.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(
            self.cols == other.rows,
            "shape mismatch in mul: {}x{} by {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
        let mut out: Matrix<K> = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert!(self.cols == v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() && !self[(i, j)].is_zero() {
                        acc = acc + self[(i, j)].clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product; blocks of `other` scaled by entries of `self`.
    pub fn kronecker(&self, other: &Self) -> Self {
        Matrix::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            let (ia, ib) = (i / other.rows, i % other.rows);
            let (ja, jb) = (j / other.cols, j % other.cols);
            self[(ia, ja)].clone() * other[(ib, jb)].clone()
        })
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows, "row mismatch in hstack");
        Matrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &Self) -> Self {
        assert!(self.cols == other.cols, "col mismatch in vstack");
        Matrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        assert!(row0 + rows <= self.rows && col0 + cols <= self.cols, "submatrix out of range");
        Matrix::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)].clone())
    }

    /// Keep only the given columns, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> Self {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Reduced row echelon form with leftmost-nonzero pivoting.
    pub fn rref(&self) -> Rref<K> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].clone() * inv.clone();
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    m[(i, j)] = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right null space {v : self·v = 0}, one vector per free
    /// column of the rref, in ascending column order.
    pub fn kernel_basis(&self) -> Vec<Vec<K>> {
        let Rref { matrix: m, pivots } = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &p in &pivots {
                s[p] = true;
            }
            s
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_set[j] {
                continue;
            }
            let mut v = vec![K::zero(); self.cols];
            v[j] = K::one();
            for (t, &p) in pivots.iter().enumerate() {
                v[p] = -m[(t, j)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Kernel basis packed as the columns of a matrix (cols × nullity).
    pub fn kernel_matrix(&self) -> Matrix<K> {
        let basis = self.kernel_basis();
        let n = basis.len();
        Matrix::from_fn(self.cols, n, |i, j| basis[j][i].clone())
    }

    /// Solve self·x = b. Returns a particular solution (free variables zero)
    /// together with a kernel basis, or None when inconsistent.
    pub fn solve(&self, b: &[K]) -> Option<(Vec<K>, Vec<Vec<K>>)> {
        assert!(b.len() == self.rows, "dimension mismatch in solve");
        let aug = self.hstack(&Matrix::column(b));
        let Rref { matrix: m, pivots } = aug.rref();
        if pivots.iter().any(|&p| p == self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (t, &p) in pivots.iter().enumerate() {
            x[p] = m[(t, self.cols)].clone();
        }
        Some((x, self.kernel_basis()))
    }

    /// Solve self·X = B for a matrix unknown; None when any column is
    /// inconsistent. Free variables are set to zero.
    pub fn solve_matrix(&self, b: &Self) -> Option<Matrix<K>> {
        assert!(b.rows == self.rows, "dimension mismatch in solve_matrix");
        let aug = self.hstack(b);
        let Rref { matrix: m, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zero(self.cols, b.cols);
        for (t, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = m[(t, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix<K>> {
        if self.rows != self.cols {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.rows))?;
        if self.mul(&x).is_identity() {
            Some(x)
        } else {
            None
        }
    }

    /// Row space basis: the nonzero rows of the rref.
    pub fn row_space_basis(&self) -> Vec<Vec<K>> {
        let Rref { matrix: m, pivots } = self.rref();
        (0..pivots.len()).map(|i| m.row(i).to_vec()).collect()
    }

    /// Treat the columns of `self` as a subspace of K^rows and project onto
    /// the complement coordinates. Returns the projection matrix together
    /// with the complement coordinate indices; the quotient space has the
    /// complement coordinates as its basis, and placing standard vectors at
    /// those indices gives a section of the projection.
    pub fn complement_projection(&self) -> (Matrix<K>, Vec<usize>) {
        let n = self.rows;
        let rr = self.transpose().rref();
        let mut pivot_set = vec![false; n];
        for &p in &rr.pivots {
            pivot_set[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|i| !pivot_set[*i]).collect();
        let mut proj = Matrix::zero(free.len(), n);
        for col in 0..n {
            // reduce the standard vector by the rref rows, then read off the
            // complement coordinates
            let mut x = vec![K::zero(); n];
            x[col] = K::one();
            for (t, &p) in rr.pivots.iter().enumerate() {
                let f = x[p].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    x[j] = x[j].clone() - f.clone() * rr.matrix[(t, j)].clone();
                }
            }
            for (r, &fidx) in free.iter().enumerate() {
                proj[(r, col)] = x[fidx].clone();
            }
        }
        (proj, free)
    }

    pub fn canon_string(&self) -> String {
        let mut s = format!("{}x{}:", self.rows, self.cols);
        for e in &self.data {
            s.push_str(&e.canon_string());
            s.push(',');
        }
        s
    }
}

impl<K> Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        debug_assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<K> IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        debug_assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<K: Scalar> fmt::Debug for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Express each column of `targets` in terms of the columns of `basis`;
/// None if some column lies outside the span.
pub fn coords_in_span<K: Scalar>(basis: &Matrix<K>, targets: &Matrix<K>) -> Option<Matrix<K>> {
    basis.solve_matrix(targets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Fp, Rat};

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<Rat> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat).collect()).collect())
    }

    #[test]
    fn rref_identity_fixed() {
        let m: Matrix<Rat> = Matrix::identity(2);
        let r = m.rref();
        assert_eq!(r.matrix, m);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_rank_one() {
        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        let r = m.rref();
        assert_eq!(r.matrix, qm(vec![vec![1, 2], vec![0, 0]]));
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_mod_two_full_rank() {
        let m = Matrix::from_rows(vec![
            vec![Fp::new(1, 2), Fp::new(1, 2)],
            vec![Fp::new(1, 2), Fp::new(2, 2)],
        ]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert!(r.matrix.is_identity());
    }

    #[test]
    fn kernel_cases() {
        let id: Matrix<Rat> = Matrix::identity(3);
        assert!(id.kernel_basis().is_empty());

        let z: Matrix<Rat> = Matrix::zero(3, 3);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x == rat(1), i == j);
            }
        }

        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (-2, 1)
        assert_eq!(k[0][0].clone() * rat(1), k[0][1].clone() * rat(-2));
        assert!(m.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_cases() {
        let id: Matrix<Rat> = Matrix::identity(2);
        let (x, ker) = id.solve(&[rat(5), rat(7)]).unwrap();
        assert_eq!(x, vec![rat(5), rat(7)]);
        assert!(ker.is_empty());

        let z: Matrix<Rat> = Matrix::zero(2, 2);
        assert!(z.solve(&[rat(1), rat(0)]).is_none());

        let m = qm(vec![vec![1, 1]]);
        let (x, ker) = m.solve(&[rat(3)]).unwrap();
        assert_eq!(x, vec![rat(3), rat(0)]);
        assert_eq!(ker.len(), 1);
        // spans (1, -1)
        assert_eq!(ker[0][0].clone() * rat(-1), ker[0][1].clone() * rat(1));
        assert_eq!(m.mul_vec(&x), vec![rat(3)]);
    }

    #[test]
    fn inverse_round_trip() {
        let m = qm(vec![vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        assert!(qm(vec![vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn kronecker_shape_and_values() {
        let a = qm(vec![vec![1, 2]]);
        let b = qm(vec![vec![3], vec![4]]);
        let k = a.kronecker(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k, qm(vec![vec![3, 6], vec![4, 8]]));
    }
}
