//! Small exact matrices over a [`Field`] and canonical row spaces.
//!
//! Everything here is dense and deterministic: reduced row-echelon form
//! always picks the first nonzero pivot, so two computations of the same
//! subspace produce identical representations.

use super::field::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Mat<F: Field> {
    pub field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Mat<F> {
    pub fn zero(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Mat { field, rows, cols, data }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            let one = m.field.one();
            m.set(i, i, one);
        }
        m
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Mat {
            field,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { field, rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat<F> {
        Mat::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, other: &Mat<F>) -> Result<Mat<F>> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        Ok(Mat::from_fn(f.clone(), self.rows, other.cols, |i, j| {
            let mut acc = f.zero();
            for k in 0..self.cols {
                acc = f.add(&acc, &f.mul(self.get(i, k), other.get(k, j)));
            }
            acc
        }))
    }

    pub fn apply(&self, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if v.len() != self.cols {
            return Err(Error::Shape("vector length mismatch".into()));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = f.zero();
                for (j, x) in v.iter().enumerate() {
                    acc = f.add(&acc, &f.mul(self.get(i, j), x));
                }
                acc
            })
            .collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row-echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !f.is_zero(self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = f
                .inv(self.get(r, c))
                .expect("pivot must be invertible in a field");
            for j in c..self.cols {
                let v = f.mul(self.get(r, j), &inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || f.is_zero(self.get(i, c)) {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), &f.mul(&factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical basis of the right kernel, one row per basis vector.
    pub fn right_kernel(&self) -> Mat<F> {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(ri, fc));
            }
            rows.push(v);
        }
        let mut kern = Mat::from_rows(f, rows).expect("kernel rows uniform");
        kern.rref_in_place();
        kern
    }

    /// Determinant (square matrices).
    pub fn det(&self) -> Result<F::Elem> {
        if self.rows != self.cols {
            return Err(Error::Shape("determinant of non-square matrix".into()));
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                return Ok(f.zero());
            };
            if p != c {
                m.swap_rows(c, p);
                det = f.neg(&det);
            }
            det = f.mul(&det, m.get(c, c));
            let inv = f.inv(m.get(c, c)).expect("nonzero pivot");
            for i in (c + 1)..m.rows {
                if f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = f.mul(m.get(i, c), &inv);
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }
}

/// A linear subspace of F^n, stored as the reduced row-echelon basis of
/// its row space. Two subspaces are equal exactly when they have the
/// same row space.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSubspace<F: Field> {
    ambient: usize,
    basis: Mat<F>,
}

impl<F: Field> LinearSubspace<F> {
    pub fn from_spanning_rows(field: F, ambient: usize, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::Shape("spanning vector length != ambient dimension".into()));
        }
        let mut m = Mat::from_rows(field.clone(), rows)?;
        let pivots = m.rref_in_place();
        let rank = pivots.len();
        let basis = Mat::from_rows(field, m.rows_vec().into_iter().take(rank).collect())?;
        Ok(LinearSubspace { ambient, basis })
    }

    pub fn zero(field: F, ambient: usize) -> Self {
        LinearSubspace {
            ambient,
            basis: Mat::zero(field, 0, ambient),
        }
    }

    pub fn full(field: F, ambient: usize) -> Self {
        LinearSubspace {
            ambient,
            basis: Mat::identity(field, ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Mat<F> {
        &self.basis
    }

    pub fn field(&self) -> &F {
        &self.basis.field
    }

    /// Matrix whose columns span the subspace (ambient x dim), i.e. the
    /// parametrization used to restrict forms.
    pub fn parametrization(&self) -> Mat<F> {
        self.basis.transpose()
    }

    pub fn contains_vector(&self, v: &[F::Elem]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let f = self.field().clone();
        // reduce v against the echelon basis; the pivot of an RREF row is
        // its first nonzero entry
        let mut v = v.to_vec();
        for i in 0..self.basis.nrows() {
            let Some(pc) = (0..self.ambient).find(|&j| !f.is_zero(self.basis.get(i, j))) else {
                continue;
            };
            let c = v[pc].clone();
            if f.is_zero(&c) {
                continue;
            }
            for j in 0..self.ambient {
                v[j] = f.sub(&v[j], &f.mul(&c, self.basis.get(i, j)));
            }
        }
        v.iter().all(|x| f.is_zero(x))
    }

    pub fn contains(&self, other: &LinearSubspace<F>) -> bool {
        other
            .basis
            .rows_vec()
            .iter()
            .all(|r| self.contains_vector(r))
    }

    pub fn sum(&self, other: &LinearSubspace<F>) -> Result<LinearSubspace<F>> {
        if self.ambient != other.ambient {
            return Err(Error::Shape("subspace sum in different ambient spaces".into()));
        }
        let mut rows = self.basis.rows_vec();
        rows.extend(other.basis.rows_vec());
        LinearSubspace::from_spanning_rows(self.field().clone(), self.ambient, rows)
    }
}

/// Kernel as a canonical subspace.
pub fn kernel_subspace<F: Field>(m: &Mat<F>) -> LinearSubspace<F> {
    let kern = m.right_kernel();
    let ambient = m.ncols();
    LinearSubspace {
        ambient,
        basis: kern,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{rat_i64, Rationals};

    fn qm(rows: Vec<Vec<i64>>) -> Mat<Rationals> {
        Mat::from_rows(
            Rationals,
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_i64).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        let z = Mat::zero(Rationals, 3, 3);
        assert_eq!(kernel_subspace(&z).dim(), 3);
        let id = Mat::identity(Rationals, 4);
        assert_eq!(kernel_subspace(&id).dim(), 0);
    }

    #[test]
    fn rank_nullity() {
        let m = qm(vec![vec![1, 2, 3, 4], vec![2, 4, 6, 8], vec![0, 1, 1, 0]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(kernel_subspace(&m).dim(), 2);
        // kernel vectors actually annihilate
        let k = m.right_kernel();
        for row in k.rows_vec() {
            let img = m.apply(&row).unwrap();
            assert!(img.iter().all(|x| Rationals.is_zero(x)));
        }
    }

    #[test]
    fn subspace_equality_is_geometric() {
        let a = LinearSubspace::from_spanning_rows(
            Rationals,
            3,
            vec![
                vec![rat_i64(1), rat_i64(1), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(1)],
            ],
        )
        .unwrap();
        let b = LinearSubspace::from_spanning_rows(
            Rationals,
            3,
            vec![
                vec![rat_i64(2), rat_i64(2), rat_i64(2)],
                vec![rat_i64(1), rat_i64(1), rat_i64(3)],
            ],
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.contains_vector(&[rat_i64(3), rat_i64(3), rat_i64(-1)]));
        assert!(!a.contains_vector(&[rat_i64(1), rat_i64(0), rat_i64(0)]));
    }

    #[test]
    fn det_small() {
        let m = qm(vec![vec![2, 1], vec![7, 4]]);
        assert_eq!(m.det().unwrap(), rat_i64(1));
        let s = qm(vec![vec![1, 2], vec![2, 4]]);
        assert_eq!(s.det().unwrap(), rat_i64(0));
    }
}
