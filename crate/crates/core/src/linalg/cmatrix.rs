use std::ops::{Index, IndexMut};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(CMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        CMatrix {
            rows,
            cols,
            data: values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        }
    }

    pub fn from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != rows * cols || im.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got re={} im={}",
                rows * cols,
                re.len(),
                im.len()
            )));
        }
        let data: Vec<C64> = re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)).collect();
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("matrix entries must be finite".into()));
        }
        Ok(CMatrix { rows, cols, data })
    }

    /// `w v^*`, the operator `h ↦ ⟨v, h⟩ w`.
    pub fn outer(w: &[C64], v: &[C64]) -> Self {
        Self::from_fn(w.len(), v.len(), |i, j| w[i] * v[j].conj())
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: C64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Matrix product; zero entries of `self` are skipped, so products with
    /// sparse left factors (permutations, projections) are cheap.
    pub fn matmul(&self, other: &CMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {:?} by {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// `self^* y` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, y: &[C64]) -> Vec<C64> {
        assert_eq!(y.len(), self.rows);
        let mut out = vec![ZERO; self.cols];
        for (i, &yi) in y.iter().enumerate() {
            if yi == ZERO {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * yi;
            }
        }
        out
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&z| z == ZERO)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Indices of rows with at least one nonzero entry.
    pub fn nonzero_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().any(|&z| z != ZERO))
            .collect()
    }

    /// Indices of columns with at least one nonzero entry.
    pub fn nonzero_cols(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cols];
        for i in 0..self.rows {
            for (j, &z) in self.row(i).iter().enumerate() {
                if z != ZERO {
                    hit[j] = true;
                }
            }
        }
        (0..self.cols).filter(|&j| hit[j]).collect()
    }

    pub fn re(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.im).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨a, b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_and_adjoint() {
        let a = CMatrix::from_fn(2, 3, |i, j| C64::new(i as f64, j as f64));
        let b = CMatrix::from_fn(3, 2, |i, j| C64::new((i + j) as f64, 1.0));
        let ab = a.matmul(&b).unwrap();
        // (AB)* = B* A*
        let lhs = ab.adjoint();
        let rhs = b.adjoint().matmul(&a.adjoint()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        assert_eq!(a.adjoint().adjoint(), a);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn outer_acts_as_rank_one() {
        let w = vec![C64::new(1.0, 1.0), C64::new(0.0, 2.0)];
        let v = vec![C64::new(3.0, 0.0), C64::new(0.0, -1.0), C64::new(1.0, 0.0)];
        let e = CMatrix::outer(&w, &v);
        let h = vec![C64::new(0.5, 0.0), C64::new(1.0, 1.0), C64::new(-2.0, 0.0)];
        let lhs = e.mul_vec(&h);
        let ip = inner(&v, &h);
        for (l, &wi) in lhs.iter().zip(&w) {
            assert!((l - ip * wi).norm() < 1e-12);
        }
    }

    #[test]
    fn nonzero_pattern() {
        let mut m = CMatrix::zeros(3, 3);
        m[(1, 2)] = C64::new(1.0, 0.0);
        assert_eq!(m.nonzero_rows(), vec![1]);
        assert_eq!(m.nonzero_cols(), vec![2]);
    }
}
