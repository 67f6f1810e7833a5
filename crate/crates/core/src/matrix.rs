//! Dense square complex matrices and the Hermitian operators built on them.
//!
//! Row and column indices are field-element indices, so entry `(j, k)` of an
//! operator on the `d`-dimensional Hilbert space is `⟨j|M|k⟩` with `j, k ∈ F_d`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64 + Sync) -> Self {
        let data = (0..dim * dim)
            .into_par_iter()
            .map(|i| f(i / dim, i % dim))
            .collect();
        Self { dim, data }
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |j, k| v[j] * v[k].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.data[j * self.dim + k]
    }

    pub fn set(&mut self, j: usize, k: usize, v: Complex64) {
        self.data[j * self.dim + k] = v;
    }

    pub fn row(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.dim..(j + 1) * self.dim]
    }

    pub fn column(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim).map(|j| self.get(j, k)).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |j, k| self.get(k, j).conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Matrix product, parallel over output rows.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        });
        Self { dim: n, data }
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|j| self.row(j).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `Tr(A B)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        (0..n)
            .map(|i| (0..n).map(|k| self.get(i, k) * other.get(k, i)).sum::<Complex64>())
            .sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `max |M − M†|`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in j..n {
                worst = worst.max((self.get(j, k) - self.get(k, j).conj()).norm());
            }
        }
        worst
    }
}

/// A Hermitian matrix, checked on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    /// Relative tolerance for the Hermiticity check.
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(m: CMatrix) -> Result<Self> {
        let residual = m.hermitian_residual();
        if residual > Self::TOLERANCE * m.max_abs().max(1.0) {
            return Err(Error::NotHermitian(residual));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim))
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[Complex64]) -> Self {
        Self(CMatrix::outer(v))
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.0.get(j, k)
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    /// `‖M² − M‖_max`, zero for a projector.
    pub fn idempotence_residual(&self) -> f64 {
        self.0.matmul(&self.0).max_abs_diff(&self.0)
    }

    /// `⟨v|M|v⟩`, real for Hermitian `M`.
    pub fn expectation(&self, v: &[Complex64]) -> f64 {
        let mv = self.0.mat_vec(v);
        v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    }
}

// JSON as {"dim": d, "entries": [[[re, im], ...], ...]} with rows in index order.
impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.dim();
        let rows: Vec<Vec<[f64; 2]>> = (0..n)
            .map(|j| self.0.row(j).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        let mut st = s.serialize_struct("HermitianOperator", 2)?;
        st.serialize_field("dim", &n)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_small() {
        let a = CMatrix::from_vec(2, vec![c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        let b = CMatrix::from_vec(2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)]).unwrap();
        let p = a.matmul(&b);
        // [[i(1+i), 1], [0, 2]]
        assert_eq!(p.as_slice(), &[c(-1.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(a.trace_product(&b), p.trace());
    }

    #[test]
    fn hermitian_check() {
        let good = CMatrix::from_vec(2, vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(3.0, 0.0)]).unwrap();
        assert!(HermitianOperator::new(good).is_ok());
        let bad = CMatrix::from_vec(2, vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, 2.0), c(3.0, 0.0)]).unwrap();
        assert!(matches!(HermitianOperator::new(bad), Err(Error::NotHermitian(r)) if (r - 4.0).abs() < 1e-15));
        assert!(CMatrix::from_vec(2, vec![c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn projector_is_idempotent() {
        let s = 0.5f64.sqrt();
        let p = HermitianOperator::projector(&[c(s, 0.0), c(0.0, s)]);
        assert!(p.idempotence_residual() < 1e-15);
        assert!((p.trace() - 1.0).abs() < 1e-15);
        assert!((p.expectation(&[c(s, 0.0), c(0.0, s)]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_layout() {
        let m = HermitianOperator::identity(2);
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"dim":2,"entries":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]}"#
        );
    }
}
