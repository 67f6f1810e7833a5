//! The complete set of `d + 1` mutually unbiased bases read off the striations.
//!
//! Every line `λ` carries the pure state whose Wigner function is `1/d` on `λ`;
//! the `d` parallel lines of a striation give an orthonormal basis. Basis 0 is
//! the vertical striation, which reproduces the standard basis, and basis
//! `1 + m` belongs to the finite slope `m`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{CMatrix, HermitianOperator};
use crate::phase_space::{Line, Slope, Striation};
use crate::wigner::{from_sparse, striation_sums, WignerFunction};

/// Residual allowed when pulling a unit vector out of a rank-one projector.
pub const EIGEN_TOLERANCE: f64 = 1e-10;

/// Components smaller than this are skipped when fixing the global phase.
const PHASE_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct MubBasis {
    pub mu: usize,
    pub slope: Slope,
    /// `vectors[j]` comes from `lines[j]`.
    pub vectors: Vec<Vec<Complex64>>,
    pub lines: Vec<Line>,
}

impl Serialize for MubBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let vectors: Vec<Vec<[f64; 2]>> = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        let mut st = s.serialize_struct("MubBasis", 3)?;
        st.serialize_field("mu", &self.mu)?;
        st.serialize_field("slope", &self.slope)?;
        st.serialize_field("vectors", &vectors)?;
        st.end()
    }
}

impl MubBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// `|⟨b_j|ψ⟩|²` for each basis vector.
    pub fn probabilities(&self, psi: &[Complex64]) -> Vec<f64> {
        self.vectors.iter().map(|b| inner(b, psi).norm_sqr()).collect()
    }

    /// `max |⟨b_j|b_k⟩ − δ_jk|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (j, a) in self.vectors.iter().enumerate() {
            for (k, b) in self.vectors.iter().enumerate() {
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((inner(a, b) - target).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MubSet {
    #[serde(skip)]
    field: Arc<Field>,
    d: usize,
    bases: Vec<MubBasis>,
}

/// `⟨a|b⟩`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Unit vector spanning a rank-one projector: the largest-norm column,
/// normalized, with its first non-negligible component made real and positive.
pub fn projector_vector(p: &HermitianOperator) -> Result<Vec<Complex64>> {
    let d = p.dim();
    let m = p.matrix();
    let mut best = (0, -1.0);
    for k in 0..d {
        let norm: f64 = (0..d).map(|j| m.get(j, k).norm_sqr()).sum();
        if norm > best.1 {
            best = (k, norm);
        }
    }
    let norm = best.1.sqrt();
    if norm == 0.0 {
        return Err(Error::EigenResidual(1.0));
    }
    let mut v: Vec<Complex64> = m.column(best.0).into_iter().map(|z| z / norm).collect();
    fix_phase(&mut v);
    let pv = m.mat_vec(&v);
    let residual = pv.iter().zip(&v).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if residual > EIGEN_TOLERANCE {
        return Err(Error::EigenResidual(residual));
    }
    Ok(v)
}

fn fix_phase(v: &mut [Complex64]) {
    if let Some(z) = v.iter().find(|z| z.norm() > PHASE_THRESHOLD).copied() {
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
    }
}

/// Projector `Σ_{(q,p)∈λ} A(q,p) / d` of a line state.
pub fn line_projector(field: &Field, line: &Line) -> HermitianOperator {
    let w = 1.0 / field.size() as f64;
    let pts: Vec<_> = line.points(field).into_iter().map(|pt| (pt, w)).collect();
    from_sparse(field, &pts)
}

pub fn build_mubs(field: &Arc<Field>) -> Result<MubSet> {
    let d = field.size();
    let slopes: Vec<Slope> = std::iter::once(Slope::Infinite)
        .chain(field.elements().map(Slope::Finite))
        .collect();
    let bases = slopes
        .into_par_iter()
        .enumerate()
        .map(|(mu, slope)| {
            let striation = Striation::new(field, slope);
            let vectors = striation
                .lines
                .par_iter()
                .map(|line| projector_vector(&line_projector(field, line)))
                .collect::<Result<Vec<_>>>()?;
            Ok(MubBasis { mu, slope, vectors, lines: striation.lines })
        })
        .collect::<Result<Vec<_>>>()?;
    // the vertical striation is the standard basis up to phases
    let deviation = bases[0]
        .vectors
        .iter()
        .enumerate()
        .flat_map(|(b, v)| {
            v.iter()
                .enumerate()
                .map(move |(j, z)| (z.norm() - if j == b { 1.0 } else { 0.0 }).abs())
        })
        .fold(0.0, f64::max);
    if deviation > EIGEN_TOLERANCE {
        return Err(Error::EigenResidual(deviation));
    }
    Ok(MubSet { field: field.clone(), d, bases })
}

impl MubSet {
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn bases(&self) -> &[MubBasis] {
        &self.bases
    }

    pub fn basis(&self, mu: usize) -> &MubBasis {
        &self.bases[mu]
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Outcome probabilities of `psi` in every basis.
    pub fn probabilities(&self, psi: &[Complex64]) -> Vec<Vec<f64>> {
        self.bases.iter().map(|b| b.probabilities(psi)).collect()
    }

    /// `max | |⟨b_j^μ|b_k^ν⟩|² − 1/d |` over all pairs of distinct bases.
    pub fn unbiasedness_residual(&self) -> f64 {
        let target = 1.0 / self.d as f64;
        let n = self.bases.len();
        (0..n)
            .into_par_iter()
            .map(|mu| {
                let mut worst: f64 = 0.0;
                for nu in mu + 1..n {
                    for a in &self.bases[mu].vectors {
                        for b in &self.bases[nu].vectors {
                            worst = worst.max((inner(a, b).norm_sqr() - target).abs());
                        }
                    }
                }
                worst
            })
            .reduce(|| 0.0, f64::max)
    }

    pub fn orthonormality_residual(&self) -> f64 {
        self.bases
            .par_iter()
            .map(MubBasis::orthonormality_residual)
            .reduce(|| 0.0, f64::max)
    }

    /// `‖Σ_{μ,j} |b_j^μ⟩⟨b_j^μ| − (d+1) I‖_max`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.d;
        let mut sum = CMatrix::zeros(d);
        for v in self.bases.iter().flat_map(|b| &b.vectors) {
            sum = sum.add(&CMatrix::outer(v));
        }
        sum.max_abs_diff(&CMatrix::identity(d).scale((d + 1) as f64))
    }
}

/// Line sums of `w` over the striation of `basis`, in displacement order.
pub fn measurement_probs(w: &WignerFunction, basis: &MubBasis) -> Vec<f64> {
    striation_sums(w, &Striation::new(w.field(), basis.slope))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wigner::from_wigner;

    fn field(r: u64, n: u32) -> Arc<Field> {
        Arc::new(Field::new(r, n).unwrap())
    }

    #[test]
    fn d3_counts_and_standard_basis() {
        let f = field(3, 1);
        let set = build_mubs(&f).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.bases().iter().all(|b| b.dim() == 3));
        let std = set.basis(0);
        assert_eq!(std.slope, Slope::Infinite);
        for (b, v) in std.vectors.iter().enumerate() {
            for (j, z) in v.iter().enumerate() {
                let expected = if j == b { 1.0 } else { 0.0 };
                assert!((z - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sparse_projector_matches_inverse_transform() {
        let f = field(5, 1);
        let line = Striation::new(&f, Slope::Finite(f.from_int(2))).lines[3];
        let dense = from_wigner(&WignerFunction::line_indicator(f.clone(), &line));
        assert!(line_projector(&f, &line).matrix().max_abs_diff(dense.matrix()) < 1e-14);
    }

    #[test]
    fn d7_unbiased_and_complete() {
        let f = field(7, 1);
        let set = build_mubs(&f).unwrap();
        assert!(set.unbiasedness_residual() < 1e-10);
        assert!(set.orthonormality_residual() < 1e-10);
        assert!(set.completeness_residual() < 1e-10);
    }

    #[test]
    fn probabilities_of_basis_vectors() {
        let f = field(7, 1);
        let set = build_mubs(&f).unwrap();
        let psi = &set.basis(3).vectors[2];
        for (mu, probs) in set.probabilities(psi).iter().enumerate() {
            for (j, &p) in probs.iter().enumerate() {
                let expected = if mu == 3 {
                    if j == 2 { 1.0 } else { 0.0 }
                } else {
                    1.0 / 7.0
                };
                assert!((p - expected).abs() < 1e-10);
            }
        }
        // phase-space route on the same state
        let w = WignerFunction::line_indicator(f.clone(), &set.basis(3).lines[2]);
        let own = measurement_probs(&w, set.basis(3));
        assert!((own[2] - 1.0).abs() < 1e-12);
        let mixed = WignerFunction::from_fn(f.clone(), |_| 1.0 / 49.0);
        for b in set.bases() {
            assert!(measurement_probs(&mixed, b).iter().all(|p| (p - 1.0 / 7.0).abs() < 1e-12));
        }
    }

    #[test]
    fn json_shape() {
        let f = field(3, 1);
        let set = build_mubs(&f).unwrap();
        let v: serde_json::Value = serde_json::to_value(&set).unwrap();
        assert_eq!(v["d"], 3);
        assert_eq!(v["bases"][0]["slope"], "inf");
        assert_eq!(v["bases"][1]["slope"], 0);
        assert_eq!(v["bases"][2]["vectors"].as_array().unwrap().len(), 3);
        assert_eq!(v["bases"][2]["vectors"][0][0].as_array().unwrap().len(), 2);
    }
}
