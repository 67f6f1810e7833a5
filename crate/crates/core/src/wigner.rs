//! Discrete Wigner transform over `F_d²` built on the phase-point operators
//! `[A(q,p)]_{jk} = δ_{j,2q−k} ω^{tr[(j−k)p]}`.
//!
//! Each `A(q,p)` is a weighted permutation matrix, so both directions of the
//! transform cost `O(d)` per grid point or matrix entry (`O(d³)` total) and never
//! form the kernels densely.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{CMatrix, HermitianOperator};
use crate::phase_space::{Line, PhasePoint, Slope, Striation};

/// Real function on the phase space, stored row-major as `values[q·d + p]`.
#[derive(Debug, Clone)]
pub struct WignerFunction {
    field: Arc<Field>,
    values: Vec<f64>,
}

impl WignerFunction {
    pub fn new(field: Arc<Field>, values: Vec<f64>) -> Result<Self> {
        let expected = field.size() * field.size();
        if values.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: values.len() });
        }
        Ok(Self { field, values })
    }

    pub fn from_fn(field: Arc<Field>, f: impl Fn(PhasePoint) -> f64 + Sync) -> Self {
        let d = field.size();
        let values = (0..d * d)
            .into_par_iter()
            .map(|i| f(PhasePoint::new(Elem((i / d) as u32), Elem((i % d) as u32))))
            .collect();
        Self { field, values }
    }

    /// `1/d` on the points of `line`, zero elsewhere: the Wigner function of
    /// the line's pure state.
    pub fn line_indicator(field: Arc<Field>, line: &Line) -> Self {
        let d = field.size();
        let mut values = vec![0.0; d * d];
        for pt in line.points(&field) {
            values[pt.grid_index(d)] = 1.0 / d as f64;
        }
        Self { field, values }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.field.size()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, pt: PhasePoint) -> f64 {
        self.values[pt.grid_index(self.dim())]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &WignerFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `W'(pt) = W(map(pt))`.
    pub fn pull_back(&self, map: impl Fn(PhasePoint) -> PhasePoint + Sync) -> Self {
        Self::from_fn(self.field.clone(), |pt| self.get(map(pt)))
    }

    /// CSV with a header row `q,0,1,...`; one row per `q` index, one column per `p` index.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        let d = self.dim();
        let header: Vec<String> = std::iter::once("q".to_string())
            .chain((0..d).map(|p| p.to_string()))
            .collect();
        writeln!(out, "{}", header.join(","))?;
        for q in 0..d {
            let row = &self.values[q * d..(q + 1) * d];
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{},{}", q, cells.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for WignerFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        let rows: Vec<&[f64]> = self.values.chunks(d).collect();
        let mut st = s.serialize_struct("WignerFunction", 4)?;
        st.serialize_field("d", &d)?;
        st.serialize_field("r", &self.field.characteristic())?;
        st.serialize_field("n", &self.field.degree())?;
        st.serialize_field("values", &rows)?;
        st.end()
    }
}

/// Complex-valued phase-space function, e.g. the Wigner transform of a
/// non-Hermitian product `RS`.
#[derive(Debug, Clone)]
pub struct ComplexWigner {
    field: Arc<Field>,
    values: Vec<Complex64>,
}

impl ComplexWigner {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, pt: PhasePoint) -> Complex64 {
        self.values[pt.grid_index(self.field.size())]
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexWigner) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Drops imaginary parts up to `tol`; larger ones are an error.
    pub fn into_real(self, tol: f64) -> Result<WignerFunction> {
        let im = self.max_imag();
        if im > tol {
            return Err(Error::NotReal(im));
        }
        Ok(WignerFunction {
            field: self.field,
            values: self.values.into_iter().map(|z| z.re).collect(),
        })
    }
}

impl From<&WignerFunction> for ComplexWigner {
    fn from(w: &WignerFunction) -> Self {
        Self {
            field: w.field.clone(),
            values: w.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// `A(q,p)` as a dense matrix.
pub fn kernel_a(field: &Field, pt: PhasePoint) -> HermitianOperator {
    let d = field.size();
    let two_q = field.add(pt.q, pt.q);
    let mut m = CMatrix::zeros(d);
    for j in field.elements() {
        let k = field.sub(two_q, j);
        m.set(j.index(), k.index(), field.character(field.mul(field.sub(j, k), pt.p)));
    }
    HermitianOperator::new_unchecked(m)
}

/// `(1/d) Tr[M A(q,p)]` for an arbitrary square matrix.
pub fn complex_wigner(field: &Arc<Field>, m: &CMatrix) -> Result<ComplexWigner> {
    let d = field.size();
    if m.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
    }
    let f: &Field = field;
    let two = f.from_int(2);
    let inv_d = 1.0 / d as f64;
    let values = (0..d)
        .into_par_iter()
        .flat_map_iter(|qi| {
            let q = Elem(qi as u32);
            let two_q = f.add(q, q);
            // Tr[M A(q,p)] = Σ_j M_{j,2q−j} ω^{tr[2(q−j)p]}
            let terms: Vec<(Complex64, Elem)> = f
                .elements()
                .map(|j| (m.get(j.index(), f.sub(two_q, j).index()), f.mul(two, f.sub(q, j))))
                .collect();
            f.elements().map(move |p| {
                let s: Complex64 = terms
                    .iter()
                    .filter(|(v, _)| v.re != 0.0 || v.im != 0.0)
                    .map(|&(v, u)| v * f.character(f.mul(u, p)))
                    .sum();
                s * inv_d
            })
        })
        .collect();
    Ok(ComplexWigner { field: field.clone(), values })
}

/// Forward transform `W_R(q,p) = (1/d) Tr[R A(q,p)]`.
pub fn to_wigner(field: &Arc<Field>, op: &HermitianOperator) -> Result<WignerFunction> {
    let tol = 1e-12 * op.matrix().max_abs().max(1.0);
    complex_wigner(field, op.matrix())?.into_real(tol)
}

/// Forward transform of a matrix not yet known to be Hermitian.
pub fn wigner_of_matrix(field: &Arc<Field>, m: &CMatrix) -> Result<WignerFunction> {
    let op = HermitianOperator::new(m.clone())?;
    to_wigner(field, &op)
}

/// `Σ_{q,p} W(q,p) A(q,p)` for complex coefficients.
fn inverse_complex(field: &Field, values: &[Complex64]) -> CMatrix {
    let d = field.size();
    let half = field.inv(field.from_int(2)).expect("odd characteristic");
    // R_{jk} = Σ_p W((j+k)/2, p) ω^{tr[(j−k)p]}
    CMatrix::from_fn(d, |j, k| {
        let (j, k) = (Elem(j as u32), Elem(k as u32));
        let q = field.mul(field.add(j, k), half);
        let u = field.sub(j, k);
        let row = &values[q.index() * d..(q.index() + 1) * d];
        field
            .elements()
            .zip(row)
            .map(|(p, &w)| w * field.character(field.mul(u, p)))
            .sum()
    })
}

/// Inverse transform `R = Σ_{q,p} W(q,p) A(q,p)`.
pub fn from_wigner(w: &WignerFunction) -> HermitianOperator {
    let values: Vec<Complex64> = w.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    HermitianOperator::new_unchecked(inverse_complex(&w.field, &values))
}

pub fn from_complex_wigner(w: &ComplexWigner) -> CMatrix {
    inverse_complex(&w.field, &w.values)
}

/// `Σ w A(q,p)` over a sparse list of weighted points, `O(d)` per point.
pub fn from_sparse(field: &Field, points: &[(PhasePoint, f64)]) -> HermitianOperator {
    let d = field.size();
    let mut m = CMatrix::zeros(d);
    for &(pt, weight) in points {
        let two_q = field.add(pt.q, pt.q);
        for j in field.elements() {
            let k = field.sub(two_q, j);
            let z = m.get(j.index(), k.index())
                + weight * field.character(field.mul(field.sub(j, k), pt.p));
            m.set(j.index(), k.index(), z);
        }
    }
    HermitianOperator::new_unchecked(m)
}

/// `d Σ W_R W_S`, which equals `Tr(RS)`.
pub fn hs_inner(a: &WignerFunction, b: &WignerFunction) -> Result<f64> {
    if !a.field.same_as(&b.field) {
        return Err(Error::FieldMismatch);
    }
    let s: f64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum();
    Ok(a.dim() as f64 * s)
}

pub fn line_sum(w: &WignerFunction, line: &Line) -> f64 {
    let f: &Field = &w.field;
    match line.slope {
        Slope::Infinite => {
            let d = f.size();
            let q = line.displacement.index();
            w.values[q * d..(q + 1) * d].iter().sum()
        }
        Slope::Finite(_) => line.points(f).into_iter().map(|pt| w.get(pt)).sum(),
    }
}

/// Line sums over a whole striation, in displacement order.
pub fn striation_sums(w: &WignerFunction, striation: &Striation) -> Vec<f64> {
    let f: &Field = &w.field;
    let d = f.size();
    match striation.slope {
        Slope::Infinite => w.values.chunks(d).map(|row| row.iter().sum()).collect(),
        Slope::Finite(m) => {
            let mut sums = vec![0.0; d];
            for q in f.elements() {
                let mq = f.mul(m, q);
                let row = &w.values[q.index() * d..(q.index() + 1) * d];
                for (p, &v) in f.elements().zip(row) {
                    // the point (q, p) lies on the line with intercept p − m q
                    sums[f.sub(p, mq).index()] += v;
                }
            }
            sums
        }
    }
}

/// Size limits for the phase-space product, which costs `O(d⁴)` for a full
/// grid and `O(d³)` for a single point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoyalCaps {
    pub full: u32,
    pub point: u32,
}

impl Default for MoyalCaps {
    fn default() -> Self {
        Self { full: 11, point: 27 }
    }
}

/// `G(q, a) = Σ_p W(q,p) ω^{tr(2ap)}`, indexed `[q·d + a]`.
fn partial_fourier(w: &ComplexWigner) -> Vec<Complex64> {
    let f: &Field = &w.field;
    let d = f.size();
    let two = f.from_int(2);
    (0..d * d)
        .into_par_iter()
        .map(|i| {
            let (q, a) = (i / d, Elem((i % d) as u32));
            let two_a = f.mul(two, a);
            let row = &w.values[q * d..(q + 1) * d];
            f.elements()
                .zip(row)
                .map(|(p, &v)| v * f.character(f.mul(two_a, p)))
                .sum()
        })
        .collect()
}

fn moyal_point(f: &Field, gr: &[Complex64], gs: &[Complex64], pt: PhasePoint) -> Complex64 {
    let d = f.size();
    let two = f.from_int(2);
    let two_p1 = f.mul(two, pt.p);
    let mut acc = Complex64::new(0.0, 0.0);
    for q2 in f.elements() {
        let b = f.sub(q2, pt.q);
        for q3 in f.elements() {
            let a = f.sub(pt.q, q3);
            let phase = f.character(f.mul(f.sub(q3, q2), two_p1));
            acc += phase * gr[q2.index() * d + a.index()] * gs[q3.index() * d + b.index()];
        }
    }
    acc / d as f64
}

fn check_pair(a: &ComplexWigner, b: &ComplexWigner) -> Result<()> {
    if !a.field.same_as(&b.field) {
        return Err(Error::FieldMismatch);
    }
    Ok(())
}

/// Wigner function of the product `RS` computed in phase space,
/// `W_RS(1) = Σ Γ(1,2,3) W_R(2) W_S(3)` with
/// `Γ = (1/d) ω^{tr{2[(q₃−q₂)p₁ + (q₁−q₃)p₂ + (q₂−q₁)p₃]}}`.
///
/// The sums over `p₂` and `p₃` are factored out first, so a full grid costs
/// `O(d⁴)`. The result is complex in general since `RS` need not be Hermitian.
pub fn moyal_product(
    r: &WignerFunction,
    s: &WignerFunction,
    caps: MoyalCaps,
) -> Result<ComplexWigner> {
    moyal_product_complex(&r.into(), &s.into(), caps)
}

pub fn moyal_product_complex(
    r: &ComplexWigner,
    s: &ComplexWigner,
    caps: MoyalCaps,
) -> Result<ComplexWigner> {
    check_pair(r, s)?;
    let f: &Field = &r.field;
    if f.order() > caps.full {
        return Err(Error::CostCap { d: f.order(), cap: caps.full });
    }
    let (gr, gs) = (partial_fourier(r), partial_fourier(s));
    let d = f.size();
    let values = (0..d * d)
        .into_par_iter()
        .map(|i| {
            let pt = PhasePoint::new(Elem((i / d) as u32), Elem((i % d) as u32));
            moyal_point(f, &gr, &gs, pt)
        })
        .collect();
    Ok(ComplexWigner { field: r.field.clone(), values })
}

/// A single value of [`moyal_product`], for spot checks on larger grids.
pub fn moyal_product_at(
    r: &WignerFunction,
    s: &WignerFunction,
    pt: PhasePoint,
    caps: MoyalCaps,
) -> Result<Complex64> {
    let (r, s): (ComplexWigner, ComplexWigner) = (r.into(), s.into());
    check_pair(&r, &s)?;
    let f: &Field = &r.field;
    if f.order() > caps.point {
        return Err(Error::CostCap { d: f.order(), cap: caps.point });
    }
    Ok(moyal_point(f, &partial_fourier(&r), &partial_fourier(&s), pt))
}
