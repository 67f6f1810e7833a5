//! The circularly symmetric MUB-balanced state for `d ≡ 3 (mod 4)`.
//!
//! Its Wigner function depends on a point only through `c = q² + p²`:
//!
//! ```text
//! W(q,p) = f(c),   f(c) = [1 − d δ_{c,0} + Σ_{x≠0} η(x²+1) ω^{tr(xc)}] / (d(d+1))
//! ```
//!
//! (for these `d`, `c = 0` only at the origin). The density matrix has the
//! closed form
//!
//! ```text
//! ρ_jk = [δ_{j,k} − δ_{j,−k} + (iⁿ/√d) Σ_{x≠0} η(x)η(x²+1) ω^{tr{¼[x(j+k)² − x⁻¹(j−k)²]}}] / (d+1)
//! ```
//!
//! where `¼` is the field inverse of 4. A single column costs `O(d²)`, which
//! is how the state vector is obtained for large `d` without forming `ρ`.

mod histogram;
mod orbit;

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::number::supported_dimension;
use crate::phase_space::{slopes, Line, PhasePoint, Slope, Striation, SymplecticMap};
use crate::wigner::{from_wigner, moyal_product, striation_sums, MoyalCaps, WignerFunction};

pub use histogram::{component_histogram, semicircle_fit, Histogram, SemicircleFit, HISTOGRAM_RANGE};
pub use orbit::{povm_from_orbit, povm_completeness_residual, symplectic_image, translated_image};

/// Number of nonzero column indices tried when extracting the state vector.
pub const COLUMN_CANDIDATES: usize = 8;

/// Probabilities below this count as zero.
pub const ZERO_PROBABILITY: f64 = 1e-10;

const MIN_COLUMN_NORM_SQR: f64 = 1e-12;

/// Rejects fields outside the construction's scope (`d ≡ 1 (mod 4)`).
pub fn check_scope(field: &Field) -> Result<()> {
    supported_dimension(field.order() as u64).map(|_| ())
}

/// `f(c)` for every `c ∈ F_d`, indexed by element.
pub fn circle_values(field: &Field) -> Result<Vec<f64>> {
    check_scope(field)?;
    let d = field.size();
    let weights: Vec<(Elem, i32)> = field
        .elements()
        .skip(1)
        .map(|x| (x, field.eta_or_zero(field.add(field.square(x), field.one()))))
        .collect();
    let norm = 1.0 / (d as f64 * (d + 1) as f64);
    Ok(field
        .elements()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| {
            let mut counts = vec![0i64; field.characteristic() as usize];
            for &(x, w) in &weights {
                counts[field.trace(field.mul(x, c)) as usize] += w as i64;
            }
            // x and −x carry the same weight, so the sum is exactly real
            let s = field.omega_weighted_sum(&counts).re;
            let delta = if c.is_zero() { d as f64 } else { 0.0 };
            (1.0 - delta + s) * norm
        })
        .collect())
}

/// The balanced state's Wigner function on the full grid.
pub fn build_wigner(field: &Arc<Field>) -> Result<WignerFunction> {
    let f = circle_values(field)?;
    Ok(wigner_from_circle_values(field, &f))
}

fn wigner_from_circle_values(field: &Arc<Field>, f: &[f64]) -> WignerFunction {
    let fld: &Field = field;
    WignerFunction::from_fn(field.clone(), |pt| {
        f[fld.add(fld.square(pt.q), fld.square(pt.p)).index()]
    })
}

/// Per-`x` data for the closed-form density matrix.
struct DensityKernel<'a> {
    field: &'a Field,
    /// `(x/4, x⁻¹/4, η(x)η(x²+1))` for every nonzero `x`.
    terms: Vec<(Elem, Elem, i32)>,
    prefactor: Complex64,
    norm: f64,
}

impl<'a> DensityKernel<'a> {
    fn new(field: &'a Field) -> Result<Self> {
        check_scope(field)?;
        let quarter = field.inv(field.from_int(4))?;
        let terms = field
            .elements()
            .skip(1)
            .map(|x| {
                let h = field.eta_or_zero(x) * field.eta_or_zero(field.add(field.square(x), field.one()));
                let inv_x = field.inv(x).expect("nonzero");
                (field.mul(x, quarter), field.mul(inv_x, quarter), h)
            })
            .collect();
        let d = field.order() as f64;
        Ok(Self {
            field,
            terms,
            prefactor: Complex64::i().powu(field.degree()) / d.sqrt(),
            norm: 1.0 / (d + 1.0),
        })
    }

    fn entry(&self, j: Elem, k: Elem, counts: &mut [i64]) -> Complex64 {
        let f = self.field;
        counts.iter_mut().for_each(|c| *c = 0);
        let plus = f.square(f.add(j, k));
        let minus = f.square(f.sub(j, k));
        let r = f.characteristic();
        for &(a, b, h) in &self.terms {
            let t = f.trace(f.mul(plus, a)) + r - f.trace(f.mul(minus, b));
            counts[(t % r) as usize] += h as i64;
        }
        let mut delta = 0.0;
        if j == k {
            delta += 1.0;
        }
        if j == f.neg(k) {
            delta -= 1.0;
        }
        (Complex64::new(delta, 0.0) + self.prefactor * f.omega_weighted_sum(counts)) * self.norm
    }

    fn column(&self, k: Elem) -> Vec<Complex64> {
        let r = self.field.characteristic() as usize;
        self.field
            .elements()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map_init(|| vec![0i64; r], |counts, j| self.entry(j, k, counts))
            .collect()
    }
}

/// Column `k` of `ρ` from the closed form, `O(d²)`.
pub fn density_column(field: &Field, k: Elem) -> Result<Vec<Complex64>> {
    Ok(DensityKernel::new(field)?.column(k))
}

/// A single entry `ρ_jk` from the closed form, `O(d)`.
pub fn density_entry(field: &Field, j: Elem, k: Elem) -> Result<Complex64> {
    let kernel = DensityKernel::new(field)?;
    let mut counts = vec![0i64; field.characteristic() as usize];
    Ok(kernel.entry(j, k, &mut counts))
}

/// The real state vector `ψ` with `ρ = |ψ⟩⟨ψ|`, plus the column it came from.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub psi: Vec<f64>,
    /// Index `k` of the column of `ρ` that was normalized.
    pub column_index: Elem,
    pub column: Vec<Complex64>,
    /// `max |Im ρ_jk|` over the column.
    pub max_imag: f64,
    /// `| ‖ρ_{·k}‖² − ρ_kk |`, zero when `(ρ²)_kk = ρ_kk`.
    pub column_norm_residual: f64,
}

/// Normalizes the column of `ρ` with the largest norm among the first
/// [`COLUMN_CANDIDATES`] nonzero indices, chosen via `‖ρ_{·k}‖² = ρ_kk`.
/// The sign makes the first non-negligible component positive.
pub fn state_vector(field: &Field) -> Result<StateVector> {
    let kernel = DensityKernel::new(field)?;
    let mut counts = vec![0i64; field.characteristic() as usize];
    let mut best: Option<(Elem, f64)> = None;
    for k in field.elements().skip(1).take(COLUMN_CANDIDATES) {
        let diag = kernel.entry(k, k, &mut counts).re;
        if best.is_none_or(|(_, b)| diag > b) {
            best = Some((k, diag));
        }
    }
    let (k, diag) = best.ok_or(Error::DegenerateColumns)?;
    if diag < MIN_COLUMN_NORM_SQR {
        return Err(Error::DegenerateColumns);
    }
    let column = kernel.column(k);
    let norm_sqr: f64 = column.iter().map(|z| z.norm_sqr()).sum();
    if norm_sqr < MIN_COLUMN_NORM_SQR {
        return Err(Error::DegenerateColumns);
    }
    let norm = norm_sqr.sqrt();
    let mut psi: Vec<f64> = column.iter().map(|z| z.re / norm).collect();
    if psi.iter().find(|v| v.abs() > 1e-9).is_some_and(|&v| v < 0.0) {
        psi.iter_mut().for_each(|v| *v = -*v);
    }
    let max_imag = column.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(StateVector {
        psi,
        column_index: k,
        column,
        max_imag,
        column_norm_residual: (norm_sqr - diag).abs(),
    })
}

/// Line sums over every striation, in [`slopes`] order.
pub fn striation_probabilities(w: &WignerFunction) -> Vec<(Slope, Vec<f64>)> {
    slopes(w.field())
        .into_par_iter()
        .map(|s| (s, striation_sums(w, &Striation::new(w.field(), s))))
        .collect()
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct PurityCheck {
    /// `|Tr ρ − 1|`.
    pub trace_residual: f64,
    /// `‖ρ² − ρ‖_max`.
    pub idempotence_residual: f64,
    /// `max |Im ρ_jk|`.
    pub max_imag: f64,
    /// `max |W⋆W − W|` from the phase-space product, when `d` is within the cap.
    pub moyal_residual: Option<f64>,
}

/// Purity of the state behind `w`, by the matrix route and (for small `d`)
/// the phase-space product route.
pub fn check_purity(w: &WignerFunction, caps: MoyalCaps) -> Result<PurityCheck> {
    let rho = from_wigner(w);
    let moyal_residual = if w.field().order() <= caps.full {
        let sq = moyal_product(w, w, caps)?;
        Some(
            sq.values()
                .iter()
                .zip(w.values())
                .map(|(z, &v)| (z - v).norm())
                .fold(0.0, f64::max),
        )
    } else {
        None
    };
    Ok(PurityCheck {
        trace_residual: (rho.trace() - 1.0).abs(),
        idempotence_residual: rho.idempotence_residual(),
        max_imag: rho.matrix().max_imag(),
        moyal_residual,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BalanceCheck {
    /// Sorted probability list of each striation, in [`slopes`] order.
    pub sorted: Vec<Vec<f64>>,
    /// Largest elementwise deviation of any sorted list from the first one.
    pub spread: f64,
    /// Number of entries below [`ZERO_PROBABILITY`] in each list.
    pub zero_counts: Vec<usize>,
    /// Largest `|probability|` of a line through the origin.
    pub origin_line_max: f64,
    /// Largest `|Σ_j p_j − 1|` over striations.
    pub total_residual: f64,
}

impl BalanceCheck {
    pub fn multiset(&self) -> &[f64] {
        &self.sorted[0]
    }
}

pub fn check_balanced(w: &WignerFunction) -> BalanceCheck {
    let probs = striation_probabilities(w);
    let sorted_lists: Vec<Vec<f64>> = probs.iter().map(|(_, p)| sorted(p)).collect();
    let spread = sorted_lists
        .iter()
        .flat_map(|l| l.iter().zip(&sorted_lists[0]).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    let zero_counts = sorted_lists
        .iter()
        .map(|l| l.iter().filter(|p| p.abs() < ZERO_PROBABILITY).count())
        .collect();
    // displacement 0 is the line through the origin in every striation
    let origin_line_max = probs.iter().map(|(_, p)| p[0].abs()).fold(0.0, f64::max);
    let total_residual = probs
        .iter()
        .map(|(_, p)| (p.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    BalanceCheck { sorted: sorted_lists, spread, zero_counts, origin_line_max, total_residual }
}

/// `−log₂ Σ_j p_j²`.
pub fn renyi2(p: &[f64]) -> f64 {
    -p.iter().map(|x| x * x).sum::<f64>().log2()
}

#[derive(Debug, Clone, Serialize)]
pub struct MinUncertainty {
    /// `(1/(d+1)) Σ_μ H₂(p^μ)`.
    pub mean_renyi2: f64,
    /// `−log₂(2/(d+1))`.
    pub bound: f64,
    pub residual: f64,
    /// `Σ_{μ,j} (p_j^μ)²`, equal to 2 for every pure state.
    pub sum_of_squares: f64,
}

pub fn min_uncertainty<P: AsRef<[f64]>>(lists: &[P]) -> MinUncertainty {
    let n_bases = lists.len() as f64;
    let mean = lists.iter().map(|p| renyi2(p.as_ref())).sum::<f64>() / n_bases;
    let bound = -(2.0 / n_bases).log2();
    let sum_of_squares = lists
        .iter()
        .flat_map(|p| p.as_ref().iter().map(|x| x * x))
        .sum();
    MinUncertainty { mean_renyi2: mean, bound, residual: (mean - bound).abs(), sum_of_squares }
}

/// The balanced state with its Wigner function, state vector and shared
/// probability multiset.
#[derive(Debug, Clone)]
pub struct BalancedState {
    field: Arc<Field>,
    circle_values: Vec<f64>,
    wigner: WignerFunction,
    state: StateVector,
    prob_multiset: Vec<f64>,
}

impl BalancedState {
    pub fn build(field: Arc<Field>) -> Result<Self> {
        let circle_values = circle_values(&field)?;
        let wigner = wigner_from_circle_values(&field, &circle_values);
        let state = state_vector(&field)?;
        let vertical = striation_sums(&wigner, &Striation::new(&field, Slope::Infinite));
        Ok(Self { field, circle_values, wigner, state, prob_multiset: sorted(&vertical) })
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn wigner(&self) -> &WignerFunction {
        &self.wigner
    }

    /// `f(c)` indexed by the circle label `c`.
    pub fn circle_values(&self) -> &[f64] {
        &self.circle_values
    }

    pub fn psi(&self) -> &[f64] {
        &self.state.psi
    }

    pub fn state_vector(&self) -> &StateVector {
        &self.state
    }

    pub fn rho_column(&self) -> &[Complex64] {
        &self.state.column
    }

    /// Sorted outcome probabilities, shared by every basis.
    pub fn prob_multiset(&self) -> &[f64] {
        &self.prob_multiset
    }

    pub fn psi_complex(&self) -> Vec<Complex64> {
        self.state.psi.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    pub fn verify_purity(&self, caps: MoyalCaps) -> Result<PurityCheck> {
        check_purity(&self.wigner, caps)
    }

    pub fn verify_balanced(&self) -> BalanceCheck {
        check_balanced(&self.wigner)
    }

    pub fn verify_min_uncertainty(&self) -> MinUncertainty {
        let lists: Vec<Vec<f64>> = striation_probabilities(&self.wigner)
            .into_iter()
            .map(|(_, p)| p)
            .collect();
        min_uncertainty(&lists)
    }

    pub fn symplectic_image(&self, map: &SymplecticMap) -> WignerFunction {
        symplectic_image(&self.wigner, map)
    }

    pub fn translated_image(&self, a: Elem, b: Elem) -> WignerFunction {
        translated_image(&self.wigner, a, b)
    }

    /// Line sums along one line.
    pub fn line_probability(&self, line: &Line) -> f64 {
        crate::wigner::line_sum(&self.wigner, line)
    }

    /// `W(q,p)` at the origin.
    pub fn origin_value(&self) -> f64 {
        self.wigner.get(PhasePoint::new(Elem::ZERO, Elem::ZERO))
    }
}

// JSON: {"d", "r", "n", "modulus", "psi", "prob_multiset"}.
impl Serialize for BalancedState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("BalancedState", 6)?;
        st.serialize_field("d", &self.field.order())?;
        st.serialize_field("r", &self.field.characteristic())?;
        st.serialize_field("n", &self.field.degree())?;
        st.serialize_field("modulus", self.field.modulus())?;
        st.serialize_field("psi", &self.state.psi)?;
        st.serialize_field("prob_multiset", &self.prob_multiset)?;
        st.end()
    }
}
