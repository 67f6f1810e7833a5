//! End-to-end verification of one dimension, collected into a
//! machine-readable report of named residuals.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::balanced::{
    check_purity, povm_completeness_residual, povm_from_orbit, translated_image, BalancedState,
};
use crate::error::Result;
use crate::field::Field;
use crate::matrix::CMatrix;
use crate::mub::{build_mubs, measurement_probs};
use crate::phase_space::SymplecticMap;
use crate::wigner::{from_wigner, to_wigner, MoyalCaps};

/// Default tolerances. Floating-point ones grow linearly with `d` above
/// [`SCALE_FROM`]; see [`scaled`].
pub mod tolerances {
    /// Gauss-sum closed form, relative.
    pub const GAUSS: f64 = 1e-10;
    pub const ORTHOGONALITY: f64 = 1e-10;
    pub const ROUND_TRIP: f64 = 1e-12;
    pub const UNBIASED: f64 = 1e-10;
    pub const TRACE: f64 = 1e-10;
    pub const PURITY: f64 = 1e-9;
    pub const MOYAL: f64 = 1e-10;
    pub const REAL: f64 = 1e-12;
    pub const BALANCE: f64 = 1e-10;
    pub const ROUTE: f64 = 1e-10;
    pub const PSI: f64 = 1e-9;
    pub const RENYI: f64 = 1e-9;
    pub const POVM: f64 = 1e-10;
    /// Dimension up to which tolerances are used unscaled.
    pub const SCALE_FROM: u32 = 27;
}

/// `tol · max(1, d / 27)`.
pub fn scaled(tol: f64, d: u32) -> f64 {
    tol * (d as f64 / tolerances::SCALE_FROM as f64).max(1.0)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub d: u32,
    pub r: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
    pub prob_multiset: Vec<f64>,
    /// Zero-probability outcomes per basis (1 unless `d` is a power of 3).
    pub zero_count: usize,
    pub checks: Vec<Check>,
    /// Checks not run because `d` exceeds their cost cap.
    pub skipped: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Fixed-width residual table for terminals.
    pub fn table(&self) -> String {
        let mut out = format!("{:<32} {:>12} {:>12}  status\n", "check", "residual", "tolerance");
        for c in &self.checks {
            out += &format!(
                "{:<32} {:>12.3e} {:>12.3e}  {}\n",
                c.name,
                c.residual,
                c.tolerance,
                if c.passed { "ok" } else { "FAIL" }
            );
        }
        for s in &self.skipped {
            out += &format!("{s:<32} {:>12} {:>12}  skipped\n", "-", "-");
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub caps: MoyalCaps,
    /// Replaces every nonzero default tolerance when set.
    pub tolerance: Option<f64>,
    /// Largest `d` for the full MUB set (`O(d⁴)` time, `O(d³)` memory).
    pub mub_max_d: u32,
    /// Largest `d` for routes that form dense `d × d` matrices.
    pub matrix_max_d: u32,
    /// Largest `d` for exhaustive Gauss and orthogonality sums (`O(d²)`).
    pub field_sums_max_d: u32,
    /// Largest `d` for the translation-orbit POVM (`O(d⁵)`).
    pub povm_max_d: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            caps: MoyalCaps::default(),
            tolerance: None,
            mub_max_d: 127,
            matrix_max_d: 1024,
            field_sums_max_d: 4096,
            povm_max_d: 27,
        }
    }
}

struct Builder {
    d: u32,
    overridden: Option<f64>,
    checks: Vec<Check>,
    skipped: Vec<String>,
}

impl Builder {
    /// Records a check whose default tolerance scales with `d`.
    fn push(&mut self, name: &str, residual: f64, base: f64) {
        let tol = self.overridden.unwrap_or_else(|| scaled(base, self.d));
        self.record(name, residual, tol);
    }

    fn exact(&mut self, name: &str, residual: f64) {
        self.record(name, residual, 0.0);
    }

    fn record(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        });
    }

    fn skip(&mut self, name: &str) {
        self.skipped.push(name.to_string());
    }
}

/// Runs every check that fits the cost caps for `field`, which must satisfy
/// `d ≡ 3 (mod 4)`.
pub fn verify_dimension(field: Arc<Field>, opts: &VerifyOptions) -> Result<VerificationReport> {
    use tolerances as t;
    let f: &Field = &field;
    let d = f.order();
    let mut b = Builder { d, overridden: opts.tolerance, checks: Vec::new(), skipped: Vec::new() };

    // field identities
    b.exact("field.eta_quad_sum", (f.eta_quad_sum() + 2).unsigned_abs() as f64);
    b.exact("field.eta_minus_one", (f.eta(f.neg(f.one()))? + 1).unsigned_abs() as f64);
    if d <= opts.field_sums_max_d {
        let mut gauss: f64 = 0.0;
        let mut ortho: f64 = 0.0;
        for x in f.elements() {
            let target = if x.is_zero() { d as f64 } else { 0.0 };
            ortho = ortho.max((f.omega_orthogonality(x) - target).norm());
            if !x.is_zero() {
                let exact = f.gauss_sum_closed_form(x)?;
                gauss = gauss.max((f.gauss_sum(x)? - exact).norm() / exact.norm());
            }
        }
        b.record("field.gauss_sum", gauss, opts.tolerance.unwrap_or(t::GAUSS));
        b.push("field.omega_orthogonality", ortho, t::ORTHOGONALITY);
    } else {
        b.skip("field.gauss_sum");
        b.skip("field.omega_orthogonality");
    }

    let state = BalancedState::build(field.clone())?;
    let w = state.wigner();
    b.push("state.wigner_total", (w.total() - 1.0).abs(), t::TRACE);
    b.push("state.column_purity", state.state_vector().column_norm_residual, t::PURITY);
    b.push("state.column_real", state.state_vector().max_imag, t::REAL);
    b.push("state.psi_zero_component", state.psi()[0].abs(), t::REAL);

    let balance = state.verify_balanced();
    b.push("state.balanced_spread", balance.spread, t::BALANCE);
    b.push("state.origin_line_zero", balance.origin_line_max, t::BALANCE);
    b.push("state.striation_totals", balance.total_residual, t::BALANCE);
    let zeros = balance.zero_counts[0];
    let zero_mismatch = balance.zero_counts.iter().filter(|&&z| z != zeros).count();
    b.exact("state.equal_zero_counts", zero_mismatch as f64);

    let mu = state.verify_min_uncertainty();
    b.push("renyi.mean_h2", mu.residual, t::RENYI);
    b.push("renyi.sum_of_squares", (mu.sum_of_squares - 2.0).abs(), t::RENYI);

    if d <= opts.matrix_max_d {
        let purity = check_purity(w, opts.caps)?;
        b.push("state.trace", purity.trace_residual, t::TRACE);
        b.push("state.idempotence", purity.idempotence_residual, t::PURITY);
        b.push("state.density_real", purity.max_imag, t::REAL);
        match purity.moyal_residual {
            Some(r) => b.push("state.moyal_idempotence", r, t::MOYAL),
            None => b.skip("state.moyal_idempotence"),
        }

        let rho = from_wigner(w);
        let back = to_wigner(&field, &rho)?;
        b.push("wigner.round_trip", back.max_abs_diff(w), t::ROUND_TRIP);

        let k = state.state_vector().column_index.index();
        let column_gap = rho
            .matrix()
            .column(k)
            .iter()
            .zip(state.rho_column())
            .map(|(a, c)| (a - c).norm())
            .fold(0.0, f64::max);
        b.push("state.column_route", column_gap, t::ROUTE);
        let psi_rho = CMatrix::outer(&state.psi_complex());
        b.push("state.psi_reproduces_rho", psi_rho.max_abs_diff(rho.matrix()), t::PSI);

        let reference = balance.multiset();
        let shear = SymplecticMap::from_ints(f, [[1, 1], [0, 1]])?;
        for (name, image) in [
            ("orbit.symplectic", state.symplectic_image(&shear)),
            ("orbit.translation", translated_image(w, f.one(), f.zero())),
        ] {
            let p = check_purity(&image, MoyalCaps { full: 0, point: 0 })?;
            b.push(&format!("{name}.idempotence"), p.idempotence_residual, t::PURITY);
            let bal = crate::balanced::check_balanced(&image);
            let gap = bal
                .multiset()
                .iter()
                .zip(reference)
                .map(|(a, c)| (a - c).abs())
                .fold(bal.spread, f64::max);
            b.push(&format!("{name}.multiset"), gap, t::BALANCE);
        }
    } else {
        for name in [
            "state.trace",
            "state.idempotence",
            "state.density_real",
            "state.moyal_idempotence",
            "wigner.round_trip",
            "state.column_route",
            "state.psi_reproduces_rho",
            "orbit.symplectic",
            "orbit.translation",
        ] {
            b.skip(name);
        }
    }

    if d <= opts.mub_max_d {
        let mubs = build_mubs(&field)?;
        b.push("mub.unbiasedness", mubs.unbiasedness_residual(), t::UNBIASED);
        b.push("mub.orthonormality", mubs.orthonormality_residual(), t::UNBIASED);
        let psi: Vec<Complex64> = state.psi_complex();
        let gap = mubs
            .bases()
            .iter()
            .flat_map(|basis| {
                let phase = measurement_probs(w, basis);
                let hilbert = basis.probabilities(&psi);
                phase.into_iter().zip(hilbert).map(|(a, c)| (a - c).abs())
            })
            .fold(0.0, f64::max);
        b.push("mub.probability_routes", gap, t::ROUTE);
    } else {
        b.skip("mub.unbiasedness");
        b.skip("mub.orthonormality");
        b.skip("mub.probability_routes");
    }

    if d <= opts.povm_max_d {
        let povm = povm_from_orbit(w);
        b.push("povm.completeness", povm_completeness_residual(&povm), t::POVM);
    } else {
        b.skip("povm.completeness");
    }

    let passed = b.checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        d,
        r: f.characteristic(),
        n: f.degree(),
        modulus: f.modulus().to_vec(),
        prob_multiset: state.prob_multiset().to_vec(),
        zero_count: zeros,
        checks: b.checks,
        skipped: b.skipped,
        passed,
    })
}
