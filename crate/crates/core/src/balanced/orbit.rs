//! Further balanced states obtained by moving the special one around phase
//! space, and the translation-orbit POVM.

use rayon::prelude::*;

use crate::field::{Elem, Field};
use crate::matrix::{CMatrix, HermitianOperator};
use crate::phase_space::{PhasePoint, SymplecticMap};
use crate::wigner::{from_wigner, WignerFunction};

/// `W'(q,p) = W(L(q,p))`.
pub fn symplectic_image(w: &WignerFunction, map: &SymplecticMap) -> WignerFunction {
    let f: &Field = w.field();
    w.pull_back(|pt| map.apply(f, pt))
}

/// `W'(q,p) = W(q+a, p+b)`.
pub fn translated_image(w: &WignerFunction, a: Elem, b: Elem) -> WignerFunction {
    let f: &Field = w.field();
    w.pull_back(|pt| PhasePoint::new(f.add(pt.q, a), f.add(pt.p, b)))
}

/// `E_{a,b} = ρ_{a,b} / d` for every translation `(a, b)`, in grid order.
pub fn povm_from_orbit(w: &WignerFunction) -> Vec<HermitianOperator> {
    let f: &Field = w.field();
    let d = f.size();
    (0..d * d)
        .into_par_iter()
        .map(|i| {
            let (a, b) = (Elem((i / d) as u32), Elem((i % d) as u32));
            from_wigner(&translated_image(w, a, b)).scale(1.0 / d as f64)
        })
        .collect()
}

/// `‖Σ E − I‖_max`.
pub fn povm_completeness_residual(povm: &[HermitianOperator]) -> f64 {
    let Some(first) = povm.first() else {
        return f64::INFINITY;
    };
    let dim = first.dim();
    let sum = povm
        .iter()
        .fold(CMatrix::zeros(dim), |acc, e| acc.add(e.matrix()));
    sum.max_abs_diff(&CMatrix::identity(dim))
}
