mod common;

use mub_balanced::balanced::{check_balanced, circle_values, component_histogram, state_vector};
use mub_balanced::mub::build_mubs;
use mub_balanced::phase_space::{all_points, circle_of};
use mub_balanced::wigner::from_wigner;
use mub_balanced::BalancedState;
use nalgebra::DMatrix;
use num_complex::Complex64;

use common::{field, field_of};

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn density_matrix_spectrum_is_one_then_zeros() {
    for d in [3, 7, 11, 19, 27] {
        let state = BalancedState::build(field_of(d)).unwrap();
        let rho = from_wigner(state.wigner());
        let n = rho.dim();
        let m = DMatrix::from_fn(n, n, |j, k| rho.get(j, k));
        let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        assert!((ev[0] - 1.0).abs() < 1e-10, "d={d}: {ev:?}");
        assert!(ev[1..].iter().all(|x| x.abs() < 1e-10), "d={d}: {ev:?}");
    }
}

#[test]
fn constant_on_circles() {
    for d in [3, 7, 11, 19, 23, 27] {
        let f = field_of(d);
        let state = BalancedState::build(f.clone()).unwrap();
        let vals = circle_values(&f).unwrap();
        for pt in all_points(&f) {
            assert_eq!(state.wigner().get(pt), vals[circle_of(&f, pt).index()]);
        }
        for c in f.elements() {
            assert!((vals[c.index()] - vals[f.neg(c).index()]).abs() < 1e-14);
        }
    }
}

#[test]
fn hilbert_space_probabilities_match_line_sums() {
    for d in [7, 11, 27] {
        let f = field_of(d);
        let state = BalancedState::build(f.clone()).unwrap();
        let psi = state.psi_complex();
        let set = build_mubs(&f).unwrap();
        for probs in set.probabilities(&psi) {
            let gap = sorted(probs)
                .iter()
                .zip(state.prob_multiset())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(gap < 1e-10, "d={d} gap {gap}");
        }
    }
}

// Values from an independent evaluation of GF(27) built on x³+2x+1.
#[test]
fn d27_multiset_has_thirteen_zeros() {
    let state = BalancedState::build(field(3, 3)).unwrap();
    let probs = state.prob_multiset();
    assert!(probs[..13].iter().all(|p| p.abs() < 1e-12));
    assert!(probs[13..].iter().all(|p| (p - 1.0 / 14.0).abs() < 1e-12));
    let bal = check_balanced(state.wigner());
    assert!(bal.zero_counts.iter().all(|&z| z == 13));
    assert!(bal.origin_line_max < 1e-12);
}

#[test]
fn multiset_does_not_depend_on_modulus() {
    let a = BalancedState::build(field(3, 3)).unwrap();
    let other = mub_balanced::Field::with_modulus(3, 3, vec![1, 2, 0, 1]).unwrap();
    let b = BalancedState::build(std::sync::Arc::new(other)).unwrap();
    for (x, y) in a.prob_multiset().iter().zip(b.prob_multiset()) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn state_vector_properties() {
    for d in [7, 11, 19, 23, 43, 343] {
        let f = field_of(d);
        let sv = state_vector(&f).unwrap();
        let norm: f64 = sv.psi.iter().map(|x| x * x).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!(sv.psi[0].abs() < 1e-12);
        assert!(sv.max_imag < 1e-12, "d={d}");
        assert!(sv.column_norm_residual < 1e-10, "d={d}");
        let first = sv.psi.iter().find(|x| x.abs() > 1e-9).unwrap();
        assert!(*first > 0.0);
    }
}

#[test]
fn psi_reproduces_every_column() {
    let f = field_of(19);
    let state = BalancedState::build(f.clone()).unwrap();
    let rho = from_wigner(state.wigner());
    let psi = state.psi();
    for j in 0..19 {
        for k in 0..19 {
            let outer = Complex64::new(psi[j] * psi[k], 0.0);
            assert!((rho.get(j, k) - outer).norm() < 1e-9);
        }
    }
}

#[test]
fn d3_histogram_bins() {
    let sv = state_vector(&field(3, 1)).unwrap();
    let h = component_histogram(&sv.psi, 10);
    assert_eq!(h.total(), 3);
    let x = 1.5f64.sqrt();
    let mut expected = vec![0u64; 10];
    for v in [0.0, x, -x] {
        expected[h.bin_of(v).unwrap()] += 1;
    }
    assert_eq!(h.counts, expected);
    assert_eq!(h.counts[5], 1);
}
