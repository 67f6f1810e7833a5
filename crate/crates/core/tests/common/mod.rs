#![allow(dead_code)]

use std::sync::Arc;

use mub_balanced::matrix::CMatrix;
use mub_balanced::{Field, HermitianOperator, SymplecticMap};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn field(r: u64, n: u32) -> Arc<Field> {
    Arc::new(Field::new(r, n).unwrap())
}

/// Field for a prime-power order.
pub fn field_of(d: u64) -> Arc<Field> {
    let (r, n) = mub_balanced::prime_power(d).unwrap();
    field(r, n)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unit vector.
pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> HermitianOperator {
    let x = CMatrix::from_vec(d, (0..d * d).map(|_| gaussian(rng)).collect()).unwrap();
    HermitianOperator::new(x.add(&x.adjoint()).scale(0.5)).unwrap()
}

/// Uniform element of SL(2, F), by rejection.
pub fn random_symplectic(rng: &mut ChaCha8Rng, f: &Field) -> SymplecticMap {
    let d = f.order() as u64;
    loop {
        let [a, b, c, e] = [0; 4].map(|_| f.element(rng.random_range(0..d)).unwrap());
        if let Ok(map) = SymplecticMap::new(f, a, b, c, e) {
            return map;
        }
    }
}
