//! Histogram of the rescaled components `√d ψ_j` and a least-squares
//! semicircle fit.
//!
//! A semicircle of radius `B` holding `N` values has density
//! `w(u) = (2N / πB²) √(B² − u²)`, so the normalization fixes the height and
//! only the radius is fitted. In the original scale this is
//! `α √(β² − x²)` with `β = B/√d` and `α = 2d / (πβ²)`; the ideal case
//! `β = 2/√d` gives `α = d²/2π`.

use std::f64::consts::PI;

use serde::Serialize;

/// Histogram support for the rescaled components.
pub const HISTOGRAM_RANGE: (f64, f64) = (-2.1, 2.1);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    /// Values outside `[lo, hi]`.
    pub outside: u64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    pub fn edges(&self, i: usize) -> (f64, f64) {
        let n = self.bins() as f64;
        let at = |k: usize| self.lo + (self.hi - self.lo) * k as f64 / n;
        (at(i), at(i + 1))
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.bins())
            .map(|i| {
                let (a, b) = self.edges(i);
                0.5 * (a + b)
            })
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.outside
    }

    /// Index of the bin holding `x`; bins are half-open except the last.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        if !(self.lo..=self.hi).contains(&x) {
            return None;
        }
        let n = self.bins();
        let i = ((x - self.lo) / (self.hi - self.lo) * n as f64).floor() as usize;
        Some(i.min(n - 1))
    }

    /// `bin_center,count` rows under a header line.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "bin_center,count")?;
        for (c, n) in self.centers().iter().zip(&self.counts) {
            writeln!(out, "{c},{n}")?;
        }
        Ok(())
    }
}

/// Histogram of `√d ψ_j` over [`HISTOGRAM_RANGE`].
pub fn component_histogram(psi: &[f64], bins: usize) -> Histogram {
    assert!(bins > 0, "at least one bin");
    let scale = (psi.len() as f64).sqrt();
    let (lo, hi) = HISTOGRAM_RANGE;
    let mut h = Histogram { lo, hi, counts: vec![0; bins], outside: 0 };
    for &x in psi {
        match h.bin_of(scale * x) {
            Some(i) => h.counts[i] += 1,
            None => h.outside += 1,
        }
    }
    h
}

#[derive(Debug, Clone, Serialize)]
pub struct SemicircleFit {
    pub d: u64,
    /// Fitted radius in the rescaled variable `√d x`.
    pub radius: f64,
    pub beta_hat: f64,
    pub beta: f64,
    pub alpha_hat: f64,
    pub alpha: f64,
    /// `|β̂ − β| / β`.
    pub beta_relative_error: f64,
    /// Root-mean-square bin residual divided by the mean count per bin.
    pub misfit: f64,
}

/// Cumulative fraction of a radius-`b` semicircle below `u`.
fn semicircle_cdf(u: f64, b: f64) -> f64 {
    if u <= -b {
        return 0.0;
    }
    if u >= b {
        return 1.0;
    }
    0.5 + (u * (b * b - u * u).sqrt() + b * b * (u / b).asin()) / (PI * b * b)
}

fn expected_counts(h: &Histogram, n: f64, b: f64) -> Vec<f64> {
    (0..h.bins())
        .map(|i| {
            let (lo, hi) = h.edges(i);
            n * (semicircle_cdf(hi, b) - semicircle_cdf(lo, b))
        })
        .collect()
}

fn sse(h: &Histogram, n: f64, b: f64) -> f64 {
    expected_counts(h, n, b)
        .iter()
        .zip(&h.counts)
        .map(|(e, &c)| (c as f64 - e).powi(2))
        .sum()
}

/// Fits the radius by a grid scan over `[0.5, 4]` followed by golden-section
/// refinement around the best grid point.
pub fn semicircle_fit(h: &Histogram, d: u64) -> SemicircleFit {
    let n = d as f64;
    let (lo, hi, steps) = (0.5, 4.0, 350);
    let step = (hi - lo) / steps as f64;
    let best = (0..=steps)
        .map(|i| lo + step * i as f64)
        .min_by(|a, b| sse(h, n, *a).total_cmp(&sse(h, n, *b)))
        .unwrap();
    let (mut a, mut b) = ((best - step).max(1e-3), best + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    while b - a > 1e-10 {
        if sse(h, n, c) < sse(h, n, e) {
            b = e;
        } else {
            a = c;
        }
        c = b - g * (b - a);
        e = a + g * (b - a);
    }
    let radius = 0.5 * (a + b);
    let sqrt_d = n.sqrt();
    let beta_hat = radius / sqrt_d;
    let beta = 2.0 / sqrt_d;
    let mean_count = n / h.bins() as f64;
    SemicircleFit {
        d,
        radius,
        beta_hat,
        beta,
        alpha_hat: 2.0 * n / (PI * beta_hat * beta_hat),
        alpha: n * n / (2.0 * PI),
        beta_relative_error: (beta_hat - beta).abs() / beta,
        misfit: (sse(h, n, radius) / h.bins() as f64).sqrt() / mean_count,
    }
}
