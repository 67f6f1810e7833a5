//! Exact arithmetic in GF(r^n) for an odd prime `r`.
//!
//! Elements are stored as the base-`r` integer `c_0 + c_1 r + ... + c_{n-1} r^{n-1}`
//! of their coefficient vector with respect to the power basis `1, β, ..., β^{n-1}`,
//! where `β` is the class of `x` modulo the defining polynomial. A [`Field`] owns all
//! lookup tables; elements are plain [`Elem`] handles that are only meaningful
//! together with the field that produced them.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::number::{is_prime, prime_factors};

/// Fields up to this order get exp/log/trace tables; larger ones use
/// polynomial arithmetic.
pub const TABLE_LIMIT: u64 = 1 << 20;

const MAX_ORDER: u64 = 1 << 31;

/// Serializable description of a field: characteristic, degree and the monic
/// defining polynomial (coefficients low to high, `n + 1` entries).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub r: u32,
    pub n: u32,
    pub modulus: Vec<u32>,
}

/// A field element, identified by its index in `0..d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct Tables {
    /// `exp[i] = g^i` for `i in 0..2(d-1)`, doubled to skip a reduction in `mul`.
    exp: Vec<u32>,
    /// Discrete log base `g`; entry 0 is unused.
    log: Vec<u32>,
    trace: Vec<u32>,
}

#[derive(Debug)]
pub struct Field {
    r: u32,
    n: u32,
    d: u32,
    modulus: Vec<u32>,
    trace_basis: Vec<u32>,
    omega: Vec<Complex64>,
    tables: Option<Tables>,
}

pub struct FieldBuilder {
    r: u64,
    n: u32,
    modulus: Option<Vec<u32>>,
    tables: bool,
}

impl FieldBuilder {
    /// Use this defining polynomial (low-to-high, monic, `n + 1` coefficients)
    /// instead of searching for one.
    pub fn modulus(mut self, modulus: Vec<u32>) -> Self {
        self.modulus = Some(modulus);
        self
    }

    /// Disable the exp/log tables even for small fields.
    pub fn tables(mut self, enabled: bool) -> Self {
        self.tables = enabled;
        self
    }

    pub fn build(self) -> Result<Field> {
        let FieldBuilder { r, n, modulus, tables } = self;
        if !is_prime(r) {
            return Err(Error::NotPrime(r));
        }
        if r == 2 {
            return Err(Error::EvenCharacteristic);
        }
        if n == 0 {
            return Err(Error::ZeroDegree);
        }
        let d = r.checked_pow(n).filter(|&d| d < MAX_ORDER).ok_or(Error::FieldTooLarge(u64::MAX))?;
        let r32 = r as u32;
        let modulus = match modulus {
            Some(m) => {
                validate_modulus(&m, r32, n)?;
                m
            }
            None => smallest_irreducible(r32, n),
        };
        let mut field = Field {
            r: r32,
            n,
            d: d as u32,
            modulus,
            trace_basis: Vec::new(),
            omega: (0..r32)
                .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / r as f64))
                .collect(),
            tables: None,
        };
        field.trace_basis = (0..n)
            .map(|j| field.trace_by_definition(field.basis_element(j)))
            .collect();
        if tables && d <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }
}

impl Field {
    pub fn builder(r: u64, n: u32) -> FieldBuilder {
        FieldBuilder { r, n, modulus: None, tables: true }
    }

    /// GF(r^n) with the lexicographically smallest monic irreducible modulus.
    pub fn new(r: u64, n: u32) -> Result<Self> {
        Self::builder(r, n).build()
    }

    pub fn with_modulus(r: u64, n: u32, modulus: Vec<u32>) -> Result<Self> {
        Self::builder(r, n).modulus(modulus).build()
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        Self::with_modulus(spec.r as u64, spec.n, spec.modulus.clone())
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { r: self.r, n: self.n, modulus: self.modulus.clone() }
    }

    pub fn characteristic(&self) -> u32 {
        self.r
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    /// Order as a `usize`, the matrix dimension and grid side length.
    pub fn size(&self) -> usize {
        self.d as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    /// Same characteristic, degree and modulus.
    pub fn same_as(&self, other: &Field) -> bool {
        self.r == other.r && self.n == other.n && self.modulus == other.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    pub fn element(&self, index: u64) -> Result<Elem> {
        if index < self.d as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::ElementOutOfRange { index, order: self.d })
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl DoubleEndedIterator<Item = Elem> + ExactSizeIterator + Clone {
        (0..self.d).map(Elem)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.r as i64) as u32)
    }

    pub fn coeffs(&self, a: Elem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.n)
            .map(|_| {
                let c = v % self.r;
                v /= self.r;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() != self.n as usize || coeffs.iter().any(|&c| c >= self.r) {
            return Err(Error::InvalidCoefficients(coeffs.to_vec()));
        }
        Ok(Elem(coeffs.iter().rev().fold(0, |acc, &c| acc * self.r + c)))
    }

    fn basis_element(&self, j: u32) -> Elem {
        Elem(self.r.pow(j))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.r { s - self.r } else { s });
        }
        self.digitwise(a, b, |x, y, r| (x + y) % r)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.n == 1 {
            return Elem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.r - b.0 });
        }
        self.digitwise(a, b, |x, y, r| (x + r - y) % r)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        self.sub(Elem(0), a)
    }

    fn digitwise(&self, a: Elem, b: Elem, op: impl Fn(u32, u32, u32) -> u32) -> Elem {
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        for _ in 0..self.n {
            out += op(x % self.r, y % self.r, self.r) * place;
            place *= self.r;
            x /= self.r;
            y /= self.r;
        }
        Elem(out)
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.index()] + t.log[b.index()]) as usize]),
            None => self.mul_poly(a, b),
        }
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let m = self.d - 1;
                Elem(t.exp[((m - t.log[a.index()]) % m) as usize])
            }
            None => self.pow(a, self.d as u64 - 2),
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Field trace onto the prime field, as an integer in `0..r`.
    pub fn trace(&self, y: Elem) -> u32 {
        if let Some(t) = &self.tables {
            return t.trace[y.index()];
        }
        if self.n == 1 {
            return y.0;
        }
        let mut v = y.0;
        let mut acc = 0u64;
        for &tb in &self.trace_basis {
            acc += (v % self.r) as u64 * tb as u64;
            v /= self.r;
        }
        (acc % self.r as u64) as u32
    }

    /// `y + y^r + ... + y^{r^{n-1}}` evaluated literally with field arithmetic.
    ///
    /// Panics if the sum leaves the prime subfield, which would mean the modulus
    /// is not irreducible.
    pub fn trace_by_definition(&self, y: Elem) -> u32 {
        let mut term = y;
        let mut acc = Elem(0);
        for _ in 0..self.n {
            acc = self.add(acc, term);
            term = self.pow_poly(term, self.r as u64);
        }
        assert!(acc.0 < self.r, "trace left the prime subfield");
        acc.0
    }

    /// Quadratic character: `+1` on nonzero squares, `-1` on non-squares.
    pub fn eta(&self, y: Elem) -> Result<i32> {
        if y.0 == 0 {
            return Err(Error::CharacterAtZero);
        }
        Ok(self.eta_or_zero(y))
    }

    /// Quadratic character extended by `eta(0) = 0`.
    pub fn eta_or_zero(&self, y: Elem) -> i32 {
        if y.0 == 0 {
            return 0;
        }
        match &self.tables {
            Some(t) => {
                if t.log[y.index()] % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            None => {
                if self.pow(y, (self.d as u64 - 1) / 2).0 == 1 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    /// `ω^k` with `ω = exp(2πi/r)`.
    pub fn omega_pow(&self, k: u32) -> Complex64 {
        self.omega[(k % self.r) as usize]
    }

    /// `ω^{tr(y)}`.
    pub fn character(&self, y: Elem) -> Complex64 {
        self.omega[self.trace(y) as usize]
    }

    /// Sums `ω^k` weighted by integer multiplicities `counts[k]`, pairing `k`
    /// with `r - k` so that conjugate-symmetric count vectors give an exactly
    /// real result and antisymmetric ones an exactly imaginary result.
    pub fn omega_weighted_sum(&self, counts: &[i64]) -> Complex64 {
        debug_assert_eq!(counts.len(), self.r as usize);
        let r = self.r as usize;
        let mut re = counts[0] as f64;
        let mut im = 0.0;
        for k in 1..=r / 2 {
            let w = self.omega[k];
            re += (counts[k] + counts[r - k]) as f64 * w.re;
            im += (counts[k] - counts[r - k]) as f64 * w.im;
        }
        Complex64::new(re, im)
    }

    /// `Σ_{x ≠ 0} η(x² + 1)`, with the convention `η(0) = 0` for fields where
    /// `x² + 1` can vanish.
    pub fn eta_quad_sum(&self) -> i64 {
        self.elements()
            .skip(1)
            .map(|x| self.eta_or_zero(self.add(self.square(x), Elem(1))) as i64)
            .sum()
    }

    /// `Σ_q ω^{tr(x q²)}`, summed directly over the field.
    pub fn gauss_sum(&self, x: Elem) -> Result<Complex64> {
        if x.0 == 0 {
            return Err(Error::GaussSumAtZero);
        }
        let mut counts = vec![0i64; self.r as usize];
        for q in self.elements() {
            counts[self.trace(self.mul(x, self.square(q))) as usize] += 1;
        }
        Ok(self.omega_weighted_sum(&counts))
    }

    /// Closed form `iⁿ η(x) √d` of the quadratic Gauss sum.
    pub fn gauss_sum_closed_form(&self, x: Elem) -> Result<Complex64> {
        let eta = self.eta(x)? as f64;
        let i_n = Complex64::i().powu(self.n);
        Ok(i_n * eta * (self.d as f64).sqrt())
    }

    /// `Σ_x ω^{tr(x y)}`, which is `d` for `y = 0` and zero otherwise.
    pub fn omega_orthogonality(&self, y: Elem) -> Complex64 {
        let mut counts = vec![0i64; self.r as usize];
        for x in self.elements() {
            counts[self.trace(self.mul(x, y)) as usize] += 1;
        }
        self.omega_weighted_sum(&counts)
    }

    // Polynomial arithmetic on coefficient vectors, used to build the tables
    // and for fields above TABLE_LIMIT.

    fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let prod = poly_mulmod(&ca, &cb, &self.modulus, self.r);
        Elem(prod.iter().rev().fold(0, |acc, &c| acc * self.r + c))
    }

    fn pow_poly(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> Tables {
        let d = self.d as usize;
        let order = d as u64 - 1;
        let factors = prime_factors(order);
        let g = (1..self.d)
            .map(Elem)
            .find(|&g| factors.iter().all(|&p| self.pow_poly(g, order / p).0 != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * (d - 1)];
        let mut log = vec![0u32; d];
        let mut x = Elem(1);
        for i in 0..d - 1 {
            exp[i] = x.0;
            exp[i + d - 1] = x.0;
            log[x.index()] = i as u32;
            x = self.mul_poly(x, g);
        }
        let trace = (0..self.d).map(|y| self.trace(Elem(y))).collect();
        Tables { exp, log, trace }
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], r: u32) -> Vec<u32> {
    let n = modulus.len() - 1;
    let r64 = r as u64;
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % r64;
        }
    }
    // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
    for top in (n..2 * n).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (k, &m) in modulus[..n].iter().enumerate() {
            let sub = c * m as u64 % r64;
            let idx = top - n + k;
            prod[idx] = (prod[idx] + r64 - sub) % r64;
        }
    }
    prod[..n].iter().map(|&c| c as u32).collect()
}

/// Remainder of `a` modulo the monic polynomial `m` over Z_r (low-to-high).
fn poly_rem(a: &[u32], m: &[u32], r: u32) -> Vec<u32> {
    let r64 = r as u64;
    let dm = m.len() - 1;
    let mut rem: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    while rem.len() > dm {
        let lead = rem.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let shift = rem.len() - dm;
        for (k, &mk) in m[..dm].iter().enumerate() {
            let idx = shift + k;
            rem[idx] = (rem[idx] + r64 - lead * mk as u64 % r64) % r64;
        }
    }
    rem.into_iter().map(|c| c as u32).collect()
}

/// True if the monic polynomial `f` (low-to-high) has no monic factor of
/// degree `1..=deg/2` over Z_r.
pub(crate) fn is_irreducible(f: &[u32], r: u32) -> bool {
    let n = f.len() - 1;
    for k in 1..=n / 2 {
        let count = (r as u64).pow(k as u32);
        for t in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut v = t;
            for _ in 0..k {
                g.push((v % r as u64) as u32);
                v /= r as u64;
            }
            g.push(1);
            if poly_rem(f, &g, r).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `n`,
/// comparing coefficients `c_0, c_1, ...` in that order.
pub(crate) fn smallest_irreducible(r: u32, n: u32) -> Vec<u32> {
    let count = (r as u64).pow(n);
    (0..count)
        .map(|t| {
            let mut coeffs = vec![0u32; n as usize + 1];
            let mut v = t;
            for j in (0..n as usize).rev() {
                coeffs[j] = (v % r as u64) as u32;
                v /= r as u64;
            }
            coeffs[n as usize] = 1;
            coeffs
        })
        .find(|f| is_irreducible(f, r))
        .expect("irreducible polynomials of every degree exist")
}

fn validate_modulus(m: &[u32], r: u32, n: u32) -> Result<()> {
    if m.len() != n as usize + 1 {
        return Err(Error::InvalidModulus(format!(
            "expected {} coefficients, got {}",
            n + 1,
            m.len()
        )));
    }
    if m[n as usize] != 1 {
        return Err(Error::InvalidModulus("leading coefficient must be 1".into()));
    }
    if let Some(&c) = m.iter().find(|&&c| c >= r) {
        return Err(Error::InvalidModulus(format!("coefficient {c} not reduced mod {r}")));
    }
    if !is_irreducible(m, r) {
        return Err(Error::InvalidModulus(format!("{m:?} is reducible over Z_{r}")));
    }
    Ok(())
}
