//! Exact arithmetic in cyclotomic fields ℚ(ζ_m).
//!
//! A value is a vector over the group ring ℚ[ℤ/m]; equality is decided after
//! reducing modulo the cyclotomic polynomial Φ_m.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Arc<Vec<i64>> {
    assert!(n >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for each proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_poly(d);
            num = exact_div(&num, &div);
        }
    }
    let poly = Arc::new(num);
    cyclotomic_cache()
        .lock()
        .unwrap()
        .insert(n, poly.clone());
    poly
}

/// Polynomial division by a monic divisor, remainder assumed zero.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut q = vec![0i64; num.len() - dn];
    for i in (0..q.len()).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// An element of ℚ(ζ_m) written as Σ c_k ζ_m^k, k ∈ [0, m).
#[derive(Clone, Debug)]
pub struct Cyclo {
    m: u64,
    coeffs: Vec<Rational64>,
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo {
            m: 1,
            coeffs: vec![Rational64::zero()],
        }
    }

    pub fn one() -> Self {
        Self::rational(Rational64::one())
    }

    pub fn rational(r: Rational64) -> Self {
        Cyclo {
            m: 1,
            coeffs: vec![r],
        }
    }

    /// ζ_m^k.
    pub fn root(k: u64, m: u64) -> Self {
        assert!(m >= 1);
        let mut coeffs = vec![Rational64::zero(); m as usize];
        coeffs[(k % m) as usize] = Rational64::one();
        Cyclo { m, coeffs }
    }

    /// `Σ_k counts[k] ζ_m^k / den`; the accumulation form used by averages of
    /// root-of-unity products.
    pub fn from_histogram(m: u64, counts: &[i64], den: i64) -> Self {
        assert_eq!(counts.len() as u64, m);
        Cyclo {
            m,
            coeffs: counts.iter().map(|&c| Rational64::new(c, den)).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.m
    }

    /// Same value with coefficients over ℚ[ℤ/big], big a multiple of m.
    fn lifted(&self, big: u64) -> Vec<Rational64> {
        if big == self.m {
            return self.coeffs.clone();
        }
        let step = (big / self.m) as usize;
        let mut out = vec![Rational64::zero(); big as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k * step] = *c;
        }
        out
    }

    pub fn add(&self, other: &Cyclo) -> Cyclo {
        let m = self.m.lcm(&other.m);
        let mut a = self.lifted(m);
        let b = other.lifted(m);
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        Cyclo { m, coeffs: a }
    }

    pub fn neg(&self) -> Cyclo {
        Cyclo {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclo) -> Cyclo {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Cyclo) -> Cyclo {
        let m = self.m.lcm(&other.m);
        let a = self.lifted(m);
        let b = other.lifted(m);
        let mu = m as usize;
        let mut out = vec![Rational64::zero(); mu];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[(i + j) % mu] += x * y;
                }
            }
        }
        Cyclo { m, coeffs: out }
    }

    pub fn scale(&self, r: Rational64) -> Cyclo {
        Cyclo {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugate: ζ^k ↦ ζ^{-k}.
    pub fn conj(&self) -> Cyclo {
        let mu = self.m as usize;
        let mut out = vec![Rational64::zero(); mu];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[(mu - k) % mu] = *c;
        }
        Cyclo {
            m: self.m,
            coeffs: out,
        }
    }

    /// Coefficients of the remainder mod Φ_m (length φ(m)).
    fn reduced(&self) -> Vec<Rational64> {
        let phi = cyclotomic_poly(self.m);
        let deg = phi.len() - 1;
        let mut r = self.coeffs.clone();
        for i in (deg..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            for (j, &pj) in phi.iter().enumerate() {
                r[i - deg + j] -= c * Rational64::from_integer(pj);
            }
        }
        r.truncate(deg);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|c| c.is_zero())
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<Rational64> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            return Some(self.coeffs[0]);
        }
        // the power basis 1, ζ, …, ζ^{φ(m)-1} contains 1
        let red = self.reduced();
        if red[1..].iter().all(|c| c.is_zero()) {
            Some(red[0])
        } else {
            None
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.m as f64;
            let v = *c.numer() as f64 / *c.denom() as f64;
            z += Complex64::from_polar(v, t);
        }
        z
    }

    /// If the value is ±ζ^k or 0 this is cheap to read; used for display.
    pub fn as_root(&self) -> Option<(u64, u64)> {
        for k in 0..self.m {
            if self.sub(&Cyclo::root(k, self.m)).is_zero() {
                return Some((k, self.m));
            }
        }
        None
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let red = self.reduced();
        let mut first = true;
        for (k, c) in red.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})z{}^{k}", self.m)?;
            }
        }
        Ok(())
    }
}

/// Field operations shared by the exact and floating function tables.
pub trait Scalar: Clone + Send + Sync + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn root(k: u64, m: u64) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn scale(&self, num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;
    /// `|z|²` as a float.
    fn norm_sqr_f64(&self) -> f64 {
        self.to_complex().norm_sqr()
    }
}

impl Scalar for Cyclo {
    fn zero() -> Self {
        Cyclo::zero()
    }
    fn one() -> Self {
        Cyclo::one()
    }
    fn root(k: u64, m: u64) -> Self {
        Cyclo::root(k, m)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Cyclo::rational(Rational64::new(num, den))
    }
    fn add(&self, other: &Self) -> Self {
        Cyclo::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Cyclo::mul(self, other)
    }
    fn conj(&self) -> Self {
        Cyclo::conj(self)
    }
    fn scale(&self, num: i64, den: i64) -> Self {
        Cyclo::scale(self, Rational64::new(num, den))
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        Cyclo::to_complex(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn root(k: u64, m: u64) -> Self {
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % m) as f64 / m as f64)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn scale(&self, num: i64, den: i64) -> Self {
        self * (num as f64 / den as f64)
    }
    fn is_zero(&self) -> bool {
        self.norm_sqr() == 0.0
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}
