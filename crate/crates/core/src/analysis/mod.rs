//! Averages, densities, eigenfunctions and seminorms on finite systems.

mod averages;
mod density;
mod eigen;
mod seminorm;

use num_complex::Complex64;
use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{Cyclo, Scalar};
use crate::error::{invalid, Result};

pub use averages::{invariant_expectation, uc_average_product};
pub use density::{density_scan, intersection_density, DensityReport, PointSet};
pub use eigen::{eigenbasis, eigenvalue_extends, EigenData};
pub use seminorm::{delta, ghk_seminorm, ghk_seminorm_power, kronecker_projection};

/// A complex-valued function on the points of a finite system.
#[derive(Clone, Debug)]
pub enum FunctionOnX {
    /// Nowhere-vanishing, root-of-unity valued: `f(x) = e^{2πi r_x/m}`.
    Roots { modulus: u64, residues: Vec<u64> },
    /// Exact values in a cyclotomic field (rationals included).
    Exact(Vec<Cyclo>),
    Float(Vec<Complex64>),
}

/// Value tables of one kind, after lifting roots to exact values.
pub(crate) enum Table {
    Exact(Vec<Cyclo>),
    Float(Vec<Complex64>),
}

impl FunctionOnX {
    pub fn roots(modulus: u64, residues: Vec<u64>) -> Result<Self> {
        if modulus == 0 {
            return invalid("modulus must be positive");
        }
        Ok(FunctionOnX::Roots {
            modulus,
            residues: residues.into_iter().map(|r| r % modulus).collect(),
        })
    }

    pub fn roots_from_fn(n: usize, modulus: u64, f: impl Fn(usize) -> u64) -> Self {
        FunctionOnX::Roots {
            modulus,
            residues: (0..n).map(|x| f(x) % modulus).collect(),
        }
    }

    pub fn constant_one(n: usize) -> Self {
        FunctionOnX::Roots {
            modulus: 1,
            residues: vec![0; n],
        }
    }

    /// `1_A` as an exact function.
    pub fn indicator(n: usize, set: &[usize]) -> Self {
        let mut v = vec![Cyclo::zero(); n];
        for &x in set {
            v[x] = Cyclo::one();
        }
        FunctionOnX::Exact(v)
    }

    pub fn rational(values: &[Rational64]) -> Self {
        FunctionOnX::Exact(values.iter().map(|&r| Cyclo::rational(r)).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            FunctionOnX::Roots { residues, .. } => residues.len(),
            FunctionOnX::Exact(v) => v.len(),
            FunctionOnX::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FunctionOnX::Float(_))
    }

    pub(crate) fn table(&self) -> Table {
        match self {
            FunctionOnX::Roots { modulus, residues } => {
                Table::Exact(residues.iter().map(|&r| Cyclo::root(r, *modulus)).collect())
            }
            FunctionOnX::Exact(v) => Table::Exact(v.clone()),
            FunctionOnX::Float(v) => Table::Float(v.clone()),
        }
    }

    /// The exact value table, or an error for float functions.
    pub fn exact_values(&self) -> Result<Vec<Cyclo>> {
        match self.table() {
            Table::Exact(v) => Ok(v),
            Table::Float(_) => invalid("float function where an exact one is required"),
        }
    }

    pub fn complex_values(&self) -> Vec<Complex64> {
        match self {
            FunctionOnX::Roots { modulus, residues } => residues
                .iter()
                .map(|&r| <Complex64 as Scalar>::root(r, *modulus))
                .collect(),
            FunctionOnX::Exact(v) => v.iter().map(|c| c.to_complex()).collect(),
            FunctionOnX::Float(v) => v.clone(),
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.complex_values()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Exact zero test for exact kinds; `sup_norm == 0` for floats.
    pub fn is_zero(&self) -> bool {
        match self {
            FunctionOnX::Roots { residues, .. } => residues.is_empty(),
            FunctionOnX::Exact(v) => v.iter().all(|c| c.is_zero()),
            FunctionOnX::Float(v) => v.iter().all(|z| z.norm_sqr() == 0.0),
        }
    }

    /// Pointwise equality; exact when both sides are exact, otherwise within `tol`.
    pub fn approx_eq(&self, other: &FunctionOnX, tol: f64) -> bool {
        if self.len() != other.len() {
            return false;
        }
        match (self.table(), other.table()) {
            (Table::Exact(a), Table::Exact(b)) => a.iter().zip(&b).all(|(x, y)| x == y),
            _ => self
                .complex_values()
                .iter()
                .zip(other.complex_values())
                .all(|(x, y)| (x - y).norm() <= tol),
        }
    }

    /// Exact pointwise equality; floats never compare equal to exact values.
    pub fn exact_eq(&self, other: &FunctionOnX) -> bool {
        self.is_exact() && other.is_exact() && self.approx_eq(other, 0.0)
    }

    /// Pointwise product; mixing exact and float kinds is an error.
    pub fn mul(&self, other: &FunctionOnX) -> Result<FunctionOnX> {
        check_len(self, other)?;
        if let (
            FunctionOnX::Roots {
                modulus: m1,
                residues: r1,
            },
            FunctionOnX::Roots {
                modulus: m2,
                residues: r2,
            },
        ) = (self, other)
        {
            let m = num_integer::lcm(*m1, *m2);
            let (s1, s2) = (m / m1, m / m2);
            return Ok(FunctionOnX::Roots {
                modulus: m,
                residues: r1
                    .iter()
                    .zip(r2)
                    .map(|(&a, &b)| (a * s1 + b * s2) % m)
                    .collect(),
            });
        }
        match join(&[self, other])? {
            Joined::Exact(v) => Ok(FunctionOnX::Exact(
                v[0].iter().zip(&v[1]).map(|(a, b)| a.mul(b)).collect(),
            )),
            Joined::Float(v) => Ok(FunctionOnX::Float(
                v[0].iter().zip(&v[1]).map(|(a, b)| a * b).collect(),
            )),
        }
    }

    pub fn conj(&self) -> FunctionOnX {
        match self {
            FunctionOnX::Roots { modulus, residues } => FunctionOnX::Roots {
                modulus: *modulus,
                residues: residues.iter().map(|&r| (modulus - r) % modulus).collect(),
            },
            FunctionOnX::Exact(v) => FunctionOnX::Exact(v.iter().map(|c| c.conj()).collect()),
            FunctionOnX::Float(v) => FunctionOnX::Float(v.iter().map(|c| c.conj()).collect()),
        }
    }

    pub fn sub(&self, other: &FunctionOnX) -> Result<FunctionOnX> {
        check_len(self, other)?;
        match join(&[self, other])? {
            Joined::Exact(v) => Ok(FunctionOnX::Exact(
                v[0].iter().zip(&v[1]).map(|(a, b)| a.sub(b)).collect(),
            )),
            Joined::Float(v) => Ok(FunctionOnX::Float(
                v[0].iter().zip(&v[1]).map(|(a, b)| a - b).collect(),
            )),
        }
    }

    /// `∫ f dμ` for the uniform measure.
    pub fn mean(&self) -> Result<MeanValue> {
        let n = self.len() as i64;
        Ok(match self.table() {
            Table::Exact(v) => MeanValue::Exact(
                v.iter()
                    .fold(Cyclo::zero(), |acc, c| acc.add(c))
                    .scale(Rational64::new(1, n)),
            ),
            Table::Float(v) => MeanValue::Float(v.iter().sum::<Complex64>() / n as f64),
        })
    }
}

/// A scalar that is exact or floating according to its source.
#[derive(Clone, Debug)]
pub enum MeanValue {
    Exact(Cyclo),
    Float(Complex64),
}

impl MeanValue {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            MeanValue::Exact(c) => c.to_complex(),
            MeanValue::Float(z) => *z,
        }
    }
}

fn check_len(a: &FunctionOnX, b: &FunctionOnX) -> Result<()> {
    if a.len() != b.len() {
        return invalid(format!("functions on spaces of size {} and {}", a.len(), b.len()));
    }
    Ok(())
}

pub(crate) enum Joined {
    Exact(Vec<Vec<Cyclo>>),
    Float(Vec<Vec<Complex64>>),
}

/// Brings functions to a common kind, refusing to mix exact with float.
pub(crate) fn join(fs: &[&FunctionOnX]) -> Result<Joined> {
    let exact = fs.iter().filter(|f| f.is_exact()).count();
    if exact == fs.len() {
        Ok(Joined::Exact(
            fs.iter().map(|f| f.exact_values()).collect::<Result<_>>()?,
        ))
    } else if exact == 0 {
        Ok(Joined::Float(fs.iter().map(|f| f.complex_values()).collect()))
    } else {
        invalid("cannot mix exact and float functions")
    }
}

impl Serialize for FunctionOnX {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FunctionOnX", 3)?;
        match self {
            FunctionOnX::Roots { modulus, residues } => {
                st.serialize_field("kind", "roots")?;
                st.serialize_field("modulus", modulus)?;
                st.serialize_field("values", residues)?;
            }
            FunctionOnX::Exact(v) => {
                st.serialize_field("kind", "exact")?;
                st.serialize_field("modulus", &v.iter().map(|c| c.order()).fold(1, num_integer::lcm))?;
                let vals: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                st.serialize_field("values", &vals)?;
            }
            FunctionOnX::Float(v) => {
                st.serialize_field("kind", "float")?;
                st.serialize_field("modulus", &0)?;
                let vals: Vec<[f64; 2]> = v.iter().map(|c| [c.re, c.im]).collect();
                st.serialize_field("values", &vals)?;
            }
        }
        st.end()
    }
}
