//! Dense square matrices over the exact rationals.
//!
//! Sizes here are small (the ambient dimension of the translation part), so
//! plain Gaussian elimination with exact arithmetic is the right tool. The
//! operator norm induced by the 1-norm is the maximum column sum, an identity
//! the tests exercise against a sampling oracle.

use crate::rational::{one_norm, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix is singular")]
    Singular,
}

/// Square matrix over the rationals, row-major storage.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    n: usize,
    a: Vec<Rational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::NotSquare {
                    rows: n,
                    row: i,
                    len: row.len(),
                });
            }
        }
        Ok(Self {
            n,
            a: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut a = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                a.push(f(i, j));
            }
        }
        Self { n, a }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn scalar(n: usize, s: &Rational) -> Self {
        Self::from_fn(n, |i, j| if i == j { s.clone() } else { Rational::zero() })
    }

    /// Companion matrix of a monic polynomial with the given low coefficients
    /// `c_0..c_{d-1}` (so the polynomial is `x^d + c_{d-1} x^{d-1} + ... + c_0`).
    pub fn companion(low_coeffs: &[Rational]) -> Self {
        let d = low_coeffs.len();
        Self::from_fn(d, |i, j| {
            if j + 1 == d {
                -low_coeffs[i].clone()
            } else if i == j + 1 {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.a[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.a[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.a
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|x| x.is_integer())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            a: self.a.iter().zip(&other.a).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|x| x * s).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..n {
                let x = self.get(i, k);
                if !x.is_zero() {
                    acc += x * other.get(k, j);
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.n, v.len());
        (0..self.n)
            .map(|i| {
                let mut acc = Rational::zero();
                for k in 0..self.n {
                    let x = self.get(i, k);
                    if !x.is_zero() {
                        acc += x * &v[k];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn determinant(&self) -> Rational {
        let n = self.n;
        let mut m = self.a.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r * n + col].is_zero());
            let Some(p) = pivot else {
                return Rational::zero();
            };
            if p != col {
                for j in 0..n {
                    m.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let pv = m[col * n + col].clone();
            det *= &pv;
            for r in col + 1..n {
                let factor = &m[r * n + col] / &pv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = &factor * &m[col * n + j];
                    m[r * n + j] -= sub;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, MatrixError> {
        let n = self.n;
        let mut m = self.a.clone();
        let mut inv = Self::identity(n).a;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r * n + col].is_zero());
            let Some(p) = pivot else {
                return Err(MatrixError::Singular);
            };
            if p != col {
                for j in 0..n {
                    m.swap(p * n + j, col * n + j);
                    inv.swap(p * n + j, col * n + j);
                }
            }
            let pv = m[col * n + col].clone();
            for j in 0..n {
                m[col * n + j] /= &pv;
                inv[col * n + j] /= &pv;
            }
            for r in 0..n {
                if r == col || m[r * n + col].is_zero() {
                    continue;
                }
                let factor = m[r * n + col].clone();
                for j in 0..n {
                    let s1 = &factor * &m[col * n + j];
                    m[r * n + j] -= s1;
                    let s2 = &factor * &inv[col * n + j];
                    inv[r * n + j] -= s2;
                }
            }
        }
        Ok(Self { n, a: inv })
    }

    /// `self^e` for a signed exponent; negative exponents require invertibility.
    pub fn pow(&self, e: i64) -> Result<Self, MatrixError> {
        let mut base = if e >= 0 {
            self.clone()
        } else {
            self.inverse()?
        };
        let mut k = e.unsigned_abs();
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Operator norm induced by the vector 1-norm: the maximum column 1-norm.
    pub fn operator_norm(&self) -> Rational {
        let mut best = Rational::zero();
        for j in 0..self.n {
            let mut col = Rational::zero();
            for i in 0..self.n {
                col += self.get(i, j).abs();
            }
            if col > best {
                best = col;
            }
        }
        best
    }

    /// Least common multiple of the entry denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for x in &self.a {
            l = l.lcm(x.denom());
        }
        l
    }

    /// Least positive integer `m` with both `m*self` and `m*self^{-1}` integral.
    pub fn clearing_integer(&self) -> Result<BigInt, MatrixError> {
        let inv = self.inverse()?;
        Ok(self.denominator_lcm().lcm(&inv.denominator_lcm()))
    }

    /// Infinity norm of the entries as f64, for diagnostics only.
    pub fn max_abs_f64(&self) -> f64 {
        self.a
            .iter()
            .map(|x| {
                let n = x.numer().to_string().parse::<f64>().unwrap_or(f64::MAX);
                let d = x.denom().to_string().parse::<f64>().unwrap_or(1.0);
                (n / d).abs()
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", crate::rational::format_rational(self.get(i, j)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// 1-norm distance between two rational vectors.
pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_is_zero(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Sampling check used by the norm tests: `|Mv| <= |M| * |v|` for any `v`.
pub fn norm_bound_holds(m: &RatMatrix, v: &[Rational]) -> bool {
    one_norm(&m.mul_vec(v)) <= m.operator_norm() * one_norm(v)
}
