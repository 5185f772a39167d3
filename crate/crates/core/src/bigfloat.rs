//! Arbitrary-precision dyadic floats: `m * 2^e` with a mantissa cap.
//!
//! This is deliberately minimal: truncating rounding, explicit precision at
//! every operation. It only has to be deterministic and accurate to a known
//! number of bits; every result that matters downstream is re-verified in
//! exact rational arithmetic.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Dyadic float `m * 2^e`; zero is represented by `m = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bf {
    m: BigInt,
    e: i64,
}

impl Bf {
    pub fn zero() -> Self {
        Self {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        Self { m: x.clone(), e: 0 }
    }

    pub fn from_i64(x: i64) -> Self {
        Self {
            m: BigInt::from(x),
            e: 0,
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num = r.numer();
        let den = r.denom();
        let shift = prec as i64 + 2 + den.bits() as i64 - num.bits() as i64;
        let shift = shift.max(0);
        let scaled: BigInt = num << shift as usize;
        Self {
            m: scaled / den,
            e: -shift,
        }
        .round(prec)
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as usize)
        } else {
            Rational::new(self.m.clone(), BigInt::from(1) << (-self.e) as usize)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    fn bits(&self) -> u64 {
        self.m.magnitude().bits()
    }

    /// Truncate the mantissa to `prec` bits.
    pub fn round(mut self, prec: u32) -> Self {
        let b = self.bits();
        if b > prec as u64 {
            let shift = (b - prec as u64) as usize;
            self.m >>= shift;
            self.e += shift as i64;
        }
        if self.m.is_zero() {
            self.e = 0;
        }
        self
    }

    pub fn neg(&self) -> Self {
        Self {
            m: -&self.m,
            e: self.e,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            m: self.m.abs(),
            e: self.e,
        }
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return o.clone().round(prec);
        }
        if o.is_zero() {
            return self.clone().round(prec);
        }
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        let diff = hi.e - lo.e;
        // the low part is negligible beyond the precision window
        if diff > prec as i64 + lo.bits() as i64 + hi.bits() as i64 + 8 {
            return hi.clone().round(prec);
        }
        let m = (&hi.m << diff as usize) + &lo.m;
        Self { m, e: lo.e }.round(prec)
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        self.add(&o.neg(), prec)
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        Self {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
        .round(prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        assert!(!o.is_zero(), "division by zero");
        if self.is_zero() {
            return Self::zero();
        }
        let shift = prec as i64 + 2 + o.bits() as i64;
        let m = (&self.m << shift as usize) / &o.m;
        Self {
            m,
            e: self.e - o.e - shift,
        }
        .round(prec)
    }

    pub fn cmp_abs(&self, o: &Self) -> Ordering {
        self.abs().cmp_signed(&o.abs())
    }

    pub fn cmp_signed(&self, o: &Self) -> Ordering {
        use num_bigint::Sign::*;
        match (self.m.sign(), o.m.sign()) {
            (Minus, Plus | NoSign) => return Ordering::Less,
            (Plus | NoSign, Minus) => return Ordering::Greater,
            (NoSign, NoSign) => return Ordering::Equal,
            (NoSign, Plus) => return Ordering::Less,
            (Plus, NoSign) => return Ordering::Greater,
            _ => {}
        }
        // same sign: compare magnitudes by approximate log2, exactly if close
        let la = self.e + self.bits() as i64;
        let lb = o.e + o.bits() as i64;
        let positive = !self.m.is_negative();
        if la != lb {
            let mag = la.cmp(&lb);
            return if positive { mag } else { mag.reverse() };
        }
        let d = self.sub(o, u32::MAX >> 1);
        match d.m.sign() {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.bits();
        if b <= 52 {
            return self.m.to_f64().unwrap() * 2f64.powi(self.e.clamp(-1070, 1020) as i32);
        }
        let shift = (b - 52) as usize;
        let top = (&self.m >> shift).to_f64().unwrap();
        let ee = self.e + shift as i64;
        top * 2f64.powi(ee.clamp(-1070, 1020) as i32)
    }

    /// `2^-k` as a float value.
    pub fn pow2(k: i64) -> Self {
        Self {
            m: BigInt::from(1),
            e: k,
        }
    }
}

/// Complex dyadic float.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cf {
    pub re: Bf,
    pub im: Bf,
}

impl Cf {
    pub fn zero() -> Self {
        Self {
            re: Bf::zero(),
            im: Bf::zero(),
        }
    }

    pub fn real(re: Bf) -> Self {
        Self {
            re,
            im: Bf::zero(),
        }
    }

    pub fn new(re: Bf, im: Bf) -> Self {
        Self { re, im }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        Self {
            re: self.re.add(&o.re, prec),
            im: self.im.add(&o.im, prec),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        Self {
            re: self.re.sub(&o.re, prec),
            im: self.im.sub(&o.im, prec),
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let a = self.re.mul(&o.re, prec + 4);
        let b = self.im.mul(&o.im, prec + 4);
        let c = self.re.mul(&o.im, prec + 4);
        let d = self.im.mul(&o.re, prec + 4);
        Self {
            re: a.sub(&b, prec),
            im: c.add(&d, prec),
        }
    }

    /// `|z|^2` exactly at the working precision.
    pub fn norm2(&self, prec: u32) -> Bf {
        let a = self.re.mul(&self.re, prec + 4);
        let b = self.im.mul(&self.im, prec + 4);
        a.add(&b, prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        let n2 = o.norm2(prec + 8);
        assert!(!n2.is_zero(), "complex division by zero");
        let conj = Self {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let num = self.mul(&conj, prec + 8);
        Self {
            re: num.re.div(&n2, prec),
            im: num.im.div(&n2, prec),
        }
    }

    pub fn scale(&self, s: &Bf, prec: u32) -> Self {
        Self {
            re: self.re.mul(s, prec),
            im: self.im.mul(s, prec),
        }
    }
}

/// Dense float matrix, row-major.
#[derive(Debug, Clone)]
pub struct FMat {
    n: usize,
    a: Vec<Bf>,
}

impl FMat {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Bf) -> Self {
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
                Bf::from_i64(1)
            } else {
                Bf::zero()
            }
        })
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| Bf::zero())
    }

    pub fn from_rational(m: &crate::matrix::RatMatrix, prec: u32) -> Self {
        Self::from_fn(m.dim(), |i, j| Bf::from_rational(m.get(i, j), prec))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Bf {
        &self.a[i * self.n + j]
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        Self {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&o.a)
                .map(|(x, y)| x.add(y, prec))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        Self {
            n: self.n,
            a: self
                .a
                .iter()
                .zip(&o.a)
                .map(|(x, y)| x.sub(y, prec))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Bf, prec: u32) -> Self {
        Self {
            n: self.n,
            a: self.a.iter().map(|x| x.mul(s, prec)).collect(),
        }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| {
            let mut acc = Bf::zero();
            for k in 0..n {
                acc = acc.add(&self.get(i, k).mul(o.get(k, j), prec + 8), prec + 8);
            }
            acc.round(prec)
        })
    }

    pub fn mul_vec(&self, v: &[Bf], prec: u32) -> Vec<Bf> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = Bf::zero();
                for k in 0..n {
                    acc = acc.add(&self.get(i, k).mul(&v[k], prec + 8), prec + 8);
                }
                acc.round(prec)
            })
            .collect()
    }

    /// Max column sum of absolute values (1-norm induced operator norm).
    pub fn op_norm(&self, prec: u32) -> Bf {
        let mut best = Bf::zero();
        for j in 0..self.n {
            let mut col = Bf::zero();
            for i in 0..self.n {
                col = col.add(&self.get(i, j).abs(), prec);
            }
            if col.cmp_signed(&best) == Ordering::Greater {
                best = col;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn conversion_round_trip() {
        let r = rat(355, 113);
        let f = Bf::from_rational(&r, 128);
        let back = f.to_rational();
        let err = (back - r).abs();
        assert!(err < rat(1, 1i64 << 62) * rat(1, 1i64 << 60));
    }

    #[test]
    fn arithmetic_accuracy() {
        let prec = 128;
        let a = Bf::from_rational(&rat(1, 3), prec);
        let b = Bf::from_rational(&rat(1, 7), prec);
        let s = a.add(&b, prec).to_rational();
        let expect = rat(10, 21);
        assert!((s - expect).abs() < rat(1, 1i64 << 62) * rat(1, 1i64 << 60));
        let q = a.div(&b, prec).to_rational();
        assert!((q - rat(7, 3)).abs() < rat(1, 1i64 << 62) * rat(1, 1i64 << 60));
    }

    #[test]
    fn compare_and_sign() {
        let prec = 64;
        let a = Bf::from_rational(&rat(5, 2), prec);
        let b = Bf::from_rational(&rat(7, 3), prec);
        assert_eq!(a.cmp_signed(&b), Ordering::Greater);
        assert_eq!(b.cmp_signed(&a), Ordering::Less);
        assert_eq!(a.neg().cmp_signed(&b), Ordering::Less);
        assert_eq!(Bf::zero().cmp_signed(&Bf::zero()), Ordering::Equal);
        assert!((a.to_f64() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn complex_mul_div() {
        let prec = 96;
        let z = Cf::new(Bf::from_i64(3), Bf::from_i64(4));
        let w = Cf::new(Bf::from_i64(1), Bf::from_i64(-2));
        let p = z.mul(&w, prec);
        // (3+4i)(1-2i) = 11 - 2i
        assert!((p.re.to_f64() - 11.0).abs() < 1e-20);
        assert!((p.im.to_f64() + 2.0).abs() < 1e-20);
        let q = p.div(&w, prec);
        assert!((q.re.to_f64() - 3.0).abs() < 1e-20);
        assert!((q.im.to_f64() - 4.0).abs() < 1e-20);
        assert!((z.norm2(prec).to_f64() - 25.0).abs() < 1e-20);
    }

    #[test]
    fn matrix_ops() {
        let prec = 80;
        let m = crate::matrix::RatMatrix::from_rows(vec![
            vec![rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(2, 1)],
        ])
        .unwrap();
        let f = FMat::from_rational(&m, prec);
        let sq = f.mul(&f, prec);
        assert!((sq.get(0, 0).to_f64() - 0.25).abs() < 1e-18);
        assert!((sq.get(1, 1).to_f64() - 4.0).abs() < 1e-18);
        assert!((f.op_norm(prec).to_f64() - 2.0).abs() < 1e-18);
        let v = f.mul_vec(&[Bf::from_i64(4), Bf::from_i64(1)], prec);
        assert!((v[0].to_f64() - 2.0).abs() < 1e-18);
    }
}
