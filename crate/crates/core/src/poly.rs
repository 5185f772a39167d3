//! Univariate polynomials over the rationals and over the integers.
//!
//! This carries the exact real-root machinery the spectral module is built
//! on: signed remainder sequences, Sturm counts on open intervals, and the
//! Cauchy index used for half-plane root counting. Degrees here are small,
//! so plain exact arithmetic is used throughout.

use crate::rational::{rat_int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

macro_rules! fmt_poly_body {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.is_zero() {
                return write!(f, "0");
            }
            let mut first = true;
            for (i, x) in self.c.iter().enumerate().rev() {
                if x.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " {} ", if x.is_negative() { "-" } else { "+" })?;
                } else if x.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
                let a = x.abs();
                match i {
                    0 => write!(f, "{a}")?,
                    1 => {
                        if a.is_one() {
                            write!(f, "x")?
                        } else {
                            write!(f, "{a}x")?
                        }
                    }
                    _ => {
                        if a.is_one() {
                            write!(f, "x^{i}")?
                        } else {
                            write!(f, "{a}x^{i}")?
                        }
                    }
                }
            }
            Ok(())
        }
    };
}

/// Polynomial over the rationals, coefficients in ascending degree, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(x: Rational) -> Self {
        Self::new(vec![x])
    }

    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_int_coeffs(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.c.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.c.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rational::zero(); self.c.len() + other.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Self::new(c)
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dd = d.degree().unwrap();
        let lead = d.leading();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        while r.len() > dd {
            let k = r.len() - 1;
            let coef = &r[k] / &lead;
            if !coef.is_zero() {
                q[k - dd] = coef.clone();
                for i in 0..=dd {
                    let s = &coef * &d.c[i];
                    r[k - dd + i] -= s;
                }
            }
            r.pop();
        }
        (Self::new(q), Self::new(r))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn derivative(&self) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, x)| x * rat_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        self.scale(&l.recip())
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self / gcd(self, self')`, the radical of the polynomial.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        if g.is_constant() {
            return self.monic();
        }
        self.exact_div(&g).monic()
    }

    /// Yun decomposition: returns `(g_i, i)` with `self ~ prod g_i^i`,
    /// each `g_i` squarefree, pairwise coprime, monic.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        assert!(!self.is_zero());
        let f = self.monic();
        if f.is_constant() {
            return vec![];
        }
        let df = f.derivative();
        let g0 = f.gcd(&df);
        if g0.is_constant() {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let mut w = f.exact_div(&g0);
        let mut y = df.exact_div(&g0);
        let mut i = 1;
        while !w.is_constant() {
            let z = y.sub(&w.derivative());
            if z.is_zero() {
                out.push((w.monic(), i));
                break;
            }
            let gi = w.gcd(&z);
            if !gi.is_constant() {
                out.push((gi.monic(), i));
            }
            w = w.exact_div(&gi);
            y = z.exact_div(&gi);
            i += 1;
        }
        out
    }

    fn sign_at(&self, x: &Rational) -> i8 {
        let v = self.eval(x);
        match v.cmp(&Rational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    fn sign_at_plus_inf(&self) -> i8 {
        if self.is_zero() {
            0
        } else if self.leading().is_positive() {
            1
        } else {
            -1
        }
    }

    fn sign_at_minus_inf(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let d = self.degree().unwrap();
        let s = self.sign_at_plus_inf();
        if d % 2 == 0 {
            s
        } else {
            -s
        }
    }

    /// Signed remainder sequence starting from `(self, other)`.
    fn signed_remainder_chain(&self, other: &Self) -> Vec<Self> {
        let mut chain = vec![self.clone(), other.clone()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[k - 2].divrem(&chain[k - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        chain
    }

    /// Number of distinct real roots in the open interval `(a, b)`;
    /// requires `self(a) != 0` and `self(b) != 0`.
    pub fn sturm_count(&self, a: &Rational, b: &Rational) -> usize {
        assert!(a < b);
        assert!(
            self.sign_at(a) != 0 && self.sign_at(b) != 0,
            "interval endpoint is a root"
        );
        let chain = self.signed_remainder_chain(&self.derivative());
        let va = variations(chain.iter().map(|p| p.sign_at(a)));
        let vb = variations(chain.iter().map(|p| p.sign_at(b)));
        va - vb
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_real_roots(&self) -> usize {
        if self.is_constant() {
            return 0;
        }
        let chain = self.signed_remainder_chain(&self.derivative());
        let va = variations(chain.iter().map(|p| p.sign_at_minus_inf()));
        let vb = variations(chain.iter().map(|p| p.sign_at_plus_inf()));
        va - vb
    }

    /// Cauchy index of `other/self` over the whole real line, computed from
    /// the signed remainder sequence: `V(-inf) - V(+inf)`.
    pub fn cauchy_index(&self, other: &Self) -> i64 {
        if self.is_zero() || other.is_zero() {
            return 0;
        }
        let chain = self.signed_remainder_chain(other);
        let va = variations(chain.iter().map(|p| p.sign_at_minus_inf())) as i64;
        let vb = variations(chain.iter().map(|p| p.sign_at_plus_inf())) as i64;
        va - vb
    }

    /// Clear denominators and divide by the content; leading coefficient > 0.
    pub fn to_primitive_int(&self) -> IPoly {
        if self.is_zero() {
            return IPoly::zero();
        }
        let mut l = BigInt::one();
        for x in &self.c {
            l = l.lcm(x.denom());
        }
        let ints: Vec<BigInt> = self.c.iter().map(|x| x.numer() * &l / x.denom()).collect();
        IPoly::new(ints).primitive()
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl fmt::Display for QPoly {
    fmt_poly_body!();
}

/// Polynomial over the integers, ascending coefficients, trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IPoly {
    c: Vec<BigInt>,
}

impl IPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self { c: vec![] }
    }

    pub fn from_coeffs(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().is_some_and(|x| x.is_one())
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
        }
        g
    }

    /// Content removed, leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self {
            c: self.c.iter().map(|x| x / &g).collect(),
        }
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .map(|x| Rational::from_integer(x.clone()))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.c.iter().map(|x| x * s).collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        self.to_qpoly().eval(x)
    }

    /// `x^d * p(1/x)`: the coefficient sequence reversed.
    pub fn reversal(&self) -> Self {
        let mut c = self.c.clone();
        c.reverse();
        Self::new(c)
    }

    /// Palindromic test: `p(x) = x^d p(1/x)` exactly.
    pub fn is_palindromic(&self) -> bool {
        !self.is_zero() && self.c == self.reversal().c
    }

    /// Strip any factor `x^k`, returning the cofactor and `k`.
    pub fn strip_zero_roots(&self) -> (Self, usize) {
        if self.is_zero() {
            return (self.clone(), 0);
        }
        let k = self.c.iter().take_while(|x| x.is_zero()).count();
        if k == 0 {
            (self.clone(), 0)
        } else {
            (Self::new(self.c[k..].to_vec()), k)
        }
    }

    /// For a palindromic polynomial of even degree `2k`, returns `H` of
    /// degree `k` with `p(x)/x^k = H((x + 1/x)/2)`. Real roots of `H` in
    /// `(-1, 1)` correspond one-to-one with conjugate pairs of roots of `p`
    /// on the unit circle.
    pub fn half_angle_transform(&self) -> Self {
        assert!(self.is_palindromic());
        let d = self.degree().unwrap();
        assert!(d % 2 == 0, "palindromic transform needs even degree");
        let k = d / 2;
        // E_j(y) = 2*T_j(y) satisfies x^j + x^-j = E_j((x + 1/x)/2)
        let two_y = Self::from_coeffs(&[0, 2]);
        let mut e_prev = Self::from_coeffs(&[2]); // E_0
        let mut e_cur = two_y.clone(); // E_1
        let mut h = Self::new(vec![self.coeff(k)]);
        for j in 1..=k {
            if j > 1 {
                let next = two_y.mul(&e_cur).sub(&e_prev);
                e_prev = std::mem::replace(&mut e_cur, next);
            }
            h = h.add(&e_cur.scale(&self.coeff(k + j)));
        }
        h
    }

    /// `(z-1)^d * p((z+1)/(z-1))`, a root bijection sending `|x| > 1` to
    /// `Re z > 0`; requires `p(1) != 0` so the degree is preserved.
    pub fn cayley_transform(&self) -> Self {
        let d = self.degree().expect("nonzero polynomial");
        let zp1 = Self::from_coeffs(&[1, 1]);
        let zm1 = Self::from_coeffs(&[-1, 1]);
        let mut up = vec![Self::from_coeffs(&[1])];
        let mut down = vec![Self::from_coeffs(&[1])];
        for i in 1..=d {
            let u = up[i - 1].mul(&zp1);
            up.push(u);
            let w = down[i - 1].mul(&zm1);
            down.push(w);
        }
        let mut acc = Self::zero();
        for (j, cj) in self.c.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            acc = acc.add(&up[j].mul(&down[d - j]).scale(cj));
        }
        acc
    }

    /// The n-th cyclotomic polynomial, by recursive exact division.
    pub fn cyclotomic(n: usize) -> Self {
        assert!(n > 0);
        if n == 1 {
            return Self::from_coeffs(&[-1, 1]);
        }
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] = BigInt::one();
        let mut result = Self::new(coeffs).to_qpoly();
        for d in 1..n {
            if n % d == 0 {
                result = result.exact_div(&Self::cyclotomic(d).to_qpoly());
            }
        }
        result.to_primitive_int()
    }

    /// Rational roots together with the cofactor after dividing them out.
    /// Gives up (returns `None`) when the constant/leading coefficients are
    /// too large to factor quickly.
    pub fn rational_roots(&self) -> Option<(Vec<Rational>, QPoly)> {
        if self.is_zero() {
            return None;
        }
        let (p, zeros) = self.strip_zero_roots();
        let mut q = p.to_qpoly().monic();
        let mut roots = vec![Rational::zero(); zeros];
        let c0 = p.coeff(0).abs();
        let cd = p.leading().abs();
        let limit = BigInt::from(1_000_000_000_000u64);
        if c0 > limit || cd > limit {
            return None;
        }
        let nums = small_divisors(c0.to_u64()?)?;
        let dens = small_divisors(cd.to_u64()?)?;
        let mut candidates = Vec::new();
        for &nn in &nums {
            for &dd in &dens {
                let r = Rational::new(BigInt::from(nn), BigInt::from(dd));
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for cand in candidates {
            while !q.is_constant() && q.eval(&cand).is_zero() {
                let lin = QPoly::new(vec![-cand.clone(), Rational::one()]);
                q = q.exact_div(&lin);
                roots.push(cand.clone());
            }
        }
        Some((roots, q))
    }
}

fn small_divisors(n: u64) -> Option<Vec<u64>> {
    if n == 0 {
        return Some(vec![1]);
    }
    let mut divs = Vec::new();
    let mut i = 1u64;
    while i.checked_mul(i).is_some_and(|s| s <= n) {
        if n % i == 0 {
            divs.push(i);
            divs.push(n / i);
        }
        i += 1;
        if divs.len() > 4096 {
            return None;
        }
    }
    divs.sort_unstable();
    divs.dedup();
    Some(divs)
}

impl fmt::Display for IPoly {
    fmt_poly_body!();
}

/// Irreducibility witness: `Some(true)` certifies irreducibility over the
/// rationals, `Some(false)` reports a definite factor, `None` is
/// inconclusive. Uses rational-root search, Eisenstein at small primes and a
/// GF(2) distinct-degree sieve.
pub fn irreducibility_witness(p: &IPoly) -> Option<bool> {
    let d = p.degree()?;
    if d == 0 {
        return Some(false);
    }
    if d == 1 {
        return Some(true);
    }
    if p.coeff(0).is_zero() {
        return Some(false); // x divides
    }
    if let Some((roots, _)) = p.rational_roots() {
        if !roots.is_empty() {
            return Some(false);
        }
        if d <= 3 {
            return Some(true); // degree 2 or 3 without rational roots
        }
    }
    for prime in [2i64, 3, 5, 7, 11, 13] {
        let pr = BigInt::from(prime);
        let lead_ok = !(p.leading() % &pr).is_zero();
        let lower_ok = (0..d).all(|i| (p.coeff(i) % &pr).is_zero());
        let c0_ok = !(p.coeff(0) % (&pr * &pr)).is_zero();
        if lead_ok && lower_ok && c0_ok {
            return Some(true);
        }
    }
    gf2_irreducible(p)
}

/// GF(2) distinct-degree sieve on bitmask polynomials.
fn gf2_irreducible(p: &IPoly) -> Option<bool> {
    let d = p.degree()?;
    if d >= 63 {
        return None;
    }
    let mut mask: u64 = 0;
    for (i, c) in p.coeffs().iter().enumerate() {
        if c.is_odd() {
            mask |= 1 << i;
        }
    }
    if mask >> d != 1 {
        return None; // degree dropped mod 2
    }
    fn deg(m: u64) -> usize {
        63 - m.leading_zeros() as usize
    }
    fn rem(mut a: u64, b: u64) -> u64 {
        let db = deg(b);
        while a != 0 && deg(a) >= db {
            a ^= b << (deg(a) - db);
        }
        a
    }
    fn gcd2(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let r = rem(a, b);
            a = b;
            b = r;
        }
        a
    }
    fn mulmod(a: u64, b: u64, m: u64) -> u64 {
        let mut acc: u128 = 0;
        let mut x = a as u128;
        let mut bb = b;
        while bb != 0 {
            if bb & 1 == 1 {
                acc ^= x;
            }
            x <<= 1;
            bb >>= 1;
        }
        let dm = deg(m);
        while acc != 0 {
            let da = 127 - acc.leading_zeros() as usize;
            if da < dm {
                break;
            }
            acc ^= (m as u128) << (da - dm);
        }
        acc as u64
    }
    // squarefree mod 2?
    let mut deriv: u64 = 0;
    for i in (1..=d).step_by(2) {
        if (mask >> i) & 1 == 1 {
            deriv |= 1 << (i - 1);
        }
    }
    if deriv == 0 || gcd2(mask, deriv) != 1 {
        return None;
    }
    // x^(2^i) mod p by iterated squaring of the Frobenius image
    let mut xq = 2u64; // the polynomial x
    for _ in 1..=d / 2 {
        xq = mulmod(xq, xq, mask);
        let probe = xq ^ 2;
        if probe == 0 {
            return Some(false); // all irreducible factors have low degree
        }
        if gcd2(mask, probe) != 1 {
            return Some(false);
        }
    }
    Some(true)
}
