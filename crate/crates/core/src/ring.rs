//! Arithmetic in monogenic number rings `Z[theta]` with `theta` a root of a
//! monic irreducible integer polynomial.
//!
//! Elements are coordinate vectors in the power basis `1, theta, ...,
//! theta^(n-1)`. Multiplication goes through the structure matrices `D_l`
//! with `(uv)_l = pi(u)^T D_l pi(v)`, which also yield the multiplicative
//! constant `C1 = sum |D_l^T|` bounding `|uv| <= C1 |u| |v|` in the 1-norm.

use crate::matrix::RatMatrix;
use crate::poly::{irreducibility_witness, IPoly, QPoly};
use crate::rational::{one_norm, round_ties_to_zero, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Integer coordinates in the power basis.
pub type RingElement = Vec<BigInt>;
/// Rational coordinates in the power basis (an element of the field).
pub type FieldElement = Vec<Rational>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("defining polynomial must be monic of degree >= 1")]
    NotMonic,
    #[error("defining polynomial is reducible")]
    Reducible,
    #[error("element has the wrong number of coordinates")]
    DegreeMismatch,
    #[error("zero is not invertible")]
    ZeroInverse,
}

/// A monogenic ring fixed by its defining polynomial, with the structure
/// tensor and the multiplicative norm constant precomputed.
#[derive(Debug, Clone)]
pub struct RingSpec {
    f: IPoly,
    n: usize,
    /// `theta^i mod f` for `i = 0 .. 2n-2`, as coordinate vectors.
    powers: Vec<Vec<BigInt>>,
    d_mats: Vec<RatMatrix>,
    c1: Rational,
    /// `None` when irreducibility could not be certified by quick means.
    pub irreducibility_certified: Option<bool>,
}

impl RingSpec {
    pub fn new(f: IPoly) -> Result<Self, RingError> {
        let Some(n) = f.degree() else {
            return Err(RingError::NotMonic);
        };
        if n == 0 || !f.is_monic() {
            return Err(RingError::NotMonic);
        }
        let witness = irreducibility_witness(&f);
        if witness == Some(false) {
            return Err(RingError::Reducible);
        }
        // theta^i reduced mod f; monic f keeps the coordinates integral
        let mut powers: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n - 1);
        let mut cur = vec![BigInt::zero(); n];
        cur[0] = BigInt::one();
        powers.push(cur.clone());
        for _ in 1..(2 * n - 1).max(1) {
            // multiply by theta: shift up, reduce the overflow by f
            let overflow = cur[n - 1].clone();
            let mut next = vec![BigInt::zero(); n];
            for i in (1..n).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !overflow.is_zero() {
                for i in 0..n {
                    next[i] -= &overflow * f.coeff(i);
                }
            }
            powers.push(next.clone());
            cur = next;
        }
        let d_mats: Vec<RatMatrix> = (0..n)
            .map(|l| {
                RatMatrix::from_fn(n, |i, j| {
                    Rational::from_integer(powers[i + j][l].clone())
                })
            })
            .collect();
        let mut c1 = Rational::zero();
        for d in &d_mats {
            c1 += d.transpose().operator_norm();
        }
        Ok(Self {
            f,
            n,
            powers,
            d_mats,
            c1,
            irreducibility_certified: witness,
        })
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn defining_polynomial(&self) -> &IPoly {
        &self.f
    }

    /// `sum_l |D_l^T|`, the exact multiplicative constant for the 1-norm.
    pub fn c1_constant(&self) -> &Rational {
        &self.c1
    }

    pub fn zero(&self) -> FieldElement {
        vec![Rational::zero(); self.n]
    }

    pub fn one(&self) -> FieldElement {
        let mut v = self.zero();
        v[0] = Rational::one();
        v
    }

    pub fn from_ints(&self, coords: &[i64]) -> FieldElement {
        assert_eq!(coords.len(), self.n);
        coords
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect()
    }

    pub fn ring_to_field(&self, a: &RingElement) -> FieldElement {
        a.iter().map(|c| Rational::from_integer(c.clone())).collect()
    }

    /// Integer coordinates when the element lies in the ring.
    pub fn field_to_ring(&self, a: &FieldElement) -> Option<RingElement> {
        a.iter()
            .map(|c| {
                if c.is_integer() {
                    Some(c.to_integer())
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &FieldElement, s: &Rational) -> FieldElement {
        a.iter().map(|x| x * s).collect()
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// Product through the structure tensor: `(uv)_l = pi(u)^T D_l pi(v)`.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        assert_eq!(a.len(), self.n);
        assert_eq!(b.len(), self.n);
        (0..self.n)
            .map(|l| {
                let d = &self.d_mats[l];
                let mut acc = Rational::zero();
                for i in 0..self.n {
                    if a[i].is_zero() {
                        continue;
                    }
                    for j in 0..self.n {
                        if !b[j].is_zero() {
                            acc += &a[i] * d.get(i, j) * &b[j];
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Product by polynomial multiplication mod `f`; used as an independent
    /// route to cross-check the tensor product.
    pub fn mul_polynomial_route(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let mut conv = vec![Rational::zero(); 2 * self.n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out = vec![Rational::zero(); self.n];
        for (k, c) in conv.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for l in 0..self.n {
                out[l] += &c * &Rational::from_integer(self.powers[k][l].clone());
            }
        }
        out
    }

    /// `a^k` for `k >= 0`.
    pub fn pow(&self, a: &FieldElement, k: u32) -> FieldElement {
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by `a` in the power basis.
    pub fn mult_matrix(&self, a: &FieldElement) -> RatMatrix {
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = self.zero();
            e[j] = Rational::one();
            cols.push(self.mul(a, &e));
        }
        RatMatrix::from_fn(n, |i, j| cols[j][i].clone())
    }

    /// Field norm as the determinant of the multiplication matrix; equal to
    /// the resultant of the defining polynomial with the element.
    pub fn norm(&self, a: &FieldElement) -> Rational {
        self.mult_matrix(a).determinant()
    }

    /// Inverse in the field by the extended Euclidean algorithm against the
    /// defining polynomial.
    pub fn inverse(&self, a: &FieldElement) -> Result<FieldElement, RingError> {
        if self.is_zero(a) {
            return Err(RingError::ZeroInverse);
        }
        if a.len() != self.n {
            return Err(RingError::DegreeMismatch);
        }
        let ap = QPoly::new(a.to_vec());
        let fq = self.f.to_qpoly();
        let (g, u, _) = extended_gcd(&ap, &fq);
        debug_assert!(g.is_constant() && !g.is_zero());
        let inv = u.scale(&g.leading().recip());
        let mut out = self.zero();
        for (i, c) in inv.coeffs().iter().enumerate() {
            debug_assert!(i < self.n);
            out[i] = c.clone();
        }
        // reduce degree overflow defensively (cannot happen for deg a < n)
        Ok(out)
    }

    /// Nearest ring element coordinate-wise, ties toward zero; the error has
    /// 1-norm at most n/2.
    pub fn nearest_lattice(&self, z: &FieldElement) -> RingElement {
        z.iter().map(round_ties_to_zero).collect()
    }

    /// Bezout witness `(u, v)` with `u*x + v*y = 1`, constructed from an
    /// integer Bezout identity on the norms when `gcd(N(x), N(y)) = 1`.
    /// This test is sufficient but not necessary: `None` does not certify
    /// that the ideals fail to be comaximal.
    pub fn coprimality_witness(
        &self,
        x: &RingElement,
        y: &RingElement,
    ) -> Option<(RingElement, RingElement)> {
        let xf = self.ring_to_field(x);
        let yf = self.ring_to_field(y);
        let nx = self.norm(&xf);
        let ny = self.norm(&yf);
        if nx.is_zero() || ny.is_zero() {
            return None;
        }
        let nxi = nx.to_integer();
        let nyi = ny.to_integer();
        let e = nxi.extended_gcd(&nyi);
        if !e.gcd.abs().is_one() {
            return None;
        }
        // cofactor N(x)/x lies in the ring: adjugate column of mult matrix
        let cof = |a: &FieldElement, na: &Rational| -> FieldElement {
            let inv = self.inverse(a).expect("nonzero");
            self.scale(&inv, na)
        };
        let sign = if e.gcd.is_negative() {
            -Rational::one()
        } else {
            Rational::one()
        };
        let xt = cof(&xf, &nx);
        let yt = cof(&yf, &ny);
        let u = self.scale(&xt, &(Rational::from_integer(e.x) * &sign));
        let v = self.scale(&yt, &(Rational::from_integer(e.y) * &sign));
        // exact verification before returning
        let lhs = self.add(&self.mul(&u, &xf), &self.mul(&v, &yf));
        if lhs != self.one() {
            return None;
        }
        let ui = self.field_to_ring(&u)?;
        let vi = self.field_to_ring(&v)?;
        Some((ui, vi))
    }

    /// Exact check of a supplied witness `u*x + v*y = 1`.
    pub fn verify_witness(
        &self,
        x: &RingElement,
        y: &RingElement,
        u: &RingElement,
        v: &RingElement,
    ) -> bool {
        let lhs = self.add(
            &self.mul(&self.ring_to_field(u), &self.ring_to_field(x)),
            &self.mul(&self.ring_to_field(v), &self.ring_to_field(y)),
        );
        lhs == self.one()
    }

    /// 1-norm of a field element.
    pub fn norm_1(&self, a: &FieldElement) -> Rational {
        one_norm(a)
    }
}

/// Extended gcd over `Q[x]`: returns `(g, u, v)` with `u*a + v*b = g`.
pub fn extended_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = QPoly::one();
    let mut s1 = QPoly::zero();
    let mut t0 = QPoly::zero();
    let mut t1 = QPoly::one();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        let t = t0.sub(&q.mul(&t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zsqrt2() -> RingSpec {
        RingSpec::new(IPoly::from_coeffs(&[-2, 0, 1])).unwrap()
    }

    fn gauss() -> RingSpec {
        RingSpec::new(IPoly::from_coeffs(&[1, 0, 1])).unwrap()
    }

    fn degree_one() -> RingSpec {
        RingSpec::new(IPoly::from_coeffs(&[0, 1])).unwrap()
    }

    fn random_field_element(rng: &mut ChaCha8Rng, spec: &RingSpec, span: i64) -> FieldElement {
        (0..spec.degree())
            .map(|_| rat(rng.gen_range(-span..=span), rng.gen_range(1..=4)))
            .collect()
    }

    #[test]
    fn multiplication_examples() {
        let r = zsqrt2();
        // (1 + sqrt2)^2 = 3 + 2 sqrt2
        let e = r.from_ints(&[1, 1]);
        assert_eq!(r.mul(&e, &e), r.from_ints(&[3, 2]));
        // identity neutral
        let one = r.one();
        assert_eq!(r.mul(&one, &e), e);
        // i^2 = -1
        let g = gauss();
        let i = g.from_ints(&[0, 1]);
        assert_eq!(r.degree(), 2);
        assert_eq!(g.mul(&i, &i), g.from_ints(&[-1, 0]));
    }

    #[test]
    fn tensor_and_polynomial_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in [zsqrt2(), gauss(), RingSpec::new(IPoly::from_coeffs(&[2, 2, 2, 1])).unwrap()] {
            for _ in 0..60 {
                let a = random_field_element(&mut rng, &spec, 9);
                let b = random_field_element(&mut rng, &spec, 9);
                assert_eq!(spec.mul(&a, &b), spec.mul_polynomial_route(&a, &b));
                // commutative and associative
                assert_eq!(spec.mul(&a, &b), spec.mul(&b, &a));
                let c = random_field_element(&mut rng, &spec, 5);
                assert_eq!(
                    spec.mul(&spec.mul(&a, &b), &c),
                    spec.mul(&a, &spec.mul(&b, &c))
                );
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let r = zsqrt2();
        assert_eq!(r.inverse(&r.one()).unwrap(), r.one());
        // (3 + sqrt2)^{-1} = (3 - sqrt2)/7
        let x = r.from_ints(&[3, 1]);
        assert_eq!(r.inverse(&x).unwrap(), vec![rat(3, 7), rat(-1, 7)]);
        let g = gauss();
        let i = g.from_ints(&[0, 1]);
        assert_eq!(g.inverse(&i).unwrap(), g.from_ints(&[0, -1]));
        assert_eq!(r.inverse(&r.zero()).unwrap_err(), RingError::ZeroInverse);
    }

    #[test]
    fn inverse_round_trip_fuzz() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let spec = zsqrt2();
        for _ in 0..100 {
            let a = random_field_element(&mut rng, &spec, 20);
            if spec.is_zero(&a) {
                continue;
            }
            let inv = spec.inverse(&a).unwrap();
            assert_eq!(spec.mul(&a, &inv), spec.one());
        }
    }

    #[test]
    fn norm_examples_and_multiplicativity() {
        let r = zsqrt2();
        assert_eq!(r.norm(&r.from_ints(&[3, 1])), rat_int(7));
        assert_eq!(r.norm(&r.one()), rat_int(1));
        assert_eq!(r.norm(&r.from_ints(&[2, 0])), rat_int(4)); // 2^n
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for spec in [zsqrt2(), gauss()] {
            for _ in 0..60 {
                let a = random_field_element(&mut rng, &spec, 9);
                let b = random_field_element(&mut rng, &spec, 9);
                assert_eq!(
                    spec.norm(&spec.mul(&a, &b)),
                    spec.norm(&a) * spec.norm(&b)
                );
            }
        }
    }

    #[test]
    fn norm_matches_sylvester_resultant() {
        // independent oracle: resultant via the Sylvester determinant
        fn resultant(f: &IPoly, a: &FieldElement) -> Rational {
            let m = f.degree().unwrap();
            let ap = QPoly::new(a.to_vec());
            if ap.is_zero() {
                return Rational::zero();
            }
            let k = ap.degree().unwrap();
            if k == 0 {
                // Res(f, c) = c^deg f
                return crate::rational::rat_pow(&ap.coeff(0), m as i64);
            }
            let size = m + k;
            let mat = RatMatrix::from_fn(size, |i, j| {
                if i < k {
                    // row of f shifted by i
                    let idx = m as i64 - (j as i64 - i as i64);
                    if idx >= 0 && idx <= m as i64 {
                        Rational::from_integer(f.coeff(idx as usize))
                    } else {
                        Rational::zero()
                    }
                } else {
                    let r = i - k;
                    let idx = k as i64 - (j as i64 - r as i64);
                    if idx >= 0 && idx <= k as i64 {
                        ap.coeff(idx as usize)
                    } else {
                        Rational::zero()
                    }
                }
            });
            mat.determinant()
        }
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for spec in [zsqrt2(), gauss()] {
            for _ in 0..40 {
                let a = random_field_element(&mut rng, &spec, 9);
                assert_eq!(
                    spec.norm(&a),
                    resultant(spec.defining_polynomial(), &a),
                    "element {a:?}"
                );
            }
        }
    }

    #[test]
    fn c1_constants_pinned() {
        assert_eq!(zsqrt2().c1_constant(), &rat_int(3));
        assert_eq!(gauss().c1_constant(), &rat_int(2));
        assert_eq!(degree_one().c1_constant(), &rat_int(1));
    }

    #[test]
    fn c1_bounds_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for spec in [zsqrt2(), gauss()] {
            let c1 = spec.c1_constant().clone();
            for _ in 0..1000 {
                let u = random_field_element(&mut rng, &spec, 30);
                let v = random_field_element(&mut rng, &spec, 30);
                let lhs = spec.norm_1(&spec.mul(&u, &v));
                assert!(lhs <= &c1 * spec.norm_1(&u) * spec.norm_1(&v));
            }
        }
    }

    #[test]
    fn nearest_lattice_decisions() {
        let r = zsqrt2();
        assert_eq!(
            r.nearest_lattice(&vec![rat(1, 3), rat(5, 2)]),
            vec![BigInt::from(0), BigInt::from(2)]
        );
        assert_eq!(
            r.nearest_lattice(&r.zero()),
            vec![BigInt::zero(), BigInt::zero()]
        );
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for _ in 0..300 {
            let z = random_field_element(&mut rng, &r, 40);
            let w = r.nearest_lattice(&z);
            let diff = r.sub(&z, &r.ring_to_field(&w));
            assert!(r.norm_1(&diff) <= rat(r.degree() as i64, 2));
        }
    }

    #[test]
    fn witness_construction() {
        let r = zsqrt2();
        // both norms 7: the norm-gcd test cannot see comaximality
        let x = vec![BigInt::from(3), BigInt::from(1)];
        let y = vec![BigInt::from(3), BigInt::from(-1)];
        assert!(r.coprimality_witness(&x, &y).is_none());
        // but a manually supplied witness verifies: (3+s)(3+s) + (3-s)(-6-4s) = 1
        let u = vec![BigInt::from(3), BigInt::from(1)];
        let v = vec![BigInt::from(-6), BigInt::from(-4)];
        assert!(r.verify_witness(&x, &y, &u, &v));

        // unit case
        let unit = vec![BigInt::from(1), BigInt::from(1)]; // N = -1
        let (u2, v2) = r.coprimality_witness(&unit, &y).unwrap();
        assert!(r.verify_witness(&unit, &y, &u2, &v2));

        // Gaussian integers: N(1+2i) = 5, N(1+i) = 2
        let g = gauss();
        let gx = vec![BigInt::from(1), BigInt::from(2)];
        let gy = vec![BigInt::from(1), BigInt::from(1)];
        let (gu, gv) = g.coprimality_witness(&gx, &gy).unwrap();
        assert!(g.verify_witness(&gx, &gy, &gu, &gv));
    }

    #[test]
    fn degree_one_ring_is_plain_integers() {
        let r = degree_one();
        assert_eq!(r.degree(), 1);
        let a = vec![rat_int(6)];
        let b = vec![rat_int(7)];
        assert_eq!(r.mul(&a, &b), vec![rat_int(42)]);
        assert_eq!(r.norm(&a), rat_int(6));
    }

    #[test]
    fn reducible_polynomials_rejected() {
        assert_eq!(
            RingSpec::new(IPoly::from_coeffs(&[2, -3, 1])).unwrap_err(),
            RingError::Reducible
        );
        assert_eq!(
            RingSpec::new(IPoly::from_coeffs(&[-2, 0, 2])).unwrap_err(),
            RingError::NotMonic
        );
    }
}
