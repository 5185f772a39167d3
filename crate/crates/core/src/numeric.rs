//! Numeric eigenstructure: simultaneous root iteration and the splitting
//! projectors onto expanding and contracting subspaces.
//!
//! Floating point appears here and nowhere else in the spectral decisions:
//! the projectors are advisory, and everything computed from them is
//! re-verified downstream in exact arithmetic. When every eigenvalue is
//! rational the projectors are computed exactly instead.

use crate::bigfloat::{Bf, Cf, FMat};
use crate::matrix::RatMatrix;
use crate::poly::{IPoly, QPoly};
use crate::rational::{rat, Rational};
use crate::spectral::{has_modulus_one_root, minimal_polynomial, poly_at_matrix, SpectralError};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::cmp::Ordering;

/// All complex roots of a squarefree integer polynomial, to roughly `bits`
/// bits, by the Durand-Kerner simultaneous iteration. Deterministic.
pub fn dk_roots(p: &IPoly, bits: u32) -> Vec<Cf> {
    let d = p.degree().expect("nonzero polynomial");
    assert!(d >= 1);
    let prec = bits + 32;
    let coeffs: Vec<Bf> = p.coeffs().iter().map(Bf::from_bigint).collect();
    let lead = coeffs[d].clone();
    if d == 1 {
        let z = coeffs[0].neg().div(&lead, prec);
        return vec![Cf::real(z)];
    }
    // root radius: 1 + max |c_i / c_d|
    let mut radius = Bf::from_i64(0);
    for c in &coeffs[..d] {
        let q = c.abs().div(&lead.abs(), 64);
        if q.cmp_signed(&radius) == Ordering::Greater {
            radius = q;
        }
    }
    let radius = radius.add(&Bf::from_i64(1), 64);
    // distinct starting points: radius * (2/5 + 9/10 i)^(j+1)
    let seed = Cf::new(
        Bf::from_rational(&rat(2, 5), prec),
        Bf::from_rational(&rat(9, 10), prec),
    );
    let mut z: Vec<Cf> = Vec::with_capacity(d);
    let mut cur = seed.clone();
    for _ in 0..d {
        z.push(cur.scale(&radius, prec));
        cur = cur.mul(&seed, prec);
    }
    let eval = |x: &Cf| -> Cf {
        let mut acc = Cf::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(x, prec);
            acc.re = acc.re.add(c, prec);
        }
        acc
    };
    let tol = Bf::pow2(-(bits as i64));
    for _ in 0..800 {
        let mut max_step = Bf::zero();
        for j in 0..d {
            let pz = eval(&z[j]);
            let mut den = Cf::real(lead.clone());
            for k in 0..d {
                if k != j {
                    let diff = z[j].sub(&z[k], prec);
                    if diff.is_zero() {
                        // nudge coincident points apart
                        z[j].re = z[j].re.add(&Bf::pow2(-(j as i64) - 4), prec);
                        continue;
                    }
                    den = den.mul(&diff, prec);
                }
            }
            if den.is_zero() {
                continue;
            }
            let delta = pz.div(&den, prec);
            z[j] = z[j].sub(&delta, prec);
            let step = delta.norm2(prec);
            if step.cmp_signed(&max_step) == Ordering::Greater {
                max_step = step;
            }
        }
        // steps are squared norms: compare against tol^2
        if max_step.cmp_signed(&tol.mul(&tol, prec)) == Ordering::Less {
            break;
        }
    }
    z
}

/// Splitting projectors onto the expanding (`|eig| > 1`) and contracting
/// (`|eig| < 1`) invariant subspaces.
#[derive(Debug, Clone)]
pub struct Projectors {
    pub p_expanding: FMat,
    pub p_contracting: FMat,
    /// Upper bound on the residual norms `|P_U + P_V - I|`, `|P_U^2 - P_U|`,
    /// `|M P_U - P_U M|` actually achieved; 0 when computed exactly.
    pub residual_bound: f64,
    pub bits: u32,
}

/// Compute the projectors at the requested number of decimal digits.
///
/// Requires a semisimple matrix with no eigenvalue of modulus one (both
/// verified exactly before any floating-point work).
pub fn splitting_projectors(
    m: &RatMatrix,
    precision_digits: u32,
) -> Result<Projectors, SpectralError> {
    splitting_projectors_bits(m, (precision_digits as f64 * 3.33).ceil() as u32 + 32)
}

/// Same as [`splitting_projectors`] with the working precision in bits.
pub fn splitting_projectors_bits(m: &RatMatrix, bits0: u32) -> Result<Projectors, SpectralError> {
    let minp = minimal_polynomial(m);
    let minq = minp.to_qpoly();
    if !minq.gcd(&minq.derivative()).is_constant() {
        return Err(SpectralError::NotSemisimple);
    }
    let (circle, _) = has_modulus_one_root(&minp)?;
    if circle {
        return Err(SpectralError::ModulusOneEigenvalue);
    }
    // exact path when every eigenvalue is rational
    if let Some((roots, cofactor)) = minp.rational_roots() {
        if cofactor.is_constant() {
            return Ok(exact_projectors(m, &roots, bits0));
        }
    }
    let mut bits = bits0;
    for _ in 0..6 {
        match numeric_projectors(m, &minq, bits) {
            Some(p) => return Ok(p),
            None => bits *= 2,
        }
    }
    Err(SpectralError::ModulusOneEigenvalue)
}

fn exact_projectors(m: &RatMatrix, roots: &[Rational], bits: u32) -> Projectors {
    let one = Rational::one();
    let build = |selected: &dyn Fn(&Rational) -> bool| -> QPoly {
        let mut acc = QPoly::zero();
        for (i, ri) in roots.iter().enumerate() {
            if !selected(ri) {
                continue;
            }
            let mut num = QPoly::one();
            let mut den = Rational::one();
            for (k, rk) in roots.iter().enumerate() {
                if k != i {
                    num = num.mul(&QPoly::new(vec![-rk.clone(), Rational::one()]));
                    den *= ri - rk;
                }
            }
            acc = acc.add(&num.scale(&den.recip()));
        }
        acc
    };
    let e_u = build(&|r| r.abs() > one);
    let e_v = build(&|r| r.abs() < one);
    let pu = poly_at_matrix(&e_u, m);
    let pv = poly_at_matrix(&e_v, m);
    debug_assert!(pu.add(&pv).is_identity());
    debug_assert_eq!(pu.mul(&pu), pu);
    Projectors {
        p_expanding: FMat::from_rational(&pu, bits),
        p_contracting: FMat::from_rational(&pv, bits),
        residual_bound: 0.0,
        bits,
    }
}

fn numeric_projectors(m: &RatMatrix, minq: &QPoly, bits: u32) -> Option<Projectors> {
    let prec = bits + 32;
    let d = minq.degree().unwrap();
    let monic = minq.monic();
    let roots = dk_roots(&minq.to_primitive_int(), bits);
    // classify by |z|^2 against 1 with a margin; ambiguity means the
    // precision cannot separate, so the caller escalates
    let margin = Bf::pow2(-(bits as i64 / 4));
    let one = Bf::from_i64(1);
    let mut expanding = Vec::new();
    for (i, z) in roots.iter().enumerate() {
        let gap = z.norm2(prec).sub(&one, prec);
        if gap.abs().cmp_signed(&margin) != Ordering::Greater {
            return None;
        }
        if !gap.is_negative() {
            expanding.push(i);
        }
    }
    let coeffs: Vec<Bf> = (0..=d)
        .map(|i| Bf::from_rational(&monic.coeff(i), prec))
        .collect();
    let dcoeffs: Vec<Bf> = (1..=d)
        .map(|i| {
            Bf::from_rational(
                &(monic.coeff(i) * Rational::from_integer(BigInt::from(i))),
                prec,
            )
        })
        .collect();
    let eval_deriv = |z: &Cf| -> Cf {
        let mut acc = Cf::zero();
        for c in dcoeffs.iter().rev() {
            acc = acc.mul(z, prec);
            acc.re = acc.re.add(c, prec);
        }
        acc
    };
    // e_S = sum over selected roots of (monic / (x - z_i)) / monic'(z_i)
    let lagrange_sum = |selected: &[usize]| -> Vec<Bf> {
        let mut acc = vec![Cf::zero(); d];
        for &i in selected {
            // deflation: monic / (x - z_i), coefficients by Horner
            let mut q = vec![Cf::zero(); d];
            let mut carry = Cf::real(coeffs[d].clone());
            for j in (0..d).rev() {
                q[j] = carry.clone();
                carry = carry.mul(&roots[i], prec);
                carry.re = carry.re.add(&coeffs[j], prec);
            }
            let den = eval_deriv(&roots[i]);
            if den.is_zero() {
                return vec![];
            }
            for (a, qq) in acc.iter_mut().zip(q) {
                *a = a.add(&qq.div(&den, prec), prec);
            }
        }
        acc.into_iter().map(|c| c.re).collect()
    };
    let contracting: Vec<usize> = (0..d).filter(|i| !expanding.contains(i)).collect();
    let cu = lagrange_sum(&expanding);
    let cv = lagrange_sum(&contracting);
    if (cu.is_empty() && !expanding.is_empty()) || (cv.is_empty() && !contracting.is_empty()) {
        return None;
    }
    let n = m.dim();
    let mf = FMat::from_rational(m, prec);
    let horner = |cs: &[Bf]| -> FMat {
        if cs.is_empty() {
            return FMat::zero(n);
        }
        let mut acc = FMat::identity(n).scale(&cs[cs.len() - 1], prec);
        for c in cs.iter().rev().skip(1) {
            acc = acc.mul(&mf, prec);
            acc = acc.add(&FMat::identity(n).scale(c, prec), prec);
        }
        acc
    };
    let pu = horner(&cu);
    let pv = horner(&cv);
    // residuals
    let r1 = pu
        .add(&pv, prec)
        .sub(&FMat::identity(n), prec)
        .op_norm(prec);
    let r2 = pu.mul(&pu, prec).sub(&pu, prec).op_norm(prec);
    let r3 = mf
        .mul(&pu, prec)
        .sub(&pu.mul(&mf, prec), prec)
        .op_norm(prec);
    let mut worst = r1;
    for r in [r2, r3] {
        if r.cmp_signed(&worst) == Ordering::Greater {
            worst = r;
        }
    }
    let bound = worst.to_f64() * 1.000001 + 2f64.powi(-(bits.min(1000) as i32) + 8);
    // sanity: residuals must reflect the working precision at all
    if bound > 1e-3 {
        return None;
    }
    Some(Projectors {
        p_expanding: pu,
        p_contracting: pv,
        residual_bound: bound,
        bits,
    })
}

/// Numeric oracle for unit-circle roots: find all roots of the squarefree
/// part at high precision and flag any with `||z| - 1| < 1e-30` (checked as
/// `||z|^2 - 1| < 2e-30`).
pub fn modulus_one_numeric_oracle(p: &IPoly, digits: u32) -> bool {
    let sf = p.to_qpoly().squarefree_part().to_primitive_int();
    if sf.degree().unwrap_or(0) == 0 {
        return false;
    }
    let bits = (digits as f64 * 3.33).ceil() as u32 + 64;
    let prec = bits + 32;
    let roots = dk_roots(&sf, bits);
    let threshold = Bf::from_rational(
        &Rational::new(BigInt::from(2), BigInt::from(10).pow(30)),
        prec,
    );
    let one = Bf::from_i64(1);
    roots.iter().any(|z| {
        z.norm2(prec)
            .sub(&one, prec)
            .abs()
            .cmp_signed(&threshold)
            == Ordering::Less
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn companion(low: &[i64]) -> RatMatrix {
        RatMatrix::companion(&low.iter().map(|&x| rat_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn dk_finds_integer_roots() {
        use num_traits::Signed;
        // (x-1)(x-2)(x+3)
        let p = IPoly::from_coeffs(&[6, -7, 0, 1]);
        let roots = dk_roots(&p, 128);
        let eps = Rational::new(BigInt::one(), BigInt::one() << 100);
        let mut reals: Vec<Rational> = roots.iter().map(|z| z.re.to_rational()).collect();
        reals.sort();
        for (r, expect) in reals.iter().zip([-3i64, 1, 2]) {
            assert!((r - rat_int(expect)).abs() < eps, "{r} vs {expect}");
        }
        for z in &roots {
            assert!(z.im.to_rational().abs() < eps);
        }
    }

    #[test]
    fn dk_finds_complex_roots() {
        use num_traits::Signed;
        // x^2 + 1
        let roots = dk_roots(&IPoly::from_coeffs(&[1, 0, 1]), 96);
        let eps = Rational::new(BigInt::one(), BigInt::one() << 80);
        for z in &roots {
            assert!(z.re.to_rational().abs() < eps);
            assert!((z.im.to_rational().abs() - rat_int(1)).abs() < eps);
        }
    }

    #[test]
    fn exact_projectors_for_rational_spectrum() {
        let m = RatMatrix::from_rows(vec![
            vec![rat_int(2), rat_int(0)],
            vec![rat_int(0), rat(1, 2)],
        ])
        .unwrap();
        let p = splitting_projectors(&m, 30).unwrap();
        assert_eq!(p.residual_bound, 0.0);
        assert!((p.p_expanding.get(0, 0).to_f64() - 1.0).abs() < 1e-25);
        assert!(p.p_expanding.get(1, 1).is_zero());
        assert!((p.p_contracting.get(1, 1).to_f64() - 1.0).abs() < 1e-25);
    }

    #[test]
    fn numeric_projectors_on_companions() {
        for low in [[1i64, -3], [-1, -1]] {
            let m = companion(&low);
            let p = splitting_projectors(&m, 40).unwrap();
            assert!(p.residual_bound < 1e-30, "bound {}", p.residual_bound);
            // residual bound shrinks as precision grows
            let p2 = splitting_projectors(&m, 80).unwrap();
            assert!(p2.residual_bound < p.residual_bound);
        }
    }

    #[test]
    fn projector_requires_hyperbolicity() {
        // rotation-like matrix: eigenvalues on the circle
        let rot = companion(&[1, -1]);
        assert_eq!(
            splitting_projectors(&rot, 30).unwrap_err(),
            SpectralError::ModulusOneEigenvalue
        );
        // non-semisimple matrix
        let jordan = RatMatrix::from_rows(vec![
            vec![rat_int(2), rat_int(1)],
            vec![rat_int(0), rat_int(2)],
        ])
        .unwrap();
        assert_eq!(
            splitting_projectors(&jordan, 30).unwrap_err(),
            SpectralError::NotSemisimple
        );
    }

    #[test]
    fn numeric_oracle_agrees_on_pinned_cases() {
        assert!(modulus_one_numeric_oracle(&IPoly::from_coeffs(&[1, -1, 1]), 50));
        assert!(!modulus_one_numeric_oracle(&IPoly::from_coeffs(&[1, -3, 1]), 50));
        assert!(modulus_one_numeric_oracle(&IPoly::cyclotomic(12), 50));
        assert!(!modulus_one_numeric_oracle(&IPoly::from_coeffs(&[-2, 1]), 50));
    }

    #[test]
    fn oracle_matches_exact_detector_on_random_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(404);
        for _ in 0..60 {
            let d = rng.gen_range(1..=6);
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
            if c[d] == 0 {
                c[d] = 1;
            }
            let p = IPoly::new(c.iter().map(|&x| BigInt::from(x)).collect());
            let exact = has_modulus_one_root(&p).unwrap().0;
            let numeric = modulus_one_numeric_oracle(&p, 50);
            assert_eq!(exact, numeric, "disagree on {p}");
        }
    }
}
