//! Exact comparisons against logarithms of integers.
//!
//! Claims of the form `f <= M*ln(n) + C` with rational `f, M, C` and integer
//! `n >= 1` are decided exactly: `ln(n)` is boxed by certified rational
//! bounds from the atanh series, refined until the comparison separates.
//! For `n >= 2` the logarithm is irrational, so refinement terminates.

use crate::rational::{rat, Rational};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Certified bounds for `atanh(t)`, `0 <= t < 1`, from `terms` series terms.
fn atanh_bounds(t: &Rational, terms: usize) -> (Rational, Rational) {
    debug_assert!(!t.is_negative() && t < &Rational::one());
    let t2 = t * t;
    let mut power = t.clone();
    let mut sum = Rational::zero();
    for j in 0..terms {
        sum += &power / Rational::from_integer(BigInt::from(2 * j as u64 + 1));
        power *= &t2;
    }
    // tail: sum_{j>=terms} t^(2j+1)/(2j+1) <= t^(2*terms+1) / ((2*terms+1)(1-t^2))
    let tail = &power
        / (Rational::from_integer(BigInt::from(2 * terms as u64 + 1)) * (Rational::one() - &t2));
    let hi = &sum + tail;
    (sum, hi)
}

/// Certified bounds for `ln(x)` of a rational `x >= 1`.
fn ln_rational_bounds(x: &Rational, terms: usize) -> (Rational, Rational) {
    debug_assert!(x >= &Rational::one());
    let t = (x - Rational::one()) / (x + Rational::one());
    let (lo, hi) = atanh_bounds(&t, terms);
    (&lo + &lo, &hi + &hi)
}

/// Certified bounds for `ln(n)` of an integer `n >= 1`.
pub fn ln_bounds(n: &BigUint, terms: usize) -> (Rational, Rational) {
    assert!(!n.is_zero(), "ln of zero");
    if n.is_one() {
        return (Rational::zero(), Rational::zero());
    }
    // n = 2^k * x with x in [1, 2)
    let k = n.bits() - 1;
    let x = Rational::new(BigInt::from(n.clone()), BigInt::from(BigUint::one() << k));
    let (ln2_lo, ln2_hi) = ln_rational_bounds(&rat(2, 1), terms);
    let (lx_lo, lx_hi) = ln_rational_bounds(&x, terms);
    let kq = Rational::from_integer(BigInt::from(k));
    (&kq * ln2_lo + lx_lo, &kq * ln2_hi + lx_hi)
}

/// Deterministic rational lower bound for `ln(n)`, used when fitting
/// envelopes so that the fitted constants stay valid for the true logarithm.
pub fn ln_lower(n: &BigUint) -> Rational {
    ln_bounds(n, 24).0
}

/// Exact comparison of a rational against `ln(n)`, `n >= 1`.
pub fn cmp_ln(rho: &Rational, n: &BigUint) -> Ordering {
    assert!(!n.is_zero(), "ln of zero");
    if n.is_one() {
        return rho.cmp(&Rational::zero());
    }
    if rho.is_negative() || rho.is_zero() {
        return Ordering::Less;
    }
    let mut terms = 8;
    while terms <= 1 << 16 {
        let (lo, hi) = ln_bounds(n, terms);
        if rho < &lo {
            return Ordering::Less;
        }
        if rho > &hi {
            return Ordering::Greater;
        }
        terms *= 2;
    }
    unreachable!("ln({n}) bounds failed to separate from {rho}");
}

/// Exact decision of `f <= m*ln(n) + c` for `m >= 0`, `n >= 1`.
pub fn affine_log_dominates(f: &Rational, m: &Rational, n: &BigUint, c: &Rational) -> bool {
    assert!(!m.is_negative(), "multiplier must be nonnegative");
    let t = f - c;
    if !t.is_positive() {
        return true;
    }
    if m.is_zero() {
        return false;
    }
    cmp_ln(&(t / m.clone()), n) == Ordering::Less
}

/// `ln(n)` as a double, stable for integers of any size.
pub fn ln_f64(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_bounds_bracket_f64() {
        for n in [1u64, 2, 3, 7, 10, 1000, 123_456_789] {
            let big = BigUint::from(n);
            let (lo, hi) = ln_bounds(&big, 16);
            let truth = (n as f64).ln();
            assert!(lo.to_f64().unwrap() <= truth + 1e-12, "lo fails for {n}");
            assert!(hi.to_f64().unwrap() >= truth - 1e-12, "hi fails for {n}");
            assert!((hi - lo).to_f64().unwrap() < 1e-9);
        }
    }

    #[test]
    fn cmp_ln_decides() {
        // ln 2 = 0.693147...
        assert_eq!(cmp_ln(&rat(693, 1000), &BigUint::from(2u32)), Ordering::Less);
        assert_eq!(
            cmp_ln(&rat(694, 1000), &BigUint::from(2u32)),
            Ordering::Greater
        );
        // ln 1 = 0 exactly
        assert_eq!(cmp_ln(&rat(0, 1), &BigUint::one()), Ordering::Equal);
        // a very tight rational near ln 10 = 2.302585092994046...
        assert_eq!(
            cmp_ln(&rat(2302585092994045, 1_000_000_000_000_000), &BigUint::from(10u32)),
            Ordering::Less
        );
        assert_eq!(
            cmp_ln(&rat(2302585092994047, 1_000_000_000_000_000), &BigUint::from(10u32)),
            Ordering::Greater
        );
    }

    #[test]
    fn affine_bound_decisions() {
        let n = BigUint::from(100u32); // ln = 4.60517...
        assert!(affine_log_dominates(&rat(9, 1), &rat(2, 1), &n, &rat(0, 1)));
        assert!(!affine_log_dominates(&rat(10, 1), &rat(2, 1), &n, &rat(0, 1)));
        assert!(affine_log_dominates(&rat(10, 1), &rat(2, 1), &n, &rat(1, 1)));
        assert!(affine_log_dominates(&rat(-3, 1), &rat(0, 1), &n, &rat(0, 1)));
        // lower-bound fitting stays valid for the true logarithm
        let g = ln_lower(&n);
        assert!(affine_log_dominates(&(rat(3, 1) * &g), &rat(3, 1), &n, &rat(0, 1)));
    }

    #[test]
    fn ln_f64_large_values() {
        let n = BigUint::from(10u32).pow(50);
        let expect = 50.0 * 10f64.ln();
        assert!((ln_f64(&n) - expect).abs() < 1e-9);
    }
}
