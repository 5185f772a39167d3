//! Exact rational scalars and vectors, and the size measures built on them.
//!
//! The basic measure is `mu(g/a) = |g*a| / gcd(g,a)^2` for a fraction in
//! lowest terms, extended coordinate-wise to vectors by `mu_e`. Its logarithm
//! tracks geodesic word length in the groups handled by this crate.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Convenience constructor from machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse a rational from `"p/q"` or `"p"` form. Whitespace is trimmed.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
    let d = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(n, d))
}

/// Render a rational as `"p"` or `"p/q"`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// The mu measure of a rational: for `g/a` in lowest terms, `|g| * |a|`.
///
/// `mu(0) = 0` so that `ln(mu + 1)` vanishes exactly on the identity.
pub fn mu(q: &Rational) -> BigUint {
    if q.is_zero() {
        return BigUint::zero();
    }
    (q.numer().abs() * q.denom()).magnitude().clone()
}

/// Coordinate-wise sum of `mu` over a vector.
pub fn mu_e(v: &[Rational]) -> BigUint {
    let mut acc = BigUint::zero();
    for c in v {
        acc += mu(c);
    }
    acc
}

/// Exact 1-norm of a rational vector.
pub fn one_norm(v: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for c in v {
        acc += c.abs();
    }
    acc
}

/// Exact 1-norm of an integer vector.
pub fn one_norm_int(v: &[BigInt]) -> BigUint {
    let mut acc = BigUint::zero();
    for c in v {
        acc += c.magnitude();
    }
    acc
}

/// Nearest integer to `q` with ties rounded toward zero.
pub fn round_ties_to_zero(q: &Rational) -> BigInt {
    let f = q.floor().to_integer();
    let frac = q - Rational::from_integer(f.clone());
    let half = rat(1, 2);
    if frac > half {
        f + 1
    } else if frac < half {
        f
    } else {
        // tie: candidates f and f+1, pick the one of smaller magnitude
        let up: BigInt = &f + 1;
        if f.abs() <= up.abs() {
            f
        } else {
            up
        }
    }
}

/// `base^exp` for a rational base and signed integer exponent.
pub fn rat_pow(base: &Rational, exp: i64) -> Rational {
    if exp == 0 {
        return Rational::one();
    }
    let mut result = Rational::one();
    let mut b = if exp > 0 {
        base.clone()
    } else {
        base.recip()
    };
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        rat(n, d)
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(&r(3, 6)).to_u64(), Some(2));
        assert_eq!(mu(&r(5, 1)).to_u64(), Some(5));
        assert_eq!(mu(&r(5, 6)).to_u64(), Some(30));
        assert_eq!(mu(&r(0, 1)).to_u64(), Some(0));
        assert_eq!(mu(&r(-5, 6)).to_u64(), Some(30));
    }

    #[test]
    fn mu_e_examples() {
        assert_eq!(mu_e(&[r(1, 2), r(3, 1)]).to_u64(), Some(5));
        assert_eq!(mu_e(&[r(0, 1), r(0, 1)]).to_u64(), Some(0));
        assert_eq!(mu_e(&[r(5, 6), r(-3, 2)]).to_u64(), Some(36));
    }

    #[test]
    fn one_norm_examples() {
        assert_eq!(one_norm(&[r(1, 1), r(-2, 1), r(3, 1)]), r(6, 1));
        assert_eq!(one_norm(&[r(0, 1), r(0, 1), r(0, 1)]), r(0, 1));
        assert_eq!(one_norm(&[r(1, 2), r(1, 3)]), r(5, 6));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/2").unwrap(), r(3, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), r(-7, 1));
        assert_eq!(parse_rational("4/6").unwrap(), r(2, 3));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&r(-3, 2)), "-3/2");
        assert_eq!(format_rational(&r(8, 4)), "2");
    }

    #[test]
    fn rounding_ties_go_toward_zero() {
        assert_eq!(round_ties_to_zero(&r(5, 2)), BigInt::from(2));
        assert_eq!(round_ties_to_zero(&r(-5, 2)), BigInt::from(-2));
        assert_eq!(round_ties_to_zero(&r(1, 2)), BigInt::from(0));
        assert_eq!(round_ties_to_zero(&r(3, 2)), BigInt::from(1));
        assert_eq!(round_ties_to_zero(&r(7, 3)), BigInt::from(2));
        assert_eq!(round_ties_to_zero(&r(-1, 3)), BigInt::from(0));
    }

    #[test]
    fn rat_pow_matches_repeated_multiplication() {
        let b = r(3, 2);
        assert_eq!(rat_pow(&b, 0), r(1, 1));
        assert_eq!(rat_pow(&b, 3), r(27, 8));
        assert_eq!(rat_pow(&b, -2), r(4, 9));
    }

    // mu(t*b) <= mu(t)*mu(b) for nonzero rationals.
    proptest! {
        #[test]
        fn mu_submultiplicative(a in 1i64..1_000_000, b in 1i64..1_000_000,
                                c in 1i64..1_000_000, d in 1i64..1_000_000,
                                sa in prop::bool::ANY, sb in prop::bool::ANY) {
            let t = r(if sa { a } else { -a }, b);
            let u = r(if sb { c } else { -c }, d);
            let prod = &t * &u;
            prop_assert!(mu(&prod) <= mu(&t) * mu(&u));
        }

        #[test]
        fn one_norm_triangle_and_homogeneous(
            xs in prop::collection::vec((-999i64..1000, 1i64..50), 1..6),
            ys in prop::collection::vec((-999i64..1000, 1i64..50), 1..6),
            s in -20i64..20, sd in 1i64..20)
        {
            let n = xs.len().min(ys.len());
            let u: Vec<Rational> = xs[..n].iter().map(|&(p, q)| r(p, q)).collect();
            let v: Vec<Rational> = ys[..n].iter().map(|&(p, q)| r(p, q)).collect();
            let sum: Vec<Rational> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
            prop_assert!(one_norm(&sum) <= one_norm(&u) + one_norm(&v));

            let scale = r(s, sd);
            let scaled: Vec<Rational> = u.iter().map(|a| a * &scale).collect();
            prop_assert_eq!(one_norm(&scaled), scale.abs() * one_norm(&u));
        }
    }

    // mu(b1 + b2) <= 2 * (mu(b1) * mu(b2))^2, exhaustively over small fractions.
    #[test]
    fn mu_sum_bound_exhaustive_small() {
        let bound = 30i64;
        let mut fracs = Vec::new();
        for num in -bound..=bound {
            if num == 0 {
                continue;
            }
            for den in 1..=bound {
                if num_integer::gcd(num.abs(), den) == 1 {
                    fracs.push(r(num, den));
                }
            }
        }
        let two = BigUint::from(2u32);
        for b1 in &fracs {
            for b2 in &fracs {
                let s = b1 + b2;
                if s.is_zero() {
                    continue;
                }
                let m1 = mu(b1);
                let m2 = mu(b2);
                let prod = &m1 * &m2;
                assert!(
                    mu(&s) <= &two * (&prod * &prod),
                    "violated at {} + {}",
                    b1,
                    b2
                );
            }
        }
    }

    // For integers a, b >= 1: a+b <= 2ab and (a+b)^2 >= 4ab >= 2ab.
    #[test]
    fn log_sum_integer_inequalities() {
        for a in 1u64..200 {
            for b in 1u64..200 {
                let s = a + b;
                assert!(s <= 2 * a * b);
                assert!(s * s >= 4 * a * b);
                assert!(s * s >= 2 * a * b);
            }
        }
    }
}
