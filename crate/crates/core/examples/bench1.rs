use metadist_core::shortwords::lambda_adic_digits;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

fn main() {
    let t0 = std::time::Instant::now();
    let violations: u64 = (1i64..=1_000_000).into_par_iter().map(|m| {
        let mut bad = 0u64;
        for (x, y) in [(2i64, 1i64), (3, 2)] {
            for sign in [1i64, -1] {
                let d = lambda_adic_digits(&BigInt::from(sign * m), &BigInt::from(x), &BigInt::from(y)).unwrap();
                let s = d.digits.len() - 1;
                // integer-exact reconstruction: m * y^s == sum c_i x^i y^(s-i)
                let mut rhs: i128 = 0;
                let mut lhs: i128 = m as i128;
                let mut xs: i128 = 1; // x^s for the lambda^s <= |m| check
                for (i, c) in d.digits.iter().enumerate() {
                    let ci = c.to_i128().unwrap();
                    if !(0..x as i128).contains(&ci) { bad += 1; }
                    let mut term = ci;
                    for _ in 0..i { term *= x as i128; }
                    for _ in i..s { term *= y as i128; }
                    rhs += term;
                }
                for _ in 0..s { lhs *= y as i128; xs *= x as i128; }
                if (d.negative != (sign < 0) && m != 0) || lhs != rhs { bad += 1; }
                // lambda^s <= |m|  <=>  x^s <= m * y^s
                if xs > lhs { bad += 1; }
                // letter bound: 2s + sum c_i < s(2+x) + x
                let total: i128 = d.digits.iter().map(|c| c.to_i128().unwrap()).sum::<i128>() + 2 * s as i128;
                if total >= (s as i128) * (2 + x as i128) + x as i128 { bad += 1; }
            }
        }
        bad
    }).sum();
    println!("violations: {violations}, elapsed {:?}", t0.elapsed());
}
