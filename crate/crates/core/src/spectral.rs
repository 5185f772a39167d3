//! Exact spectral analysis of rational matrices: minimal polynomials,
//! semisimplicity, and unit-circle eigenvalue detection.
//!
//! Whether a polynomial has a root of complex modulus one is decided
//! without floating point: all circle roots divide `gcd(p, rev p)`, whose
//! squarefree part (after removing roots at +-1) is palindromic of even
//! degree; under `y = (x + 1/x)/2` its circle roots land on real
//! `y in (-1, 1)`, counted by Sturm sequences. Root counts by modulus use
//! the same reduction plus a Cayley transform and Cauchy-index count for
//! the off-circle part.

use crate::group::GroupSpec;
use crate::matrix::RatMatrix;
use crate::poly::{IPoly, QPoly};
use crate::rational::{rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpectralError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("factor is not palindromic of even degree with unit ends")]
    NotReciprocal,
    #[error("polynomial is not a factor of the minimal polynomial")]
    NotAFactor,
    #[error("witness basis is degenerate")]
    DegenerateWitness,
    #[error("witness span is not invariant under the matrix and its inverse")]
    WitnessNotInvariant,
    #[error("matrix is not semisimple")]
    NotSemisimple,
    #[error("matrix has an eigenvalue of modulus one")]
    ModulusOneEigenvalue,
}

/// Evaluate a polynomial at a matrix argument (Horner).
pub fn poly_at_matrix(p: &QPoly, m: &RatMatrix) -> RatMatrix {
    let n = m.dim();
    let mut acc = RatMatrix::scalar(n, &p.leading());
    if p.is_zero() {
        return RatMatrix::scalar(n, &Rational::zero());
    }
    let d = p.degree().unwrap();
    for i in (0..d).rev() {
        acc = acc.mul(m);
        let c = p.coeff(i);
        if !c.is_zero() {
            acc = acc.add(&RatMatrix::scalar(n, &c));
        }
    }
    acc
}

/// Characteristic polynomial by the trace recurrence, monic of degree n.
pub fn char_poly(m: &RatMatrix) -> QPoly {
    let n = m.dim();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = RatMatrix::identity(n);
    for k in 1..=n {
        aux = m.mul(&aux);
        let mut tr = Rational::zero();
        for i in 0..n {
            tr += aux.get(i, i);
        }
        let c = -tr / Rational::from_integer(BigInt::from(k));
        coeffs[n - k] = c.clone();
        aux = aux.add(&RatMatrix::scalar(n, &c));
    }
    QPoly::new(coeffs)
}

/// Minimal polynomial, returned as the primitive integer multiple of the
/// monic rational minimal polynomial.
pub fn minimal_polynomial(m: &RatMatrix) -> IPoly {
    let n = m.dim();
    let mut acc = QPoly::one();
    for j in 0..n {
        if acc.degree() == Some(n) {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        let ann = vector_annihilator(m, &e);
        // lcm(acc, ann)
        let g = acc.gcd(&ann);
        acc = acc.mul(&ann.exact_div(&g)).monic();
    }
    acc.to_primitive_int()
}

/// Monic annihilator of least degree for a single vector under the matrix.
fn vector_annihilator(m: &RatMatrix, v: &[Rational]) -> QPoly {
    let n = m.dim();
    // krylov[i] = M^i v, grown until dependence
    let mut krylov: Vec<Vec<Rational>> = vec![v.to_vec()];
    loop {
        let next = m.mul_vec(krylov.last().unwrap());
        if let Some(coeffs) = express_in_span(&krylov, &next) {
            // next = sum coeffs[i] * krylov[i]  =>  x^k - sum coeffs_i x^i
            let k = krylov.len();
            let mut c = vec![Rational::zero(); k + 1];
            c[k] = Rational::one();
            for (i, ci) in coeffs.into_iter().enumerate() {
                c[i] = -ci;
            }
            return QPoly::new(c);
        }
        if krylov.len() == n {
            unreachable!("Krylov space cannot exceed the ambient dimension");
        }
        krylov.push(next);
    }
}

/// Solve `sum c_i basis_i = target` if the target lies in the span.
fn express_in_span(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = target.len();
    let k = basis.len();
    // columns: basis vectors, then target; row-reduce
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let piv = (r..n).find(|&i| !rows[i][c].is_zero());
        let Some(p) = piv else { continue };
        rows.swap(r, p);
        let pv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..=k {
                    let s = &f * &rows[r][j];
                    rows[i][j] -= s;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    // consistent iff no pivot in the target column
    for row in rows.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    for i in r..n {
        if !rows[i][k].is_zero() {
            return None;
        }
    }
    let mut coeffs = vec![Rational::zero(); k];
    for (ri, &c) in pivot_cols.iter().enumerate() {
        coeffs[c] = rows[ri][k].clone();
    }
    Some(coeffs)
}

/// Semisimple over Q iff the minimal polynomial is squarefree.
pub fn is_semisimple(m: &RatMatrix) -> bool {
    let p = minimal_polynomial(m).to_qpoly();
    p.gcd(&p.derivative()).is_constant()
}

/// Exact decision whether an integer polynomial has a complex root of
/// modulus one, together with a witness factor when it does: `x - 1`,
/// `x + 1`, or the palindromic part carrying the circle roots.
pub fn has_modulus_one_root(p: &IPoly) -> Result<(bool, Option<IPoly>), SpectralError> {
    if p.is_zero() {
        return Err(SpectralError::ZeroPolynomial);
    }
    if p.eval_int(&BigInt::one()).is_zero() {
        return Ok((true, Some(IPoly::from_coeffs(&[-1, 1]))));
    }
    if p.eval_int(&BigInt::from(-1)).is_zero() {
        return Ok((true, Some(IPoly::from_coeffs(&[1, 1]))));
    }
    let g1 = circle_locus(p);
    if g1.is_zero() || g1.degree() == Some(0) {
        return Ok((false, None));
    }
    let h = g1.half_angle_transform();
    let pairs = h
        .to_qpoly()
        .squarefree_part()
        .sturm_count(&rat(-1, 1), &rat(1, 1));
    if pairs > 0 {
        Ok((true, Some(g1)))
    } else {
        Ok((false, None))
    }
}

/// The palindromic squarefree factor bounding the unit-circle locus:
/// `gcd(sqfree(p), rev sqfree(p))` with roots at 0 and +-1 removed.
fn circle_locus(p: &IPoly) -> IPoly {
    let (stripped, _) = p.strip_zero_roots();
    let f = stripped.to_qpoly().squarefree_part();
    let fi = f.to_primitive_int();
    let g = f.gcd(&fi.reversal().to_qpoly());
    let mut gi = g.to_primitive_int();
    for root in [1i64, -1] {
        let r = BigInt::from(root);
        while !gi.is_zero() && gi.eval_int(&r).is_zero() {
            let lin = IPoly::from_coeffs(&[-root, 1]);
            gi = gi.to_qpoly().exact_div(&lin.to_qpoly()).to_primitive_int();
        }
    }
    debug_assert!(gi.degree() == Some(0) || gi.is_palindromic());
    gi
}

/// Exact root counts by modulus, with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModulusCounts {
    pub inside: usize,
    pub on_circle: usize,
    pub outside: usize,
}

/// Count the roots of a polynomial with `|root| < 1`, `= 1`, `> 1`,
/// with multiplicity. Exact; no floating point involved.
pub fn count_roots_by_modulus(p: &QPoly) -> ModulusCounts {
    let mut out = ModulusCounts {
        inside: 0,
        on_circle: 0,
        outside: 0,
    };
    for (factor, mult) in p.squarefree_decomposition() {
        let c = count_squarefree(&factor);
        out.inside += mult * c.inside;
        out.on_circle += mult * c.on_circle;
        out.outside += mult * c.outside;
    }
    out
}

fn count_squarefree(f: &QPoly) -> ModulusCounts {
    let fi = f.to_primitive_int();
    let (stripped, zeros) = fi.strip_zero_roots();
    let mut inside = zeros;
    let mut on_circle = 0;
    let mut outside = 0;

    let fq = stripped.to_qpoly();
    let at_one = fq.eval(&rat(1, 1)).is_zero();
    let at_minus_one = fq.eval(&rat(-1, 1)).is_zero();
    on_circle += usize::from(at_one) + usize::from(at_minus_one);

    let g = fq.gcd(&stripped.reversal().to_qpoly());
    let mut g1 = g.clone();
    for root in [rat(1, 1), rat(-1, 1)] {
        while !g1.is_constant() && g1.eval(&root).is_zero() {
            g1 = g1.exact_div(&QPoly::new(vec![-root.clone(), Rational::one()]));
        }
    }
    if let Some(d1) = g1.degree() {
        if d1 > 0 {
            let pairs = g1
                .to_primitive_int()
                .half_angle_transform()
                .to_qpoly()
                .sturm_count(&rat(-1, 1), &rat(1, 1));
            on_circle += 2 * pairs;
            // off-circle roots of the palindromic part pair up (r, 1/r)
            let off = d1 - 2 * pairs;
            debug_assert!(off % 2 == 0);
            inside += off / 2;
            outside += off / 2;
        }
    }
    // the cofactor has no circle roots at all; its Cayley image has no
    // imaginary-axis roots, so the half-plane count is clean
    let f2 = fq.exact_div(&g);
    if let Some(d2) = f2.degree() {
        if d2 > 0 {
            let rhp = right_half_plane_roots(&f2.to_primitive_int().cayley_transform());
            outside += rhp;
            inside += d2 - rhp;
        }
    }
    ModulusCounts {
        inside,
        on_circle,
        outside,
    }
}

/// Number of roots with positive real part for a real polynomial with no
/// roots on the imaginary axis, by the Cauchy-index form of the
/// Routh-Hurwitz count.
fn right_half_plane_roots(q: &IPoly) -> usize {
    let n = q.degree().expect("nonzero polynomial");
    if n == 0 {
        return 0;
    }
    // q(i w) = U(w) + i V(w)
    let mut u = vec![Rational::zero(); n + 1];
    let mut v = vec![Rational::zero(); n + 1];
    for (j, c) in q.coeffs().iter().enumerate() {
        let cq = Rational::from_integer(c.clone());
        match j % 4 {
            0 => u[j] = cq,
            1 => v[j] = cq,
            2 => u[j] = -cq,
            3 => v[j] = -cq,
            _ => unreachable!(),
        }
    }
    let u = QPoly::new(u);
    let v = QPoly::new(v);
    let count = if n % 2 == 0 {
        let ind = u.cauchy_index(&v);
        n as i64 + ind
    } else {
        let ind = v.cauchy_index(&u);
        n as i64 - ind
    };
    debug_assert!(count >= 0 && count % 2 == 0, "half-plane parity violated");
    (count / 2) as usize
}

/// Spectral summary of a rational matrix.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub minimal_polynomial: IPoly,
    pub characteristic_polynomial: IPoly,
    pub is_semisimple: bool,
    pub has_modulus_one: bool,
    /// Factors found to carry the unit-circle locus (palindromic part
    /// and/or `x -+ 1`), from the gcd-with-reversal bound.
    pub reciprocal_factors: Vec<IPoly>,
    pub counts: ModulusCounts,
}

impl Serialize for SpectralReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs =
            |p: &IPoly| -> Vec<String> { p.coeffs().iter().map(|c| c.to_string()).collect() };
        let mut s = serializer.serialize_struct("SpectralReport", 7)?;
        s.serialize_field("minimal_polynomial", &coeffs(&self.minimal_polynomial))?;
        s.serialize_field(
            "characteristic_polynomial",
            &coeffs(&self.characteristic_polynomial),
        )?;
        s.serialize_field("is_semisimple", &self.is_semisimple)?;
        s.serialize_field("has_modulus_one", &self.has_modulus_one)?;
        s.serialize_field(
            "reciprocal_factors",
            &self
                .reciprocal_factors
                .iter()
                .map(coeffs)
                .collect::<Vec<_>>(),
        )?;
        s.serialize_field("expanding", &self.counts.outside)?;
        s.serialize_field("contracting", &self.counts.inside)?;
        s.end()
    }
}

pub fn analyze_matrix(m: &RatMatrix) -> SpectralReport {
    let min_poly = minimal_polynomial(m);
    let cp = char_poly(m);
    let semisimple = {
        let q = min_poly.to_qpoly();
        q.gcd(&q.derivative()).is_constant()
    };
    let (has_circle, witness) = has_modulus_one_root(&min_poly).expect("nonzero minimal polynomial");
    let mut reciprocal_factors = Vec::new();
    let sf = min_poly.to_qpoly().squarefree_part().to_primitive_int();
    for root in [1i64, -1] {
        if sf.eval_int(&BigInt::from(root)).is_zero() {
            reciprocal_factors.push(IPoly::from_coeffs(&[-root, 1]));
        }
    }
    let locus = circle_locus(&min_poly);
    if locus.degree().unwrap_or(0) > 0 {
        reciprocal_factors.push(locus);
    }
    let _ = witness;
    SpectralReport {
        minimal_polynomial: min_poly,
        characteristic_polynomial: cp.to_primitive_int(),
        is_semisimple: semisimple,
        has_modulus_one: has_circle,
        reciprocal_factors,
        counts: count_roots_by_modulus(&cp),
    }
}

/// Vectors `b, Mb, ..., M^{d-1}b` whose integer span is invariant under both
/// `M` and `M^{-1}`, for a palindromic even-degree factor `q` of the minimal
/// polynomial with unit leading and constant coefficients.
pub fn invariant_lattice_witness(
    m: &RatMatrix,
    q: &IPoly,
) -> Result<Vec<Vec<Rational>>, SpectralError> {
    let d = q.degree().ok_or(SpectralError::ZeroPolynomial)?;
    if !q.is_palindromic() || d == 0 || d % 2 != 0 || !q.leading().abs().is_one() {
        return Err(SpectralError::NotReciprocal);
    }
    let minp = minimal_polynomial(m).to_qpoly();
    let (_, rem) = minp.divrem(&q.to_qpoly());
    if !rem.is_zero() {
        return Err(SpectralError::NotAFactor);
    }
    // b: a nonzero kernel vector of q(M)
    let qm = poly_at_matrix(&q.to_qpoly(), m);
    let b = kernel_vector(&qm).ok_or(SpectralError::DegenerateWitness)?;
    let mut basis = vec![b];
    for _ in 1..d {
        let next = m.mul_vec(basis.last().unwrap());
        basis.push(next);
    }
    // verify the span is closed under M and M^{-1} with integer coordinates
    let n = m.dim();
    let bmat = RatMatrix::from_fn(n, |i, j| {
        if j < basis.len() {
            basis[j][i].clone()
        } else {
            Rational::zero()
        }
    });
    // for d < n the basis matrix is not square; lift via coordinates solve
    let minv = m.inverse().expect("invertible");
    for mat in [m, &minv] {
        for vec in &basis {
            let image = mat.mul_vec(vec);
            let coords = express_in_span(&basis, &image).ok_or(SpectralError::WitnessNotInvariant)?;
            if !coords.iter().all(|c| c.is_integer()) {
                return Err(SpectralError::WitnessNotInvariant);
            }
        }
    }
    let _ = bmat;
    Ok(basis)
}

fn kernel_vector(m: &RatMatrix) -> Option<Vec<Rational>> {
    let n = m.dim();
    let mut rows: Vec<Vec<Rational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut pivots: Vec<Option<usize>> = vec![None; n];
    let mut r = 0;
    for c in 0..n {
        let piv = (r..n).find(|&i| !rows[i][c].is_zero());
        let Some(p) = piv else { continue };
        rows.swap(r, p);
        let pv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let s = &f * &rows[r][j];
                    rows[i][j] -= s;
                }
            }
        }
        pivots[c] = Some(r);
        r += 1;
    }
    // free column -> kernel vector
    let free = (0..n).find(|&c| pivots[c].is_none())?;
    let mut v = vec![Rational::zero(); n];
    v[free] = Rational::one();
    for c in 0..n {
        if let Some(pr) = pivots[c] {
            v[c] = -rows[pr][free].clone();
        }
    }
    Some(v)
}

/// Search exponent vectors `e` with `max|e_i| <= bound` for one whose action
/// `M^e = prod M_i^{e_i}` has no eigenvalue of modulus one. Enumeration is
/// by increasing sup norm, with per-coordinate order `0, 1, -1, 2, -2, ...`
/// and the first coordinate varying fastest, so the result is deterministic.
pub fn find_hyperbolic_element(spec: &GroupSpec, exponent_bound: u32) -> Option<Vec<i64>> {
    assert!(exponent_bound >= 1);
    let k = spec.q_rank();
    for shell in 0..=exponent_bound {
        let seq = signed_sequence(shell);
        let mut idx = vec![0usize; k];
        loop {
            let e: Vec<i64> = idx.iter().map(|&i| seq[i]).collect();
            if e.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) == shell as u64 {
                let mut m = RatMatrix::identity(spec.dim());
                for (i, &ei) in e.iter().enumerate() {
                    if ei != 0 {
                        m = m.mul(&spec.action(i).pow(ei).expect("invertible"));
                    }
                }
                let p = minimal_polynomial(&m);
                let (circle, _) = has_modulus_one_root(&p).expect("nonzero");
                if !circle {
                    return Some(e);
                }
            }
            // odometer, first coordinate fastest
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                idx[pos] += 1;
                if idx[pos] < seq.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    None
}

fn signed_sequence(limit: u32) -> Vec<i64> {
    let mut v = vec![0i64];
    for i in 1..=limit as i64 {
        v.push(i);
        v.push(-i);
    }
    v
}
