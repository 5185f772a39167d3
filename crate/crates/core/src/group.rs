//! Group models `G = Z^k ⋉ B` with `B` inside `Q^n`, given by k commuting
//! invertible rational matrices.
//!
//! Elements are kept in the normal form `(exponent vector, translation)`;
//! a word over the generators evaluates by collecting the Q-letters, which
//! also yields a certified upper bound on the mu measure of the resulting
//! translation in terms of the letter counts alone.

use crate::matrix::{MatrixError, RatMatrix};
use crate::rational::{mu_e, Rational};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("action {0} is singular")]
    SingularAction(usize),
    #[error("actions {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("action {index} is {found}x{found} but expected {expected}x{expected}")]
    ActionDimension {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("unknown letter: generator index {index} out of range")]
    UnknownLetter { index: usize },
    #[error("element dimensions do not match the spec")]
    ElementDimension,
}

/// A generator symbol: one of the k Q-generators or the n A-generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Q(usize),
    A(usize),
}

/// A signed generator symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: Gen,
    pub inv: bool,
}

impl Letter {
    pub fn q(i: usize) -> Self {
        Self {
            gen: Gen::Q(i),
            inv: false,
        }
    }
    pub fn q_inv(i: usize) -> Self {
        Self {
            gen: Gen::Q(i),
            inv: true,
        }
    }
    pub fn a(j: usize) -> Self {
        Self {
            gen: Gen::A(j),
            inv: false,
        }
    }
    pub fn a_inv(j: usize) -> Self {
        Self {
            gen: Gen::A(j),
            inv: true,
        }
    }
    pub fn inverse(self) -> Self {
        Self {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// A word over the generating system; the empty word is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// `a_j^p` as a word of `|p|` letters.
    pub fn a_power(j: usize, p: &BigInt) -> Self {
        let count = p.abs().to_usize().expect("exponent fits in usize");
        let l = if p.is_negative() {
            Letter::a_inv(j)
        } else {
            Letter::a(j)
        };
        Self(vec![l; count])
    }

    /// `q_i^p` as a word of `|p|` letters.
    pub fn q_power(i: usize, p: i64) -> Self {
        let l = if p < 0 {
            Letter::q_inv(i)
        } else {
            Letter::q(i)
        };
        Self(vec![l; p.unsigned_abs() as usize])
    }

    pub fn display<'a>(&'a self, spec: &'a GroupSpec) -> WordDisplay<'a> {
        WordDisplay { word: self, spec }
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    spec: &'a GroupSpec,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = match l.gen {
                Gen::Q(i) => &self.spec.labels_q[i],
                Gen::A(j) => &self.spec.labels_a[j],
            };
            if l.inv {
                write!(f, "{name}^-1")?;
            } else {
                write!(f, "{name}")?;
            }
        }
        Ok(())
    }
}

/// Normal form of a group element: `q^e * b` with `e` the exponent vector
/// of the Q-part and `b` the translation. Equality is field-wise and exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub exps: Vec<i64>,
    pub trans: Vec<Rational>,
}

impl Element {
    pub fn identity(k: usize, n: usize) -> Self {
        Self {
            exps: vec![0; k],
            trans: vec![Rational::zero(); n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0) && self.trans.iter().all(|t| t.is_zero())
    }

    pub fn translation(trans: Vec<Rational>, k: usize) -> Self {
        Self {
            exps: vec![0; k],
            trans,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exps.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, " | ")?;
        for (j, t) in self.trans.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", crate::rational::format_rational(t))?;
        }
        write!(f, ")")
    }
}

/// Per-word letter counts together with the certified mu bound they imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthCertificate {
    /// Instances of each Q-generator (either sign).
    pub sigma: Vec<u64>,
    /// Instances of each A-generator (either sign).
    pub alpha: Vec<u64>,
    /// Certified bound: `mu_E(translation) <= mu_bound`, exactly.
    pub mu_bound: BigUint,
}

impl LengthCertificate {
    pub fn sigma_total(&self) -> u64 {
        self.sigma.iter().sum()
    }

    pub fn alpha_total(&self) -> u64 {
        self.alpha.iter().sum()
    }

    /// Length in the collecting accounting: each Q-letter counts twice.
    pub fn weighted_length(&self) -> u64 {
        self.alpha_total() + 2 * self.sigma_total()
    }
}

/// Diagnostics produced when a spec is constructed.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

/// Constants of the collecting bound, taken over the integral action model.
#[derive(Debug, Clone)]
pub struct CollectingConstants {
    pub k1: BigUint,
    pub k2: BigUint,
    pub k3: BigUint,
    /// `K1 * K2^2 * K3`.
    pub base: BigUint,
    /// 1 for integral actions; 2 when the integral model needs an extra
    /// stable letter, doubling the Q-letter count of a rewritten word.
    pub sigma_factor: u32,
}

/// A group `Z^k ⋉ B`, `B <= Q^n`, with pairwise commuting invertible actions.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    k: usize,
    n: usize,
    actions: Vec<RatMatrix>,
    inverses: Vec<RatMatrix>,
    labels_q: Vec<String>,
    labels_a: Vec<String>,
    clearing: BigInt,
    constants: CollectingConstants,
    report: ValidationReport,
}

impl GroupSpec {
    /// Build and validate a spec from its action matrices.
    pub fn new(actions: Vec<RatMatrix>) -> Result<Self, GroupError> {
        let k = actions.len();
        assert!(k >= 1, "need at least one Q-generator");
        let n = actions[0].dim();
        let labels_q = (0..k)
            .map(|i| if k == 1 { "t".into() } else { format!("q{}", i + 1) })
            .collect();
        let labels_a = (0..n)
            .map(|j| if n == 1 { "a".into() } else { format!("a{}", j + 1) })
            .collect();
        Self::with_labels(actions, labels_q, labels_a)
    }

    pub fn with_labels(
        actions: Vec<RatMatrix>,
        labels_q: Vec<String>,
        labels_a: Vec<String>,
    ) -> Result<Self, GroupError> {
        let k = actions.len();
        assert!(k >= 1, "need at least one Q-generator");
        let n = actions[0].dim();
        assert!(n >= 1, "translation part must have positive dimension");
        assert_eq!(labels_q.len(), k);
        assert_eq!(labels_a.len(), n);
        for (i, m) in actions.iter().enumerate() {
            if m.dim() != n {
                return Err(GroupError::ActionDimension {
                    index: i,
                    found: m.dim(),
                    expected: n,
                });
            }
        }
        let mut inverses = Vec::with_capacity(k);
        for (i, m) in actions.iter().enumerate() {
            match m.inverse() {
                Ok(inv) => inverses.push(inv),
                Err(MatrixError::Singular) => return Err(GroupError::SingularAction(i)),
                Err(e) => return Err(e.into()),
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if actions[i].mul(&actions[j]) != actions[j].mul(&actions[i]) {
                    return Err(GroupError::NotCommuting(i, j));
                }
            }
        }

        let mut report = ValidationReport::default();
        // Stable-letter scalar: clears every action; for an integral action
        // the denominators live in its inverse, so clear those instead.
        let mut clearing = BigInt::one();
        for (i, m) in actions.iter().enumerate() {
            if m.is_integral() {
                clearing = clearing.lcm(&inverses[i].denominator_lcm());
            } else {
                clearing = clearing.lcm(&m.denominator_lcm());
            }
        }

        let integral = actions.iter().all(|m| m.is_integral());
        let forward_clearing = actions
            .iter()
            .fold(BigInt::one(), |acc, m| acc.lcm(&m.denominator_lcm()));
        let model: Vec<RatMatrix> = if integral {
            actions.clone()
        } else {
            let s = Rational::from_integer(forward_clearing.clone());
            let mut v: Vec<RatMatrix> = actions.iter().map(|m| m.scale(&s)).collect();
            v.push(RatMatrix::scalar(n, &s));
            v
        };
        if !integral {
            report.warnings.push(format!(
                "non-integral action, m={clearing}: collecting constants use the integral model scaled by {forward_clearing}"
            ));
        }
        let mut k1 = BigUint::one();
        let mut k2 = BigUint::one();
        let mut k3 = BigUint::one();
        for (idx, w) in model.iter().enumerate() {
            debug_assert!(w.is_integral());
            let det = w.determinant();
            debug_assert!(det.is_integer());
            let n_i = det.to_integer();
            let adj = w.inverse().expect("model matrix invertible").scale(&det);
            debug_assert!(adj.is_integral());
            let norm_adj = adj.operator_norm();
            let norm_w = w.operator_norm();
            report.notes.push(format!(
                "model action {}: det={}, |N|={}, |M|={}",
                idx + 1,
                n_i,
                norm_adj,
                norm_w
            ));
            k1 = k1.max(norm_adj.to_integer().magnitude().clone());
            k2 = k2.max(norm_w.to_integer().magnitude().clone());
            k3 = k3.max(n_i.magnitude().clone());
        }
        let base = &k1 * &k2 * &k2 * &k3;
        let constants = CollectingConstants {
            k1,
            k2,
            k3,
            base,
            sigma_factor: if integral { 1 } else { 2 },
        };
        report.notes.push(format!("clearing integer m={clearing}"));

        Ok(Self {
            k,
            n,
            actions,
            inverses,
            labels_q,
            labels_a,
            clearing,
            constants,
            report,
        })
    }

    pub fn q_rank(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn action(&self, i: usize) -> &RatMatrix {
        &self.actions[i]
    }

    pub fn action_inverse(&self, i: usize) -> &RatMatrix {
        &self.inverses[i]
    }

    pub fn labels_q(&self) -> &[String] {
        &self.labels_q
    }

    pub fn labels_a(&self) -> &[String] {
        &self.labels_a
    }

    /// The stable-letter scalar used by the HNN embedding.
    pub fn clearing_integer(&self) -> &BigInt {
        &self.clearing
    }

    pub fn collecting_constants(&self) -> &CollectingConstants {
        &self.constants
    }

    pub fn validation_report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn is_integral(&self) -> bool {
        self.actions.iter().all(|m| m.is_integral())
    }

    /// Number of letters in the generating system (both signs counted once).
    pub fn alphabet_size(&self) -> usize {
        self.k + self.n
    }

    pub fn identity(&self) -> Element {
        Element::identity(self.k, self.n)
    }

    /// All signed letters, in the canonical order used by the BFS oracle.
    pub fn letters(&self) -> Vec<Letter> {
        let mut v = Vec::with_capacity(2 * (self.k + self.n));
        for i in 0..self.k {
            v.push(Letter::q(i));
            v.push(Letter::q_inv(i));
        }
        for j in 0..self.n {
            v.push(Letter::a(j));
            v.push(Letter::a_inv(j));
        }
        v
    }

    /// `M^e = prod_i M_i^{e_i}` applied to a vector.
    pub fn act(&self, e: &[i64], v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (i, &ei) in e.iter().enumerate() {
            if ei == 0 {
                continue;
            }
            let m = if ei > 0 {
                self.actions[i].pow(ei).expect("invertible")
            } else {
                self.inverses[i].pow(-ei).expect("invertible")
            };
            out = m.mul_vec(&out);
        }
        out
    }

    /// Normal-form product: `(e, b) * (e', b') = (e + e', M^{e'} b + b')`.
    pub fn multiply(&self, g: &Element, h: &Element) -> Element {
        assert_eq!(g.exps.len(), self.k);
        assert_eq!(h.exps.len(), self.k);
        let exps: Vec<i64> = g.exps.iter().zip(&h.exps).map(|(a, b)| a + b).collect();
        let moved = self.act(&h.exps, &g.trans);
        let trans: Vec<Rational> = moved.iter().zip(&h.trans).map(|(a, b)| a + b).collect();
        Element { exps, trans }
    }

    /// `(e, b)^{-1} = (-e, -M^{-e} b)`.
    pub fn invert(&self, g: &Element) -> Element {
        let exps: Vec<i64> = g.exps.iter().map(|e| -e).collect();
        let trans: Vec<Rational> = self.act(&exps, &g.trans).iter().map(|x| -x).collect();
        Element { exps, trans }
    }

    /// Right-multiply a normal form by a single letter. This is the BFS hot
    /// path, so only one matrix-vector product is done.
    pub fn apply_letter(&self, g: &Element, l: Letter) -> Result<Element, GroupError> {
        let mut out = g.clone();
        match l.gen {
            Gen::Q(i) => {
                if i >= self.k {
                    return Err(GroupError::UnknownLetter { index: i });
                }
                let m = if l.inv {
                    &self.inverses[i]
                } else {
                    &self.actions[i]
                };
                out.exps[i] += if l.inv { -1 } else { 1 };
                out.trans = m.mul_vec(&out.trans);
            }
            Gen::A(j) => {
                if j >= self.n {
                    return Err(GroupError::UnknownLetter { index: j });
                }
                if l.inv {
                    out.trans[j] -= Rational::one();
                } else {
                    out.trans[j] += Rational::one();
                }
            }
        }
        Ok(out)
    }

    /// Evaluate a word by collecting, returning the normal form and the
    /// letter-count certificate. The certified bound
    /// `mu_E(b) <= (K1 K2^2 K3)^{f * sigma} * alpha` holds exactly, where the
    /// constants come from the integral action model and `f` is its
    /// sigma factor.
    pub fn evaluate(&self, w: &Word) -> Result<(Element, LengthCertificate), GroupError> {
        let mut g = self.identity();
        let mut sigma = vec![0u64; self.k];
        let mut alpha = vec![0u64; self.n];
        for &l in &w.0 {
            g = self.apply_letter(&g, l)?;
            match l.gen {
                Gen::Q(i) => sigma[i] += 1,
                Gen::A(j) => alpha[j] += 1,
            }
        }
        let sigma_total: u64 = sigma.iter().sum();
        let alpha_total: u64 = alpha.iter().sum();
        let exponent = sigma_total * self.constants.sigma_factor as u64;
        let mut mu_bound = self
            .constants
            .base
            .pow(u32::try_from(exponent).expect("exponent fits u32"));
        if alpha_total > 0 {
            mu_bound *= BigUint::from(alpha_total);
        }
        Ok((
            g,
            LengthCertificate {
                sigma,
                alpha,
                mu_bound,
            },
        ))
    }

    /// Split `g = q * b` into the Q-part exponents and the translation part.
    /// The parts recompose exactly under `multiply`.
    pub fn semidirect_split(&self, g: &Element) -> (Vec<i64>, Element) {
        (
            g.exps.clone(),
            Element {
                exps: vec![0; self.k],
                trans: g.trans.clone(),
            },
        )
    }

    /// Element of the Q-part alone, as a group element.
    pub fn q_part_element(&self, g: &Element) -> Element {
        Element {
            exps: g.exps.clone(),
            trans: vec![Rational::zero(); self.n],
        }
    }

    /// Ascending-HNN target: one extra Q-generator acting as the scalar `m`.
    /// The identity on normal forms (exponents padded by 0) embeds the
    /// original group homomorphically.
    pub fn hnn_embed(&self) -> HnnEmbedding {
        let m = self.clearing.clone();
        let degenerate = m.is_one();
        let mut actions = self.actions.clone();
        actions.push(RatMatrix::scalar(
            self.n,
            &Rational::from_integer(m.clone()),
        ));
        let mut labels_q = self.labels_q.clone();
        labels_q.push("u".into());
        let mut spec = Self::with_labels(actions, labels_q, self.labels_a.clone())
            .expect("embedding target is valid");
        if degenerate {
            spec.report
                .warnings
                .push("clearing integer is 1: the stable letter acts trivially".into());
        }
        HnnEmbedding {
            spec,
            m,
            degenerate,
        }
    }

    /// Pad an element of this spec into the HNN target.
    pub fn embed_element(&self, g: &Element) -> Element {
        let mut exps = g.exps.clone();
        exps.push(0);
        Element {
            exps,
            trans: g.trans.clone(),
        }
    }

    /// Hash of the structural data, pinning cache files to their spec.
    pub fn structural_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"metadist-group-v1");
        h.update((self.k as u64).to_le_bytes());
        h.update((self.n as u64).to_le_bytes());
        for m in &self.actions {
            for x in m.entries() {
                h.update(x.numer().to_signed_bytes_le());
                h.update(b"/");
                h.update(x.denom().to_signed_bytes_le());
                h.update(b";");
            }
        }
        h.finalize().into()
    }

    /// Verify `mu_E(b) <= certificate bound` for a word, exactly.
    pub fn certificate_holds(&self, w: &Word) -> Result<bool, GroupError> {
        let (g, cert) = self.evaluate(w)?;
        Ok(mu_e(&g.trans) <= cert.mu_bound)
    }
}

/// Result of the HNN construction.
#[derive(Debug, Clone)]
pub struct HnnEmbedding {
    pub spec: GroupSpec,
    pub m: BigInt,
    pub degenerate: bool,
}

/// The solvable Baumslag-Solitar group BS(1, q) as a spec.
pub fn bs1q(q: i64) -> GroupSpec {
    GroupSpec::new(vec![RatMatrix::scalar(
        1,
        &Rational::from_integer(BigInt::from(q)),
    )])
    .expect("BS(1,q) is valid")
}

/// Rank-1 spec with `t` acting by multiplication with `lambda`.
pub fn rank1(lambda: Rational) -> Result<GroupSpec, GroupError> {
    GroupSpec::new(vec![RatMatrix::scalar(1, &lambda)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn diag_spec() -> GroupSpec {
        let m1 = RatMatrix::from_rows(vec![
            vec![rat_int(2), rat_int(0)],
            vec![rat_int(0), rat_int(3)],
        ])
        .unwrap();
        let m2 = RatMatrix::from_rows(vec![
            vec![rat_int(3), rat_int(0)],
            vec![rat_int(0), rat_int(2)],
        ])
        .unwrap();
        GroupSpec::new(vec![m1, m2]).unwrap()
    }

    fn random_element(rng: &mut ChaCha8Rng, spec: &GroupSpec) -> Element {
        let exps: Vec<i64> = (0..spec.q_rank()).map(|_| rng.gen_range(-3..4)).collect();
        let trans: Vec<Rational> = (0..spec.dim())
            .map(|_| rat(rng.gen_range(-20..21), [1, 2, 3, 6][rng.gen_range(0..4)]))
            .collect();
        Element { exps, trans }
    }

    #[test]
    fn validation_examples() {
        let bs = bs1q(2);
        assert_eq!(bs.clearing_integer(), &BigInt::from(2));
        let c = bs.collecting_constants();
        assert_eq!(c.k1, BigUint::from(1u32));
        assert_eq!(c.k2, BigUint::from(2u32));
        assert_eq!(c.k3, BigUint::from(2u32));

        let d = diag_spec();
        assert_eq!(d.clearing_integer(), &BigInt::from(6));

        let singular = RatMatrix::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(0)],
        ])
        .unwrap();
        assert!(matches!(
            GroupSpec::new(vec![singular]),
            Err(GroupError::SingularAction(0))
        ));

        let nc1 = RatMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(1)],
            vec![rat_int(0), rat_int(1)],
        ])
        .unwrap();
        let nc2 = RatMatrix::from_rows(vec![
            vec![rat_int(1), rat_int(0)],
            vec![rat_int(1), rat_int(1)],
        ])
        .unwrap();
        assert!(matches!(
            GroupSpec::new(vec![nc1, nc2]),
            Err(GroupError::NotCommuting(0, 1))
        ));
    }

    #[test]
    fn lambda32_clearing_and_warning() {
        let spec = rank1(rat(3, 2)).unwrap();
        assert_eq!(spec.clearing_integer(), &BigInt::from(2));
        assert!(!spec.validation_report().warnings.is_empty());
    }

    #[test]
    fn multiply_reads_commutation_correctly() {
        // In BS(1,2): a * t = t * a^2, so (0|1)*(1|0) = (1|2).
        let bs = bs1q(2);
        let a = Element {
            exps: vec![0],
            trans: vec![rat_int(1)],
        };
        let t = Element {
            exps: vec![1],
            trans: vec![rat_int(0)],
        };
        let prod = bs.multiply(&a, &t);
        assert_eq!(prod.exps, vec![1]);
        assert_eq!(prod.trans, vec![rat_int(2)]);

        // and the other order stays (1 | 1)
        let prod2 = bs.multiply(&t, &a);
        assert_eq!(prod2.trans, vec![rat_int(1)]);
    }

    #[test]
    fn free_reduction_oracle_on_bs12() {
        // both sides of a*t = t*a^2 evaluate to the same normal form
        let bs = bs1q(2);
        let lhs = Word(vec![Letter::a(0), Letter::q(0)]);
        let rhs = Word(vec![Letter::q(0), Letter::a(0), Letter::a(0)]);
        assert_eq!(bs.evaluate(&lhs).unwrap().0, bs.evaluate(&rhs).unwrap().0);
    }

    #[test]
    fn inverse_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for spec in [bs1q(2), rank1(rat(3, 2)).unwrap(), diag_spec()] {
            for _ in 0..20 {
                let g = random_element(&mut rng, &spec);
                let gi = spec.invert(&g);
                assert!(spec.multiply(&g, &gi).is_identity());
                assert!(spec.multiply(&gi, &g).is_identity());
            }
        }
    }

    #[test]
    fn identity_is_neutral() {
        let spec = diag_spec();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_element(&mut rng, &spec);
        assert_eq!(spec.multiply(&spec.identity(), &g), g);
        assert_eq!(spec.multiply(&g, &spec.identity()), g);
    }

    #[test]
    fn evaluate_collects() {
        let bs = bs1q(2);
        // t^-1 a t = a^2
        let w = Word(vec![Letter::q_inv(0), Letter::a(0), Letter::q(0)]);
        let (g, cert) = bs.evaluate(&w).unwrap();
        assert_eq!(g.exps, vec![0]);
        assert_eq!(g.trans, vec![rat_int(2)]);
        assert_eq!(cert.sigma_total(), 2);
        assert_eq!(cert.alpha_total(), 1);
        assert_eq!(cert.weighted_length(), 5);

        let (id, cert0) = bs.evaluate(&Word::empty()).unwrap();
        assert!(id.is_identity());
        assert_eq!(cert0.mu_bound, BigUint::one());

        // a a a in a rank-1 lambda = 3/2 spec
        let l32 = rank1(rat(3, 2)).unwrap();
        let w3 = Word(vec![Letter::a(0); 3]);
        let (g3, cert3) = l32.evaluate(&w3).unwrap();
        assert_eq!(g3.trans, vec![rat_int(3)]);
        assert_eq!(cert3.alpha_total(), 3);
        assert_eq!(cert3.sigma_total(), 0);
        assert_eq!(cert3.mu_bound, BigUint::from(3u32));
    }

    #[test]
    fn evaluate_matches_multiply_on_concatenation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for spec in [bs1q(2), rank1(rat(3, 2)).unwrap(), diag_spec()] {
            let letters = spec.letters();
            for _ in 0..30 {
                let w1 = Word(
                    (0..rng.gen_range(0..8))
                        .map(|_| letters[rng.gen_range(0..letters.len())])
                        .collect::<Vec<_>>(),
                );
                let w2 = Word(
                    (0..rng.gen_range(0..8))
                        .map(|_| letters[rng.gen_range(0..letters.len())])
                        .collect::<Vec<_>>(),
                );
                let (g1, _) = spec.evaluate(&w1).unwrap();
                let (g2, _) = spec.evaluate(&w2).unwrap();
                let (g12, _) = spec.evaluate(&w1.concat(&w2)).unwrap();
                assert_eq!(g12, spec.multiply(&g1, &g2));
            }
        }
    }

    #[test]
    fn certificate_bound_on_fuzzed_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for spec in [bs1q(2), rank1(rat(3, 2)).unwrap(), diag_spec()] {
            let letters = spec.letters();
            for _ in 0..400 {
                let w = Word(
                    (0..rng.gen_range(0..25))
                        .map(|_| letters[rng.gen_range(0..letters.len())])
                        .collect::<Vec<_>>(),
                );
                assert!(spec.certificate_holds(&w).unwrap());
            }
        }
    }

    #[test]
    fn semidirect_split_recomposes() {
        let bs = bs1q(2);
        let g = Element {
            exps: vec![2],
            trans: vec![rat(5, 6)],
        };
        let (q, n) = bs.semidirect_split(&g);
        assert_eq!(q, vec![2]);
        assert_eq!(n.trans, vec![rat(5, 6)]);
        let qe = bs.q_part_element(&g);
        assert_eq!(bs.multiply(&qe, &n), g);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let g = random_element(&mut rng, &bs);
            let (_, n) = bs.semidirect_split(&g);
            assert_eq!(bs.multiply(&bs.q_part_element(&g), &n), g);
        }
    }

    #[test]
    fn hnn_embedding_examples() {
        // lambda = 3/2: stable letter acts by the forward-clearing scalar 2
        let l32 = rank1(rat(3, 2)).unwrap();
        let emb = l32.hnn_embed();
        assert_eq!(emb.m, BigInt::from(2));
        assert_eq!(emb.spec.q_rank(), 2);
        assert_eq!(emb.spec.action(0), &RatMatrix::scalar(1, &rat(3, 2)));
        assert_eq!(emb.spec.action(1), &RatMatrix::scalar(1, &rat_int(2)));
        assert!(!emb.degenerate);

        // BS(1,2): already integral, stable letter doubles
        let bs = bs1q(2);
        let emb2 = bs.hnn_embed();
        assert_eq!(emb2.m, BigInt::from(2));
        assert_eq!(emb2.spec.action(1), &RatMatrix::scalar(1, &rat_int(2)));

        // diagonal example: m = lcm of inverse denominators
        let emb3 = diag_spec().hnn_embed();
        assert_eq!(emb3.m, BigInt::from(6));
        assert_eq!(emb3.spec.action(2), &RatMatrix::scalar(2, &rat_int(6)));

        // identity action is degenerate
        let triv = GroupSpec::new(vec![RatMatrix::identity(1)]).unwrap();
        assert!(triv.hnn_embed().degenerate);
    }

    #[test]
    fn hnn_embedding_is_homomorphic() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for spec in [bs1q(2), rank1(rat(3, 2)).unwrap(), diag_spec()] {
            let emb = spec.hnn_embed();
            for _ in 0..20 {
                let g = random_element(&mut rng, &spec);
                let h = random_element(&mut rng, &spec);
                let lhs = spec.embed_element(&spec.multiply(&g, &h));
                let rhs = emb
                    .spec
                    .multiply(&spec.embed_element(&g), &spec.embed_element(&h));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn unknown_letter_rejected() {
        let bs = bs1q(2);
        let w = Word(vec![Letter::a(3)]);
        assert!(matches!(
            bs.evaluate(&w),
            Err(GroupError::UnknownLetter { index: 3 })
        ));
    }
}
