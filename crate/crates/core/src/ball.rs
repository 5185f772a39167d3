//! Exact geodesic lengths via breadth-first enumeration of Cayley-graph
//! balls.
//!
//! A completed `Ball` knows the exact word length of every element within
//! its radius; absence from the table certifies length greater than the
//! radius. Layers may be expanded in parallel, but frontier order is
//! canonicalized so the table contents never depend on thread count.

use crate::group::{Element, GroupSpec, Word};
use num_bigint::{BigInt, Sign};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

const CACHE_MAGIC: &[u8; 8] = b"MDBALL01";

#[derive(Debug, Error)]
pub enum BallError {
    #[error("node limit {limit} exceeded; last completed radius {last_completed}")]
    NodeLimit { last_completed: u32, limit: usize },
    #[error("element is not inside the ball")]
    Absent,
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    CacheFormat(String),
    #[error("cache was built for a different spec or radius")]
    CacheMismatch,
}

/// Default cap on the number of stored elements.
pub const DEFAULT_NODE_LIMIT: usize = 20_000_000;

/// A completed radius-R ball: exact geodesic length per element.
#[derive(Debug, Clone)]
pub struct Ball {
    spec: GroupSpec,
    radius: u32,
    table: HashMap<Element, u32>,
    spheres: Vec<u64>,
}

impl Ball {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Sphere sizes by radius, `spheres[r] = #{g : |g| = r}`.
    pub fn sphere_sizes(&self) -> &[u64] {
        &self.spheres
    }

    /// Exact geodesic length, or `None` when `|g| > radius`.
    pub fn word_length(&self, g: &Element) -> Option<u32> {
        self.table.get(g).copied()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.table.contains_key(g)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, u32)> {
        self.table.iter().map(|(g, &l)| (g, l))
    }

    /// Elements sorted by normal-form key, for deterministic reporting.
    pub fn sorted_elements(&self) -> Vec<(&Element, u32)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// A geodesic word for an in-ball element: letters are chosen in the
    /// canonical alphabet order while walking down the length levels, so the
    /// result is deterministic and `evaluate(word) = g` with
    /// `len(word) = word_length(g)`.
    pub fn geodesic_word(&self, g: &Element) -> Result<Word, BallError> {
        let mut len = *self.table.get(g).ok_or(BallError::Absent)?;
        let letters = self.spec.letters();
        let mut cur = g.clone();
        let mut rev = Vec::with_capacity(len as usize);
        'walk: while len > 0 {
            for &l in &letters {
                let prev = self
                    .spec
                    .apply_letter(&cur, l.inverse())
                    .expect("letters are in range");
                if self.table.get(&prev) == Some(&(len - 1)) {
                    rev.push(l);
                    cur = prev;
                    len -= 1;
                    continue 'walk;
                }
            }
            unreachable!("ball table is closed under shortening");
        }
        rev.reverse();
        Ok(Word(rev))
    }

    /// Write the `(element, length)` table in the versioned binary layout:
    ///
    /// ```text
    /// magic "MDBALL01" | spec hash (32 bytes) | radius u32 LE | count u64 LE
    /// then per record, sorted by normal form:
    ///   k * (exponent i64 LE)
    ///   n * (numer: u32 LE byte length + signed LE bytes,
    ///        denom: u32 LE byte length + signed LE bytes)
    ///   length u32 LE
    /// ```
    pub fn write_cache(&self, path: &Path) -> Result<(), BallError> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(CACHE_MAGIC)?;
        f.write_all(&self.spec.structural_hash())?;
        f.write_all(&self.radius.to_le_bytes())?;
        f.write_all(&(self.table.len() as u64).to_le_bytes())?;
        for (g, l) in self.sorted_elements() {
            for &e in &g.exps {
                f.write_all(&e.to_le_bytes())?;
            }
            for c in &g.trans {
                write_bigint(&mut f, c.numer())?;
                write_bigint(&mut f, c.denom())?;
            }
            f.write_all(&l.to_le_bytes())?;
        }
        f.flush()?;
        Ok(())
    }

    /// Load a cached table, verifying it belongs to this spec.
    pub fn read_cache(spec: &GroupSpec, path: &Path) -> Result<Self, BallError> {
        let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 8];
        f.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(BallError::CacheFormat("bad magic".into()));
        }
        let mut hash = [0u8; 32];
        f.read_exact(&mut hash)?;
        if hash != spec.structural_hash() {
            return Err(BallError::CacheMismatch);
        }
        let radius = read_u32(&mut f)?;
        let count = read_u64(&mut f)? as usize;
        let k = spec.q_rank();
        let n = spec.dim();
        let mut table = HashMap::with_capacity(count);
        let mut spheres = vec![0u64; radius as usize + 1];
        for _ in 0..count {
            let mut exps = Vec::with_capacity(k);
            for _ in 0..k {
                let mut b = [0u8; 8];
                f.read_exact(&mut b)?;
                exps.push(i64::from_le_bytes(b));
            }
            let mut trans = Vec::with_capacity(n);
            for _ in 0..n {
                let numer = read_bigint(&mut f)?;
                let denom = read_bigint(&mut f)?;
                if denom.sign() != Sign::Plus {
                    return Err(BallError::CacheFormat("nonpositive denominator".into()));
                }
                trans.push(crate::rational::Rational::new(numer, denom));
            }
            let l = read_u32(&mut f)?;
            if l > radius {
                return Err(BallError::CacheFormat("length exceeds radius".into()));
            }
            spheres[l as usize] += 1;
            table.insert(Element { exps, trans }, l);
        }
        Ok(Self {
            spec: spec.clone(),
            radius,
            table,
            spheres,
        })
    }
}

fn write_bigint(f: &mut impl Write, x: &BigInt) -> std::io::Result<()> {
    let bytes = x.to_signed_bytes_le();
    f.write_all(&(bytes.len() as u32).to_le_bytes())?;
    f.write_all(&bytes)
}

fn read_bigint(f: &mut impl Read) -> Result<BigInt, BallError> {
    let len = read_u32(f)? as usize;
    if len > 1 << 20 {
        return Err(BallError::CacheFormat("oversized integer".into()));
    }
    let mut buf = vec![0u8; len];
    f.read_exact(&mut buf)?;
    Ok(BigInt::from_signed_bytes_le(&buf))
}

fn read_u32(f: &mut impl Read) -> Result<u32, BallError> {
    let mut b = [0u8; 4];
    f.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(f: &mut impl Read) -> Result<u64, BallError> {
    let mut b = [0u8; 8];
    f.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

/// Breadth-first enumeration of the radius-R ball around the identity.
///
/// Each layer's frontier is sorted by normal-form key before expansion and
/// children are merged in that order, so the table (and every geodesic
/// derived from it) is identical across runs and thread counts.
pub fn bfs_ball(spec: &GroupSpec, radius: u32, node_limit: usize) -> Result<Ball, BallError> {
    assert!(node_limit >= 1);
    let letters = spec.letters();
    let mut table = HashMap::new();
    let mut spheres = vec![0u64; radius as usize + 1];
    let identity = spec.identity();
    table.insert(identity.clone(), 0u32);
    spheres[0] = 1;
    let mut frontier = vec![identity];
    for r in 1..=radius {
        frontier.sort_unstable();
        let children: Vec<Vec<Element>> = frontier
            .par_iter()
            .map(|g| {
                letters
                    .iter()
                    .map(|&l| spec.apply_letter(g, l).expect("letters are in range"))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for group in children {
            for child in group {
                if table.contains_key(&child) {
                    continue;
                }
                if table.len() >= node_limit {
                    return Err(BallError::NodeLimit {
                        last_completed: r - 1,
                        limit: node_limit,
                    });
                }
                table.insert(child.clone(), r);
                next.push(child);
            }
        }
        spheres[r as usize] = next.len() as u64;
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Ball {
        spec: spec.clone(),
        radius,
        table,
        spheres,
    })
}
