//! TOML configuration: group actions as matrices of `"p/q"` strings, an
//! optional number ring, and default experiment parameters.

use anyhow::{anyhow, bail, Context, Result};
use metadist_core::group::GroupSpec;
use metadist_core::matrix::RatMatrix;
use metadist_core::poly::IPoly;
use metadist_core::rational::{parse_rational, Rational};
use metadist_core::ring::{RingElement, RingSpec};
use num_bigint::BigInt;
use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub group: GroupConfig,
    pub ring: Option<RingConfig>,
    #[serde(default)]
    pub params: Params,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupConfig {
    /// Row-major matrices; entries are `"p"` or `"p/q"` strings.
    pub actions: Vec<Vec<Vec<String>>>,
    pub labels_q: Option<Vec<String>>,
    pub labels_a: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    /// Monic integer polynomial, ascending coefficients.
    pub polynomial: Vec<i64>,
    /// Numerator and denominator of lambda, as ring elements.
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    /// Optional manual Bezout witness, verified exactly on load.
    pub witness_u: Option<Vec<i64>>,
    pub witness_v: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub radius: u32,
    pub seed: u64,
    pub node_limit: usize,
    /// Working precision in bits for the numeric projector work.
    pub precision: u32,
    /// Sample count for fuzz-style experiments.
    pub fuzz: usize,
    /// Random word length for the certificate experiment.
    pub word_length: usize,
    /// Envelope-fit multiplier grid, `"p/q"` strings.
    pub multiplier_grid: Vec<String>,
    pub exponent_bound: u32,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            radius: 10,
            seed: 421,
            node_limit: metadist_core::ball::DEFAULT_NODE_LIMIT,
            precision: 256,
            fuzz: 10_000,
            word_length: 40,
            multiplier_grid: [
                "1/4", "1/2", "3/4", "1", "3/2", "2", "5/2", "3", "4", "6", "8",
            ]
            .map(str::to_string)
            .to_vec(),
            exponent_bound: 3,
        }
    }
}

impl Params {
    pub fn grid(&self) -> Result<Vec<Rational>> {
        self.multiplier_grid
            .iter()
            .map(|s| parse_rational(s).map_err(|e| anyhow!("bad grid entry: {e}")))
            .collect()
    }
}

/// A loaded ring together with lambda's parts and a verified witness.
pub struct RingSetup {
    pub ring: RingSpec,
    pub x: RingElement,
    pub y: RingElement,
    pub witness_u: RingElement,
    pub witness_v: RingElement,
}

pub fn load(path: &Path) -> Result<(Config, Vec<u8>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let text = std::str::from_utf8(&bytes).context("config is not utf-8")?;
    let config: Config = toml::from_str(text).context("parsing config")?;
    Ok((config, bytes))
}

pub fn build_group(cfg: &GroupConfig) -> Result<GroupSpec> {
    if cfg.actions.is_empty() {
        bail!("at least one action matrix is required");
    }
    let mut actions = Vec::with_capacity(cfg.actions.len());
    for (idx, rows) in cfg.actions.iter().enumerate() {
        let mut parsed = Vec::with_capacity(rows.len());
        for (r, row) in rows.iter().enumerate() {
            let entries: Result<Vec<Rational>> = row
                .iter()
                .map(|s| {
                    parse_rational(s)
                        .map_err(|e| anyhow!("action {idx}, row {r}: {e}"))
                })
                .collect();
            parsed.push(entries?);
        }
        let m = RatMatrix::from_rows(parsed)
            .map_err(|e| anyhow!("action {}: {e}", idx + 1))?;
        actions.push(m);
    }
    let spec = match (&cfg.labels_q, &cfg.labels_a) {
        (Some(q), Some(a)) => GroupSpec::with_labels(actions, q.clone(), a.clone()),
        _ => GroupSpec::new(actions),
    }
    .map_err(|e| anyhow!("invalid group: {e}"))?;
    Ok(spec)
}

pub fn build_ring(cfg: &RingConfig) -> Result<RingSetup> {
    let poly = IPoly::new(cfg.polynomial.iter().map(|&c| BigInt::from(c)).collect());
    let ring = RingSpec::new(poly).map_err(|e| anyhow!("invalid ring: {e}"))?;
    let n = ring.degree();
    let to_elem = |v: &[i64], what: &str| -> Result<RingElement> {
        if v.len() != n {
            bail!("{what} must have {n} coordinates");
        }
        Ok(v.iter().map(|&c| BigInt::from(c)).collect())
    };
    let x = to_elem(&cfg.x, "x")?;
    let y = to_elem(&cfg.y, "y")?;
    let (witness_u, witness_v) = match (&cfg.witness_u, &cfg.witness_v) {
        (Some(u), Some(v)) => (to_elem(u, "witness_u")?, to_elem(v, "witness_v")?),
        (None, None) => ring
            .coprimality_witness(&x, &y)
            .ok_or_else(|| anyhow!("no witness supplied and the norm test found none"))?,
        _ => bail!("witness_u and witness_v must be supplied together"),
    };
    if !ring.verify_witness(&x, &y, &witness_u, &witness_v) {
        bail!("Bezout witness does not verify: u*x + v*y != 1");
    }
    Ok(RingSetup {
        ring,
        x,
        y,
        witness_u,
        witness_v,
    })
}

/// The group realizing multiplication by `lambda = x/y` on the ring.
pub fn ring_group(setup: &RingSetup) -> Result<GroupSpec> {
    let xf = setup.ring.ring_to_field(&setup.x);
    let yf = setup.ring.ring_to_field(&setup.y);
    let inv = setup
        .ring
        .inverse(&yf)
        .map_err(|e| anyhow!("y is not invertible: {e}"))?;
    let lambda = setup.ring.mul(&xf, &inv);
    let m = setup.ring.mult_matrix(&lambda);
    GroupSpec::new(vec![m]).map_err(|e| anyhow!("lambda action invalid: {e}"))
}
