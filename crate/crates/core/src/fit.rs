//! Affine envelope fitting over finite sample sets.
//!
//! A `QuasiFit` records constants `(M, C)` with `f <= M*g + C` over every
//! recorded sample, the finite-data carrier for quasi-equivalence claims.

use crate::rational::{format_rational, Rational};
use num_traits::Zero;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Constants of an affine envelope `f <= M*g + C`, with `C` minimal for the
/// chosen `M` over the sample set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiFit {
    pub multiplier: Rational,
    pub offset: Rational,
}

impl Serialize for QuasiFit {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("QuasiFit", 2)?;
        s.serialize_field("multiplier", &format_rational(&self.multiplier))?;
        s.serialize_field("offset", &format_rational(&self.offset))?;
        s.end()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FitError {
    #[error("empty sample set")]
    EmptySamples,
    #[error("empty multiplier grid")]
    EmptyGrid,
}

/// Pick the grid multiplier minimizing the offset `C = max(f - M*g, 0)` over
/// the samples; ties broken by the smaller multiplier.
pub fn envelope_fit(
    samples: &[(Rational, Rational)],
    grid: &[Rational],
) -> Result<QuasiFit, FitError> {
    if samples.is_empty() {
        return Err(FitError::EmptySamples);
    }
    if grid.is_empty() {
        return Err(FitError::EmptyGrid);
    }
    let mut best: Option<(Rational, Rational)> = None;
    for m in grid {
        let mut c = Rational::zero();
        for (f, g) in samples {
            let gap = f - m * g;
            if gap > c {
                c = gap;
            }
        }
        let better = match &best {
            None => true,
            Some((bc, bm)) => c < *bc || (c == *bc && m < bm),
        };
        if better {
            best = Some((c, m.clone()));
        }
    }
    let (offset, multiplier) = best.unwrap();
    Ok(QuasiFit { multiplier, offset })
}
