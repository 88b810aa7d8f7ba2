//! Exact data on how well the single-wall sector accounts for `F^(k) − k!`.

use num_rational::BigRational;
use serde::Serialize;

use super::{ratio_to_f64, single_wall_bound_k};
use crate::circuit_lattice::{
    build_geometry, frame_potential_transfer, EvalOptions, FrameValue, SpatialBoundary,
};
use crate::error::{Error, Result};
use crate::permutations::factorial;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvidenceRow {
    pub n: usize,
    pub q: u64,
    pub t: usize,
    pub k: usize,
    /// Exact `F^(k)` as `"p/q"`.
    pub frame_potential: String,
    /// `F^(k) − k!`.
    pub excess: f64,
    /// `k!` times the single-wall sector.
    pub single_wall: f64,
    /// `excess / single_wall`; values at or below 1 are consistent with single walls
    /// dominating.
    pub ratio: f64,
}

/// One exact evaluation on the open brickwork, compared with the single-wall truncation.
pub fn conjecture_evidence(n: usize, q: u64, t: usize, k: usize) -> Result<EvidenceRow> {
    if k < 2 || t < 2 || n < 4 {
        return Err(Error::InvalidArgument(format!(
            "evidence needs k >= 2, t >= 2, n >= 4; got k = {k}, t = {t}, n = {n}"
        )));
    }
    let geom = build_geometry(n, q, t, SpatialBoundary::Open)?;
    let res = frame_potential_transfer(&geom, k, &EvalOptions::default())?;
    let FrameValue::Exact(f) = res.value else {
        unreachable!("exact backend requested")
    };
    let excess = ratio_to_f64(&(&f - BigRational::from_integer(factorial(k).into())));
    let single_wall = factorial(k) as f64 * single_wall_bound_k(n, q, t, k)?;
    Ok(EvidenceRow {
        n,
        q,
        t,
        k,
        frame_potential: f.to_string(),
        excess,
        single_wall,
        ratio: excess / single_wall,
    })
}

/// Rows for every `(q, t)` pair, `q` outermost.
pub fn conjecture_table(n: usize, qs: &[u64], ts: &[usize], k: usize) -> Result<Vec<EvidenceRow>> {
    let mut rows = Vec::new();
    for &q in qs {
        for &t in ts {
            rows.push(conjecture_evidence(n, q, t, k)?);
        }
    }
    Ok(rows)
}
