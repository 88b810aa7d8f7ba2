//! Closed-form frame-potential bounds, design depths, domain-wall counting, and the
//! single-wall evidence harness.
//!
//! Formulas are evaluated in the log domain so that `q^{2nk}` never overflows.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutations::factorial;

pub mod evidence;
pub mod walls;

pub use evidence::{conjecture_evidence, conjecture_table, EvidenceRow};
pub use walls::{
    c1_images, calibrate_images, count_walls_bruteforce, count_walls_dp, ImagesConvention,
    WallCountResult, WallMethod, CALIBRATED_IMAGES,
};

/// Gates in an even layer, `⌊n/2⌋`.
pub fn gates_per_layer(n: usize) -> usize {
    n / 2
}

/// Single-wall weight per layer at `k = 2`, `q/(q²+1)`.
pub fn wall_weight(q: f64) -> f64 {
    q / (q * q + 1.0)
}

/// `ln C(n, r)` via log-gamma sums; exact enough for bound evaluation.
fn ln_binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return f64::NEG_INFINITY;
    }
    let ln_fact = |m: usize| (1..=m).map(|i| (i as f64).ln()).sum::<f64>();
    ln_fact(n) - ln_fact(r) - ln_fact(n - r)
}

/// `ln(1 + e^x)` without overflow.
fn ln_1p_exp(x: f64) -> f64 {
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn check_nq(n: usize, q: u64) -> Result<()> {
    if n < 2 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 2 and q >= 2, got n = {n}, q = {q}"
        )));
    }
    Ok(())
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 < epsilon <= 1, got {eps}")));
    }
    Ok(())
}

/// `2(1 + (2q/(q²+1))^{2(t−1)})^{n_g−1}`: the second frame potential bounded by letting
/// every one of the `n_g − 1` wall positions carry all `2^{2(t−1)}` walks.
pub fn fp2_upper_bound(n: usize, q: u64, t: usize) -> Result<f64> {
    check_nq(n, q)?;
    if t == 0 {
        return Err(Error::InvalidArgument("the bound needs t >= 1".into()));
    }
    let q = q as f64;
    let x = 2.0 * (t - 1) as f64 * (2.0 * q / (q * q + 1.0)).ln();
    let walls = gates_per_layer(n).saturating_sub(1) as f64;
    Ok((2f64.ln() + walls * ln_1p_exp(x)).exp())
}

/// The tighter intermediate form `2(1 + C(2(t−1), t−1)(q/(q²+1))^{2(t−1)})^{n_g−1}`.
pub fn fp2_binomial_bound(n: usize, q: u64, t: usize) -> Result<f64> {
    check_nq(n, q)?;
    if t == 0 {
        return Err(Error::InvalidArgument("the bound needs t >= 1".into()));
    }
    let steps = 2 * (t - 1);
    let x = ln_binomial(steps, t - 1) + steps as f64 * wall_weight(q as f64).ln();
    let walls = gates_per_layer(n).saturating_sub(1) as f64;
    Ok((2f64.ln() + walls * ln_1p_exp(x)).exp())
}

/// `(n_g−1)·C(k,2)·C(2(t−1), t−1)·(q/(q²+1))^{2(t−1)}`, the weight of freely propagating
/// single walls.
pub fn single_wall_bound_k(n: usize, q: u64, t: usize, k: usize) -> Result<f64> {
    check_nq(n, q)?;
    if k < 2 || t == 0 {
        return Err(Error::InvalidArgument(format!("need k >= 2 and t >= 1, got k = {k}, t = {t}")));
    }
    let starts = gates_per_layer(n).saturating_sub(1);
    if starts == 0 {
        return Ok(0.0);
    }
    let steps = 2 * (t - 1);
    let pairs = (k * (k - 1) / 2) as f64;
    let ln = (starts as f64).ln()
        + pairs.ln()
        + ln_binomial(steps, t - 1)
        + steps as f64 * wall_weight(q as f64).ln();
    Ok(ln.exp())
}

/// `k!(1 + single-wall sector)`: the ground states plus the single-wall sector, a
/// truncation of the full expansion rather than a bound.
pub fn fp_k_leading(n: usize, q: u64, t: usize, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let kf = factorial(k) as f64;
    if k == 1 {
        check_nq(n, q)?;
        return Ok(1.0);
    }
    Ok(kf * (1.0 + single_wall_bound_k(n, q, t, k)?))
}

/// Diamond-distance bound `d^k √(F − k!)` with `d = q^n`.
pub fn epsilon_from_fp(f: f64, k: usize, n: usize, q: u64) -> Result<f64> {
    let kf = factorial(k) as f64;
    if f.is_nan() || f < kf {
        return Err(Error::InconsistentInput(format!(
            "frame potential {f} is below the Haar value {kf}"
        )));
    }
    Ok(epsilon_from_excess(f - kf, k, n, q))
}

/// [`epsilon_from_fp`] with the excess `F − k!` taken exactly, so tiny excesses survive.
pub fn epsilon_from_fp_exact(f: &BigRational, k: usize, n: usize, q: u64) -> Result<f64> {
    let excess = f - BigRational::from_integer(factorial(k).into());
    if excess.is_negative() {
        return Err(Error::InconsistentInput(format!(
            "frame potential {f} is below the Haar value {}",
            factorial(k)
        )));
    }
    Ok(epsilon_from_excess(ratio_to_f64(&excess), k, n, q))
}

fn epsilon_from_excess(excess: f64, k: usize, n: usize, q: u64) -> f64 {
    if excess == 0.0 {
        return 0.0;
    }
    ((n * k) as f64 * (q as f64).ln() + 0.5 * excess.ln()).exp()
}

/// Accurate `f64` of a rational even when both parts overflow `f64`.
pub fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64().filter(|x| x.is_finite() && *x != 0.0) {
        return x;
    }
    if num_traits::Zero::is_zero(r.numer()) {
        return 0.0;
    }
    let shift = r.numer().bits() as i64 - r.denom().bits() as i64;
    let scaled = if shift >= 0 {
        r / BigRational::from_integer(num_bigint::BigInt::from(1) << shift as usize)
    } else {
        r * BigRational::from_integer(num_bigint::BigInt::from(1) << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignDepthResult {
    /// Depth in circuit time steps.
    pub t: f64,
    pub n: usize,
    pub q: u64,
    pub k: usize,
    pub epsilon: f64,
    /// Prefactor `C` multiplying the logarithms.
    pub constant: f64,
}

/// `C = 1/ln((q²+1)/(2q))`.
pub fn t2_constant(q: u64) -> f64 {
    let q = q as f64;
    1.0 / ((q * q + 1.0) / (2.0 * q)).ln()
}

/// Coefficient of `n` in the 2-design depth, `2 C ln q`.
pub fn t2_linear_coefficient(q: u64) -> f64 {
    2.0 * (q as f64).ln() * t2_constant(q)
}

/// `t₂ = C(2n ln q + ln n + ln 1/ε)`.
pub fn t2_design_depth(n: usize, q: u64, epsilon: f64) -> Result<DesignDepthResult> {
    check_nq(n, q)?;
    check_epsilon(epsilon)?;
    let c = t2_constant(q);
    let t = c * (2.0 * n as f64 * (q as f64).ln() + (n as f64).ln() - epsilon.ln());
    Ok(DesignDepthResult {
        t,
        n,
        q,
        k: 2,
        epsilon,
        constant: c,
    })
}

/// `t_k = C(2nk ln q + k ln k + ln(nk²) + ln 1/ε)` with `C = 1/ln(q/2)`; only meaningful
/// for `q ≥ 3`.
pub fn tk_design_depth_largeq(n: usize, q: u64, k: usize, epsilon: f64) -> Result<DesignDepthResult> {
    check_nq(n, q)?;
    check_epsilon(epsilon)?;
    if q <= 2 {
        return Err(Error::InvalidArgument(format!(
            "the large-q constant 1/ln(q/2) needs q >= 3, got q = {q}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let (nf, kf, qf) = (n as f64, k as f64, q as f64);
    let c = 1.0 / (qf / 2.0).ln();
    let t = c * (2.0 * nf * kf * qf.ln() + kf * kf.ln() + (nf * kf * kf).ln() - epsilon.ln());
    Ok(DesignDepthResult {
        t,
        n,
        q,
        k,
        epsilon,
        constant: c,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundResult {
    /// `nk / (5 q⁴ ln(nk))`.
    pub t: f64,
    pub n: usize,
    pub q: u64,
    pub k: usize,
    /// Whether `k ≤ √d = q^{n/2}`; the bound is only established in that range
    /// (and for `ε ≤ 1/4`).
    pub k_within_range: bool,
}

/// Depth every ε-approximate `k`-design with `ε ≤ 1/4` must exceed.
pub fn tk_lower_bound(n: usize, q: u64, k: usize) -> Result<LowerBoundResult> {
    check_nq(n, q)?;
    let nk = (n * k) as f64;
    if n * k < 2 {
        return Err(Error::InvalidArgument("need nk >= 2".into()));
    }
    let t = nk / (5.0 * (q as f64).powi(4) * nk.ln());
    let k_within_range = (k as f64).ln() <= 0.5 * n as f64 * (q as f64).ln();
    Ok(LowerBoundResult {
        t,
        n,
        q,
        k,
        k_within_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp2_bound_examples() {
        let b = fp2_upper_bound(4, 2, 3).unwrap();
        assert!((b - 2.8192).abs() < 1e-12);
        assert!((fp2_upper_bound(4, 2, 200).unwrap() - 2.0).abs() < 1e-12);
        let mut prev = f64::INFINITY;
        for t in 1..30 {
            let b = fp2_upper_bound(10, 3, t).unwrap();
            assert!(b < prev);
            prev = b;
        }
        // no overflow for wide circuits
        assert!(fp2_upper_bound(200, 2, 2).unwrap().is_finite());
        for t in 1..10 {
            assert!(fp2_binomial_bound(8, 2, t).unwrap() <= fp2_upper_bound(8, 2, t).unwrap() + 1e-12);
        }
    }

    #[test]
    fn single_wall_examples() {
        let v = single_wall_bound_k(6, 2, 4, 3).unwrap();
        assert!((v - 2.0 * 3.0 * 20.0 * 0.4f64.powi(6)).abs() < 1e-12);
        assert!((v - 0.4915).abs() < 1e-4);
        let two = single_wall_bound_k(8, 3, 3, 2).unwrap();
        let four = single_wall_bound_k(8, 3, 3, 4).unwrap();
        assert!((four / two - 6.0).abs() < 1e-12);
        assert_eq!(fp_k_leading(6, 2, 3, 1).unwrap(), 1.0);
        assert!((fp_k_leading(6, 2, 60, 3).unwrap() - 6.0).abs() < 1e-9);
        // the k = 2 leading term is the one-wall term of the binomial bound
        let lead = fp_k_leading(4, 2, 3, 2).unwrap();
        let binom = fp2_binomial_bound(4, 2, 3).unwrap();
        assert!((lead - binom).abs() < 1e-12);
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_from_fp(2.0, 2, 4, 2).unwrap(), 0.0);
        assert!((epsilon_from_fp(2.25, 2, 2, 2).unwrap() - 8.0).abs() < 1e-12);
        assert!(matches!(epsilon_from_fp(1.5, 2, 2, 2), Err(Error::InconsistentInput(_))));
        let f = BigRational::new(9.into(), 4.into());
        assert!((epsilon_from_fp_exact(&f, 2, 2, 2).unwrap() - 8.0).abs() < 1e-12);
    }

    #[test]
    fn design_depths() {
        assert!((t2_linear_coefficient(2) - 6.213).abs() < 1e-3);
        let a = t2_design_depth(10, 2, 0.01).unwrap();
        let b = t2_design_depth(10, 2, 0.005).unwrap();
        assert!((b.t - a.t - a.constant * 2f64.ln()).abs() < 1e-9);
        assert!((a.constant - 1.0 / 1.25f64.ln()).abs() < 1e-12);

        let r = tk_design_depth_largeq(10, 4, 3, 0.01).unwrap();
        let want = (60.0 * 4f64.ln() + 3.0 * 3f64.ln() + 90f64.ln() + 100f64.ln()) / 2f64.ln();
        assert!((r.t - want).abs() < 1e-9);
        assert!(tk_design_depth_largeq(10, 2, 3, 0.01).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let r = tk_lower_bound(100, 2, 10).unwrap();
        assert!((r.t - 1000.0 / (80.0 * 1000f64.ln())).abs() < 1e-12);
        assert!((r.t - 1.81).abs() < 0.005);
        assert!(r.k_within_range);
        for n in (10..=100).step_by(10) {
            for k in 2..=10 {
                for q in [3, 4, 8] {
                    let lo = tk_lower_bound(n, q, k).unwrap().t;
                    let hi = tk_design_depth_largeq(n, q, k, 0.25).unwrap().t;
                    assert!(lo <= hi);
                }
            }
        }
    }

    #[test]
    fn ratio_conversion_handles_huge_parts() {
        let big: num_bigint::BigInt = num_bigint::BigInt::from(3) << 2000;
        let r = BigRational::new(big.clone() + 1, big);
        assert!((ratio_to_f64(&r) - 1.0).abs() < 1e-15);
    }
}
