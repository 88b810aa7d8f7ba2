//! Floating-point estimates of the frame potential from sampled Haar brickwork circuits.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit_lattice::{build_geometry, layer_count, CircuitGeometry, SpatialBoundary};
use crate::error::{Error, Result};

/// Largest Hilbert-space dimension `q^n` simulated densely.
pub const MAX_DENSE_DIM: usize = 4096;

/// Smallest sample count accepted by the estimators.
pub const MIN_SAMPLES: usize = 100;

/// Blocks used for the delete-one-block jackknife.
const JACKKNIFE_BLOCKS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√samples`.
    pub std_error: f64,
    /// Delete-one-block jackknife error of the mean.
    pub jackknife_error: f64,
    /// Largest single sample, to flag heavy tails.
    pub max_sample: f64,
    pub samples: usize,
    pub seed: u64,
    pub k: usize,
    pub n: usize,
    pub q: u64,
    pub t: usize,
    pub spatial_bc: SpatialBoundary,
    /// Whether samples are `|Tr(U†V)|^{2k}` for independent `U, V` rather than the
    /// trace of a single merged circuit.
    pub two_sided: bool,
}

/// Haar-random `dim × dim` unitary: QR of a complex Ginibre matrix with the phases of
/// `R`'s diagonal moved into `Q`.
pub fn sample_haar_gate<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Max-norm of `U†U − I`.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let p = u.adjoint() * u;
    p.iter()
        .enumerate()
        .map(|(i, z)| {
            let (r, c) = (i % p.nrows(), i / p.nrows());
            let id = if r == c { 1.0 } else { 0.0 };
            (z - Complex64::new(id, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

fn dense_dim(n: usize, q: u64) -> Result<usize> {
    (q as usize)
        .checked_pow(n as u32)
        .filter(|&d| d <= MAX_DENSE_DIM)
        .ok_or_else(|| Error::BudgetExceeded(format!("q^n = {q}^{n} exceeds {MAX_DENSE_DIM}")))
}

/// Row-major `d × d` matrix acted on from the left by two-qudit gates.
struct Register {
    n: usize,
    q: usize,
    d: usize,
    data: Vec<Complex64>,
}

impl Register {
    fn identity(n: usize, q: usize, d: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            data[i * d + i] = Complex64::new(1.0, 0.0);
        }
        Register { n, q, d, data }
    }

    fn stride(&self, qudit: usize) -> usize {
        self.q.pow((self.n - 1 - qudit) as u32)
    }

    /// `M ← G M` with `G` acting on qudits `(a, b)`, `a` the more significant gate index.
    fn apply(&mut self, gate: &DMatrix<Complex64>, a: usize, b: usize) {
        let (q, d) = (self.q, self.d);
        let (sa, sb) = (self.stride(a), self.stride(b));
        let rows: Vec<usize> = (0..d).filter(|r| (r / sa) % q == 0 && (r / sb) % q == 0).collect();
        let mut buf = vec![Complex64::new(0.0, 0.0); q * q];
        for &base in &rows {
            let idx: Vec<usize> = (0..q * q).map(|x| base + (x / q) * sa + (x % q) * sb).collect();
            for c in 0..d {
                for (x, v) in buf.iter_mut().enumerate() {
                    *v = idx
                        .iter()
                        .enumerate()
                        .map(|(y, &r)| gate[(x, y)] * self.data[r * d + c])
                        .sum();
                }
                for (x, &r) in idx.iter().enumerate() {
                    self.data[r * d + c] = buf[x];
                }
            }
        }
    }

    fn apply_layer<R: Rng + ?Sized>(&mut self, geom: &CircuitGeometry, layer: usize, rng: &mut R) {
        for &g in &geom.layers()[layer] {
            let (a, b) = geom.gates()[g].qudits;
            let u = sample_haar_gate(self.q * self.q, rng);
            self.apply(&u, a, b);
        }
    }

    fn trace(&self) -> Complex64 {
        (0..self.d).map(|i| self.data[i * self.d + i]).sum()
    }
}

/// Trace of a freshly sampled circuit with the lattice's layer structure: one Haar layer
/// at `t = 1`, `2(t−1)` alternating layers for `t ≥ 2`, the identity at `t = 0`.
pub fn circuit_trace<R: Rng + ?Sized>(
    n: usize,
    q: u64,
    t: usize,
    bc: SpatialBoundary,
    rng: &mut R,
) -> Result<Complex64> {
    let d = dense_dim(n, q)?;
    let geom = build_geometry(n, q, t, bc)?;
    let mut reg = Register::identity(n, q as usize, d);
    for layer in 0..layer_count(t) {
        reg.apply_layer(&geom, layer, rng);
    }
    Ok(reg.trace())
}

/// `Tr(U†V)` for independent depth-`t` brickwork circuits `U` and `V`.
pub fn two_sided_trace<R: Rng + ?Sized>(
    n: usize,
    q: u64,
    t: usize,
    bc: SpatialBoundary,
    rng: &mut R,
) -> Result<Complex64> {
    let d = dense_dim(n, q)?;
    // a depth-t circuit uses layers 0..t of the alternating pattern
    let geom = build_geometry(n, q, t + 1, bc)?;
    let sample = |rng: &mut R| {
        let mut reg = Register::identity(n, q as usize, d);
        for layer in 0..t {
            reg.apply_layer(&geom, layer, rng);
        }
        reg.data
    };
    let u = sample(rng);
    let v = sample(rng);
    Ok(u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum())
}

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Generator for sample `index`: the seed picks the key, the index picks the stream.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn summarize(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let mean = pairwise_sum(values) / n;
    let dev: Vec<f64> = values.iter().map(|x| (x - mean).powi(2)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    let std_error = (var / n).sqrt();

    let blocks = JACKKNIFE_BLOCKS.min(values.len());
    let size = values.len() / blocks;
    let used = &values[..blocks * size];
    let total = pairwise_sum(used);
    let block_sums: Vec<f64> = used.chunks(size).map(pairwise_sum).collect();
    let loo: Vec<f64> = block_sums
        .iter()
        .map(|s| (total - s) / ((blocks - 1) * size) as f64)
        .collect();
    let loo_mean = pairwise_sum(&loo) / blocks as f64;
    let jk_dev: Vec<f64> = loo.iter().map(|x| (x - loo_mean).powi(2)).collect();
    let jackknife_error = ((blocks - 1) as f64 / blocks as f64 * pairwise_sum(&jk_dev)).sqrt();
    let max_sample = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, std_error, jackknife_error, max_sample)
}

#[allow(clippy::too_many_arguments)]
fn estimate(
    n: usize,
    q: u64,
    t: usize,
    k: usize,
    samples: usize,
    seed: u64,
    bc: SpatialBoundary,
    two_sided: bool,
) -> Result<MCEstimate> {
    if samples < MIN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_SAMPLES} samples, got {samples}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    dense_dim(n, q)?;
    build_geometry(n, q, t, bc)?;
    let values: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let tr = if two_sided {
                two_sided_trace(n, q, t, bc, &mut rng)
            } else {
                circuit_trace(n, q, t, bc, &mut rng)
            }?;
            Ok(tr.norm_sqr().powi(k as i32))
        })
        .collect::<Result<_>>()?;
    let (mean, std_error, jackknife_error, max_sample) = summarize(&values);
    Ok(MCEstimate {
        mean,
        std_error,
        jackknife_error,
        max_sample,
        samples,
        seed,
        k,
        n,
        q,
        t,
        spatial_bc: bc,
        two_sided,
    })
}

/// Mean of `|Tr C|^{2k}` over sampled merged circuits `C`.
pub fn estimate_frame_potential(
    n: usize,
    q: u64,
    t: usize,
    k: usize,
    samples: usize,
    seed: u64,
    bc: SpatialBoundary,
) -> Result<MCEstimate> {
    estimate(n, q, t, k, samples, seed, bc, false)
}

/// Mean of `|Tr(U†V)|^{2k}` over independent pairs of depth-`t` circuits.
pub fn estimate_frame_potential_two_sided(
    n: usize,
    q: u64,
    t: usize,
    k: usize,
    samples: usize,
    seed: u64,
    bc: SpatialBoundary,
) -> Result<MCEstimate> {
    estimate(n, q, t, k, samples, seed, bc, true)
}
