//! Statistical checks of the Haar sampler and of the sampled frame potential.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rqc_statmech::circuit_lattice::SpatialBoundary;
use rqc_statmech::montecarlo::{
    estimate_frame_potential, estimate_frame_potential_two_sided, sample_haar_gate, sample_rng,
    unitarity_defect,
};
use rqc_statmech::permutations::haar_frame_potential;

const SAMPLES: usize = 40_000;
const SIGMAS: f64 = 5.0;

fn mean_and_error(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn traces(dim: usize) -> Vec<Complex64> {
    (0..SAMPLES)
        .map(|i| {
            let u: DMatrix<Complex64> = sample_haar_gate(dim, &mut sample_rng(99, i as u64));
            assert!(unitarity_defect(&u) < 1e-12);
            u.trace()
        })
        .collect()
}

#[test]
fn trace_moments_of_u4_match_haar() {
    let tr = traces(4);
    for k in 1..=3usize {
        let xs: Vec<f64> = tr.iter().map(|z| z.norm_sqr().powi(k as i32)).collect();
        let (mean, se) = mean_and_error(&xs);
        let want = haar_frame_potential(k, 4).unwrap() as f64;
        assert!((mean - want).abs() < SIGMAS * se, "k={k}: {mean} ± {se} vs {want}");
    }
    // E Tr U = 0
    let (re, se) = mean_and_error(&tr.iter().map(|z| z.re).collect::<Vec<_>>());
    assert!(re.abs() < SIGMAS * se);
}

#[test]
fn moments_beyond_dimension_fall_below_factorial() {
    // for k > d the Haar value counts permutations with no increasing run longer than d
    let tr = traces(2);
    let xs: Vec<f64> = tr.iter().map(|z| z.norm_sqr().powi(3)).collect();
    let (mean, se) = mean_and_error(&xs);
    let want = haar_frame_potential(3, 2).unwrap() as f64;
    assert_eq!(want, 5.0);
    assert!((mean - want).abs() < SIGMAS * se, "{mean} ± {se}");
}

#[test]
fn entry_moduli_are_uniform_on_the_sphere() {
    let xs: Vec<f64> = (0..SAMPLES)
        .map(|i| sample_haar_gate(4, &mut sample_rng(5, i as u64))[(1, 2)].norm_sqr())
        .collect();
    let (mean, se) = mean_and_error(&xs);
    assert!((mean - 0.25).abs() < SIGMAS * se);
    // E|U_ij|⁴ = 2/(d(d+1))
    let (m4, se4) = mean_and_error(&xs.iter().map(|x| x * x).collect::<Vec<_>>());
    assert!((m4 - 0.1).abs() < SIGMAS * se4);
}

#[test]
fn merged_and_two_sided_estimators_agree() {
    let a = estimate_frame_potential(4, 2, 2, 2, 20_000, 1, SpatialBoundary::Open).unwrap();
    let b = estimate_frame_potential_two_sided(4, 2, 2, 2, 20_000, 2, SpatialBoundary::Open).unwrap();
    let z = (a.mean - b.mean) / (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
    assert!(z.abs() < SIGMAS, "{} vs {}", a.mean, b.mean);
    assert!(a.jackknife_error > 0.0 && a.max_sample >= a.mean);
}

#[test]
fn ring_sampling_matches_exact_value() {
    use rqc_statmech::circuit_lattice::{build_geometry, frame_potential_transfer, EvalOptions};
    let geom = build_geometry(4, 2, 2, SpatialBoundary::Periodic).unwrap();
    let exact = frame_potential_transfer(&geom, 2, &EvalOptions::default()).unwrap().value.to_f64();
    let est = estimate_frame_potential(4, 2, 2, 2, 20_000, 4, SpatialBoundary::Periodic).unwrap();
    assert!(((est.mean - exact) / est.std_error).abs() < SIGMAS, "{} vs {exact}", est.mean);
}
