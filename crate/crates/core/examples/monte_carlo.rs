//! Sampled F^(2) on four qubits against the exact lattice value.

use rqc_statmech::circuit_lattice::{
    build_geometry, frame_potential_transfer, EvalOptions, SpatialBoundary,
};
use rqc_statmech::montecarlo::estimate_frame_potential;

fn main() -> rqc_statmech::Result<()> {
    let (n, q, k) = (4, 2, 2);
    for t in 1..=4 {
        let exact = frame_potential_transfer(
            &build_geometry(n, q, t, SpatialBoundary::Open)?,
            k,
            &EvalOptions::default(),
        )?
        .value
        .to_f64();
        let est = estimate_frame_potential(n, q, t, k, 20_000, 11, SpatialBoundary::Open)?;
        println!(
            "t={t}  exact {exact:.5}  sampled {:.5} ± {:.5} (jackknife {:.5})  z = {:+.2}",
            est.mean,
            est.std_error,
            est.jackknife_error,
            (est.mean - exact) / est.std_error
        );
    }
    Ok(())
}
