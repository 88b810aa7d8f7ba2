//! Exact F^(2) and F^(3) on a six-qubit brickwork with both evaluators.

use rqc_statmech::circuit_lattice::{
    build_geometry, frame_potential_direct, frame_potential_transfer, EvalOptions,
    SpatialBoundary,
};

fn main() -> rqc_statmech::Result<()> {
    let exact = EvalOptions::default();
    for bc in [SpatialBoundary::Open, SpatialBoundary::Periodic] {
        for k in [2, 3] {
            for t in 2..=4 {
                let geom = build_geometry(6, 2, t, bc)?;
                let d = frame_potential_transfer(&geom, k, &exact)?;
                println!("{bc:<8} k={k} t={t}  F = {} ≈ {:.8}", d.value, d.value.to_f64());
            }
        }
    }
    let geom = build_geometry(6, 2, 3, SpatialBoundary::Open)?;
    let a = frame_potential_direct(&geom, 3, &exact)?;
    let b = frame_potential_transfer(&geom, 3, &EvalOptions::float())?;
    println!("direct (exact) {} vs transfer (float) {:.12}", a.value, b.value.to_f64());
    Ok(())
}
