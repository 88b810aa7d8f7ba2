//! Hexagonal model: every gate carries an input spin `σ_g` and an output spin `τ_g`,
//! weighted by `Wg(σ_g⁻¹τ_g, q²)`, and every leg `g → h` by `q^{ℓ(τ_g⁻¹σ_h)}`.
//! The configuration sum is contracted by variable elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::factor::{eliminate_all, Factor, Weight};
use super::{
    check_k, common_scale, idle_factor, wg_class_values, Backend, CircuitGeometry, EvalOptions,
    FramePotentialResult, FrameValue, Method,
};
use crate::error::Result;
use crate::permutations::SymmetricGroup;

fn input_var(g: usize) -> usize {
    2 * g
}

fn output_var(g: usize) -> usize {
    2 * g + 1
}

/// Gate and leg factors with Wg entries mapped through `wg` (class index → scalar).
fn factors<T: Weight>(
    geom: &CircuitGeometry,
    group: &SymmetricGroup,
    wg: &[T],
    leg_power: &[T],
) -> Vec<Factor<T>> {
    let m = group.order();
    let mut out = Vec::new();
    for g in 0..geom.gate_count() {
        out.push(Factor::from_fn(vec![input_var(g), output_var(g)], m, |a| {
            wg[group.class_of(group.left_div(a[0], a[1]))].clone()
        }));
    }
    for leg in geom.legs() {
        out.push(Factor::from_fn(
            vec![output_var(leg.from), input_var(leg.to)],
            m,
            |a| leg_power[group.cycles(group.left_div(a[0], a[1]))].clone(),
        ));
    }
    out
}

/// Exact or float partition function of the hexagonal model.
pub fn frame_potential_direct(
    geom: &CircuitGeometry,
    k: usize,
    opts: &EvalOptions,
) -> Result<FramePotentialResult> {
    check_k(k)?;
    let group = SymmetricGroup::get(k)?;
    let m = group.order();
    let gates = geom.gate_count();
    let idle = idle_factor(geom, k);
    let value = if gates == 0 {
        FrameValue::Exact(BigRational::from_integer(idle))
    } else {
        let wg = wg_class_values(k, geom.q(), opts.wg_form)?;
        let q = BigInt::from(geom.q());
        let powers: Vec<BigInt> = (0..=k).map(|e| q.pow(e as u32)).collect();
        match opts.backend {
            Backend::Exact => {
                let scale = common_scale(&wg);
                let scaled: Vec<BigInt> = wg
                    .iter()
                    .map(|w| (w * BigRational::from_integer(scale.clone())).to_integer())
                    .collect();
                let z = eliminate_all(factors(geom, &group, &scaled, &powers), m, opts.budget)?;
                let denom = scale.pow(gates as u32);
                FrameValue::Exact(BigRational::new(z * idle, denom))
            }
            Backend::Float => {
                let wg: Vec<f64> = wg.iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect();
                let powers: Vec<f64> = powers.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect();
                let z = eliminate_all(factors(geom, &group, &wg, &powers), m, opts.budget)?;
                FrameValue::Float(z * idle.to_f64().unwrap_or(f64::INFINITY))
            }
        }
    };
    let value = match (opts.backend, value) {
        (Backend::Float, FrameValue::Exact(r)) => FrameValue::Float(r.to_f64().unwrap_or(f64::NAN)),
        (_, v) => v,
    };
    Ok(FramePotentialResult {
        value,
        k,
        n: geom.n(),
        q: geom.q(),
        t: geom.t(),
        spatial_bc: geom.boundary(),
        method: Method::Direct,
        backend: opts.backend,
    })
}
