//! Triangular model: the output spin of each gate is summed out into a plaquette weight
//! `J^{σ_g}_{σ_left σ_right}`, where left and right are the next gates on the gate's two
//! qudits. The layer-0 spins are enumerated (in parallel) and, for each configuration, the
//! remaining layers are swept gate by gate. Legs that skip a layer at an open boundary stay
//! in the transfer state until the gate consuming them is reached.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::factor::{Budget, Factor, Weight};
use super::{
    check_k, common_scale, idle_factor, wg_class_values, Backend, CircuitGeometry, EvalOptions,
    FramePotentialResult, FrameValue, Method, WgForm,
};
use crate::error::{Error, Result};
use crate::permutations::{factorial, SymmetricGroup};
use crate::plaquette::{table, PlaquetteTable};

/// Plaquette weight of every conjugation orbit of keys at integer `q`.
fn orbit_values(t: &PlaquetteTable, q: u64, form: WgForm) -> Result<Vec<BigRational>> {
    if (t.k() as u64) <= q * q {
        return t.evaluate_orbits(q);
    }
    // the rational weights stay finite past k = q², but only the restricted form is Haar
    let wg = wg_class_values(t.k(), q, form)?;
    let qi = BigInt::from(q);
    Ok(t.orbits()
        .map(|((a, b), _)| {
            let counts = t.engine().key_counts(a, b);
            let mut acc = BigRational::zero();
            for (class, row) in counts.iter().enumerate() {
                for (e, &c) in row.iter().enumerate() {
                    if c > 0 {
                        acc += &wg[class] * BigRational::from_integer(BigInt::from(c) * qi.pow(e as u32));
                    }
                }
            }
            acc
        })
        .collect())
}

/// One factor per gate over its own spin and its two successors' spins.
fn gate_factors<T: Weight>(geom: &CircuitGeometry, t: &PlaquetteTable, values: &[T]) -> Vec<Factor<T>> {
    let g = t.group();
    let m = g.order();
    let orbit = t.orbit_index();
    (0..geom.gate_count())
        .map(|gate| {
            let [l, r] = geom.successors()[gate];
            let roles = [gate, l, r];
            let mut vars: Vec<usize> = Vec::with_capacity(3);
            for v in roles {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            let pos: Vec<usize> = roles
                .iter()
                .map(|v| vars.iter().position(|x| x == v).expect("present"))
                .collect();
            Factor::from_fn(vars, m, |a| {
                let (s1, s2, s3) = (a[pos[0]], a[pos[1]], a[pos[2]]);
                let key = g.left_div(s1, s2) * m + g.left_div(s1, s3);
                values[orbit[key] as usize].clone()
            })
        })
        .collect()
}

/// Sweeps every gate outside layer 0 with the layer-0 spins fixed to `config`.
fn sweep<T: Weight>(
    geom: &CircuitGeometry,
    factors: &[Factor<T>],
    fixed: &[Option<usize>],
    m: usize,
    budget: Budget,
) -> Result<T> {
    let mut acc = T::one();
    let mut pending: Vec<Factor<T>> = Vec::new();
    for f in factors {
        let c = f.condition(fixed, m);
        if c.vars.is_empty() {
            if c.data[0].is_zero() {
                return Ok(T::zero());
            }
            acc = acc * &c.data[0];
        } else {
            pending.push(c);
        }
    }
    let mut uses = vec![0usize; fixed.len()];
    for f in &pending {
        for &v in &f.vars {
            uses[v] += 1;
        }
    }
    let mut introduced = vec![false; fixed.len()];
    let mut state = Factor::scalar(acc);
    for var in (0..geom.gate_count()).filter(|&v| fixed[v].is_none()) {
        if state.len().saturating_mul(m) > budget.max_entries {
            return Err(Error::BudgetExceeded(format!(
                "transfer state over {} spins of domain {m}",
                state.vars.len() + 1
            )));
        }
        state = state.extend(var, m);
        introduced[var] = true;
        let mut i = 0;
        while i < pending.len() {
            if pending[i].vars.iter().all(|&v| introduced[v]) {
                let f = pending.swap_remove(i);
                state.multiply(&f, m);
                for &v in &f.vars {
                    uses[v] -= 1;
                }
            } else {
                i += 1;
            }
        }
        let done: Vec<usize> = state.vars.iter().copied().filter(|&v| uses[v] == 0).collect();
        for v in done {
            state = state.sum_out(v, m);
        }
    }
    debug_assert!(state.vars.is_empty() && pending.is_empty());
    Ok(state.data[0].clone())
}

/// Sum over layer-0 configurations, in parallel, reduced in configuration order.
fn contract<T: Weight>(
    geom: &CircuitGeometry,
    factors: &[Factor<T>],
    m: usize,
    opts: &EvalOptions,
) -> Result<T> {
    let first: Vec<usize> = geom.layers().first().cloned().unwrap_or_default();
    let (pinned, enumerated) = match (opts.gauge_fix, first.split_first()) {
        (true, Some((&p, rest))) => (Some(p), rest.to_vec()),
        _ => (None, first.clone()),
    };
    let configs = (0..enumerated.len())
        .try_fold(1usize, |acc, _| acc.checked_mul(m))
        .filter(|&c| c <= opts.budget.max_work)
        .ok_or_else(|| {
            Error::BudgetExceeded(format!("{} layer-0 spins of domain {m}", enumerated.len()))
        })?;
    let partials: Vec<Result<T>> = (0..configs)
        .into_par_iter()
        .map(|c| {
            let mut fixed = vec![None; geom.gate_count()];
            if let Some(p) = pinned {
                fixed[p] = Some(0);
            }
            let mut rest = c;
            for &g in enumerated.iter().rev() {
                fixed[g] = Some(rest % m);
                rest /= m;
            }
            sweep(geom, factors, &fixed, m, opts.budget)
        })
        .collect();
    let mut total = T::zero();
    for p in partials {
        total += &p?;
    }
    Ok(total)
}

/// Exact or float partition function of the triangular model.
pub fn frame_potential_transfer(
    geom: &CircuitGeometry,
    k: usize,
    opts: &EvalOptions,
) -> Result<FramePotentialResult> {
    check_k(k)?;
    let gates = geom.gate_count();
    let idle = idle_factor(geom, k);
    let value = if gates == 0 {
        match opts.backend {
            Backend::Exact => FrameValue::Exact(BigRational::from_integer(idle)),
            Backend::Float => FrameValue::Float(idle.to_f64().unwrap_or(f64::INFINITY)),
        }
    } else {
        let t = table(k)?;
        let m = SymmetricGroup::get(k)?.order();
        let values = orbit_values(&t, geom.q(), opts.wg_form)?;
        let gauge = if opts.gauge_fix { factorial(k) } else { 1 };
        match opts.backend {
            Backend::Exact => {
                let scale = common_scale(&values);
                let scaled: Vec<BigInt> = values
                    .iter()
                    .map(|v| (v * BigRational::from_integer(scale.clone())).to_integer())
                    .collect();
                let z = contract(geom, &gate_factors(geom, &t, &scaled), m, opts)?;
                FrameValue::Exact(BigRational::new(
                    z * idle * BigInt::from(gauge),
                    scale.pow(gates as u32),
                ))
            }
            Backend::Float => {
                let values: Vec<f64> = values.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect();
                let z = contract(geom, &gate_factors(geom, &t, &values), m, opts)?;
                FrameValue::Float(z * idle.to_f64().unwrap_or(f64::INFINITY) * gauge as f64)
            }
        }
    };
    Ok(FramePotentialResult {
        value,
        k,
        n: geom.n(),
        q: geom.q(),
        t: geom.t(),
        spatial_bc: geom.boundary(),
        method: Method::Transfer,
        backend: opts.backend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit_lattice::{build_geometry, frame_potential_direct, SpatialBoundary};

    fn exact(r: &FramePotentialResult) -> BigRational {
        r.value.as_exact().unwrap().clone()
    }

    #[test]
    fn agrees_with_direct_on_small_grid() {
        for bc in [SpatialBoundary::Open, SpatialBoundary::Periodic] {
            for n in 2..=5 {
                for t in 0..=3 {
                    let Ok(geom) = build_geometry(n, 2, t, bc) else { continue };
                    for k in 1..=2 {
                        let o = EvalOptions::default();
                        let a = frame_potential_transfer(&geom, k, &o).unwrap();
                        let b = frame_potential_direct(&geom, k, &o).unwrap();
                        assert_eq!(exact(&a), exact(&b), "n={n} t={t} k={k} {bc}");
                    }
                }
            }
        }
    }

    #[test]
    fn gauge_fix_matches_full_sum() {
        let geom = build_geometry(4, 2, 3, SpatialBoundary::Open).unwrap();
        let plain = frame_potential_transfer(&geom, 3, &EvalOptions::default()).unwrap();
        let fixed = EvalOptions {
            gauge_fix: true,
            ..EvalOptions::default()
        };
        let gauged = frame_potential_transfer(&geom, 3, &fixed).unwrap();
        assert_eq!(exact(&plain), exact(&gauged));
    }

    #[test]
    fn float_matches_exact() {
        let geom = build_geometry(5, 3, 3, SpatialBoundary::Open).unwrap();
        let e = frame_potential_transfer(&geom, 2, &EvalOptions::default()).unwrap();
        let f = frame_potential_transfer(&geom, 2, &EvalOptions::float()).unwrap();
        let (e, f) = (e.value.to_f64(), f.value.to_f64());
        assert!(((e - f) / e).abs() < 1e-10);
    }

    #[test]
    fn first_moment_is_one() {
        for t in 1..=4 {
            let geom = build_geometry(6, 3, t, SpatialBoundary::Open).unwrap();
            let r = frame_potential_transfer(&geom, 1, &EvalOptions::default()).unwrap();
            assert!(num_traits::One::is_one(&exact(&r)));
        }
    }
}
