use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialBoundary {
    Open,
    Periodic,
}

impl fmt::Display for SpatialBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpatialBoundary::Open => "open",
            SpatialBoundary::Periodic => "periodic",
        })
    }
}

impl FromStr for SpatialBoundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(SpatialBoundary::Open),
            "periodic" => Ok(SpatialBoundary::Periodic),
            _ => Err(Error::InvalidArgument(format!("unknown boundary {s:?}"))),
        }
    }
}

/// A two-qudit gate; qudits are 0-based here and 1-based when serialized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gate {
    pub layer: usize,
    /// Ordered pair `(left, right)`; the periodic wrap gate is `(n-1, 0)`.
    pub qudits: (usize, usize),
}

/// The output leg of `from` on `qudit`, consumed by the input of `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Leg {
    pub qudit: usize,
    pub from: usize,
    pub to: usize,
}

/// Brickwork layers of the time-periodic circuit whose trace moments give the frame
/// potential, with the leg connectivity between gates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircuitGeometry {
    n: usize,
    q: u64,
    t: usize,
    boundary: SpatialBoundary,
    gates: Vec<Gate>,
    layers: Vec<Vec<usize>>,
    legs: Vec<Leg>,
    successors: Vec<[usize; 2]>,
    idle_qudits: Vec<usize>,
}

/// Number of layers after absorbing the outermost layers of both circuits: none at
/// `t = 0`, one at `t = 1` (both absorptions hit the same layer), `2(t−1)` after that.
pub fn layer_count(t: usize) -> usize {
    match t {
        0 => 0,
        1 => 1,
        _ => 2 * (t - 1),
    }
}

pub fn build_geometry(n: usize, q: u64, t: usize, boundary: SpatialBoundary) -> Result<CircuitGeometry> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2 qudits, got {n}")));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("need q >= 2, got {q}")));
    }
    if boundary == SpatialBoundary::Periodic && (n < 4 || n % 2 == 1) {
        return Err(Error::InvalidArgument(format!(
            "a periodic brickwork needs an even n >= 4, got {n}"
        )));
    }
    let mut gates = Vec::new();
    let mut layers = Vec::new();
    for layer in 0..layer_count(t) {
        let mut ids = Vec::new();
        let mut left = layer % 2;
        while left + 1 < n {
            ids.push(gates.len());
            gates.push(Gate {
                layer,
                qudits: (left, left + 1),
            });
            left += 2;
        }
        if boundary == SpatialBoundary::Periodic && layer % 2 == 1 {
            ids.push(gates.len());
            gates.push(Gate {
                layer,
                qudits: (n - 1, 0),
            });
        }
        layers.push(ids);
    }

    // gates touching each qudit, in time order
    let mut on_qudit: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, g) in gates.iter().enumerate() {
        on_qudit[g.qudits.0].push(id);
        on_qudit[g.qudits.1].push(id);
    }
    let mut successors = vec![[usize::MAX; 2]; gates.len()];
    let mut legs = Vec::new();
    let mut idle_qudits = Vec::new();
    for (qudit, seq) in on_qudit.iter().enumerate() {
        if seq.is_empty() {
            idle_qudits.push(qudit);
            continue;
        }
        for (i, &from) in seq.iter().enumerate() {
            let to = seq[(i + 1) % seq.len()];
            let side = if gates[from].qudits.0 == qudit { 0 } else { 1 };
            successors[from][side] = to;
            legs.push(Leg { qudit, from, to });
        }
    }
    legs.sort_by_key(|l| (l.from, l.qudit));
    Ok(CircuitGeometry {
        n,
        q,
        t,
        boundary,
        gates,
        layers,
        legs,
        successors,
        idle_qudits,
    })
}

impl CircuitGeometry {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn boundary(&self) -> SpatialBoundary {
        self.boundary
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    /// Gate ids per layer.
    pub fn layers(&self) -> &[Vec<usize>] {
        &self.layers
    }

    /// Every leg, each qudit line contributing one leg per gate it passes through.
    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    /// Next gate on the left and right qudit of each gate (cyclic in time).
    pub fn successors(&self) -> &[[usize; 2]] {
        &self.successors
    }

    /// Qudits no gate touches; each closes into a bare trace loop.
    pub fn idle_qudits(&self) -> &[usize] {
        &self.idle_qudits
    }

    /// `⌊n/2⌋`, the gate count of an even layer.
    pub fn gates_per_layer(&self) -> usize {
        self.n / 2
    }

    /// Layers as 1-based qudit pairs.
    pub fn layer_pairs(&self) -> Vec<Vec<(usize, usize)>> {
        self.layers
            .iter()
            .map(|ids| {
                ids.iter()
                    .map(|&g| (self.gates[g].qudits.0 + 1, self.gates[g].qudits.1 + 1))
                    .collect()
            })
            .collect()
    }
}

#[derive(Serialize)]
struct WireLeg {
    qudit: usize,
    from_gate: usize,
    to_gate: usize,
}

#[derive(Serialize)]
struct Wire {
    n: usize,
    q: u64,
    t: usize,
    spatial_bc: SpatialBoundary,
    layers: Vec<Vec<(usize, usize)>>,
    legs: Vec<WireLeg>,
    idle_qudits: Vec<usize>,
}

impl Serialize for CircuitGeometry {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            n: self.n,
            q: self.q,
            t: self.t,
            spatial_bc: self.boundary,
            layers: self.layer_pairs(),
            legs: self
                .legs
                .iter()
                .map(|l| WireLeg {
                    qudit: l.qudit + 1,
                    from_gate: l.from,
                    to_gate: l.to,
                })
                .collect(),
            idle_qudits: self.idle_qudits.iter().map(|q| q + 1).collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brickwork_examples() {
        let g = build_geometry(4, 2, 2, SpatialBoundary::Open).unwrap();
        assert_eq!(g.layer_pairs(), vec![vec![(1, 2), (3, 4)], vec![(2, 3)]]);
        let g = build_geometry(4, 2, 2, SpatialBoundary::Periodic).unwrap();
        assert_eq!(g.layer_pairs(), vec![vec![(1, 2), (3, 4)], vec![(2, 3), (4, 1)]]);
        let g = build_geometry(5, 2, 3, SpatialBoundary::Open).unwrap();
        assert_eq!(g.layers().len(), 4);
        for (i, layer) in g.layer_pairs().iter().enumerate() {
            let want = if i % 2 == 0 {
                vec![(1, 2), (3, 4)]
            } else {
                vec![(2, 3), (4, 5)]
            };
            assert_eq!(layer, &want);
        }
        assert!(build_geometry(1, 2, 2, SpatialBoundary::Open).is_err());
        assert!(build_geometry(5, 2, 2, SpatialBoundary::Periodic).is_err());
    }

    #[test]
    fn every_leg_is_sourced_and_consumed_once() {
        for n in 2..=9 {
            for t in 0..=4 {
                for bc in [SpatialBoundary::Open, SpatialBoundary::Periodic] {
                    let Ok(g) = build_geometry(n, 2, t, bc) else { continue };
                    let mut out = vec![0; g.gate_count()];
                    let mut inn = vec![0; g.gate_count()];
                    for l in g.legs() {
                        out[l.from] += 1;
                        inn[l.to] += 1;
                    }
                    assert!(out.iter().all(|&c| c == 2));
                    assert!(inn.iter().all(|&c| c == 2));
                    let touched = n - g.idle_qudits().len();
                    assert!(t == 0 || touched == n || (n % 2 == 1 && t == 1 && touched == n - 1));
                }
            }
        }
    }

    #[test]
    fn boundary_qudit_skips_layers() {
        // qudit 1 is only touched by even layers, so its leg jumps a layer
        let g = build_geometry(4, 2, 3, SpatialBoundary::Open).unwrap();
        let first = g.layers()[0][0];
        let next = g.successors()[first][0];
        assert_eq!(g.gates()[next].layer, 2);
        // with t = 2 there is one even layer: a self-loop
        let g = build_geometry(4, 2, 2, SpatialBoundary::Open).unwrap();
        let first = g.layers()[0][0];
        assert_eq!(g.successors()[first][0], first);
    }

    #[test]
    fn json_is_one_based() {
        let g = build_geometry(4, 2, 2, SpatialBoundary::Periodic).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["layers"][1][1], serde_json::json!([4, 1]));
        assert_eq!(v["spatial_bc"], "periodic");
    }
}
