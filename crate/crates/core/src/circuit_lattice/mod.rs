//! Brickwork geometry and exact evaluation of the frame potential as a lattice
//! partition function, either on the hexagonal two-spins-per-gate model
//! ([`frame_potential_direct`]) or on the triangular plaquette model
//! ([`frame_potential_transfer`]).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::permutations::{factorial, SymmetricGroup};
use crate::weingarten::{wg_restricted, WeingartenTable};

pub mod direct;
mod factor;
pub mod geometry;
pub mod transfer;

pub use direct::frame_potential_direct;
pub use factor::Budget;
pub use geometry::{build_geometry, layer_count, CircuitGeometry, Gate, Leg, SpatialBoundary};
pub use transfer::frame_potential_transfer;

/// Exact rational or double-precision value.
#[derive(Clone, Debug, PartialEq)]
pub enum FrameValue {
    Exact(BigRational),
    Float(f64),
}

impl FrameValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            FrameValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            FrameValue::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            FrameValue::Exact(r) => Some(r),
            FrameValue::Float(_) => None,
        }
    }
}

impl fmt::Display for FrameValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameValue::Exact(r) => write!(f, "{r}"),
            FrameValue::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// Exact values serialize as `"p/q"` strings, floats as numbers.
impl Serialize for FrameValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            FrameValue::Exact(r) => s.serialize_str(&r.to_string()),
            FrameValue::Float(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Transfer,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Transfer => "transfer",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Exact,
    Float,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            _ => Err(Error::InvalidArgument(format!("unknown backend {s:?}"))),
        }
    }
}

/// Which Weingarten function the gate average uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WgForm {
    /// The character expansion over all `λ ⊢ k`, a rational function of `q²`.
    /// Exact for `k ≤ q²`; beyond that it may have a pole at the physical dimension.
    #[default]
    Unrestricted,
    /// Only irreps with at most `q²` rows: the true Haar average for every `k`.
    Restricted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub backend: Backend,
    /// Pin one spin to the identity and multiply by `k!` (transfer only).
    pub gauge_fix: bool,
    pub budget: Budget,
    pub wg_form: WgForm,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            backend: Backend::Exact,
            gauge_fix: false,
            budget: Budget::default(),
            wg_form: WgForm::Unrestricted,
        }
    }
}

impl EvalOptions {
    pub fn float() -> Self {
        EvalOptions {
            backend: Backend::Float,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FramePotentialResult {
    pub value: FrameValue,
    pub k: usize,
    pub n: usize,
    pub q: u64,
    pub t: usize,
    pub spatial_bc: SpatialBoundary,
    pub method: Method,
    pub backend: Backend,
}

/// `t = 0` gives `q^{2nk}`. `t = 1` is one layer of independent gates, each contributing
/// its trace moment `k!`; an idle qudit (odd `n`) adds a bare `q^{2k}`.
pub fn frame_potential_special(n: usize, q: u64, t: usize, k: usize) -> Result<BigRational> {
    if n < 2 || q < 2 || k == 0 {
        return Err(Error::InvalidArgument(format!(
            "need n >= 2, q >= 2, k >= 1; got n = {n}, q = {q}, k = {k}"
        )));
    }
    let qi = BigInt::from(q);
    match t {
        0 => Ok(BigRational::from_integer(qi.pow((2 * n * k) as u32))),
        1 => {
            if (k as u64) > q * q {
                return Err(Error::InvalidArgument(format!(
                    "k = {k} exceeds q² = {}: per-gate trace moments are no longer k!; \
                     use the restricted Weingarten form or Monte Carlo",
                    q * q
                )));
            }
            let gates = BigInt::from(factorial(k)).pow((n / 2) as u32);
            let idle = qi.pow((2 * k * (n % 2)) as u32);
            Ok(BigRational::from_integer(gates * idle))
        }
        _ => Err(Error::InvalidArgument(format!(
            "closed forms exist only for t in {{0, 1}}, got t = {t}"
        ))),
    }
}

/// `Wg(·, q²)` per conjugacy class of `S_k`, in [`SymmetricGroup::classes`] order.
pub(crate) fn wg_class_values(k: usize, q: u64, form: WgForm) -> Result<Vec<BigRational>> {
    let d = q * q;
    let group = SymmetricGroup::get(k)?;
    match form {
        WgForm::Unrestricted => {
            let table = WeingartenTable::get(k)?;
            let x = BigRational::from_integer(BigInt::from(d));
            group
                .classes()
                .iter()
                .map(|c| {
                    let idx = table.class_index(c)?;
                    table.values()[idx].evaluate(&x).map_err(|_| Error::Pole {
                        at: format!("d = q² = {d} in Wg({c}) for k = {k}"),
                    })
                })
                .collect()
        }
        WgForm::Restricted => group
            .classes()
            .iter()
            .map(|c| wg_restricted(&c.representative(), k, d))
            .collect(),
    }
}

/// Bare trace loops of idle qudits, `q^{2k}` each.
pub(crate) fn idle_factor(geom: &CircuitGeometry, k: usize) -> BigInt {
    BigInt::from(geom.q()).pow((2 * k * geom.idle_qudits().len()) as u32)
}

/// Least common multiple of denominators; `values · lcm` are then integers.
pub(crate) fn common_scale(values: &[BigRational]) -> BigInt {
    use num_integer::Integer;
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > crate::weingarten::WEINGARTEN_CAP {
        return Err(Error::CapExceeded {
            what: "k (frame potential)",
            value: k,
            cap: crate::weingarten::WEINGARTEN_CAP,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn special_values() {
        assert_eq!(frame_potential_special(4, 2, 0, 2).unwrap(), BigRational::from_integer(65536.into()));
        assert_eq!(frame_potential_special(6, 2, 1, 2).unwrap(), BigRational::from_integer(8.into()));
        assert_eq!(frame_potential_special(4, 3, 1, 3).unwrap(), BigRational::from_integer(36.into()));
        assert!(frame_potential_special(4, 2, 1, 5).is_err());
        assert!(frame_potential_special(4, 2, 2, 2).is_err());
    }

    #[test]
    fn frame_value_serializes_exactly() {
        let v = FrameValue::Exact(BigRational::new(3.into(), 7.into()));
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"3/7\"");
        assert_eq!(serde_json::to_string(&FrameValue::Float(2.5)).unwrap(), "2.5");
    }
}
