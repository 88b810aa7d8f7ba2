//! Three-spin plaquette weights `J^{σ1}_{σ2σ3}(q) = Σ_τ Wg(σ1⁻¹τ, q²) q^{ℓ(τ⁻¹σ2)} q^{ℓ(τ⁻¹σ3)}`.
//!
//! `J` is invariant under simultaneous left multiplication, so it depends only on
//! `(σ1⁻¹σ2, σ1⁻¹σ3)`; it is also invariant under simultaneous conjugation of that pair,
//! which is how tables are shared. Every weight is computed as a numerator over the fixed
//! common Weingarten denominator `D(q²)` and then reduced against the known factors of `D`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_algebra::{integer_roots, Polynomial, RationalFunction};
use crate::permutations::{Permutation, SymmetricGroup};
use crate::weingarten::{WeingartenTable, WEINGARTEN_CAP};

/// Largest `k` tabulated in full; above it weights are computed per key.
pub const FULL_TABLE_CAP: usize = 5;

/// Pairwise transposition distances of a plaquette's three spins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WallSignature {
    /// `|σ1⁻¹σ2|`
    pub in_left: usize,
    /// `|σ1⁻¹σ3|`
    pub in_right: usize,
    /// `|σ2⁻¹σ3|`
    pub across: usize,
}

impl WallSignature {
    pub fn ingoing(&self) -> usize {
        self.in_left + self.in_right
    }

    /// Walls that end inside the plaquette instead of passing through.
    pub fn annihilates(&self) -> bool {
        self.ingoing() != self.across
    }
}

impl fmt::Display for WallSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.in_left, self.in_right, self.across)
    }
}

pub fn classify(s1: &Permutation, s2: &Permutation, s3: &Permutation) -> Result<WallSignature> {
    use crate::permutations::transposition_distance as dist;
    Ok(WallSignature {
        in_left: dist(s1, s2)?,
        in_right: dist(s1, s3)?,
        across: dist(s2, s3)?,
    })
}

/// Per-`k` data shared by every weight computation: group tables, the Weingarten
/// numerators in `q`, and the factorization of the common denominator in `q`.
#[derive(Debug)]
pub struct WeightEngine {
    k: usize,
    group: Arc<SymmetricGroup>,
    wg_numerators: Vec<Polynomial>,
    denominator: Polynomial,
    factors: Vec<(Polynomial, u32)>,
    orbit_cache: Mutex<HashMap<(u32, u32), RationalFunction>>,
}

/// Coefficients of `Σ_{τ ∈ class} q^{ℓ(τ⁻¹a) + ℓ(τ⁻¹b)}`, per class and exponent.
type CountMatrix = Vec<Vec<u32>>;

impl WeightEngine {
    pub fn new(k: usize) -> Result<Self> {
        let wg = WeingartenTable::get(k)?;
        let group = SymmetricGroup::get(k)?;
        let wg_numerators = wg.numerators().iter().map(|p| p.substitute_square()).collect();
        let denominator = wg.common_denominator().substitute_square();
        let mut factors = Vec::new();
        for &(c, m) in wg.denominator_factors() {
            if c == 0 {
                factors.push((Polynomial::x(), 2 * m));
            } else if c < 0 && is_square(-c) {
                let j = isqrt(-c);
                factors.push((Polynomial::linear(-j), m));
                factors.push((Polynomial::linear(j), m));
            } else {
                factors.push((Polynomial::from_i64(&[c, 0, 1]), m));
            }
        }
        Ok(WeightEngine {
            k,
            group,
            wg_numerators,
            denominator,
            factors,
            orbit_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Shared engine for `k`.
    pub fn get(k: usize) -> Result<Arc<WeightEngine>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<WeightEngine>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(e) = cache.lock().expect("cache poisoned").get(&k) {
            return Ok(e.clone());
        }
        let e = Arc::new(WeightEngine::new(k)?);
        Ok(cache
            .lock()
            .expect("cache poisoned")
            .entry(k)
            .or_insert(e)
            .clone())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> &Arc<SymmetricGroup> {
        &self.group
    }

    /// `D(q²)`, the denominator every raw numerator is written over.
    pub fn common_denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// Counts for the triple of element indices, summing over every `τ` directly.
    pub fn triple_counts(&self, s1: usize, s2: usize, s3: usize) -> CountMatrix {
        let g = &*self.group;
        let mut counts = vec![vec![0u32; 2 * self.k + 1]; g.classes().len()];
        for tau in 0..g.order() {
            let class = g.class_of(g.left_div(s1, tau));
            let e = g.cycles(g.left_div(tau, s2)) + g.cycles(g.left_div(tau, s3));
            counts[class][e] += 1;
        }
        counts
    }

    /// Counts for the canonical key `(a, b) = (σ1⁻¹σ2, σ1⁻¹σ3)`.
    pub fn key_counts(&self, a: usize, b: usize) -> CountMatrix {
        self.triple_counts(0, a, b)
    }

    /// Numerator over [`Self::common_denominator`] for a count matrix.
    pub fn numerator_from_counts(&self, counts: &CountMatrix) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (class, row) in counts.iter().enumerate() {
            if row.iter().all(|&c| c == 0) {
                continue;
            }
            let p = Polynomial::from_bigints(row.iter().map(|&c| BigInt::from(c)).collect());
            acc = &acc + &(&self.wg_numerators[class] * &p);
        }
        acc
    }

    /// Reduces `numerator / D(q²)` by dividing out shared factors of `D`.
    pub fn reduce(&self, numerator: Polynomial) -> RationalFunction {
        if numerator.is_zero() {
            return RationalFunction::zero();
        }
        let mut num = numerator;
        let mut den = Polynomial::one();
        for (f, m) in &self.factors {
            let mut left = *m;
            while left > 0 {
                match num.exact_div(f).expect("factor nonzero") {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            den = &den * &f.pow(left);
        }
        RationalFunction::from_coprime(num, den).expect("denominator nonzero")
    }

    /// Weight of the canonical key, uncached.
    pub fn key_weight_uncached(&self, a: usize, b: usize) -> RationalFunction {
        self.reduce(self.numerator_from_counts(&self.key_counts(a, b)))
    }

    /// Smallest key in the simultaneous-conjugation orbit of `(a, b)`.
    pub fn orbit_representative(&self, a: usize, b: usize) -> (usize, usize) {
        let g = &*self.group;
        (0..g.order())
            .map(|pi| (g.conjugate(pi, a), g.conjugate(pi, b)))
            .min()
            .expect("group nonempty")
    }

    /// Weight of the canonical key, cached per conjugation orbit.
    pub fn key_weight(&self, a: usize, b: usize) -> RationalFunction {
        let rep = self.orbit_representative(a, b);
        let cache_key = (rep.0 as u32, rep.1 as u32);
        if let Some(w) = self.orbit_cache.lock().expect("cache poisoned").get(&cache_key) {
            return w.clone();
        }
        let w = self.key_weight_uncached(rep.0, rep.1);
        self.orbit_cache
            .lock()
            .expect("cache poisoned")
            .entry(cache_key)
            .or_insert(w)
            .clone()
    }

    /// Canonical key of a triple of element indices.
    pub fn key_of(&self, s1: usize, s2: usize, s3: usize) -> (usize, usize) {
        (self.group.left_div(s1, s2), self.group.left_div(s1, s3))
    }

    pub fn signature(&self, s1: usize, s2: usize, s3: usize) -> WallSignature {
        WallSignature {
            in_left: self.group.distance(s1, s2),
            in_right: self.group.distance(s1, s3),
            across: self.group.distance(s2, s3),
        }
    }
}

fn is_square(n: i64) -> bool {
    n >= 0 && isqrt(n) * isqrt(n) == n
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// `J^{σ1}_{σ2σ3}` as a reduced rational function of `q`.
pub fn plaquette_weight(
    s1: &Permutation,
    s2: &Permutation,
    s3: &Permutation,
    k: usize,
) -> Result<RationalFunction> {
    if k > WEINGARTEN_CAP {
        return Err(Error::CapExceeded {
            what: "k (plaquette weights)",
            value: k,
            cap: WEINGARTEN_CAP,
        });
    }
    for s in [s1, s2, s3] {
        if s.degree() != k {
            return Err(Error::DegreeMismatch {
                left: s.degree(),
                right: k,
            });
        }
    }
    let e = WeightEngine::get(k)?;
    let (a, b) = e.key_of(s1.rank(), s2.rank(), s3.rank());
    Ok(e.key_weight(a, b))
}

/// All canonical keys of `S_k`, with weights shared across conjugation orbits.
#[derive(Debug, Clone)]
pub struct PlaquetteTable {
    k: usize,
    engine: Arc<WeightEngine>,
    orbit_of: Vec<u32>,
    orbit_reps: Vec<(usize, usize)>,
    orbit_weights: Vec<RationalFunction>,
}

impl PlaquetteTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn group(&self) -> &Arc<SymmetricGroup> {
        self.engine.group()
    }

    pub fn engine(&self) -> &Arc<WeightEngine> {
        &self.engine
    }

    /// Number of canonical keys, `(k!)²`.
    pub fn len(&self) -> usize {
        self.orbit_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit_of.is_empty()
    }

    /// Number of distinct conjugation orbits of keys.
    pub fn orbit_count(&self) -> usize {
        self.orbit_reps.len()
    }

    /// Weight of the canonical key `(a, b)`, both given as element indices.
    pub fn key_weight(&self, a: usize, b: usize) -> &RationalFunction {
        let m = self.group().order();
        &self.orbit_weights[self.orbit_of[a * m + b] as usize]
    }

    /// Weight of the triple of element indices.
    pub fn weight(&self, s1: usize, s2: usize, s3: usize) -> &RationalFunction {
        let (a, b) = self.engine.key_of(s1, s2, s3);
        self.key_weight(a, b)
    }

    pub fn weight_of(&self, s1: &Permutation, s2: &Permutation, s3: &Permutation) -> Result<&RationalFunction> {
        let g = self.group();
        Ok(self.weight(g.index_of(s1)?, g.index_of(s2)?, g.index_of(s3)?))
    }

    /// Distinct weights, one per orbit, with a representative key.
    pub fn orbits(&self) -> impl Iterator<Item = ((usize, usize), &RationalFunction)> {
        self.orbit_reps.iter().copied().zip(&self.orbit_weights)
    }

    /// All keys in index order with their weights.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &RationalFunction)> {
        let m = self.group().order();
        (0..m * m).map(move |i| ((i / m, i % m), self.key_weight(i / m, i % m)))
    }

    /// Every orbit weight evaluated at integer `q`; a pole surfaces as an error.
    pub fn evaluate_orbits(&self, q: u64) -> Result<Vec<BigRational>> {
        let x = BigRational::from_integer(BigInt::from(q));
        self.orbit_weights
            .iter()
            .zip(&self.orbit_reps)
            .map(|(w, &(a, b))| {
                w.evaluate(&x).map_err(|_| Error::Pole {
                    at: format!(
                        "q = {q} in the plaquette weight of key ({}, {}) for k = {}",
                        self.group().element(a),
                        self.group().element(b),
                        self.k
                    ),
                })
            })
            .collect()
    }

    /// Orbit index of every key, laid out as `a * k! + b`.
    pub fn orbit_index(&self) -> &[u32] {
        &self.orbit_of
    }
}

/// Builds the full table for `k ≤ 5`.
pub fn build_table(k: usize) -> Result<PlaquetteTable> {
    if k == 0 || k > FULL_TABLE_CAP {
        return Err(Error::CapExceeded {
            what: "k (full plaquette table)",
            value: k,
            cap: FULL_TABLE_CAP,
        });
    }
    let engine = WeightEngine::get(k)?;
    let g = engine.group().clone();
    let m = g.order();
    let mut orbit_of = vec![u32::MAX; m * m];
    let mut orbit_reps = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if orbit_of[a * m + b] != u32::MAX {
                continue;
            }
            let id = orbit_reps.len() as u32;
            orbit_reps.push((a, b));
            for pi in 0..m {
                let (ca, cb) = (g.conjugate(pi, a), g.conjugate(pi, b));
                orbit_of[ca * m + cb] = id;
            }
        }
    }
    let orbit_weights: Vec<RationalFunction> = orbit_reps
        .par_iter()
        .map(|&(a, b)| engine.key_weight_uncached(a, b))
        .collect();
    Ok(PlaquetteTable {
        k,
        engine,
        orbit_of,
        orbit_reps,
        orbit_weights,
    })
}

/// Shared full table for `k ≤ 5`.
pub fn table(k: usize) -> Result<Arc<PlaquetteTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PlaquetteTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("cache poisoned").get(&k) {
        return Ok(t.clone());
    }
    let t = Arc::new(build_table(k)?);
    Ok(cache
        .lock()
        .expect("cache poisoned")
        .entry(k)
        .or_insert(t)
        .clone())
}

/// One broken rule, with the offending triple in cycle notation.
#[derive(Clone, Debug, Serialize)]
pub struct RuleViolation {
    pub rule: &'static str,
    pub triple: [String; 3],
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleReport {
    pub k: usize,
    pub triples_checked: usize,
    pub exhaustive: bool,
    pub violations: Vec<RuleViolation>,
}

impl RuleReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Number of random triples checked by [`verify_rules`] when `k = 5`.
pub const SAMPLED_TRIPLES: usize = 10_000;

/// Checks the plaquette rules on raw triples: exhaustively for `k ≤ 4`, on
/// [`SAMPLED_TRIPLES`] seeded random triples for `k = 5`.
///
/// Each triple's weight is recomputed from its own `τ` sum and compared with the table,
/// so key canonicalization and orbit sharing are tested rather than assumed.
/// Right-invariance is checked against the two generators `(1 2)` and `(1 2 … k)`.
pub fn verify_rules(k: usize) -> Result<RuleReport> {
    verify_rules_with(k, SAMPLED_TRIPLES, 0x5eed)
}

pub fn verify_rules_with(k: usize, samples: usize, seed: u64) -> Result<RuleReport> {
    let t = table(k)?;
    let e = t.engine().clone();
    let g = e.group().clone();
    let m = g.order();
    let exhaustive = k <= 4;
    let triples: Vec<(usize, usize, usize)> = if exhaustive {
        (0..m * m * m).map(|i| (i / (m * m), (i / m) % m, i % m)).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v: Vec<(usize, usize, usize)> = (0..samples)
            .map(|_| (rng.random_range(0..m), rng.random_range(0..m), rng.random_range(0..m)))
            .collect();
        // the rules are about coincidences, which uniform sampling rarely hits
        for i in 0..samples.min(m * 20) {
            let s = rng.random_range(0..m);
            let other = rng.random_range(0..m);
            v.push(match i % 4 {
                0 => (s, s, s),
                1 => (s, other, other),
                _ => {
                    // σ3 one transposition away from σ2
                    let swap = g.index_of(&transposition(k, rng.random_range(0..k - 1)))
                        .expect("same degree");
                    (s, other, g.mul(other, swap))
                }
            });
        }
        v
    };
    let generators: Vec<usize> = generators(k)
        .iter()
        .map(|p| g.index_of(p).expect("same degree"))
        .collect();

    let numerators: Mutex<HashMap<CountMatrix, Polynomial>> = Mutex::new(HashMap::new());
    let raw_numerator = |counts: CountMatrix| -> Polynomial {
        if let Some(p) = numerators.lock().expect("poisoned").get(&counts) {
            return p.clone();
        }
        let p = e.numerator_from_counts(&counts);
        numerators.lock().expect("poisoned").insert(counts, p.clone());
        p
    };
    let d = e.common_denominator();

    let mut violations: Vec<RuleViolation> = triples
        .par_iter()
        .flat_map_iter(|&(s1, s2, s3)| {
            let mut out = Vec::new();
            let name = |x: usize| g.element(x).to_string();
            let mut fail = |rule: &'static str, detail: String| {
                out.push(RuleViolation {
                    rule,
                    triple: [name(s1), name(s2), name(s3)],
                    detail,
                })
            };
            let w = t.weight(s1, s2, s3);
            let raw = raw_numerator(e.triple_counts(s1, s2, s3));
            // raw / D == num / den  ⇔  raw · den == num · D
            if &raw * w.denominator() != w.numerator() * d {
                fail("table matches direct sum", format!("table gives {}", w.display_in("q")));
            }
            if s1 == s2 && s2 == s3 && !w.is_one() {
                fail("uniform plaquette is 1", w.display_in("q"));
            }
            if s2 == s3 && s1 != s2 && !w.is_zero() {
                fail("no outgoing walls gives 0", w.display_in("q"));
            }
            if g.distance(s2, s3) == 1 && s1 != s2 && s1 != s3 && !w.is_zero() {
                fail("single outgoing wall needs a single ingoing wall", w.display_in("q"));
            }
            if t.weight(s1, s3, s2) != w {
                fail("symmetric in the outgoing spins", w.display_in("q"));
            }
            for &pi in &generators {
                let (r1, r2, r3) = (g.mul(s1, pi), g.mul(s2, pi), g.mul(s3, pi));
                let moved = raw_numerator(e.triple_counts(r1, r2, r3));
                if moved != raw || t.weight(r1, r2, r3) != w {
                    fail("right-invariance", format!("under {}", g.element(pi)));
                }
            }
            out
        })
        .collect();
    violations.sort_by(|a, b| (a.rule, &a.triple).cmp(&(b.rule, &b.triple)));
    Ok(RuleReport {
        k,
        triples_checked: triples.len(),
        exhaustive,
        violations,
    })
}

fn transposition(k: usize, i: usize) -> Permutation {
    let mut images: Vec<usize> = (0..k).collect();
    images.swap(i, i + 1);
    Permutation::from_images(images).expect("valid")
}

fn generators(k: usize) -> Vec<Permutation> {
    if k < 2 {
        return vec![Permutation::identity(k)];
    }
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    vec![
        transposition(k, 0),
        Permutation::from_images(cycle).expect("valid"),
    ]
}

/// One key's asymptotic data.
#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticEntry {
    pub key: [String; 2],
    pub signature: WallSignature,
    pub order: i64,
    pub leading: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub k: usize,
    pub nonzero_orbits: usize,
    pub entries: Vec<AsymptoticEntry>,
    pub violations: Vec<AsymptoticEntry>,
}

impl AsymptoticReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Large-`q` order of every nonzero weight against its number of ingoing walls: at most
/// `−(in_left + in_right)`, with equality when no wall ends inside the plaquette.
pub fn asymptotic_check(k: usize) -> Result<AsymptoticReport> {
    let t = table(k)?;
    let e = t.engine();
    let g = t.group();
    let mut entries = Vec::new();
    let mut violations = Vec::new();
    for ((a, b), w) in t.orbits() {
        if w.is_zero() {
            continue;
        }
        let sig = e.signature(0, a, b);
        let (order, lead) = w.asymptotic_order()?;
        let bound = -(sig.ingoing() as i64);
        let ok = if sig.annihilates() { order <= bound } else { order == bound };
        let entry = AsymptoticEntry {
            key: [g.element(a).to_string(), g.element(b).to_string()],
            signature: sig,
            order,
            leading: lead.to_string(),
        };
        if !ok {
            violations.push(entry.clone());
        }
        entries.push(entry);
    }
    Ok(AsymptoticReport {
        k,
        nonzero_orbits: entries.len(),
        entries,
        violations,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleReport {
    pub k: usize,
    pub range: (i64, i64),
    pub distinct_denominators: usize,
    /// Reduced denominators with integer roots in range, and those roots.
    pub poles: Vec<(String, Vec<i64>)>,
}

impl PoleReport {
    pub fn passed(&self) -> bool {
        self.poles.is_empty()
    }
}

/// Integer roots in `[lo, hi]` of every reduced denominator in the table.
pub fn pole_check(k: usize, lo: i64, hi: i64) -> Result<PoleReport> {
    let t = table(k)?;
    let mut dens: Vec<&Polynomial> = t.orbits().map(|(_, w)| w.denominator()).collect();
    dens.sort_by_key(|p| p.display_in("q"));
    dens.dedup();
    let mut poles = Vec::new();
    for d in &dens {
        let roots = integer_roots(d, lo, hi)?;
        if !roots.is_empty() {
            poles.push((d.display_in("q"), roots));
        }
    }
    Ok(PoleReport {
        k,
        range: (lo, hi),
        distinct_denominators: dens.len(),
        poles,
    })
}

/// Keys whose weight is negative at `q`, with signatures.
pub fn negative_weights(k: usize, q: i64) -> Result<Vec<(WallSignature, RationalFunction)>> {
    let t = table(k)?;
    let x = BigRational::from_integer(q.into());
    let mut out = Vec::new();
    for ((a, b), w) in t.orbits() {
        if w.is_zero() {
            continue;
        }
        if w.evaluate(&x)?.is_negative() {
            out.push((t.engine().signature(0, a, b), w.clone()));
        }
    }
    Ok(out)
}

/// `J` evaluated at `q`, with `1` exact for uniform keys; convenience for small tables.
pub fn evaluate_weight(w: &RationalFunction, q: u64) -> Result<BigRational> {
    if w.is_one() {
        return Ok(BigRational::one());
    }
    w.evaluate(&BigRational::from_integer(BigInt::from(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_i64(c)
    }

    fn single_wall() -> RationalFunction {
        RationalFunction::new(poly(&[0, 1]), poly(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn k2_weights() {
        let i = Permutation::identity(2);
        let s = p(&[2, 1]);
        let w = |a: &Permutation, b: &Permutation, c: &Permutation| plaquette_weight(a, b, c, 2).unwrap();
        assert!(w(&i, &i, &i).is_one());
        assert!(w(&s, &s, &s).is_one());
        assert!(w(&i, &s, &s).is_zero());
        assert!(w(&s, &i, &i).is_zero());
        assert_eq!(w(&i, &i, &s), single_wall());
        assert_eq!(w(&i, &s, &i), single_wall());
        assert_eq!(w(&s, &s, &i), single_wall());
        assert_eq!(w(&s, &i, &s), single_wall());
        assert_eq!(single_wall().evaluate_int(2).unwrap(), BigRational::new(2.into(), 5.into()));
    }

    #[test]
    fn classify_examples() {
        let s = p(&[2, 3, 1]);
        let sig = classify(&s, &s, &s).unwrap();
        assert_eq!((sig.in_left, sig.in_right, sig.across), (0, 0, 0));
        let i2 = Permutation::identity(2);
        let sig = classify(&i2, &i2, &p(&[2, 1])).unwrap();
        assert_eq!((sig.in_left, sig.in_right, sig.across), (0, 1, 1));
        let sig = classify(&Permutation::identity(3), &p(&[2, 1, 3]), &p(&[3, 2, 1])).unwrap();
        assert_eq!((sig.in_left, sig.in_right, sig.across), (1, 1, 2));
    }

    #[test]
    fn k1_table() {
        let t = build_table(1).unwrap();
        assert_eq!(t.len(), 1);
        assert!(t.key_weight(0, 0).is_one());
    }

    #[test]
    fn k2_table_and_rules() {
        let t = build_table(2).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.key_weight(0, 0).is_one());
        assert!(t.key_weight(1, 1).is_zero());
        assert_eq!(t.key_weight(0, 1), &single_wall());
        let r = verify_rules(2).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        assert_eq!(r.triples_checked, 8);
    }

    #[test]
    fn k3_rules_and_orders() {
        let r = verify_rules(3).unwrap();
        assert!(r.passed(), "{:?}", r.violations);
        let a = asymptotic_check(3).unwrap();
        assert!(a.passed(), "{:?}", a.violations);
        assert!(pole_check(3, 2, 1000).unwrap().passed());
    }

    #[test]
    fn orbit_cache_agrees_with_uncached() {
        let e = WeightEngine::get(3).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(e.key_weight(a, b), e.key_weight_uncached(a, b));
            }
        }
    }

    #[test]
    fn conjugation_covariance_k3() {
        let t = table(3).unwrap();
        let g = t.group().clone();
        for s1 in 0..6 {
            for s2 in 0..6 {
                for s3 in 0..6 {
                    for pi in 0..6 {
                        let c = |x| g.conjugate(pi, x);
                        assert_eq!(t.weight(c(s1), c(s2), c(s3)), t.weight(s1, s2, s3));
                    }
                }
            }
        }
    }
}
