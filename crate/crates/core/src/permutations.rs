//! Permutations of `{1..k}`, cycle types, and the indexed group tables used by the
//! Weingarten, plaquette and lattice code.
//!
//! Composition follows `(a∘b)(i) = a(b(i))`. Every other module goes through
//! [`Permutation::compose`] or [`SymmetricGroup`], so the convention lives here only.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

/// Default cap on `k` for anything that enumerates `S_k`.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

/// Environment variable overriding [`DEFAULT_ENUMERATION_CAP`].
pub const ENUMERATION_CAP_ENV: &str = "RQC_ENUMERATION_CAP";

/// Largest `k` for which full multiplication tables are built.
pub const GROUP_TABLE_CAP: usize = 6;

/// The enumeration cap in effect: the environment override if it parses, else the default.
pub fn enumeration_cap() -> usize {
    std::env::var(ENUMERATION_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c >= 1)
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// A permutation of `k` symbols, stored 0-based: `images[i] = σ(i)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        assert!((1..=u8::MAX as usize).contains(&k), "degree out of range");
        Permutation {
            images: (0..k as u8).collect(),
        }
    }

    /// Builds from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        if k == 0 {
            return Err(Error::InvalidPermutation("degree must be at least 1".into()));
        }
        if k > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("degree {k} too large")));
        }
        let mut seen = vec![false; k];
        for &x in &images {
            if x >= k || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{k}"
                )));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    /// Builds from 1-based images, e.g. `[2, 1, 3]` for the transposition `(1 2)`.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("one-based images must be >= 1".into()));
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    /// Builds from disjoint 1-based cycles, e.g. `from_cycles(3, &[&[1, 2, 3]])`.
    pub fn from_cycles(k: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut touched = vec![false; k];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > k || touched[x - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "cycles {cycles:?} are not disjoint cycles on 1..={k}"
                    )));
                }
                touched[x - 1] = true;
                let next = cycle[(pos + 1) % cycle.len()];
                if next == 0 || next > k {
                    return Err(Error::InvalidPermutation(format!("{next} out of range")));
                }
                images[x - 1] = next - 1;
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Self> {
        check_degrees(self, other)?;
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        })
    }

    /// Number of cycles, including fixed points (written ℓ(σ)).
    pub fn cycle_count(&self) -> usize {
        let k = self.images.len();
        let mut seen = vec![false; k];
        let mut count = 0;
        for start in 0..k {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
            }
        }
        count
    }

    pub fn cycle_type(&self) -> CycleType {
        let k = self.images.len();
        let mut seen = vec![false; k];
        let mut parts = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    /// Minimal number of transpositions whose product is `self`: `k − ℓ(σ)`.
    pub fn transposition_length(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    pub fn sign(&self) -> i8 {
        if self.transposition_length().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Length of the longest strictly increasing subsequence of the image sequence.
    pub fn longest_increasing_subsequence(&self) -> usize {
        let mut tails: Vec<u8> = Vec::new();
        for &x in &self.images {
            match tails.binary_search(&x) {
                Ok(_) => {}
                Err(pos) if pos == tails.len() => tails.push(x),
                Err(pos) => tails[pos] = x,
            }
        }
        tails.len()
    }

    /// Lexicographic rank of the image sequence among all of `S_k`.
    pub fn rank(&self) -> usize {
        let k = self.images.len();
        let mut used = vec![false; k];
        let mut rank = 0;
        for (pos, &x) in self.images.iter().enumerate() {
            let smaller = (0..x as usize).filter(|&y| !used[y]).count();
            rank += smaller * factorial(k - 1 - pos) as usize;
            used[x as usize] = true;
        }
        rank
    }

    /// The element of lexicographic rank `rank` in `S_k`.
    pub fn unrank(k: usize, mut rank: usize) -> Self {
        let mut pool: Vec<u8> = (0..k as u8).collect();
        let mut images = Vec::with_capacity(k);
        for pos in 0..k {
            let f = factorial(k - 1 - pos) as usize;
            let idx = rank / f;
            rank %= f;
            images.push(pool.remove(idx));
        }
        Permutation { images }
    }

    /// Advances to the lexicographically next permutation; false when already last.
    fn advance(&mut self) -> bool {
        let v = &mut self.images;
        let n = v.len();
        if n < 2 {
            return false;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.one_based())
    }
}

/// Cycle notation with 1-based symbols; fixed points omitted, identity shown as `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.images.len();
        let mut seen = vec![false; k];
        let mut wrote = false;
        for start in 0..k {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.images[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

fn check_degrees(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            left: a.degree(),
            right: b.degree(),
        });
    }
    Ok(())
}

/// Cycle lengths of a permutation, weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of cycles, ℓ.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The `k` this cycle type belongs to.
    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Size of the conjugacy class: `k! / ∏_i (i^{m_i} m_i!)`.
    pub fn class_size(&self) -> u64 {
        let mut denom: u64 = 1;
        let mut i = 0;
        while i < self.parts.len() {
            let len = self.parts[i];
            let mut mult = 0;
            while i < self.parts.len() && self.parts[i] == len {
                mult += 1;
                i += 1;
            }
            denom *= (len as u64).pow(mult as u32) * factorial(mult);
        }
        factorial(self.degree()) / denom
    }

    /// Sign of any permutation of this type.
    pub fn sign(&self) -> i8 {
        if (self.degree() - self.len()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// A representative permutation: consecutive cycles `(1..p1)(p1+1..)...`.
    pub fn representative(&self) -> Permutation {
        let k = self.degree();
        let mut images = vec![0usize; k];
        let mut start = 0;
        for &len in &self.parts {
            for j in 0..len {
                images[start + j] = start + (j + 1) % len;
            }
            start += len;
        }
        Permutation::from_images(images).expect("valid by construction")
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `(a∘b)(i) = a(b(i))`.
pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    a.compose(b)
}

/// `k − ℓ(a⁻¹b)`: the number of transpositions separating `a` and `b`.
pub fn transposition_distance(a: &Permutation, b: &Permutation) -> Result<usize> {
    Ok(a.inverse().compose(b)?.transposition_length())
}

pub fn sign(a: &Permutation) -> i8 {
    a.sign()
}

pub fn cycle_type(a: &Permutation) -> CycleType {
    a.cycle_type()
}

/// All of `S_k` in lexicographic order of images, subject to [`enumeration_cap`].
pub fn enumerate(k: usize) -> Result<Vec<Permutation>> {
    enumerate_with_cap(k, enumeration_cap())
}

pub fn enumerate_with_cap(k: usize, cap: usize) -> Result<Vec<Permutation>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > cap {
        return Err(Error::CapExceeded {
            what: "k",
            value: k,
            cap,
        });
    }
    let mut out = Vec::with_capacity(factorial(k) as usize);
    let mut p = Permutation::identity(k);
    loop {
        out.push(p.clone());
        if !p.advance() {
            break;
        }
    }
    Ok(out)
}

/// `∫ |Tr U|^{2k} dU` over `U(d)`: the number of permutations in `S_k` whose longest
/// increasing subsequence is at most `d` (equal to `k!` once `k ≤ d`).
pub fn haar_frame_potential(k: usize, d: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    if k <= d && k <= 20 {
        return Ok(factorial(k));
    }
    Ok(enumerate(k)?
        .iter()
        .filter(|p| p.longest_increasing_subsequence() <= d)
        .count() as u64)
}

/// `S_k` with its elements indexed by lexicographic rank and precomputed tables.
#[derive(Debug)]
pub struct SymmetricGroup {
    k: usize,
    elements: Vec<Permutation>,
    product: Vec<u32>,
    inverse: Vec<u32>,
    cycles: Vec<u8>,
    class_of: Vec<u16>,
    classes: Vec<CycleType>,
}

impl SymmetricGroup {
    /// Builds the tables; `k` is limited to [`GROUP_TABLE_CAP`].
    pub fn new(k: usize) -> Result<Self> {
        if k > GROUP_TABLE_CAP {
            return Err(Error::CapExceeded {
                what: "k (group tables)",
                value: k,
                cap: GROUP_TABLE_CAP,
            });
        }
        let elements = enumerate_with_cap(k, GROUP_TABLE_CAP)?;
        let m = elements.len();
        let mut product = vec![0u32; m * m];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                product[a * m + b] = pa.compose(pb).expect("same degree").rank() as u32;
            }
        }
        let inverse = elements.iter().map(|p| p.inverse().rank() as u32).collect();
        let cycles = elements.iter().map(|p| p.cycle_count() as u8).collect();
        let classes = crate::characters::partitions(k)?
            .into_iter()
            .map(|p| CycleType::new(p.parts().to_vec()).expect("partition is a cycle type"))
            .collect::<Vec<_>>();
        let class_index: HashMap<CycleType, u16> = classes
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i as u16))
            .collect();
        let class_of = elements
            .iter()
            .map(|p| class_index[&p.cycle_type()])
            .collect();
        Ok(SymmetricGroup {
            k,
            elements,
            product,
            inverse,
            cycles,
            class_of,
            classes,
        })
    }

    /// Shared, lazily built group for `k`.
    pub fn get(k: usize) -> Result<Arc<SymmetricGroup>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<SymmetricGroup>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(g) = cache.lock().expect("group cache poisoned").get(&k) {
            return Ok(g.clone());
        }
        let g = Arc::new(SymmetricGroup::new(k)?);
        cache
            .lock()
            .expect("group cache poisoned")
            .entry(k)
            .or_insert_with(|| g.clone());
        Ok(g)
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &Permutation {
        &self.elements[idx]
    }

    pub fn index_of(&self, p: &Permutation) -> Result<usize> {
        if p.degree() != self.k {
            return Err(Error::DegreeMismatch {
                left: p.degree(),
                right: self.k,
            });
        }
        Ok(p.rank())
    }

    /// Index of `a∘b`.
    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Index of `a⁻¹∘b`.
    #[inline]
    pub fn left_div(&self, a: usize, b: usize) -> usize {
        self.mul(self.inv(a), b)
    }

    /// ℓ of the element at `a`.
    #[inline]
    pub fn cycles(&self, a: usize) -> usize {
        self.cycles[a] as usize
    }

    /// `|a⁻¹b| = k − ℓ(a⁻¹b)`.
    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.k - self.cycles(self.left_div(a, b))
    }

    #[inline]
    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    /// Conjugacy classes in the order of [`crate::characters::partitions`].
    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    /// Index of `π a π⁻¹`.
    #[inline]
    pub fn conjugate(&self, pi: usize, a: usize) -> usize {
        self.mul(self.mul(pi, a), self.inv(pi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(images: &[usize]) -> Permutation {
        Permutation::from_one_based(images).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id3 = Permutation::identity(3);
        let s12 = p(&[2, 1, 3]);
        let s23 = p(&[1, 3, 2]);
        assert_eq!(compose(&id3, &s12).unwrap(), s12);
        assert_eq!(compose(&s12, &s12).unwrap(), id3);
        // (12)∘(23): 1→1→2, 2→3→3, 3→2→1
        assert_eq!(compose(&s12, &s23).unwrap(), p(&[2, 3, 1]));
        assert!(matches!(
            compose(&id3, &Permutation::identity(2)),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn cycle_type_examples() {
        let ct = Permutation::identity(4).cycle_type();
        assert_eq!(ct.parts(), &[1, 1, 1, 1]);
        assert_eq!(ct.len(), 4);
        let ct = p(&[2, 1, 3]).cycle_type();
        assert_eq!(ct.parts(), &[2, 1]);
        assert_eq!(ct.len(), 2);
        let ct = p(&[2, 3, 4, 1]).cycle_type();
        assert_eq!(ct.parts(), &[4]);
        assert_eq!(ct.len(), 1);
    }

    #[test]
    fn distance_and_sign_examples() {
        let a = p(&[3, 1, 2]);
        assert_eq!(transposition_distance(&a, &a).unwrap(), 0);
        assert_eq!(
            transposition_distance(&Permutation::identity(2), &p(&[2, 1])).unwrap(),
            1
        );
        assert_eq!(
            transposition_distance(&Permutation::identity(4), &p(&[2, 3, 4, 1])).unwrap(),
            3
        );
        assert_eq!(Permutation::identity(5).sign(), 1);
        assert_eq!(p(&[1, 3, 2]).sign(), -1);
        assert_eq!(p(&[2, 3, 1]).sign(), 1);
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(1).unwrap(), vec![Permutation::identity(1)]);
        assert_eq!(enumerate(3).unwrap().len(), 6);
        let s4 = enumerate(4).unwrap();
        assert_eq!(s4.len(), 24);
        assert!(s4[0].is_identity());
        assert!(s4.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(
            enumerate_with_cap(9, 8),
            Err(Error::CapExceeded { .. })
        ));
        assert!(enumerate(0).is_err());
    }

    #[test]
    fn haar_frame_potential_examples() {
        assert_eq!(haar_frame_potential(3, 3).unwrap(), 6);
        assert_eq!(haar_frame_potential(3, 1).unwrap(), 1);
        // LIS ≤ 2 excludes only 123
        assert_eq!(haar_frame_potential(3, 2).unwrap(), 5);
        for d in 1..=6 {
            for k in 1..=d {
                assert_eq!(haar_frame_potential(k, d).unwrap(), factorial(k));
            }
        }
    }

    #[test]
    fn rank_matches_enumeration_order() {
        for k in 1..=5 {
            for (i, p) in enumerate(k).unwrap().iter().enumerate() {
                assert_eq!(p.rank(), i);
                assert_eq!(&Permutation::unrank(k, i), p);
            }
        }
    }

    #[test]
    fn class_sizes_sum_to_order() {
        for k in 1..=6 {
            let group = SymmetricGroup::new(k).unwrap();
            let total: u64 = group.classes().iter().map(|c| c.class_size()).sum();
            assert_eq!(total, factorial(k));
            let mut counts = vec![0u64; group.classes().len()];
            for i in 0..group.order() {
                counts[group.class_of(i)] += 1;
            }
            for (c, &n) in group.classes().iter().zip(&counts) {
                assert_eq!(c.class_size(), n, "class {c}");
            }
        }
    }

    #[test]
    fn distance_is_a_metric() {
        for k in 1..=5 {
            let g = SymmetricGroup::new(k).unwrap();
            let m = g.order();
            for a in 0..m {
                for b in 0..m {
                    let dab = g.distance(a, b);
                    assert_eq!(dab, g.distance(b, a));
                    assert_eq!(dab == 0, a == b);
                    assert_eq!(g.cycles(g.left_div(a, b)), g.cycles(g.left_div(b, a)));
                }
            }
            if k <= 4 {
                for a in 0..m {
                    for b in 0..m {
                        for c in 0..m {
                            assert!(g.distance(a, c) <= g.distance(a, b) + g.distance(b, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sign_is_a_homomorphism() {
        for k in 1..=4 {
            let all = enumerate(k).unwrap();
            for a in &all {
                for b in &all {
                    assert_eq!(a.compose(b).unwrap().sign(), a.sign() * b.sign());
                }
            }
        }
    }

    #[test]
    fn group_tables_agree_with_compose() {
        let g = SymmetricGroup::new(4).unwrap();
        for a in 0..g.order() {
            for b in 0..g.order() {
                let direct = g.element(a).compose(g.element(b)).unwrap();
                assert_eq!(g.element(g.mul(a, b)), &direct);
            }
            assert!(g.element(g.mul(a, g.inv(a))).is_identity());
        }
    }

    #[test]
    fn display_uses_cycle_notation() {
        assert_eq!(p(&[2, 3, 1, 4]).to_string(), "(1 2 3)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
        assert_eq!(
            Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap(),
            p(&[3, 4, 1, 2])
        );
    }
}
