//! Integer partitions, irrep dimensions, Murnaghan–Nakayama characters of `S_k`, and
//! content polynomials.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exact_algebra::Polynomial;
use crate::permutations::{factorial, CycleType};

/// Largest `k` accepted by [`partitions`].
pub const PARTITION_CAP: usize = 10;

/// A partition `λ ⊢ k`, parts weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerPartition {
    parts: Vec<usize>,
}

impl IntegerPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not a weakly decreasing sequence of positive integers"
            )));
        }
        Ok(IntegerPartition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of rows, ℓ(λ).
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Cells `(i, j)` of the Young diagram, 1-based row and column.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
    }

    /// Column lengths.
    pub fn conjugate(&self) -> IntegerPartition {
        let cols = (1..=self.parts[0])
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count())
            .collect();
        IntegerPartition { parts: cols }
    }
}

impl fmt::Display for IntegerPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl From<&CycleType> for IntegerPartition {
    fn from(c: &CycleType) -> Self {
        IntegerPartition {
            parts: c.parts().to_vec(),
        }
    }
}

/// All partitions of `k`, in reverse lexicographic order starting from `(k)`.
pub fn partitions(k: usize) -> Result<Vec<IntegerPartition>> {
    if !(1..=PARTITION_CAP).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "partitions need 1 <= k <= {PARTITION_CAP}, got {k}"
        )));
    }
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<IntegerPartition>) {
        if rest == 0 {
            out.push(IntegerPartition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    Ok(out)
}

/// `f_λ` by the hook-length formula.
pub fn irrep_dimension(lambda: &IntegerPartition) -> u64 {
    let conj = lambda.conjugate();
    let hooks: u64 = lambda
        .cells()
        .map(|(i, j)| {
            let arm = lambda.parts[i - 1] - j;
            let leg = conj.parts[j - 1] - i;
            (arm + leg + 1) as u64
        })
        .product();
    factorial(lambda.size()) / hooks
}

type CharacterKey = (Vec<usize>, Vec<usize>);

fn character_cache() -> &'static Mutex<HashMap<CharacterKey, i64>> {
    static CACHE: OnceLock<Mutex<HashMap<CharacterKey, i64>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `χ_λ` on the class `μ`, by the Murnaghan–Nakayama rule.
pub fn character(lambda: &IntegerPartition, mu: &CycleType) -> Result<i64> {
    if lambda.size() != mu.degree() {
        return Err(Error::DegreeMismatch {
            left: lambda.size(),
            right: mu.degree(),
        });
    }
    Ok(mn(lambda.parts.clone(), mu.parts()))
}

fn mn(lambda: Vec<usize>, mu: &[usize]) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda, mu.to_vec());
    if let Some(&v) = character_cache().lock().expect("cache poisoned").get(&key) {
        return v;
    }
    let (lambda, _) = &key;
    let r = mu[0];
    let rest = &mu[1..];
    // beta numbers: first-column hook lengths, strictly decreasing
    let n = lambda.len();
    let betas: Vec<usize> = lambda.iter().enumerate().map(|(i, &p)| p + n - 1 - i).collect();
    let mut total = 0i64;
    for (idx, &b) in betas.iter().enumerate() {
        if b < r {
            continue;
        }
        let target = b - r;
        if betas.contains(&target) {
            continue;
        }
        let between = betas.iter().filter(|&&x| x > target && x < b).count();
        let mut next = betas.clone();
        next[idx] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<usize> = next
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (n - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        let sign = if between % 2 == 0 { 1 } else { -1 };
        total += sign * mn(shape, rest);
    }
    character_cache()
        .lock()
        .expect("cache poisoned")
        .insert(key, total);
    total
}

/// `∏_{(i,j) ∈ λ} (d + j − i)` as a polynomial in `d`.
pub fn content_polynomial(lambda: &IntegerPartition) -> Polynomial {
    lambda.cells().fold(Polynomial::one(), |acc, (i, j)| {
        &acc * &Polynomial::linear(j as i64 - i as i64)
    })
}

/// Multiset of contents `j − i`, as (content, multiplicity) sorted by content.
pub fn contents(lambda: &IntegerPartition) -> Vec<(i64, u32)> {
    let mut m: HashMap<i64, u32> = HashMap::new();
    for (i, j) in lambda.cells() {
        *m.entry(j as i64 - i as i64).or_default() += 1;
    }
    let mut v: Vec<_> = m.into_iter().collect();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutations::SymmetricGroup;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn part(p: &[usize]) -> IntegerPartition {
        IntegerPartition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(1).unwrap(), vec![part(&[1])]);
        assert_eq!(partitions(3).unwrap().len(), 3);
        assert_eq!(partitions(6).unwrap().len(), 11);
        let counts: Vec<usize> = (1..=10).map(|k| partitions(k).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        assert!(partitions(0).is_err());
        assert!(partitions(11).is_err());
    }

    #[test]
    fn dimensions() {
        assert_eq!(irrep_dimension(&part(&[5])), 1);
        assert_eq!(irrep_dimension(&part(&[1, 1, 1, 1])), 1);
        assert_eq!(irrep_dimension(&part(&[2, 1])), 2);
        assert_eq!(irrep_dimension(&part(&[3, 2])), 5);
        for k in 1..=8 {
            let s: u64 = partitions(k)
                .unwrap()
                .iter()
                .map(|l| irrep_dimension(l).pow(2))
                .sum();
            assert_eq!(s, factorial(k));
        }
    }

    #[test]
    fn character_special_values() {
        for k in 1..=5 {
            let id = CycleType::new(vec![1; k]).unwrap();
            for l in partitions(k).unwrap() {
                assert_eq!(character(&l, &id).unwrap(), irrep_dimension(&l) as i64);
            }
            let sign_rep = part(&vec![1; k]);
            for mu in partitions(k).unwrap() {
                let mu = CycleType::new(mu.parts().to_vec()).unwrap();
                assert_eq!(character(&sign_rep, &mu).unwrap(), mu.sign() as i64);
            }
        }
        assert!(character(&part(&[2]), &CycleType::new(vec![3]).unwrap()).is_err());
    }

    #[test]
    fn s3_table() {
        let classes = [vec![1, 1, 1], vec![2, 1], vec![3]];
        let expected = [[1, 1, 1], [2, 0, -1], [1, -1, 1]];
        for (l, row) in [part(&[3]), part(&[2, 1]), part(&[1, 1, 1])]
            .iter()
            .zip(expected)
        {
            for (c, want) in classes.iter().zip(row) {
                let mu = CycleType::new(c.clone()).unwrap();
                assert_eq!(character(l, &mu).unwrap(), want, "{l} on {mu}");
            }
        }
    }

    #[test]
    fn orthogonality() {
        for k in 1..=6 {
            let g = SymmetricGroup::new(k).unwrap();
            let lambdas = partitions(k).unwrap();
            let classes = g.classes();
            let table: Vec<Vec<i64>> = lambdas
                .iter()
                .map(|l| classes.iter().map(|c| character(l, c).unwrap()).collect())
                .collect();
            let kf = factorial(k) as i64;
            for a in 0..lambdas.len() {
                for b in 0..lambdas.len() {
                    let s: i64 = classes
                        .iter()
                        .enumerate()
                        .map(|(i, c)| c.class_size() as i64 * table[a][i] * table[b][i])
                        .sum();
                    assert_eq!(s, if a == b { kf } else { 0 });
                }
            }
            for i in 0..classes.len() {
                for j in 0..classes.len() {
                    let s: i64 = (0..lambdas.len()).map(|a| table[a][i] * table[a][j]).sum();
                    let want = if i == j { kf / classes[i].class_size() as i64 } else { 0 };
                    assert_eq!(s, want);
                }
            }
        }
    }

    #[test]
    fn content_polynomial_examples() {
        assert_eq!(content_polynomial(&part(&[1])), Polynomial::from_i64(&[0, 1]));
        assert_eq!(content_polynomial(&part(&[2])), Polynomial::from_i64(&[0, 1, 1]));
        assert_eq!(content_polynomial(&part(&[1, 1])), Polynomial::from_i64(&[0, -1, 1]));
        for k in 1..=6 {
            for l in partitions(k).unwrap() {
                let p = content_polynomial(&l);
                assert_eq!(p.degree(), Some(k));
                assert!(!p.evaluate(&BigRational::from_integer(k.into())).is_zero());
            }
        }
    }
}
