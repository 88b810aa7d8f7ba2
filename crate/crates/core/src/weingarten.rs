//! Unitary Weingarten functions `Wg(σ, d)`.
//!
//! The symbolic form is the character expansion
//! `Wg(σ, d) = (1/k!) Σ_λ χ_λ(σ) f_λ / c_λ(d)` over all `λ ⊢ k`. An independent oracle
//! inverts the Gram matrix `G[σ,τ] = d^{ℓ(σ⁻¹τ)}` exactly at integer `d`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::characters::{character, contents, irrep_dimension, partitions};
use crate::error::{Error, Result};
use crate::exact_algebra::{Polynomial, RationalFunction};
use crate::permutations::{factorial, CycleType, Permutation, SymmetricGroup, GROUP_TABLE_CAP};

/// Largest `k` for symbolic Weingarten tables.
pub const WEINGARTEN_CAP: usize = GROUP_TABLE_CAP;

/// `Wg(·, d)` for one `k`, one entry per cycle type.
#[derive(Debug, Clone)]
pub struct WeingartenTable {
    k: usize,
    classes: Vec<CycleType>,
    values: Vec<RationalFunction>,
    denominator_factors: Vec<(i64, u32)>,
    common_denominator: Polynomial,
    numerators: Vec<Polynomial>,
}

impl WeingartenTable {
    pub fn new(k: usize) -> Result<Self> {
        check_cap(k)?;
        let lambdas = partitions(k)?;
        let classes: Vec<CycleType> = lambdas
            .iter()
            .map(|l| CycleType::new(l.parts().to_vec()))
            .collect::<Result<_>>()?;

        // lcm of all content polynomials, kept factored as (content, multiplicity)
        let mut max_mult: BTreeMap<i64, u32> = BTreeMap::new();
        let lambda_contents: Vec<Vec<(i64, u32)>> = lambdas.iter().map(contents).collect();
        for cs in &lambda_contents {
            for &(c, m) in cs {
                let e = max_mult.entry(c).or_default();
                *e = (*e).max(m);
            }
        }
        let denominator_factors: Vec<(i64, u32)> = max_mult.into_iter().collect();
        let common_denominator = product_of_linear(&denominator_factors);

        let cofactors: Vec<Polynomial> = lambda_contents
            .iter()
            .map(|cs| {
                let own: HashMap<i64, u32> = cs.iter().copied().collect();
                let rest: Vec<(i64, u32)> = denominator_factors
                    .iter()
                    .map(|&(c, m)| (c, m - own.get(&c).copied().unwrap_or(0)))
                    .collect();
                product_of_linear(&rest)
            })
            .collect();
        let dims: Vec<i64> = lambdas.iter().map(|l| irrep_dimension(l) as i64).collect();
        let inv_kf = BigRational::new(BigInt::one(), BigInt::from(factorial(k)));

        let mut numerators = Vec::with_capacity(classes.len());
        let mut values = Vec::with_capacity(classes.len());
        for mu in &classes {
            let mut acc = Polynomial::zero();
            for (l, lambda) in lambdas.iter().enumerate() {
                let coef = character(lambda, mu)? * dims[l];
                if coef != 0 {
                    acc = &acc + &cofactors[l].scale(&BigRational::from_integer(coef.into()));
                }
            }
            let a = acc.scale(&inv_kf);
            values.push(RationalFunction::new(a.clone(), common_denominator.clone())?);
            numerators.push(a);
        }
        Ok(WeingartenTable {
            k,
            classes,
            values,
            denominator_factors,
            common_denominator,
            numerators,
        })
    }

    /// Shared table for `k`, built on first use.
    pub fn get(k: usize) -> Result<Arc<WeingartenTable>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<WeingartenTable>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().expect("cache poisoned").get(&k) {
            return Ok(t.clone());
        }
        let t = Arc::new(WeingartenTable::new(k)?);
        Ok(cache
            .lock()
            .expect("cache poisoned")
            .entry(k)
            .or_insert(t)
            .clone())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Cycle types, in the same order as [`SymmetricGroup::classes`].
    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    /// Reduced `Wg` per class, as functions of `d`.
    pub fn values(&self) -> &[RationalFunction] {
        &self.values
    }

    pub fn class_index(&self, mu: &CycleType) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c == mu)
            .ok_or_else(|| Error::InvalidPartition(format!("{mu} is not a cycle type of S_{}", self.k)))
    }

    pub fn value(&self, sigma: &Permutation) -> Result<&RationalFunction> {
        if sigma.degree() != self.k {
            return Err(Error::DegreeMismatch {
                left: sigma.degree(),
                right: self.k,
            });
        }
        Ok(&self.values[self.class_index(&sigma.cycle_type())?])
    }

    /// `D(d)`, the lcm of all content polynomials; every `Wg` is `A_μ(d) / D(d)`.
    pub fn common_denominator(&self) -> &Polynomial {
        &self.common_denominator
    }

    /// `D(d)` as `∏ (d + c)^m`, listed as `(c, m)`.
    pub fn denominator_factors(&self) -> &[(i64, u32)] {
        &self.denominator_factors
    }

    /// Unreduced numerators `A_μ(d)` over [`Self::common_denominator`].
    pub fn numerators(&self) -> &[Polynomial] {
        &self.numerators
    }
}

fn product_of_linear(factors: &[(i64, u32)]) -> Polynomial {
    factors.iter().fold(Polynomial::one(), |acc, &(c, m)| {
        &acc * &Polynomial::linear(c).pow(m)
    })
}

fn check_cap(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if k > WEINGARTEN_CAP {
        return Err(Error::CapExceeded {
            what: "k (Weingarten table)",
            value: k,
            cap: WEINGARTEN_CAP,
        });
    }
    Ok(())
}

/// `Wg(σ, d)` as a reduced rational function of `d`, summed over every `λ ⊢ k`.
pub fn wg_symbolic(sigma: &Permutation, k: usize) -> Result<RationalFunction> {
    check_cap(k)?;
    Ok(WeingartenTable::get(k)?.value(sigma)?.clone())
}

/// The identity row of the inverse Gram matrix at integer `d`, by fraction-free elimination.
pub fn wg_gram(k: usize, d: u64) -> Result<BTreeMap<Permutation, BigRational>> {
    check_cap(k)?;
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let group = SymmetricGroup::get(k)?;
    let m = group.order();
    let powers: Vec<BigInt> = (0..=k).map(|e| BigInt::from(d).pow(e as u32)).collect();
    let mut a: Vec<Vec<BigInt>> = (0..m)
        .map(|s| {
            let mut row: Vec<BigInt> = (0..m)
                .map(|t| powers[group.cycles(group.left_div(s, t))].clone())
                .collect();
            // the identity has rank 0 in lexicographic order
            row.push(if s == 0 { BigInt::one() } else { BigInt::zero() });
            row
        })
        .collect();
    let x = bareiss_solve(&mut a).ok_or(Error::SingularMatrix { k, d })?;
    Ok(group.elements().iter().cloned().zip(x).collect())
}

/// Solves `A x = b` for a square system stored as rows `[A | b]`.
///
/// Forward elimination is fraction-free, so intermediate entries stay integral; only the
/// back substitution works in rationals. Returns `None` for a singular matrix.
fn bareiss_solve(a: &mut [Vec<BigInt>]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut prev = BigInt::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        for r in col + 1..n {
            for c in col + 1..=n {
                let v = (&a[col][col] * &a[r][c] - &a[r][col] * &a[col][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[col][col].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for r in (0..n).rev() {
        let mut acc = BigRational::from_integer(a[r][n].clone());
        for c in r + 1..n {
            acc -= BigRational::from_integer(a[r][c].clone()) * &x[c];
        }
        x[r] = acc / BigRational::from_integer(a[r][r].clone());
    }
    Some(x)
}

/// The character sum restricted to partitions with at most `d` rows, at integer `d`.
///
/// This is the form that stays valid when `d < k`; for `d ≥ k` it equals [`wg_symbolic`].
pub fn wg_restricted(sigma: &Permutation, k: usize, d: u64) -> Result<BigRational> {
    check_cap(k)?;
    if sigma.degree() != k {
        return Err(Error::DegreeMismatch {
            left: sigma.degree(),
            right: k,
        });
    }
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let mu = sigma.cycle_type();
    let dq = BigRational::from_integer(BigInt::from(d));
    let mut acc = BigRational::zero();
    for lambda in partitions(k)? {
        if lambda.len() as u64 > d {
            continue;
        }
        let c = crate::characters::content_polynomial(&lambda).evaluate(&dq);
        let chi = character(&lambda, &mu)? * irrep_dimension(&lambda) as i64;
        acc += BigRational::from_integer(chi.into()) / c;
    }
    Ok(acc / BigRational::from_integer(BigInt::from(factorial(k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permutations::enumerate;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn rf(n: &[i64], d: &[i64]) -> RationalFunction {
        RationalFunction::new(Polynomial::from_i64(n), Polynomial::from_i64(d)).unwrap()
    }

    #[test]
    fn small_k_closed_forms() {
        let id1 = Permutation::identity(1);
        assert_eq!(wg_symbolic(&id1, 1).unwrap(), rf(&[1], &[0, 1]));
        let id2 = Permutation::identity(2);
        let swap = Permutation::from_one_based(&[2, 1]).unwrap();
        assert_eq!(wg_symbolic(&id2, 2).unwrap(), rf(&[1], &[-1, 0, 1]));
        assert_eq!(wg_symbolic(&swap, 2).unwrap(), rf(&[-1], &[0, -1, 0, 1]));
        assert!(matches!(
            wg_symbolic(&Permutation::identity(7), 7),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn gram_small_cases() {
        let g = wg_gram(1, 5).unwrap();
        assert_eq!(g[&Permutation::identity(1)], q(1, 5));
        let g = wg_gram(2, 4).unwrap();
        assert_eq!(g[&Permutation::identity(2)], q(1, 15));
        assert_eq!(g[&Permutation::from_one_based(&[2, 1]).unwrap()], q(-1, 60));
        assert!(matches!(wg_gram(3, 2), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn symbolic_matches_gram() {
        for k in 1..=4 {
            for d in k as u64..=k as u64 + 2 {
                for (p, v) in wg_gram(k, d).unwrap() {
                    let s = wg_symbolic(&p, k).unwrap().evaluate_int(d as i64).unwrap();
                    assert_eq!(s, v, "k={k} d={d} σ={p}");
                }
            }
        }
    }

    #[test]
    fn restricted_cases() {
        for k in 1..=4 {
            for d in k as u64..k as u64 + 3 {
                for p in enumerate(k).unwrap() {
                    let s = wg_symbolic(&p, k).unwrap().evaluate_int(d as i64).unwrap();
                    assert_eq!(wg_restricted(&p, k, d).unwrap(), s);
                }
            }
        }
        // only λ = (3): χ = 1, f = 1, c(1) = 1·2·3
        for p in enumerate(3).unwrap() {
            assert_eq!(wg_restricted(&p, 3, 1).unwrap(), q(1, 36));
        }
        // only λ = (2): c(1) = 1·2
        for p in enumerate(2).unwrap() {
            assert_eq!(wg_restricted(&p, 2, 1).unwrap(), q(1, 4));
        }
    }

    #[test]
    fn orthogonality_is_symbolic_identity() {
        for k in 1..=4 {
            let g = SymmetricGroup::get(k).unwrap();
            let t = WeingartenTable::get(k).unwrap();
            let wg: Vec<&RationalFunction> =
                (0..g.order()).map(|i| t.value(g.element(i)).unwrap()).collect();
            let dpow: Vec<RationalFunction> = (0..=k)
                .map(|e| RationalFunction::from_polynomial(Polynomial::monomial(e, BigRational::one())))
                .collect();
            for s in 0..g.order() {
                for p in [0, g.order() - 1, s] {
                    let mut acc = RationalFunction::zero();
                    for tau in 0..g.order() {
                        let term = &dpow[g.cycles(g.left_div(s, tau))] * wg[g.left_div(tau, p)];
                        acc = &acc + &term;
                    }
                    let want = if s == p { RationalFunction::one() } else { RationalFunction::zero() };
                    assert_eq!(acc, want, "k={k}");
                }
            }
        }
    }

    #[test]
    fn leading_order_and_sign() {
        for k in 1..=5 {
            for p in enumerate(k).unwrap() {
                let (order, lead) = wg_symbolic(&p, k).unwrap().asymptotic_order().unwrap();
                assert_eq!(order, -((2 * k - p.cycle_count()) as i64));
                assert_eq!(lead > BigRational::zero(), p.sign() > 0);
            }
        }
    }
}
