//! Dense factors over `S_k`-valued variables and sum-product elimination.

use std::ops::{AddAssign, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalar type a partition function can be accumulated in.
pub trait Weight:
    Clone + Send + Sync + Zero + One + for<'a> AddAssign<&'a Self> + for<'a> Mul<&'a Self, Output = Self>
{
}

impl Weight for BigInt {}
impl Weight for f64 {}

/// Limits on the size of any intermediate factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maximum number of entries in one dense factor or transfer state.
    pub max_entries: usize,
    /// Maximum number of multiply-adds for one elimination step.
    pub max_work: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_entries: 1 << 24,
            max_work: 1 << 28,
        }
    }
}

/// Table over `vars`, row-major in the listed order (last variable fastest).
#[derive(Clone, Debug)]
pub struct Factor<T> {
    pub vars: Vec<usize>,
    pub data: Vec<T>,
}

fn checked_pow(m: usize, e: usize) -> Option<usize> {
    (0..e).try_fold(1usize, |acc, _| acc.checked_mul(m))
}

impl<T: Weight> Factor<T> {
    pub fn scalar(v: T) -> Self {
        Factor {
            vars: Vec::new(),
            data: vec![v],
        }
    }

    /// Tabulates `f` over every assignment of `vars` (given in the same order).
    pub fn from_fn(vars: Vec<usize>, m: usize, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let size = checked_pow(m, vars.len()).expect("factor size overflow");
        let mut assign = vec![0usize; vars.len()];
        let mut data = Vec::with_capacity(size);
        for _ in 0..size {
            data.push(f(&assign));
            increment(&mut assign, m);
        }
        Factor { vars, data }
    }

    /// Stride of each variable of `self` when indexed by an assignment of `frame`.
    fn strides_in(&self, frame: &[usize], m: usize) -> Vec<usize> {
        let mut strides = vec![0usize; frame.len()];
        let mut s = 1;
        for &v in self.vars.iter().rev() {
            let pos = frame.iter().position(|&x| x == v).expect("factor variable outside frame");
            strides[pos] += s;
            s *= m;
        }
        strides
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Restricts to the values in `fixed` (indexed by variable id) for every variable
    /// that has one; the result ranges over the remaining variables.
    pub fn condition(&self, fixed: &[Option<usize>], m: usize) -> Self {
        let free: Vec<usize> = self.vars.iter().copied().filter(|&v| fixed[v].is_none()).collect();
        let mut offset = 0usize;
        let mut free_strides = Vec::with_capacity(free.len());
        let mut s = 1;
        for &v in self.vars.iter().rev() {
            match fixed[v] {
                Some(x) => offset += x * s,
                None => free_strides.push(s),
            }
            s *= m;
        }
        free_strides.reverse();
        Factor::from_fn(free, m, |a| {
            let idx: usize = offset + a.iter().zip(&free_strides).map(|(x, st)| x * st).sum::<usize>();
            self.data[idx].clone()
        })
    }

    /// Appends `var` as the fastest axis, constant along it.
    pub fn extend(&self, var: usize, m: usize) -> Self {
        let mut data = Vec::with_capacity(self.data.len() * m);
        for v in &self.data {
            for _ in 0..m {
                data.push(v.clone());
            }
        }
        let mut vars = self.vars.clone();
        vars.push(var);
        Factor { vars, data }
    }

    /// Pointwise product with `f`, whose variables must all be present in `self`.
    pub fn multiply(&mut self, f: &Factor<T>, m: usize) {
        let strides = f.strides_in(&self.vars, m);
        let mut assign = vec![0usize; self.vars.len()];
        for v in self.data.iter_mut() {
            if !v.is_zero() {
                let idx: usize = assign.iter().zip(&strides).map(|(a, s)| a * s).sum();
                let w = &f.data[idx];
                if w.is_zero() {
                    *v = T::zero();
                } else {
                    *v = std::mem::replace(v, T::zero()) * w;
                }
            }
            increment(&mut assign, m);
        }
    }

    /// Sums out `var`.
    pub fn sum_out(&self, var: usize, m: usize) -> Self {
        let pos = self.vars.iter().position(|&x| x == var).expect("variable not in factor");
        let inner = checked_pow(m, self.vars.len() - 1 - pos).expect("overflow");
        let outer = self.data.len() / (inner * m);
        let mut data = vec![T::zero(); outer * inner];
        for o in 0..outer {
            for x in 0..m {
                let base = (o * m + x) * inner;
                for i in 0..inner {
                    let v = &self.data[base + i];
                    if !v.is_zero() {
                        data[o * inner + i] += v;
                    }
                }
            }
        }
        let mut vars = self.vars.clone();
        vars.remove(pos);
        Factor { vars, data }
    }
}

fn increment(assign: &mut [usize], m: usize) {
    for a in assign.iter_mut().rev() {
        *a += 1;
        if *a < m {
            return;
        }
        *a = 0;
    }
}

/// Sums the product of `factors` over all variables, eliminating greedily by the size of
/// the factor each step creates (ties broken by variable id, so the order is fixed).
pub fn eliminate_all<T: Weight>(mut factors: Vec<Factor<T>>, m: usize, budget: Budget) -> Result<T> {
    let mut remaining: Vec<usize> = factors.iter().flat_map(|f| f.vars.iter().copied()).collect();
    remaining.sort_unstable();
    remaining.dedup();

    while !remaining.is_empty() {
        let (pos, var, scope) = remaining
            .iter()
            .enumerate()
            .map(|(pos, &v)| {
                let mut scope: Vec<usize> = factors
                    .iter()
                    .filter(|f| f.vars.contains(&v))
                    .flat_map(|f| f.vars.iter().copied())
                    .filter(|&x| x != v)
                    .collect();
                scope.sort_unstable();
                scope.dedup();
                (pos, v, scope)
            })
            .min_by_key(|(_, v, scope)| (scope.len(), *v))
            .expect("nonempty");
        remaining.remove(pos);

        let entries = checked_pow(m, scope.len()).filter(|&e| e <= budget.max_entries);
        let work = entries.and_then(|e| e.checked_mul(m)).filter(|&w| w <= budget.max_work);
        if work.is_none() {
            return Err(Error::BudgetExceeded(format!(
                "eliminating a variable would create a factor over {} variables of domain {m}",
                scope.len()
            )));
        }

        let (touching, rest): (Vec<_>, Vec<_>) =
            factors.into_iter().partition(|f| f.vars.contains(&var));
        factors = rest;
        factors.push(sum_product(&touching, scope, var, m));
    }
    let mut acc = T::one();
    for f in &factors {
        acc = acc * &f.data[0];
    }
    Ok(acc)
}

/// `Σ_var ∏ touching` as a factor over `scope`.
fn sum_product<T: Weight>(touching: &[Factor<T>], scope: Vec<usize>, var: usize, m: usize) -> Factor<T> {
    let mut frame = scope.clone();
    frame.push(var);
    let strides: Vec<Vec<usize>> = touching.iter().map(|f| f.strides_in(&frame, m)).collect();
    let size = checked_pow(m, scope.len()).expect("checked by caller");
    let mut assign = vec![0usize; scope.len()];
    let mut data = Vec::with_capacity(size);
    let mut bases = vec![0usize; touching.len()];
    for _ in 0..size {
        for (b, s) in bases.iter_mut().zip(&strides) {
            *b = assign.iter().zip(s).map(|(a, st)| a * st).sum();
        }
        let mut total = T::zero();
        'values: for x in 0..m {
            let mut prod: Option<T> = None;
            for (f, (b, s)) in touching.iter().zip(bases.iter().zip(&strides)) {
                let w = &f.data[b + x * s[scope.len()]];
                if w.is_zero() {
                    continue 'values;
                }
                prod = Some(match prod {
                    None => w.clone(),
                    Some(p) => p * w,
                });
            }
            if let Some(p) = prod {
                total += &p;
            }
        }
        data.push(total);
        increment(&mut assign, m);
    }
    Factor { vars: scope, data }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elimination_matches_brute_force() {
        // chain a-b-c with small integer tables, m = 3
        let m = 3;
        let f1 = Factor::from_fn(vec![0, 1], m, |a| BigInt::from(1 + a[0] + 2 * a[1]));
        let f2 = Factor::from_fn(vec![1, 2], m, |a| BigInt::from((a[0] * a[1]) as i64 - 1));
        let f3 = Factor::from_fn(vec![2, 0], m, |a| BigInt::from(2 + a[0] as i64 - a[1] as i64));
        let mut brute = BigInt::zero();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    brute += BigInt::from(1 + a + 2 * b)
                        * BigInt::from((b * c) as i64 - 1)
                        * BigInt::from(2 + c as i64 - a as i64);
                }
            }
        }
        let z = eliminate_all(vec![f1, f2, f3], m, Budget::default()).unwrap();
        assert_eq!(z, brute);
    }

    #[test]
    fn state_operations() {
        let m = 2;
        let mut s = Factor::scalar(1.0f64).extend(5, m).extend(7, m);
        let f = Factor::from_fn(vec![7, 5], m, |a| (1 + a[0] + 10 * a[1]) as f64);
        s.multiply(&f, m);
        // s[x5, x7] = 1 + x7 + 10 x5
        assert_eq!(s.data, vec![1.0, 2.0, 11.0, 12.0]);
        let r = s.sum_out(5, m);
        assert_eq!(r.vars, vec![7]);
        assert_eq!(r.data, vec![12.0, 14.0]);
    }

    #[test]
    fn budget_is_enforced() {
        let m = 4;
        let f = Factor::from_fn(vec![0, 1, 2, 3], m, |_| BigInt::one());
        let tiny = Budget {
            max_entries: 8,
            max_work: 1000,
        };
        assert!(matches!(
            eliminate_all(vec![f], m, tiny),
            Err(Error::BudgetExceeded(_))
        ));
    }
}
