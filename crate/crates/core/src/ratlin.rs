//! Sparse Gaussian elimination over ℚ with several right-hand sides.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::number::Rational;

/// Incremental row-echelon system `A x = B` (B has `nrhs` columns).
pub struct RatSystem {
    ncols: usize,
    nrhs: usize,
    /// pivot column → (row entries right of the pivot, normalized rhs)
    pivots: BTreeMap<usize, (BTreeMap<usize, Rational>, Vec<Rational>)>,
    /// rhs columns found inconsistent
    pub inconsistent: Vec<bool>,
}

impl RatSystem {
    pub fn new(ncols: usize, nrhs: usize) -> RatSystem {
        RatSystem { ncols, nrhs, pivots: BTreeMap::new(), inconsistent: vec![false; nrhs] }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds one equation.
    pub fn push(&mut self, mut row: BTreeMap<usize, Rational>, mut rhs: Vec<Rational>) {
        row.retain(|_, v| !v.is_zero());
        loop {
            let next = row.keys().copied().find(|c| self.pivots.contains_key(c));
            let Some(c) = next else { break };
            let f = row.remove(&c).unwrap();
            let (prow, prhs) = &self.pivots[&c];
            for (&k, v) in prow {
                let e = row.entry(k).or_insert_with(Rational::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(&k);
                }
            }
            for (r, pr) in rhs.iter_mut().zip(prhs) {
                if !pr.is_zero() {
                    *r -= &f * pr;
                }
            }
        }
        match row.keys().next().copied() {
            None => {
                for (j, r) in rhs.iter().enumerate() {
                    if !r.is_zero() {
                        self.inconsistent[j] = true;
                    }
                }
            }
            Some(p) => {
                let lead = row.remove(&p).unwrap();
                for v in row.values_mut() {
                    *v /= &lead;
                }
                for r in rhs.iter_mut() {
                    *r /= &lead;
                }
                self.pivots.insert(p, (row, rhs));
            }
        }
    }

    pub fn consistent(&self) -> bool {
        !self.inconsistent.iter().any(|&b| b)
    }

    /// Particular solution with free variables set to zero, one vector per rhs.
    pub fn solve(&self) -> Option<Vec<Vec<Rational>>> {
        if !self.consistent() {
            return None;
        }
        let mut x = vec![vec![Rational::zero(); self.ncols]; self.nrhs];
        for (&p, (row, rhs)) in self.pivots.iter().rev() {
            for j in 0..self.nrhs {
                let mut v = rhs[j].clone();
                for (&k, a) in row {
                    if !x[j][k].is_zero() {
                        v -= a * &x[j][k];
                    }
                }
                x[j][p] = v;
            }
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat_int;

    fn row(pairs: &[(usize, i64)]) -> BTreeMap<usize, Rational> {
        pairs.iter().map(|&(c, v)| (c, rat_int(v))).collect()
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let mut s = RatSystem::new(2, 2);
        s.push(row(&[(0, 1), (1, 1)]), vec![rat_int(3), rat_int(1)]);
        s.push(row(&[(0, 1), (1, -1)]), vec![rat_int(1), rat_int(1)]);
        s.push(row(&[(0, 2)]), vec![rat_int(4), rat_int(2)]);
        let x = s.solve().unwrap();
        assert_eq!(x[0], vec![rat_int(2), rat_int(1)]);
        assert_eq!(x[1], vec![rat_int(1), rat_int(0)]);
        s.push(row(&[(1, 1)]), vec![rat_int(2), rat_int(0)]);
        assert!(s.inconsistent[0]);
        assert!(!s.inconsistent[1]);
    }
}
