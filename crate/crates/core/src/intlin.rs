//! Sparse unimodular diagonalization `U M V = D` of integer matrices, with
//! the row and column operations recorded so that `U`, `U⁻¹` and `V` can be
//! applied to vectors afterwards.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::number::Rational;

#[derive(Clone, Debug)]
enum Op {
    /// `row[dst] += f · row[src]`
    RowAdd { dst: usize, src: usize, f: i128 },
    /// `(row_i, row_j) ← (a row_i + b row_j, c row_i + d row_j)`, det ±1
    Row2 { i: usize, j: usize, m: [i128; 4] },
    /// `col[dst] += f · col[src]`
    ColAdd { dst: usize, src: usize, f: i128 },
    Col2 { i: usize, j: usize, m: [i128; 4] },
}

/// A pivot of the diagonal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pivot {
    pub row: usize,
    pub col: usize,
    pub value: i128,
}

/// Result of diagonalizing an `nrows × ncols` integer matrix.
#[derive(Clone, Debug)]
pub struct Diagonal {
    pub nrows: usize,
    pub ncols: usize,
    ops: Vec<Op>,
    pub pivots: Vec<Pivot>,
    pivot_row: Vec<Option<usize>>,
}

fn ovf(what: &str) -> Error {
    Error::Overflow(what.to_string())
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a x + b y = g > 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

struct Work {
    rows: Vec<BTreeMap<usize, i128>>,
    cols: Vec<BTreeSet<usize>>,
    ops: Vec<Op>,
}

impl Work {
    fn get(&self, r: usize, c: usize) -> i128 {
        self.rows[r].get(&c).copied().unwrap_or(0)
    }

    fn set(&mut self, r: usize, c: usize, v: i128) {
        if v == 0 {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    fn row_add(&mut self, dst: usize, src: usize, f: i128) -> Result<()> {
        if f == 0 {
            return Ok(());
        }
        let src_row: Vec<(usize, i128)> = self.rows[src].iter().map(|(&c, &v)| (c, v)).collect();
        for (c, v) in src_row {
            let nv = self.get(dst, c).checked_add(f.checked_mul(v).ok_or_else(|| ovf("row operation"))?);
            self.set(dst, c, nv.ok_or_else(|| ovf("row operation"))?);
        }
        self.ops.push(Op::RowAdd { dst, src, f });
        Ok(())
    }

    fn col_add(&mut self, dst: usize, src: usize, f: i128) -> Result<()> {
        if f == 0 {
            return Ok(());
        }
        let src_col: Vec<usize> = self.cols[src].iter().copied().collect();
        for r in src_col {
            let v = self.get(r, src);
            let nv = self.get(r, dst).checked_add(f.checked_mul(v).ok_or_else(|| ovf("column operation"))?);
            self.set(r, dst, nv.ok_or_else(|| ovf("column operation"))?);
        }
        self.ops.push(Op::ColAdd { dst, src, f });
        Ok(())
    }

    fn row2(&mut self, i: usize, j: usize, m: [i128; 4]) -> Result<()> {
        let cs: BTreeSet<usize> = self.rows[i].keys().chain(self.rows[j].keys()).copied().collect();
        for c in cs {
            let (x, y) = (self.get(i, c), self.get(j, c));
            let nx = m[0].checked_mul(x).and_then(|p| m[1].checked_mul(y).and_then(|q| p.checked_add(q)));
            let ny = m[2].checked_mul(x).and_then(|p| m[3].checked_mul(y).and_then(|q| p.checked_add(q)));
            self.set(i, c, nx.ok_or_else(|| ovf("row operation"))?);
            self.set(j, c, ny.ok_or_else(|| ovf("row operation"))?);
        }
        self.ops.push(Op::Row2 { i, j, m });
        Ok(())
    }

    fn col2(&mut self, i: usize, j: usize, m: [i128; 4]) -> Result<()> {
        let rs: BTreeSet<usize> = self.cols[i].iter().chain(self.cols[j].iter()).copied().collect();
        for r in rs {
            let (x, y) = (self.get(r, i), self.get(r, j));
            let nx = m[0].checked_mul(x).and_then(|p| m[1].checked_mul(y).and_then(|q| p.checked_add(q)));
            let ny = m[2].checked_mul(x).and_then(|p| m[3].checked_mul(y).and_then(|q| p.checked_add(q)));
            self.set(r, i, nx.ok_or_else(|| ovf("column operation"))?);
            self.set(r, j, ny.ok_or_else(|| ovf("column operation"))?);
        }
        self.ops.push(Op::Col2 { i, j, m });
        Ok(())
    }
}

impl Diagonal {
    /// Diagonalizes the matrix given as `(row, col, value)` triplets.
    pub fn new(nrows: usize, ncols: usize, entries: &[(usize, usize, i64)]) -> Result<Diagonal> {
        let mut w = Work { rows: vec![BTreeMap::new(); nrows], cols: vec![BTreeSet::new(); ncols], ops: Vec::new() };
        for &(r, c, v) in entries {
            let nv = w.get(r, c) + v as i128;
            w.set(r, c, nv);
        }
        let mut pivots = Vec::new();
        let mut active_rows: BTreeSet<usize> = (0..nrows).filter(|&r| !w.rows[r].is_empty()).collect();
        loop {
            // pick pivot: smallest |value|, then smallest Markowitz cost
            let mut best: Option<(i128, usize, usize, usize)> = None;
            for &r in &active_rows {
                let rn = w.rows[r].len();
                for (&c, &v) in &w.rows[r] {
                    let cost = (rn - 1) * (w.cols[c].len() - 1);
                    let key = (v.abs(), cost, r, c);
                    if best.map(|b| (key.0, key.1) < (b.0, b.1)).unwrap_or(true) {
                        best = Some(key);
                    }
                }
                if let Some(b) = best {
                    if b.0 == 1 && b.1 == 0 {
                        break;
                    }
                }
            }
            let Some((_, _, pr, pc)) = best else { break };
            loop {
                let mut changed = false;
                let col_rows: Vec<usize> = w.cols[pc].iter().copied().filter(|&r| r != pr).collect();
                for r in col_rows {
                    let p = w.get(pr, pc);
                    let a = w.get(r, pc);
                    if a == 0 {
                        continue;
                    }
                    if a % p == 0 {
                        w.row_add(r, pr, -(a / p))?;
                    } else {
                        let (g, x, y) = ext_gcd(p, a);
                        w.row2(pr, r, [x, y, -(a / g), p / g])?;
                        changed = true;
                    }
                }
                let row_cols: Vec<usize> = w.rows[pr].keys().copied().filter(|&c| c != pc).collect();
                for c in row_cols {
                    let p = w.get(pr, pc);
                    let a = w.get(pr, c);
                    if a == 0 {
                        continue;
                    }
                    if a % p == 0 {
                        w.col_add(c, pc, -(a / p))?;
                    } else {
                        let (g, x, y) = ext_gcd(p, a);
                        w.col2(pc, c, [x, y, -(a / g), p / g])?;
                        changed = true;
                    }
                }
                if !changed && w.cols[pc].len() == 1 && w.rows[pr].len() == 1 {
                    break;
                }
            }
            let v = w.get(pr, pc);
            pivots.push(Pivot { row: pr, col: pc, value: v });
            w.set(pr, pc, 0);
            active_rows.remove(&pr);
            active_rows.retain(|&r| !w.rows[r].is_empty());
        }
        let mut pivot_row = vec![None; nrows];
        for (i, p) in pivots.iter().enumerate() {
            pivot_row[p.row] = Some(i);
        }
        Ok(Diagonal { nrows, ncols, ops: w.ops, pivots, pivot_row })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `U x` for a rational vector of length `nrows`.
    pub fn apply_u(&self, x: &mut [Rational]) {
        for op in &self.ops {
            match *op {
                Op::RowAdd { dst, src, f } => {
                    let t = &x[src] * Rational::from_integer(BigInt::from(f));
                    x[dst] += t;
                }
                Op::Row2 { i, j, m } => {
                    let (a, b) = (x[i].clone(), x[j].clone());
                    x[i] = &a * big(m[0]) + &b * big(m[1]);
                    x[j] = &a * big(m[2]) + &b * big(m[3]);
                }
                _ => {}
            }
        }
    }

    /// `U⁻¹ x`.
    pub fn apply_u_inv(&self, x: &mut [Rational]) {
        for op in self.ops.iter().rev() {
            match *op {
                Op::RowAdd { dst, src, f } => {
                    let t = &x[src] * Rational::from_integer(BigInt::from(f));
                    x[dst] -= t;
                }
                Op::Row2 { i, j, m } => {
                    let det = m[0] * m[3] - m[1] * m[2];
                    let (a, b) = (x[i].clone(), x[j].clone());
                    // inverse of [[m0, m1], [m2, m3]] is det · [[m3, -m1], [-m2, m0]] for det = ±1
                    x[i] = (&a * big(m[3]) - &b * big(m[1])) * big(det);
                    x[j] = (&b * big(m[0]) - &a * big(m[2])) * big(det);
                }
                _ => {}
            }
        }
    }

    /// `V y` for a vector of length `ncols`.
    pub fn apply_v(&self, y: &mut [Rational]) {
        for op in self.ops.iter().rev() {
            match *op {
                Op::ColAdd { dst, src, f } => {
                    let t = &y[dst] * Rational::from_integer(BigInt::from(f));
                    y[src] += t;
                }
                Op::Col2 { i, j, m } => {
                    let (a, b) = (y[i].clone(), y[j].clone());
                    y[i] = &a * big(m[0]) + &b * big(m[2]);
                    y[j] = &a * big(m[1]) + &b * big(m[3]);
                }
                _ => {}
            }
        }
    }

    /// Splits a rational vector `k` (length `nrows`) as `k = z + M r` with `z`
    /// integral, if possible.  On failure returns the first non-integral
    /// period (a value of `k` on an integer cycle).
    pub fn integral_split(&self, k: &[Rational]) -> std::result::Result<(Vec<BigInt>, Vec<Rational>), Rational> {
        let mut c = k.to_vec();
        self.apply_u(&mut c);
        for (i, ci) in c.iter().enumerate() {
            if self.pivot_row[i].is_none() && !ci.is_integer() {
                return Err(ci.clone());
            }
        }
        let mut zc: Vec<Rational> = c
            .iter()
            .enumerate()
            .map(|(i, ci)| if self.pivot_row[i].is_none() { ci.clone() } else { Rational::zero() })
            .collect();
        self.apply_u_inv(&mut zc);
        let z = zc.into_iter().map(|v| v.to_integer()).collect();
        let mut y = vec![Rational::zero(); self.ncols];
        for p in &self.pivots {
            y[p.col] = &c[p.row] / big(p.value);
        }
        self.apply_v(&mut y);
        Ok((z, y))
    }

    /// Integer solution `n` of `M n = k`, if one exists.
    pub fn int_preimage(&self, k: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut c: Vec<Rational> = k.iter().map(|v| Rational::from_integer(v.clone())).collect();
        self.apply_u(&mut c);
        for (i, ci) in c.iter().enumerate() {
            if self.pivot_row[i].is_none() && !ci.is_zero() {
                return None;
            }
        }
        let mut y = vec![Rational::zero(); self.ncols];
        for p in &self.pivots {
            let q = &c[p.row] / big(p.value);
            if !q.is_integer() {
                return None;
            }
            y[p.col] = q;
        }
        self.apply_v(&mut y);
        Some(y.into_iter().map(|v| v.to_integer()).collect())
    }

    /// Nonunit diagonal entries (torsion coefficients), sorted.
    pub fn torsion(&self) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.pivots.iter().filter(|p| p.value.abs() != 1).map(|p| big(p.value.abs())).collect();
        v.sort();
        v
    }
}

fn big(v: i128) -> BigInt {
    BigInt::from(v)
}

/// `gcd` of a list of integers (0 for the empty list).
pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |a, b| a.gcd(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use num_traits::Signed;

    fn mat_mul(entries: &[(usize, usize, i64)], nrows: usize, x: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); nrows];
        for &(r, c, v) in entries {
            out[r] += &x[c] * Rational::from_integer(BigInt::from(v));
        }
        out
    }

    #[test]
    fn circle_boundary() {
        // δ from vertices {0,1,2} to edges {01, 12, 02}
        let m = [(0, 0, -1), (0, 1, 1), (1, 1, -1), (1, 2, 1), (2, 0, -1), (2, 2, 1)];
        let d = Diagonal::new(3, 3, &m).unwrap();
        assert_eq!(d.rank(), 2);
        let k = vec![rat(1, 2), Rational::zero(), Rational::zero()];
        let err = d.integral_split(&k).unwrap_err();
        assert_eq!(err.abs(), rat(1, 2));
        let k = vec![rat(3, 2), rat(-1, 2), Rational::zero()];
        let (z, r) = d.integral_split(&k).unwrap();
        let mr = mat_mul(&m, 3, &r);
        for i in 0..3 {
            assert_eq!(Rational::from_integer(z[i].clone()) + &mr[i], k[i]);
        }
    }

    #[test]
    fn torsion_detected() {
        // [[2, 0], [0, 3]] has diagonal form diag(1, 6)
        let m = [(0, 0, 2), (1, 1, 3)];
        let d = Diagonal::new(2, 2, &m).unwrap();
        assert_eq!(d.rank(), 2);
        let prod: i128 = d.pivots.iter().map(|p| p.value.abs()).product();
        assert_eq!(prod, 6);
        assert!(d.int_preimage(&[BigInt::from(4), BigInt::from(3)]).is_some());
        assert!(d.int_preimage(&[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn preimage_round_trip() {
        let m = [(0, 0, 3), (0, 1, 5), (1, 0, 2), (1, 2, 7), (2, 1, 4), (2, 2, -1)];
        let d = Diagonal::new(3, 3, &m).unwrap();
        let x = [BigInt::from(2), BigInt::from(-1), BigInt::from(3)];
        let xr: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
        let k: Vec<BigInt> = mat_mul(&m, 3, &xr).into_iter().map(|v| v.to_integer()).collect();
        let n = d.int_preimage(&k).unwrap();
        let nr: Vec<Rational> = n.iter().map(|v| Rational::from_integer(v.clone())).collect();
        let back: Vec<BigInt> = mat_mul(&m, 3, &nr).into_iter().map(|v| v.to_integer()).collect();
        assert_eq!(back, k);
    }
}
