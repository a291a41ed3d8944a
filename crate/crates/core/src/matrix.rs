//! Sparse matrices over Z with exact rank and Smith normal form.
//!
//! Everything here is exact: entries are `BigInt`, elimination never
//! divides unless the quotient is known to be integral, and the two
//! decision procedures (`rank` by scaled fraction-free elimination,
//! `smith_normal_form` by unimodular reduction) are implemented
//! independently so they can cross-check each other.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix in triplet form.
///
/// Invariant: `entries` is sorted by (row, col), has no duplicate
/// positions and no zero values. `rows`/`cols` are logical dimensions;
/// either may be zero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<(usize, usize, BigInt)>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat({}x{}, nnz={})", self.rows, self.cols, self.entries.len())
    }
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, entries: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        IntMat {
            rows: n,
            cols: n,
            entries: (0..n).map(|i| (i, i, BigInt::one())).collect(),
        }
    }

    /// Build from an arbitrary triplet iterator; duplicate positions are
    /// summed, zero sums dropped. Panics on out-of-range indices.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut acc: HashMap<(usize, usize), BigInt> = HashMap::new();
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of {rows}x{cols}");
            if v.is_zero() {
                continue;
            }
            let slot = acc.entry((r, c)).or_insert_with(BigInt::zero);
            *slot += v;
        }
        let mut entries: Vec<(usize, usize, BigInt)> = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|((r, c), v)| (r, c, v))
            .collect();
        entries.sort_by_key(|(r, c, _)| (*r, *c));
        IntMat { rows, cols, entries }
    }

    /// Convenience for tests and small fixed matrices.
    pub fn from_dense(data: &[Vec<i64>]) -> Self {
        let rows = data.len();
        let cols = data.first().map_or(0, |r| r.len());
        for row in data {
            assert_eq!(row.len(), cols, "ragged dense matrix");
        }
        IntMat::from_triplets(
            rows,
            cols,
            data.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(c, &v)| (r, c, BigInt::from(v)))
            }),
        )
    }

    pub fn entries(&self) -> &[(usize, usize, BigInt)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        match self
            .entries
            .binary_search_by_key(&(r, c), |(er, ec, _)| (*er, *ec))
        {
            Ok(i) => self.entries[i].2.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Sparse column j as (row, value) pairs, ascending rows.
    pub fn col(&self, j: usize) -> Vec<(usize, BigInt)> {
        self.entries
            .iter()
            .filter(|(_, c, _)| *c == j)
            .map(|(r, _, v)| (*r, v.clone()))
            .collect()
    }

    pub fn transpose(&self) -> IntMat {
        IntMat::from_triplets(
            self.cols,
            self.rows,
            self.entries.iter().map(|(r, c, v)| (*c, *r, v.clone())),
        )
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut other_by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (r, c, v) in &other.entries {
            other_by_row[*r].push((*c, v));
        }
        let mut acc: HashMap<(usize, usize), BigInt> = HashMap::new();
        for (r, k, v) in &self.entries {
            for (c, w) in &other_by_row[*k] {
                let slot = acc.entry((*r, *c)).or_insert_with(BigInt::zero);
                *slot += v * *w;
            }
        }
        IntMat::from_triplets(self.rows, other.cols, acc.into_iter().map(|((r, c), v)| (r, c, v)))
    }

    pub fn add(&self, other: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMat::from_triplets(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .chain(other.entries.iter())
                .map(|(r, c, v)| (*r, *c, v.clone())),
        )
    }

    pub fn neg(&self) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(r, c, v)| (*r, *c, -v)).collect(),
        }
    }

    /// Apply to a sparse column vector given as (index, coeff) pairs.
    pub fn apply_column(&self, col: &[(usize, BigInt)]) -> Vec<(usize, BigInt)> {
        let mut acc: HashMap<usize, BigInt> = HashMap::new();
        let mut by_col: HashMap<usize, Vec<(usize, &BigInt)>> = HashMap::new();
        for (r, c, v) in &self.entries {
            by_col.entry(*c).or_default().push((*r, v));
        }
        for (idx, coeff) in col {
            if let Some(col_entries) = by_col.get(idx) {
                for (r, v) in col_entries {
                    let slot = acc.entry(*r).or_insert_with(BigInt::zero);
                    *slot += coeff * *v;
                }
            }
        }
        let mut out: Vec<(usize, BigInt)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Exact rank over Q (equivalently over Z) by sparse elimination.
    ///
    /// Pivots prefer unit entries, then low Markowitz fill count. Rows are
    /// rescaled by p/gcd during elimination, which is harmless for rank.
    pub fn rank(&self) -> usize {
        Eliminator::new(self).rank()
    }

    /// Invariant factors d_1 | d_2 | ... | d_r of the Smith normal form,
    /// one per nonzero diagonal entry (so the length equals the rank).
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        smith(self)
    }
}

/// Row-major sparse elimination workspace for rank computation.
struct Eliminator {
    /// Live rows: sorted (col, value) lists.
    rows: Vec<Vec<(usize, BigInt)>>,
    /// col -> set of live row indices with a nonzero there.
    col_rows: Vec<Vec<usize>>,
}

impl Eliminator {
    fn new(m: &IntMat) -> Self {
        let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); m.rows];
        for (r, c, v) in &m.entries {
            rows[*r].push((*c, v.clone()));
        }
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); m.cols];
        for (r, row) in rows.iter().enumerate() {
            for (c, _) in row {
                col_rows[*c].push(r);
            }
        }
        Eliminator { rows, col_rows }
    }

    fn refresh_col(&mut self, c: usize) {
        let rows = &self.rows;
        self.col_rows[c].retain(|&r| rows[r].iter().any(|(rc, _)| *rc == c));
    }

    fn rank(mut self) -> usize {
        let mut rank = 0;
        loop {
            // Pivot selection: best (unit-ness, markowitz, value size).
            let mut best: Option<(usize, usize, (u8, usize, usize))> = None;
            for r in 0..self.rows.len() {
                if self.rows[r].is_empty() {
                    continue;
                }
                let rlen = self.rows[r].len();
                for (c, v) in &self.rows[r] {
                    let clen = self.col_rows[*c].len();
                    let unit = if v.abs().is_one() { 0u8 } else { 1u8 };
                    let mark = (rlen - 1) * (clen.saturating_sub(1));
                    let digits = v.bits() as usize;
                    let key = (unit, mark, digits);
                    if best.as_ref().map_or(true, |(_, _, bk)| key < *bk) {
                        best = Some((r, *c, key));
                    }
                }
            }
            let Some((pr, pc, _)) = best else {
                return rank;
            };
            rank += 1;
            let pivot_row = std::mem::take(&mut self.rows[pr]);
            let p = pivot_row
                .iter()
                .find(|(c, _)| *c == pc)
                .map(|(_, v)| v.clone())
                .expect("pivot entry present");
            let victims: Vec<usize> = self.col_rows[pc]
                .iter()
                .copied()
                .filter(|&r| r != pr && !self.rows[r].is_empty())
                .collect();
            let mut touched: Vec<usize> = vec![pc];
            for r in victims {
                let a = match self.rows[r].iter().find(|(c, _)| *c == pc) {
                    Some((_, v)) => v.clone(),
                    None => continue,
                };
                let g = p.gcd(&a);
                let scale_self = &p / &g;
                let scale_piv = &a / &g;
                // row_r <- scale_self * row_r - scale_piv * pivot_row
                let mut merged: HashMap<usize, BigInt> = HashMap::new();
                for (c, v) in &self.rows[r] {
                    merged.insert(*c, v * &scale_self);
                }
                for (c, v) in &pivot_row {
                    let slot = merged.entry(*c).or_insert_with(BigInt::zero);
                    *slot -= v * &scale_piv;
                }
                let mut new_row: Vec<(usize, BigInt)> = merged
                    .into_iter()
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                new_row.sort_by_key(|(c, _)| *c);
                // Normalize by content to keep numbers small.
                if !new_row.is_empty() {
                    let mut content = new_row[0].1.abs();
                    for (_, v) in new_row.iter().skip(1) {
                        content = content.gcd(v);
                        if content.is_one() {
                            break;
                        }
                    }
                    if !content.is_one() {
                        for (_, v) in new_row.iter_mut() {
                            *v = &*v / &content;
                        }
                    }
                }
                for (c, _) in &new_row {
                    touched.push(*c);
                    if !self.col_rows[*c].contains(&r) {
                        self.col_rows[*c].push(r);
                    }
                }
                self.rows[r] = new_row;
            }
            for (c, _) in &pivot_row {
                touched.push(*c);
            }
            touched.sort_unstable();
            touched.dedup();
            for c in touched {
                self.refresh_col(c);
            }
        }
    }
}

/// Smith normal form via unimodular row/column operations only.
///
/// Phase 1 eliminates unit pivots on the sparse representation (each
/// contributes an invariant factor 1); phase 2 runs the classical
/// reduction on the leftover dense core.
fn smith(m: &IntMat) -> Vec<BigInt> {
    // Phase 1: sparse unimodular elimination at unit pivots.
    let mut rows: HashMap<usize, HashMap<usize, BigInt>> = HashMap::new();
    for (r, c, v) in m.entries() {
        rows.entry(*r).or_default().insert(*c, v.clone());
    }
    let mut ones = 0usize;
    loop {
        // Find a unit pivot minimizing fill.
        let mut col_count: HashMap<usize, usize> = HashMap::new();
        for row in rows.values() {
            for c in row.keys() {
                *col_count.entry(*c).or_insert(0) += 1;
            }
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for (&r, row) in &rows {
            let rlen = row.len();
            for (&c, v) in row {
                if !v.abs().is_one() {
                    continue;
                }
                let mark = (rlen - 1) * (col_count[&c] - 1);
                match best {
                    Some((_, _, bm)) if bm <= mark => {}
                    _ => best = Some((r, c, mark)),
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pivot_row = rows.remove(&pr).expect("pivot row live");
        let p = pivot_row[&pc].clone(); // ±1
        ones += 1;
        // Clear column pc from every other row: row <- row - (a/p) * pivot_row.
        // a/p is exact because p is a unit. Row ops with integer multipliers
        // are unimodular, so invariant factors are preserved.
        for row in rows.values_mut() {
            let Some(a) = row.get(&pc).cloned() else { continue };
            let q = &a / &p;
            for (c, v) in &pivot_row {
                let slot = row.entry(*c).or_insert_with(BigInt::zero);
                *slot -= &q * v;
                if slot.is_zero() {
                    row.remove(c);
                }
            }
        }
        // Column operations clearing the pivot row touch only the deleted
        // row afterwards, so dropping the row and the column is enough.
        for row in rows.values_mut() {
            row.remove(&pc);
        }
        rows.retain(|_, row| !row.is_empty());
    }

    // Phase 2: classical SNF on the dense core.
    let live_rows: Vec<usize> = {
        let mut v: Vec<usize> = rows.keys().copied().collect();
        v.sort_unstable();
        v
    };
    let live_cols: Vec<usize> = {
        let mut s: Vec<usize> = rows
            .values()
            .flat_map(|row| row.keys().copied())
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let col_index: HashMap<usize, usize> =
        live_cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let nr = live_rows.len();
    let nc = live_cols.len();
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); nc]; nr];
    for (i, r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            a[i][col_index[c]] = v.clone();
        }
    }

    let mut factors: Vec<BigInt> = Vec::new();
    let mut k = 0usize;
    while k < nr && k < nc {
        // Locate minimal nonzero entry in the trailing block.
        let mut pos: Option<(usize, usize)> = None;
        for i in k..nr {
            for j in k..nc {
                if a[i][j].is_zero() {
                    continue;
                }
                match pos {
                    Some((pi, pj)) if a[pi][pj].abs() <= a[i][j].abs() => {}
                    _ => pos = Some((i, j)),
                }
            }
        }
        let Some((pi, pj)) = pos else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            // Reduce column k.
            let mut clean = true;
            for i in (k + 1)..nr {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[i][k], &a[k][k]);
                if !q.is_zero() {
                    for j in k..nc {
                        let s = &q * &a[k][j];
                        a[i][j] -= s;
                    }
                }
                if !a[i][k].is_zero() {
                    // Remainder became the smaller entry: swap up and retry.
                    a.swap(k, i);
                    clean = false;
                }
            }
            // Reduce row k.
            for j in (k + 1)..nc {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = div_nearest(&a[k][j], &a[k][k]);
                if !q.is_zero() {
                    for i in k..nr {
                        let s = &q * &a[i][k];
                        a[i][j] -= s;
                    }
                }
                if !a[k][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row k and column k are clear beyond the pivot; enforce
            // divisibility of the trailing block by the pivot.
            let mut fixed = true;
            'outer: for i in (k + 1)..nr {
                for j in (k + 1)..nc {
                    if !(&a[i][j] % &a[k][k]).is_zero() {
                        // Add row i to row k; its entries re-enter row k and
                        // the next sweep shrinks the pivot.
                        for jj in k..nc {
                            let add = a[i][jj].clone();
                            a[k][jj] += add;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        let d = a[k][k].abs();
        factors.push(d);
        k += 1;
    }

    // Merge the unit factors in front; the chain property still holds.
    let mut result = vec![BigInt::one(); ones];
    result.extend(factors);
    result
}

/// Quotient rounding to nearest (ties toward zero), so the remainder has
/// absolute value at most |d|/2. Keeps classical SNF steps shrinking.
fn div_nearest(n: &BigInt, d: &BigInt) -> BigInt {
    let (mut q, r) = n.div_rem(d);
    let two_r = r.abs() * 2;
    if two_r > d.abs() {
        if n.sign() == d.sign() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_i64(data: &[Vec<i64>]) -> Vec<i64> {
        IntMat::from_dense(data)
            .smith_normal_form()
            .iter()
            .map(|v| i64::try_from(v).unwrap())
            .collect()
    }

    #[test]
    fn snf_off_diagonal_coprime() {
        assert_eq!(snf_i64(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn snf_diag_2_4() {
        assert_eq!(snf_i64(&[vec![2, 0], vec![0, 4]]), vec![2, 4]);
    }

    #[test]
    fn snf_identity() {
        assert_eq!(snf_i64(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), vec![1, 1, 1]);
    }

    #[test]
    fn snf_full_2x2() {
        // det = -2, gcd of entries 1.
        assert_eq!(snf_i64(&[vec![1, 2], vec![3, 4]]), vec![1, 2]);
    }

    #[test]
    fn snf_zero_and_empty() {
        assert_eq!(snf_i64(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        let e = IntMat::zero(0, 5);
        assert!(e.smith_normal_form().is_empty());
        assert_eq!(e.rank(), 0);
    }

    #[test]
    fn snf_torsion_klein_bottle_style() {
        // Relations matrix of Z^2 -> Z^2 with cokernel Z/2 + Z.
        assert_eq!(snf_i64(&[vec![1, 1], vec![1, -1]]), vec![1, 2]);
    }

    #[test]
    fn rank_basics() {
        assert_eq!(IntMat::from_dense(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(IntMat::from_dense(&[vec![1, 2], vec![3, 4]]).rank(), 2);
        assert_eq!(IntMat::identity(7).rank(), 7);
        assert_eq!(IntMat::zero(3, 9).rank(), 0);
    }

    #[test]
    fn rank_matches_snf_length() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]],
            vec![vec![0, 1], vec![0, 0]],
            vec![vec![3, 0, 0], vec![0, 0, 5]],
            vec![vec![6, 10, 15], vec![10, 15, 6], vec![15, 6, 10]],
        ];
        for data in cases {
            let m = IntMat::from_dense(&data);
            assert_eq!(m.rank(), m.smith_normal_form().len(), "{data:?}");
        }
    }

    #[test]
    fn snf_divisibility_chain() {
        let m = IntMat::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let f = m.smith_normal_form();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "{f:?}");
        }
    }

    #[test]
    fn mul_and_transpose() {
        let a = IntMat::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = IntMat::from_dense(&[vec![1, 0], vec![-3, 1]]);
        let ab = a.mul(&b);
        assert_eq!(ab, IntMat::from_dense(&[vec![-5, 2], vec![-3, 1]]));
        assert_eq!(a.transpose(), IntMat::from_dense(&[vec![1, 0], vec![2, 1]]));
        assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn div_nearest_small_remainders() {
        for n in -20i64..=20 {
            for d in [-7i64, -3, -2, 2, 3, 7] {
                let q = div_nearest(&BigInt::from(n), &BigInt::from(d));
                let r = BigInt::from(n) - &q * BigInt::from(d);
                assert!(r.abs() * 2 <= BigInt::from(d).abs(), "n={n} d={d} q={q} r={r}");
            }
        }
    }
}
