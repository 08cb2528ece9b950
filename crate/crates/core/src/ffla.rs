//! Exact linear algebra over prime fields and enumeration of subspaces of
//! `F_p^d` by reduced echelon patterns.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of subspaces a single enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// The field `Z/pZ`. Residues are stored as `u64` in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        // products of two residues must fit in a u64
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(self, a: u64) -> u64 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    #[inline]
    pub fn from_i64(self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// Dense matrix over a prime field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
    field: PrimeField,
}

/// Reduced row echelon form together with its rank and pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
            field,
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p());
            }
        }
        FMatrix {
            rows,
            cols,
            data,
            field,
        }
    }

    /// Builds a matrix from signed integer rows, reducing mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(field, rows.len(), cols, |i, j| field.from_i64(rows[i][j]))
    }

    /// Builds an `r x c` matrix whose rows are the given residue vectors.
    pub fn from_vectors(field: PrimeField, cols: usize, vectors: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(field, vectors.len(), cols);
        for (i, v) in vectors.iter().enumerate() {
            assert_eq!(v.len(), cols);
            m.data[i * cols..(i + 1) * cols].copy_from_slice(v);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> FMatrix {
        FMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = self.field;
        let mut out = FMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, other: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
            field: f,
        }
    }

    pub fn sub(&self, other: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
            field: f,
        }
    }

    pub fn scale(&self, c: u64) -> FMatrix {
        let f = self.field;
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
            field: f,
        }
    }

    /// `self + c * other`, in place.
    pub fn add_scaled(&mut self, other: &FMatrix, c: u64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add(*a, f.mul(b, c));
        }
    }

    pub fn pow(&self, mut e: u64) -> FMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = FMatrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FMatrix {
        FMatrix::from_fn(self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn block_diagonal(field: PrimeField, blocks: &[&FMatrix]) -> FMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = FMatrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn vstack(field: PrimeField, cols: usize, blocks: &[&FMatrix]) -> FMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut m = FMatrix::zeros(field, rows, cols);
        let mut r = 0;
        for b in blocks {
            assert_eq!(b.cols, cols);
            m.set_block(r, 0, b);
            r += b.rows;
        }
        m
    }

    pub fn hstack(field: PrimeField, rows: usize, blocks: &[&FMatrix]) -> FMatrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = FMatrix::zeros(field, rows, cols);
        let mut c = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            m.set_block(0, c, b);
            c += b.cols;
        }
        m
    }

    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
                continue;
            };
            if i != r {
                for j in 0..cols {
                    m.data.swap(i * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(m.data[r * cols + c]);
            for j in c..cols {
                m.data[r * cols + j] = f.mul(m.data[r * cols + j], inv);
            }
            for k in 0..rows {
                if k == r {
                    continue;
                }
                let factor = m.data[k * cols + c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let v = m.data[r * cols + j];
                    if v != 0 {
                        let idx = k * cols + j;
                        m.data[idx] = f.sub(m.data[idx], f.mul(factor, v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let Rref { matrix, pivots, .. } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u64; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(matrix.get(i, free));
                }
                v
            })
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Reduced echelon basis (as rows) of the column space.
    pub fn column_space(&self) -> FMatrix {
        let r = self.transpose().rref();
        r.matrix.block(0, 0, r.rank, self.rows)
    }

    /// Reduced echelon basis (as rows) of the kernel.
    pub fn kernel_basis(&self) -> FMatrix {
        let ns = self.nullspace();
        FMatrix::from_vectors(self.field, self.cols, &ns).rref_rows()
    }

    /// The nonzero rows of the reduced echelon form.
    pub fn rref_rows(&self) -> FMatrix {
        let r = self.rref();
        r.matrix.block(0, 0, r.rank, self.cols)
    }
}

/// Number of `e`-dimensional subspaces of `F_q^d`, saturating at `u128::MAX`.
pub fn gaussian_binomial(d: usize, e: usize, q: u64) -> u128 {
    if e > d {
        return 0;
    }
    // q-Pascal: [n, k] = [n-1, k-1] + q^k [n-1, k]
    let mut row = vec![1u128];
    for n in 1..=d {
        let mut next = vec![0u128; n + 1];
        for k in 0..=n {
            let left = if k >= 1 { row[k - 1] } else { 0 };
            let right = if k < n {
                (q as u128)
                    .checked_pow(k as u32)
                    .and_then(|qk| qk.checked_mul(row[k]))
                    .unwrap_or(u128::MAX)
            } else {
                0
            };
            next[k] = left.saturating_add(right);
        }
        row = next;
    }
    row[e]
}

/// Streams every `e`-dimensional subspace of `F_p^d` exactly once as an
/// `e x d` matrix in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct SubspaceEnumerator {
    field: PrimeField,
    d: usize,
    e: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: Vec<u64>,
    done: bool,
}

pub fn enumerate_subspaces(
    d: usize,
    e: usize,
    field: PrimeField,
    cap: u128,
) -> Result<SubspaceEnumerator> {
    if e > d {
        return Err(Error::InvalidInput(format!(
            "subspace dimension {e} exceeds ambient dimension {d}"
        )));
    }
    let count = gaussian_binomial(d, e, field.p());
    if count > cap {
        return Err(Error::ResourceBound(format!(
            "Gr_{e}(F_{}^{d}) has {count} points, cap is {cap}",
            field.p()
        )));
    }
    let pivots: Vec<usize> = (0..e).collect();
    let free = free_positions(d, &pivots);
    let counter = vec![0; free.len()];
    Ok(SubspaceEnumerator {
        field,
        d,
        e,
        pivots,
        free,
        counter,
        done: false,
    })
}

fn free_positions(d: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        for j in pc + 1..d {
            if !pivots.contains(&j) {
                out.push((i, j));
            }
        }
    }
    out
}

impl SubspaceEnumerator {
    fn advance_pivots(&mut self) -> bool {
        let (d, e) = (self.d, self.e);
        // next e-combination of 0..d in lexicographic order
        let mut i = e;
        while i > 0 {
            i -= 1;
            if self.pivots[i] < d - e + i {
                self.pivots[i] += 1;
                for k in i + 1..e {
                    self.pivots[k] = self.pivots[k - 1] + 1;
                }
                self.free = free_positions(d, &self.pivots);
                self.counter = vec![0; self.free.len()];
                return true;
            }
        }
        false
    }
}

impl Iterator for SubspaceEnumerator {
    type Item = FMatrix;

    fn next(&mut self) -> Option<FMatrix> {
        if self.done {
            return None;
        }
        let mut m = FMatrix::zeros(self.field, self.e, self.d);
        for (i, &pc) in self.pivots.iter().enumerate() {
            m.set(i, pc, 1);
        }
        for (&(i, j), &v) in self.free.iter().zip(&self.counter) {
            m.set(i, j, v);
        }
        // odometer over the free entries, then the next pivot pattern
        let p = self.field.p();
        let mut carry = true;
        for c in self.counter.iter_mut() {
            *c += 1;
            if *c < p {
                carry = false;
                break;
            }
            *c = 0;
        }
        if carry && !self.advance_pivots() {
            self.done = true;
        }
        Some(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_composites() {
        assert_eq!(PrimeField::new(4), Err(Error::NotPrime(4)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn rref_examples() {
        let z = FMatrix::zeros(f(3), 2, 3).rref();
        assert_eq!(z.rank, 0);
        assert!(z.pivots.is_empty());

        assert_eq!(FMatrix::identity(f(2), 2).rref().rank, 2);

        let m = FMatrix::from_rows(f(5), &[vec![1, 2], vec![2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn nullspace_examples() {
        assert!(FMatrix::identity(f(3), 3).nullspace().is_empty());
        let m = FMatrix::from_rows(f(2), &[vec![1, 1]]);
        assert_eq!(m.nullspace(), vec![vec![1, 1]]);
        let m = FMatrix::from_rows(f(5), &[vec![1, 2], vec![2, 4]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert_eq!(m.mul_vec(&ns[0]), vec![0, 0]);
    }

    #[test]
    fn subspace_counts_small() {
        let count = |d, e, p| {
            enumerate_subspaces(d, e, f(p), DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .count()
        };
        assert_eq!(count(2, 1, 2), 3);
        assert_eq!(count(2, 1, 3), 4);
        assert_eq!(count(3, 0, 5), 1);
        assert_eq!(count(3, 3, 5), 1);
        assert_eq!(count(0, 0, 2), 1);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let err = enumerate_subspaces(6, 3, f(5), 100).unwrap_err();
        assert!(matches!(err, Error::ResourceBound(_)));
    }

    #[test]
    fn inverse_and_pow() {
        let k = f(7);
        for a in 1..7 {
            assert_eq!(k.mul(a, k.inv(a)), 1);
        }
        let m = FMatrix::from_rows(k, &[vec![0, 1], vec![0, 0]]);
        assert!(m.pow(2).is_zero());
        assert_eq!(m.pow(0), FMatrix::identity(k, 2));
    }

    // Product formula, independent of the q-Pascal recursion used above.
    fn gaussian_product_formula(d: u32, e: u32, q: u128) -> u128 {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..e {
            num *= q.pow(d - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    fn matrix_strategy() -> impl Strategy<Value = (u64, usize, usize, Vec<u64>)> {
        (prop::sample::select(vec![2u64, 3, 5, 7]), 0usize..5, 0usize..5).prop_flat_map(
            |(p, r, c)| {
                (
                    Just(p),
                    Just(r),
                    Just(c),
                    prop::collection::vec(0..p, r * c),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn subspace_count_matches_gaussian_binomial(
            d in 0usize..=4,
            e_frac in 0usize..=4,
            p in prop::sample::select(vec![2u64, 3, 5]),
        ) {
            let e = e_frac.min(d);
            let subs: Vec<FMatrix> = enumerate_subspaces(d, e, f(p), DEFAULT_ENUMERATION_CAP)
                .unwrap()
                .collect();
            let expected = gaussian_product_formula(d as u32, e as u32, p as u128);
            prop_assert_eq!(subs.len() as u128, expected);
            prop_assert_eq!(gaussian_binomial(d, e, p), expected);
            // every produced matrix is already reduced and has rank e
            for s in &subs {
                prop_assert_eq!(&s.rref_rows(), s);
            }
            let distinct: std::collections::HashSet<_> = subs.iter().collect();
            prop_assert_eq!(distinct.len(), subs.len());
        }

        #[test]
        fn rref_is_idempotent((p, r, c, data) in matrix_strategy()) {
            let m = FMatrix::from_fn(f(p), r, c, |i, j| data[i * c + j]);
            let once = m.rref();
            let twice = once.matrix.rref();
            prop_assert_eq!(&once.matrix, &twice.matrix);
            prop_assert_eq!(once.rank, twice.rank);
        }

        #[test]
        fn nullspace_vectors_are_annihilated((p, r, c, data) in matrix_strategy()) {
            let m = FMatrix::from_fn(f(p), r, c, |i, j| data[i * c + j]);
            let ns = m.nullspace();
            prop_assert_eq!(ns.len(), c - m.rank());
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
        }
    }
}
