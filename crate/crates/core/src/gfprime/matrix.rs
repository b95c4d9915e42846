use std::fmt;

use super::field::PrimeField;
use super::rank;
use crate::par::Execution;

/// Dense row-major matrix over `F_p`. Entries are always reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct PrimeFieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for PrimeFieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PrimeFieldMatrix {}x{} mod {}", self.rows, self.cols, self.field.modulus())?;
        for i in 0..self.rows.min(8) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(8)])?;
        }
        Ok(())
    }
}

impl PrimeFieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows of arbitrary `u64`s, reducing each entry.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().map(|&x| field.from_u64(x)));
        }
        Self { field, rows: rows.len(), cols, data }
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.from_u64(f(i, j)));
            }
        }
        Self { field, rows, cols, data }
    }

    /// Takes ownership of already-reduced row-major data.
    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&x| x < field.modulus()));
        Self { field, rows, cols, data }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u64) {
        self.data[i * self.cols + j] = self.field.from_u64(value);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Exact rank, using the default execution strategy.
    pub fn rank(&self) -> usize {
        self.rank_with(Execution::default())
    }

    pub fn rank_with(&self, exec: Execution) -> usize {
        rank::rank(self.field, self.rows, self.cols, self.data.clone(), exec)
    }

    /// Reduced row echelon form with its pivot columns. Plain cubic
    /// elimination; meant for the small systems (quadrics, kernels).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let l = m.get(i, c);
                if l == 0 {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(l, m.get(r, j)));
                    m.data[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// A basis of the right kernel `{ v : M v = 0 }`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let f = self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (t, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg(r.get(t, fc));
                }
                v
            })
            .collect()
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.field.add(acc, self.field.mul(a, b)))
            })
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * self.cols);
        head[lo * self.cols..(lo + 1) * self.cols].swap_with_slice(&mut tail[..self.cols]);
    }

    /// Multiplies row `i` by `s`.
    pub fn scale_row(&mut self, i: usize, s: u64) {
        let f = self.field;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = f.mul(*x, s);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = PrimeField::new(101).unwrap();
        let m = PrimeFieldMatrix::from_rows(f, &[[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn rref_of_identity() {
        let f = PrimeField::new(7).unwrap();
        let (r, piv) = PrimeFieldMatrix::identity(f, 3).rref();
        assert_eq!(r, PrimeFieldMatrix::identity(f, 3));
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn swap_rows_both_orders() {
        let f = PrimeField::new(7).unwrap();
        let mut m = PrimeFieldMatrix::from_rows(f, &[[1, 2], [3, 4], [5, 6]]);
        m.swap_rows(2, 0);
        assert_eq!(m.row(0), &[5, 6]);
        assert_eq!(m.row(2), &[1, 2]);
    }
}
