//! Blocked rank computation.
//!
//! The column range is split recursively. After the left half has been
//! eliminated, its pivots are applied to the right half in one pass: a
//! triangular solve among the pivot rows and a matrix product for the rows
//! below. Multipliers are stored in place, in the pivot columns they
//! eliminated, so the deferred update can gather them later.
//!
//! The product accumulates up to `chunk` residue products before reducing:
//! `u64` accumulators for primes below [`NARROW_LIMIT`](super::NARROW_LIMIT),
//! `u128` otherwise. Source rows are packed into column tiles so a tile stays
//! cache-resident while every target row streams past it.
//!
//! Pivot order is deterministic: columns left to right, and in each column
//! the first remaining row with a nonzero entry.

use super::field::PrimeField;
use crate::par::Execution;

/// Column ranges at most this wide are eliminated directly.
const BASE_WIDTH: usize = 16;
/// Pivot rows handled by the scalar in-block triangular solve.
const TRI_BLOCK: usize = 32;
/// Source rows per packed tile.
const TILE_SOURCES: usize = 256;
/// Rows below which the parallel path is not worth dispatching.
const PAR_MIN_ROWS: usize = 128;

pub(crate) fn rank(field: PrimeField, rows: usize, cols: usize, mut data: Vec<u64>, exec: Execution) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut e = Echelon { field, rows, cols, data: &mut data, pivots: vec![usize::MAX; rows], exec };
    if field.is_narrow() {
        e.eliminate(&Narrow::new(field), 0, 0, cols)
    } else {
        e.eliminate(&Wide::new(field), 0, 0, cols)
    }
}

struct Echelon<'a> {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: &'a mut [u64],
    /// `pivots[t]` is the pivot column of the pivot row stored at row `t`.
    pivots: Vec<usize>,
    exec: Execution,
}

impl Echelon<'_> {
    /// Eliminates columns `[c0, c1)` among rows `r0..`. Returns the number
    /// of pivots found; they occupy rows `r0..r0 + k`. Columns `>= c1` are
    /// left untouched.
    fn eliminate<K: Kernel>(&mut self, kernel: &K, r0: usize, c0: usize, c1: usize) -> usize {
        if r0 >= self.rows || c0 >= c1 {
            return 0;
        }
        if c1 - c0 <= BASE_WIDTH {
            return self.eliminate_base(r0, c0, c1);
        }
        let cm = c0 + (c1 - c0) / 2;
        let k1 = self.eliminate(kernel, r0, c0, cm);
        if k1 > 0 {
            self.apply_pivots(kernel, r0, r0 + k1, cm, c1);
        }
        k1 + self.eliminate(kernel, r0 + k1, cm, c1)
    }

    fn eliminate_base(&mut self, r0: usize, c0: usize, c1: usize) -> usize {
        let (f, cols, rows) = (self.field, self.cols, self.rows);
        let mut r = r0;
        for c in c0..c1 {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            swap_rows(self.data, cols, p, r);
            self.pivots[r] = c;
            let inv = f.inv(self.data[r * cols + c]).expect("nonzero pivot");
            let (head, tail) = self.data.split_at_mut((r + 1) * cols);
            let prow = &head[r * cols..];
            let exec = if rows - r > PAR_MIN_ROWS { self.exec } else { Execution::Sequential };
            exec.for_each_chunk(tail, cols, || (), |_, row| {
                let x = row[c];
                if x == 0 {
                    return;
                }
                let l = f.mul(x, inv);
                row[c] = l;
                for j in c + 1..c1 {
                    row[j] = f.sub(row[j], f.mul(l, prow[j]));
                }
            });
            r += 1;
        }
        r - r0
    }

    /// Applies pivot rows `[s0, s1)` to columns `[c_lo, c_hi)` of rows `s0..`.
    fn apply_pivots<K: Kernel>(&mut self, kernel: &K, s0: usize, s1: usize, c_lo: usize, c_hi: usize) {
        self.triangular_solve(kernel, s0, s1, c_lo, c_hi);
        if s1 < self.rows {
            self.product_update(kernel, s0, s1, s1, self.rows, c_lo, c_hi);
        }
    }

    /// Brings pivot rows `[s0, s1)` up to date among themselves on
    /// `[c_lo, c_hi)`: each row absorbs the earlier pivots of the range.
    fn triangular_solve<K: Kernel>(&mut self, kernel: &K, s0: usize, s1: usize, c_lo: usize, c_hi: usize) {
        if s1 - s0 > TRI_BLOCK {
            let sm = s0 + (s1 - s0) / 2;
            self.triangular_solve(kernel, s0, sm, c_lo, c_hi);
            self.product_update(kernel, s0, sm, sm, s1, c_lo, c_hi);
            self.triangular_solve(kernel, sm, s1, c_lo, c_hi);
            return;
        }
        let (f, cols) = (self.field, self.cols);
        for t in s0 + 1..s1 {
            let (head, tail) = self.data.split_at_mut(t * cols);
            let target = &mut tail[..cols];
            for s in s0..t {
                let l = target[self.pivots[s]];
                if l == 0 {
                    continue;
                }
                let src = &head[s * cols..(s + 1) * cols];
                for j in c_lo..c_hi {
                    target[j] = f.sub(target[j], f.mul(l, src[j]));
                }
            }
        }
    }

    /// `A[t, c_lo..c_hi] -= sum_s A[t, pivot(s)] * A[s, c_lo..c_hi]` for
    /// targets `t in [t0, t1)` and sources `s in [s0, s1)`, with `s1 <= t0`.
    #[allow(clippy::too_many_arguments)]
    fn product_update<K: Kernel>(
        &mut self,
        kernel: &K,
        s0: usize,
        s1: usize,
        t0: usize,
        t1: usize,
        c_lo: usize,
        c_hi: usize,
    ) {
        let cols = self.cols;
        let (head, tail) = self.data.split_at_mut(t0 * cols);
        let sources = &head[s0 * cols..s1 * cols];
        let targets = &mut tail[..(t1 - t0) * cols];
        let exec = if t1 - t0 > PAR_MIN_ROWS { self.exec } else { Execution::Sequential };
        let mut tile: Vec<K::Packed> = Vec::new();

        for sb in (0..s1 - s0).step_by(TILE_SOURCES) {
            let se = (sb + TILE_SOURCES).min(s1 - s0);
            let piv = &self.pivots[s0 + sb..s0 + se];
            for jb in (c_lo..c_hi).step_by(K::COL_BLOCK) {
                let je = (jb + K::COL_BLOCK).min(c_hi);
                let w = je - jb;
                tile.clear();
                for s in sb..se {
                    tile.extend(sources[s * cols + jb..s * cols + je].iter().map(|&x| K::pack(x)));
                }
                let tile = &tile[..];
                exec.for_each_chunk(
                    targets,
                    cols,
                    || (Vec::<(u64, usize)>::new(), Vec::<K::Acc>::new()),
                    |(nz, acc), row| {
                        nz.clear();
                        nz.extend(piv.iter().enumerate().filter_map(|(k, &pc)| {
                            let l = row[pc];
                            (l != 0).then_some((l, k * w))
                        }));
                        if !nz.is_empty() {
                            kernel.row_update(&mut row[jb..je], nz, tile, acc);
                        }
                    },
                );
            }
        }
    }
}

fn swap_rows(data: &mut [u64], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let (head, tail) = data.split_at_mut(hi * cols);
    head[lo * cols..(lo + 1) * cols].swap_with_slice(&mut tail[..cols]);
}

/// Largest `n` with `n * (p-1)^2 + (p-1) <= max`, capped at 64.
fn accumulation_chunk(p: u64, max: u128) -> usize {
    let q = (p - 1) as u128;
    (((max - q) / (q * q)).min(64) as usize).max(1)
}

trait Kernel: Sync {
    type Packed: Copy + Send + Sync;
    type Acc: Copy + Send;
    const COL_BLOCK: usize;

    fn pack(x: u64) -> Self::Packed;

    /// `row -= sum (l * tile[off..off + row.len()])` over `(l, off)` in `nz`.
    fn row_update(&self, row: &mut [u64], nz: &[(u64, usize)], tile: &[Self::Packed], acc: &mut Vec<Self::Acc>);
}

struct Narrow {
    field: PrimeField,
    chunk: usize,
}

impl Narrow {
    fn new(field: PrimeField) -> Self {
        Self { field, chunk: accumulation_chunk(field.modulus(), u64::MAX as u128) }
    }
}

impl Kernel for Narrow {
    type Packed = u32;
    type Acc = u64;
    const COL_BLOCK: usize = 512;

    #[inline]
    fn pack(x: u64) -> u32 {
        x as u32
    }

    fn row_update(&self, row: &mut [u64], nz: &[(u64, usize)], tile: &[u32], acc: &mut Vec<u64>) {
        let w = row.len();
        acc.clear();
        acc.resize(w, 0);
        let acc = &mut acc[..w];
        for (n, group) in nz.chunks(self.chunk).enumerate() {
            if n > 0 {
                for a in acc.iter_mut() {
                    *a = self.field.reduce_u64(*a);
                }
            }
            let mut quads = group.chunks_exact(4);
            for q in &mut quads {
                let (l0, l1, l2, l3) = (q[0].0 as u32 as u64, q[1].0 as u32 as u64, q[2].0 as u32 as u64, q[3].0 as u32 as u64);
                let t0 = &tile[q[0].1..q[0].1 + w];
                let t1 = &tile[q[1].1..q[1].1 + w];
                let t2 = &tile[q[2].1..q[2].1 + w];
                let t3 = &tile[q[3].1..q[3].1 + w];
                for j in 0..w {
                    acc[j] += l0 * t0[j] as u64 + l1 * t1[j] as u64 + l2 * t2[j] as u64 + l3 * t3[j] as u64;
                }
            }
            for &(l, off) in quads.remainder() {
                let l = l as u32 as u64;
                let t = &tile[off..off + w];
                for j in 0..w {
                    acc[j] += l * t[j] as u64;
                }
            }
        }
        for (x, &a) in row.iter_mut().zip(acc.iter()) {
            *x = self.field.sub(*x, self.field.reduce_u64(a));
        }
    }
}

struct Wide {
    field: PrimeField,
    chunk: usize,
}

impl Wide {
    fn new(field: PrimeField) -> Self {
        Self { field, chunk: accumulation_chunk(field.modulus(), u128::MAX) }
    }
}

impl Kernel for Wide {
    type Packed = u64;
    type Acc = u128;
    const COL_BLOCK: usize = 256;

    #[inline]
    fn pack(x: u64) -> u64 {
        x
    }

    fn row_update(&self, row: &mut [u64], nz: &[(u64, usize)], tile: &[u64], acc: &mut Vec<u128>) {
        let w = row.len();
        acc.clear();
        acc.resize(w, 0);
        let acc = &mut acc[..w];
        for (n, group) in nz.chunks(self.chunk).enumerate() {
            if n > 0 {
                for a in acc.iter_mut() {
                    *a = self.field.reduce_u128(*a) as u128;
                }
            }
            let mut pairs = group.chunks_exact(2);
            for q in &mut pairs {
                let (l0, l1) = (q[0].0 as u128, q[1].0 as u128);
                let t0 = &tile[q[0].1..q[0].1 + w];
                let t1 = &tile[q[1].1..q[1].1 + w];
                for j in 0..w {
                    acc[j] += l0 * t0[j] as u128 + l1 * t1[j] as u128;
                }
            }
            for &(l, off) in pairs.remainder() {
                let l = l as u128;
                let t = &tile[off..off + w];
                for j in 0..w {
                    acc[j] += l * t[j] as u128;
                }
            }
        }
        for (x, &a) in row.iter_mut().zip(acc.iter()) {
            *x = self.field.sub(*x, self.field.reduce_u128(a));
        }
    }
}
