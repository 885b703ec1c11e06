use std::fmt;

use super::field::Prime;
use super::row::Row;
use crate::error::{validation, Result};

/// Dense matrix over F_p, row-major, entries in `[0, p)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of row reduction: the reduced matrix, its rank and the pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed rows, reducing every entry mod p.
    pub fn from_rows(p: Prime, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(validation("ragged matrix rows"));
        }
        let data = rows.iter().flatten().map(|&x| p.reduce(x)).collect();
        Ok(FpMatrix { p, rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x % p.get());
            }
        }
        m
    }

    #[inline]
    pub fn prime(&self) -> Prime {
        self.p
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
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        self.data[i * self.cols + j] = value % self.p.get();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows || self.p != other.p {
            return Err(validation(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.p;
        let mut out = Self::zeros(p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = p.add(out.data[idx], p.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| self.p.add(acc, self.p.mul(a, b)))
            })
            .collect()
    }

    pub(crate) fn to_row_store(&self) -> Vec<Row> {
        (0..self.rows).map(|i| Row::from_entries(self.p, self.row(i))).collect()
    }

    /// Reduced row echelon form with positional pivoting: columns are scanned
    /// left to right and the topmost nonzero row at or below the current
    /// pivot row is chosen.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut rows = self.to_row_store();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(found) = (r..rows.len()).find(|&i| rows[i].get(c) != 0) else {
                continue;
            };
            rows.swap(r, found);
            let lead = rows[r].get(c);
            if lead != 1 {
                rows[r].scale(p, p.inv(lead));
            }
            let (head, tail) = rows.split_at_mut(r);
            let (pivot_row, rest) = tail.split_first_mut().expect("pivot row present");
            for other in head.iter_mut().chain(rest.iter_mut()) {
                let x = other.get(c);
                if x != 0 {
                    other.axpy(p, p.neg(x), pivot_row, c);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut reduced = Self::zeros(p, self.rows, self.cols);
        for (i, row) in rows.iter().enumerate() {
            let entries = row.to_entries(self.cols);
            reduced.data[i * self.cols..(i + 1) * self.cols].copy_from_slice(&entries);
        }
        Rref { reduced, rank: pivots.len(), pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the null space, one vector per free column in increasing
    /// column order. Each vector has a 1 in its free column and zeros in the
    /// other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { reduced, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = p.neg(reduced.get(i, free));
                }
                v
            })
            .collect()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix {}x{} over F_{}", self.rows, self.cols, self.p)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}
