//! Row storage used by the elimination kernels.
//!
//! Over F_2 rows are bit-packed and row operations are word-wise XOR; over
//! odd primes rows are plain `u32` vectors. Dispatch happens once per row
//! operation, never per entry.

use super::field::Prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Row {
    Bits(Vec<u64>),
    Words(Vec<u32>),
}

impl Row {
    pub fn zeros(p: Prime, len: usize) -> Row {
        if p.is_two() {
            Row::Bits(vec![0; len.div_ceil(64)])
        } else {
            Row::Words(vec![0; len])
        }
    }

    /// Builds a row from entries already reduced mod p.
    pub fn from_entries(p: Prime, entries: &[u32]) -> Row {
        if p.is_two() {
            let mut words = vec![0u64; entries.len().div_ceil(64)];
            for (j, &e) in entries.iter().enumerate() {
                if e & 1 == 1 {
                    words[j / 64] |= 1 << (j % 64);
                }
            }
            Row::Bits(words)
        } else {
            Row::Words(entries.to_vec())
        }
    }

    #[inline]
    pub fn get(&self, j: usize) -> u32 {
        match self {
            Row::Bits(w) => ((w[j / 64] >> (j % 64)) & 1) as u32,
            Row::Words(v) => v[j],
        }
    }

    #[cfg(test)]
    pub fn set(&mut self, j: usize, value: u32) {
        match self {
            Row::Bits(w) => {
                if value & 1 == 1 {
                    w[j / 64] |= 1 << (j % 64);
                } else {
                    w[j / 64] &= !(1 << (j % 64));
                }
            }
            Row::Words(v) => v[j] = value,
        }
    }

    pub fn to_entries(&self, len: usize) -> Vec<u32> {
        (0..len).map(|j| self.get(j)).collect()
    }

    /// First nonzero column at or after `from`.
    pub fn leading(&self, from: usize) -> Option<usize> {
        match self {
            Row::Bits(w) => {
                let mut k = from / 64;
                if k >= w.len() {
                    return None;
                }
                let first = w[k] & (!0u64 << (from % 64));
                if first != 0 {
                    return Some(k * 64 + first.trailing_zeros() as usize);
                }
                k += 1;
                while k < w.len() {
                    if w[k] != 0 {
                        return Some(k * 64 + w[k].trailing_zeros() as usize);
                    }
                    k += 1;
                }
                None
            }
            Row::Words(v) => v.iter().skip(from).position(|&x| x != 0).map(|i| i + from),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Row::Bits(w) => w.iter().all(|&x| x == 0),
            Row::Words(v) => v.iter().all(|&x| x == 0),
        }
    }

    /// `self += c * src`, touching only columns `>= from` (src is zero before `from`).
    pub fn axpy(&mut self, p: Prime, c: u32, src: &Row, from: usize) {
        if c == 0 {
            return;
        }
        match (self, src) {
            (Row::Bits(dst), Row::Bits(s)) => {
                for (d, x) in dst.iter_mut().zip(s.iter()).skip(from / 64) {
                    *d ^= *x;
                }
            }
            (Row::Words(dst), Row::Words(s)) => {
                let m = p.get() as u64;
                let c = c as u64;
                for (d, &x) in dst.iter_mut().zip(s.iter()).skip(from) {
                    if x != 0 {
                        *d = ((*d as u64 + c * x as u64) % m) as u32;
                    }
                }
            }
            _ => unreachable!("mixed row representations"),
        }
    }

    pub fn scale(&mut self, p: Prime, c: u32) {
        match self {
            Row::Bits(w) => {
                if c & 1 == 0 {
                    w.iter_mut().for_each(|x| *x = 0);
                }
            }
            Row::Words(v) => v.iter_mut().for_each(|x| *x = p.mul(*x, c)),
        }
    }
}
