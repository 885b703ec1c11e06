/// Union-find with path halving and union by index (the smaller root wins),
/// so the representative of every class is its least element.
#[derive(Clone, Debug)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class count and dense class labels numbered by least element.
    pub fn labels(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[x] = label[r];
        }
        (next, out)
    }
}

/// Inverse of a permutation given in one-line notation.
pub(crate) fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &j) in perm.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Permutation sending each position to its rank under `key`.
pub(crate) fn ranking_by_key<K: Ord>(n: usize, key: impl Fn(usize) -> K) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| key(i));
    invert_permutation(&order)
}

/// Enumerates all vectors of `F_p^l` in lexicographic order (last
/// coordinate fastest). Index of `a` is `sum a_i p^(l-1-i)`.
pub(crate) fn vector_index(a: &[u32], p: u32) -> usize {
    a.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub(crate) fn vector_from_index(mut idx: usize, p: u32, l: usize) -> Vec<u32> {
    let mut a = vec![0; l];
    for slot in a.iter_mut().rev() {
        *slot = (idx % p as usize) as u32;
        idx /= p as usize;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dsu_representatives_are_least() {
        let mut d = Dsu::new(5);
        d.union(4, 2);
        d.union(2, 3);
        assert_eq!(d.find(4), 2);
        assert_eq!(d.labels(), (3, vec![0, 1, 2, 2, 2]));
    }

    #[test]
    fn vector_indexing_roundtrip() {
        for idx in 0..27 {
            assert_eq!(vector_index(&vector_from_index(idx, 3, 3), 3), idx);
        }
        assert_eq!(vector_from_index(5, 2, 3), vec![1, 0, 1]);
    }
}
