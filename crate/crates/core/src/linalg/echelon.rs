use super::field::Prime;
use super::row::Row;
use crate::error::{Error, Result};

/// Incrementally built echelon basis whose rows carry a tag vector.
///
/// Every stored row is a linear combination of inserted vectors; its tag is
/// the same combination of the inserted tags. Reducing a vector against the
/// basis therefore yields both the remainder and the tag of the part that
/// lies in the span. Inserting a subspace with zero tags followed by a
/// complement with unit tags turns this into a solver for quotient
/// coordinates.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    p: Prime,
    len: usize,
    tag_len: usize,
    rows: Vec<Row>,
    tags: Vec<Row>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(p: Prime, len: usize, tag_len: usize) -> Self {
        EchelonBasis { p, len, tag_len, rows: Vec::new(), tags: Vec::new(), pivots: Vec::new() }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    pub fn tag_len(&self) -> usize {
        self.tag_len
    }

    fn reduce_row(&self, mut v: Row) -> (Row, Row) {
        let p = self.p;
        let mut acc = Row::zeros(p, self.tag_len);
        for ((row, tag), &pc) in self.rows.iter().zip(&self.tags).zip(&self.pivots) {
            let c = v.get(pc);
            if c != 0 {
                v.axpy(p, p.neg(c), row, pc);
                acc.axpy(p, c, tag, 0);
            }
        }
        (v, acc)
    }

    /// Inserts `v` with tag `tag`. Returns `false` (and leaves the basis
    /// unchanged) when `v` already lies in the span.
    pub fn insert(&mut self, v: &[u32], tag: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        debug_assert_eq!(tag.len(), self.tag_len);
        let p = self.p;
        let (mut rem, acc) = self.reduce_row(Row::from_entries(p, v));
        let Some(pc) = rem.leading(0) else {
            return false;
        };
        let mut t = Row::from_entries(p, tag);
        t.axpy(p, p.neg(1), &acc, 0);
        let lead = rem.get(pc);
        if lead != 1 {
            let inv = p.inv(lead);
            rem.scale(p, inv);
            t.scale(p, inv);
        }
        self.rows.push(rem);
        self.tags.push(t);
        self.pivots.push(pc);
        true
    }

    /// Inserts `v` with a zero tag.
    pub fn insert_untagged(&mut self, v: &[u32]) -> bool {
        let zero = vec![0; self.tag_len];
        self.insert(v, &zero)
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce_row(Row::from_entries(self.p, v)).0.is_zero()
    }

    /// Tag of `v`, which must lie in the span.
    pub fn tag_of(&self, v: &[u32]) -> Result<Vec<u32>> {
        let (rem, acc) = self.reduce_row(Row::from_entries(self.p, v));
        if !rem.is_zero() {
            return Err(Error::NotInSpan);
        }
        Ok(acc.to_entries(self.tag_len))
    }
}

/// Coordinates of the class of `v` in `span(subspace ∪ complement) / span(subspace)`
/// with respect to the images of `complement`.
pub fn coordinates_in_quotient(
    p: Prime,
    v: &[u32],
    subspace: &[Vec<u32>],
    complement: &[Vec<u32>],
) -> Result<Vec<u32>> {
    let mut basis = EchelonBasis::new(p, v.len(), complement.len());
    for s in subspace {
        if !basis.insert_untagged(s) {
            return Err(Error::Validation("subspace basis is not independent".into()));
        }
    }
    for (j, c) in complement.iter().enumerate() {
        let mut tag = vec![0; complement.len()];
        tag[j] = 1;
        if !basis.insert(c, &tag) {
            return Err(Error::Validation("complement basis is not independent".into()));
        }
    }
    basis.tag_of(v)
}
