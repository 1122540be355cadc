use std::cmp::Ordering;

use super::scalar::Field;

/// An ordered set of spectral parameters.
///
/// Every element remembers the position it had in the set it was extracted
/// from, so that subsets keep strictly increasing indices.
#[derive(Debug, Clone, PartialEq)]
pub struct VarSet<F> {
    vals: Vec<F>,
    idx: Vec<usize>,
}

impl<F> Default for VarSet<F> {
    fn default() -> Self {
        VarSet { vals: Vec::new(), idx: Vec::new() }
    }
}

impl<F: Field> VarSet<F> {
    pub fn new(vals: Vec<F>) -> Self {
        let idx = (0..vals.len()).collect();
        VarSet { vals, idx }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(x: F) -> Self {
        VarSet::new(vec![x])
    }

    pub fn from_indexed(pairs: Vec<(usize, F)>) -> Self {
        let (idx, vals) = pairs.into_iter().unzip();
        VarSet { vals, idx }
    }

    pub fn len(&self) -> usize {
        self.vals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vals.is_empty()
    }

    pub fn values(&self) -> &[F] {
        &self.vals
    }

    pub fn indices(&self) -> &[usize] {
        &self.idx
    }

    pub fn get(&self, k: usize) -> &F {
        &self.vals[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = &F> {
        self.vals.iter()
    }

    /// `{self, other}` with fresh indices `0..self.len()+other.len()`.
    pub fn concat(&self, other: &VarSet<F>) -> VarSet<F> {
        let mut vals = self.vals.clone();
        vals.extend(other.vals.iter().cloned());
        VarSet::new(vals)
    }

    /// Subset at the given positions (positions must be increasing).
    pub fn pick(&self, positions: &[usize]) -> VarSet<F> {
        debug_assert!(positions.windows(2).all(|w| w[0] < w[1]));
        VarSet {
            vals: positions.iter().map(|&p| self.vals[p].clone()).collect(),
            idx: positions.iter().map(|&p| self.idx[p]).collect(),
        }
    }

    /// The set with the element at position `k` removed.
    pub fn without(&self, k: usize) -> VarSet<F> {
        let mut out = self.clone();
        out.vals.remove(k);
        out.idx.remove(k);
        out
    }

    /// Replace the element at position `k`, keeping its index.
    pub fn replaced(&self, k: usize, x: F) -> VarSet<F> {
        let mut out = self.clone();
        out.vals[k] = x;
        out
    }

    /// Append an element with index one past the current maximum.
    pub fn with(&self, x: F) -> VarSet<F> {
        let mut out = self.clone();
        let next = out.idx.iter().max().map_or(0, |m| m + 1);
        out.vals.push(x);
        out.idx.push(next);
        out
    }

    /// Every element shifted by `s`.
    pub fn shifted(&self, s: &F) -> VarSet<F> {
        VarSet { vals: self.vals.iter().map(|x| x.clone() + s).collect(), idx: self.idx.clone() }
    }

    pub fn position(&self, x: &F) -> Option<usize> {
        self.vals.iter().position(|y| y == x)
    }

    pub fn contains(&self, x: &F) -> bool {
        self.position(x).is_some()
    }

    /// Values sorted by the canonical order, for multiset comparison.
    pub fn sorted_values(&self) -> Vec<F> {
        let mut v = self.vals.clone();
        v.sort_by(|a, b| a.canonical_cmp(b));
        v
    }

    /// Multiset equality of values.
    pub fn same_multiset(&self, other: &VarSet<F>) -> bool {
        self.len() == other.len()
            && self
                .sorted_values()
                .iter()
                .zip(other.sorted_values().iter())
                .all(|(a, b)| a.canonical_cmp(b) == Ordering::Equal)
    }

    /// True when all values are pairwise distinct.
    pub fn is_distinct(&self) -> bool {
        let v = self.sorted_values();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

impl<F: Field> FromIterator<F> for VarSet<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        VarSet::new(iter.into_iter().collect())
    }
}
