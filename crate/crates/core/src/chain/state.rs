use std::collections::BTreeMap;

use super::basis::{key_of, POW3};
use crate::kernel::Field;

/// A vector of the chain space `(C^{2|1})^{⊗L}`, stored sparsely by basis key.
///
/// Zero coefficients are never stored, so two vectors are equal iff their
/// maps are equal (exact mode).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<F> {
    sites: usize,
    coeffs: BTreeMap<u64, F>,
}

impl<F: Field> StateVector<F> {
    pub fn zero(sites: usize) -> Self {
        StateVector { sites, coeffs: BTreeMap::new() }
    }

    pub fn basis(sites: usize, key: u64) -> Self {
        let mut v = Self::zero(sites);
        v.coeffs.insert(key, F::one());
        v
    }

    /// The pseudovacuum `e_1 ⊗ ... ⊗ e_1`.
    pub fn vacuum(sites: usize) -> Self {
        Self::basis(sites, key_of(&vec![0; sites]))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> u64 {
        POW3[self.sites]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, key: u64) -> F {
        self.coeffs.get(&key).cloned().unwrap_or_else(F::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &F)> {
        self.coeffs.iter()
    }

    /// Adds `coeff` to the component `key`, dropping it if it cancels.
    pub fn add_at(&mut self, key: u64, coeff: F) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += s * other`.
    pub fn axpy(&mut self, s: &F, other: &StateVector<F>) {
        debug_assert_eq!(self.sites, other.sites);
        if s.is_zero() {
            return;
        }
        for (k, v) in &other.coeffs {
            self.add_at(*k, v.clone() * s);
        }
    }

    pub fn scaled(&self, s: &F) -> StateVector<F> {
        if s.is_zero() {
            return Self::zero(self.sites);
        }
        StateVector { sites: self.sites, coeffs: self.coeffs.iter().map(|(k, v)| (*k, v.clone() * s)).collect() }
    }

    pub fn sub(&self, other: &StateVector<F>) -> StateVector<F> {
        let mut out = self.clone();
        out.axpy(&-F::one(), other);
        out
    }

    pub fn add(&self, other: &StateVector<F>) -> StateVector<F> {
        let mut out = self.clone();
        out.axpy(&F::one(), other);
        out
    }

    /// Largest component size, see [`Field::size`]. Exactly zero iff the vector is zero.
    pub fn max_size(&self) -> F {
        self.coeffs
            .values()
            .map(|v| v.size())
            .max_by(|a, b| a.canonical_cmp(b))
            .unwrap_or_else(F::zero)
    }

    /// Euclidean norm as a float.
    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|v| v.modulus().powi(2)).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> Vec<F> {
        let mut out = vec![F::zero(); self.dim() as usize];
        for (k, v) in &self.coeffs {
            out[*k as usize] = v.clone();
        }
        out
    }

    pub fn from_dense(sites: usize, dense: &[F]) -> Self {
        let mut v = Self::zero(sites);
        for (k, x) in dense.iter().enumerate() {
            v.add_at(k as u64, x.clone());
        }
        v
    }
}
