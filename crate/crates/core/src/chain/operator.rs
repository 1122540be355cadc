//! Dense graded operators and the rational R-matrix.

use super::basis::{graded_swap, POW3};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::kernel::{EvalContext, Field};

/// Dense matrix on `(C^{2|1})^{⊗m}` with a definite parity.
///
/// Row and column indices are basis keys (see [`super::basis`]).
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator<F> {
    dim: usize,
    parity: u8,
    entries: Vec<F>,
}

impl<F: Field> GradedOperator<F> {
    pub fn zeros(dim: usize, parity: u8) -> Self {
        GradedOperator { dim, parity, entries: vec![F::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, 0);
        for k in 0..dim {
            m.entries[k * dim + k] = F::one();
        }
        m
    }

    /// Build from images of the basis vectors: `columns[k] = A e_k`.
    pub fn from_columns(columns: &[StateVector<F>], parity: u8) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim, parity);
        for (col, v) in columns.iter().enumerate() {
            for (row, x) in v.iter() {
                m.entries[*row as usize * dim + col] = x.clone();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn get(&self, row: usize, col: usize) -> &F {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: F) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn mul(&self, rhs: &GradedOperator<F>) -> GradedOperator<F> {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n, (self.parity + rhs.parity) % 2);
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.entries[k * n + j];
                    if !b.is_zero() {
                        out.entries[i * n + j] += a.clone() * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, rhs: &GradedOperator<F>) -> GradedOperator<F> {
        assert_eq!(self.dim, rhs.dim);
        let entries = self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.clone() - b).collect();
        GradedOperator { dim: self.dim, parity: self.parity, entries }
    }

    pub fn scaled(&self, s: &F) -> GradedOperator<F> {
        GradedOperator { dim: self.dim, parity: self.parity, entries: self.entries.iter().map(|a| a.clone() * s).collect() }
    }

    /// `max |entry|` in the sense of [`Field::size`].
    pub fn max_size(&self) -> F {
        max_size(self.entries.iter())
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }
}

pub(crate) fn max_size<'a, F: Field>(it: impl Iterator<Item = &'a F>) -> F {
    it.map(|v| v.size()).max_by(|a, b| a.canonical_cmp(b)).unwrap_or_else(F::zero)
}

/// `R_{pq}(x,y) = I + g(x,y) P_{pq}` on `sites` tensor factors.
pub fn r_on_factors<F: Field>(x: &F, y: &F, p: usize, q: usize, sites: usize, ctx: &EvalContext<F>) -> Result<GradedOperator<F>> {
    let g = ctx.g(x, y)?;
    let dim = POW3[sites] as usize;
    let mut m: GradedOperator<F> = GradedOperator::identity(dim);
    for col in 0..dim as u64 {
        let (row, s) = graded_swap(col, p.min(q), p.max(q));
        let cur = m.get(row as usize, col as usize).clone();
        m.set(row as usize, col as usize, cur + &(g.clone() * &F::from_i64(s)));
    }
    Ok(m)
}

/// The 9×9 R-matrix `R(x,y) = I + g(x,y) P`, with `P(e_i ⊗ e_j) = (-1)^{[i][j]} e_j ⊗ e_i`.
pub fn build_r<F: Field>(x: &F, y: &F, ctx: &EvalContext<F>) -> Result<GradedOperator<F>> {
    r_on_factors(x, y, 0, 1, 2, ctx)
}

/// `max |R12(x,y) R13(x,z) R23(y,z) - R23(y,z) R13(x,z) R12(x,y)|` on three factors.
pub fn ybe_residual<F: Field>(x: &F, y: &F, z: &F, ctx: &EvalContext<F>) -> Result<F> {
    for (a, b) in [(x, y), (x, z), (y, z)] {
        if a == b {
            return Err(Error::pole("R", a, b));
        }
    }
    let r12 = r_on_factors(x, y, 0, 1, 3, ctx)?;
    let r13 = r_on_factors(x, z, 0, 2, 3, ctx)?;
    let r23 = r_on_factors(y, z, 1, 2, 3, ctx)?;
    let lhs = r12.mul(&r13).mul(&r23);
    let rhs = r23.mul(&r13).mul(&r12);
    Ok(lhs.sub(&rhs).max_size())
}
