//! Vacuum eigenvalue data `λ_2`, `r_1 = λ_1/λ_2`, `r_3 = λ_3/λ_2`.
//!
//! The action formulas hold for any representation with a highest-weight
//! vacuum, so their coefficients are computed through this trait rather than
//! through a particular chain.

use crate::chain::ChainRep;
use crate::error::{Error, Result};
use crate::kernel::{Field, VarSet};

pub trait Weights<F: Field>: Sync {
    fn lambda2(&self, x: &F) -> Result<F>;
    fn r1(&self, x: &F) -> Result<F>;
    fn r3(&self, x: &F) -> Result<F>;

    fn lambda1(&self, x: &F) -> Result<F> {
        Ok(self.r1(x)? * self.lambda2(x)?)
    }

    fn lambda3(&self, x: &F) -> Result<F> {
        Ok(self.r3(x)? * self.lambda2(x)?)
    }

    /// `prod λ_2(x)` over a set.
    fn lambda2_prod(&self, xs: &VarSet<F>) -> Result<F> {
        xs.iter().try_fold(F::one(), |acc, x| Ok(acc * self.lambda2(x)?))
    }

    /// `1 / prod λ_2(x)`, failing with [`Error::ZeroWeight`] when some factor vanishes.
    fn lambda2_prod_inv(&self, xs: &VarSet<F>) -> Result<F> {
        let mut acc = F::one();
        for x in xs.iter() {
            let l = self.lambda2(x)?;
            acc *= &l.inv().ok_or_else(|| Error::ZeroWeight(x.to_string()))?;
        }
        Ok(acc)
    }

    fn r1_prod(&self, xs: &VarSet<F>) -> Result<F> {
        xs.iter().try_fold(F::one(), |acc, x| Ok(acc * self.r1(x)?))
    }

    fn r3_prod(&self, xs: &VarSet<F>) -> Result<F> {
        xs.iter().try_fold(F::one(), |acc, x| Ok(acc * self.r3(x)?))
    }
}

/// The chain's weights, read off from the vacuum eigenvalues.
impl<F: Field> Weights<F> for ChainRep<F> {
    fn lambda2(&self, x: &F) -> Result<F> {
        self.lambda(2, x)
    }

    fn r1(&self, x: &F) -> Result<F> {
        self.ratio(1, x)
    }

    fn r3(&self, x: &F) -> Result<F> {
        self.ratio(3, x)
    }
}

/// Weights given by closures; handy for synthetic representations.
pub struct FnWeights<L, R1, R3> {
    pub lambda2: L,
    pub r1: R1,
    pub r3: R3,
}

impl<F, L, R1, R3> Weights<F> for FnWeights<L, R1, R3>
where
    F: Field,
    L: Fn(&F) -> Result<F> + Sync,
    R1: Fn(&F) -> Result<F> + Sync,
    R3: Fn(&F) -> Result<F> + Sync,
{
    fn lambda2(&self, x: &F) -> Result<F> {
        (self.lambda2)(x)
    }

    fn r1(&self, x: &F) -> Result<F> {
        (self.r1)(x)
    }

    fn r3(&self, x: &F) -> Result<F> {
        (self.r3)(x)
    }
}
