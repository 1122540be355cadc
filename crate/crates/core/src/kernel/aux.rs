//! The rational functions g, f, h, t and their products over parameter sets.
//!
//! ```text
//! g(x,y) = c/(x-y)      f(x,y) = (x-y+c)/(x-y)
//! h(x,y) = (x-y+c)/c    t(x,y) = c^2/((x-y)(x-y+c))
//! ```
//!
//! Besides the functions themselves, [`EvalContext`] provides the reciprocals
//! `1/f` and `1/h` in pole-free form. `1/f(x,x) = 0` is a legitimate value
//! that appears when partition sums contain terms that vanish identically.

use serde::{Deserialize, Serialize};

use super::scalar::Field;
use super::varset::VarSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Aux {
    G,
    F,
    H,
    T,
}

impl Aux {
    pub fn name(self) -> &'static str {
        match self {
            Aux::G => "g",
            Aux::F => "f",
            Aux::H => "h",
            Aux::T => "t",
        }
    }
}

/// Carries the deformation constant `c`, the only global constant.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalContext<F> {
    c: F,
}

impl<F: Field> EvalContext<F> {
    pub fn new(c: F) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::config("c", "deformation constant must be nonzero"));
        }
        Ok(EvalContext { c })
    }

    /// `c = 1`.
    pub fn unit() -> Self {
        EvalContext { c: F::one() }
    }

    pub fn c(&self) -> &F {
        &self.c
    }

    pub fn g(&self, x: &F, y: &F) -> Result<F> {
        let d = x.clone() - y;
        self.c.checked_div(&d).ok_or_else(|| Error::pole("g", x, y))
    }

    pub fn f(&self, x: &F, y: &F) -> Result<F> {
        let d = x.clone() - y;
        let num = d.clone() + &self.c;
        num.checked_div(&d).ok_or_else(|| Error::pole("f", x, y))
    }

    pub fn h(&self, x: &F, y: &F) -> Result<F> {
        let num = x.clone() - y + &self.c;
        Ok(num.checked_div(&self.c).expect("c is nonzero"))
    }

    pub fn t(&self, x: &F, y: &F) -> Result<F> {
        let d = x.clone() - y;
        let den = d.clone() * &(d + &self.c);
        (self.c.clone() * &self.c).checked_div(&den).ok_or_else(|| Error::pole("t", x, y))
    }

    /// `1/f(x,y) = (x-y)/(x-y+c)`; zero at `x = y`.
    pub fn f_inv(&self, x: &F, y: &F) -> Result<F> {
        let d = x.clone() - y;
        let den = d.clone() + &self.c;
        d.checked_div(&den).ok_or_else(|| Error::pole("1/f", x, y))
    }

    /// `1/h(x,y) = c/(x-y+c)`.
    pub fn h_inv(&self, x: &F, y: &F) -> Result<F> {
        let den = x.clone() - y + &self.c;
        self.c.checked_div(&den).ok_or_else(|| Error::pole("1/h", x, y))
    }

    pub fn eval(&self, kind: Aux, x: &F, y: &F) -> Result<F> {
        match kind {
            Aux::G => self.g(x, y),
            Aux::F => self.f(x, y),
            Aux::H => self.h(x, y),
            Aux::T => self.t(x, y),
        }
    }

    /// Double product `prod_{a in A, b in B} kind(a, b)`; 1 when either set is empty.
    pub fn prod(&self, kind: Aux, a: &VarSet<F>, b: &VarSet<F>) -> Result<F> {
        self.prod_slices(kind, a.values(), b.values())
    }

    pub fn prod_slices(&self, kind: Aux, a: &[F], b: &[F]) -> Result<F> {
        let mut acc = F::one();
        for x in a {
            for y in b {
                acc *= &self.eval(kind, x, y)?;
            }
        }
        Ok(acc)
    }

    /// `prod kind(a, y)` over `a in A` for a single `y`.
    pub fn prod_left(&self, kind: Aux, a: &VarSet<F>, y: &F) -> Result<F> {
        self.prod_slices(kind, a.values(), std::slice::from_ref(y))
    }

    /// `prod kind(x, b)` over `b in B` for a single `x`.
    pub fn prod_right(&self, kind: Aux, x: &F, b: &VarSet<F>) -> Result<F> {
        self.prod_slices(kind, std::slice::from_ref(x), b.values())
    }

    /// `prod 1/f(a, b)`, pole-free at coinciding arguments.
    pub fn prod_f_inv(&self, a: &VarSet<F>, b: &VarSet<F>) -> Result<F> {
        let mut acc = F::one();
        for x in a.iter() {
            for y in b.iter() {
                acc *= &self.f_inv(x, y)?;
            }
        }
        Ok(acc)
    }

    /// `prod 1/h(a, b)`.
    pub fn prod_h_inv(&self, a: &VarSet<F>, b: &VarSet<F>) -> Result<F> {
        let mut acc = F::one();
        for x in a.iter() {
            for y in b.iter() {
                acc *= &self.h_inv(x, y)?;
            }
        }
        Ok(acc)
    }

    /// `prod_{l > m} kind(x_l, x_m)` over the given order of a single set.
    pub fn prod_ordered_pairs(&self, kind: Aux, x: &VarSet<F>) -> Result<F> {
        let v = x.values();
        let mut acc = F::one();
        for l in 0..v.len() {
            for m in 0..l {
                acc *= &self.eval(kind, &v[l], &v[m])?;
            }
        }
        Ok(acc)
    }
}

/// Free-function form of [`EvalContext::eval`].
pub fn aux_eval<F: Field>(kind: Aux, x: &F, y: &F, ctx: &EvalContext<F>) -> Result<F> {
    ctx.eval(kind, x, y)
}

/// Free-function form of [`EvalContext::prod`].
pub fn prod_eval<F: Field>(kind: Aux, a: &VarSet<F>, b: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    ctx.prod(kind, a, b)
}
