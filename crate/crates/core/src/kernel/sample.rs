//! Reproducible draws of generic spectral parameters.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::aux::EvalContext;
use super::scalar::Field;
use super::varset::VarSet;
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 10_000;
const NUMERATOR_RANGE: i64 = 48;
const MAX_DENOMINATOR: i64 = 7;
/// Minimal separation from a pole, relevant in numeric mode only.
const NUMERIC_GUARD: f64 = 1e-6;

/// True if `x - y` avoids `{0, c, -c}`.
pub fn is_generic_pair<F: Field>(x: &F, y: &F, ctx: &EvalContext<F>) -> bool {
    let d = x.clone() - y;
    let near = |v: &F| v.is_zero() || (F::MODE == super::scalar::Mode::Numeric && v.modulus() < NUMERIC_GUARD);
    !(near(&d) || near(&(d.clone() - ctx.c())) || near(&(d + ctx.c())))
}

/// Draw `count` rationals such that all pairwise differences within the
/// result and against `forbidden` avoid `{0, ±c}`.
pub fn sample_generic<F: Field>(
    count: usize,
    ctx: &EvalContext<F>,
    seed: u64,
    forbidden: &VarSet<F>,
) -> Result<VarSet<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_generic_with(count, ctx, &mut rng, forbidden)
}

/// As [`sample_generic`] but drawing from a caller-held generator.
pub fn sample_generic_with<F: Field, R: Rng>(
    count: usize,
    ctx: &EvalContext<F>,
    rng: &mut R,
    forbidden: &VarSet<F>,
) -> Result<VarSet<F>> {
    let mut out: Vec<F> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::Exhaustion { wanted: count, attempts: MAX_ATTEMPTS });
        }
        let x = draw_rational::<F, R>(rng);
        let clash = forbidden.iter().chain(out.iter()).any(|y| !is_generic_pair(&x, y, ctx));
        if !clash {
            out.push(x);
        }
    }
    Ok(VarSet::new(out))
}

fn draw_rational<F: Field, R: Rng>(rng: &mut R) -> F {
    let num = rng.random_range(-NUMERATOR_RANGE..=NUMERATOR_RANGE);
    let den = rng.random_range(1..=MAX_DENOMINATOR);
    F::from_ratio(&BigRational::new(BigInt::from(num), BigInt::from(den)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::scalar::Qi;

    #[test]
    fn zero_count_is_empty() {
        let ctx = EvalContext::<Qi>::unit();
        assert!(sample_generic(0, &ctx, 3, &VarSet::empty()).unwrap().is_empty());
    }

    #[test]
    fn draws_are_generic_and_reproducible() {
        let ctx = EvalContext::new(Qi::ratio(2, 3)).unwrap();
        let forbidden = VarSet::new(vec![Qi::from_i64(0), Qi::from_i64(1)]);
        let a = sample_generic(3, &ctx, 7, &forbidden).unwrap();
        let b = sample_generic(3, &ctx, 7, &forbidden).unwrap();
        assert_eq!(a, b);
        let all: Vec<Qi> = a.iter().chain(forbidden.iter()).cloned().collect();
        for i in 0..all.len() {
            for j in 0..i {
                assert!(is_generic_pair(&all[i], &all[j], &ctx));
            }
        }
    }

    #[test]
    fn exhaustion_is_reported() {
        let ctx = EvalContext::<Qi>::unit();
        // far more points than the sampling grid can separate
        assert!(matches!(
            sample_generic(5000, &ctx, 1, &VarSet::empty()),
            Err(Error::Exhaustion { .. })
        ));
    }
}
