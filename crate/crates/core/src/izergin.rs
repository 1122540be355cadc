//! The Izergin determinant `K_n(x̄|ȳ)` and the partition-sum identities built on it.
//!
//! The defining form
//!
//! ```text
//! K_n(x̄|ȳ) = h(x̄,ȳ) prod_{l<m} g(x_l,x_m) g(y_m,y_l) det[t(x_i,y_j)]
//! ```
//!
//! is a 0·∞ expression whenever some `x_i - y_j = -c`, although `K_n` itself is
//! regular there (e.g. `K_1(z|z+c) = -1`). [`izergin`] therefore absorbs
//! `h(x_i, ȳ)` into row `i`, evaluating
//!
//! ```text
//! K_n(x̄|ȳ) = prod_{l<m} g(x_l,x_m) g(y_m,y_l) det[g(x_i,y_j) h(x_i, ȳ_j)]
//! ```
//!
//! where `ȳ_j = ȳ \ {y_j}`. The only poles left are `x_i = y_j` and coinciding
//! elements within a set. [`izergin_direct`] keeps the textbook form and serves
//! as the cross-check.

use crate::error::{Error, Result};
use crate::kernel::{index_partitions, Aux, EvalContext, Field, VarSet};

/// Determinant by fraction-free (Bareiss) elimination with row pivoting.
pub fn bareiss_det<F: Field>(mut m: Vec<Vec<F>>) -> F {
    let n = m.len();
    if n == 0 {
        return F::one();
    }
    let mut negate = false;
    let mut prev = F::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return F::zero(),
            }
        }
        let prev_inv = prev.inv().expect("Bareiss pivots are nonzero");
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (m[i][j].clone() * &m[k][k] - m[i][k].clone() * &m[k][j]) * &prev_inv;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant by cofactor expansion along the first row. Exponential cost;
/// used as an independent oracle for small matrices.
pub fn cofactor_det<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    match n {
        0 => F::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = F::zero();
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<F>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, v)| v.clone()).collect())
                    .collect();
                let term = m[0][col].clone() * cofactor_det(&minor);
                if col % 2 == 0 {
                    acc += term;
                } else {
                    acc -= &term;
                }
            }
            acc
        }
    }
}

fn vandermonde_prefactor<F: Field>(x: &VarSet<F>, y: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    let mut acc = F::one();
    let (xs, ys) = (x.values(), y.values());
    for l in 0..xs.len() {
        for m in l + 1..xs.len() {
            acc *= &ctx.g(&xs[l], &xs[m])?;
            acc *= &ctx.g(&ys[m], &ys[l])?;
        }
    }
    Ok(acc)
}

fn check_sizes<F: Field>(x: &VarSet<F>, y: &VarSet<F>) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch(format!("Izergin determinant needs #x = #y, got {} and {}", x.len(), y.len())));
    }
    Ok(())
}

/// `K_n(x̄|ȳ)`; `K_0 = 1`.
pub fn izergin<F: Field>(x: &VarSet<F>, y: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    check_sizes(x, y)?;
    let n = x.len();
    if n == 0 {
        return Ok(F::one());
    }
    let pre = vandermonde_prefactor(x, y, ctx)?;
    let (xs, ys) = (x.values(), y.values());
    let mut m = vec![vec![F::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut e = ctx.g(&xs[i], &ys[j])?;
            for (k, yk) in ys.iter().enumerate() {
                if k != j {
                    e *= &ctx.h(&xs[i], yk)?;
                }
            }
            m[i][j] = e;
        }
    }
    Ok(pre * bareiss_det(m))
}

/// `K_n` straight from its defining formula with a cofactor determinant of `t`.
pub fn izergin_direct<F: Field>(x: &VarSet<F>, y: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    check_sizes(x, y)?;
    let pre = ctx.prod(Aux::H, x, y)? * vandermonde_prefactor(x, y, ctx)?;
    let m: Vec<Vec<F>> = x
        .iter()
        .map(|xi| y.iter().map(|yj| ctx.t(xi, yj)).collect::<Result<Vec<F>>>())
        .collect::<Result<_>>()?;
    Ok(pre * cofactor_det(&m))
}

fn sign<F: Field>(negative: bool) -> F {
    if negative {
        -F::one()
    } else {
        F::one()
    }
}

/// Residual of `K_n(x̄|ȳ+c) = (-1)^n K_n(ȳ|x̄) / f(ȳ,x̄)`.
pub fn check_shift_identity<F: Field>(x: &VarSet<F>, y: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    let lhs = izergin(x, &y.shifted(ctx.c()), ctx)?;
    let rhs = sign::<F>(x.len() % 2 == 1) * izergin(y, x, ctx)? * ctx.prod_f_inv(y, x)?;
    Ok(lhs - rhs)
}

fn arity_check<F>(w: &VarSet<F>, u: &VarSet<F>, v: &VarSet<F>) -> Result<()>
where
    F: Field,
{
    if w.len() != u.len() + v.len() {
        return Err(Error::SizeMismatch(format!("#w = {} but #u + #v = {}", w.len(), u.len() + v.len())));
    }
    Ok(())
}

/// Both sides of
/// `sum g(w̄_I,ū) g(w̄_II,v̄) g(w̄_II,w̄_I) = g(w̄,ū) g(w̄,v̄) / g(ū,v̄)`,
/// summed over `w̄ ⇒ {w̄_I, w̄_II}` with `#w̄_I = #ū`.
pub fn lemma_a1<F: Field>(w: &VarSet<F>, u: &VarSet<F>, v: &VarSet<F>, ctx: &EvalContext<F>) -> Result<(F, F)> {
    arity_check(w, u, v)?;
    let mut lhs = F::zero();
    for plan in index_partitions(w.len(), &[u.len(), v.len()])? {
        let (wi, wii) = (w.pick(&plan[0]), w.pick(&plan[1]));
        lhs += ctx.prod(Aux::G, &wi, u)? * ctx.prod(Aux::G, &wii, v)? * ctx.prod(Aux::G, &wii, &wi)?;
    }
    let den = ctx.prod(Aux::G, u, v)?;
    let rhs = (ctx.prod(Aux::G, w, u)? * ctx.prod(Aux::G, w, v)?)
        .checked_div(&den)
        .ok_or_else(|| Error::pole("1/g(u,v)", "u", "v"))?;
    Ok((lhs, rhs))
}

/// Both sides of
/// `sum K_m1(w̄_I|ū) K_m2(v̄|w̄_II) f(w̄_II,w̄_I) = (-1)^m1 f(w̄,ū) K_{m1+m2}({ū-c, v̄}|w̄)`.
pub fn lemma_a2<F: Field>(w: &VarSet<F>, u: &VarSet<F>, v: &VarSet<F>, ctx: &EvalContext<F>) -> Result<(F, F)> {
    arity_check(w, u, v)?;
    let mut lhs = F::zero();
    for plan in index_partitions(w.len(), &[u.len(), v.len()])? {
        let (wi, wii) = (w.pick(&plan[0]), w.pick(&plan[1]));
        lhs += izergin(&wi, u, ctx)? * izergin(v, &wii, ctx)? * ctx.prod(Aux::F, &wii, &wi)?;
    }
    let shifted = u.shifted(&-ctx.c().clone()).concat(v);
    let rhs = sign::<F>(u.len() % 2 == 1) * ctx.prod(Aux::F, w, u)? * izergin(&shifted, w, ctx)?;
    Ok((lhs, rhs))
}

/// Residual of the single-element summation identity
/// `sum g(ξ̄_i,ξ̄_I) g(z_n,ξ̄_i) h(ξ̄_i,z̄_n) = g(z_n,ξ̄_0) h(z_n,z̄_n)`
/// over `ξ̄_0 ⇒ {ξ̄_I, ξ̄_i}`, `#ξ̄_i = 1`, where `z̄_n = zrest`.
pub fn check_ci_identity<F: Field>(xi0: &VarSet<F>, zn: &F, zrest: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    if xi0.len() != zrest.len() + 1 {
        return Err(Error::SizeMismatch(format!("#xi0 = {} but #z = {}", xi0.len(), zrest.len() + 1)));
    }
    let mut lhs = F::zero();
    for plan in index_partitions(xi0.len(), &[xi0.len() - 1, 1])? {
        let (big, one) = (xi0.pick(&plan[0]), xi0.pick(&plan[1]));
        let xi_i = one.get(0);
        lhs += ctx.prod_right(Aux::G, xi_i, &big)? * ctx.g(zn, xi_i)? * ctx.prod_right(Aux::H, xi_i, zrest)?;
    }
    let rhs = ctx.prod_right(Aux::G, zn, xi0)? * ctx.prod_right(Aux::H, zn, zrest)?;
    Ok(lhs - rhs)
}

/// Residual of
/// `sum K_{n-1}(z̄_n|η̄_I+c) K_1(η̄_i|z_n) f(η̄_I,η̄_i) = -f(η̄_0,z_n) K_n(z̄|η̄_0+c)`
/// over `η̄_0 ⇒ {η̄_I, η̄_i}`, `#η̄_i = 1`, with `z_n` the last element of `z̄`.
pub fn check_ml_identity<F: Field>(eta0: &VarSet<F>, z: &VarSet<F>, ctx: &EvalContext<F>) -> Result<F> {
    let n = z.len();
    if n == 0 || eta0.len() != n {
        return Err(Error::SizeMismatch(format!("need #eta0 = #z >= 1, got {} and {n}", eta0.len())));
    }
    let zn = z.get(n - 1).clone();
    let zrest = z.without(n - 1);
    let c = ctx.c().clone();
    let mut lhs = F::zero();
    for plan in index_partitions(n, &[n - 1, 1])? {
        let (big, one) = (eta0.pick(&plan[0]), eta0.pick(&plan[1]));
        lhs += izergin(&zrest, &big.shifted(&c), ctx)?
            * izergin(&one, &VarSet::single(zn.clone()), ctx)?
            * ctx.prod(Aux::F, &big, &one)?;
    }
    let rhs = -(ctx.prod_left(Aux::F, eta0, &zn)? * izergin(z, &eta0.shifted(&c), ctx)?);
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{sample_generic, Qi};

    fn set(v: &[i64]) -> VarSet<Qi> {
        VarSet::new(v.iter().map(|&k| Qi::from_i64(k)).collect())
    }

    #[test]
    fn k1_is_g() {
        let ctx = EvalContext::<Qi>::unit();
        let (x, y) = (Qi::ratio(3, 2), Qi::ratio(-5, 3));
        let k = izergin(&VarSet::single(x.clone()), &VarSet::single(y.clone()), &ctx).unwrap();
        assert_eq!(k, ctx.g(&x, &y).unwrap());
    }

    #[test]
    fn k1_at_shift_is_minus_one() {
        let ctx = EvalContext::new(Qi::ratio(2, 3)).unwrap();
        let z = Qi::ratio(4, 5);
        let zc = z.clone() + ctx.c();
        let k = izergin(&VarSet::single(z), &VarSet::single(zc), &ctx).unwrap();
        assert_eq!(k, -Qi::one());
    }

    #[test]
    fn two_by_two_hand_expansion() {
        // prefactor h(x̄,ȳ) g(3,5) g(2,1) = 120 * (-1/2) * 1, det = 1/72 - 1/40
        let ctx = EvalContext::<Qi>::unit();
        let k = izergin(&set(&[3, 5]), &set(&[1, 2]), &ctx).unwrap();
        assert_eq!(k, Qi::ratio(2, 3));
        assert_eq!(izergin_direct(&set(&[3, 5]), &set(&[1, 2]), &ctx).unwrap(), Qi::ratio(2, 3));
    }

    #[test]
    fn empty_is_one_and_mismatch_errors() {
        let ctx = EvalContext::<Qi>::unit();
        assert_eq!(izergin(&set(&[]), &set(&[]), &ctx).unwrap(), Qi::one());
        assert!(matches!(izergin(&set(&[1]), &set(&[]), &ctx), Err(Error::SizeMismatch(_))));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let ctx = EvalContext::<Qi>::unit();
        let v = sample_generic(16, &ctx, 11, &VarSet::empty()).unwrap();
        let m: Vec<Vec<Qi>> = (0..4).map(|i| (0..4).map(|j| v.get(4 * i + j).clone()).collect()).collect();
        assert_eq!(bareiss_det(m.clone()), cofactor_det(&m));
        // forces a pivot swap
        let mut z = m.clone();
        z[0][0] = Qi::zero();
        assert_eq!(bareiss_det(z.clone()), cofactor_det(&z));
    }

    #[test]
    fn shift_identity_small_cases() {
        let ctx = EvalContext::<Qi>::unit();
        assert!(check_shift_identity(&set(&[]), &set(&[]), &ctx).unwrap().is_zero());
        assert!(check_shift_identity(&set(&[4]), &set(&[9]), &ctx).unwrap().is_zero());
        let p = sample_generic(4, &ctx, 5, &VarSet::empty()).unwrap();
        let (x, y) = (p.pick(&[0, 1]), p.pick(&[2, 3]));
        assert!(check_shift_identity(&x, &y, &ctx).unwrap().is_zero());
    }

    #[test]
    fn lemma_degenerate_cases() {
        let ctx = EvalContext::<Qi>::unit();
        let p = sample_generic(4, &ctx, 2, &VarSet::empty()).unwrap();
        let (l, r) = lemma_a1(&p.pick(&[0]), &p.pick(&[1]), &VarSet::empty(), &ctx).unwrap();
        assert_eq!(l, r);
        let (l, r) = lemma_a2(&p.pick(&[0, 1]), &VarSet::empty(), &p.pick(&[2, 3]), &ctx).unwrap();
        assert_eq!(l, r);
        assert_eq!(l, izergin(&p.pick(&[2, 3]), &p.pick(&[0, 1]), &ctx).unwrap());
    }

    #[test]
    fn ci_single_term() {
        let ctx = EvalContext::<Qi>::unit();
        let r = check_ci_identity(&set(&[3]), &Qi::from_i64(8), &set(&[]), &ctx).unwrap();
        assert!(r.is_zero());
    }
}
