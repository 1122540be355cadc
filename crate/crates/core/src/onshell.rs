//! On-shell Bethe vectors: Bethe equations, the transfer-matrix eigenvalue
//! `τ(z|ū;v̄)` and the unwanted terms of `𝒯(z) B(ū;v̄)`.
//!
//! For `n = 1` the diagonal actions produce four families of terms:
//!
//! ```text
//! 𝒯(z) B(ū;v̄) = τ B(ū;v̄) + Σ_j Λ_j B({z,ū_j};v̄) + Σ_k Λ̃_k B(ū;{z,v̄_k})
//!              + Σ_{j,k} M_jk B({z,ū_j};{z,v̄_k})
//! ```
//!
//! and all but the first vanish exactly when
//!
//! ```text
//! r1(u_j) = f(u_j,ū_j) f(v̄,u_j) / f(ū_j,u_j),    r3(v_k) = f(v_k,ū).
//! ```

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bethe::{bethe_sum_a, expand_combo, BetheLabel, LinearCombo};
use crate::chain::{ChainRep, StateVector};
use crate::error::{Error, Result};
use crate::kernel::{Aux, EvalContext, Field, VarSet};
use crate::weights::Weights;

/// Bethe parameters together with the model data they are tested against.
pub struct BetheSystem<'a, F: Field> {
    pub ubar: VarSet<F>,
    pub vbar: VarSet<F>,
    pub weights: &'a dyn Weights<F>,
    pub ctx: &'a EvalContext<F>,
}

impl<'a, F: Field> BetheSystem<'a, F> {
    pub fn new(ubar: VarSet<F>, vbar: VarSet<F>, weights: &'a dyn Weights<F>, ctx: &'a EvalContext<F>) -> Self {
        BetheSystem { ubar, vbar, weights, ctx }
    }

    pub fn label(&self) -> Result<BetheLabel<F>> {
        BetheLabel::new(self.ubar.clone(), self.vbar.clone())
    }

    /// Right-hand side of the first Bethe equation for `u_j`.
    pub fn r1_target(&self, j: usize) -> Result<F> {
        let (u, ctx) = (&self.ubar, self.ctx);
        let uj = VarSet::single(u.get(j).clone());
        let rest = u.without(j);
        Ok(ctx.prod(Aux::F, &uj, &rest)? * ctx.prod(Aux::F, &self.vbar, &uj)? * ctx.prod_f_inv(&rest, &uj)?)
    }

    /// Right-hand side of the second Bethe equation for `v_k`.
    pub fn r3_target(&self, k: usize) -> Result<F> {
        self.ctx.prod_right(Aux::F, self.vbar.get(k), &self.ubar)
    }
}

/// `a + b` residuals `r1(u_j) - RHS_j`, then `r3(v_k) - RHS_k`.
pub fn bethe_residuals<F: Field>(sys: &BetheSystem<'_, F>) -> Result<Vec<F>> {
    let mut out = Vec::with_capacity(sys.ubar.len() + sys.vbar.len());
    for (j, u) in sys.ubar.iter().enumerate() {
        out.push(sys.weights.r1(u)? - sys.r1_target(j)?);
    }
    for (k, v) in sys.vbar.iter().enumerate() {
        out.push(sys.weights.r3(v)? - sys.r3_target(k)?);
    }
    Ok(out)
}

/// `τ(z) = λ1(z) f(ū,z) + λ2(z) f(z,ū) f(v̄,z) - λ3(z) f(v̄,z)`.
pub fn tau_eval<F: Field>(z: &F, sys: &BetheSystem<'_, F>) -> Result<F> {
    let (w, ctx) = (sys.weights, sys.ctx);
    let fvz = ctx.prod_left(Aux::F, &sys.vbar, z)?;
    Ok(w.lambda1(z)? * ctx.prod_left(Aux::F, &sys.ubar, z)? + w.lambda2(z)? * ctx.prod_right(Aux::F, z, &sys.ubar)? * &fvz
        - w.lambda3(z)? * fvz)
}

/// Residue of `τ(z)` at `z = u_j`.
pub fn tau_residue_at_u<F: Field>(j: usize, sys: &BetheSystem<'_, F>) -> Result<F> {
    let (w, ctx) = (sys.weights, sys.ctx);
    let uj = sys.ubar.get(j);
    let rest = sys.ubar.without(j);
    let c = ctx.c().clone();
    let from_l1 = -(c.clone() * w.lambda1(uj)? * ctx.prod_left(Aux::F, &rest, uj)?);
    let from_l2 = c * w.lambda2(uj)? * ctx.prod_right(Aux::F, uj, &rest)? * ctx.prod_left(Aux::F, &sys.vbar, uj)?;
    Ok(from_l1 + from_l2)
}

/// Residue of `τ(z)` at `z = v_k`.
pub fn tau_residue_at_v<F: Field>(k: usize, sys: &BetheSystem<'_, F>) -> Result<F> {
    let (w, ctx) = (sys.weights, sys.ctx);
    let vk = sys.vbar.get(k);
    let rest = sys.vbar.without(k);
    let inner = w.lambda2(vk)? * ctx.prod_right(Aux::F, vk, &sys.ubar)? - w.lambda3(vk)?;
    Ok(-(ctx.c().clone() * ctx.prod_left(Aux::F, &rest, vk)? * inner))
}

/// `g(v,u) g(z,v) + g(u,z) g(z,v) + g(u,z) g(v,u)`, identically zero.
pub fn three_term_identity<F: Field>(z: &F, u: &F, v: &F, ctx: &EvalContext<F>) -> Result<F> {
    let (gvu, gzv, guz) = (ctx.g(v, u)?, ctx.g(z, v)?, ctx.g(u, z)?);
    Ok(gvu.clone() * &gzv + guz.clone() * &gzv + guz * gvu)
}

/// Coefficients of `𝒯(z) B(ū;v̄)` in the four families of Bethe vectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<F> {
    pub tau_coeff: F,
    pub wanted: BetheLabel<F>,
    pub lambda_terms: Vec<(usize, F, BetheLabel<F>)>,
    pub lambda_tilde_terms: Vec<(usize, F, BetheLabel<F>)>,
    pub m_terms: Vec<(usize, usize, F, BetheLabel<F>)>,
}

impl<F: Field> SpectralDecomposition<F> {
    pub fn to_combo(&self) -> LinearCombo<F> {
        let mut c = LinearCombo::single(self.tau_coeff.clone(), self.wanted.clone());
        for (_, x, l) in self.lambda_terms.iter().chain(&self.lambda_tilde_terms) {
            c.push(x.clone(), l.clone());
        }
        for (_, _, x, l) in &self.m_terms {
            c.push(x.clone(), l.clone());
        }
        c
    }

    /// Every coefficient except `τ`.
    pub fn unwanted(&self) -> impl Iterator<Item = &F> {
        self.lambda_terms
            .iter()
            .map(|t| &t.1)
            .chain(self.lambda_tilde_terms.iter().map(|t| &t.1))
            .chain(self.m_terms.iter().map(|t| &t.2))
    }
}

pub fn decompose_transfer_action<F: Field>(z: &F, sys: &BetheSystem<'_, F>) -> Result<SpectralDecomposition<F>> {
    let (w, ctx) = (sys.weights, sys.ctx);
    let (u, v) = (&sys.ubar, &sys.vbar);
    let zs = VarSet::single(z.clone());
    let l2 = w.lambda2(z)?;
    let ratio = |num: F, den: F, what: &str| num.checked_div(&den).ok_or_else(|| Error::ZeroWeight(what.to_string()));

    // r1(u_j) f(ū_j,u_j) / f(v̄,u_j)  and  f(u_j,ū_j)
    let mut left = Vec::with_capacity(u.len());
    for (j, uj) in u.iter().enumerate() {
        let rest = u.without(j);
        let us = VarSet::single(uj.clone());
        let p = ratio(w.r1(uj)? * ctx.prod(Aux::F, &rest, &us)?, ctx.prod(Aux::F, v, &us)?, "f(v,u_j)")?;
        left.push((p, ctx.prod(Aux::F, &us, &rest)?));
    }
    // r3(v_k) / f(v_k,ū)
    let mut right = Vec::with_capacity(v.len());
    for vk in v.iter() {
        right.push(ratio(w.r3(vk)?, ctx.prod_right(Aux::F, vk, u)?, "f(v_k,u)")?);
    }

    let mut lambda_terms = Vec::new();
    let pre_l = l2.clone() * ctx.prod(Aux::H, v, &zs)? * ctx.prod(Aux::G, v, &zs)?;
    for (j, uj) in u.iter().enumerate() {
        let (p, q) = &left[j];
        let c = pre_l.clone() * ctx.g(z, uj)? * (p.clone() - q);
        lambda_terms.push((j, c, BetheLabel::new(u.replaced(j, z.clone()), v.clone())?));
    }

    let mut lambda_tilde_terms = Vec::new();
    let fzu = ctx.prod(Aux::F, &zs, u)?;
    for (k, vk) in v.iter().enumerate() {
        let rest = v.without(k);
        let c = l2.clone()
            * &fzu
            * ctx.prod_left(Aux::G, &rest, vk)?
            * ctx.prod(Aux::H, &rest, &zs)?
            * ctx.g(z, vk)?
            * (F::one() - &right[k]);
        lambda_tilde_terms.push((k, c, BetheLabel::new(u.clone(), v.replaced(k, z.clone()))?));
    }

    let mut m_terms = Vec::new();
    for (j, uj) in u.iter().enumerate() {
        let (p, q) = &left[j];
        for (k, vk) in v.iter().enumerate() {
            let rest = v.without(k);
            let gvu = ctx.g(vk, uj)?;
            let gzv = ctx.g(z, vk)?;
            let bracket = p.clone() * &gvu * &gzv + q.clone() * ctx.g(uj, z)? * (gzv + right[k].clone() * &gvu);
            let c = l2.clone() * ctx.prod(Aux::H, &rest, &zs)? * ctx.prod_left(Aux::G, &rest, vk)? * bracket;
            m_terms.push((j, k, c, BetheLabel::new(u.replaced(j, z.clone()), v.replaced(k, z.clone()))?));
        }
    }

    Ok(SpectralDecomposition { tau_coeff: tau_eval(z, sys)?, wanted: sys.label()?, lambda_terms, lambda_tilde_terms, m_terms })
}

/// Weights whose `r1(u_j)` and `r3(v_k)` are replaced by the right-hand sides
/// of the Bethe equations, so that `(ū, v̄)` is on-shell by construction.
pub struct OnShellWeights<'a, F: Field> {
    base: &'a dyn Weights<F>,
    r1_at: Vec<(F, F)>,
    r3_at: Vec<(F, F)>,
}

impl<'a, F: Field> OnShellWeights<'a, F> {
    pub fn new(base: &'a dyn Weights<F>, ubar: &VarSet<F>, vbar: &VarSet<F>, ctx: &'a EvalContext<F>) -> Result<Self> {
        let sys = BetheSystem::new(ubar.clone(), vbar.clone(), base, ctx);
        let r1_at = (0..ubar.len()).map(|j| Ok((ubar.get(j).clone(), sys.r1_target(j)?))).collect::<Result<_>>()?;
        let r3_at = (0..vbar.len()).map(|k| Ok((vbar.get(k).clone(), sys.r3_target(k)?))).collect::<Result<_>>()?;
        Ok(OnShellWeights { base, r1_at, r3_at })
    }
}

impl<'a, F: Field> Weights<F> for OnShellWeights<'a, F> {
    fn lambda2(&self, x: &F) -> Result<F> {
        self.base.lambda2(x)
    }

    fn r1(&self, x: &F) -> Result<F> {
        match self.r1_at.iter().find(|(p, _)| p == x) {
            Some((_, r)) => Ok(r.clone()),
            None => self.base.r1(x),
        }
    }

    fn r3(&self, x: &F) -> Result<F> {
        match self.r3_at.iter().find(|(p, _)| p == x) {
            Some((_, r)) => Ok(r.clone()),
            None => self.base.r3(x),
        }
    }
}

/// Largest relative deviation `|𝒯(z)B - τ(z)B| / |B|` over the probes (max norms).
pub fn eigencheck<F: Field>(chain: &ChainRep<F>, sys: &BetheSystem<'_, F>, probes: &VarSet<F>) -> Result<F> {
    let b = bethe_sum_a(chain, &sys.label()?)?;
    let scale = b.max_size().inv().ok_or_else(|| Error::ZeroWeight("Bethe vector vanishes".into()))?;
    let mut worst = F::zero();
    for z in probes.iter() {
        let lhs = chain.apply_transfer(z, &b)?;
        let r = lhs.sub(&b.scaled(&tau_eval(z, sys)?)).max_size() * &scale;
        if r.canonical_cmp(&worst).is_gt() {
            worst = r;
        }
    }
    Ok(worst)
}

/// `𝒯(z) B` and the expansion of its four-family decomposition.
pub fn transfer_sides<F: Field>(chain: &ChainRep<F>, z: &F, sys: &BetheSystem<'_, F>) -> Result<(StateVector<F>, StateVector<F>)> {
    let lhs = chain.apply_transfer(z, &bethe_sum_a(chain, &sys.label()?)?)?;
    let rhs = expand_combo(chain, &decompose_transfer_action(z, sys)?.to_combo())?;
    Ok((lhs, rhs))
}

/// Eigenvalues of the dense transfer matrix.
pub fn transfer_spectrum(chain: &ChainRep<Complex64>, z: &Complex64) -> Result<Vec<Complex64>> {
    let t = chain.transfer_matrix(z)?;
    let n = t.dim();
    let m = DMatrix::from_fn(n, n, |r, c| *t.get(r, c));
    let (_, tri) = m.schur().unpack();
    Ok((0..n).map(|k| tri[(k, k)]).collect())
}

/// A converged solution of the Bethe equations.
#[derive(Debug, Clone)]
pub struct BetheRoot {
    pub ubar: Vec<Complex64>,
    pub vbar: Vec<Complex64>,
    pub residual: f64,
    pub seed: u64,
}

impl BetheRoot {
    pub fn system<'a>(&self, weights: &'a dyn Weights<Complex64>, ctx: &'a EvalContext<Complex64>) -> BetheSystem<'a, Complex64> {
        BetheSystem::new(VarSet::new(self.ubar.clone()), VarSet::new(self.vbar.clone()), weights, ctx)
    }
}

#[derive(Debug, Default)]
pub struct NewtonOutcome {
    pub roots: Vec<BetheRoot>,
    pub failures: Vec<Error>,
}

/// Newton iteration on the Bethe equations from one random start per seed.
///
/// Roots are kept if their residual is below `tol` and the parameters are
/// pairwise separated; duplicates up to reordering within `ū` and `v̄` are
/// dropped (tolerance `1e-7`).
pub fn solve_bethe_newton(chain: &ChainRep<Complex64>, a: usize, b: usize, seeds: &[u64], tol: f64, max_iter: usize) -> NewtonOutcome {
    let mut out = NewtonOutcome::default();
    for &seed in seeds {
        match newton_from_seed(chain, a, b, seed, tol, max_iter) {
            Ok(root) => {
                if !out.roots.iter().any(|r| same_root(r, &root, 1e-7)) {
                    out.roots.push(root);
                }
            }
            Err(e) => out.failures.push(e),
        }
    }
    out
}

fn residual_vec(chain: &ChainRep<Complex64>, a: usize, x: &[Complex64]) -> Result<Vec<Complex64>> {
    let sys = BetheSystem::new(VarSet::new(x[..a].to_vec()), VarSet::new(x[a..].to_vec()), chain, chain.ctx());
    let r = bethe_residuals(&sys)?;
    if r.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::pole("bethe", "x", "x"));
    }
    Ok(r)
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn newton_from_seed(chain: &ChainRep<Complex64>, a: usize, b: usize, seed: u64, tol: f64, max_iter: usize) -> Result<BetheRoot> {
    let dim = a + b;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre = chain.theta().iter().fold(Complex64::new(0.0, 0.0), |s, t| s + t) / chain.sites() as f64;
    let mut x: Vec<Complex64> =
        (0..dim).map(|_| centre + Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-1.0..1.0))).collect();
    let fail = |res: f64| Error::NoConvergence { seed, residual: res };
    let mut r = residual_vec(chain, a, &x).map_err(|_| fail(f64::INFINITY))?;
    let mut norm = inf_norm(&r);
    for _ in 0..max_iter {
        if norm <= tol {
            break;
        }
        let mut jac = DMatrix::<Complex64>::zeros(dim, dim);
        for k in 0..dim {
            let h = 1e-7 * (1.0 + x[k].norm());
            let mut xp = x.clone();
            xp[k] += h;
            let rp = residual_vec(chain, a, &xp).map_err(|_| fail(norm))?;
            for i in 0..dim {
                jac[(i, k)] = (rp[i] - r[i]) / h;
            }
        }
        let rhs = DMatrix::from_fn(dim, 1, |i, _| -r[i]);
        let Some(step) = jac.lu().solve(&rhs) else {
            return Err(fail(norm));
        };
        let mut step: Vec<Complex64> = step.iter().copied().collect();
        let len = inf_norm(&step);
        if len > 1.0 {
            step.iter_mut().for_each(|s| *s /= len);
        }
        // backtrack until the residual decreases; poles count as failure to decrease
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<Complex64> = x.iter().zip(&step).map(|(p, s)| p + s * t).collect();
            if let Ok(rt) = residual_vec(chain, a, &trial) {
                let nt = inf_norm(&rt);
                if nt < norm {
                    x = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(fail(norm));
        }
    }
    if norm > tol || !separated(&x, a, chain.ctx()) {
        return Err(fail(norm));
    }
    Ok(BetheRoot { ubar: x[..a].to_vec(), vbar: x[a..].to_vec(), residual: norm, seed })
}

/// Rejects coinciding Bethe parameters, which would make the vector degenerate.
fn separated(x: &[Complex64], a: usize, ctx: &EvalContext<Complex64>) -> bool {
    let close = |p: &Complex64, q: &Complex64| (p - q).norm() < 1e-6;
    let c = *ctx.c();
    for i in 0..x.len() {
        for j in 0..i {
            let same_kind = (i < a) == (j < a);
            if close(&x[i], &x[j]) || (same_kind && (close(&(x[i] + c), &x[j]) || close(&x[i], &(x[j] + c)))) {
                return false;
            }
        }
    }
    true
}

fn sorted(v: &[Complex64]) -> Vec<Complex64> {
    let mut v = v.to_vec();
    v.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    v
}

fn same_root(p: &BetheRoot, q: &BetheRoot, tol: f64) -> bool {
    let close = |x: &[Complex64], y: &[Complex64]| sorted(x).iter().zip(sorted(y).iter()).all(|(s, t)| (s - t).norm() < tol);
    close(&p.ubar, &q.ubar) && close(&p.vbar, &q.vbar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{sample_generic, Qi};
    use crate::weights::FnWeights;

    fn synthetic() -> impl Weights<Qi> {
        FnWeights {
            lambda2: |x: &Qi| Ok(x.clone() * x + Qi::one()),
            r1: |x: &Qi| Ok((x.clone() + Qi::from_i64(2)).checked_div(&(x.clone() * x + Qi::from_i64(3))).unwrap()),
            r3: |x: &Qi| Ok(x.clone() * x * Qi::from_i64(2) + Qi::one()),
        }
    }

    #[test]
    fn empty_system() {
        let ctx = EvalContext::<Qi>::unit();
        let w = synthetic();
        let sys = BetheSystem::new(VarSet::empty(), VarSet::empty(), &w, &ctx);
        assert!(bethe_residuals(&sys).unwrap().is_empty());
        let z = Qi::ratio(5, 3);
        let want = w.lambda1(&z).unwrap() + w.lambda2(&z).unwrap() - w.lambda3(&z).unwrap();
        assert_eq!(tau_eval(&z, &sys).unwrap(), want);
    }

    #[test]
    fn identity_holds() {
        let ctx = EvalContext::<Qi>::unit();
        let p = sample_generic(3, &ctx, 8, &VarSet::empty()).unwrap();
        assert!(three_term_identity(p.get(0), p.get(1), p.get(2), &ctx).unwrap().is_zero());
    }

    #[test]
    fn substitution_kills_unwanted_terms() {
        let ctx = EvalContext::<Qi>::unit();
        let base = synthetic();
        let p = sample_generic(5, &ctx, 21, &VarSet::empty()).unwrap();
        let (u, v, z) = (p.pick(&[0, 1]), p.pick(&[2, 3]), p.get(4).clone());
        let w = OnShellWeights::new(&base, &u, &v, &ctx).unwrap();
        let sys = BetheSystem::new(u, v, &w, &ctx);
        assert!(bethe_residuals(&sys).unwrap().iter().all(|r| r.is_zero()));
        let d = decompose_transfer_action(&z, &sys).unwrap();
        assert_eq!(d.unwanted().count(), 2 + 2 + 4);
        assert!(d.unwanted().all(|c| c.is_zero()));
        assert!(tau_residue_at_u(1, &sys).unwrap().is_zero());
        assert!(tau_residue_at_v(0, &sys).unwrap().is_zero());
    }

    #[test]
    fn residue_matches_limit() {
        let ctx = EvalContext::<Qi>::unit();
        let w = synthetic();
        let p = sample_generic(3, &ctx, 2, &VarSet::empty()).unwrap();
        let sys = BetheSystem::new(p.pick(&[0, 1]), p.pick(&[2]), &w, &ctx);
        let eps = Qi::real(num_rational::BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(30)));
        for (pole, res) in [(sys.ubar.get(0).clone(), tau_residue_at_u(0, &sys).unwrap()), (sys.vbar.get(0).clone(), tau_residue_at_v(0, &sys).unwrap())] {
            let approx = tau_eval(&(pole + &eps), &sys).unwrap() * &eps;
            assert!((approx.clone() - &res).modulus() < 1e-9, "{approx} vs {res}");
        }
    }

    #[test]
    fn decomposition_reconstructs_transfer_action() {
        let ctx = EvalContext::<Qi>::unit();
        let theta = sample_generic(3, &ctx, 5, &VarSet::empty()).unwrap();
        let chain = ChainRep::new(theta.clone(), [Qi::from_i64(2), Qi::from_i64(3), Qi::ratio(1, 2)], ctx.clone()).unwrap();
        let p = sample_generic(4, &ctx, 6, &theta).unwrap();
        let sys = BetheSystem::new(p.pick(&[0, 1]), p.pick(&[2]), &chain, &ctx);
        let (lhs, rhs) = transfer_sides(&chain, p.get(3), &sys).unwrap();
        assert!(!lhs.is_zero());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn one_site_closed_form_root() {
        // κ1 f(u,θ) = κ2  ⇒  u = θ + c κ1/(κ2 - κ1)
        let ctx = EvalContext::<Qi>::unit();
        let (k1, k2) = (Qi::from_i64(3), Qi::from_i64(2));
        let theta = Qi::ratio(1, 4);
        let chain = ChainRep::new(VarSet::single(theta.clone()), [k1.clone(), k2.clone(), Qi::one()], ctx.clone()).unwrap();
        let u = theta + (k1.clone() * ctx.c()).checked_div(&(k2 - k1)).unwrap();
        let sys = BetheSystem::new(VarSet::single(u), VarSet::empty(), &chain, &ctx);
        assert!(bethe_residuals(&sys).unwrap()[0].is_zero());
        assert!(eigencheck(&chain, &sys, &VarSet::new(vec![Qi::ratio(7, 5), Qi::from_i64(-3)])).unwrap().is_zero());
    }
}
