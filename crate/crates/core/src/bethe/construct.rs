//! Three independent constructions of `B_{a,b}(ū; v̄)` as concrete vectors.
//!
//! Sum A:
//! ```text
//! B = Σ g(v̄_I,ū_I) f(ū_I,ū_II) g(v̄_II,v̄_I) h(ū_I,ū_I) / (λ2(ū) λ2(v̄_II) f(v̄,ū))
//!       · 𝕋13(ū_I) T12(ū_II) 𝕋23(v̄_II) Ω
//! ```
//! Sum B:
//! ```text
//! B = Σ K_n(v̄_I|ū_I) f(ū_I,ū_II) g(v̄_II,v̄_I) / (λ2(ū_II) λ2(v̄) f(v̄,ū))
//!       · 𝕋13(v̄_I) 𝕋23(v̄_II) T12(ū_II) Ω
//! ```
//! Both sums run over `ū ⇒ {ū_I, ū_II}`, `v̄ ⇒ {v̄_I, v̄_II}` with `#ū_I = #v̄_I = n`.
//! The recursive route inverts the `T12` creation rule
//! ```text
//! T12(z) B(ū;v̄) = λ2(z) f(v̄,z) B({ū,z};v̄) + Σ_j g(z,v_j) g(v̄_j,v_j) T13(z) B(ū;v̄_j)
//! ```
//! starting from `B(∅;v̄) = 𝕋23(v̄)Ω/λ2(v̄)`, itself built one `T23` at a time.
//!
//! When `ū` and `v̄` share a value `z` the sums are of the form `0·∞`; such
//! labels are reduced first through
//! `B({z,ū'};{z,v̄'}) = T13(z) B(ū';v̄') / (λ2(z) h(v̄',z))`.

use std::collections::HashMap;

use super::combo::{BetheLabel, LinearCombo};
use crate::chain::{ChainRep, StateVector, SymOp};
use crate::error::Result;
use crate::izergin::izergin;
use crate::kernel::{index_partitions, Aux, Field, VarSet};
use crate::weights::Weights;

/// Strips common parameters, then hands the disjoint remainder to `base`.
fn with_reduction<F, B>(chain: &ChainRep<F>, label: &BetheLabel<F>, base: &mut B) -> Result<StateVector<F>>
where
    F: Field,
    B: FnMut(&ChainRep<F>, &BetheLabel<F>) -> Result<StateVector<F>>,
{
    let Some((i, k)) = label.shared() else {
        return base(chain, label);
    };
    let z = label.ubar.get(i).clone();
    let rest = BetheLabel { ubar: label.ubar.without(i), vbar: label.vbar.without(k) };
    let inner = with_reduction(chain, &rest, base)?;
    if inner.is_zero() {
        return Ok(inner);
    }
    let coeff = chain.lambda2_prod_inv(&VarSet::single(z.clone()))? * chain.ctx().prod_h_inv(&rest.vbar, &VarSet::single(z.clone()))?;
    Ok(chain.apply(1, 3, &z, &inner)?.scaled(&coeff))
}

/// `B(ū; v̄)` through the first explicit sum.
pub fn bethe_sum_a<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>) -> Result<StateVector<F>> {
    with_reduction(chain, label, &mut sum_a_disjoint)
}

/// `B(ū; v̄)` through the second explicit sum.
pub fn bethe_sum_b<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>) -> Result<StateVector<F>> {
    with_reduction(chain, label, &mut sum_b_disjoint)
}

fn sum_a_disjoint<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>) -> Result<StateVector<F>> {
    let ctx = chain.ctx();
    let (u, v) = (&label.ubar, &label.vbar);
    let (a, b) = (u.len(), v.len());
    let omega = chain.vacuum();
    let pref = chain.lambda2_prod_inv(u)? * ctx.prod_f_inv(v, u)?;
    let mut out = StateVector::zero(chain.sites());
    if pref.is_zero() {
        return Ok(out);
    }
    let mut t23_cache: HashMap<Vec<usize>, StateVector<F>> = HashMap::new();
    for n in 0..=a.min(b) {
        for pu in index_partitions(a, &[n, a - n])? {
            let (u1, u2) = (u.pick(&pu[0]), u.pick(&pu[1]));
            let wu = ctx.prod(Aux::F, &u1, &u2)? * ctx.prod(Aux::H, &u1, &u1)?;
            for pv in index_partitions(b, &[n, b - n])? {
                let (v1, v2) = (v.pick(&pv[0]), v.pick(&pv[1]));
                let w = ctx.prod(Aux::G, &v1, &u1)? * ctx.prod(Aux::G, &v2, &v1)? * chain.lambda2_prod_inv(&v2)? * &wu * &pref;
                if w.is_zero() {
                    continue;
                }
                let s1 = match t23_cache.get(&pv[1]) {
                    Some(s) => s.clone(),
                    None => {
                        let s = chain.apply_sym(SymOp::T23, &v2, &omega)?;
                        t23_cache.insert(pv[1].clone(), s.clone());
                        s
                    }
                };
                if s1.is_zero() {
                    continue;
                }
                let s2 = chain.apply_product(1, 2, u2.values(), &s1)?;
                let s3 = chain.apply_sym(SymOp::T13, &u1, &s2)?;
                out.axpy(&w, &s3);
            }
        }
    }
    Ok(out)
}

fn sum_b_disjoint<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>) -> Result<StateVector<F>> {
    let ctx = chain.ctx();
    let (u, v) = (&label.ubar, &label.vbar);
    let (a, b) = (u.len(), v.len());
    let omega = chain.vacuum();
    let pref = chain.lambda2_prod_inv(v)? * ctx.prod_f_inv(v, u)?;
    let mut out = StateVector::zero(chain.sites());
    if pref.is_zero() {
        return Ok(out);
    }
    let mut t12_cache: HashMap<Vec<usize>, StateVector<F>> = HashMap::new();
    for n in 0..=a.min(b) {
        for pu in index_partitions(a, &[n, a - n])? {
            let (u1, u2) = (u.pick(&pu[0]), u.pick(&pu[1]));
            let wu = ctx.prod(Aux::F, &u1, &u2)? * chain.lambda2_prod_inv(&u2)?;
            let s1 = match t12_cache.get(&pu[1]) {
                Some(s) => s.clone(),
                None => {
                    let s = chain.apply_product(1, 2, u2.values(), &omega)?;
                    t12_cache.insert(pu[1].clone(), s.clone());
                    s
                }
            };
            if s1.is_zero() {
                continue;
            }
            for pv in index_partitions(b, &[n, b - n])? {
                let (v1, v2) = (v.pick(&pv[0]), v.pick(&pv[1]));
                let w = izergin(&v1, &u1, ctx)? * ctx.prod(Aux::G, &v2, &v1)? * &wu * &pref;
                if w.is_zero() {
                    continue;
                }
                let s2 = chain.apply_sym(SymOp::T23, &v2, &s1)?;
                let s3 = chain.apply_sym(SymOp::T13, &v1, &s2)?;
                out.axpy(&w, &s3);
            }
        }
    }
    Ok(out)
}

/// `B(ū; v̄)` bootstrapped from the vacuum by the creation recursions.
pub fn bethe_recursive<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>) -> Result<StateVector<F>> {
    let mut memo = HashMap::new();
    recursive_memo(chain, label, &mut memo)
}

type Memo<F> = HashMap<(Vec<usize>, Vec<usize>), StateVector<F>>;

fn recursive_memo<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>, memo: &mut Memo<F>) -> Result<StateVector<F>> {
    let key = (label.ubar.indices().to_vec(), label.vbar.indices().to_vec());
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let out = with_reduction(chain, label, &mut |ch, l| recursive_step(ch, l, memo))?;
    memo.insert(key, out.clone());
    Ok(out)
}

fn recursive_step<F: Field>(chain: &ChainRep<F>, label: &BetheLabel<F>, memo: &mut Memo<F>) -> Result<StateVector<F>> {
    let ctx = chain.ctx();
    let (u, v) = (&label.ubar, &label.vbar);
    let (a, b) = (u.len(), v.len());
    if a == 0 && b == 0 {
        return Ok(chain.vacuum());
    }
    if a == 0 {
        // B(∅; {v̄', z}) = T23(z) B(∅; v̄') / (λ2(z) h(v̄', z))
        let z = v.get(b - 1).clone();
        let rest = BetheLabel { ubar: VarSet::empty(), vbar: v.without(b - 1) };
        let inner = recursive_memo(chain, &rest, memo)?;
        let zs = VarSet::single(z.clone());
        let coeff = chain.lambda2_prod_inv(&zs)? * ctx.prod_h_inv(&rest.vbar, &zs)?;
        return Ok(chain.apply(2, 3, &z, &inner)?.scaled(&coeff));
    }
    let z = u.get(a - 1).clone();
    let zs = VarSet::single(z.clone());
    let u_rest = u.without(a - 1);
    let base = recursive_memo(chain, &BetheLabel { ubar: u_rest.clone(), vbar: v.clone() }, memo)?;
    let mut acc = chain.apply(1, 2, &z, &base)?;
    let mut correction = StateVector::zero(chain.sites());
    for j in 0..b {
        let vj = v.without(j);
        let w = ctx.g(&z, v.get(j))? * ctx.prod_left(Aux::G, &vj, v.get(j))?;
        let inner = recursive_memo(chain, &BetheLabel { ubar: u_rest.clone(), vbar: vj }, memo)?;
        correction.axpy(&w, &inner);
    }
    if !correction.is_zero() {
        acc.axpy(&-F::one(), &chain.apply(1, 3, &z, &correction)?);
    }
    let coeff = chain.lambda2_prod_inv(&zs)? * ctx.prod_f_inv(v, &zs)?;
    Ok(acc.scaled(&coeff))
}

/// `Σ coeff · B(label)`, with each distinct label built once through sum A.
pub fn expand_combo<F: Field>(chain: &ChainRep<F>, combo: &LinearCombo<F>) -> Result<StateVector<F>> {
    let mut built: Vec<(BetheLabel<F>, StateVector<F>)> = Vec::new();
    let mut out = StateVector::zero(chain.sites());
    for t in combo.iter() {
        if t.coeff.is_zero() {
            continue;
        }
        let vec = match built.iter().find(|(l, _)| l.same_as(&t.label)) {
            Some((_, v)) => v.clone(),
            None => {
                let v = bethe_sum_a(chain, &t.label)?;
                built.push((t.label.clone(), v.clone()));
                v
            }
        };
        out.axpy(&t.coeff, &vec);
    }
    Ok(out)
}
