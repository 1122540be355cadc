//! Multiple actions `T_ij(z̄) B_{a,b}(ū; v̄)` as finite combinations of Bethe vectors.
//!
//! With `η̄ = {ū, z̄}`, `ξ̄ = {v̄, z̄}` and `n = #z̄`, every formula is a sum over
//! partitions of `η̄` and `ξ̄` into blocks `I, II, III`. The odd entries
//! `T13, T23, T31, T32` act through the symmetric products `𝕋`; the even
//! ones through plain products of commuting operators.
//!
//! Combos are returned raw: one term per partition, in enumeration order,
//! zero coefficients included. Use [`LinearCombo::normalize`] to merge.

use std::fmt;
use std::str::FromStr;

use crate::bethe::{bethe_sum_a, expand_combo, BetheLabel, LinearCombo};
use crate::chain::basis::op_parity;
use crate::chain::{ChainRep, StateVector, SymOp};
use crate::error::{Error, Result};
use crate::izergin::izergin;
use crate::kernel::{feasible_sizes, index_partitions, Aux, EvalContext, Field, VarSet};
use crate::weights::Weights;

/// `T_ij` acting `n` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperatorId {
    pub i: usize,
    pub j: usize,
    pub n: usize,
}

impl OperatorId {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if !(1..=3).contains(&i) || !(1..=3).contains(&j) {
            return Err(Error::config("op", format!("indices must be in 1..=3, got ({i},{j})")));
        }
        if n == 0 {
            return Err(Error::Cardinality("an action needs n >= 1".into()));
        }
        Ok(OperatorId { i, j, n })
    }

    /// All nine entries with the given multiplicity, upper triangle first.
    pub fn all(n: usize) -> Vec<OperatorId> {
        [(1, 3), (1, 2), (2, 3), (1, 1), (2, 2), (3, 3), (2, 1), (3, 2), (3, 1)]
            .into_iter()
            .map(|(i, j)| OperatorId { i, j, n })
            .collect()
    }

    pub fn is_odd(&self) -> bool {
        op_parity(self.i, self.j) == 1
    }

    pub fn sym_op(&self) -> Option<SymOp> {
        match (self.i, self.j) {
            (1, 3) => Some(SymOp::T13),
            (2, 3) => Some(SymOp::T23),
            (3, 1) => Some(SymOp::T31),
            (3, 2) => Some(SymOp::T32),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        format!("T{}{}", self.i, self.j)
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.n{}", self.name(), self.n)
    }
}

/// Parses `T21` (n = 1) or `T21.n2`.
impl FromStr for OperatorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::config("op", format!("cannot parse operator `{s}`"));
        let (head, n) = match s.split_once(".n") {
            Some((h, n)) => (h, n.parse::<usize>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let d: Vec<usize> = head.strip_prefix('T').ok_or_else(bad)?.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(bad)?;
        if d.len() != 2 {
            return Err(bad());
        }
        OperatorId::new(d[0], d[1], n)
    }
}

/// Everything an action formula depends on.
pub struct ActionInput<'a, F: Field> {
    pub op: OperatorId,
    pub zbar: VarSet<F>,
    pub label: BetheLabel<F>,
    pub weights: &'a dyn Weights<F>,
    pub ctx: &'a EvalContext<F>,
}

impl<'a, F: Field> ActionInput<'a, F> {
    pub fn new(op: OperatorId, zbar: VarSet<F>, label: BetheLabel<F>, weights: &'a dyn Weights<F>, ctx: &'a EvalContext<F>) -> Result<Self> {
        if zbar.len() != op.n {
            return Err(Error::Cardinality(format!("{} needs #z = {}, got {}", op.name(), op.n, zbar.len())));
        }
        if !zbar.is_distinct() {
            return Err(Error::pole("zbar", "z", "z"));
        }
        Ok(ActionInput { op, zbar, label, weights, ctx })
    }

    pub fn eta(&self) -> VarSet<F> {
        self.label.ubar.concat(&self.zbar)
    }

    pub fn xi(&self) -> VarSet<F> {
        self.label.vbar.concat(&self.zbar)
    }
}

/// Evaluation shortcuts shared by the nine formulas.
struct Coeffs<'a, F: Field> {
    w: &'a dyn Weights<F>,
    ctx: &'a EvalContext<F>,
}

impl<'a, F: Field> Coeffs<'a, F> {
    fn g(&self, x: &VarSet<F>, y: &VarSet<F>) -> Result<F> {
        self.ctx.prod(Aux::G, x, y)
    }

    fn f(&self, x: &VarSet<F>, y: &VarSet<F>) -> Result<F> {
        self.ctx.prod(Aux::F, x, y)
    }

    fn h(&self, x: &VarSet<F>, y: &VarSet<F>) -> Result<F> {
        self.ctx.prod(Aux::H, x, y)
    }

    fn f_inv(&self, x: &VarSet<F>, y: &VarSet<F>) -> Result<F> {
        self.ctx.prod_f_inv(x, y)
    }

    fn h_inv(&self, x: &VarSet<F>, y: &VarSet<F>) -> Result<F> {
        self.ctx.prod_h_inv(x, y)
    }

    /// `K_n(x̄|ȳ+c)`.
    fn k_shift(&self, x: &VarSet<F>, y: &VarSet<F>) -> Result<F> {
        izergin(x, &y.shifted(self.ctx.c()), self.ctx)
    }

    fn r1(&self, x: &VarSet<F>) -> Result<F> {
        self.w.r1_prod(x)
    }

    fn r3(&self, x: &VarSet<F>) -> Result<F> {
        self.w.r3_prod(x)
    }
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Every way to split `set` into blocks of sizes `(fixed..., rest)`; empty if infeasible.
fn splits<F: Field>(set: &VarSet<F>, fixed: &[usize]) -> Result<Vec<Vec<VarSet<F>>>> {
    let Some(sizes) = feasible_sizes(set.len(), fixed) else {
        return Ok(Vec::new());
    };
    Ok(index_partitions(set.len(), &sizes)?.iter().map(|p| p.iter().map(|b| set.pick(b)).collect()).collect())
}

fn label<F: Field>(u: VarSet<F>, v: VarSet<F>) -> Result<BetheLabel<F>> {
    BetheLabel::new(u, v)
}

/// `T13`, `T12`, `T23`.
pub fn act_upper<F: Field>(inp: &ActionInput<'_, F>) -> Result<LinearCombo<F>> {
    let k = Coeffs { w: inp.weights, ctx: inp.ctx };
    let n = inp.op.n;
    let (z, v) = (&inp.zbar, &inp.label.vbar);
    let (eta, xi) = (inp.eta(), inp.xi());
    let lz = inp.weights.lambda2_prod(z)?;
    let mut out = LinearCombo::new();
    match (inp.op.i, inp.op.j) {
        (1, 3) => out.push(lz * k.h(v, z)?, label(eta, xi)?),
        (1, 2) => {
            let pre = lz * k.h(&xi, z)?;
            for p in splits(&xi, &[n])? {
                let c = k.g(&p[1], &p[0])? * k.h_inv(&p[0], z)? * &pre;
                out.push(c, label(eta.clone(), p[1].clone())?);
            }
        }
        (2, 3) => {
            let pre = lz * k.h(v, z)? * F::from_i64(sign(n));
            for p in splits(&eta, &[n])? {
                let c = k.k_shift(z, &p[0])? * k.f(&p[0], &p[1])? * &pre;
                out.push(c, label(p[1].clone(), xi.clone())?);
            }
        }
        _ => return Err(Error::config("op", format!("{} is not an upper-triangular entry", inp.op.name()))),
    }
    Ok(out)
}

/// `T11`, `T22`, `T33`.
pub fn act_diag<F: Field>(inp: &ActionInput<'_, F>) -> Result<LinearCombo<F>> {
    let k = Coeffs { w: inp.weights, ctx: inp.ctx };
    let n = inp.op.n;
    let z = &inp.zbar;
    let (eta, xi) = (inp.eta(), inp.xi());
    let pre = inp.weights.lambda2_prod(z)? * k.h(&xi, z)?;
    let (ii, jj) = (inp.op.i, inp.op.j);
    if ii != jj {
        return Err(Error::config("op", format!("{} is not a diagonal entry", inp.op.name())));
    }
    let pre = if ii == 3 { pre } else { pre * F::from_i64(sign(n)) };
    let xs = splits(&xi, &[n])?;
    let mut out = LinearCombo::new();
    for e in splits(&eta, &[n])? {
        for x in &xs {
            let common = k.g(&x[1], &x[0])? * &pre;
            let c = match ii {
                1 => k.r1(&e[0])? * k.f(&e[1], &e[0])? * k.h_inv(&x[0], z)? * k.f_inv(&x[1], &e[0])? * k.k_shift(&e[0], &x[0])?,
                2 => k.f(&e[0], &e[1])? * k.h_inv(&x[0], z)? * k.k_shift(z, &e[0])?,
                _ => k.r3(&x[0])? * k.f(&e[0], &e[1])? * k.h(&e[0], &e[0])? * k.h_inv(&x[0], &e[0])? * k.h_inv(&e[0], z)? * k.f_inv(&x[0], &e[1])?,
            };
            out.push(c * common, label(e[1].clone(), x[1].clone())?);
        }
    }
    Ok(out)
}

/// `T21`, `T32`, `T31`. Infeasible cardinalities give the empty combo.
pub fn act_lower<F: Field>(inp: &ActionInput<'_, F>) -> Result<LinearCombo<F>> {
    let k = Coeffs { w: inp.weights, ctx: inp.ctx };
    let n = inp.op.n;
    let z = &inp.zbar;
    let (eta, xi) = (inp.eta(), inp.xi());
    let pre = inp.weights.lambda2_prod(z)? * k.h(&xi, z)?;
    let mut out = LinearCombo::new();
    match (inp.op.i, inp.op.j) {
        (2, 1) => {
            let xs = splits(&xi, &[n])?;
            for e in splits(&eta, &[n, n])? {
                let ce = k.r1(&e[0])?
                    * k.f(&e[1], &e[0])?
                    * k.f(&e[1], &e[2])?
                    * k.f(&e[2], &e[0])?
                    * k.k_shift(z, &e[1])?;
                for x in &xs {
                    let c = k.g(&x[1], &x[0])? * k.h_inv(&x[0], z)? * k.f_inv(&x[1], &e[0])? * k.k_shift(&e[0], &x[0])?;
                    out.push(c * &ce * &pre, label(e[2].clone(), x[1].clone())?);
                }
            }
        }
        (3, 2) => {
            let pre = pre * F::from_i64(sign(n * (n.saturating_sub(1)) / 2));
            let es = splits(&eta, &[n])?;
            for x in splits(&xi, &[n, n])? {
                let cx = k.r3(&x[0])? * k.g(&x[1], &x[0])? * k.g(&x[2], &x[1])? * k.g(&x[2], &x[0])? * k.h_inv(&x[1], z)?;
                for e in &es {
                    let c = k.f(&e[0], &e[1])? * k.h_inv(&e[0], z)? * k.h_inv(&x[0], &e[0])? * k.f_inv(&x[0], &e[1])? * k.h(&e[0], &e[0])?;
                    out.push(c * &cx * &pre, label(e[1].clone(), x[2].clone())?);
                }
            }
        }
        (3, 1) => {
            let pre = pre * F::from_i64(sign(n * (n + 1) / 2));
            let es = splits(&eta, &[n, n])?;
            for x in splits(&xi, &[n, n])? {
                let cx = k.r3(&x[0])? * k.g(&x[1], &x[0])? * k.g(&x[2], &x[1])? * k.g(&x[2], &x[0])? * k.h_inv(&x[1], z)?;
                for e in &es {
                    let c = k.r1(&e[1])?
                        * k.h_inv(&e[0], z)?
                        * k.h_inv(&x[0], &e[0])?
                        * k.f(&e[0], &e[1])?
                        * k.f(&e[0], &e[2])?
                        * k.f(&e[2], &e[1])?
                        * k.h(&e[0], &e[0])?
                        * k.f_inv(&x[0], &e[1])?
                        * k.f_inv(&x[0], &e[2])?
                        * k.f_inv(&x[2], &e[1])?
                        * k.k_shift(&e[1], &x[1])?;
                    out.push(c * &cx * &pre, label(e[2].clone(), x[2].clone())?);
                }
            }
        }
        _ => return Err(Error::config("op", format!("{} is not a lower-triangular entry", inp.op.name()))),
    }
    Ok(out)
}

/// Dispatches to [`act_upper`], [`act_diag`] or [`act_lower`].
pub fn act<F: Field>(inp: &ActionInput<'_, F>) -> Result<LinearCombo<F>> {
    use std::cmp::Ordering::*;
    match inp.op.i.cmp(&inp.op.j) {
        Less => act_upper(inp),
        Equal => act_diag(inp),
        Greater => act_lower(inp),
    }
}

/// The operator side `T_ij(z̄) ψ`, symmetrised for odd entries.
pub fn apply_operator<F: Field>(chain: &ChainRep<F>, op: OperatorId, zbar: &VarSet<F>, psi: &StateVector<F>) -> Result<StateVector<F>> {
    match op.sym_op() {
        Some(s) => chain.apply_sym(s, zbar, psi),
        None => chain.apply_product(op.i, op.j, zbar.values(), psi),
    }
}

/// Both sides of an action formula as vectors of the chain.
pub fn action_sides<F: Field>(chain: &ChainRep<F>, inp: &ActionInput<'_, F>) -> Result<(StateVector<F>, StateVector<F>)> {
    let lhs = apply_operator(chain, inp.op, &inp.zbar, &bethe_sum_a(chain, &inp.label)?)?;
    let rhs = expand_combo(chain, &act(inp)?)?;
    Ok((lhs, rhs))
}

/// `max |T_ij(z̄) B - expand(act)|`; exactly zero in exact arithmetic.
pub fn verify_action<F: Field>(chain: &ChainRep<F>, inp: &ActionInput<'_, F>) -> Result<F> {
    let (lhs, rhs) = action_sides(chain, inp)?;
    Ok(lhs.sub(&rhs).max_size())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{sample_generic, Qi};

    fn setup(sites: usize, seed: u64) -> ChainRep<Qi> {
        let ctx = EvalContext::<Qi>::unit();
        let theta = sample_generic(sites, &ctx, seed, &VarSet::empty()).unwrap();
        ChainRep::new(theta, [Qi::from_i64(3), Qi::from_i64(2), Qi::ratio(-1, 2)], ctx).unwrap()
    }

    fn draw(ch: &ChainRep<Qi>, a: usize, b: usize, n: usize, seed: u64) -> (BetheLabel<Qi>, VarSet<Qi>) {
        let p = sample_generic(a + b + n, ch.ctx(), seed, ch.theta()).unwrap().values().to_vec();
        let l = BetheLabel::from_values(p[..a].to_vec(), p[a..a + b].to_vec()).unwrap();
        (l, VarSet::new(p[a + b..].to_vec()))
    }

    #[test]
    fn parse_ids() {
        assert_eq!("T21.n2".parse::<OperatorId>().unwrap(), OperatorId { i: 2, j: 1, n: 2 });
        assert_eq!("T13".parse::<OperatorId>().unwrap().n, 1);
        assert!("T14".parse::<OperatorId>().is_err());
        assert!("X12".parse::<OperatorId>().is_err());
        assert_eq!(OperatorId { i: 3, j: 1, n: 2 }.to_string(), "T31.n2");
    }

    #[test]
    fn t13_on_vacuum() {
        let ch = setup(2, 1);
        let (l, z) = draw(&ch, 0, 0, 1, 3);
        let inp = ActionInput::new(OperatorId { i: 1, j: 3, n: 1 }, z.clone(), l, &ch, ch.ctx()).unwrap();
        let c = act(&inp).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].coeff, ch.lambda2(z.get(0)).unwrap());
    }

    #[test]
    fn t22_on_vacuum() {
        let ch = setup(2, 1);
        let (l, z) = draw(&ch, 0, 0, 1, 4);
        let inp = ActionInput::new(OperatorId { i: 2, j: 2, n: 1 }, z.clone(), l, &ch, ch.ctx()).unwrap();
        let c = act(&inp).unwrap().normalized();
        assert_eq!(c.len(), 1);
        assert_eq!(c.terms()[0].coeff, ch.lambda2(z.get(0)).unwrap());
        assert_eq!(c.terms()[0].label, BetheLabel::vacuum());
    }

    #[test]
    fn t21_on_b0b_is_empty() {
        let ch = setup(2, 1);
        let (l, z) = draw(&ch, 0, 2, 1, 5);
        let inp = ActionInput::new(OperatorId { i: 2, j: 1, n: 1 }, z, l, &ch, ch.ctx()).unwrap();
        assert!(act(&inp).unwrap().is_empty());
    }

    #[test]
    fn diag_term_count() {
        let ch = setup(3, 2);
        let (l, z) = draw(&ch, 2, 1, 2, 6);
        let inp = ActionInput::new(OperatorId { i: 3, j: 3, n: 2 }, z, l, &ch, ch.ctx()).unwrap();
        assert_eq!(act(&inp).unwrap().len(), 6 * 3);
    }

    #[test]
    fn every_operator_small() {
        let ch = setup(3, 7);
        for op in OperatorId::all(1) {
            for (a, b) in [(0, 0), (1, 0), (1, 1), (2, 1)] {
                let (l, z) = draw(&ch, a, b, 1, 40 + (a * 3 + b) as u64);
                let inp = ActionInput::new(op, z, l, &ch, ch.ctx()).unwrap();
                let r = verify_action(&ch, &inp).unwrap();
                assert!(r.is_zero(), "{op} ({a},{b}): {r}");
            }
        }
    }
}
