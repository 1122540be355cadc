//! Inhomogeneous fundamental chain with a diagonal twist.
//!
//! The monodromy matrix acts on `V_0 ⊗ H` with the auxiliary space as the
//! leftmost tensor factor:
//!
//! ```text
//! T_0(u) = D_0 R_{0L}(u,θ_L) ··· R_{01}(u,θ_1),   D = diag(κ1, κ2, κ3)
//! ```
//!
//! and its entries are read off through the graded decomposition
//! `T_0(u) = Σ E_ij ⊗ T_ij(u)`, which gives
//! `T_ij(u) h = (-1)^{([i]+[j])[j]} ⟨e_i| T_0(u) |e_j ⊗ h⟩`.
//!
//! Operators are never stored densely: every entry is applied to sparse
//! vectors site by site. Dense blocks can be materialised for small chains.

use super::basis::{graded_swap, op_parity, parity, POW3};
use super::operator::{max_size, GradedOperator};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::kernel::{is_generic_pair, Aux, EvalContext, Field, VarSet};

/// Largest chain the crate accepts. Dense materialisation is only sensible far below this.
pub const MAX_SITES: usize = 8;

/// A concrete representation: `L` sites, inhomogeneities `θ̄` and twist `κ`.
#[derive(Debug, Clone)]
pub struct ChainRep<F> {
    theta: VarSet<F>,
    twist: [F; 3],
    ctx: EvalContext<F>,
}

/// The odd operators that enter through symmetrised products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymOp {
    T13,
    T23,
    T31,
    T32,
}

impl SymOp {
    pub fn indices(self) -> (usize, usize) {
        match self {
            SymOp::T13 => (1, 3),
            SymOp::T23 => (2, 3),
            SymOp::T31 => (3, 1),
            SymOp::T32 => (3, 2),
        }
    }
}

impl<F: Field> ChainRep<F> {
    pub fn new(theta: VarSet<F>, twist: [F; 3], ctx: EvalContext<F>) -> Result<Self> {
        if theta.is_empty() || theta.len() > MAX_SITES {
            return Err(Error::config("L", format!("chain length must be in 1..={MAX_SITES}, got {}", theta.len())));
        }
        if twist.iter().any(|k| k.is_zero()) {
            return Err(Error::config("twist", "twist entries must be nonzero"));
        }
        let t = theta.values();
        for a in 0..t.len() {
            for b in 0..a {
                if !is_generic_pair(&t[a], &t[b], &ctx) {
                    return Err(Error::pole("theta", &t[a], &t[b]));
                }
            }
        }
        Ok(ChainRep { theta, twist, ctx })
    }

    pub fn untwisted(theta: VarSet<F>, ctx: EvalContext<F>) -> Result<Self> {
        Self::new(theta, [F::one(), F::one(), F::one()], ctx)
    }

    pub fn sites(&self) -> usize {
        self.theta.len()
    }

    pub fn dim(&self) -> usize {
        POW3[self.sites()] as usize
    }

    pub fn theta(&self) -> &VarSet<F> {
        &self.theta
    }

    pub fn twist(&self) -> &[F; 3] {
        &self.twist
    }

    pub fn ctx(&self) -> &EvalContext<F> {
        &self.ctx
    }

    pub fn vacuum(&self) -> StateVector<F> {
        StateVector::vacuum(self.sites())
    }

    /// `T_ij(u) ψ`, with 1-based `i, j`.
    pub fn apply(&self, i: usize, j: usize, u: &F, psi: &StateVector<F>) -> Result<StateVector<F>> {
        assert!((1..=3).contains(&i) && (1..=3).contains(&j), "monodromy indices are 1..=3");
        let sites = self.sites();
        let mut cur = StateVector::zero(sites + 1);
        for (k, v) in psi.iter() {
            cur.add_at((j as u64 - 1) + 3 * k, v.clone());
        }
        for (s, theta) in self.theta.iter().enumerate() {
            let g = self.ctx.g(u, theta)?;
            let minus_g = -g.clone();
            let mut next = cur.clone();
            for (k, v) in cur.iter() {
                let (swapped, sign) = graded_swap(*k, 0, s + 1);
                next.add_at(swapped, v.clone() * if sign > 0 { &g } else { &minus_g });
            }
            cur = next;
        }
        let mut scale = self.twist[i - 1].clone();
        if (parity(i) + parity(j)) % 2 == 1 && parity(j) == 1 {
            scale = -scale;
        }
        let mut out = StateVector::zero(sites);
        for (k, v) in cur.iter() {
            if k % 3 == i as u64 - 1 {
                out.add_at(k / 3, v.clone() * &scale);
            }
        }
        Ok(out)
    }

    /// `T_ij(u_1) ··· T_ij(u_n) ψ` (rightmost factor applied first).
    pub fn apply_product(&self, i: usize, j: usize, us: &[F], psi: &StateVector<F>) -> Result<StateVector<F>> {
        let mut cur = psi.clone();
        for u in us.iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.apply(i, j, u, &cur)?;
        }
        Ok(cur)
    }

    /// Normalisation of the symmetric product:
    /// `prod_{l>m} h(v_l, v_m)` for `T_{j3}`, `prod_{l>m} h(v_m, v_l)` for `T_{3j}`.
    pub fn sym_normalisation(&self, op: SymOp, v: &[F]) -> Result<F> {
        let mut acc = F::one();
        for l in 0..v.len() {
            for m in 0..l {
                acc *= &match op {
                    SymOp::T13 | SymOp::T23 => self.ctx.h(&v[l], &v[m])?,
                    SymOp::T31 | SymOp::T32 => self.ctx.h(&v[m], &v[l])?,
                };
            }
        }
        Ok(acc)
    }

    /// Symmetric product `𝕋_op(v̄) ψ`.
    pub fn apply_sym(&self, op: SymOp, v: &VarSet<F>, psi: &StateVector<F>) -> Result<StateVector<F>> {
        let (i, j) = op.indices();
        let norm = self.sym_normalisation(op, v.values())?;
        let inv = norm.inv().ok_or_else(|| Error::pole("h-normalisation", "v", "v"))?;
        Ok(self.apply_product(i, j, v.values(), psi)?.scaled(&inv))
    }

    /// Supertrace `T_11 + T_22 - T_33` applied to `ψ`.
    pub fn apply_transfer(&self, u: &F, psi: &StateVector<F>) -> Result<StateVector<F>> {
        let mut out = self.apply(1, 1, u, psi)?;
        out.axpy(&F::one(), &self.apply(2, 2, u, psi)?);
        out.axpy(&-F::one(), &self.apply(3, 3, u, psi)?);
        Ok(out)
    }

    /// `λ_i(u)`, read off from `T_ii(u) Ω`.
    pub fn lambda(&self, i: usize, u: &F) -> Result<F> {
        let omega = self.vacuum();
        let image = self.apply(i, i, u, &omega)?;
        let (vac_key, _) = omega.iter().next().map(|(k, v)| (*k, v.clone())).expect("vacuum is nonzero");
        if image.iter().any(|(k, _)| *k != vac_key) {
            return Err(Error::NotAnEigenvector { i });
        }
        Ok(image.get(vac_key))
    }

    /// `r_1 = λ_1/λ_2` (`k = 1`) or `r_3 = λ_3/λ_2` (`k = 3`).
    pub fn ratio(&self, k: usize, u: &F) -> Result<F> {
        assert!(k == 1 || k == 3, "only r_1 and r_3 are defined");
        let l2 = self.lambda(2, u)?;
        self.lambda(k, u)?.checked_div(&l2).ok_or_else(|| Error::ZeroWeight(u.to_string()))
    }

    /// Images of all basis vectors under `T_ij(u)`.
    pub fn block_columns(&self, i: usize, j: usize, u: &F) -> Result<Vec<StateVector<F>>> {
        (0..self.dim() as u64).map(|k| self.apply(i, j, u, &StateVector::basis(self.sites(), k))).collect()
    }

    /// Dense `T_ij(u)`.
    pub fn block(&self, i: usize, j: usize, u: &F) -> Result<GradedOperator<F>> {
        Ok(GradedOperator::from_columns(&self.block_columns(i, j, u)?, op_parity(i, j)))
    }

    /// All nine dense blocks, `out[i-1][j-1] = T_ij(u)`.
    pub fn build_monodromy(&self, u: &F) -> Result<Vec<Vec<GradedOperator<F>>>> {
        (1..=3).map(|i| (1..=3).map(|j| self.block(i, j, u)).collect()).collect()
    }

    /// Dense transfer matrix `str T(u)`.
    pub fn transfer_matrix(&self, u: &F) -> Result<GradedOperator<F>> {
        let cols: Vec<_> = (0..self.dim() as u64)
            .map(|k| self.apply_transfer(u, &StateVector::basis(self.sites(), k)))
            .collect::<Result<_>>()?;
        Ok(GradedOperator::from_columns(&cols, 0))
    }

    /// Dense symmetric product `𝕋_op(v̄)`; the identity for empty `v̄`.
    pub fn sym_product(&self, op: SymOp, v: &VarSet<F>) -> Result<GradedOperator<F>> {
        let cols: Vec<_> = (0..self.dim() as u64)
            .map(|k| self.apply_sym(op, v, &StateVector::basis(self.sites(), k)))
            .collect::<Result<_>>()?;
        let (i, j) = op.indices();
        Ok(GradedOperator::from_columns(&cols, (op_parity(i, j) * (v.len() as u8 % 2)) % 2))
    }
}

/// Sparse operator stored by columns, for composing monodromy entries cheaply.
struct Columns<F>(Vec<StateVector<F>>);

impl<F: Field> Columns<F> {
    fn apply(&self, x: &StateVector<F>) -> StateVector<F> {
        let mut out = StateVector::zero(x.sites());
        for (k, v) in x.iter() {
            out.axpy(v, &self.0[*k as usize]);
        }
        out
    }
}

fn sign<F: Field>(exponent: u8) -> F {
    if exponent.is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

/// Largest entry of the defect in the graded commutation relations
///
/// ```text
/// [T_ij(u), T_kl(v)} = (-1)^{[i]([k]+[l]) + [k][l]} g(u,v) (T_kj(v) T_il(u) - T_kj(u) T_il(v))
/// ```
///
/// over all 81 index quadruples.
pub fn rtt_residual<F: Field>(chain: &ChainRep<F>, u: &F, v: &F) -> Result<F> {
    let g = chain.ctx().g(u, v)?;
    let mut at_u = Vec::with_capacity(9);
    let mut at_v = Vec::with_capacity(9);
    for i in 1..=3 {
        for j in 1..=3 {
            at_u.push(Columns(chain.block_columns(i, j, u)?));
            at_v.push(Columns(chain.block_columns(i, j, v)?));
        }
    }
    let idx = |i: usize, j: usize| (i - 1) * 3 + (j - 1);
    let mut worst = F::zero();
    for i in 1..=3 {
        for j in 1..=3 {
            for k in 1..=3 {
                for l in 1..=3 {
                    let swap_sign: F = sign(op_parity(i, j) * op_parity(k, l));
                    let rhs_sign: F = sign(parity(i) * (parity(k) + parity(l)) + parity(k) * parity(l));
                    for e in 0..chain.dim() {
                        let lhs = at_u[idx(i, j)]
                            .apply(&at_v[idx(k, l)].0[e])
                            .sub(&at_v[idx(k, l)].apply(&at_u[idx(i, j)].0[e]).scaled(&swap_sign));
                        let rhs = at_v[idx(k, j)]
                            .apply(&at_u[idx(i, l)].0[e])
                            .sub(&at_u[idx(k, j)].apply(&at_v[idx(i, l)].0[e]))
                            .scaled(&(rhs_sign.clone() * &g));
                        let d = lhs.sub(&rhs).max_size();
                        if d.canonical_cmp(&worst).is_gt() {
                            worst = d;
                        }
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// `max |[𝒯(u), 𝒯(v)]|` over all matrix entries.
pub fn transfer_commutator<F: Field>(chain: &ChainRep<F>, u: &F, v: &F) -> Result<F> {
    let tu = chain.transfer_matrix(u)?;
    let tv = chain.transfer_matrix(v)?;
    Ok(tu.mul(&tv).sub(&tv.mul(&tu)).max_size())
}

/// `max |T_ij(u) Ω|` over the three lower-triangular entries.
pub fn vacuum_triangularity<F: Field>(chain: &ChainRep<F>, u: &F) -> Result<F> {
    let omega = chain.vacuum();
    let images = [(2, 1), (3, 1), (3, 2)]
        .into_iter()
        .map(|(i, j)| chain.apply(i, j, u, &omega).map(|v| v.max_size()))
        .collect::<Result<Vec<F>>>()?;
    Ok(max_size(images.iter()))
}

/// Shorthand used by weight providers: `prod_k f(u, θ_k)`.
pub fn vacuum_f_product<F: Field>(chain: &ChainRep<F>, u: &F) -> Result<F> {
    chain.ctx().prod_right(Aux::F, u, chain.theta())
}
