//! Bethe vectors built three ways (two explicit sums and the recursion),
//! plus the reduction when a parameter is shared between the two sets.
//!
//!     cargo run --example bethe_vectors

use superbethe::bethe::{bethe_recursive, bethe_sum_a, bethe_sum_b, BetheLabel};
use superbethe::chain::ChainRep;
use superbethe::kernel::{sample_generic, EvalContext, Field, Qi, VarSet};

fn main() -> superbethe::Result<()> {
    let ctx = EvalContext::<Qi>::unit();
    let theta = sample_generic(4, &ctx, 1, &VarSet::empty())?;
    let chain = ChainRep::new(theta, [Qi::from_i64(1), Qi::from_i64(1), Qi::from_i64(2)], ctx.clone())?;

    for (a, b) in [(1, 0), (1, 1), (2, 1), (2, 2)] {
        let p = sample_generic(a + b, &ctx, 10 * a as u64 + b as u64, chain.theta())?;
        let label = BetheLabel::new(VarSet::new(p.values()[..a].to_vec()), VarSet::new(p.values()[a..].to_vec()))?;
        let v = bethe_sum_a(&chain, &label)?;
        let same = v == bethe_sum_b(&chain, &label)? && v == bethe_recursive(&chain, &label)?;
        println!("{label}: {} nonzero components, three constructions agree: {same}", v.nnz());
    }

    // {z, u} and {z}: the shared z is removed by the reduction rule
    let p = sample_generic(2, &ctx, 99, chain.theta())?;
    let (z, u) = (p.get(0).clone(), p.get(1).clone());
    let shared = BetheLabel::new(VarSet::new(vec![z.clone(), u]), VarSet::single(z))?;
    let v = bethe_sum_a(&chain, &shared)?;
    println!("{shared}: norm {:.6e}, recursion agrees: {}", v.norm(), v == bethe_recursive(&chain, &shared)?);
    Ok(())
}
