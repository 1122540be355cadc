//! The graded R-matrix, the Yang-Baxter equation, the RTT relation on a
//! small twisted chain and commutativity of transfer matrices.
//!
//!     cargo run --example yang_baxter

use superbethe::chain::{build_r, rtt_residual, transfer_commutator, ybe_residual, ChainRep};
use superbethe::kernel::{sample_generic, EvalContext, Field, Qi, VarSet};

fn main() -> superbethe::Result<()> {
    let ctx = EvalContext::<Qi>::unit();
    let p = sample_generic(3, &ctx, 7, &VarSet::empty())?;
    let (x, y, z) = (p.get(0), p.get(1), p.get(2));

    println!("R({x}, {y}) on C^(2|1) x C^(2|1):");
    for row in build_r(x, y, &ctx)?.to_rows() {
        println!("  {}", row.iter().map(|v| format!("{:>14}", v.to_string())).collect::<String>());
    }
    println!("YBE residual: {}", ybe_residual(x, y, z, &ctx)?);

    let theta = sample_generic(2, &ctx, 8, &p)?;
    let chain = ChainRep::new(theta, [Qi::from_i64(2), Qi::ratio(-1, 3), Qi::from_i64(5)], ctx)?;
    println!("RTT residual on L=2:           {}", rtt_residual(&chain, x, y)?);
    println!("[T(x), T(y)] residual on L=2:  {}", transfer_commutator(&chain, x, y)?);
    Ok(())
}
