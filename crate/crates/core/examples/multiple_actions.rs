//! Closed formulas for the action of symmetrised products `T_ij(z̄)` on Bethe
//! vectors, checked against direct application on a chain.
//!
//!     cargo run --example multiple_actions [OP] [a] [b]     e.g. T21.n2 2 1

use superbethe::action::{act, verify_action, ActionInput, OperatorId};
use superbethe::bethe::BetheLabel;
use superbethe::chain::ChainRep;
use superbethe::kernel::{sample_generic, EvalContext, Field, Qi, VarSet};

fn main() -> superbethe::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let op: OperatorId = args.first().map_or("T13.n1", String::as_str).parse()?;
    let a = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let b = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);

    let ctx = EvalContext::<Qi>::unit();
    let theta = sample_generic(a.max(b) + op.n, &ctx, 5, &VarSet::empty())?;
    let chain = ChainRep::new(theta, [Qi::from_i64(2), Qi::ratio(-1, 3), Qi::from_i64(5)], ctx.clone())?;
    let p = sample_generic(a + b + op.n, &ctx, 6, chain.theta())?;
    let v = p.values();
    let label = BetheLabel::new(VarSet::new(v[..a].to_vec()), VarSet::new(v[a..a + b].to_vec()))?;
    let inp = ActionInput::new(op, VarSet::new(v[a + b..].to_vec()), label, &chain, &ctx)?;

    let combo = act(&inp)?;
    let merged = combo.clone().normalized();
    println!("{op} acting on B_({a},{b}): {} raw terms, {} after merging", combo.len(), merged.len());
    for t in merged.iter().take(6) {
        println!("  {}  {}", t.coeff, t.label);
    }
    if merged.len() > 6 {
        println!("  ...");
    }
    println!("residual against the chain: {}", verify_action(&chain, &inp)?);
    Ok(())
}
