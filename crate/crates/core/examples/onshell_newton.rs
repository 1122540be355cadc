//! Solving the Bethe equations numerically and checking that the resulting
//! vector is an eigenvector of the transfer matrix with eigenvalue `τ(z)`.
//!
//!     cargo run --example onshell_newton

use num_complex::Complex64;
use superbethe::chain::ChainRep;
use superbethe::kernel::{sample_generic, EvalContext, VarSet};
use superbethe::onshell::{eigencheck, solve_bethe_newton, tau_eval};

fn show(xs: &VarSet<Complex64>) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

fn main() -> superbethe::Result<()> {
    let ctx = EvalContext::<Complex64>::unit();
    let theta = VarSet::new(vec![Complex64::new(0.3, 0.0), Complex64::new(-1.1, 0.0), Complex64::new(0.7, 0.0)]);
    let twist = [Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.0), Complex64::new(2.0, 0.0)];
    let chain = ChainRep::new(theta, twist, ctx.clone())?;

    for (a, b) in [(1, 0), (1, 1), (2, 1)] {
        let out = solve_bethe_newton(&chain, a, b, &(0..12).collect::<Vec<_>>(), 1e-10, 100);
        println!("sector (a,b)=({a},{b}): {} distinct roots, {} seeds failed", out.roots.len(), out.failures.len());
        for root in &out.roots {
            let sys = root.system(&chain, &ctx);
            let forbidden = chain.theta().concat(&sys.ubar).concat(&sys.vbar);
            let probes = sample_generic(3, &ctx, 1, &forbidden)?;
            let dev = eigencheck(&chain, &sys, &probes)?;
            let z = probes.get(0);
            println!(
                "  u={} v={}  residual {:.1e}  eigen deviation {:.1e}  τ({z:.3}) = {:.6}",
                show(&sys.ubar),
                show(&sys.vbar),
                root.residual,
                dev.re,
                tau_eval(z, &sys)?
            );
        }
    }
    Ok(())
}
