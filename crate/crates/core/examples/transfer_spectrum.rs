//! Dense transfer-matrix spectrum next to the eigenvalues predicted by Bethe
//! roots, including the exactly solvable one-magnon sector.
//!
//!     cargo run --example transfer_spectrum

use num_complex::Complex64;
use superbethe::chain::ChainRep;
use superbethe::kernel::{EvalContext, VarSet};
use superbethe::onshell::{solve_bethe_newton, tau_eval, transfer_spectrum};

fn main() -> superbethe::Result<()> {
    let ctx = EvalContext::<Complex64>::unit();
    let theta = VarSet::new(vec![Complex64::new(0.3, 0.0), Complex64::new(-1.1, 0.0)]);
    let twist = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
    let chain = ChainRep::new(theta, twist, ctx.clone())?;
    let z = Complex64::new(0.37, 0.21);

    let mut spectrum = transfer_spectrum(&chain, &z)?;
    spectrum.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    println!("spectrum of T(z) at z = {z}:");
    for l in &spectrum {
        println!("  {l:.8}");
    }

    for (a, b) in [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1)] {
        let seeds: Vec<u64> = (0..8).collect();
        for root in solve_bethe_newton(&chain, a, b, &seeds, 1e-10, 100).roots {
            let tau = tau_eval(&z, &root.system(&chain, &ctx))?;
            let gap = spectrum.iter().map(|l| (l - tau).norm()).fold(f64::INFINITY, f64::min);
            println!("({a},{b}) root gives τ = {tau:.8}, distance to spectrum {gap:.1e}");
        }
    }
    Ok(())
}
