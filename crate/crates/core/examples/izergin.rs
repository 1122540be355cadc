//! Izergin determinants: the pole-free determinant against the explicit
//! partition sum, and the shift identity, in exact arithmetic.
//!
//!     cargo run --example izergin

use superbethe::izergin::{check_shift_identity, izergin, izergin_direct};
use superbethe::kernel::{sample_generic, EvalContext, Qi, VarSet};

fn main() -> superbethe::Result<()> {
    let ctx = EvalContext::new(Qi::ratio(2, 3))?;
    for n in 0..=4 {
        let p = sample_generic(2 * n, &ctx, 42 + n as u64, &VarSet::empty())?;
        let x = VarSet::new(p.values()[..n].to_vec());
        let y = VarSet::new(p.values()[n..].to_vec());
        let k = izergin(&x, &y, &ctx)?;
        let direct = izergin_direct(&x, &y, &ctx)?;
        let shift = check_shift_identity(&x, &y, &ctx)?;
        println!("n={n}  K = {k}");
        println!("      determinant == partition sum: {}  shift residual: {shift}", k == direct);
    }
    Ok(())
}
