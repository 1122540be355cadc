use proptest::prelude::*;
use superbethe::action::{act, ActionInput, OperatorId};
use superbethe::bethe::{bethe_sum_a, expand_combo, BetheLabel};
use superbethe::chain::{rtt_residual, vacuum_triangularity, ChainRep};
use superbethe::izergin::{izergin, izergin_direct};
use num_bigint::BigInt;
use num_rational::BigRational;
use superbethe::kernel::{sample_generic, EvalContext, Field, Qi, VarSet};

fn chain(sites: usize, seed: u64) -> ChainRep<Qi> {
    let ctx = EvalContext::<Qi>::unit();
    let theta = sample_generic(sites, &ctx, seed, &VarSet::empty()).unwrap();
    ChainRep::new(theta, [Qi::from_i64(2), Qi::ratio(-1, 3), Qi::from_i64(5)], ctx).unwrap()
}

fn label(v: &[Qi], a: usize) -> BetheLabel<Qi> {
    BetheLabel::new(VarSet::new(v[..a].to_vec()), VarSet::new(v[a..].to_vec())).unwrap()
}

fn rotate(v: &[Qi], by: usize) -> Vec<Qi> {
    let mut w = v.to_vec();
    if !w.is_empty() {
        let n = w.len();
        w.rotate_left(by % n);
    }
    w
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn izergin_symmetric_and_matches_direct(seed in any::<u64>(), n in 0usize..=4, k in 0usize..4) {
        let ctx = EvalContext::<Qi>::unit();
        let p = sample_generic(2 * n, &ctx, seed, &VarSet::empty()).unwrap();
        let (x, y) = (&p.values()[..n], &p.values()[n..]);
        let base = izergin(&VarSet::new(x.to_vec()), &VarSet::new(y.to_vec()), &ctx).unwrap();
        prop_assert_eq!(&base, &izergin(&VarSet::new(rotate(x, k)), &VarSet::new(y.to_vec()), &ctx).unwrap());
        prop_assert_eq!(&base, &izergin(&VarSet::new(x.to_vec()), &VarSet::new(rotate(y, k)), &ctx).unwrap());
        prop_assert_eq!(&base, &izergin_direct(&VarSet::new(x.to_vec()), &VarSet::new(y.to_vec()), &ctx).unwrap());
    }

    #[test]
    fn bethe_vector_symmetric(seed in any::<u64>(), a in 0usize..=2, b in 0usize..=2, k in 1usize..3) {
        let ch = chain(4, seed ^ 0x5a5a);
        let p = sample_generic(a + b, ch.ctx(), seed, ch.theta()).unwrap();
        let v = p.values();
        let swapped: Vec<Qi> = rotate(&v[..a], k).into_iter().chain(rotate(&v[a..], k)).collect();
        prop_assert_eq!(bethe_sum_a(&ch, &label(v, a)).unwrap(), bethe_sum_a(&ch, &label(&swapped, a)).unwrap());
    }

    #[test]
    fn action_independent_of_z_order(seed in any::<u64>(), op in 0usize..9, a in 0usize..=1, b in 0usize..=1) {
        let ch = chain(4, seed ^ 0x77);
        let id = OperatorId::all(2)[op];
        let p = sample_generic(a + b + 2, ch.ctx(), seed, ch.theta()).unwrap();
        let v = p.values();
        let lab = label(&v[..a + b], a);
        let z = VarSet::new(v[a + b..].to_vec());
        let zr = VarSet::new(rotate(z.values(), 1));
        let one = act(&ActionInput::new(id, z, lab.clone(), &ch, ch.ctx()).unwrap()).unwrap();
        let two = act(&ActionInput::new(id, zr, lab, &ch, ch.ctx()).unwrap()).unwrap();
        prop_assert_eq!(expand_combo(&ch, &one).unwrap(), expand_combo(&ch, &two).unwrap());
        prop_assert!(one.equivalent(&two));
    }

    #[test]
    fn monodromy_relations(seed in any::<u64>(), sites in 1usize..=2) {
        let ch = chain(sites, seed);
        let uv = sample_generic(2, ch.ctx(), seed ^ 1, ch.theta()).unwrap();
        prop_assert!(rtt_residual(&ch, uv.get(0), uv.get(1)).unwrap().is_zero());
        prop_assert!(vacuum_triangularity(&ch, uv.get(0)).unwrap().is_zero());
    }
}

/// A shared parameter `u = v = z` gives the limit of the generic vector as `v -> z`.
#[test]
fn coinciding_parameters_are_the_limit() {
    let ch = chain(3, 11);
    let p = sample_generic(2, ch.ctx(), 12, ch.theta()).unwrap();
    let (z, u) = (p.get(0).clone(), p.get(1).clone());
    let reduced = bethe_sum_a(&ch, &label(&[z.clone(), u.clone(), z.clone()], 2)).unwrap();
    let eps = Qi::real(BigRational::new(1.into(), BigInt::from(10).pow(30)));
    let near = bethe_sum_a(&ch, &label(&[z.clone(), u, z + &eps], 2)).unwrap();
    assert!(!reduced.is_zero());
    let gap = near.sub(&reduced).max_size().modulus();
    assert!(gap < 1e-20, "gap {gap:e}");
}

#[test]
fn shared_parameter_label_rejects_duplicates() {
    let z = Qi::from_i64(3);
    assert!(BetheLabel::new(VarSet::new(vec![z.clone(), z.clone()]), VarSet::empty()).is_err());
}
