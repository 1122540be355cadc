//! Check catalogue and execution.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Suite, SuiteConfig};
use super::report::{CheckRecord, Report};
use crate::action::{action_sides, ActionInput, OperatorId};
use crate::bethe::{bethe_recursive, bethe_sum_a, bethe_sum_b, BetheLabel};
use crate::chain::{rtt_residual, transfer_commutator, vacuum_triangularity, ybe_residual, ChainRep, StateVector};
use crate::error::{Error, Result};
use crate::izergin::{check_ci_identity, check_ml_identity, check_shift_identity, izergin, izergin_direct, lemma_a1, lemma_a2};
use crate::kernel::{index_partitions, multinomial, sample_generic_with, EvalContext, Field, Mode, Qi, VarSet};
use crate::onshell::{
    bethe_residuals, decompose_transfer_action, eigencheck, solve_bethe_newton, tau_eval, tau_residue_at_u, tau_residue_at_v,
    three_term_identity, transfer_sides, transfer_spectrum, BetheSystem, OnShellWeights,
};

/// Relative tolerance for checks run in numeric mode.
pub const NUMERIC_TOL: f64 = 1e-9;
const NEWTON_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-8;
const NEWTON_SEEDS: u64 = 8;
const PROBES: usize = 5;

#[derive(Debug, Clone)]
enum Kind {
    DefsG,
    DefsF,
    DefsH,
    DefsT,
    DefsReciprocal,
    DefsPartitions,
    IzerginK1,
    IzerginShift(usize),
    IzerginDirect(usize),
    LemmaA1(usize, usize),
    LemmaA2(usize, usize),
    Ci(usize),
    Ml(usize),
    Ybe,
    Rtt(usize),
    Commute(usize),
    Vacuum,
    BetheEqual(usize, usize),
    Action(OperatorId, usize, usize),
    ThreeTerm,
    Unwanted(usize, usize),
    Residues(usize, usize),
    Decomposition(usize, usize),
    Numeric(usize, usize),
}

#[derive(Debug, Clone)]
struct Job {
    suite: Suite,
    id: String,
    draw: usize,
    kind: Kind,
}

fn catalogue(cfg: &SuiteConfig) -> Vec<(Suite, String, Kind)> {
    let mut out: Vec<(Suite, String, Kind)> = Vec::new();
    let cells: Vec<(usize, usize)> = (0..=cfg.max_a).flat_map(|a| (0..=cfg.max_b).map(move |b| (a, b))).collect();
    for &suite in &cfg.suites {
        let mut add = |id: String, kind: Kind| out.push((suite, id, kind));
        match suite {
            Suite::Defs => {
                add("defs.g-antisymmetry".into(), Kind::DefsG);
                add("defs.f-from-g".into(), Kind::DefsF);
                add("defs.h-from-f-g".into(), Kind::DefsH);
                add("defs.t-from-g-h".into(), Kind::DefsT);
                add("defs.reciprocals".into(), Kind::DefsReciprocal);
                add("defs.partition-count".into(), Kind::DefsPartitions);
            }
            Suite::Izergin => {
                add("izergin.k1-shift".into(), Kind::IzerginK1);
                for n in 1..=4 {
                    add(format!("izergin.shift.n{n}"), Kind::IzerginShift(n));
                    add(format!("izergin.direct.n{n}"), Kind::IzerginDirect(n));
                }
            }
            Suite::Appendix => {
                for m1 in 0..=5 {
                    for m2 in 0..=5 - m1 {
                        if m1 + m2 > 0 {
                            add(format!("appendix.a1.m{m1}{m2}"), Kind::LemmaA1(m1, m2));
                            add(format!("appendix.a2.m{m1}{m2}"), Kind::LemmaA2(m1, m2));
                        }
                    }
                }
                for n in 1..=4 {
                    add(format!("appendix.ci.n{n}"), Kind::Ci(n));
                    add(format!("appendix.ml.n{n}"), Kind::Ml(n));
                }
            }
            Suite::Chain => {
                add("chain.ybe".into(), Kind::Ybe);
                for l in 1..=cfg.sites.min(3) {
                    add(format!("chain.rtt.L{l}"), Kind::Rtt(l));
                }
                for l in 1..=cfg.sites.min(4) {
                    add(format!("chain.commute.L{l}"), Kind::Commute(l));
                }
                add("chain.vacuum".into(), Kind::Vacuum);
            }
            Suite::BetheEqual => {
                for &(a, b) in &cells {
                    add(format!("bethe.equal.a{a}b{b}"), Kind::BetheEqual(a, b));
                }
            }
            Suite::Actions => {
                for n in 1..=cfg.max_n {
                    for op in OperatorId::all(n) {
                        for &(a, b) in &cells {
                            add(format!("action.{op}.a{a}b{b}"), Kind::Action(op, a, b));
                        }
                    }
                }
            }
            Suite::OnshellExact => {
                add("onshell.three-term".into(), Kind::ThreeTerm);
                for &(a, b) in &cells {
                    add(format!("onshell.unwanted.a{a}b{b}"), Kind::Unwanted(a, b));
                    add(format!("onshell.decomposition.a{a}b{b}"), Kind::Decomposition(a, b));
                    if a + b > 0 {
                        add(format!("onshell.residues.a{a}b{b}"), Kind::Residues(a, b));
                    }
                }
            }
            Suite::OnshellNumeric => {
                let solvable_b = cfg.twist[1] != cfg.twist[2];
                for (a, b) in [(1, 0), (1, 1)] {
                    if a <= cfg.max_a && b <= cfg.max_b && (b == 0 || solvable_b) {
                        add(format!("onshell-numeric.a{a}b{b}"), Kind::Numeric(a, b));
                    }
                }
            }
        }
    }
    out
}

fn jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let mut out = Vec::new();
    for (suite, id, kind) in catalogue(cfg) {
        for draw in 0..cfg.draws {
            out.push(Job { suite, id: id.clone(), draw, kind: kind.clone() });
        }
    }
    out
}

/// FNV-1a, used to derive per-check seeds that do not depend on scheduling.
fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn job_seed(cfg_seed: u64, id: &str, draw: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg_seed ^ fnv1a(id));
    let mut s = rng.random::<u64>();
    for _ in 0..draw {
        s = rng.random();
    }
    s
}

/// Executes every selected check over `draws` random instances.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let mut records = match cfg.mode {
        Mode::Exact => execute::<Qi>(cfg),
        Mode::Numeric => execute::<Complex64>(cfg),
    };
    if cfg.inject_failure {
        records.push(CheckRecord {
            suite: "harness".into(),
            id: "harness.injected".into(),
            params: "deliberate failure".into(),
            pass: false,
            residual: "1".into(),
            ms: 0.0,
            draw: 0,
        });
    }
    Ok(Report::new(cfg.to_json(), records))
}

fn execute<F: Field>(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    jobs(cfg)
        .par_iter()
        .flat_map_iter(|job| {
            let seed = job_seed(cfg.seed, &job.id, job.draw);
            let start = Instant::now();
            let outcomes = match &job.kind {
                Kind::Numeric(a, b) => numeric_onshell(cfg, *a, *b, seed),
                kind => vec![(job.id.clone(), run_exact_kind::<F>(cfg, kind, seed))],
            };
            let ms = if cfg.timing { (start.elapsed().as_secs_f64() * 1e6).round() / 1e3 } else { 0.0 };
            outcomes.into_iter().map(move |(id, outcome)| {
                let (pass, residual, params) = match outcome {
                    Ok(o) => (o.pass, o.residual, o.params),
                    Err(e) => (false, format!("error: {e}"), String::new()),
                };
                let params = if params.is_empty() { format!("draw={} seed={seed}", job.draw) } else { format!("draw={} seed={seed} {params}", job.draw) };
                CheckRecord { suite: job.suite.name().into(), id, params, pass, residual, ms, draw: job.draw }
            })
        })
        .collect()
}

struct Outcome {
    pass: bool,
    residual: String,
    params: String,
}

/// Exact: pass iff the residual is zero. Numeric: residual relative to `max(1, scale)`.
fn judge<F: Field>(residual: F, scale: f64, params: String) -> Outcome {
    match F::MODE {
        Mode::Exact => Outcome { pass: residual.is_zero(), residual: residual.to_string(), params },
        Mode::Numeric => {
            let r = residual.modulus() / scale.max(1.0);
            Outcome { pass: r <= NUMERIC_TOL, residual: format!("{r:.3e}"), params }
        }
    }
}

fn judge_float(r: f64, tol: f64, params: String) -> Outcome {
    Outcome { pass: r.is_finite() && r <= tol, residual: format!("{r:.3e}"), params }
}

fn lift<F: Field>(q: &Qi) -> F {
    F::from_complex_ratio(&q.re, &q.im)
}

fn larger<F: Field>(x: F, y: F) -> F {
    if x.canonical_cmp(&y).is_ge() {
        x
    } else {
        y
    }
}

fn vec_scale<F: Field>(v: &StateVector<F>) -> f64 {
    v.max_size().modulus()
}

struct Instance<F: Field> {
    ctx: EvalContext<F>,
    rng: ChaCha8Rng,
}

impl<F: Field> Instance<F> {
    fn new(cfg: &SuiteConfig, seed: u64) -> Result<Self> {
        Ok(Instance { ctx: EvalContext::new(lift(&cfg.c))?, rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    fn draw(&mut self, count: usize, forbidden: &VarSet<F>) -> Result<VarSet<F>> {
        sample_generic_with(count, &self.ctx, &mut self.rng, forbidden)
    }

    fn chain(&mut self, cfg: &SuiteConfig, sites: usize) -> Result<ChainRep<F>> {
        let theta = self.draw(sites, &VarSet::empty())?;
        ChainRep::new(theta, [lift(&cfg.twist[0]), lift(&cfg.twist[1]), lift(&cfg.twist[2])], self.ctx.clone())
    }
}

fn split<F: Field>(p: &VarSet<F>, sizes: &[usize]) -> Vec<VarSet<F>> {
    let mut at = 0;
    sizes
        .iter()
        .map(|&k| {
            let s = VarSet::new(p.values()[at..at + k].to_vec());
            at += k;
            s
        })
        .collect()
}

fn run_exact_kind<F: Field>(cfg: &SuiteConfig, kind: &Kind, seed: u64) -> Result<Outcome> {
    let mut inst = Instance::<F>::new(cfg, seed)?;
    let none = VarSet::empty();
    match *kind {
        Kind::DefsG | Kind::DefsF | Kind::DefsH | Kind::DefsT | Kind::DefsReciprocal => {
            let p = inst.draw(2, &none)?;
            let (x, y, ctx) = (p.get(0), p.get(1), &inst.ctx);
            let r = match kind {
                Kind::DefsG => ctx.g(x, y)? + ctx.g(y, x)?,
                Kind::DefsF => ctx.f(x, y)? - F::one() - ctx.g(x, y)?,
                Kind::DefsH => ctx.h(x, y)? * ctx.g(x, y)? - ctx.f(x, y)?,
                Kind::DefsT => ctx.t(x, y)? * ctx.h(x, y)? - ctx.g(x, y)?,
                _ => (ctx.f(x, y)? * ctx.f_inv(x, y)? - F::one()).size() + (ctx.h(x, y)? * ctx.h_inv(x, y)? - F::one()).size(),
            };
            Ok(judge(r, 1.0, String::new()))
        }
        Kind::DefsPartitions => {
            let n = inst.rng.random_range(1..=6usize);
            let k = inst.rng.random_range(0..=n);
            let plans = index_partitions(n, &[k, n - k])?;
            let mut seen = plans.clone();
            seen.sort();
            seen.dedup();
            let r = (plans.len() as i64 - multinomial(&[k, n - k]) as i64).abs() + (plans.len() - seen.len()) as i64;
            Ok(judge(F::from_i64(r), 1.0, format!("n={n} k={k}")))
        }
        Kind::IzerginK1 => {
            let z = inst.draw(1, &none)?;
            let r = izergin(&z, &z.shifted(inst.ctx.c()), &inst.ctx)? + F::one();
            Ok(judge(r, 1.0, String::new()))
        }
        Kind::IzerginShift(n) | Kind::IzerginDirect(n) => {
            let p = inst.draw(2 * n, &none)?;
            let s = split(&p, &[n, n]);
            let (r, scale) = if matches!(kind, Kind::IzerginShift(_)) {
                (check_shift_identity(&s[0], &s[1], &inst.ctx)?, izergin(&s[0], &s[1].shifted(inst.ctx.c()), &inst.ctx)?.modulus())
            } else {
                let k = izergin(&s[0], &s[1], &inst.ctx)?;
                (k.clone() - izergin_direct(&s[0], &s[1], &inst.ctx)?, k.modulus())
            };
            Ok(judge(r, scale, format!("n={n}")))
        }
        Kind::LemmaA1(m1, m2) | Kind::LemmaA2(m1, m2) => {
            let p = inst.draw(2 * (m1 + m2), &none)?;
            let s = split(&p, &[m1 + m2, m1, m2]);
            let (l, r) = if matches!(kind, Kind::LemmaA1(..)) {
                lemma_a1(&s[0], &s[1], &s[2], &inst.ctx)?
            } else {
                lemma_a2(&s[0], &s[1], &s[2], &inst.ctx)?
            };
            let scale = r.modulus();
            Ok(judge(l - r, scale, format!("m1={m1} m2={m2}")))
        }
        Kind::Ci(n) => {
            let p = inst.draw(2 * n, &none)?;
            let s = split(&p, &[n, 1, n - 1]);
            Ok(judge(check_ci_identity(&s[0], s[1].get(0), &s[2], &inst.ctx)?, 1.0, format!("n={n}")))
        }
        Kind::Ml(n) => {
            let p = inst.draw(2 * n, &none)?;
            let s = split(&p, &[n, n]);
            Ok(judge(check_ml_identity(&s[0], &s[1], &inst.ctx)?, 1.0, format!("n={n}")))
        }
        Kind::Ybe => {
            let p = inst.draw(3, &none)?;
            Ok(judge(ybe_residual(p.get(0), p.get(1), p.get(2), &inst.ctx)?, 1.0, String::new()))
        }
        Kind::Rtt(l) | Kind::Commute(l) => {
            let chain = inst.chain(cfg, l)?;
            let p = inst.draw(2, chain.theta())?;
            let r = if matches!(kind, Kind::Rtt(_)) { rtt_residual(&chain, p.get(0), p.get(1))? } else { transfer_commutator(&chain, p.get(0), p.get(1))? };
            Ok(judge(r, 1.0, format!("L={l}")))
        }
        Kind::Vacuum => {
            let chain = inst.chain(cfg, cfg.sites)?;
            let p = inst.draw(1, chain.theta())?;
            Ok(judge(vacuum_triangularity(&chain, p.get(0))?, 1.0, format!("L={}", cfg.sites)))
        }
        Kind::BetheEqual(a, b) => {
            let chain = inst.chain(cfg, cfg.sites)?;
            let p = inst.draw(a + b, chain.theta())?;
            let s = split(&p, &[a, b]);
            let label = BetheLabel::new(s[0].clone(), s[1].clone())?;
            let x = bethe_sum_a(&chain, &label)?;
            let r = larger(x.sub(&bethe_sum_b(&chain, &label)?).max_size(), x.sub(&bethe_recursive(&chain, &label)?).max_size());
            Ok(judge(r, vec_scale(&x), format!("L={} a={a} b={b}", cfg.sites)))
        }
        Kind::Action(op, a, b) => {
            let chain = inst.chain(cfg, cfg.sites)?;
            let p = inst.draw(a + b + op.n, chain.theta())?;
            let s = split(&p, &[a, b, op.n]);
            let label = BetheLabel::new(s[0].clone(), s[1].clone())?;
            let inp = ActionInput::new(op, s[2].clone(), label, &chain, chain.ctx())?;
            let (lhs, rhs) = action_sides(&chain, &inp)?;
            Ok(judge(lhs.sub(&rhs).max_size(), vec_scale(&lhs), format!("L={} a={a} b={b} n={}", cfg.sites, op.n)))
        }
        Kind::ThreeTerm => {
            let p = inst.draw(3, &none)?;
            Ok(judge(three_term_identity(p.get(0), p.get(1), p.get(2), &inst.ctx)?, 1.0, String::new()))
        }
        Kind::Unwanted(a, b) | Kind::Residues(a, b) => {
            let chain = inst.chain(cfg, cfg.sites)?;
            let p = inst.draw(a + b + 1, chain.theta())?;
            let s = split(&p, &[a, b, 1]);
            let w = OnShellWeights::new(&chain, &s[0], &s[1], chain.ctx())?;
            let sys = BetheSystem::new(s[0].clone(), s[1].clone(), &w, chain.ctx());
            let mut worst = F::zero();
            if matches!(kind, Kind::Unwanted(..)) {
                let d = decompose_transfer_action(s[2].get(0), &sys)?;
                for x in d.unwanted().chain(bethe_residuals(&sys)?.iter()) {
                    worst = larger(worst, x.size());
                }
            } else {
                for j in 0..a {
                    worst = larger(worst, tau_residue_at_u(j, &sys)?.size());
                }
                for k in 0..b {
                    worst = larger(worst, tau_residue_at_v(k, &sys)?.size());
                }
            }
            Ok(judge(worst, 1.0, format!("a={a} b={b}")))
        }
        Kind::Decomposition(a, b) => {
            let chain = inst.chain(cfg, cfg.sites)?;
            let p = inst.draw(a + b + 1, chain.theta())?;
            let s = split(&p, &[a, b, 1]);
            let sys = BetheSystem::new(s[0].clone(), s[1].clone(), &chain, chain.ctx());
            let (lhs, rhs) = transfer_sides(&chain, s[2].get(0), &sys)?;
            Ok(judge(lhs.sub(&rhs).max_size(), vec_scale(&lhs), format!("L={} a={a} b={b}", cfg.sites)))
        }
        Kind::Numeric(..) => Err(Error::config("suite", "not an exact check")),
    }
}

/// Newton solve on a two-site chain followed by the eigenvector checks; one record per property.
fn numeric_onshell(cfg: &SuiteConfig, a: usize, b: usize, seed: u64) -> Vec<(String, Result<Outcome>)> {
    let tag = format!("a{a}b{b}");
    let ids = ["newton", "eigencheck", "spectrum", "residues", "closed-form"].map(|p| format!("onshell-numeric.{p}.{tag}"));
    match numeric_onshell_inner(cfg, a, b, seed) {
        Ok(outcomes) => ids.into_iter().zip(outcomes).filter_map(|(id, o)| o.map(|o| (id, Ok(o)))).collect(),
        Err(e) => vec![(ids[0].clone(), Err(e))],
    }
}

fn numeric_onshell_inner(cfg: &SuiteConfig, a: usize, b: usize, seed: u64) -> Result<Vec<Option<Outcome>>> {
    let sites = cfg.sites.min(2);
    let mut inst = Instance::<Complex64>::new(cfg, seed)?;
    let chain = inst.chain(cfg, sites)?;
    let seeds: Vec<u64> = (0..NEWTON_SEEDS).map(|k| seed.wrapping_add(k)).collect();
    let found = solve_bethe_newton(&chain, a, b, &seeds, NEWTON_TOL, 100);
    let params = format!("L={sites} a={a} b={b} roots={}", found.roots.len());
    let Some(root) = found.roots.iter().min_by(|x, y| x.residual.total_cmp(&y.residual)) else {
        return Ok(vec![Some(Outcome { pass: false, residual: "no root".into(), params })]);
    };
    let ctx = chain.ctx();
    let sys = root.system(&chain, ctx);
    let mut forbidden = chain.theta().concat(&sys.ubar).concat(&sys.vbar);
    let probes = inst.draw(PROBES, &forbidden)?;
    forbidden = forbidden.concat(&probes);
    let eig = eigencheck(&chain, &sys, &probes)?.re;
    let z = inst.draw(1, &forbidden)?.get(0).to_owned();
    let tau = tau_eval(&z, &sys)?;
    let gap = transfer_spectrum(&chain, &z)?.iter().map(|l| (l - tau).norm()).fold(f64::INFINITY, f64::min) / tau.norm().max(1.0);
    let mut res: f64 = 0.0;
    for j in 0..a {
        res = res.max(tau_residue_at_u(j, &sys)?.norm());
    }
    for k in 0..b {
        res = res.max(tau_residue_at_v(k, &sys)?.norm());
    }
    let closed = if b == 1 && a == 1 {
        // r3 is the constant κ3/κ2, so f(v,u) = κ fixes v - u = c/(κ - 1)
        let kappa = lift::<Complex64>(&cfg.twist[2]) / lift::<Complex64>(&cfg.twist[1]);
        let want = ctx.c() / (kappa - 1.0);
        Some(judge_float((sys.vbar.get(0) - sys.ubar.get(0) - want).norm(), EIGEN_TOL, params.clone()))
    } else {
        None
    };
    Ok(vec![
        Some(judge_float(root.residual, NEWTON_TOL, params.clone())),
        Some(judge_float(eig, EIGEN_TOL, params.clone())),
        Some(judge_float(gap, EIGEN_TOL, params.clone())),
        Some(judge_float(res, EIGEN_TOL, params.clone())),
        closed,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(suites: Vec<Suite>) -> SuiteConfig {
        SuiteConfig { suites, sites: 3, max_a: 1, max_b: 1, max_n: 1, draws: 2, timing: false, ..SuiteConfig::default() }
    }

    #[test]
    fn empty_selection() {
        let r = run_suite(&small(vec![])).unwrap();
        assert_eq!(r.summary.total, 0);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn izergin_suite_counts() {
        let mut cfg = small(vec![Suite::Izergin]);
        cfg.draws = 10;
        cfg.seed = 1;
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.summary.total, 10 * 9);
        assert!(r.all_passed(), "{}", r.to_text());
    }

    #[test]
    fn deterministic_body() {
        let cfg = small(vec![Suite::Defs, Suite::Actions]);
        assert_eq!(run_suite(&cfg).unwrap().body(), run_suite(&cfg).unwrap().body());
    }

    #[test]
    fn injected_failure_sets_exit_code() {
        let mut cfg = small(vec![Suite::Defs]);
        cfg.inject_failure = true;
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.summary.failed, 1);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn seeds_differ_per_draw() {
        assert_ne!(job_seed(0, "x", 0), job_seed(0, "x", 1));
        assert_ne!(job_seed(0, "x", 0), job_seed(0, "y", 0));
    }
}
