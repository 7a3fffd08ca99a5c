//! The verification suite behind `selfconcord verify-all`.
//!
//! Each criterion is run over exhaustive desk-scale graph families and reports
//! a single pass/fail line. Tolerances are fixed here; [`SuiteConfig::tol`]
//! replaces every floating tolerance at once (exact criteria are unaffected).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::concordance::{
    check_sc, check_sc2, sigma_opt_bounds, violates, Certificate, CheckOptions, Mode, Status,
};
use crate::error::Result;
use crate::graph::{enumerate_graphs, Graph};
use crate::optimize::{
    beta_split_value, max_form_sphere, max_form_sphere_with, max_quadratic_simplex, OptConfig,
    OptReport, StartPlan,
};
use crate::reduction::{
    build_cubic_instance, build_cubic_tensor, build_quartic_instance, cubic_threshold,
    true_max_square, witness_from_clique,
};
use crate::scalar::{ratio, Rational};
use crate::tensor::{norm, SymTensor};

pub const TOL_IDENTITY: f64 = 1e-6;
pub const TOL_WITNESS: f64 = 1e-12;
pub const TOL_FOOTNOTE: f64 = 1e-9;
pub const FOOTNOTE_MIN_MISMATCH: f64 = 0.29;
pub const TOL_SIGMA_LOWER: f64 = 1e-8;
pub const TOL_BETA: f64 = 1e-9;
pub const BETA_GRID_STEP: f64 = 1e-6;
pub const TOL_PROPERTY: f64 = 1e-6;
pub const TOL_BANACH: f64 = 1e-4;
pub const FD_STEP: f64 = 1e-5;
pub const LIMIT_MS: Duration = Duration::from_secs(120);
pub const LIMIT_DECISION: Duration = Duration::from_secs(60);

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub opt: OptConfig,
    /// Largest vertex count in the exhaustive families (the full suite uses 5).
    pub max_n: usize,
    pub tol: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            opt: OptConfig::default(),
            max_n: 5,
            tol: None,
        }
    }
}

impl SuiteConfig {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn graphs(&self, max_n: usize) -> Vec<Graph> {
        (2..=max_n.min(self.max_n))
            .flat_map(|n| enumerate_graphs(n).expect("enumeration"))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<28} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Result<Vec<Outcome>> {
    Ok(vec![
        motzkin_straus(cfg)?,
        nesterov_constants(cfg)?,
        footnote(cfg)?,
        decision_equivalence(cfg)?,
        boundary_exactness(cfg)?,
        second_order_equivalence(cfg)?,
        sigma_opt(cfg)?,
        beta_split(cfg),
        property_suite(cfg)?,
    ])
}

fn one_minus_inv(x: usize) -> f64 {
    1.0 - 1.0 / x as f64
}

/// Best value of the cubic gadget on the joint sphere, warm-started at the
/// clique witness.
pub fn cubic_gadget_max(g: &Graph, cfg: &OptConfig) -> Result<f64> {
    if g.m() == 0 {
        return Ok(0.0);
    }
    let t = build_cubic_tensor(g)?;
    let warm = witness_from_clique(g, &g.max_clique())?;
    let plan = StartPlan {
        warm: vec![warm.into_inner()],
        nonnegative: true,
    };
    let r: OptReport<f64> = max_form_sphere_with(&t, cfg, &plan)?;
    Ok(r.best_value)
}

pub fn motzkin_straus(cfg: &SuiteConfig) -> Result<Outcome> {
    let tol = cfg.tol(TOL_IDENTITY);
    let start = Instant::now();
    let graphs = cfg.graphs(5);
    let mut worst: f64 = 0.0;
    for g in &graphs {
        let c: OptReport<f64> = max_quadratic_simplex(g, true, &cfg.opt)?;
        let s: OptReport<f64> = max_quadratic_simplex(g, false, &cfg.opt)?;
        worst = worst
            .max((2.0 * c.best_value - one_minus_inv(g.clique_number())).abs())
            .max((2.0 * s.best_value - one_minus_inv(g.stability_number())).abs());
    }
    let elapsed = start.elapsed();
    Ok(Outcome {
        id: 1,
        name: "motzkin-straus",
        passed: worst <= tol && elapsed <= LIMIT_MS,
        detail: format!("{} graphs, max gap {worst:.3e} (tol {tol:e}), {elapsed:.2?}", graphs.len()),
    })
}

pub fn nesterov_constants(cfg: &SuiteConfig) -> Result<Outcome> {
    let tol = cfg.tol(TOL_IDENTITY);
    let wtol = cfg.tol(TOL_WITNESS);
    let graphs = cfg.graphs(5);
    let (mut worst, mut worst_witness): (f64, f64) = (0.0, 0.0);
    for g in &graphs {
        let omega = g.clique_number();
        let best = cubic_gadget_max(g, &cfg.opt)?;
        worst = worst.max((13.5 * best * best - one_minus_inv(omega)).abs());
        let comp = g.complement();
        let best_s = cubic_gadget_max(&comp, &cfg.opt)?;
        worst = worst.max((13.5 * best_s * best_s - one_minus_inv(g.stability_number())).abs());

        let h = witness_from_clique(g, &g.max_clique())?;
        let v = build_cubic_tensor(g)?.eval_form(&h)?;
        worst_witness = worst_witness.max((v * v - 2.0 / 27.0 * one_minus_inv(omega)).abs());
    }
    Ok(Outcome {
        id: 2,
        name: "nesterov-constants",
        passed: worst <= tol && worst_witness <= wtol,
        detail: format!(
            "{} graphs, max gap {worst:.3e}, witness gap {worst_witness:.3e}",
            graphs.len()
        ),
    })
}

/// Both sides of the widely cited stability-number expression
/// `sqrt(1 - 1/alpha) = 3 sqrt(3) max sum_{ij not in E} u_i u_j w_ij` and of
/// the corrected `1 - 1/alpha = (27/2) max [...]^2`, on 3 vertices / 1 edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootnoteDemo {
    pub alpha: usize,
    pub max_value: f64,
    pub cited_lhs: f64,
    pub cited_rhs: f64,
    pub corrected_lhs: f64,
    pub corrected_rhs: f64,
}

pub fn footnote_demo(cfg: &OptConfig) -> Result<FootnoteDemo> {
    let g = Graph::new(3, [(0, 1)])?;
    let alpha = g.stability_number();
    let max_value = cubic_gadget_max(&g.complement(), cfg)?;
    Ok(FootnoteDemo {
        alpha,
        max_value,
        cited_lhs: one_minus_inv(alpha).sqrt(),
        cited_rhs: 3.0 * 3f64.sqrt() * max_value,
        corrected_lhs: one_minus_inv(alpha),
        corrected_rhs: 13.5 * max_value * max_value,
    })
}

pub fn footnote(cfg: &SuiteConfig) -> Result<Outcome> {
    let tol = cfg.tol(TOL_FOOTNOTE);
    let d = footnote_demo(&cfg.opt)?;
    let mismatch = (d.cited_rhs - d.cited_lhs).abs();
    let stated = (d.cited_lhs - 0.5f64.sqrt()).abs() <= tol && (d.cited_rhs - 1.0).abs() <= tol;
    let balance = (d.corrected_lhs - d.corrected_rhs).abs();
    Ok(Outcome {
        id: 3,
        name: "footnote-counterexample",
        passed: mismatch >= FOOTNOTE_MIN_MISMATCH && stated && balance <= tol,
        detail: format!(
            "cited {:.5} vs {:.5} (mismatch {mismatch:.4}), corrected {:.9} vs {:.9}",
            d.cited_lhs, d.cited_rhs, d.corrected_lhs, d.corrected_rhs
        ),
    })
}

fn check_opts(cfg: &SuiteConfig) -> CheckOptions {
    CheckOptions::with_opt(cfg.opt)
}

pub fn decision_equivalence(cfg: &SuiteConfig) -> Result<Outcome> {
    let start = Instant::now();
    let opts = check_opts(cfg);
    let sigma = ratio(1, 2);
    let (mut total, mut agree) = (0usize, 0usize);
    for g in cfg.graphs(5) {
        for k in 3..=6 {
            let inst = build_cubic_instance(&g, k, &sigma)?;
            let v = check_sc(&inst, &opts, Mode::Oracle)?;
            total += 1;
            if (v.status == Status::NotSelfConcordant) == g.has_clique(k)
                && v.status != Status::Undecided
            {
                agree += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    Ok(Outcome {
        id: 4,
        name: "decision-equivalence",
        passed: agree == total && elapsed <= LIMIT_DECISION,
        detail: format!("{agree}/{total} agree, {elapsed:.2?}"),
    })
}

pub fn boundary_exactness(cfg: &SuiteConfig) -> Result<Outcome> {
    let opts = check_opts(cfg);
    let sigma = ratio(1, 2);
    let (mut total, mut ok) = (0usize, 0usize);
    for g in cfg.graphs(5) {
        let omega = g.clique_number();
        let k = omega + 1;
        if !(3..=6).contains(&k) {
            continue;
        }
        total += 1;
        let inst = build_cubic_instance(&g, k, &sigma)?;
        let exact = true_max_square(&g)? == cubic_threshold(k)?;
        let v = check_sc(&inst, &opts, Mode::Oracle)?;
        if exact && v.status == Status::SelfConcordant {
            ok += 1;
        }
    }
    Ok(Outcome {
        id: 5,
        name: "boundary-exactness",
        passed: ok == total && total > 0,
        detail: format!("{ok}/{total} boundary instances exact and SELF_CONCORDANT"),
    })
}

pub fn second_order_equivalence(cfg: &SuiteConfig) -> Result<Outcome> {
    let opts = check_opts(cfg);
    let tau = ratio(1, 1);
    let (mut total, mut agree) = (0usize, 0usize);
    for g in cfg.graphs(5) {
        for k in 3..=6 {
            let inst = build_quartic_instance(&g, k, &tau)?;
            let v = check_sc2(&inst, &opts, Mode::Oracle)?;
            total += 1;
            if (v.status == Status::NotSelfConcordant) == g.has_clique(k)
                && v.status != Status::Undecided
            {
                agree += 1;
            }
        }
    }
    Ok(Outcome {
        id: 6,
        name: "second-order-equivalence",
        passed: agree == total,
        detail: format!("{agree}/{total} agree"),
    })
}

pub fn sigma_opt(cfg: &SuiteConfig) -> Result<Outcome> {
    let tol = cfg.tol(TOL_SIGMA_LOWER);
    let k3 = sigma_opt_bounds(&build_cubic_tensor(&Graph::complete(3))?, &cfg.opt)?;
    let target = 1.0 / 81.0;
    let zero = sigma_opt_bounds(&SymTensor::zeros(3, 3)?, &cfg.opt)?;
    let diag = sigma_opt_bounds(
        &SymTensor::from_entries(3, 1, vec![(vec![0, 0, 0], ratio(1, 1))])?,
        &cfg.opt,
    )?;
    let passed = k3.lower >= target - tol
        && k3.lower <= target + tol
        && k3.upper >= target
        && zero.lower == 0.0
        && zero.upper == 0.0
        && diag.lower == 0.25
        && diag.upper == 0.25;
    Ok(Outcome {
        id: 7,
        name: "sigma-opt",
        passed,
        detail: format!(
            "K3 [{:.10}, {:.10}] vs 1/81 = {target:.10}; zero [{}, {}]; diag [{}, {}]",
            k3.lower, k3.upper, zero.lower, zero.upper, diag.lower, diag.upper
        ),
    })
}

/// Grid maximum of `beta sqrt(1 - beta)` over (0, 1) with the given step.
pub fn beta_grid_max(step: f64) -> (f64, f64) {
    let points = (1.0 / step).round() as usize;
    (1..points)
        .map(|i| {
            let b = i as f64 * step;
            (b, beta_split_value(b))
        })
        .fold((0.0, f64::NEG_INFINITY), |best, p| if p.1 > best.1 { p } else { best })
}

pub fn beta_split(cfg: &SuiteConfig) -> Outcome {
    let tol = cfg.tol(TOL_BETA);
    let (beta, value) = beta_grid_max(BETA_GRID_STEP);
    let constant = 2.0 / (3.0 * 3f64.sqrt());
    let passed = (value - constant).abs() <= tol && (beta - 2.0 / 3.0).abs() <= BETA_GRID_STEP;
    Outcome {
        id: 8,
        name: "beta-split-constant",
        passed,
        detail: format!(
            "max {value:.15} at beta {beta:.6}, 2/(3 sqrt 3) = {constant:.15}"
        ),
    }
}

fn random_tensor(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> Result<SymTensor> {
    let entries: Vec<(Vec<usize>, Rational)> = (0..3 * dim)
        .map(|_| {
            let idx = (0..order).map(|_| rng.random_range(0..dim)).collect();
            (idx, ratio(rng.random_range(-20..=20), rng.random_range(1..=10)))
        })
        .collect();
    SymTensor::from_entries(order, dim, entries)
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let nv = norm(&v);
        if nv > 1e-3 {
            return v.into_iter().map(|x| x / nv).collect();
        }
    }
}

/// Maximum of `A(x, y, z)` over three unit arguments by alternating
/// maximization, restarts from `starts` random triples.
pub fn multilinear_max(a: &SymTensor, rng: &mut ChaCha8Rng, starts: usize) -> f64 {
    let n = a.dim();
    let dense = a.to_dense();
    let contract = |y: &[f64], z: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        s += dense[(i * n + j) * n + k] * y[j] * z[k];
                    }
                }
                s
            })
            .collect()
    };
    let mut best = f64::NEG_INFINITY;
    for _ in 0..starts {
        let mut x = random_unit(rng, n);
        let mut y = random_unit(rng, n);
        let mut z = random_unit(rng, n);
        let mut value = f64::NEG_INFINITY;
        for _ in 0..5000 {
            for slot in 0..3 {
                let g = match slot {
                    0 => contract(&y, &z),
                    1 => contract(&x, &z),
                    _ => contract(&x, &y),
                };
                let ng = norm(&g);
                if ng == 0.0 {
                    continue;
                }
                let unit: Vec<f64> = g.iter().map(|v| v / ng).collect();
                match slot {
                    0 => x = unit,
                    1 => y = unit,
                    _ => z = unit,
                }
            }
            let v: f64 = x.iter().zip(contract(&y, &z)).map(|(a, b)| a * b).sum();
            if v - value <= 1e-15 {
                value = value.max(v);
                break;
            }
            value = v;
        }
        best = best.max(value);
    }
    best
}

pub fn property_suite(cfg: &SuiteConfig) -> Result<Outcome> {
    let tol = cfg.tol(TOL_PROPERTY);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.opt.seed);
    let (mut euler_err, mut fd_err): (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let order = 2 + i % 3;
        let dim = 1 + i % 5;
        let a = random_tensor(&mut rng, order, dim)?;
        let h = random_unit(&mut rng, dim);
        let f: f64 = a.eval_form(&h)?;
        let g = a.grad_form(&h)?;
        let lhs: f64 = g.iter().zip(&h).map(|(x, y)| x * y).sum();
        let rhs = order as f64 * f;
        euler_err = euler_err.max((lhs - rhs).abs() / rhs.abs().max(1e-300).max(lhs.abs()).max(1.0));
        for j in 0..dim {
            let mut hp = h.clone();
            let mut hm = h.clone();
            hp[j] += FD_STEP;
            hm[j] -= FD_STEP;
            let fd = (a.eval_form(&hp)? - a.eval_form(&hm)?) / (2.0 * FD_STEP);
            fd_err = fd_err.max((fd - g[j]).abs() / g[j].abs().max(1.0));
        }
    }

    let banach_cfg = cfg.opt.with_starts(cfg.opt.starts.max(32));
    let mut banach_err: f64 = 0.0;
    for i in 0..50 {
        let dim = 2 + i % 3;
        let a = random_tensor(&mut rng, 3, dim)?;
        let single: OptReport<f64> = max_form_sphere(&a, &banach_cfg)?;
        let triple = multilinear_max(&a, &mut rng, 32);
        banach_err = banach_err.max((single.best_value - triple).abs());
    }

    let (certs, bad_certs, contradictions) = soundness_sweep(cfg)?;
    let passed = euler_err <= tol
        && fd_err <= tol
        && banach_err <= cfg.tol(TOL_BANACH)
        && bad_certs == 0
        && contradictions == 0;
    Ok(Outcome {
        id: 9,
        name: "property-suite",
        passed,
        detail: format!(
            "euler {euler_err:.1e}, fd {fd_err:.1e}, banach {banach_err:.1e}, {certs} NOT certificates ({bad_certs} bad), {contradictions} contradictions"
        ),
    })
}

/// Runs relax, grid and oracle on every n <= 4 instance, cubic and quartic.
/// Returns (NOT certificates seen, certificates failing exact re-check,
/// instances with both a NOT and a SELF_CONCORDANT verdict).
pub fn soundness_sweep(cfg: &SuiteConfig) -> Result<(usize, usize, usize)> {
    let opts = check_opts(cfg);
    let (mut certs, mut bad, mut contradictions) = (0, 0, 0);
    for g in cfg.graphs(4) {
        for k in 3..=6 {
            let instances = [
                build_cubic_instance(&g, k, &ratio(1, 2))?,
                build_quartic_instance(&g, k, &ratio(1, 1))?,
            ];
            for inst in &instances {
                let mut seen = Vec::new();
                for mode in [Mode::Relax, Mode::Grid, Mode::Oracle] {
                    let v = match inst.kind() {
                        crate::reduction::InstanceKind::Cubic => check_sc(inst, &opts, mode),
                        crate::reduction::InstanceKind::Quartic => check_sc2(inst, &opts, mode),
                    };
                    let Ok(v) = v else { continue };
                    if let Certificate::Witness(h) = &v.certificate {
                        certs += 1;
                        if !violates(inst, h)? {
                            bad += 1;
                        }
                    }
                    seen.push(v.status);
                }
                if seen.contains(&Status::NotSelfConcordant) && seen.contains(&Status::SelfConcordant) {
                    contradictions += 1;
                }
            }
        }
    }
    Ok((certs, bad, contradictions))
}
