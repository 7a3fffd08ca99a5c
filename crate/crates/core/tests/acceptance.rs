//! Acceptance criteria. Each test prints one PASS/FAIL line and asserts it.
//!
//! Ground truth here is computed independently of the library's own oracles:
//! clique and stability numbers by exhaustive subset enumeration, and
//! certificate checks by summing the full n^d hypermatrix in exact arithmetic.

use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use selfconcord::concordance::{check_sc, check_sc2, sigma_opt_bounds, Certificate, CheckOptions, Mode, Status};
use selfconcord::optimize::{max_form_sphere, max_form_sphere_with, max_quadratic_simplex, StartPlan};
use selfconcord::reduction::{
    build_cubic_instance, build_cubic_tensor, build_quartic_instance, cubic_threshold, true_max_square,
    witness_from_clique, ConcordanceInstance, InstanceKind,
};
use selfconcord::scalar::ratio;
use selfconcord::{enumerate_graphs, Graph, OptConfig, OptReport64, Rational, SymTensor};

fn report(id: usize, name: &str, passed: bool, detail: String) {
    println!("criterion {id} [{}] {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

fn graphs(max_n: usize) -> Vec<Graph> {
    (2..=max_n).flat_map(|n| enumerate_graphs(n).unwrap()).collect()
}

/// Largest clique by enumerating all vertex subsets.
fn brute_max_clique(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize <= best.len() {
            continue;
        }
        let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let ok = vs
            .iter()
            .enumerate()
            .all(|(a, &u)| vs[a + 1..].iter().all(|&v| g.has_edge(u, v)));
        if ok {
            best = vs;
        }
    }
    best
}

fn omega(g: &Graph) -> usize {
    brute_max_clique(g).len()
}

fn alpha(g: &Graph) -> usize {
    brute_max_clique(&g.complement()).len()
}

fn one_minus_inv(x: usize) -> f64 {
    1.0 - 1.0 / x as f64
}

fn cfg() -> OptConfig {
    OptConfig::default()
}

/// Sphere maximum of the cubic gadget, warm-started at the brute-force clique witness.
fn gadget_max(g: &Graph) -> f64 {
    if g.m() == 0 {
        return 0.0;
    }
    let t = build_cubic_tensor(g).unwrap();
    let warm = witness_from_clique(g, &brute_max_clique(g)).unwrap();
    let plan = StartPlan {
        warm: vec![warm.into_inner()],
        nonnegative: true,
    };
    let r: OptReport64 = max_form_sphere_with(&t, &cfg(), &plan).unwrap();
    r.best_value
}

#[test]
fn criterion_1_motzkin_straus() {
    let start = Instant::now();
    let all = graphs(5);
    assert_eq!(all.len(), 1 + 7 + 63 + 1023);
    let mut worst: f64 = 0.0;
    for g in &all {
        let c: OptReport64 = max_quadratic_simplex(g, true, &cfg()).unwrap();
        let s: OptReport64 = max_quadratic_simplex(g, false, &cfg()).unwrap();
        for r in [&c, &s] {
            assert!((r.witness.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            assert!(r.witness.iter().all(|&x| x >= -1e-12));
        }
        worst = worst
            .max((2.0 * c.best_value - one_minus_inv(omega(g))).abs())
            .max((2.0 * s.best_value - one_minus_inv(alpha(g))).abs());
    }
    let elapsed = start.elapsed();
    report(
        1,
        "Motzkin-Straus, clique and stability variants",
        worst <= 1e-6 && elapsed <= Duration::from_secs(120),
        format!("{} graphs, max |gap| {worst:.3e} <= 1e-6, {elapsed:.2?}", all.len()),
    );
}

#[test]
fn criterion_2_nesterov_constants() {
    let all = graphs(5);
    let (mut worst, mut worst_witness): (f64, f64) = (0.0, 0.0);
    for g in &all {
        let w = omega(g);
        let best = gadget_max(g);
        worst = worst.max((13.5 * best * best - one_minus_inv(w)).abs());
        let best_s = gadget_max(&g.complement());
        worst = worst.max((13.5 * best_s * best_s - one_minus_inv(alpha(g))).abs());

        let h = witness_from_clique(g, &brute_max_clique(g)).unwrap();
        assert!((h.norm() - 1.0).abs() <= 1e-12);
        let v: f64 = build_cubic_tensor(g).unwrap().eval_form(&h).unwrap();
        worst_witness = worst_witness.max((v * v - 2.0 / 27.0 * one_minus_inv(w)).abs());
    }
    report(
        2,
        "cubic sphere constants 27/2 and 2/27",
        worst <= 1e-6 && worst_witness <= 1e-12,
        format!("max |gap| {worst:.3e} <= 1e-6, analytic witness gap {worst_witness:.3e} <= 1e-12"),
    );
}

#[test]
fn criterion_3_footnote_counterexample() {
    let g = Graph::new(3, [(0, 1)]).unwrap();
    let a = alpha(&g);
    assert_eq!(a, 2);
    // plain multistart, no warm start: the non-edge form on the complement
    let t = build_cubic_tensor(&g.complement()).unwrap();
    let r: OptReport64 = max_form_sphere(&t, &cfg().with_starts(16)).unwrap();
    let m = r.best_value;
    let cited_lhs = one_minus_inv(a).sqrt();
    let cited_rhs = 3.0 * 3f64.sqrt() * m;
    let corrected_lhs = one_minus_inv(a);
    let corrected_rhs = 13.5 * m * m;
    let mismatch = (cited_lhs - cited_rhs).abs();
    let passed = mismatch >= 0.29
        && (cited_lhs - 0.5f64.sqrt()).abs() <= 1e-9
        && (cited_rhs - 1.0).abs() <= 1e-9
        && (corrected_lhs - corrected_rhs).abs() <= 1e-9;
    report(
        3,
        "footnote counterexample",
        passed,
        format!(
            "cited sides {cited_lhs:.6} vs {cited_rhs:.6} (mismatch {mismatch:.4}), corrected {corrected_lhs:.10} vs {corrected_rhs:.10}"
        ),
    );
}

#[test]
fn criterion_4_decision_equivalence() {
    let start = Instant::now();
    let opts = CheckOptions::default();
    let sigma = ratio(1, 2);
    let (mut total, mut agree) = (0, 0);
    for g in graphs(5) {
        let w = omega(&g);
        for k in 3..=6 {
            let inst = build_cubic_instance(&g, k, &sigma).unwrap();
            let v = check_sc(&inst, &opts, Mode::Oracle).unwrap();
            total += 1;
            let expected = if w >= k { Status::NotSelfConcordant } else { Status::SelfConcordant };
            if v.status == expected {
                agree += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        4,
        "CLIQUE <=> NOT self-concordant (sigma = 1/2)",
        agree == total && elapsed <= Duration::from_secs(60),
        format!("{agree}/{total} agree, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_5_boundary_exactness() {
    let opts = CheckOptions::default();
    let (mut total, mut ok) = (0, 0);
    for g in graphs(5) {
        let k = omega(&g) + 1;
        if !(3..=6).contains(&k) {
            continue;
        }
        total += 1;
        let exact = true_max_square(&g).unwrap() == cubic_threshold(k).unwrap();
        let inst = build_cubic_instance(&g, k, &ratio(1, 2)).unwrap();
        let v = check_sc(&inst, &opts, Mode::Oracle).unwrap();
        if exact && v.status == Status::SelfConcordant {
            ok += 1;
        }
    }
    report(
        5,
        "boundary omega = k-1 is exact and self-concordant",
        ok == total && total > 0,
        format!("{ok}/{total}"),
    );
}

#[test]
fn criterion_6_second_order_equivalence() {
    let opts = CheckOptions::default();
    let tau = ratio(1, 1);
    let (mut total, mut agree) = (0, 0);
    for g in graphs(5) {
        let w = omega(&g);
        for k in 3..=6 {
            let inst = build_quartic_instance(&g, k, &tau).unwrap();
            let v = check_sc2(&inst, &opts, Mode::Oracle).unwrap();
            total += 1;
            if (v.status == Status::NotSelfConcordant) == (w >= k) && v.status != Status::Undecided {
                agree += 1;
            }
        }
    }
    report(
        6,
        "CLIQUE <=> NOT second-order self-concordant (tau = 1)",
        agree == total,
        format!("{agree}/{total} agree"),
    );
}

#[test]
fn criterion_7_sigma_opt() {
    let k3 = sigma_opt_bounds(&build_cubic_tensor(&Graph::complete(3)).unwrap(), &cfg()).unwrap();
    let target = 1.0 / 81.0;
    let zero = sigma_opt_bounds(&SymTensor::zeros(3, 4).unwrap(), &cfg()).unwrap();
    let diag = sigma_opt_bounds(
        &SymTensor::from_entries(3, 1, vec![(vec![0, 0, 0], ratio(1, 1))]).unwrap(),
        &cfg(),
    )
    .unwrap();
    let passed = k3.lower <= target
        && target <= k3.upper
        && k3.lower >= target - 1e-8
        && (zero.lower, zero.upper) == (0.0, 0.0)
        && (diag.lower, diag.upper) == (0.25, 0.25);
    report(
        7,
        "sigma_opt brackets",
        passed,
        format!(
            "K3 [{:.12}, {:.12}] contains 1/81, zero ({}, {}), diagonal ({}, {})",
            k3.lower, k3.upper, zero.lower, zero.upper, diag.lower, diag.upper
        ),
    );
}

#[test]
fn criterion_8_beta_split_constant() {
    let step = 1e-6;
    let (mut arg, mut best) = (0.0, f64::NEG_INFINITY);
    for i in 1..1_000_000 {
        let b = i as f64 * step;
        let v = b * (1.0 - b).sqrt();
        if v > best {
            best = v;
            arg = b;
        }
    }
    let constant = 2.0 / (3.0 * 3f64.sqrt());
    report(
        8,
        "sup beta sqrt(1-beta) = 2/(3 sqrt 3) at 2/3",
        (best - constant).abs() <= 1e-9 && (arg - 2.0 / 3.0).abs() <= step,
        format!("grid max {best:.15} at {arg:.6}, constant {constant:.15}"),
    );
}

fn random_tensor(rng: &mut ChaCha8Rng, order: usize, dim: usize) -> SymTensor {
    let entries: Vec<(Vec<usize>, Rational)> = (0..2 * dim + 1)
        .map(|_| {
            let idx = (0..order).map(|_| rng.random_range(0..dim)).collect();
            (idx, ratio(rng.random_range(-12..=12), rng.random_range(1..=6)))
        })
        .collect();
    SymTensor::from_entries(order, dim, entries).unwrap()
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// max A(x, y, z) over three unit vectors by alternating (higher-order power) updates.
fn three_argument_max(a: &SymTensor, rng: &mut ChaCha8Rng) -> f64 {
    let n = a.dim();
    let entry = |i: usize, j: usize, k: usize| selfconcord::scalar::rational_to_f64(&a.get(&[i, j, k]));
    let mut dense = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                dense[(i * n + j) * n + k] = entry(i, j, k);
            }
        }
    }
    let contract = |y: &[f64], z: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).map(|(j, k)| dense[(i * n + j) * n + k] * y[j] * z[k]).sum())
            .collect()
    };
    let unit = |v: Vec<f64>| {
        let s = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if s == 0.0 { v } else { v.into_iter().map(|x| x / s).collect() }
    };
    let mut best = f64::NEG_INFINITY;
    for _ in 0..48 {
        let (mut y, mut z) = (random_unit(rng, n), random_unit(rng, n));
        let mut value = f64::NEG_INFINITY;
        for _ in 0..10_000 {
            let x = unit(contract(&y, &z));
            y = unit(contract(&x, &z));
            z = unit(contract(&x, &y));
            let v: f64 = x.iter().zip(contract(&y, &z)).map(|(p, q)| p * q).sum();
            let done = v - value <= 1e-14;
            value = value.max(v);
            if done {
                break;
            }
        }
        best = best.max(value);
    }
    best
}

/// Exact violation check by summing every one of the n^d hypermatrix positions.
fn exact_violation(inst: &ConcordanceInstance, h: &[Rational]) -> bool {
    let t = inst.tensor();
    let (n, d) = (t.dim(), t.order());
    let mut form = Rational::zero();
    for flat in 0..n.pow(d as u32) {
        let mut idx = Vec::with_capacity(d);
        let mut rest = flat;
        for _ in 0..d {
            idx.push(rest % n);
            rest /= n;
        }
        let a = t.get(&idx);
        if !a.is_zero() {
            form += idx.iter().fold(a, |acc, &i| acc * &h[i]);
        }
    }
    let nn: Rational = h.iter().map(|x| x * x).sum();
    match inst.kind() {
        InstanceKind::Cubic => &form * &form > inst.q() * &nn * &nn * &nn,
        InstanceKind::Quartic => form > inst.q() * &nn * &nn,
    }
}

#[test]
fn criterion_9_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce97);
    let (mut euler, mut fd): (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let order = 2 + i % 3;
        let dim = 1 + i % 4;
        let a = random_tensor(&mut rng, order, dim);
        let h = random_unit(&mut rng, dim);
        let f: f64 = a.eval_form(&h).unwrap();
        let g = a.grad_form(&h).unwrap();
        let ip: f64 = g.iter().zip(&h).map(|(x, y)| x * y).sum();
        euler = euler.max((ip - order as f64 * f).abs() / (order as f64 * f).abs().max(1.0));
        let step = 1e-5;
        for j in 0..dim {
            let (mut hp, mut hm) = (h.clone(), h.clone());
            hp[j] += step;
            hm[j] -= step;
            let d = (a.eval_form(&hp).unwrap() - a.eval_form(&hm).unwrap()) / (2.0 * step);
            fd = fd.max((d - g[j]).abs() / g[j].abs().max(1.0));
        }
    }

    let banach_cfg = cfg().with_starts(48);
    let mut banach: f64 = 0.0;
    for i in 0..50 {
        let a = random_tensor(&mut rng, 3, 2 + i % 3);
        let single: OptReport64 = max_form_sphere(&a, &banach_cfg).unwrap();
        banach = banach.max((single.best_value - three_argument_max(&a, &mut rng)).abs());
    }

    let opts = CheckOptions::default();
    let (mut certs, mut bad, mut contradictions, mut runs) = (0, 0, 0, 0);
    for g in graphs(4) {
        for k in 3..=6 {
            let pair = [
                build_cubic_instance(&g, k, &ratio(1, 2)).unwrap(),
                build_quartic_instance(&g, k, &ratio(1, 1)).unwrap(),
            ];
            for inst in &pair {
                let mut statuses = Vec::new();
                for mode in [Mode::Relax, Mode::Grid, Mode::Oracle] {
                    let v = match inst.kind() {
                        InstanceKind::Cubic => check_sc(inst, &opts, mode),
                        InstanceKind::Quartic => check_sc2(inst, &opts, mode),
                    };
                    // grid mode refuses dim > 5
                    let Ok(v) = v else { continue };
                    runs += 1;
                    if let Certificate::Witness(h) = &v.certificate {
                        certs += 1;
                        if !exact_violation(inst, h) {
                            bad += 1;
                        }
                    }
                    statuses.push(v.status);
                }
                if statuses.contains(&Status::NotSelfConcordant) && statuses.contains(&Status::SelfConcordant) {
                    contradictions += 1;
                }
            }
        }
    }
    let passed = euler <= 1e-6 && fd <= 1e-6 && banach <= 1e-4 && bad == 0 && contradictions == 0 && certs > 0;
    report(
        9,
        "property suite",
        passed,
        format!(
            "euler {euler:.1e}, finite-diff {fd:.1e}, banach {banach:.1e}; {runs} checks, {certs} NOT certificates ({bad} fail exact re-check), {contradictions} contradictions"
        ),
    );
}
