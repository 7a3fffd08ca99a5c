//! Budgeted maximization over the unit simplex and unit spheres, plus the
//! exact witness transformations that relate the two.

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{format_decimal, Scalar};
use crate::tensor::{dot, norm, SymTensor, Vector};

/// Floating scalar usable by the optimizers (`f32` or `f64`).
pub trait Real: Scalar + Float {}
impl<T: Scalar + Float> Real for T {}

fn cast<T: Real>(x: f64) -> T {
    T::from(x).expect("f64 -> scalar")
}

pub const DEFAULT_SEED: u64 = 0x5eed_2013;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptConfig {
    pub starts: usize,
    pub max_iters: usize,
    /// Stop once the (tangent) step or gradient falls below this.
    pub step_tol: f64,
    /// Stop once an accepted step improves the value by less than this (relative).
    pub value_tol: f64,
    pub seed: u64,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            starts: 8,
            max_iters: 2000,
            step_tol: 1e-12,
            value_tol: 1e-15,
            seed: DEFAULT_SEED,
        }
    }
}

impl OptConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_starts(mut self, starts: usize) -> Self {
        self.starts = starts;
        self
    }

    /// Independent random stream for one start.
    fn stream(&self, start: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(start as u64);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptReport<T> {
    pub best_value: T,
    pub witness: Vector<T>,
    /// Index into `per_start_values` of the winning start.
    pub best_start: usize,
    pub per_start_values: Vec<T>,
    pub converged: bool,
    pub evaluations: u64,
}

impl<T: Real> OptReport<T> {
    fn trivial(dim: usize) -> Self {
        OptReport {
            best_value: T::zero(),
            witness: Vector::basis(dim, 0),
            best_start: 0,
            per_start_values: vec![T::zero()],
            converged: true,
            evaluations: 0,
        }
    }

    /// Merge by maximum value, ties to the lowest start index.
    fn from_runs(runs: Vec<Run<T>>) -> Self {
        let mut best = 0;
        for (i, r) in runs.iter().enumerate() {
            if r.value > runs[best].value {
                best = i;
            }
        }
        let evaluations = runs.iter().map(|r| r.evaluations).sum();
        let per_start_values = runs.iter().map(|r| r.value).collect();
        let winner = &runs[best];
        OptReport {
            best_value: winner.value,
            witness: Vector::new(winner.point.clone()),
            best_start: best,
            per_start_values,
            converged: winner.converged,
            evaluations,
        }
    }

    pub fn to_json(&self) -> OptReportJson {
        let dec = |x: T| format_decimal(x.to_f64().unwrap_or(f64::NAN));
        OptReportJson {
            best_value: dec(self.best_value),
            witness: self.witness.iter().map(|&x| dec(x)).collect(),
            best_start: self.best_start,
            per_start_values: self.per_start_values.iter().map(|&x| dec(x)).collect(),
            converged: self.converged,
            evaluations: self.evaluations,
        }
    }
}

/// Serialized [`OptReport`]; reals as 17-significant-digit decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OptReportJson {
    pub best_value: String,
    pub witness: Vec<String>,
    pub best_start: usize,
    pub per_start_values: Vec<String>,
    pub converged: bool,
    pub evaluations: u64,
}

struct Run<T> {
    value: T,
    point: Vec<T>,
    converged: bool,
    evaluations: u64,
}

/// Where to start the multistart ascent on the sphere.
#[derive(Debug, Clone)]
pub struct StartPlan<T> {
    /// Explicit starting points, tried first (start indices `0..warm.len()`).
    pub warm: Vec<Vec<T>>,
    /// Draw random starts from the nonnegative orthant.
    pub nonnegative: bool,
}

/// Maximizes `sum x_i x_j` over the unit simplex, with the sum taken over the
/// edges of `g` (`over_edges`) or over its non-edges.
///
/// Replicator dynamics from random interior points, plus one start at the
/// uniform distribution over a maximum clique (or stable set).
pub fn max_quadratic_simplex<T: Real>(
    g: &Graph,
    over_edges: bool,
    cfg: &OptConfig,
) -> Result<OptReport<T>> {
    let n = g.n();
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    let pairs: Vec<(usize, usize)> = if over_edges {
        g.edges().to_vec()
    } else {
        g.complement().edges().to_vec()
    };
    if pairs.is_empty() {
        return Ok(OptReport::trivial(n));
    }
    let mut nbrs = vec![Vec::new(); n];
    for &(i, j) in &pairs {
        nbrs[i].push(j);
        nbrs[j].push(i);
    }
    let objective = |x: &[T]| {
        pairs
            .iter()
            .fold(T::zero(), |acc, &(i, j)| acc + x[i] * x[j])
    };
    let support = if over_edges {
        g.max_clique()
    } else {
        g.max_stable_set()
    };
    let mut starts: Vec<Vec<T>> = Vec::with_capacity(cfg.starts + 1);
    let mut uniform = vec![T::zero(); n];
    let weight = T::one() / cast(support.len() as f64);
    for &v in &support {
        uniform[v] = weight;
    }
    starts.push(uniform);
    for s in 0..cfg.starts {
        let mut rng = cfg.stream(s + 1);
        let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        starts.push(raw.iter().map(|&r| cast(r / total)).collect());
    }

    let runs = starts
        .into_iter()
        .map(|mut x| {
            let mut value = objective(&x);
            let mut evaluations = 1;
            let mut converged = false;
            let mut next = vec![T::zero(); n];
            for _ in 0..cfg.max_iters {
                // (Ax)_i with A the 0/1 adjacency of the summand pairs
                let twice = value + value;
                if twice <= T::zero() {
                    break;
                }
                for i in 0..n {
                    let ax = nbrs[i].iter().fold(T::zero(), |acc, &j| acc + x[j]);
                    next[i] = x[i] * ax / twice;
                }
                let total = next.iter().fold(T::zero(), |acc, &v| acc + v);
                for v in next.iter_mut() {
                    *v = *v / total;
                }
                let new_value = objective(&next);
                evaluations += 1;
                let moved = x
                    .iter()
                    .zip(&next)
                    .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
                let gain = new_value - value;
                if new_value >= value {
                    std::mem::swap(&mut x, &mut next);
                    value = new_value;
                }
                if moved <= cast(cfg.step_tol)
                    || gain.abs() <= cast::<T>(cfg.value_tol) * value.abs().max(T::one())
                {
                    converged = true;
                    break;
                }
            }
            Run {
                value,
                point: x,
                converged,
                evaluations,
            }
        })
        .collect();
    Ok(OptReport::from_runs(runs))
}

/// Multistart maximization of `A(h, ..., h)` over the unit sphere.
pub fn max_form_sphere<T: Real>(a: &SymTensor, cfg: &OptConfig) -> Result<OptReport<T>> {
    max_form_sphere_with(a, cfg, &StartPlan::default())
}

/// As [`max_form_sphere`] with caller-supplied warm starts.
///
/// Each start runs normalized Riemannian gradient ascent: step along the
/// tangent gradient, retract by normalization, halve the step on failure and
/// grow it after success.
pub fn max_form_sphere_with<T: Real>(
    a: &SymTensor,
    cfg: &OptConfig,
    plan: &StartPlan<T>,
) -> Result<OptReport<T>> {
    let n = a.dim();
    for w in &plan.warm {
        if w.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: w.len(),
            });
        }
    }
    if a.is_zero() {
        return Ok(OptReport::trivial(n));
    }
    let mut starts: Vec<Vec<T>> = plan.warm.clone();
    for s in 0..cfg.starts {
        let mut rng = cfg.stream(plan.warm.len() + s);
        let p: Vec<T> = (0..n)
            .map(|_| {
                let z: f64 = rng.sample(StandardNormal);
                cast(if plan.nonnegative { z.abs() } else { z })
            })
            .collect();
        starts.push(p);
    }
    let runs = starts
        .into_iter()
        .map(|p| sphere_ascent(a, p, cfg))
        .collect();
    Ok(OptReport::from_runs(runs))
}

impl<T> Default for StartPlan<T> {
    fn default() -> Self {
        StartPlan {
            warm: Vec::new(),
            nonnegative: false,
        }
    }
}

fn normalize<T: Real>(v: &mut [T]) -> bool {
    let nv = norm(v);
    if nv <= T::zero() || !nv.is_finite() {
        return false;
    }
    for x in v.iter_mut() {
        *x = *x / nv;
    }
    true
}

fn sphere_ascent<T: Real>(a: &SymTensor, mut h: Vec<T>, cfg: &OptConfig) -> Run<T> {
    let n = h.len();
    if !normalize(&mut h) {
        h = Vector::<T>::basis(n, 0).into_inner();
    }
    let mut value = a.eval_unchecked(&h);
    let mut evaluations = 1;
    let mut converged = false;
    let mut step: T = cast(0.5);
    let mut g = vec![T::zero(); n];
    let mut cand = vec![T::zero(); n];
    // tolerances relative to ||A|| keep the path invariant under rescaling A
    let scale: T = cast(a.frobenius());
    let step_tol: T = cast::<T>(cfg.step_tol) * scale;
    let value_tol: T = cast::<T>(cfg.value_tol) * scale;
    let min_step: T = cast(1e-30);
    'outer: for _ in 0..cfg.max_iters {
        a.grad_into(&h, &mut g);
        let radial = dot(&g, &h);
        for (gi, &hi) in g.iter_mut().zip(&h) {
            *gi = *gi - radial * hi;
        }
        let gnorm = norm(&g);
        if gnorm <= step_tol {
            converged = true;
            break;
        }
        loop {
            for ((c, &hi), &gi) in cand.iter_mut().zip(&h).zip(&g) {
                *c = hi + step * (gi / gnorm);
            }
            normalize(&mut cand);
            let cv = a.eval_unchecked(&cand);
            evaluations += 1;
            if cv > value {
                let gain = cv - value;
                std::mem::swap(&mut h, &mut cand);
                value = cv;
                step = (step + step).min(T::one());
                if gain <= value_tol {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            step = step / cast(2.0);
            if step < min_step {
                converged = true;
                break 'outer;
            }
        }
    }
    Run {
        value,
        point: h,
        converged,
        evaluations,
    }
}

/// Grid evaluations beyond this are refused by [`grid_certified_max`].
pub const MAX_GRID_POINTS: u64 = 1 << 24;
pub const MAX_GRID_DIM: usize = 5;

/// Net geometry for covering radius `resolution` on S^{n-1}.
fn grid_axis_points(dim: usize, resolution: f64) -> u64 {
    (((dim - 1) as f64).sqrt() / resolution).ceil() as u64 + 1
}

/// Number of form evaluations [`grid_certified_max`] performs.
pub fn grid_cost(dim: usize, resolution: f64) -> u64 {
    if dim <= 1 {
        return 1;
    }
    let k = grid_axis_points(dim, resolution);
    k.saturating_pow(dim as u32 - 1).saturating_mul(dim as u64)
}

/// Sound upper bound on max over unit h of |A(h, ..., h)| for small `dim`.
///
/// The net is the grid of spacing `s` on the faces `x_i = 1` of the cube,
/// radially projected to the sphere. Antipodal faces are skipped because
/// |A(-h)| = |A(h)|. The projection onto the unit ball is nonexpansive, so
/// the net has covering radius at most `(s/2) sqrt(n-1) <= resolution`. The
/// form is `order * frobenius(A)`-Lipschitz on the ball, which gives the slack.
pub fn grid_certified_max(a: &SymTensor, resolution: f64) -> Result<f64> {
    let n = a.dim();
    if n > MAX_GRID_DIM {
        return Err(Error::TooLarge(format!(
            "grid certificate supports dim <= {MAX_GRID_DIM}, got {n}"
        )));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(Error::NonPositive {
            name: "resolution",
            value: resolution.to_string(),
        });
    }
    if a.is_zero() {
        return Ok(0.0);
    }
    if n == 1 {
        let v: f64 = a.eval_unchecked(&[1.0]);
        return Ok(v.abs());
    }
    let cost = grid_cost(n, resolution);
    if cost > MAX_GRID_POINTS {
        return Err(Error::TooLarge(format!(
            "grid with resolution {resolution} in dim {n} needs {cost} evaluations"
        )));
    }
    let k = grid_axis_points(n, resolution);
    let spacing = 2.0 / (k - 1) as f64;
    let covering = spacing / 2.0 * ((n - 1) as f64).sqrt();
    let lipschitz = a.order() as f64 * a.frobenius();
    let d = a.order() as i32;

    let mut best = 0.0_f64;
    let mut counter = vec![0u64; n - 1];
    let mut point = vec![0.0; n];
    for face in 0..n {
        counter.iter_mut().for_each(|c| *c = 0);
        loop {
            let mut slot = 0;
            for (axis, p) in point.iter_mut().enumerate() {
                if axis == face {
                    *p = 1.0;
                } else {
                    *p = -1.0 + spacing * counter[slot] as f64;
                    slot += 1;
                }
            }
            let r = norm(&point);
            let v: f64 = a.eval_unchecked(&point);
            best = best.max(v.abs() / r.powi(d));
            // odometer increment
            let mut carry = 0;
            while carry < counter.len() {
                counter[carry] += 1;
                if counter[carry] < k {
                    break;
                }
                counter[carry] = 0;
                carry += 1;
            }
            if carry == counter.len() {
                break;
            }
        }
    }
    Ok(best + lipschitz * covering)
}

/// Cauchy-Schwarz equality coupling: `w_ij = u_i u_j / alpha` over the edges of
/// `g` in edge order, with `alpha = (sum u_i^2 u_j^2)^(1/2)`.
pub fn couple_w_from_u<T: Real>(u: &[T], g: &Graph) -> Result<Vector<T>> {
    if u.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: u.len(),
        });
    }
    let products: Vec<T> = g.edges().iter().map(|&(i, j)| u[i] * u[j]).collect();
    let alpha = norm(&products);
    if alpha == T::zero() {
        return Err(Error::NoEdgeSupport);
    }
    Ok(Vector::new(products.into_iter().map(|p| p / alpha).collect()))
}

/// Maximizer of `beta * sqrt(1 - beta)` on (0, 1).
pub const BETA_SPLIT: f64 = 2.0 / 3.0;

pub fn beta_split_value(beta: f64) -> f64 {
    beta * (1.0 - beta).sqrt()
}

/// Merges unit `u` and unit `w` into `(sqrt(beta) u, sqrt(1 - beta) w)` with
/// `beta = 2/3`; any form `sum u_i u_j w_ij` scales by `2 / (3 sqrt 3)`.
pub fn split_to_joint_sphere<T: Real>(u: &[T], w: &[T]) -> Result<Vector<T>> {
    let tol: T = cast(1e-10);
    for v in [u, w] {
        let nv = norm(v);
        if (nv - T::one()).abs() > tol {
            return Err(Error::NotUnit(nv.to_f64().unwrap_or(f64::NAN)));
        }
    }
    let su: T = cast(BETA_SPLIT.sqrt());
    let sw: T = cast((1.0 - BETA_SPLIT).sqrt());
    Ok(Vector::new(
        u.iter()
            .map(|&x| x * su)
            .chain(w.iter().map(|&x| x * sw))
            .collect(),
    ))
}
