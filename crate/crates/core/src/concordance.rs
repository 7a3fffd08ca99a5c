//! Sound three-valued checks of self-concordance (cubic) and second-order
//! self-concordance (quartic) at the origin.
//!
//! A NOT verdict always carries a rational direction that violates the
//! inequality under exact arithmetic. A SELF_CONCORDANT verdict carries a
//! sound upper bound (relax, grid) or the exact clique oracle value (oracle).
//! Anything else is UNDECIDED.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::optimize::{
    grid_certified_max, grid_cost, max_form_sphere, max_form_sphere_with, OptConfig, OptReport,
    StartPlan, MAX_GRID_DIM,
};
use crate::reduction::{
    build_cubic_instance, quartic_witness_from_clique, true_max_quartic, true_max_square,
    witness_from_clique, ConcordanceInstance, InstanceKind,
};
use crate::scalar::{
    default_denominator_bound, format_decimal, format_rational, rational_to_f64, rationalize,
    Rational,
};
use crate::tensor::SymTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    SelfConcordant,
    NotSelfConcordant,
    Undecided,
}

impl Status {
    /// CLI exit code: 0, 1 or 2.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::SelfConcordant => 0,
            Status::NotSelfConcordant => 1,
            Status::Undecided => 2,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::SelfConcordant => "SELF_CONCORDANT",
            Status::NotSelfConcordant => "NOT_SELF_CONCORDANT",
            Status::Undecided => "UNDECIDED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Relax,
    Grid,
    Oracle,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Relax => "relax",
            Mode::Grid => "grid",
            Mode::Oracle => "oracle",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "relax" => Ok(Mode::Relax),
            "grid" => Ok(Mode::Grid),
            "oracle" => Ok(Mode::Oracle),
            other => Err(Error::Json(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(Rational),
    Approx(f64),
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(r) => f.write_str(&format_rational(r)),
            BoundValue::Approx(x) => f.write_str(&format_decimal(*x)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Rational direction violating the inequality exactly.
    Witness(Vec<Rational>),
    /// Upper bound on the normalized form that satisfies the inequality.
    Bound { name: String, value: BoundValue },
    /// What was tried before giving up.
    Budget(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub mode: Mode,
    pub certificate: Certificate,
    pub evaluations: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub status: Status,
    pub mode: Mode,
    pub certificate: CertificateJson,
    pub evaluations: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundJson {
    pub name: String,
    pub value: String,
}

impl Verdict {
    pub fn to_json(&self) -> VerdictJson {
        let certificate = match &self.certificate {
            Certificate::Witness(h) => CertificateJson {
                kind: "witness".into(),
                witness: Some(h.iter().map(format_rational).collect()),
                bound: None,
                budget: None,
            },
            Certificate::Bound { name, value } => CertificateJson {
                kind: "bound".into(),
                witness: None,
                bound: Some(BoundJson {
                    name: name.clone(),
                    value: value.to_string(),
                }),
                budget: None,
            },
            Certificate::Budget(b) => CertificateJson {
                kind: "budget".into(),
                witness: None,
                bound: None,
                budget: Some(b.clone()),
            },
        };
        VerdictJson {
            status: self.status,
            mode: self.mode,
            certificate,
            evaluations: self.evaluations,
            seed: self.seed,
        }
    }

    pub fn to_text(&self) -> String {
        let cert = match &self.certificate {
            Certificate::Witness(h) => format!(
                "witness [{}]",
                h.iter().map(format_rational).collect::<Vec<_>>().join(", ")
            ),
            Certificate::Bound { name, value } => format!("bound {name} = {value}"),
            Certificate::Budget(b) => format!("budget {b}"),
        };
        format!(
            "status: {}\nmode: {}\ncertificate: {}\nevaluations: {}\nseed: {}\n",
            self.status, self.mode, cert, self.evaluations, self.seed
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub opt: OptConfig,
    /// Coarsest grid covering radius tried in grid mode; halved until the
    /// budget is spent.
    pub grid_resolution: f64,
    pub grid_budget: u64,
    pub denominator_bound: BigInt,
    /// Relative band around q inside which numeric bounds do not certify.
    pub band: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            opt: OptConfig::default(),
            grid_resolution: 0.1,
            grid_budget: 2_000_000,
            denominator_bound: default_denominator_bound(),
            band: 1e-9,
        }
    }
}

impl CheckOptions {
    pub fn with_opt(opt: OptConfig) -> Self {
        CheckOptions {
            opt,
            ..Default::default()
        }
    }
}

/// Positive semidefiniteness of a symmetric matrix by diagonally pivoted
/// elimination, with tolerance `1e-12 * ||H||_F`.
pub fn hessian_psd(h: &SymTensor) -> Result<bool> {
    if h.order() != 2 {
        return Err(Error::UnsupportedOrder(h.order()));
    }
    let n = h.dim();
    let mut m = vec![vec![0.0_f64; n]; n];
    for (idx, v) in h.entries() {
        let x = rational_to_f64(v);
        m[idx[0]][idx[1]] = x;
        m[idx[1]][idx[0]] = x;
    }
    let tol = 1e-12 * h.frobenius();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, &p) = active
            .iter()
            .enumerate()
            .max_by(|a, b| m[*a.1][*a.1].total_cmp(&m[*b.1][*b.1]))
            .unwrap();
        let pivot = m[p][p];
        if pivot <= tol {
            // remaining block must vanish
            return Ok(active
                .iter()
                .all(|&i| active.iter().all(|&j| m[i][j].abs() <= tol)));
        }
        active.swap_remove(pos);
        for &i in &active {
            let f = m[i][p] / pivot;
            for &j in &active {
                m[i][j] -= f * m[p][j];
            }
        }
    }
    Ok(true)
}

fn dot_exact(h: &[Rational]) -> Rational {
    h.iter().fold(Rational::zero(), |acc, x| acc + x * x)
}

/// Exact test of the violated inequality at a rational direction:
/// `A(h,h,h)^2 > q (h'h)^3` (cubic) or `A(h,h,h,h) > q (h'h)^2` (quartic).
pub fn violates(inst: &ConcordanceInstance, h: &[Rational]) -> Result<bool> {
    let value: Rational = inst.tensor().eval_form(h)?;
    let nn = dot_exact(h);
    Ok(match inst.kind() {
        InstanceKind::Cubic => &value * &value > inst.q() * &nn * &nn * &nn,
        InstanceKind::Quartic => value > inst.q() * &nn * &nn,
    })
}

fn rationalize_vec(h: &[f64], bound: &BigInt) -> Option<Vec<Rational>> {
    h.iter().map(|&x| rationalize(x, bound)).collect()
}

/// Normalized quantity compared against q: `U^2` for cubic, `U` for quartic.
fn against_threshold(kind: InstanceKind, u: f64) -> f64 {
    match kind {
        InstanceKind::Cubic => u * u,
        InstanceKind::Quartic => u,
    }
}

fn witness_starts(inst: &ConcordanceInstance) -> StartPlan<f64> {
    match inst.provenance() {
        Some(p) => {
            let g = p.graph();
            let clique = g.max_clique();
            let warm = match inst.kind() {
                InstanceKind::Cubic => witness_from_clique(g, &clique),
                InstanceKind::Quartic => quartic_witness_from_clique(g, &clique),
            };
            StartPlan {
                warm: warm.into_iter().map(|v| v.into_inner()).collect(),
                nonnegative: true,
            }
        }
        None => StartPlan::default(),
    }
}

struct Search {
    witness: Option<Vec<Rational>>,
    evaluations: u64,
}

/// Multistart candidates, best first, each rationalized and checked exactly.
fn search_violation(
    inst: &ConcordanceInstance,
    opts: &CheckOptions,
    plan: &StartPlan<f64>,
) -> Result<Search> {
    let report: OptReport<f64> = max_form_sphere_with(inst.tensor(), &opts.opt, plan)?;
    let mut witness = None;
    if let Some(h) = rationalize_vec(&report.witness, &opts.denominator_bound) {
        if violates(inst, &h)? {
            witness = Some(h);
        }
    }
    Ok(Search {
        witness,
        evaluations: report.evaluations,
    })
}

fn check(inst: &ConcordanceInstance, opts: &CheckOptions, mode: Mode) -> Result<Verdict> {
    if !hessian_psd(&inst.hessian_proxy())? {
        // unreachable for validated instances (gamma > 0)
        return Err(Error::NonPositive {
            name: "gamma power",
            value: format_rational(inst.gamma_power()),
        });
    }
    let seed = opts.opt.seed;
    let verdict = |status, certificate, evaluations| Verdict {
        status,
        mode,
        certificate,
        evaluations,
        seed,
    };

    if mode == Mode::Oracle {
        let prov = inst.provenance().ok_or(Error::MissingProvenance)?;
        let g = prov.graph();
        let exact = match inst.kind() {
            InstanceKind::Cubic => true_max_square(g)?,
            InstanceKind::Quartic => true_max_quartic(g)?,
        };
        if &exact <= inst.q() {
            return Ok(verdict(
                Status::SelfConcordant,
                Certificate::Bound {
                    name: "clique-oracle".into(),
                    value: BoundValue::Exact(exact),
                },
                0,
            ));
        }
        let clique = g.max_clique();
        let analytic = match inst.kind() {
            InstanceKind::Cubic => witness_from_clique(g, &clique)?,
            InstanceKind::Quartic => quartic_witness_from_clique(g, &clique)?,
        };
        if let Some(h) = rationalize_vec(&analytic, &opts.denominator_bound) {
            if violates(inst, &h)? {
                return Ok(verdict(Status::NotSelfConcordant, Certificate::Witness(h), 1));
            }
        }
        let search = search_violation(inst, opts, &witness_starts(inst))?;
        return Ok(match search.witness {
            Some(h) => verdict(Status::NotSelfConcordant, Certificate::Witness(h), search.evaluations),
            None => verdict(
                Status::Undecided,
                Certificate::Budget("oracle exceeds q but no rational witness verified".into()),
                search.evaluations,
            ),
        });
    }

    if mode == Mode::Grid && inst.dim() > MAX_GRID_DIM {
        return Err(Error::TooLarge(format!(
            "grid mode supports dim <= {MAX_GRID_DIM}, got {}",
            inst.dim()
        )));
    }
    let search = search_violation(inst, opts, &witness_starts(inst))?;
    let mut evaluations = search.evaluations;
    if let Some(h) = search.witness {
        return Ok(verdict(Status::NotSelfConcordant, Certificate::Witness(h), evaluations));
    }
    let q = rational_to_f64(inst.q());
    let limit = q * (1.0 - opts.band);
    let certifies = |u: f64| against_threshold(inst.kind(), u) <= limit;
    match mode {
        Mode::Relax => {
            let u = inst.tensor().spectral_upper_bound();
            if certifies(u) {
                return Ok(verdict(
                    Status::SelfConcordant,
                    Certificate::Bound {
                        name: "spectral-upper-bound".into(),
                        value: BoundValue::Approx(u),
                    },
                    evaluations,
                ));
            }
            Ok(verdict(
                Status::Undecided,
                Certificate::Budget(format!(
                    "{} starts x {} iterations; spectral bound {} too weak",
                    opts.opt.starts,
                    opts.opt.max_iters,
                    format_decimal(u)
                )),
                evaluations,
            ))
        }
        Mode::Grid => {
            let mut resolution = opts.grid_resolution;
            let mut tried = None;
            while grid_cost(inst.dim(), resolution) <= opts.grid_budget {
                let u = grid_certified_max(inst.tensor(), resolution)?;
                evaluations += grid_cost(inst.dim(), resolution);
                if certifies(u) {
                    return Ok(verdict(
                        Status::SelfConcordant,
                        Certificate::Bound {
                            name: format!("grid-certified-max@{resolution:e}"),
                            value: BoundValue::Approx(u),
                        },
                        evaluations,
                    ));
                }
                tried = Some((resolution, u));
                if inst.dim() <= 1 {
                    break;
                }
                resolution /= 2.0;
            }
            let detail = match tried {
                Some((r, u)) => format!("finest grid {r:e} bound {}", format_decimal(u)),
                None => "no grid within budget".into(),
            };
            Ok(verdict(
                Status::Undecided,
                Certificate::Budget(format!(
                    "{detail}; grid budget {} evaluations",
                    opts.grid_budget
                )),
                evaluations,
            ))
        }
        Mode::Oracle => unreachable!(),
    }
}

/// Decides `[A(h,h,h)]^2 <= q [h'h]^3` for all h.
pub fn check_sc(inst: &ConcordanceInstance, opts: &CheckOptions, mode: Mode) -> Result<Verdict> {
    if inst.kind() != InstanceKind::Cubic {
        return Err(Error::WrongKind { expected: "cubic" });
    }
    check(inst, opts, mode)
}

/// Decides `A(h,h,h,h) <= q [h'h]^2` for all h.
pub fn check_sc2(inst: &ConcordanceInstance, opts: &CheckOptions, mode: Mode) -> Result<Verdict> {
    if inst.kind() != InstanceKind::Quartic {
        return Err(Error::WrongKind { expected: "quartic" });
    }
    check(inst, opts, mode)
}

/// Bracket on `sigma_opt = ||A||^2 / 4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SigmaBounds {
    pub lower: f64,
    pub upper: f64,
}

pub const SIGMA_GRID_RESOLUTION: f64 = 1e-2;

/// Lower bound from the best multistart value; upper bound from the spectral
/// bound, tightened by the grid certificate when the dimension allows it.
pub fn sigma_opt_bounds(a: &SymTensor, cfg: &OptConfig) -> Result<SigmaBounds> {
    if a.order() != 3 {
        return Err(Error::UnsupportedOrder(a.order()));
    }
    let report: OptReport<f64> = max_form_sphere(a, cfg)?;
    let best = report.best_value.max(0.0);
    let mut norm_upper = a.spectral_upper_bound();
    if a.dim() <= MAX_GRID_DIM {
        if let Ok(g) = grid_certified_max(a, SIGMA_GRID_RESOLUTION) {
            norm_upper = norm_upper.min(g);
        }
    }
    let lower = best * best / 4.0;
    let upper = (norm_upper * norm_upper / 4.0).max(lower);
    Ok(SigmaBounds { lower, upper })
}

/// End-to-end: build the cubic instance for `(g, k, sigma)`, decide it with
/// the oracle, and return `(has_clique(g, k), verdict)`. A clique of size `k`
/// exists exactly when the verdict is NOT_SELF_CONCORDANT.
pub fn decide_clique_via_sc(
    g: &Graph,
    k: usize,
    sigma: &Rational,
    opts: &CheckOptions,
) -> Result<(bool, Verdict)> {
    let inst = build_cubic_instance(g, k, sigma)?;
    let verdict = check_sc(&inst, opts, Mode::Oracle)?;
    Ok((g.has_clique(k), verdict))
}
