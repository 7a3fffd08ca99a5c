//! Clique-to-tensor gadgets and the point-models of f at the origin.
//!
//! Cubic model on R^{n+m}: `f(x) = (gamma/2) x'x + (1/6) A_G(x,x,x)` with one
//! orbit `(i, j, n+k)` of value 1/6 per edge `e_k = {i, j}`, so that
//! `A_G(h,h,h) = sum_{ij in E} u_i u_j w_ij`, `hess f(0) = gamma I` and
//! `D^3 f(0) = A_G`. Quartic model on R^n: `f(x) = (gamma/2) x'x + (1/24)
//! A_G(x,x,x,x)` with one orbit `(i, i, j, j)` of value 1/6 per edge, so that
//! `A_G(h,h,h,h) = sum_{ij in E} h_i^2 h_j^2`.
//!
//! Only `gamma^3` (cubic) or `gamma^2` (quartic) is ever stored, which keeps
//! every threshold exact in Q.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format;
use crate::graph::Graph;
use crate::optimize::{couple_w_from_u, split_to_joint_sphere};
use crate::scalar::{format_rational, parse_rational, ratio, Rational};
use crate::tensor::{SymTensor, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Cubic,
    Quartic,
}

impl InstanceKind {
    pub fn order(self) -> usize {
        match self {
            InstanceKind::Cubic => 3,
            InstanceKind::Quartic => 4,
        }
    }

    /// Power of gamma that is stored: 3 for cubic, 2 for quartic.
    pub fn gamma_exponent(self) -> u32 {
        match self {
            InstanceKind::Cubic => 3,
            InstanceKind::Quartic => 2,
        }
    }

    /// `4 sigma` or `6 tau`: threshold = factor * parameter * gamma^p.
    fn threshold_factor(self) -> Rational {
        match self {
            InstanceKind::Cubic => ratio(4, 1),
            InstanceKind::Quartic => ratio(6, 1),
        }
    }

    pub fn parameter_name(self) -> &'static str {
        match self {
            InstanceKind::Cubic => "sigma",
            InstanceKind::Quartic => "tau",
        }
    }
}

/// A CLIQUE question: does `graph` contain a clique of size `k`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueInstance {
    graph: Graph,
    k: usize,
}

impl CliqueInstance {
    pub fn new(graph: Graph, k: usize) -> Result<Self> {
        check_graph(&graph)?;
        if k < 2 {
            return Err(Error::CliqueSizeTooSmall { k, min: 2 });
        }
        Ok(CliqueInstance { graph, k })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn answer(&self) -> bool {
        self.graph.has_clique(self.k)
    }
}

/// Point-model of f at x = 0: the self-concordance condition at the origin is
/// `[A(h,h,h)]^2 <= q [h'h]^3` (cubic) or `A(h,h,h,h) <= q [h'h]^2` (quartic).
#[derive(Debug, Clone, PartialEq)]
pub struct ConcordanceInstance {
    kind: InstanceKind,
    tensor: SymTensor,
    gamma_power: Rational,
    parameter: Rational,
    q: Rational,
    provenance: Option<CliqueInstance>,
}

impl ConcordanceInstance {
    /// Generic point-model from a tensor, the parameter (sigma or tau) and the
    /// stored power of gamma.
    pub fn new(
        kind: InstanceKind,
        tensor: SymTensor,
        parameter: Rational,
        gamma_power: Rational,
    ) -> Result<Self> {
        if tensor.order() != kind.order() {
            return Err(Error::WrongKind {
                expected: match kind {
                    InstanceKind::Cubic => "order-3 tensor",
                    InstanceKind::Quartic => "order-4 tensor",
                },
            });
        }
        positive(kind.parameter_name(), &parameter)?;
        positive("gamma power", &gamma_power)?;
        let q = kind.threshold_factor() * &parameter * &gamma_power;
        Ok(ConcordanceInstance {
            kind,
            tensor,
            gamma_power,
            parameter,
            q,
            provenance: None,
        })
    }

    pub fn kind(&self) -> InstanceKind {
        self.kind
    }

    pub fn tensor(&self) -> &SymTensor {
        &self.tensor
    }

    pub fn gamma_power(&self) -> &Rational {
        &self.gamma_power
    }

    pub fn parameter(&self) -> &Rational {
        &self.parameter
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn provenance(&self) -> Option<&CliqueInstance> {
        self.provenance.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// `gamma^p I`, a positive multiple of the model Hessian `gamma I` at 0.
    pub fn hessian_proxy(&self) -> SymTensor {
        let n = self.tensor.dim();
        SymTensor::from_entries(2, n, (0..n).map(|i| (vec![i, i], self.gamma_power.clone())))
            .expect("diagonal hessian")
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson {
            kind: self.kind,
            graph: self.provenance.as_ref().map(|p| GraphJson::from(p.graph())),
            tensor: format::to_text(&self.tensor),
            q: format_rational(&self.q),
            gamma_power: format_rational(&self.gamma_power),
            parameter: ParameterJson {
                name: self.kind.parameter_name().to_string(),
                value: format_rational(&self.parameter),
            },
            provenance: self.provenance.as_ref().map(|p| ProvenanceJson { k: p.k() }),
        }
    }

    /// Rebuilds an instance, re-deriving the tensor and threshold to reject
    /// inconsistent files.
    pub fn from_json(j: &InstanceJson) -> Result<Self> {
        let parameter = parse_rational(&j.parameter.value)?;
        let gamma_power = parse_rational(&j.gamma_power)?;
        let q = parse_rational(&j.q)?;
        let inst = match (&j.graph, &j.provenance) {
            (Some(g), Some(p)) => {
                let graph = g.to_graph()?;
                let built = match j.kind {
                    InstanceKind::Cubic => build_cubic_instance(&graph, p.k, &parameter)?,
                    InstanceKind::Quartic => build_quartic_instance(&graph, p.k, &parameter)?,
                };
                if built.tensor != format::from_text(&j.tensor)? || built.gamma_power != gamma_power {
                    return Err(Error::Json("tensor or gamma power disagrees with graph provenance".into()));
                }
                built
            }
            (None, None) => {
                let tensor = format::from_text(&j.tensor)?;
                ConcordanceInstance::new(j.kind, tensor, parameter, gamma_power)?
            }
            _ => return Err(Error::Json("graph and provenance must appear together".into())),
        };
        if inst.q != q {
            return Err(Error::Json(format!(
                "q = {} does not match parameter and gamma power (expected {})",
                j.q,
                format_rational(&inst.q)
            )));
        }
        Ok(inst)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub kind: InstanceKind,
    pub graph: Option<GraphJson>,
    pub tensor: String,
    pub q: String,
    pub gamma_power: String,
    pub parameter: ParameterJson,
    pub provenance: Option<ProvenanceJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    /// 1-based, lexicographic.
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

impl GraphJson {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for &[i, j] in &self.edges {
            if i == 0 || j == 0 {
                return Err(Error::VertexOutOfRange { vertex: 0, n: self.n });
            }
            edges.push((i - 1, j - 1));
        }
        Graph::new(self.n, edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParameterJson {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceJson {
    pub k: usize,
}

fn positive(name: &'static str, r: &Rational) -> Result<()> {
    if !r.is_positive() {
        return Err(Error::NonPositive {
            name,
            value: format_rational(r),
        });
    }
    Ok(())
}

fn check_graph(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::TooFewVertices(g.n()));
    }
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    Ok(())
}

/// `1 - 1/(k-1)`, requires k >= 2.
fn clique_gap(k: usize) -> Result<Rational> {
    if k < 2 {
        return Err(Error::CliqueSizeTooSmall { k, min: 2 });
    }
    Ok(Rational::one() - ratio(1, k as i64 - 1))
}

/// Cubic gadget on R^{n+m}, coordinates `(u_1..u_n, w_e1..w_em)`.
pub fn build_cubic_tensor(g: &Graph) -> Result<SymTensor> {
    check_graph(g)?;
    let n = g.n();
    let entries = g
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| (vec![i, j, n + k], ratio(1, 6)));
    SymTensor::from_entries(3, n + g.m(), entries)
}

/// Quartic gadget on R^n.
pub fn build_quartic_tensor(g: &Graph) -> Result<SymTensor> {
    check_graph(g)?;
    let entries = g.edges().iter().map(|&(i, j)| (vec![i, i, j, j], ratio(1, 6)));
    SymTensor::from_entries(4, g.n(), entries)
}

/// `q = (2/27)(1 - 1/(k-1))`.
pub fn cubic_threshold(k: usize) -> Result<Rational> {
    Ok(ratio(2, 27) * clique_gap(k)?)
}

/// `q = (1/2)(1 - 1/(k-1))`.
pub fn quartic_threshold(k: usize) -> Result<Rational> {
    Ok(ratio(1, 2) * clique_gap(k)?)
}

/// `gamma^3 = (1/27) (1/(2 sigma)) (1 - 1/(k-1))`, so that `4 sigma gamma^3`
/// equals [`cubic_threshold`].
pub fn gamma_cubed_from_sigma(sigma: &Rational, k: usize) -> Result<Rational> {
    positive("sigma", sigma)?;
    let g3 = ratio(1, 27) / (ratio(2, 1) * sigma) * clique_gap(k)?;
    if g3.is_zero() {
        return Err(Error::CliqueSizeTooSmall { k, min: 3 });
    }
    Ok(g3)
}

/// `gamma^2 = (1/(12 tau)) (1 - 1/(k-1))`, so that `6 tau gamma^2` equals
/// [`quartic_threshold`].
pub fn gamma_squared_from_tau(tau: &Rational, k: usize) -> Result<Rational> {
    positive("tau", tau)?;
    let g2 = Rational::one() / (ratio(12, 1) * tau) * clique_gap(k)?;
    if g2.is_zero() {
        return Err(Error::CliqueSizeTooSmall { k, min: 3 });
    }
    Ok(g2)
}

pub fn build_cubic_instance(g: &Graph, k: usize, sigma: &Rational) -> Result<ConcordanceInstance> {
    if k < 3 {
        return Err(Error::CliqueSizeTooSmall { k, min: 3 });
    }
    let gamma3 = gamma_cubed_from_sigma(sigma, k)?;
    let mut inst = ConcordanceInstance::new(
        InstanceKind::Cubic,
        build_cubic_tensor(g)?,
        sigma.clone(),
        gamma3,
    )?;
    debug_assert_eq!(inst.q, cubic_threshold(k)?);
    inst.provenance = Some(CliqueInstance::new(g.clone(), k)?);
    Ok(inst)
}

pub fn build_quartic_instance(g: &Graph, k: usize, tau: &Rational) -> Result<ConcordanceInstance> {
    if k < 3 {
        return Err(Error::CliqueSizeTooSmall { k, min: 3 });
    }
    let gamma2 = gamma_squared_from_tau(tau, k)?;
    let mut inst = ConcordanceInstance::new(
        InstanceKind::Quartic,
        build_quartic_tensor(g)?,
        tau.clone(),
        gamma2,
    )?;
    debug_assert_eq!(inst.q, quartic_threshold(k)?);
    inst.provenance = Some(CliqueInstance::new(g.clone(), k)?);
    Ok(inst)
}

fn check_clique(g: &Graph, clique: &[usize]) -> Result<()> {
    if clique.len() < 2 || !g.is_clique(clique) {
        return Err(Error::NotAClique);
    }
    Ok(())
}

/// Unit maximizer of the cubic gadget built from a clique `C`: `x_i = 1/|C|`
/// on the simplex, `u_i = sqrt(x_i)`, the Cauchy-Schwarz coupling
/// `w = u_i u_j / alpha`, then the `beta = 2/3` split onto S^{n+m-1}.
///
/// `[A_G(h,h,h)]^2 = (2/27)(1 - 1/|C|)`, the maximum when `C` is maximum.
pub fn witness_from_clique(g: &Graph, clique: &[usize]) -> Result<Vector<f64>> {
    check_clique(g, clique)?;
    let mut u = vec![0.0; g.n()];
    let c = clique.len() as f64;
    for &v in clique {
        u[v] = (1.0 / c).sqrt();
    }
    let w = couple_w_from_u(&u, g)?;
    split_to_joint_sphere(&u, &w)
}

/// Unit maximizer of the quartic gadget: `h_i = 1/sqrt|C|` on the clique.
pub fn quartic_witness_from_clique(g: &Graph, clique: &[usize]) -> Result<Vector<f64>> {
    check_clique(g, clique)?;
    let mut h = vec![0.0; g.n()];
    let c = clique.len() as f64;
    for &v in clique {
        h[v] = (1.0 / c).sqrt();
    }
    Ok(Vector::new(h))
}

/// `max_{|h|=1} [A_G(h,h,h)]^2 = (2/27)(1 - 1/omega(G))`, from the exact clique oracle.
pub fn true_max_square(g: &Graph) -> Result<Rational> {
    check_graph(g)?;
    Ok(ratio(2, 27) * (Rational::one() - ratio(1, g.clique_number() as i64)))
}

/// `max_{|h|=1} A_G(h,h,h,h) = (1/2)(1 - 1/omega(G))`.
pub fn true_max_quartic(g: &Graph) -> Result<Rational> {
    check_graph(g)?;
    Ok(ratio(1, 2) * (Rational::one() - ratio(1, g.clique_number() as i64)))
}
