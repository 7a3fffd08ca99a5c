mod input;

use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use selfconcord::optimize::{max_quadratic_simplex, StartPlan};
use selfconcord::reduction::{
    build_cubic_instance, build_cubic_tensor, build_quartic_instance, witness_from_clique,
};
use selfconcord::scalar::{format_rational, parse_rational};
use selfconcord::verify::{footnote_demo, run_all, SuiteConfig};
use selfconcord::{
    check_sc, check_sc2, sigma_opt_bounds, CheckOptions, ConcordanceInstance, Graph, InstanceKind, Mode,
    OptConfig, OptReport64, Rational, Verdict,
};

use input::{load_graph, load_problem, load_tensor, Problem};

/// Exit code for usage and input errors; 0-2 are verdicts.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "selfconcord", version, about = "Self-concordance checks and clique reductions for symmetric tensors")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed for the multistart optimizers.
    #[arg(long, global = true, default_value_t = selfconcord::optimize::DEFAULT_SEED)]
    seed: u64,
    /// Random starts per optimization.
    #[arg(long, global = true, default_value_t = 8)]
    starts: usize,
    /// Iteration cap per start.
    #[arg(long, global = true, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Graphs are read from a file, `-` for stdin, or given inline as `K4`, `C5`,
/// `E3` or `n:i-j,i-j` (1-based).
#[derive(Subcommand)]
enum Command {
    /// Clique number and a maximum clique.
    Omega { graph: String },
    /// Stability number and a maximum stable set.
    Alpha { graph: String },
    /// Compare the simplex quadratic maximum with (1 - 1/omega)/2.
    MsCheck {
        graph: String,
        /// Largest acceptable gap.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Compare (27/2) max A_G(h,h,h)^2 on the sphere with 1 - 1/omega.
    NesterovCheck {
        graph: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Both sides of the cited and corrected stability expressions on 3 vertices, 1 edge.
    FootnoteDemo,
    /// Build the concordance instance for (G, k): cubic with --sigma, quartic with --tau.
    Reduce {
        graph: String,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        param: Param,
    },
    /// Decide the cubic inequality A(h,h,h)^2 <= q |h|^6.
    CheckSc(CheckArgs),
    /// Decide the quartic inequality A(h,h,h,h) <= q |h|^4.
    CheckSc2(CheckArgs),
    /// Bracket sigma_opt = max A(h,h,h)^2 / 4 for an order-3 tensor.
    SigmaOpt { tensor: String },
    /// Run the full verification suite.
    VerifyAll {
        /// Largest vertex count in the exhaustive graph families.
        #[arg(long, default_value_t = 5)]
        max_n: usize,
        /// Override every criterion tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Args)]
struct Param {
    /// Cubic parameter, `p/q` or an integer.
    #[arg(long, conflicts_with = "tau")]
    sigma: Option<String>,
    /// Quartic parameter, `p/q` or an integer.
    #[arg(long)]
    tau: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    /// Instance JSON, tensor (text or JSON), or graph.
    input: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Relax)]
    mode: ModeArg,
    /// Clique size, when the input is a graph.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    param: Param,
    /// Stored gamma^3 (cubic) or gamma^2 (quartic), when the input is a bare tensor.
    #[arg(long)]
    gamma_power: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Relax,
    Grid,
    Oracle,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Relax => Mode::Relax,
            ModeArg::Grid => Mode::Grid,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

impl Global {
    fn opt(&self) -> OptConfig {
        OptConfig {
            starts: self.starts,
            max_iters: self.max_iters,
            seed: self.seed,
            ..Default::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn emit(format: Format, text: String, value: serde_json::Value) -> Result<()> {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value)?),
    }
    Ok(())
}

fn one_based(vs: &[usize]) -> Vec<usize> {
    vs.iter().map(|v| v + 1).collect()
}

fn join(vs: &[usize]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn parse_param(name: &str, s: &str) -> Result<Rational> {
    parse_rational(s).with_context(|| format!("--{name} {s}"))
}

fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    let opt = g.opt();
    match &cli.command {
        Command::Omega { graph } => {
            let graph = load_graph(graph)?;
            let c = one_based(&graph.max_clique());
            emit(
                g.format,
                format!("omega {}\nclique {}", c.len(), join(&c)),
                json!({ "omega": c.len(), "clique": c }),
            )?;
        }
        Command::Alpha { graph } => {
            let graph = load_graph(graph)?;
            let s = one_based(&graph.max_stable_set());
            emit(
                g.format,
                format!("alpha {}\nstable_set {}", s.len(), join(&s)),
                json!({ "alpha": s.len(), "stable_set": s }),
            )?;
        }
        Command::MsCheck { graph, tol } => {
            let graph = load_graph(graph)?;
            return ms_check(&graph, *tol, &opt, g.format);
        }
        Command::NesterovCheck { graph, tol } => {
            let graph = load_graph(graph)?;
            return nesterov_check(&graph, *tol, &opt, g.format);
        }
        Command::FootnoteDemo => {
            let d = footnote_demo(&opt)?;
            emit(
                g.format,
                format!(
                    "graph 3 vertices, edge 1-2, alpha {}\nmax_non_edge_form {:.12}\ncited     sqrt(1-1/alpha) = {:.12}   3 sqrt(3) max = {:.12}   mismatch {:.12}\ncorrected 1-1/alpha       = {:.12}   (27/2) max^2  = {:.12}   mismatch {:.3e}",
                    d.alpha,
                    d.max_value,
                    d.cited_lhs,
                    d.cited_rhs,
                    (d.cited_lhs - d.cited_rhs).abs(),
                    d.corrected_lhs,
                    d.corrected_rhs,
                    (d.corrected_lhs - d.corrected_rhs).abs()
                ),
                json!({
                    "alpha": d.alpha,
                    "max_value": d.max_value,
                    "cited": { "lhs": d.cited_lhs, "rhs": d.cited_rhs },
                    "corrected": { "lhs": d.corrected_lhs, "rhs": d.corrected_rhs },
                }),
            )?;
        }
        Command::Reduce { graph, k, param } => {
            let graph = load_graph(graph)?;
            let inst = match (&param.sigma, &param.tau) {
                (Some(s), None) => build_cubic_instance(&graph, *k, &parse_param("sigma", s)?)?,
                (None, Some(t)) => build_quartic_instance(&graph, *k, &parse_param("tau", t)?)?,
                _ => bail!("reduce needs exactly one of --sigma (cubic) or --tau (quartic)"),
            };
            // instances are always JSON: they are meant to be fed back to check-sc
            println!("{}", serde_json::to_string_pretty(&inst.to_json())?);
        }
        Command::CheckSc(args) => return check(args, InstanceKind::Cubic, &opt, g.format),
        Command::CheckSc2(args) => return check(args, InstanceKind::Quartic, &opt, g.format),
        Command::SigmaOpt { tensor } => {
            let t = load_tensor(tensor)?;
            let b = sigma_opt_bounds(&t, &opt)?;
            emit(
                g.format,
                format!("sigma_opt in [{:.12e}, {:.12e}]", b.lower, b.upper),
                json!({ "lower": b.lower, "upper": b.upper }),
            )?;
        }
        Command::VerifyAll { max_n, tol } => {
            let cfg = SuiteConfig {
                opt,
                max_n: *max_n,
                tol: *tol,
            };
            let outcomes = run_all(&cfg)?;
            let all = outcomes.iter().all(|o| o.passed);
            let text = outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("\n");
            let value = json!({
                "passed": all,
                "criteria": outcomes.iter().map(|o| json!({
                    "id": o.id, "name": o.name, "passed": o.passed, "detail": o.detail,
                })).collect::<Vec<_>>(),
            });
            emit(g.format, text, value)?;
            return Ok(if all { 0 } else { 1 });
        }
    }
    Ok(0)
}

fn ms_check(graph: &Graph, tol: f64, opt: &OptConfig, format: Format) -> Result<u8> {
    let omega = graph.clique_number();
    let r: OptReport64 = max_quadratic_simplex(graph, true, opt)?;
    let target = 1.0 - 1.0 / omega as f64;
    let gap = (2.0 * r.best_value - target).abs();
    let ok = gap <= tol;
    emit(
        format,
        format!(
            "omega {omega}\nsimplex_max {:.15}\n2*max {:.15}  1-1/omega {:.15}  gap {gap:.3e}  {}",
            r.best_value,
            2.0 * r.best_value,
            target,
            if ok { "ok" } else { "MISMATCH" }
        ),
        json!({ "omega": omega, "report": r.to_json(), "target": target, "gap": gap, "ok": ok }),
    )?;
    Ok(if ok { 0 } else { 1 })
}

fn nesterov_check(graph: &Graph, tol: f64, opt: &OptConfig, format: Format) -> Result<u8> {
    let omega = graph.clique_number();
    let target = 1.0 - 1.0 / omega as f64;
    let (best, witness) = if graph.m() == 0 {
        (0.0, 0.0)
    } else {
        let t = build_cubic_tensor(graph)?;
        let h = witness_from_clique(graph, &graph.max_clique())?;
        let at_witness: f64 = t.eval_form(&h)?;
        let plan = StartPlan {
            warm: vec![h.into_inner()],
            nonnegative: true,
        };
        let r: OptReport64 = selfconcord::optimize::max_form_sphere_with(&t, opt, &plan)?;
        (r.best_value, at_witness)
    };
    let gap = (13.5 * best * best - target).abs();
    let ok = gap <= tol;
    emit(
        format,
        format!(
            "omega {omega}\nsphere_max {best:.15}  analytic_witness {witness:.15}\n(27/2) max^2 {:.15}  1-1/omega {target:.15}  gap {gap:.3e}  {}",
            13.5 * best * best,
            if ok { "ok" } else { "MISMATCH" }
        ),
        json!({ "omega": omega, "max_value": best, "witness_value": witness, "target": target, "gap": gap, "ok": ok }),
    )?;
    Ok(if ok { 0 } else { 1 })
}

fn check(args: &CheckArgs, kind: InstanceKind, opt: &OptConfig, format: Format) -> Result<u8> {
    let param_name = kind.parameter_name();
    let param = match kind {
        InstanceKind::Cubic => {
            if args.param.tau.is_some() {
                bail!("check-sc takes --sigma; --tau belongs to check-sc2");
            }
            args.param.sigma.as_deref()
        }
        InstanceKind::Quartic => {
            if args.param.sigma.is_some() {
                bail!("check-sc2 takes --tau; --sigma belongs to check-sc");
            }
            args.param.tau.as_deref()
        }
    };
    let inst = match load_problem(&args.input)? {
        Problem::Instance(inst) => {
            if param.is_some() || args.k.is_some() || args.gamma_power.is_some() {
                bail!("an instance file already fixes k, {param_name} and the gamma power");
            }
            *inst
        }
        Problem::Graph(graph) => {
            let k = args.k.context("a graph input needs --k")?;
            let p = parse_param(param_name, param.unwrap_or(default_param(kind)))?;
            match kind {
                InstanceKind::Cubic => build_cubic_instance(&graph, k, &p)?,
                InstanceKind::Quartic => build_quartic_instance(&graph, k, &p)?,
            }
        }
        Problem::Tensor(t) => {
            let p = parse_param(param_name, param.with_context(|| format!("a tensor input needs --{param_name}"))?)?;
            let gp = args.gamma_power.as_deref().context("a tensor input needs --gamma-power")?;
            ConcordanceInstance::new(kind, t, p, parse_param("gamma-power", gp)?)?
        }
    };
    if inst.kind() != kind {
        bail!(
            "this is a {} instance; use {}",
            if inst.kind() == InstanceKind::Cubic { "cubic" } else { "quartic" },
            if inst.kind() == InstanceKind::Cubic { "check-sc" } else { "check-sc2" }
        );
    }
    let opts = CheckOptions::with_opt(*opt);
    let verdict: Verdict = match kind {
        InstanceKind::Cubic => check_sc(&inst, &opts, args.mode.into())?,
        InstanceKind::Quartic => check_sc2(&inst, &opts, args.mode.into())?,
    };
    match format {
        Format::Text => println!("{}q {}", verdict.to_text(), format_rational(inst.q())),
        Format::Json => println!("{}", serde_json::to_string_pretty(&verdict.to_json())?),
    }
    Ok(verdict.status.exit_code() as u8)
}

fn default_param(kind: InstanceKind) -> &'static str {
    match kind {
        InstanceKind::Cubic => "1/2",
        InstanceKind::Quartic => "1",
    }
}
