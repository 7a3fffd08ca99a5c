//! Resolving command-line inputs: files, stdin, inline graphs and named families.

use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context, Result};
use selfconcord::format::parse_tensor;
use selfconcord::reduction::InstanceJson;
use selfconcord::{parse_graph, ConcordanceInstance, Graph, SymTensor};

/// Contents of `arg`: `-` is stdin, an existing path is read, anything else is
/// taken literally.
pub fn read_source(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    if Path::new(arg).is_file() {
        return fs::read_to_string(arg).with_context(|| format!("reading {arg}"));
    }
    Ok(arg.to_string())
}

/// `K5`, `C6`, `E4` (no edges), or `n:i-j,i-j,...` with 1-based vertices.
fn inline_graph(s: &str) -> Option<Result<Graph>> {
    let s = s.trim();
    if let Some((n, edges)) = s.split_once(':') {
        let n: usize = n.trim().parse().ok()?;
        let mut list = Vec::new();
        for e in edges.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (i, j) = e.split_once('-')?;
            let (i, j): (usize, usize) = (i.trim().parse().ok()?, j.trim().parse().ok()?);
            if i == 0 || j == 0 {
                return Some(Err(anyhow::anyhow!("vertices are 1-based, got {e}")));
            }
            list.push((i - 1, j - 1));
        }
        return Some(Graph::new(n, list).map_err(Into::into));
    }
    let (family, n) = s.split_at(1);
    let n: usize = n.parse().ok()?;
    match family {
        "K" => Some(Ok(Graph::complete(n))),
        "C" if n >= 3 => Some(Ok(Graph::cycle(n))),
        "E" => Some(Graph::new(n, []).map_err(Into::into)),
        _ => None,
    }
}

pub fn load_graph(arg: &str) -> Result<Graph> {
    if !Path::new(arg).is_file() && arg != "-" {
        if let Some(g) = inline_graph(arg) {
            return g;
        }
    }
    let text = read_source(arg)?;
    parse_graph(&text).with_context(|| format!("parsing graph from {}", describe(arg)))
}

pub fn load_tensor(arg: &str) -> Result<SymTensor> {
    let text = read_source(arg)?;
    parse_tensor(&text).with_context(|| format!("parsing tensor from {}", describe(arg)))
}

/// What a `check-sc` style argument turned out to be.
pub enum Problem {
    Instance(Box<ConcordanceInstance>),
    Tensor(SymTensor),
    Graph(Graph),
}

pub fn load_problem(arg: &str) -> Result<Problem> {
    if !Path::new(arg).is_file() && arg != "-" {
        if let Some(g) = inline_graph(arg) {
            return Ok(Problem::Graph(g?));
        }
    }
    let text = read_source(arg)?;
    let body = text.trim_start();
    if body.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(body).context("parsing JSON input")?;
        if value.get("kind").is_some() {
            let j: InstanceJson = serde_json::from_value(value).context("parsing instance JSON")?;
            return Ok(Problem::Instance(Box::new(ConcordanceInstance::from_json(&j)?)));
        }
        return Ok(Problem::Tensor(parse_tensor(body)?));
    }
    if body.starts_with(selfconcord::format::TEXT_MAGIC) {
        return Ok(Problem::Tensor(parse_tensor(body)?));
    }
    match parse_graph(body) {
        Ok(g) => Ok(Problem::Graph(g)),
        Err(e) => bail!("{} is not an instance, tensor or graph: {e}", describe(arg)),
    }
}

fn describe(arg: &str) -> String {
    if arg == "-" {
        "stdin".into()
    } else if Path::new(arg).is_file() {
        arg.into()
    } else {
        "inline argument".into()
    }
}
