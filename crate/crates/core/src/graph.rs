//! Undirected simple graphs with exact clique and stability oracles.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Undirected simple graph on vertices `0..n`.
///
/// Edges are stored as `(i, j)` with `i < j` in strictly lexicographic order;
/// that order is the edge indexing used by the cubic reduction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    /// Builds a graph, collapsing duplicate and reversed edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a + 1));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &set {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        Ok(Graph {
            n,
            edges: set.into_iter().collect(),
            adj,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::new(n, edges).expect("complete graph")
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Lexicographically ordered edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i][j]
    }

    /// Position of `{i, j}` in the edge order.
    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i.min(j), i.max(j))).ok()
    }

    pub fn complement(&self) -> Graph {
        let edges = (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .filter(|&(i, j)| !self.adj[i][j]);
        Graph::new(self.n, edges.collect::<Vec<_>>()).expect("complement")
    }

    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().all(|&v| v < self.n)
            && vertices
                .iter()
                .enumerate()
                .all(|(a, &u)| vertices[a + 1..].iter().all(|&v| u != v && self.adj[u][v]))
    }

    /// A maximum clique, sorted ascending.
    pub fn max_clique(&self) -> Vec<usize> {
        let mut search = CliqueSearch {
            adj: &self.adj,
            best: Vec::new(),
            current: Vec::new(),
        };
        let all: Vec<usize> = (0..self.n).collect();
        search.expand(all);
        let mut best = search.best;
        best.sort_unstable();
        best
    }

    pub fn clique_number(&self) -> usize {
        self.max_clique().len()
    }

    /// A maximum stable set, sorted ascending.
    pub fn max_stable_set(&self) -> Vec<usize> {
        self.complement().max_clique()
    }

    pub fn stability_number(&self) -> usize {
        self.complement().clique_number()
    }

    /// The CLIQUE decision problem: does a clique of size `k` exist?
    pub fn has_clique(&self, k: usize) -> bool {
        self.clique_number() >= k
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n, self.m());
        for &(i, j) in &self.edges {
            out.push_str(&format!("e {} {}\n", i + 1, j + 1));
        }
        out
    }
}

/// Branch and bound with the greedy-colouring bound.
struct CliqueSearch<'a> {
    adj: &'a [Vec<bool>],
    best: Vec<usize>,
    current: Vec<usize>,
}

impl CliqueSearch<'_> {
    /// Greedy sequential colouring; returns vertices in nondecreasing colour
    /// order along with the colour (1-based) of each.
    fn colour_sort(&self, candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in candidates {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.adj[u][v]))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut order = Vec::with_capacity(candidates.len());
        let mut colours = Vec::with_capacity(candidates.len());
        for (c, class) in classes.into_iter().enumerate() {
            for v in class {
                order.push(v);
                colours.push(c + 1);
            }
        }
        (order, colours)
    }

    fn expand(&mut self, candidates: Vec<usize>) {
        if candidates.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return;
        }
        let (mut order, mut colours) = self.colour_sort(&candidates);
        while let (Some(&v), Some(&c)) = (order.last(), colours.last()) {
            if self.current.len() + c <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next: Vec<usize> = order.iter().copied().filter(|&u| self.adj[v][u]).collect();
            self.expand(next);
            self.current.pop();
            order.pop();
            colours.pop();
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_vertex(tok: Option<&str>, line: usize, n: usize) -> Result<usize> {
    let v: usize = tok
        .ok_or_else(|| parse_err(line, "missing vertex"))?
        .parse()
        .map_err(|_| parse_err(line, "bad vertex index"))?;
    if v == 0 || v > n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    Ok(v - 1)
}

/// Parses the DIMACS `p edge n m` / `e i j` subset. Vertices are 1-based.
pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n = None;
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let l = raw.trim();
        let mut toks = l.split_whitespace();
        match toks.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(parse_err(line, "duplicate problem line"));
                }
                match toks.next() {
                    Some("edge") | Some("col") => {}
                    _ => return Err(parse_err(line, "expected `p edge <n> <m>`")),
                }
                let count: usize = toks
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| parse_err(line, "bad vertex count"))?;
                toks.next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(line, "bad edge count"))?;
                n = Some(count);
            }
            Some("e") => {
                let n = n.ok_or_else(|| parse_err(line, "edge before problem line"))?;
                let i = parse_vertex(toks.next(), line, n)?;
                let j = parse_vertex(toks.next(), line, n)?;
                if i == j {
                    return Err(Error::SelfLoop(i + 1));
                }
                edges.push((i, j));
            }
            Some(other) => return Err(parse_err(line, format!("unknown record `{other}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(1, "missing `p edge` header"))?;
    Graph::new(n, edges)
}

/// Parses a plain edge list: `n m` on the first line, then `m` lines `i j`.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    let mut field = |what: &str| -> Result<usize> {
        toks.next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| parse_err(hline, format!("bad {what} in header `n m`")))
    };
    let n = field("vertex count")?;
    let m = field("edge count")?;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        let mut toks = l.split_whitespace();
        let i = parse_vertex(toks.next(), line, n)?;
        let j = parse_vertex(toks.next(), line, n)?;
        if toks.next().is_some() {
            return Err(parse_err(line, "trailing tokens"));
        }
        if i == j {
            return Err(Error::SelfLoop(i + 1));
        }
        edges.push((i, j));
    }
    if edges.len() != m {
        return Err(parse_err(hline, format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::new(n, edges)
}

/// Auto-detects DIMACS (first record starts with `p` or `c`) or edge list.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first.and_then(|l| l.split_whitespace().next()) {
        Some("p") | Some("c") | Some("e") => parse_dimacs(text),
        _ => parse_edge_list(text),
    }
}

pub const MAX_ENUMERATION_VERTICES: usize = 6;

/// Every labelled graph on `n` vertices with at least one edge, each once.
///
/// Bit `b` of the edge mask selects the `b`-th pair in lexicographic order.
pub fn enumerate_graphs(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > MAX_ENUMERATION_VERTICES {
        return Err(Error::TooLarge(format!(
            "graph enumeration supports n <= {MAX_ENUMERATION_VERTICES}, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let total: u64 = 1 << pairs.len();
    Ok((1..total).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &e)| e);
        Graph::new(n, edges).expect("enumerated graph")
    }))
}
