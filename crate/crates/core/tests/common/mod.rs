#![allow(dead_code)]

use proptest::prelude::*;
use selfconcord::scalar::ratio;
use selfconcord::{Graph, Rational, SymTensor};

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| ratio(p, q))
}

pub fn tensor_with(order: usize, dim: usize) -> impl Strategy<Value = SymTensor> {
    prop::collection::vec((prop::collection::vec(0..dim, order), small_rational()), 0..=6)
        .prop_map(move |entries| SymTensor::from_entries(order, dim, entries).unwrap())
}

/// Orders 2 to 4, dimensions 1 to `max_dim`.
pub fn tensor(max_dim: usize) -> impl Strategy<Value = SymTensor> {
    (2usize..=4, 1..=max_dim).prop_flat_map(|(order, dim)| tensor_with(order, dim))
}

pub fn rational_point(dim: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), dim)
}

pub fn float_point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, dim)
}

pub fn graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        prop::collection::vec(any::<bool>(), pairs.len()).prop_map(move |mask| {
            let edges = pairs.iter().zip(mask).filter(|(_, keep)| *keep).map(|(e, _)| *e);
            Graph::new(n, edges).unwrap()
        })
    })
}

/// Graph with at least one edge.
pub fn graph_with_edge(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    graph(min_n.max(2), max_n).prop_filter("needs an edge", |g| g.m() > 0)
}

/// Clique number by scanning every vertex subset.
pub fn brute_omega(g: &Graph) -> usize {
    let n = g.n();
    (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|i| mask >> i & 1 == 0 || (i + 1..n).all(|j| mask >> j & 1 == 0 || g.has_edge(i, j)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Form value by summing the full hypermatrix in exact arithmetic.
pub fn brute_form(t: &SymTensor, h: &[Rational]) -> Rational {
    let (n, d) = (t.dim(), t.order());
    let mut total = ratio(0, 1);
    for flat in 0..n.pow(d as u32) {
        let mut rest = flat;
        let mut term = ratio(1, 1);
        let mut idx = Vec::with_capacity(d);
        for _ in 0..d {
            idx.push(rest % n);
            term *= &h[rest % n];
            rest /= n;
        }
        total += t.get(&idx) * term;
    }
    total
}

pub fn permute_tensor(t: &SymTensor, perm: &[usize]) -> SymTensor {
    let entries: Vec<(Vec<usize>, Rational)> = t
        .entries()
        .map(|(idx, v)| (idx.iter().map(|&i| perm[i]).collect(), v.clone()))
        .collect();
    SymTensor::from_entries(t.order(), t.dim(), entries).unwrap()
}
