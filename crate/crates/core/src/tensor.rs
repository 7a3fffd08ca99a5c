//! Symmetric hypermatrices of order 2, 3 and 4 in orbit-canonical sparse storage.
//!
//! Each stored entry is a nondecreasing multi-index together with the common
//! value shared by every permutation of that index. Indices are 0-based in
//! this API; the text and JSON formats in [`crate::format`] are 1-based.

use std::collections::BTreeMap;
use std::ops::{Deref, DerefMut};

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{Float, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_f64, Rational, Scalar};

/// A point or direction in R^n (or Q^n).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<T>(Vec<T>);

impl<T> Vector<T> {
    pub fn new(components: Vec<T>) -> Self {
        Vector(components)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }
}

impl<T: Float> Vector<T> {
    pub fn zeros(dim: usize) -> Self {
        Vector(vec![T::zero(); dim])
    }

    pub fn basis(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[axis] = T::one();
        v
    }

    pub fn norm(&self) -> T {
        norm(&self.0)
    }

    pub fn dot(&self, other: &[T]) -> T {
        dot(&self.0, other)
    }
}

impl<T> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Vector(v)
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];
    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> DerefMut for Vector<T> {
    fn deref_mut(&mut self) -> &mut [T] {
        &mut self.0
    }
}

pub(crate) fn dot<T: Float>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

pub(crate) fn norm<T: Float>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    index: Vec<usize>,
    value: Rational,
    /// Number of distinct permutations of `index`.
    multiplicity: u64,
    /// `value * multiplicity`, the coefficient of the monomial in the form.
    weight: Rational,
    weight_f64: f64,
}

/// Symmetric d-hypermatrix, d in {2, 3, 4}, with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    order: usize,
    dim: usize,
    entries: Vec<Entry>,
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// d! / prod(c_i!) over the run lengths of a sorted multi-index.
fn orbit_size(sorted: &[usize]) -> u64 {
    let mut denom = 1;
    let mut run = 1;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    denom *= factorial(run);
    factorial(sorted.len()) / denom
}

impl SymTensor {
    /// Builds a tensor from raw `(index, value)` records. Indices may be given
    /// in any order; records that sort to the same canonical index are summed.
    pub fn from_entries<I>(order: usize, dim: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        if !(2..=4).contains(&order) {
            return Err(Error::UnsupportedOrder(order));
        }
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (mut index, value) in raw {
            if index.len() != order {
                return Err(Error::ArityMismatch {
                    expected: order,
                    found: index.len(),
                });
            }
            if let Some(&bad) = index.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim });
            }
            index.sort_unstable();
            *acc.entry(index).or_insert_with(Rational::zero) += value;
        }
        let entries = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(index, value)| {
                let multiplicity = orbit_size(&index);
                let weight = &value * Rational::from_integer(multiplicity.into());
                let weight_f64 = rational_to_f64(&weight);
                Entry {
                    index,
                    value,
                    multiplicity,
                    weight,
                    weight_f64,
                }
            })
            .collect();
        Ok(SymTensor {
            order,
            dim,
            entries,
        })
    }

    pub fn zeros(order: usize, dim: usize) -> Result<Self> {
        Self::from_entries(order, dim, std::iter::empty())
    }

    /// The n x n identity as an order-2 tensor.
    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_entries(
            2,
            dim,
            (0..dim).map(|i| (vec![i, i], Rational::from_integer(1.into()))),
        )
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored canonical entries (nonzero orbits).
    pub fn num_entries(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Rational)> + '_ {
        self.entries.iter().map(|e| (e.index.as_slice(), &e.value))
    }

    /// Full-hypermatrix entry at an arbitrary (unsorted) index.
    pub fn get(&self, index: &[usize]) -> Rational {
        let mut key = index.to_vec();
        key.sort_unstable();
        match self.entries.binary_search_by(|e| e.index.as_slice().cmp(&key)) {
            Ok(pos) => self.entries[pos].value.clone(),
            Err(_) => Rational::zero(),
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }

    /// A(h, ..., h) = sum over all n^d index tuples of a_{i1..id} h_i1 ... h_id.
    pub fn eval_form<T: Scalar>(&self, h: &[T]) -> Result<T> {
        self.check_dim(h.len())?;
        Ok(self.eval_unchecked(h))
    }

    pub(crate) fn eval_unchecked<T: Scalar>(&self, h: &[T]) -> T {
        self.entries.iter().fold(T::zero(), |acc, e| {
            let term = e
                .index
                .iter()
                .fold(T::from_coefficient(&e.weight, e.weight_f64), |t, &i| {
                    t * h[i].clone()
                });
            acc + term
        })
    }

    /// Gradient of h -> A(h, ..., h), which is d * A(h, ..., h, .).
    pub fn grad_form<T: Scalar>(&self, h: &[T]) -> Result<Vector<T>> {
        self.check_dim(h.len())?;
        let mut g = vec![T::zero(); self.dim];
        self.grad_into(h, &mut g);
        Ok(Vector(g))
    }

    pub(crate) fn grad_into<T: Scalar>(&self, h: &[T], g: &mut [T]) {
        for gi in g.iter_mut() {
            *gi = T::zero();
        }
        for e in &self.entries {
            let w = T::from_coefficient(&e.weight, e.weight_f64);
            for p in 0..e.index.len() {
                let mut term = w.clone();
                for (q, &i) in e.index.iter().enumerate() {
                    if q != p {
                        term = term * h[i].clone();
                    }
                }
                let slot = &mut g[e.index[p]];
                *slot = slot.clone() + term;
            }
        }
    }

    /// Exact squared Frobenius norm over the full hypermatrix.
    pub fn frobenius_squared(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, e| {
            acc + &e.value * &e.value * Rational::from_integer(e.multiplicity.into())
        })
    }

    pub fn frobenius(&self) -> f64 {
        rational_to_f64(&self.frobenius_squared()).sqrt()
    }

    /// Dense row-major copy of the full hypermatrix in `f64`.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut dense = vec![0.0; n.pow(self.order as u32)];
        for e in &self.entries {
            let v = e.value.to_f64().unwrap_or(f64::NAN);
            for_each_permutation(&e.index, |perm| {
                let flat = perm.iter().fold(0, |acc, &i| acc * n + i);
                dense[flat] = v;
            });
        }
        dense
    }

    /// Sound upper bound on max over unit h of |A(h, ..., h)|.
    ///
    /// Minimum of the Frobenius norm and the largest singular value of the
    /// matrix flattenings. By symmetry all d mode-unfoldings coincide, so one
    /// Gram matrix serves for every mode. Order 4 additionally uses the square
    /// (n^2 x n^2) flattening.
    pub fn spectral_upper_bound(&self) -> f64 {
        let frob = self.frobenius();
        if self.is_zero() {
            return 0.0;
        }
        let n = self.dim;
        let cells = n.checked_pow(self.order as u32).unwrap_or(usize::MAX);
        if cells > MAX_DENSE_CELLS {
            return frob;
        }
        let dense = self.to_dense();
        let cols = cells / n;
        let unfolding = DMatrix::from_row_slice(n, cols, &dense);
        let gram = &unfolding * unfolding.transpose();
        let mode = max_abs_eigenvalue(gram).max(0.0).sqrt();
        let mut bound = frob.min(mode);
        if self.order == 4 && n * n <= MAX_SQUARE_FLATTENING {
            let square = DMatrix::from_row_slice(n * n, n * n, &dense);
            bound = bound.min(max_abs_eigenvalue(square));
        }
        bound
    }
}

const MAX_DENSE_CELLS: usize = 1 << 22;
const MAX_SQUARE_FLATTENING: usize = 1024;

fn max_abs_eigenvalue(m: DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(m);
    eig.eigenvalues.iter().fold(0.0_f64, |acc, &l| acc.max(l.abs()))
}

/// Visits every distinct permutation of a sorted multi-index.
fn for_each_permutation(sorted: &[usize], mut f: impl FnMut(&[usize])) {
    let mut perm = sorted.to_vec();
    loop {
        f(&perm);
        // next lexicographic permutation
        let Some(i) = (0..perm.len().saturating_sub(1))
            .rev()
            .find(|&i| perm[i] < perm[i + 1])
        else {
            return;
        };
        let j = (i + 1..perm.len()).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}
